//! Plain-text point-list format shared by the library and the CLI.
//!
//! First line `n=<n> dim=<d>`, then one `x y` pair (or bare `x` in one
//! dimension) per line, ASCII, newline-terminated. Unknown lines are parse
//! errors carrying the line number.

use crate::error::{Error, Result};
use crate::grid::{Dim, GridSet, Point};
use std::fmt::Write as _;

pub fn to_string(s: &GridSet) -> String {
    let mut out = String::new();
    writeln!(out, "n={} dim={}", s.n(), s.dim().as_u8()).unwrap();
    for p in s.iter() {
        match s.dim() {
            Dim::One => writeln!(out, "{}", p.x).unwrap(),
            Dim::Two => writeln!(out, "{} {}", p.x, p.y).unwrap(),
        }
    }
    out
}

pub fn parse(text: &str) -> Result<GridSet> {
    let mut lines = text.lines().enumerate();
    let (header_no, header) = lines
        .next()
        .ok_or_else(|| Error::Parse {
            line: 1,
            msg: "empty input, expected header `n=<n> dim=<d>`".into(),
        })?;
    let (n, dim) = parse_header(header).map_err(|msg| Error::Parse {
        line: header_no + 1,
        msg,
    })?;
    let mut points = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let point = match (dim, fields.as_slice()) {
            (Dim::One, [x]) => Point::one(parse_coord(x, line_no)?),
            (Dim::Two, [x, y]) => Point::two(parse_coord(x, line_no)?, parse_coord(y, line_no)?),
            _ => {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!(
                        "expected {} coordinate(s), got `{line}`",
                        dim.as_u8()
                    ),
                })
            }
        };
        points.push(point);
    }
    GridSet::from_points(n, dim, &points)
}

fn parse_header(header: &str) -> std::result::Result<(i64, Dim), String> {
    let fields: Vec<&str> = header.split_whitespace().collect();
    let [n_field, dim_field] = fields.as_slice() else {
        return Err(format!("expected header `n=<n> dim=<d>`, got `{header}`"));
    };
    let n = n_field
        .strip_prefix("n=")
        .and_then(|v| v.parse::<i64>().ok())
        .filter(|&n| n >= 1)
        .ok_or_else(|| format!("bad n field `{n_field}`"))?;
    let dim = dim_field
        .strip_prefix("dim=")
        .and_then(|v| v.parse::<u8>().ok())
        .and_then(Dim::from_u8)
        .ok_or_else(|| format!("bad dim field `{dim_field}`"))?;
    Ok((n, dim))
}

fn parse_coord(field: &str, line_no: usize) -> Result<i64> {
    field.parse::<i64>().map_err(|_| Error::Parse {
        line: line_no,
        msg: format!("bad coordinate `{field}`"),
    })
}
