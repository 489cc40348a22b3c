//! Grid point sets, `(p,q)`-sum-freeness verification and forbidden-triple
//! enumeration.
//!
//! Membership is a dense bit-per-cell layout keyed by `(x-1)*n + (y-1)`
//! (just `x-1` in one dimension), so queries are constant time and the
//! solver can copy sets cheaply.

use crate::error::{Error, Result};
use num_rational::Ratio;
use std::fmt;

/// Grid dimension: `[n]` or `[n]^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dim {
    One,
    Two,
}

impl Dim {
    pub fn as_u8(self) -> u8 {
        match self {
            Dim::One => 1,
            Dim::Two => 2,
        }
    }

    pub fn from_u8(d: u8) -> Option<Dim> {
        match d {
            1 => Some(Dim::One),
            2 => Some(Dim::Two),
            _ => None,
        }
    }
}

/// A lattice point. One-dimensional points carry `y = 0` by convention and
/// render as a bare coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub fn one(x: i64) -> Point {
        Point { x, y: 0 }
    }

    pub fn two(x: i64, y: i64) -> Point {
        Point { x, y }
    }

    pub fn coord_sum(&self) -> i64 {
        self.x + self.y
    }

    /// Transpose `(x,y) -> (y,x)`; identity in one dimension.
    pub fn transpose(&self, dim: Dim) -> Point {
        match dim {
            Dim::One => *self,
            Dim::Two => Point { x: self.y, y: self.x },
        }
    }

    fn in_bounds(&self, n: i64, dim: Dim) -> bool {
        match dim {
            Dim::One => 1 <= self.x && self.x <= n && self.y == 0,
            Dim::Two => 1 <= self.x && self.x <= n && 1 <= self.y && self.y <= n,
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y == 0 {
            write!(f, "{}", self.x)
        } else {
            write!(f, "({},{})", self.x, self.y)
        }
    }
}

/// Positive integer coefficients `(p,q)` of the forbidden equation
/// `p*x + q*y = z`. `(1,1)` is the classical sum-free case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SchurParams {
    pub p: i64,
    pub q: i64,
}

impl SchurParams {
    pub fn new(p: i64, q: i64) -> Result<SchurParams> {
        if p < 1 || q < 1 {
            return Err(Error::InvalidInput(format!(
                "coefficients must be positive integers, got (p,q)=({p},{q})"
            )));
        }
        Ok(SchurParams { p, q })
    }

    pub fn classical() -> SchurParams {
        SchurParams { p: 1, q: 1 }
    }

    pub fn symmetric(&self) -> bool {
        self.p == self.q
    }
}

impl fmt::Display for SchurParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

/// A witness that a set is not `(p,q)`-sum-free: members `x, y, z` with
/// `p*x + q*y = z` componentwise (`x = y` permitted).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Violation {
    pub x: Point,
    pub y: Point,
    pub z: Point,
    pub params: SchurParams,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}*{} + {}*{} = {}",
            self.params.p, self.x, self.params.q, self.y, self.z
        )
    }
}

/// A finite subset of `[n]` or `[n]^2` with dense membership storage.
///
/// Immutable by convention once built; the solver mutates only its own
/// private copies via [`GridSet::insert`] / [`GridSet::remove`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridSet {
    n: i64,
    dim: Dim,
    bits: Vec<u64>,
    len: usize,
}

impl GridSet {
    pub fn empty(n: i64, dim: Dim) -> GridSet {
        assert!(n >= 1, "grid side length must be positive");
        let cells = match dim {
            Dim::One => n as usize,
            Dim::Two => (n * n) as usize,
        };
        GridSet {
            n,
            dim,
            bits: vec![0; cells.div_ceil(64)],
            len: 0,
        }
    }

    /// Build a set from a point list. Duplicates are allowed and collapse;
    /// an out-of-bounds point is an input error naming the point.
    pub fn from_points(n: i64, dim: Dim, points: &[Point]) -> Result<GridSet> {
        let mut s = GridSet::empty(n, dim);
        for &p in points {
            s.insert(p)?;
        }
        Ok(s)
    }

    /// Build from a membership predicate over the whole grid.
    pub fn from_pred(n: i64, dim: Dim, mut pred: impl FnMut(Point) -> bool) -> GridSet {
        let mut s = GridSet::empty(n, dim);
        match dim {
            Dim::One => {
                for x in 1..=n {
                    let p = Point::one(x);
                    if pred(p) {
                        s.insert(p).unwrap();
                    }
                }
            }
            Dim::Two => {
                for x in 1..=n {
                    for y in 1..=n {
                        let p = Point::two(x, y);
                        if pred(p) {
                            s.insert(p).unwrap();
                        }
                    }
                }
            }
        }
        s
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    fn index(&self, p: Point) -> usize {
        match self.dim {
            Dim::One => (p.x - 1) as usize,
            Dim::Two => ((p.x - 1) * self.n + (p.y - 1)) as usize,
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        if !p.in_bounds(self.n, self.dim) {
            return false;
        }
        let i = self.index(p);
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    /// Insert a point, returning whether it was new.
    pub fn insert(&mut self, p: Point) -> Result<bool> {
        if !p.in_bounds(self.n, self.dim) {
            return Err(Error::OutOfBounds {
                point: p,
                n: self.n,
                dim: self.dim.as_u8(),
            });
        }
        let i = self.index(p);
        let word = &mut self.bits[i / 64];
        let mask = 1u64 << (i % 64);
        if *word & mask == 0 {
            *word |= mask;
            self.len += 1;
            Ok(true)
        } else {
            Ok(false)
        }
    }

    /// Remove a point, returning whether it was present.
    pub fn remove(&mut self, p: Point) -> bool {
        if !p.in_bounds(self.n, self.dim) {
            return false;
        }
        let i = self.index(p);
        let word = &mut self.bits[i / 64];
        let mask = 1u64 << (i % 64);
        if *word & mask != 0 {
            *word &= !mask;
            self.len -= 1;
            true
        } else {
            false
        }
    }

    pub fn is_subset_of(&self, other: &GridSet) -> bool {
        self.n == other.n
            && self.dim == other.dim
            && self
                .bits
                .iter()
                .zip(&other.bits)
                .all(|(a, b)| a & !b == 0)
    }

    /// Members in lexicographic order (by `x`, then `y`).
    pub fn iter(&self) -> impl Iterator<Item = Point> + '_ {
        let n = self.n;
        let dim = self.dim;
        self.bits.iter().enumerate().flat_map(move |(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let b = word.trailing_zeros() as usize;
                word &= word - 1;
                let i = (w * 64 + b) as i64;
                Some(match dim {
                    Dim::One => Point::one(i + 1),
                    Dim::Two => Point::two(i / n + 1, i % n + 1),
                })
            })
        })
    }

    /// `|S| / n^dim` as an exact rational.
    pub fn density(&self) -> Ratio<i64> {
        let cells = match self.dim {
            Dim::One => self.n,
            Dim::Two => self.n * self.n,
        };
        Ratio::new(self.len as i64, cells)
    }

    /// Occupied column range per row (`x` indexes rows); `None` for an
    /// empty row. One-dimensional sets are a single row 0.
    fn row_spans(&self) -> Vec<Option<(i64, i64)>> {
        match self.dim {
            Dim::One => {
                let mut lo = None;
                let mut hi = None;
                for p in self.iter() {
                    if lo.is_none() {
                        lo = Some(p.x);
                    }
                    hi = Some(p.x);
                }
                vec![lo.zip(hi)]
            }
            Dim::Two => {
                let mut spans = vec![None; self.n as usize + 1];
                for p in self.iter() {
                    let e = &mut spans[p.x as usize];
                    *e = match *e {
                        None => Some((p.y, p.y)),
                        Some((lo, _)) => Some((lo, p.y)),
                    };
                }
                spans
            }
        }
    }

    /// Whether the set has no triple `p*x + q*y = z` with all three points
    /// members (`x = y` allowed).
    pub fn is_sum_free(&self, params: SchurParams) -> bool {
        self.first_violation(params).is_none()
    }

    /// First violation in lexicographic order on `(x, y)`, or `None` when
    /// the set is `(p,q)`-sum-free. For `p = q`, unordered pairs are scanned
    /// once with `x <= y`.
    pub fn first_violation(&self, params: SchurParams) -> Option<Violation> {
        let v = match self.dim {
            Dim::One => self.first_violation_1d(params),
            Dim::Two => self.first_violation_2d(params),
        };
        if let Some(v) = v {
            // z strictly exceeds x and y in every coordinate on positive grids.
            debug_assert!(v.z != v.x && v.z != v.y);
        }
        v
    }

    fn first_violation_1d(&self, params: SchurParams) -> Option<Violation> {
        let (n, p, q) = (self.n, params.p, params.q);
        for xp in self.iter() {
            let x = xp.x;
            if p * x + q > n {
                break;
            }
            let y_lo = if params.symmetric() { x } else { 1 };
            let y_hi = (n - p * x) / q;
            for y in y_lo..=y_hi {
                if self.contains(Point::one(y)) && self.contains(Point::one(p * x + q * y)) {
                    return Some(Violation {
                        x: xp,
                        y: Point::one(y),
                        z: Point::one(p * x + q * y),
                        params,
                    });
                }
            }
        }
        None
    }

    fn first_violation_2d(&self, params: SchurParams) -> Option<Violation> {
        let (n, p, q) = (self.n, params.p, params.q);
        let spans = self.row_spans();
        let span = |r: i64| -> Option<(i64, i64)> {
            if (1..=n).contains(&r) {
                spans[r as usize]
            } else {
                None
            }
        };
        for xp in self.iter() {
            if p * xp.x + q > n {
                break;
            }
            if p * xp.y + q > n {
                continue;
            }
            let yx_lo = if params.symmetric() { xp.x } else { 1 };
            let yx_hi = (n - p * xp.x) / q;
            for yx in yx_lo..=yx_hi {
                let Some((y_row_lo, y_row_hi)) = span(yx) else {
                    continue;
                };
                let zx = p * xp.x + q * yx;
                let Some((z_row_lo, z_row_hi)) = span(zx) else {
                    continue;
                };
                // y.y must be a member of row yx, map into a member of row zx,
                // and keep z within the grid.
                let mut lo =
                    y_row_lo.max(num_integer::Integer::div_ceil(&(z_row_lo - p * xp.y), &q));
                let hi = y_row_hi
                    .min(num_integer::Integer::div_floor(&(z_row_hi - p * xp.y), &q))
                    .min((n - p * xp.y) / q);
                if params.symmetric() && yx == xp.x {
                    lo = lo.max(xp.y);
                }
                if lo < 1 {
                    lo = 1;
                }
                while lo <= hi {
                    let yp = Point::two(yx, lo);
                    if self.contains(yp) {
                        let zp = Point::two(zx, p * xp.y + q * lo);
                        if self.contains(zp) {
                            return Some(Violation {
                                x: xp,
                                y: yp,
                                z: zp,
                                params,
                            });
                        }
                    }
                    lo += 1;
                }
            }
        }
        None
    }
}

/// All forbidden triples of the grid (not of a particular set): every
/// `(x, y, z)` with all three points in bounds and `p*x + q*y = z`
/// componentwise, in lexicographic order on `(x, y)`. For `p = q` each
/// unordered pair `{x,y}` is listed once with `x <= y`; for `p != q`
/// ordered pairs are distinct since `p*x + q*y != q*x + p*y` in general.
pub fn enumerate_triples(n: i64, dim: Dim, params: SchurParams) -> Vec<(Point, Point, Point)> {
    let (p, q) = (params.p, params.q);
    let mut out = Vec::new();
    let points: Vec<Point> = match dim {
        Dim::One => (1..=n).map(Point::one).collect(),
        Dim::Two => (1..=n)
            .flat_map(|x| (1..=n).map(move |y| Point::two(x, y)))
            .collect(),
    };
    for (i, &x) in points.iter().enumerate() {
        let start = if params.symmetric() { i } else { 0 };
        for &y in &points[start..] {
            let z = Point {
                x: p * x.x + q * y.x,
                y: p * x.y + q * y.y,
            };
            if z.in_bounds(n, dim) {
                out.push((x, y, z));
            }
        }
    }
    out
}
