//! Exact maximum sum-free set computation: a brute-force oracle, a
//! branch-and-bound search with construction-seeded incumbents, optima
//! enumeration, and a seeded random maximal-set generator.

use crate::constructions::{cameron_optimal, one_d_extremal, pq_stripe, OneDimVariant};
use crate::error::{Error, Result};
use crate::grid::{enumerate_triples, Dim, GridSet, Point, SchurParams};
use crate::Rational;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};

/// Outcome of an exact (or time-limited) search.
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub optimum: usize,
    pub witness: GridSet,
    pub nodes: u64,
    /// `true` means no larger set exists; `false` means the time limit
    /// expired and `optimum` is only a lower bound (the incumbent size).
    pub proven: bool,
    pub bound_trace: Option<BoundTrace>,
    /// Present only when the time limit expired: the open frontier needed
    /// to resume the search.
    pub checkpoint: Option<Checkpoint>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BoundTrace {
    pub pruned_by_bound: u64,
    pub pruned_by_conflict: u64,
    pub pruned_by_symmetry: u64,
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub time_limit: Option<Duration>,
    pub threads: usize,
    /// Start from the best known construction instead of the empty set.
    pub seed_incumbent: bool,
}

impl Default for SolveOptions {
    fn default() -> SolveOptions {
        SolveOptions {
            time_limit: None,
            threads: 1,
            seed_incumbent: true,
        }
    }
}

const BRUTE_FORCE_MAX_CELLS_2D: usize = 26;
const BRUTE_FORCE_MAX_CELLS_1D: usize = 30;

fn brute_force_cells(n: i64, dim: Dim) -> Result<usize> {
    let (cells, max_cells) = match dim {
        Dim::One => (n as usize, BRUTE_FORCE_MAX_CELLS_1D),
        Dim::Two => ((n * n) as usize, BRUTE_FORCE_MAX_CELLS_2D),
    };
    if cells > max_cells {
        return Err(Error::TooLarge { cells, max_cells });
    }
    Ok(cells)
}

fn lex_cells(n: i64, dim: Dim) -> Vec<Point> {
    match dim {
        Dim::One => (1..=n).map(Point::one).collect(),
        Dim::Two => (1..=n)
            .flat_map(|x| (1..=n).map(move |y| Point::two(x, y)))
            .collect(),
    }
}

/// Exhaustive include-first backtracking in lexicographic cell order.
///
/// In lexicographic order the `z` of every triple comes after both `x` and
/// `y` (its first coordinate is strictly larger), so a violation is fully
/// detectable at `z`-inclusion time from a per-cell list of `(x,y)` pairs.
/// The first maximum found has the lexicographically greatest inclusion
/// vector, i.e. the witness is the lexicographically smallest maximum set.
pub fn brute_force_max(n: i64, dim: Dim, params: SchurParams) -> Result<SolveResult> {
    brute_force_cells(n, dim)?;
    match brute_force_search(n, dim, params, usize::MAX, None) {
        BruteForceOutcome::Max(result) => Ok(result),
        BruteForceOutcome::Optima { .. } => unreachable!(),
    }
}

enum BruteForceOutcome {
    Max(SolveResult),
    Optima { sets: Vec<GridSet>, truncated: bool },
}

fn brute_force_search(
    n: i64,
    dim: Dim,
    params: SchurParams,
    limit: usize,
    target: Option<usize>,
) -> BruteForceOutcome {
    let cells = lex_cells(n, dim);
    let index_of = |p: Point| -> usize {
        match dim {
            Dim::One => (p.x - 1) as usize,
            Dim::Two => ((p.x - 1) * n + (p.y - 1)) as usize,
        }
    };
    // pairs[z] = every (x,y) with p*x + q*y = z, both indices < z.
    let mut pairs: Vec<Vec<(u32, u32)>> = vec![Vec::new(); cells.len()];
    for (x, y, z) in enumerate_triples(n, dim, params) {
        pairs[index_of(z)].push((index_of(x) as u32, index_of(y) as u32));
    }

    struct Dfs<'a> {
        cells: &'a [Point],
        pairs: &'a [Vec<(u32, u32)>],
        chosen: Vec<bool>,
        stack: Vec<usize>,
        nodes: u64,
        conflicts: u64,
        bound_prunes: u64,
        best: usize,
        witness: Vec<Point>,
        target: Option<usize>,
        optima: Vec<GridSet>,
        limit: usize,
        truncated: bool,
        n: i64,
        dim: Dim,
    }

    impl Dfs<'_> {
        fn run(&mut self, idx: usize) {
            self.nodes += 1;
            if self.truncated {
                return;
            }
            match self.target {
                // Enumeration pass: keep exactly the target-size sets.
                Some(t) => {
                    if self.stack.len() + (self.cells.len() - idx) < t {
                        self.bound_prunes += 1;
                        return;
                    }
                    if self.stack.len() == t {
                        let pts: Vec<Point> =
                            self.stack.iter().map(|&i| self.cells[i]).collect();
                        if self.optima.len() == self.limit {
                            self.truncated = true;
                        } else {
                            self.optima
                                .push(GridSet::from_points(self.n, self.dim, &pts).unwrap());
                        }
                        return;
                    }
                }
                // Maximization pass: strict-improvement pruning.
                None => {
                    if self.stack.len() + (self.cells.len() - idx) <= self.best {
                        self.bound_prunes += 1;
                        return;
                    }
                    if self.stack.len() > self.best {
                        self.best = self.stack.len();
                        self.witness = self.stack.iter().map(|&i| self.cells[i]).collect();
                    }
                }
            }
            if idx == self.cells.len() {
                return;
            }
            let conflict = self.pairs[idx]
                .iter()
                .any(|&(x, y)| self.chosen[x as usize] && self.chosen[y as usize]);
            if conflict {
                self.conflicts += 1;
            } else {
                self.chosen[idx] = true;
                self.stack.push(idx);
                self.run(idx + 1);
                self.stack.pop();
                self.chosen[idx] = false;
            }
            self.run(idx + 1);
        }
    }

    let mut dfs = Dfs {
        cells: &cells,
        pairs: &pairs,
        chosen: vec![false; cells.len()],
        stack: Vec::new(),
        nodes: 0,
        conflicts: 0,
        bound_prunes: 0,
        best: 0,
        witness: Vec::new(),
        target,
        optima: Vec::new(),
        limit,
        truncated: false,
        n,
        dim,
    };
    dfs.run(0);
    match target {
        Some(_) => BruteForceOutcome::Optima {
            sets: dfs.optima,
            truncated: dfs.truncated,
        },
        None => {
            let witness = GridSet::from_points(n, dim, &dfs.witness).unwrap();
            debug_assert!(witness.is_sum_free(params));
            BruteForceOutcome::Max(SolveResult {
                optimum: dfs.best,
                witness,
                nodes: dfs.nodes,
                proven: true,
                bound_trace: Some(BoundTrace {
                    pruned_by_bound: dfs.bound_prunes,
                    pruned_by_conflict: dfs.conflicts,
                    pruned_by_symmetry: 0,
                }),
                checkpoint: None,
            })
        }
    }
}

/// All maximum sum-free sets (up to `limit`), lexicographically smallest
/// first, with a truncation flag.
#[derive(Debug, Clone)]
pub struct Optima {
    pub optimum: usize,
    pub sets: Vec<GridSet>,
    pub truncated: bool,
}

pub fn enumerate_optima(n: i64, dim: Dim, params: SchurParams, limit: usize) -> Result<Optima> {
    let optimum = brute_force_max(n, dim, params)?.optimum;
    match brute_force_search(n, dim, params, limit, Some(optimum)) {
        BruteForceOutcome::Optima { sets, truncated } => {
            debug_assert!(sets.iter().all(|s| s.is_sum_free(params)));
            Ok(Optima {
                optimum,
                sets,
                truncated,
            })
        }
        BruteForceOutcome::Max(_) => unreachable!(),
    }
}

/// The strongest construction available for the instance, used as the
/// starting incumbent.
pub fn incumbent_construction(n: i64, dim: Dim, params: SchurParams) -> GridSet {
    let set = match dim {
        Dim::One => {
            if params == SchurParams::classical() {
                one_d_extremal(n, OneDimVariant::UpperHalf).expect("upper half always exists")
            } else {
                // p*x + q*y > n for all members of {floor(n/(p+q))+1, .., n}.
                let lo = n / (params.p + params.q) + 1;
                GridSet::from_pred(n, dim, |p| p.x >= lo)
            }
        }
        Dim::Two => {
            if n == 1 {
                return GridSet::from_points(1, dim, &[Point::two(1, 1)]).unwrap();
            }
            if params == SchurParams::classical() {
                cameron_optimal(n)
            } else {
                pq_stripe(n, params, None).expect("default offset is positive")
            }
        }
    };
    debug_assert!(set.is_sum_free(params));
    set
}

/// Versioned resumable snapshot of an interrupted search: the incumbent
/// plus the decision-string prefixes of every unexplored subtree (in the
/// search's canonical branch order, `1` = include, `0` = exclude).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Checkpoint {
    pub params: SchurParams,
    pub incumbent: GridSet,
    pub open: Vec<Vec<bool>>,
}

const CHECKPOINT_HEADER: &str = "sumfree-checkpoint v1";

impl Checkpoint {
    pub fn to_text(&self) -> String {
        use std::fmt::Write as _;
        let mut out = String::new();
        writeln!(out, "{CHECKPOINT_HEADER}").unwrap();
        writeln!(
            out,
            "n={} dim={} p={} q={}",
            self.incumbent.n(),
            self.incumbent.dim().as_u8(),
            self.params.p,
            self.params.q
        )
        .unwrap();
        writeln!(out, "incumbent={}", self.incumbent.len()).unwrap();
        for p in self.incumbent.iter() {
            match self.incumbent.dim() {
                Dim::One => writeln!(out, "{}", p.x).unwrap(),
                Dim::Two => writeln!(out, "{} {}", p.x, p.y).unwrap(),
            }
        }
        writeln!(out, "open={}", self.open.len()).unwrap();
        for prefix in &self.open {
            let bits: String = prefix.iter().map(|&b| if b { '1' } else { '0' }).collect();
            writeln!(out, "{bits}").unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<Checkpoint> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
        let mut next = |what: &str| {
            lines.next().ok_or_else(|| Error::Parse {
                line: text.lines().count() + 1,
                msg: format!("unexpected end of checkpoint, wanted {what}"),
            })
        };
        let (line_no, header) = next("header")?;
        if header != CHECKPOINT_HEADER {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("bad checkpoint header `{header}`"),
            });
        }
        let (line_no, meta) = next("instance line")?;
        let mut n = None;
        let mut dim = None;
        let mut p = None;
        let mut q = None;
        for field in meta.split_whitespace() {
            let (key, value) = field.split_once('=').ok_or_else(|| Error::Parse {
                line: line_no,
                msg: format!("bad field `{field}`"),
            })?;
            let value: i64 = value.parse().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("bad field `{field}`"),
            })?;
            match key {
                "n" => n = Some(value),
                "dim" => dim = Dim::from_u8(value as u8),
                "p" => p = Some(value),
                "q" => q = Some(value),
                _ => {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("unknown field `{key}`"),
                    })
                }
            }
        }
        let (n, dim, p, q) = match (n, dim, p, q) {
            (Some(n), Some(dim), Some(p), Some(q)) => (n, dim, p, q),
            _ => {
                return Err(Error::Parse {
                    line: line_no,
                    msg: "instance line must set n, dim, p, q".into(),
                })
            }
        };
        let params = SchurParams::new(p, q)?;
        let (line_no, count_line) = next("incumbent count")?;
        let count: usize = count_line
            .strip_prefix("incumbent=")
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| Error::Parse {
                line: line_no,
                msg: format!("bad incumbent count `{count_line}`"),
            })?;
        let mut points = Vec::with_capacity(count);
        for _ in 0..count {
            let (line_no, line) = next("incumbent point")?;
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parse_i = |s: &str| {
                s.parse::<i64>().map_err(|_| Error::Parse {
                    line: line_no,
                    msg: format!("bad coordinate `{s}`"),
                })
            };
            let point = match (dim, fields.as_slice()) {
                (Dim::One, [x]) => Point::one(parse_i(x)?),
                (Dim::Two, [x, y]) => Point::two(parse_i(x)?, parse_i(y)?),
                _ => {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("expected {} coordinate(s), got `{line}`", dim.as_u8()),
                    })
                }
            };
            points.push(point);
        }
        let incumbent = GridSet::from_points(n, dim, &points)?;
        let (line_no, open_line) = next("open count")?;
        let open_count: usize = open_line
            .strip_prefix("open=")
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| Error::Parse {
                line: line_no,
                msg: format!("bad open count `{open_line}`"),
            })?;
        let mut open = Vec::with_capacity(open_count);
        for _ in 0..open_count {
            let (line_no, bits) = next("open prefix")?;
            let prefix: Vec<bool> = bits
                .chars()
                .map(|c| match c {
                    '1' => Ok(true),
                    '0' => Ok(false),
                    other => Err(Error::Parse {
                        line: line_no,
                        msg: format!("bad decision character `{other}`"),
                    }),
                })
                .collect::<Result<_>>()?;
            open.push(prefix);
        }
        Ok(Checkpoint {
            params,
            incumbent,
            open,
        })
    }
}

/// Branch order: descending coordinate sum, with each off-diagonal
/// transpose pair adjacent (the `x < y` member first). High-sum cells
/// first because extremal sets concentrate in a high-sum stripe.
fn branch_order(n: i64, dim: Dim) -> Vec<Point> {
    let mut cells = lex_cells(n, dim);
    cells.sort_by_key(|p| (-p.coord_sum(), p.x.min(p.y), p.x.max(p.y), p.x));
    cells
}

#[derive(Debug, Clone, Copy)]
struct Triple {
    members: [u32; 3],
    len: u8,
}

struct Instance {
    n: i64,
    dim: Dim,
    params: SchurParams,
    order: Vec<Point>,
    /// For the second member of a transpose pair, the index of the first.
    pair_first: Vec<Option<u32>>,
    triples: Vec<Triple>,
    cell_triples: Vec<Vec<u32>>,
}

impl Instance {
    fn build(n: i64, dim: Dim, params: SchurParams) -> Instance {
        let order = branch_order(n, dim);
        let mut index_of = vec![u32::MAX; order.len()];
        let flat = |p: Point| -> usize {
            match dim {
                Dim::One => (p.x - 1) as usize,
                Dim::Two => ((p.x - 1) * n + (p.y - 1)) as usize,
            }
        };
        for (i, &p) in order.iter().enumerate() {
            index_of[flat(p)] = i as u32;
        }
        let mut pair_first = vec![None; order.len()];
        if dim == Dim::Two {
            for (i, &p) in order.iter().enumerate() {
                if p.x > p.y {
                    let first = index_of[flat(p.transpose(dim))];
                    debug_assert_eq!(first + 1, i as u32, "transpose pairs are adjacent");
                    pair_first[i] = Some(first);
                }
            }
        }
        let mut triples = Vec::new();
        let mut cell_triples = vec![Vec::new(); order.len()];
        for (x, y, z) in enumerate_triples(n, dim, params) {
            let mut ms = vec![index_of[flat(x)], index_of[flat(y)], index_of[flat(z)]];
            ms.sort_unstable();
            ms.dedup();
            let mut members = [u32::MAX; 3];
            members[..ms.len()].copy_from_slice(&ms);
            let len = ms.len() as u8;
            let id = triples.len() as u32;
            for &m in &members[..len as usize] {
                cell_triples[m as usize].push(id);
            }
            triples.push(Triple { members, len });
        }
        Instance {
            n,
            dim,
            params,
            order,
            pair_first,
            triples,
            cell_triples,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Decision {
    Undecided,
    Included,
    Excluded,
}

struct Search<'a> {
    inst: &'a Instance,
    decision: Vec<Decision>,
    incl: Vec<u32>,
    decided: Vec<u32>,
    included: usize,
    path: Vec<bool>,
    /// True while every decided transpose pair on the path is symmetric.
    sym_break: bool,
    best: usize,
    witness: Option<Vec<Point>>,
    nodes: u64,
    trace: BoundTrace,
    deadline: Option<Instant>,
    timed_out: bool,
    open: Vec<Vec<bool>>,
    stamp: Vec<u32>,
    stamp_gen: u32,
}

impl<'a> Search<'a> {
    fn new(inst: &'a Instance, best: usize, deadline: Option<Instant>) -> Search<'a> {
        Search {
            inst,
            decision: vec![Decision::Undecided; inst.order.len()],
            incl: vec![0; inst.triples.len()],
            decided: vec![0; inst.triples.len()],
            included: 0,
            path: Vec::new(),
            sym_break: true,
            best,
            witness: None,
            nodes: 0,
            trace: BoundTrace::default(),
            deadline,
            timed_out: false,
            open: Vec::new(),
            stamp: vec![0; inst.order.len()],
            stamp_gen: 0,
        }
    }

    fn apply(&mut self, idx: usize, include: bool) -> bool {
        fn members(t: &Triple) -> &[u32] {
            &t.members[..t.len as usize]
        }
        if include {
            for &t in &self.inst.cell_triples[idx] {
                if self.incl[t as usize] + 1 == u32::from(self.inst.triples[t as usize].len) {
                    let full = members(&self.inst.triples[t as usize])
                        .iter()
                        .all(|&m| m as usize == idx || self.decision[m as usize] == Decision::Included);
                    if full {
                        return false;
                    }
                }
            }
        }
        self.decision[idx] = if include {
            Decision::Included
        } else {
            Decision::Excluded
        };
        for &t in &self.inst.cell_triples[idx] {
            self.decided[t as usize] += 1;
            if include {
                self.incl[t as usize] += 1;
            }
        }
        if include {
            self.included += 1;
        }
        true
    }

    fn undo(&mut self, idx: usize) {
        let include = self.decision[idx] == Decision::Included;
        self.decision[idx] = Decision::Undecided;
        for &t in &self.inst.cell_triples[idx] {
            self.decided[t as usize] -= 1;
            if include {
                self.incl[t as usize] -= 1;
            }
        }
        if include {
            self.included -= 1;
        }
    }

    /// Admissible bound: every wholly-undecided triple in a greedy
    /// disjoint family forces at least one exclusion.
    fn upper_bound(&mut self, next: usize) -> usize {
        let undecided = self.inst.order.len() - next;
        self.stamp_gen += 1;
        let mut matched = 0;
        for (t, triple) in self.inst.triples.iter().enumerate() {
            if self.decided[t] != 0 {
                continue;
            }
            let members = &triple.members[..triple.len as usize];
            if members.iter().any(|&m| self.stamp[m as usize] == self.stamp_gen) {
                continue;
            }
            for &m in members {
                self.stamp[m as usize] = self.stamp_gen;
            }
            matched += 1;
        }
        self.included + undecided - matched
    }

    fn record_leaf(&mut self) {
        if self.included > self.best {
            self.best = self.included;
            let pts: Vec<Point> = self
                .decision
                .iter()
                .enumerate()
                .filter(|(_, d)| **d == Decision::Included)
                .map(|(i, _)| self.inst.order[i])
                .collect();
            self.witness = Some(pts);
        }
    }

    /// Returns false when the time limit fired inside this subtree; the
    /// caller then records the untaken sibling branch as open work.
    fn dfs(&mut self, idx: usize) -> bool {
        self.nodes += 1;
        if let Some(deadline) = self.deadline {
            if Instant::now() >= deadline {
                self.timed_out = true;
                self.open.push(self.path.clone());
                return false;
            }
        }
        if idx == self.inst.order.len() {
            self.record_leaf();
            return true;
        }
        if self.upper_bound(idx) <= self.best {
            self.trace.pruned_by_bound += 1;
            return true;
        }
        let sym_before = self.sym_break;
        let partner_excluded = self.inst.pair_first[idx]
            .map(|f| self.decision[f as usize] == Decision::Excluded)
            .unwrap_or(false);
        // The include/exclude subtree here is the transpose image of an
        // exclude/include subtree already explored on a symmetric path.
        let skip_include =
            self.inst.params.symmetric() && self.sym_break && partner_excluded;
        if skip_include {
            self.trace.pruned_by_symmetry += 1;
        } else if self.apply(idx, true) {
            if let Some(f) = self.inst.pair_first[idx] {
                self.sym_break =
                    sym_before && self.decision[f as usize] == Decision::Included;
            }
            self.path.push(true);
            let done = self.dfs(idx + 1);
            self.path.pop();
            self.undo(idx);
            self.sym_break = sym_before;
            if !done {
                let mut sibling = self.path.clone();
                sibling.push(false);
                self.open.push(sibling);
                return false;
            }
        } else {
            self.trace.pruned_by_conflict += 1;
        }
        assert!(self.apply(idx, false), "exclusion never conflicts");
        if let Some(f) = self.inst.pair_first[idx] {
            self.sym_break = sym_before && self.decision[f as usize] == Decision::Excluded;
        }
        self.path.push(false);
        let done = self.dfs(idx + 1);
        self.path.pop();
        self.undo(idx);
        self.sym_break = sym_before;
        done
    }

    /// Replay a decision prefix; returns the next undecided index, or
    /// None when an include decision conflicts (dead subtree).
    fn replay(&mut self, prefix: &[bool]) -> Option<usize> {
        for (idx, &include) in prefix.iter().enumerate() {
            if !self.apply(idx, include) {
                for j in (0..idx).rev() {
                    self.undo(j);
                }
                return None;
            }
            if let Some(f) = self.inst.pair_first[idx] {
                self.sym_break = self.sym_break && self.decision[f as usize] == self.decision[idx];
            }
            self.path.push(include);
        }
        Some(prefix.len())
    }
}

struct SubResult {
    best: usize,
    witness: Option<Vec<Point>>,
    nodes: u64,
    trace: BoundTrace,
    timed_out: bool,
    open: Vec<Vec<bool>>,
}

fn solve_prefix(
    inst: &Instance,
    prefix: &[bool],
    floor: usize,
    deadline: Option<Instant>,
) -> SubResult {
    let mut search = Search::new(inst, floor, deadline);
    match search.replay(prefix) {
        Some(next) => {
            search.dfs(next);
        }
        None => {
            search.trace.pruned_by_conflict += 1;
        }
    }
    SubResult {
        best: search.best,
        witness: search.witness,
        nodes: search.nodes,
        trace: search.trace,
        timed_out: search.timed_out,
        open: search.open,
    }
}

/// Split the root into at least `min_count` feasible decision prefixes by
/// breadth-first expansion in branch order.
fn frontier(inst: &Instance, min_count: usize) -> Vec<Vec<bool>> {
    let mut level: Vec<Vec<bool>> = vec![Vec::new()];
    let mut depth = 0;
    while level.len() < min_count && depth < 16 && depth < inst.order.len() {
        let mut next_level = Vec::with_capacity(level.len() * 2);
        for prefix in &level {
            for include in [true, false] {
                let mut child = prefix.clone();
                child.push(include);
                if include {
                    let mut probe = Search::new(inst, 0, None);
                    if probe.replay(&child).is_none() {
                        continue;
                    }
                }
                next_level.push(child);
            }
        }
        level = next_level;
        depth += 1;
    }
    level
}

fn run_subproblems(
    inst: &Instance,
    prefixes: &[Vec<bool>],
    floor: usize,
    threads: usize,
    deadline: Option<Instant>,
) -> Vec<SubResult> {
    if threads <= 1 || prefixes.len() <= 1 {
        return prefixes
            .iter()
            .map(|p| solve_prefix(inst, p, floor, deadline))
            .collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool");
    pool.install(|| {
        use rayon::prelude::*;
        prefixes
            .par_iter()
            .map(|p| solve_prefix(inst, p, floor, deadline))
            .collect()
    })
}

fn merge(inst: &Instance, incumbent: GridSet, results: Vec<SubResult>) -> SolveResult {
    let mut best = incumbent.len();
    let mut witness = incumbent;
    let mut nodes = 0;
    let mut trace = BoundTrace::default();
    let mut timed_out = false;
    let mut open = Vec::new();
    for r in results {
        nodes += r.nodes;
        trace.pruned_by_bound += r.trace.pruned_by_bound;
        trace.pruned_by_conflict += r.trace.pruned_by_conflict;
        trace.pruned_by_symmetry += r.trace.pruned_by_symmetry;
        timed_out |= r.timed_out;
        open.extend(r.open);
        if r.best > best {
            best = r.best;
            let pts = r.witness.expect("improvement carries a witness");
            witness = GridSet::from_points(inst.n, inst.dim, &pts).unwrap();
        }
    }
    debug_assert!(witness.is_sum_free(inst.params));
    debug_assert_eq!(witness.len(), best);
    let checkpoint = timed_out.then(|| Checkpoint {
        params: inst.params,
        incumbent: witness.clone(),
        open,
    });
    SolveResult {
        optimum: best,
        witness,
        nodes,
        proven: !timed_out,
        bound_trace: Some(trace),
        checkpoint,
    }
}

/// Exact maximum by branch and bound; equals `brute_force_max` wherever
/// both run. On time-limit expiry the result carries `proven = false`,
/// the incumbent as a valid lower bound, and a resumable checkpoint.
pub fn max_sum_free(
    n: i64,
    dim: Dim,
    params: SchurParams,
    options: &SolveOptions,
) -> SolveResult {
    let inst = Instance::build(n, dim, params);
    let incumbent = if options.seed_incumbent {
        incumbent_construction(n, dim, params)
    } else {
        GridSet::empty(n, dim)
    };
    let deadline = options.time_limit.map(|l| Instant::now() + l);
    let prefixes = if options.threads > 1 {
        frontier(&inst, 4 * options.threads)
    } else {
        vec![Vec::new()]
    };
    let results = run_subproblems(&inst, &prefixes, incumbent.len(), options.threads, deadline);
    merge(&inst, incumbent, results)
}

/// Resume an interrupted search from a checkpoint; with enough time the
/// final optimum equals the uninterrupted one.
pub fn resume(checkpoint: &Checkpoint, options: &SolveOptions) -> SolveResult {
    let n = checkpoint.incumbent.n();
    let dim = checkpoint.incumbent.dim();
    let inst = Instance::build(n, dim, checkpoint.params);
    let deadline = options.time_limit.map(|l| Instant::now() + l);
    let results = run_subproblems(
        &inst,
        &checkpoint.open,
        checkpoint.incumbent.len(),
        options.threads,
        deadline,
    );
    merge(&inst, checkpoint.incumbent.clone(), results)
}

/// A maximal sum-free set grown by greedy insertion in a seeded-random
/// cell order. Maximality holds because accepted cells are never removed:
/// a cell rejected at its turn stays rejected against the final set.
pub fn random_maximal_sum_free(n: i64, dim: Dim, params: SchurParams, seed: u64) -> GridSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cells = lex_cells(n, dim);
    cells.shuffle(&mut rng);
    let flat = |p: Point| -> usize {
        match dim {
            Dim::One => (p.x - 1) as usize,
            Dim::Two => ((p.x - 1) * n + (p.y - 1)) as usize,
        }
    };
    let cell_count = match dim {
        Dim::One => n as usize,
        Dim::Two => (n * n) as usize,
    };
    let mut cell_triples: Vec<Vec<u32>> = vec![Vec::new(); cell_count];
    let mut triples: Vec<[Point; 3]> = Vec::new();
    for (x, y, z) in enumerate_triples(n, dim, params) {
        let id = triples.len() as u32;
        for m in [x, y, z] {
            let f = flat(m);
            if cell_triples[f].last() != Some(&id) {
                cell_triples[f].push(id);
            }
        }
        triples.push([x, y, z]);
    }
    let mut s = GridSet::empty(n, dim);
    for &c in &cells {
        let conflict = cell_triples[flat(c)].iter().any(|&t| {
            triples[t as usize]
                .iter()
                .all(|&m| m == c || s.contains(m))
        });
        if !conflict {
            s.insert(c).unwrap();
        }
    }
    debug_assert!(s.is_sum_free(params));
    s
}

#[derive(Debug, Clone)]
pub struct DensityRow {
    pub n: i64,
    pub size: usize,
    pub density: Rational,
    pub proven: bool,
}

/// Per-`n` optimum (or incumbent when time-limited) with exact density.
pub fn density_table(
    ns: &[i64],
    dim: Dim,
    params: SchurParams,
    options: &SolveOptions,
) -> Vec<DensityRow> {
    ns.iter()
        .map(|&n| {
            let r = max_sum_free(n, dim, params, options);
            DensityRow {
                n,
                size: r.optimum,
                density: r.witness.density(),
                proven: r.proven,
            }
        })
        .collect()
}
