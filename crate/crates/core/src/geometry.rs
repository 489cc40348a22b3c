//! Convex-polygon areas, lattice-point counts, pairing regions, and the
//! exclusion bound checkers.
//!
//! All counts are exact: vertices are rationals, cross-sections are
//! intersected in rationals, and `lattice_count` includes the boundary
//! (a region "contains" its closed boundary throughout).

use crate::error::{Error, Result};
use crate::grid::{GridSet, Point, SchurParams};
use crate::Rational;
use num_traits::{Signed, Zero};
use std::collections::HashSet;

/// A point with exact rational coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RatPoint {
    pub x: Rational,
    pub y: Rational,
}

impl RatPoint {
    pub fn new(x: Rational, y: Rational) -> RatPoint {
        RatPoint { x, y }
    }

    pub fn integer(x: i64, y: i64) -> RatPoint {
        RatPoint {
            x: Rational::from_integer(x),
            y: Rational::from_integer(y),
        }
    }
}

fn cross(o: RatPoint, a: RatPoint, b: RatPoint) -> Rational {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

/// A convex polygon with rational vertices, stored counterclockwise with
/// no three consecutive collinear vertices. Construction normalizes any
/// input point cloud via its convex hull, so reversed orientation or
/// redundant interior points are accepted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvexPolygon {
    vertices: Vec<RatPoint>,
}

impl ConvexPolygon {
    pub fn new(points: Vec<RatPoint>) -> ConvexPolygon {
        ConvexPolygon {
            vertices: convex_hull(points),
        }
    }

    pub fn vertices(&self) -> &[RatPoint] {
        &self.vertices
    }

    pub fn translate(&self, dx: Rational, dy: Rational) -> ConvexPolygon {
        ConvexPolygon {
            vertices: self
                .vertices
                .iter()
                .map(|v| RatPoint::new(v.x + dx, v.y + dy))
                .collect(),
        }
    }

    pub fn dilate(&self, t: Rational) -> ConvexPolygon {
        ConvexPolygon {
            vertices: self.vertices.iter().map(|v| RatPoint::new(v.x * t, v.y * t)).collect(),
        }
    }

    /// Exact shoelace area; degenerate inputs (fewer than 3 hull vertices)
    /// have area 0 by convention.
    pub fn area(&self) -> Rational {
        if self.vertices.len() < 3 {
            return Rational::zero();
        }
        let mut twice = Rational::zero();
        for (i, &a) in self.vertices.iter().enumerate() {
            let b = self.vertices[(i + 1) % self.vertices.len()];
            twice = twice + (a.x * b.y - b.x * a.y);
        }
        (twice / Rational::from_integer(2)).abs()
    }

    /// Number of lattice points in the closed region (boundary included),
    /// by row scanline with exact rational edge intersections.
    pub fn lattice_count(&self) -> i64 {
        match self.vertices.len() {
            0 => return 0,
            1 => {
                let v = self.vertices[0];
                return i64::from(v.x.is_integer() && v.y.is_integer());
            }
            _ => {}
        }
        let ys: Vec<Rational> = self.vertices.iter().map(|v| v.y).collect();
        let y_min = ys.iter().min().unwrap().ceil().to_integer();
        let y_max = ys.iter().max().unwrap().floor().to_integer();
        let m = self.vertices.len();
        let mut count = 0i64;
        for y in y_min..=y_max {
            let yr = Rational::from_integer(y);
            let mut x_lo: Option<Rational> = None;
            let mut x_hi: Option<Rational> = None;
            let mut push = |x: Rational| {
                x_lo = Some(x_lo.map_or(x, |lo: Rational| lo.min(x)));
                x_hi = Some(x_hi.map_or(x, |hi: Rational| hi.max(x)));
            };
            for i in 0..m {
                let a = self.vertices[i];
                let b = self.vertices[(i + 1) % m];
                if i + 1 == m && m == 2 {
                    break; // a 2-vertex "polygon" is a single segment
                }
                if (yr - a.y) * (yr - b.y) > Rational::zero() {
                    continue; // edge does not cross this row
                }
                if a.y == b.y {
                    push(a.x);
                    push(b.x);
                } else {
                    push(a.x + (yr - a.y) * (b.x - a.x) / (b.y - a.y));
                }
            }
            if let (Some(lo), Some(hi)) = (x_lo, x_hi) {
                let lo = lo.ceil().to_integer();
                let hi = hi.floor().to_integer();
                if hi >= lo {
                    count += hi - lo + 1;
                }
            }
        }
        count
    }
}

/// Convex hull (monotone chain) in counterclockwise order, collinear
/// points dropped.
fn convex_hull(mut points: Vec<RatPoint>) -> Vec<RatPoint> {
    points.sort();
    points.dedup();
    if points.len() <= 2 {
        return points;
    }
    let mut lower: Vec<RatPoint> = Vec::new();
    for &p in &points {
        while lower.len() >= 2
            && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= Rational::zero()
        {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<RatPoint> = Vec::new();
    for &p in points.iter().rev() {
        while upper.len() >= 2
            && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= Rational::zero()
        {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() < 3 {
        // All input points collinear: keep the extreme pair.
        return vec![*points.first().unwrap(), *points.last().unwrap()];
    }
    lower
}

/// One row of a dilation diagnostic: the absolute gap between lattice
/// count and area for `tP`, at the origin and maximized over a sample of
/// integer translates (integer translation leaves both quantities fixed,
/// so the sampled maximum equals the origin value; it is reported for
/// completeness).
#[derive(Debug, Clone, PartialEq)]
pub struct DiscrepancyPoint {
    pub t: Rational,
    pub at_origin: Rational,
    pub max_over_translates: Rational,
}

pub fn discrepancy_profile(
    polygon: &ConvexPolygon,
    dilations: &[Rational],
    translate_sample: &[(i64, i64)],
) -> Vec<DiscrepancyPoint> {
    dilations
        .iter()
        .map(|&t| {
            let dilated = polygon.dilate(t);
            let gap = |poly: &ConvexPolygon| {
                (Rational::from_integer(poly.lattice_count()) - poly.area()).abs()
            };
            let at_origin = gap(&dilated);
            let max_over_translates = translate_sample
                .iter()
                .map(|&(ax, ay)| {
                    gap(&dilated.translate(
                        Rational::from_integer(ax),
                        Rational::from_integer(ay),
                    ))
                })
                .max()
                .unwrap_or_else(|| at_origin.clone());
            DiscrepancyPoint {
                t,
                at_origin,
                max_over_translates,
            }
        })
        .collect()
}

/// Lattice points of the rectangle `[0, a_x/p] x [0, a_y/p]` together with
/// the reflection-closure diagnostics for the map `x -> a/p - x`.
///
/// When `p` divides both coordinates of `a` the lattice part is itself
/// closed under the reflection. Otherwise the reflection leaves the
/// lattice, the `closed` flag is false, and bound checkers fall back to
/// the lattice count of the closed rational box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingRegion {
    pub anchor: Point,
    pub scale: i64,
    pub points: Vec<(i64, i64)>,
    pub closed: bool,
    pub lattice_count: i64,
}

pub fn rectangle_pairing(a: Point, p: i64) -> PairingRegion {
    assert!(p >= 1);
    let bx = a.x / p;
    let by = a.y / p;
    let mut points = Vec::with_capacity(((bx + 1) * (by + 1)) as usize);
    for x in 0..=bx {
        for y in 0..=by {
            points.push((x, y));
        }
    }
    PairingRegion {
        anchor: a,
        scale: p,
        points,
        closed: a.x % p == 0 && a.y % p == 0,
        lattice_count: (bx + 1) * (by + 1),
    }
}

/// Whether a lattice-point set is closed under `x -> a/p - x` over exact
/// rationals (a non-integral image immediately fails).
pub fn is_pairing_set(points: &[(i64, i64)], a: Point, p: i64) -> bool {
    assert!(p >= 1);
    let set: HashSet<(i64, i64)> = points.iter().copied().collect();
    set.iter().all(|&(x, y)| {
        let rx = Rational::new(a.x, p) - Rational::from_integer(x);
        let ry = Rational::new(a.y, p) - Rational::from_integer(y);
        rx.is_integer() && ry.is_integer() && set.contains(&(rx.to_integer(), ry.to_integer()))
    })
}

/// Outcome of one exclusion-bound check.
#[derive(Debug, Clone, PartialEq)]
pub struct ExclusionReport {
    pub count: usize,
    pub bound: Rational,
    pub holds: bool,
}

fn require_member(s: &GridSet, a: Point) -> Result<()> {
    if !s.contains(a) {
        return Err(Error::Precondition(format!("anchor {a} is not a member of the set")));
    }
    Ok(())
}

fn require_sum_free(s: &GridSet, params: SchurParams) -> Result<()> {
    if let Some(v) = s.first_violation(params) {
        return Err(Error::Precondition(format!(
            "set is not {params}-sum-free: {v}"
        )));
    }
    Ok(())
}

/// `|P ∩ S| <= Λ(P)/2` for a (p-)pairing region `P` anchored at `a ∈ S`.
pub fn check_pairing_bound(
    s: &GridSet,
    a: Point,
    region: &PairingRegion,
    params: SchurParams,
) -> Result<ExclusionReport> {
    if !params.symmetric() || params.p != region.scale {
        return Err(Error::Precondition(format!(
            "pairing region of scale {} requires params ({},{})",
            region.scale, region.scale, region.scale
        )));
    }
    if region.anchor != a {
        return Err(Error::Precondition(format!(
            "region anchored at {} does not match a={a}",
            region.anchor
        )));
    }
    require_member(s, a)?;
    require_sum_free(s, params)?;
    let count = region
        .points
        .iter()
        .filter(|&&(x, y)| s.contains(Point::two(x, y)))
        .count();
    let bound = Rational::new(region.lattice_count, 2);
    Ok(ExclusionReport {
        count,
        bound,
        holds: Rational::from_integer(count as i64) <= bound,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// `|S ∩ (T ∪ (a ± T))| <= Λ(T)` for `a ∈ S`, `S` sum-free under `(1,1)`.
pub fn check_translate_bound(
    s: &GridSet,
    a: Point,
    t: &[(i64, i64)],
    sign: Sign,
) -> Result<ExclusionReport> {
    require_member(s, a)?;
    require_sum_free(s, SchurParams::classical())?;
    let t_set: HashSet<(i64, i64)> = t.iter().copied().collect();
    let mut union: HashSet<(i64, i64)> = t_set.clone();
    for &(x, y) in &t_set {
        let img = match sign {
            Sign::Plus => (a.x + x, a.y + y),
            Sign::Minus => (a.x - x, a.y - y),
        };
        union.insert(img);
    }
    let count = union
        .iter()
        .filter(|&&(x, y)| s.contains(Point::two(x, y)))
        .count();
    let bound = Rational::from_integer(t_set.len() as i64);
    Ok(ExclusionReport {
        count,
        bound,
        holds: Rational::from_integer(count as i64) <= bound,
    })
}

/// `|S ∩ (p(a+T) ∪ T)| <= Λ(T)` for `a ∈ S`, `S` `(p,p)`-sum-free.
pub fn check_p_translate_bound(
    s: &GridSet,
    a: Point,
    t: &[(i64, i64)],
    p: i64,
) -> Result<ExclusionReport> {
    let params = SchurParams::new(p, p)?;
    require_member(s, a)?;
    require_sum_free(s, params)?;
    let t_set: HashSet<(i64, i64)> = t.iter().copied().collect();
    let mut union: HashSet<(i64, i64)> = t_set.clone();
    for &(x, y) in &t_set {
        union.insert((p * (a.x + x), p * (a.y + y)));
    }
    let count = union
        .iter()
        .filter(|&&(x, y)| s.contains(Point::two(x, y)))
        .count();
    let bound = Rational::from_integer(t_set.len() as i64);
    Ok(ExclusionReport {
        count,
        bound,
        holds: Rational::from_integer(count as i64) <= bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::cameron_optimal;

    fn poly(pts: &[(i64, i64)]) -> ConvexPolygon {
        ConvexPolygon::new(pts.iter().map(|&(x, y)| RatPoint::integer(x, y)).collect())
    }

    #[test]
    fn areas() {
        assert_eq!(poly(&[(0, 0), (1, 0), (1, 1), (0, 1)]).area(), Rational::from_integer(1));
        assert_eq!(poly(&[(0, 0), (4, 0), (0, 4)]).area(), Rational::from_integer(8));
        // Reversed orientation normalizes to the same polygon.
        assert_eq!(poly(&[(0, 1), (1, 1), (1, 0), (0, 0)]).area(), Rational::from_integer(1));
        assert_eq!(poly(&[(0, 0), (2, 0)]).area(), Rational::zero());
    }

    #[test]
    fn lattice_counts() {
        assert_eq!(poly(&[(0, 0), (1, 0), (1, 1), (0, 1)]).lattice_count(), 4);
        assert_eq!(poly(&[(0, 0), (4, 0), (0, 4)]).lattice_count(), 15);
        // Segment and single point degenerate cases.
        assert_eq!(poly(&[(0, 0), (3, 3)]).lattice_count(), 4);
        assert_eq!(poly(&[(2, 5)]).lattice_count(), 1);
    }

    #[test]
    fn cameron_stripe_polygon_matches_stripe_set() {
        // Stripe 5 <= x+y <= 9 within [5]^2 as a closed polygon.
        let p = ConvexPolygon::new(vec![
            RatPoint::integer(1, 4),
            RatPoint::integer(4, 1),
            RatPoint::integer(5, 1),
            RatPoint::integer(5, 4),
            RatPoint::integer(4, 5),
            RatPoint::integer(1, 5),
        ]);
        assert_eq!(p.lattice_count() as usize, cameron_optimal(5).len());
    }

    #[test]
    fn lattice_count_translation_invariant() {
        let p = poly(&[(0, 0), (7, 2), (5, 9), (1, 6)]);
        let q = p.translate(Rational::from_integer(-13), Rational::from_integer(42));
        assert_eq!(p.lattice_count(), q.lattice_count());
    }

    /// Pick's theorem oracle for lattice-vertex polygons.
    fn pick_count(p: &ConvexPolygon) -> Rational {
        let vs = p.vertices();
        let mut boundary = 0i64;
        for (i, a) in vs.iter().enumerate() {
            let b = vs[(i + 1) % vs.len()];
            let dx = (b.x - a.x).to_integer().abs();
            let dy = (b.y - a.y).to_integer().abs();
            boundary += num_integer::gcd(dx, dy);
        }
        p.area() + Rational::new(boundary, 2) + Rational::from_integer(1)
    }

    #[test]
    fn pick_consistency_random_polygons() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut nontrivial = 0;
        while nontrivial < 100 {
            let k = rng.gen_range(3..=12);
            let pts: Vec<RatPoint> = (0..k)
                .map(|_| RatPoint::integer(rng.gen_range(-20..=20), rng.gen_range(-20..=20)))
                .collect();
            let p = ConvexPolygon::new(pts);
            if p.vertices().len() < 3 {
                continue;
            }
            nontrivial += 1;
            assert_eq!(Rational::from_integer(p.lattice_count()), pick_count(&p));
        }
    }

    #[test]
    fn square_discrepancy_is_perimeter_like() {
        let unit = poly(&[(0, 0), (1, 0), (1, 1), (0, 1)]);
        let profile = discrepancy_profile(
            &unit,
            &[1, 2, 4].map(Rational::from_integer),
            &[(0, 0), (3, -2)],
        );
        for (row, t) in profile.iter().zip([1i64, 2, 4]) {
            assert_eq!(row.at_origin, Rational::from_integer(2 * t + 1));
            assert_eq!(row.max_over_translates, row.at_origin);
        }
        let tri = poly(&[(0, 0), (1, 0), (0, 1)]);
        let profile = discrepancy_profile(&tri, &[Rational::from_integer(4)], &[(0, 0)]);
        assert_eq!(profile[0].at_origin, Rational::from_integer(7));
    }

    #[test]
    fn rectangle_pairing_cases() {
        let r = rectangle_pairing(Point::two(4, 4), 1);
        assert_eq!(r.points.len(), 25);
        assert!(r.closed);
        assert!(is_pairing_set(&r.points, Point::two(4, 4), 1));

        let r = rectangle_pairing(Point::two(4, 4), 2);
        assert_eq!(r.points.len(), 9);
        assert!(r.closed);
        assert!(is_pairing_set(&r.points, Point::two(4, 4), 2));

        let r = rectangle_pairing(Point::two(3, 5), 2);
        assert!(!r.closed);
        assert!(!is_pairing_set(&r.points, Point::two(3, 5), 2));
        assert_eq!(r.lattice_count, 2 * 3);
    }

    #[test]
    fn pairing_set_examples() {
        assert!(is_pairing_set(&[(1, 3), (3, 1)], Point::two(4, 4), 1));
        assert!(!is_pairing_set(&[(1, 0)], Point::two(1, 1), 1));
        assert!(is_pairing_set(&[(2, 2)], Point::two(4, 4), 1));
    }

    #[test]
    fn pairing_bound_on_cameron() {
        let s = cameron_optimal(5);
        let a = Point::two(4, 5);
        let region = rectangle_pairing(a, 1);
        let report =
            check_pairing_bound(&s, a, &region, SchurParams::classical()).unwrap();
        assert!(report.holds);
    }

    #[test]
    fn pairing_bound_preconditions() {
        let s = cameron_optimal(5);
        let region = rectangle_pairing(Point::two(1, 1), 1);
        // anchor not a member
        assert!(check_pairing_bound(&s, Point::two(1, 1), &region, SchurParams::classical())
            .is_err());
        // set not sum-free
        let bad = GridSet::from_points(
            4,
            crate::grid::Dim::Two,
            &[Point::two(1, 1), Point::two(2, 2)],
        )
        .unwrap();
        let region = rectangle_pairing(Point::two(1, 1), 1);
        assert!(check_pairing_bound(&bad, Point::two(1, 1), &region, SchurParams::classical())
            .is_err());
    }

    #[test]
    fn translate_bound_cases() {
        let s = cameron_optimal(8);
        let a = s.iter().next().unwrap();
        // Empty T.
        let r = check_translate_bound(&s, a, &[], Sign::Plus).unwrap();
        assert_eq!((r.count, r.bound), (0, Rational::zero()));
        assert!(r.holds);
        // Lower-left triangle lattice points.
        let mut tri = Vec::new();
        for x in 0..=4i64 {
            for y in 0..=4 - x {
                tri.push((x, y));
            }
        }
        for sign in [Sign::Plus, Sign::Minus] {
            let r = check_translate_bound(&s, a, &tri, sign).unwrap();
            assert!(r.holds, "{sign:?}: {r:?}");
        }
        // Non-sum-free input is rejected.
        let bad = GridSet::from_points(
            4,
            crate::grid::Dim::Two,
            &[Point::two(1, 1), Point::two(2, 2)],
        )
        .unwrap();
        assert!(check_translate_bound(&bad, Point::two(1, 1), &tri, Sign::Plus).is_err());
    }

    #[test]
    fn p_translate_reduces_to_translate_at_p1() {
        let s = cameron_optimal(8);
        let a = s.iter().next().unwrap();
        let t: Vec<(i64, i64)> = vec![(0, 0), (1, 0), (0, 1), (1, 1)];
        let r1 = check_translate_bound(&s, a, &t, Sign::Plus).unwrap();
        let r2 = check_p_translate_bound(&s, a, &t, 1).unwrap();
        assert_eq!(r1, r2);
    }

    #[test]
    fn p_translate_bound_on_stripe() {
        use crate::constructions::pq_stripe;
        let params = SchurParams::new(2, 2).unwrap();
        let s = pq_stripe(17, params, None).unwrap();
        let a = s.iter().next().unwrap();
        let t: Vec<(i64, i64)> = vec![(0, 0), (1, 0), (0, 1), (1, 1)];
        let r = check_p_translate_bound(&s, a, &t, 2).unwrap();
        assert!(r.holds);
        // T whose dilated translate is fully off-grid.
        let far: Vec<(i64, i64)> = vec![(100, 100)];
        let r = check_p_translate_bound(&s, a, &far, 2).unwrap();
        assert!(r.holds);
    }
}
