//! Extremal constructions and closed-form size/bound formulas.
//!
//! The two-dimensional extremal sets are diagonal stripes: the classical
//! `u <= x+y <= 2u-1` band with `u = floor((4n+7)/5)` and, for general
//! coefficients, the strict stripe `a < x+y < (p+q)a`.

use crate::error::{Error, Result};
use crate::grid::{Dim, GridSet, Point, SchurParams};
use crate::Rational;
use num_traits::{ToPrimitive, Zero};

/// A diagonal stripe `L (<, <=) x+y (<, <=) U` realized on `[n]^2`.
/// Rational bounds keep strict inequalities unambiguous on integer sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StripeSpec {
    pub n: i64,
    pub lower: Rational,
    pub upper: Rational,
    pub strict_lower: bool,
    pub strict_upper: bool,
}

impl StripeSpec {
    pub fn closed(n: i64, lower: i64, upper: i64) -> StripeSpec {
        StripeSpec {
            n,
            lower: Rational::from_integer(lower),
            upper: Rational::from_integer(upper),
            strict_lower: false,
            strict_upper: false,
        }
    }

    pub fn open(n: i64, lower: Rational, upper: Rational) -> StripeSpec {
        StripeSpec {
            n,
            lower,
            upper,
            strict_lower: true,
            strict_upper: true,
        }
    }

    /// Smallest integer sum admitted by the lower bound.
    pub fn min_sum(&self) -> i64 {
        if self.strict_lower {
            self.lower.floor().to_integer() + 1
        } else {
            self.lower.ceil().to_integer()
        }
    }

    /// Largest integer sum admitted by the upper bound.
    pub fn max_sum(&self) -> i64 {
        if self.strict_upper {
            self.upper.ceil().to_integer() - 1
        } else {
            self.upper.floor().to_integer()
        }
    }

    pub fn admits_sum(&self, s: i64) -> bool {
        s >= self.min_sum() && s <= self.max_sum()
    }
}

/// Exactly the grid points whose coordinate sum satisfies the stripe spec.
pub fn stripe_set(spec: &StripeSpec) -> GridSet {
    let n = spec.n;
    let mut s = GridSet::empty(n, Dim::Two);
    let (lo, hi) = (spec.min_sum(), spec.max_sum());
    for x in 1..=n {
        let y_lo = (lo - x).max(1);
        let y_hi = (hi - x).min(n);
        for y in y_lo..=y_hi {
            s.insert(Point::two(x, y)).unwrap();
        }
    }
    s
}

/// Closed-form stripe cardinality: full count minus the two corner
/// triangles. Cross-checked against `stripe_set` enumeration in tests.
pub fn stripe_count(spec: &StripeSpec) -> i64 {
    let n = spec.n;
    if spec.max_sum() < spec.min_sum() {
        return 0;
    }
    // Number of grid points with x+y <= k.
    let cum = |k: i64| -> i64 {
        if k < 2 {
            0
        } else if k <= n + 1 {
            (k - 1) * k / 2 // triangular count of sums 2..k: sum_{s=2..k} (s-1)
        } else if k <= 2 * n {
            let t = 2 * n - k; // sums above k truncated at the far corner
            n * n - t * (t + 1) / 2
        } else {
            n * n
        }
    };
    cum(spec.max_sum()) - cum(spec.min_sum() - 1)
}

/// Cameron's extremal stripe `u <= x+y <= 2u-1` with `u = floor((4n+7)/5)`,
/// which attains density `3/5 + O(1/n)` and is always sum-free.
pub fn cameron_optimal(n: i64) -> GridSet {
    assert!(n >= 2, "cameron_optimal needs n >= 2");
    let u = (4 * n + 7) / 5;
    stripe_set(&StripeSpec::closed(n, u, 2 * u - 1))
}

pub fn cameron_u(n: i64) -> i64 {
    (4 * n + 7) / 5
}

/// Default stripe offset `a = 2(p+q)n / ((p+q)^2 + 1)` as an exact rational.
pub fn pq_default_offset(n: i64, params: SchurParams) -> Rational {
    let s = params.p + params.q;
    Rational::new(2 * s * n, s * s + 1)
}

/// The strict stripe `a < x+y < (p+q)a`, which is `(p,q)`-sum-free for any
/// `a > 0`: members have coordinate sums above `a`, so any `p*x + q*y` has
/// coordinate sum above `(p+q)a` and lies outside the stripe.
pub fn pq_stripe(n: i64, params: SchurParams, a: Option<Rational>) -> Result<GridSet> {
    let a = a.unwrap_or_else(|| pq_default_offset(n, params));
    if a <= Rational::zero() {
        return Err(Error::InvalidInput(format!("stripe offset a must be positive, got {a}")));
    }
    let s = Rational::from_integer(params.p + params.q);
    Ok(stripe_set(&StripeSpec::open(n, a, s * a)))
}

/// The three named one-dimensional extremal sets, each of size `ceil(n/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OneDimVariant {
    /// The odd numbers `{1, 3, 5, ...}`.
    Odds,
    /// The upper half `{ceil((n+1)/2), ..., n}`.
    UpperHalf,
    /// The upper half shifted down by one; only defined for even `n`.
    Shifted,
}

impl OneDimVariant {
    pub fn parse(s: &str) -> Option<OneDimVariant> {
        match s {
            "odds" => Some(OneDimVariant::Odds),
            "upper_half" | "upper-half" => Some(OneDimVariant::UpperHalf),
            "shifted" => Some(OneDimVariant::Shifted),
            _ => None,
        }
    }
}

pub fn one_d_extremal(n: i64, variant: OneDimVariant) -> Result<GridSet> {
    assert!(n >= 1);
    let points: Vec<Point> = match variant {
        OneDimVariant::Odds => (0..)
            .map(|k| 2 * k + 1)
            .take_while(|&x| x <= n)
            .map(Point::one)
            .collect(),
        OneDimVariant::UpperHalf => (((n + 1) + 1) / 2..=n).map(Point::one).collect(),
        OneDimVariant::Shifted => {
            if n % 2 != 0 {
                return Err(Error::InvalidInput(format!(
                    "shifted variant is only defined for even n, got n={n}"
                )));
            }
            (((n + 1) + 1) / 2 - 1..=n - 1).map(Point::one).collect()
        }
    };
    GridSet::from_points(n, Dim::One, &points)
}

/// Leading term `(1 - 2/(4p^2+1)) n^2` of the `(p,p)` upper bound.
pub fn theorem2_bound(n: i64, p: i64) -> Rational {
    assert!(p >= 1);
    let d = 4 * p * p + 1;
    Rational::new((d - 2) * n * n, d)
}

/// Conjectured leading term `(1 - 2/((p+q)^2+1)) n^2` for general `(p,q)`.
pub fn conjecture_bound(n: i64, params: SchurParams) -> Rational {
    let s = params.p + params.q;
    let d = s * s + 1;
    Rational::new((d - 2) * n * n, d)
}

/// Maximum sum-free density of `[n]`: `1/2` for even `n`, `1/2 + 1/(2n)`
/// for odd `n`.
pub fn mu_1d(n: i64) -> Rational {
    assert!(n >= 1);
    if n % 2 == 0 {
        Rational::new(1, 2)
    } else {
        Rational::new(1, 2) + Rational::new(1, 2 * n)
    }
}

/// Render a rational with a fixed number of significant decimal digits.
pub fn decimal_digits(r: Rational, sig: usize) -> String {
    let v = r.to_f64().unwrap_or(f64::NAN);
    if v == 0.0 {
        return "0".to_string();
    }
    let digits = sig as i32 - 1 - v.abs().log10().floor() as i32;
    if digits <= 0 {
        format!("{:.0}", v)
    } else {
        format!("{:.*}", digits as usize, v)
    }
}

/// Render a rational as `a/b` (or plain integer).
pub fn fraction(r: Rational) -> String {
    if r.is_integer() {
        format!("{}", r.to_integer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    #[test]
    fn stripe_basics() {
        let s = stripe_set(&StripeSpec::closed(2, 3, 3));
        let got: Vec<Point> = s.iter().collect();
        assert_eq!(got, vec![Point::two(1, 2), Point::two(2, 1)]);

        assert_eq!(stripe_set(&StripeSpec::closed(5, 5, 9)).len(), 18);
        assert!(stripe_set(&StripeSpec::closed(5, 11, 12)).is_empty());
    }

    /// Direct enumeration oracle over the full grid.
    fn stripe_oracle(spec: &StripeSpec) -> usize {
        let mut count = 0;
        for x in 1..=spec.n {
            for y in 1..=spec.n {
                if spec.admits_sum(x + y) {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn stripe_set_and_count_match_enumeration() {
        for n in [1, 2, 3, 5, 8, 13, 40] {
            for lo in 0..=2 * n + 2 {
                for hi in lo..=2 * n + 2 {
                    for (sl, su) in [(false, false), (true, false), (false, true), (true, true)] {
                        let spec = StripeSpec {
                            n,
                            lower: Rational::from_integer(lo),
                            upper: Rational::from_integer(hi),
                            strict_lower: sl,
                            strict_upper: su,
                        };
                        let oracle = stripe_oracle(&spec);
                        assert_eq!(stripe_set(&spec).len(), oracle, "{spec:?}");
                        assert_eq!(stripe_count(&spec) as usize, oracle, "{spec:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn cameron_small_cases() {
        let s = cameron_optimal(5);
        assert_eq!(cameron_u(5), 5);
        assert_eq!(s.len(), 18);

        let s2 = cameron_optimal(2);
        assert_eq!(cameron_u(2), 3);
        let got: Vec<Point> = s2.iter().collect();
        assert_eq!(got, vec![Point::two(1, 2), Point::two(2, 1), Point::two(2, 2)]);
    }

    #[test]
    fn cameron_is_sum_free_and_near_three_fifths() {
        for n in [2, 3, 5, 10, 37, 100, 257, 1000, 2000] {
            let s = cameron_optimal(n);
            assert!(s.is_sum_free(SchurParams::classical()), "n={n}");
            let diff = s.density() - Rational::new(3, 5);
            assert!(diff.abs() <= Rational::new(3, n), "n={n} diff={diff}");
        }
    }

    #[test]
    fn pq_stripe_fixed_values() {
        let params = SchurParams::new(2, 2).unwrap();
        assert_eq!(pq_default_offset(17, params), Rational::from_integer(8));
        let s = pq_stripe(17, params, None).unwrap();
        assert_eq!(s.len(), 255);

        let s = pq_stripe(5, SchurParams::classical(), None).unwrap();
        assert_eq!(pq_default_offset(5, SchurParams::classical()), Rational::from_integer(4));
        assert_eq!(s.len(), 13);

        let s = pq_stripe(
            10,
            SchurParams::new(1, 2).unwrap(),
            Some(Rational::new(41, 2)),
        )
        .unwrap();
        assert!(s.is_empty());

        assert!(pq_stripe(10, SchurParams::classical(), Some(Rational::zero())).is_err());
    }

    #[test]
    fn pq_stripe_sum_free_and_size_bound() {
        for p in 1..=4 {
            let params = SchurParams::new(p, p).unwrap();
            for n in [4 * p * p + 1, 10, 57, 100, 400, 2000] {
                let s = pq_stripe(n, params, None).unwrap();
                assert!(s.is_sum_free(params), "p={p} n={n}");
                let lead = theorem2_bound(n, p);
                let size = Rational::from_integer(s.len() as i64);
                assert!(
                    (size - lead).abs() <= Rational::from_integer(4 * n),
                    "p={p} n={n} size={size} lead={lead}"
                );
            }
        }
        // Asymmetric coefficients.
        for (p, q) in [(1, 2), (2, 3), (1, 4)] {
            let params = SchurParams::new(p, q).unwrap();
            for n in [20, 100, 500] {
                let s = pq_stripe(n, params, None).unwrap();
                assert!(s.is_sum_free(params), "p={p} q={q} n={n}");
            }
        }
    }

    #[test]
    fn one_d_variants() {
        let odds: Vec<Point> = one_d_extremal(4, OneDimVariant::Odds).unwrap().iter().collect();
        assert_eq!(odds, vec![Point::one(1), Point::one(3)]);

        let upper: Vec<Point> = one_d_extremal(5, OneDimVariant::UpperHalf)
            .unwrap()
            .iter()
            .collect();
        assert_eq!(upper, vec![Point::one(3), Point::one(4), Point::one(5)]);

        let shifted: Vec<Point> = one_d_extremal(4, OneDimVariant::Shifted)
            .unwrap()
            .iter()
            .collect();
        assert_eq!(shifted, vec![Point::one(2), Point::one(3)]);

        assert!(one_d_extremal(5, OneDimVariant::Shifted).is_err());
    }

    #[test]
    fn one_d_sizes_and_sum_freeness() {
        for n in 1..=200 {
            for variant in [OneDimVariant::Odds, OneDimVariant::UpperHalf, OneDimVariant::Shifted] {
                if variant == OneDimVariant::Shifted && n % 2 != 0 {
                    continue;
                }
                let s = one_d_extremal(n, variant).unwrap();
                assert_eq!(s.len() as i64, (n + 1) / 2, "n={n} {variant:?}");
                assert!(s.is_sum_free(SchurParams::classical()), "n={n} {variant:?}");
            }
        }
    }

    #[test]
    fn bound_values() {
        assert_eq!(theorem2_bound(10, 1), Rational::new(3 * 100, 5));
        assert_eq!(theorem2_bound(17, 2), Rational::from_integer(255));
        assert_eq!(theorem2_bound(10, 3), Rational::new(35 * 100, 37));

        let c = SchurParams::classical();
        assert_eq!(conjecture_bound(10, c), Rational::new(3 * 100, 5));
        assert_eq!(
            conjecture_bound(10, SchurParams::new(1, 2).unwrap()),
            Rational::new(4 * 100, 5)
        );
        assert_eq!(
            conjecture_bound(9, SchurParams::new(2, 2).unwrap()),
            theorem2_bound(9, 2)
        );
    }

    #[test]
    fn mu_1d_values() {
        assert_eq!(mu_1d(4), Rational::new(1, 2));
        assert_eq!(mu_1d(5), Rational::new(3, 5));
        assert_eq!(mu_1d(1), Rational::from_integer(1));
    }

    #[test]
    fn rendering() {
        assert_eq!(fraction(Rational::new(3, 5)), "3/5");
        assert_eq!(fraction(Rational::from_integer(4)), "4");
        assert_eq!(decimal_digits(Rational::new(3, 5), 12), "0.600000000000");
    }
}
