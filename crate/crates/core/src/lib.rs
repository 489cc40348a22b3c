//! Sum-free subsets of the grids `[n]` and `[n]^2`.
//!
//! A set `S` is `(p,q)`-sum-free if the equation `p*x + q*y = z` has no
//! solution with `x, y, z` all in `S` (componentwise on grid points, with
//! `x = y` allowed). This crate provides:
//!
//! * membership structures and forbidden-triple enumeration ([`grid`]),
//! * the extremal stripe constructions and closed-form bounds
//!   ([`constructions`]),
//! * exact rational polygon geometry, lattice-point counts and the
//!   pairing/translate exclusion checks ([`geometry`]),
//! * upper-boundary machinery, type classification and the Lagrange
//!   cross-checks ([`structure`]),
//! * brute-force and branch-and-bound exact solvers ([`solver`]),
//! * a plain-text point-list format shared with the CLI ([`pointlist`]).

pub mod constructions;
pub mod error;
pub mod geometry;
pub mod grid;
pub mod pointlist;
pub mod solver;
pub mod structure;

pub use error::Error;
pub use grid::{Dim, GridSet, Point, SchurParams, Violation};

/// Exact rational scalar used throughout the geometry and structure modules.
pub type Rational = num_rational::Ratio<i64>;
