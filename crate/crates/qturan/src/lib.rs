//! Vertex Turán numbers for directed patterns in the oriented hypercube.
//!
//! Vertices of the n-cube are subsets of {1,..,n}; every edge points from
//! a set to the same set plus one element. For a forbidden directed
//! pattern, the library builds the level-selection families that avoid it,
//! counts maximal chains exactly, evaluates closed-form and
//! chain-relaxation bounds, and determines exact optima for small n by
//! brute force or branch-and-bound over the copy hypergraph.
//!
//! Everything is exact integer arithmetic; floating point appears only in
//! report ratios. All public types are immutable once built and safe to
//! share across threads.

pub mod chains;
pub mod construct;
pub mod detect;
pub mod error;
pub mod hypercube;
pub mod pattern;
pub mod rng;
pub mod solver;

pub use error::{Error, Result};
pub use hypercube::{Dim, Family, Vertex};
pub use num_bigint::BigUint;
pub use pattern::{Pattern, PatternInfo};
