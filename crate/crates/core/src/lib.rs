//! Exact weight enumerators, moments and pattern statistics on
//! Catalan-counted permutation families.
//!
//! The crate is organised bottom-up:
//!
//! * [`arith`]: rationals, sparse polynomials, truncated series;
//! * [`perm`]: permutations, patterns, avoider enumeration and the
//!   brute-force oracle;
//! * [`funceq`]: catalytic functional recurrences and their evaluation;
//! * [`census`]: split decompositions, average sequences, class census;
//! * [`moments`]: factorial, raw, central and standardized moments;
//! * [`guess`]: recurrence, algebraic-equation and closed-form fitting;
//! * [`abnormal`]: limit estimation and abnormality verdicts.

pub mod abnormal;
pub mod arith;
pub mod census;
pub mod checks;
mod error;
mod serde_util;
pub mod funceq;
pub mod guess;
pub mod moments;
pub mod perm;

pub use arith::{IndexPoly, MultiPoly, Rational, SeriesLayout, TruncatedSeries};
pub use error::{Error, Result};
pub use perm::{Family, Pattern, Permutation};

/// Version string embedded in every serialized artifact.
pub const TOOL_VERSION: &str = concat!("catstat ", env!("CARGO_PKG_VERSION"));
