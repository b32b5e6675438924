//! Numerical toolkit for badly approximable systems of linear forms.
//!
//! An `m x n` real matrix `A` is badly approximable with constant `c > 0` when
//! `|q|^n |Aq - p|^m >= c` (sup norms) for every nonzero integer vector `q` and
//! every integer vector `p`. This crate computes truncated approximation
//! constants by direct search, certifies the same membership through the orbit
//! of the associated unimodular lattice under the diagonal flow, plays the
//! hyperplane absolute game with the explicit simplex-lemma strategy, and
//! estimates Hausdorff dimension of the membership sets from below (Cantor
//! subdivision) and from above (covering with renormalized lattices).
//!
//! Scalar arithmetic is exact wherever the inputs allow it: rationals and
//! quadratic surds (the golden ratio, `sqrt(2)`, ...) never touch floating
//! point on the verdict path, while bulk searches run in `f64` with certified
//! margins and re-check their winners exactly.

pub mod arith;
pub mod diophantine;
pub mod dimension;
mod error;
pub mod game;
pub mod lattice;

pub use error::{Error, Result};

/// Default comparison tolerance `eta = 2^-64` used by verdict-producing
/// operations unless the caller supplies a different one.
pub const DEFAULT_ETA: f64 = 5.421010862427522e-20;

/// Minimum mantissa width (bits) for high-precision floating scalars.
pub const MIN_PRECISION_BITS: usize = 128;
