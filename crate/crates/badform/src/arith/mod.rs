//! Exact and precision-tracked scalar arithmetic, sup-norm geometry, and
//! continued fractions.

pub mod cf;
pub mod real;
pub mod surd;

pub use cf::{CfTail, ContinuedFraction};
pub use real::{BigFloat, Real};
pub use surd::Surd;

use num_bigint::BigInt;

/// `max_i |v_i|` of a nonempty vector.
pub fn sup_norm(v: &[Real]) -> Real {
    assert!(!v.is_empty(), "sup norm of empty vector");
    let mut best = v[0].abs();
    for x in &v[1..] {
        let a = x.abs();
        if a > best {
            best = a;
        }
    }
    best
}

/// Distance (sup norm) from `v` to its nearest integer vector, together with
/// that vector. Coordinates exactly halfway between integers round toward the
/// smaller integer so the result is reproducible.
pub fn dist_to_nearest_int_vector(v: &[Real]) -> (Real, Vec<BigInt>) {
    assert!(!v.is_empty(), "empty vector");
    let nearest: Vec<BigInt> = v.iter().map(|x| x.round_half_down()).collect();
    let diffs: Vec<Real> = v
        .iter()
        .zip(&nearest)
        .map(|(x, p)| x.sub(&Real::from_bigint(p.clone())))
        .collect();
    (sup_norm(&diffs), nearest)
}

/// f64 fast-path versions used inside bulk searches.
#[allow(dead_code)]
pub(crate) fn sup_norm_f64(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}
