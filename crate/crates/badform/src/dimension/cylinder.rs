//! Dimension of the bounded-quotient sets from exact cylinder lengths.
//!
//! A depth-`j` cylinder `[a_1, ..., a_j]` (all `a_i <= k`) is an interval of
//! length `1/(q_j (q_j + q_{j-1}))` with `q` the continuant recurrence; the
//! dimension is bracketed by the exponents where the pressure sum
//! `sum |I|^s` crosses `1` (upper bound, by submultiplicativity of lengths)
//! and `2^s` (lower bound, from the distortion constant `|I_uv| >= |I_u||I_v|/2`).

use serde_json::json;

use super::{DimensionEstimate, Method};
use crate::{Error, Result};

/// Cylinder-count budget: depth is reduced until `k^depth` fits.
const CYLINDER_BUDGET: u64 = 4_000_000;

/// Pressure-sum dimension estimate for the set of numbers whose partial
/// quotients are all `<= k`. `value` is the midpoint of the exact bracket and
/// `stderr` its half-width.
pub fn ek_cylinder_dim(k: u64, max_depth: usize) -> Result<DimensionEstimate> {
    if k == 0 || max_depth == 0 {
        return Err(Error::DegenerateInput("need k >= 1 and depth >= 1".into()));
    }
    if k == 1 {
        // single cylinder chain: one point per depth, dimension exactly 0
        return Ok(DimensionEstimate {
            value: 0.0,
            method: Method::CylinderPressure,
            stderr: 0.0,
            params: json!({ "k": 1, "depth": max_depth, "cylinders": 1 }),
        });
    }
    let mut depth = max_depth;
    while depth > 1 && (k as u128).pow(depth as u32) > CYLINDER_BUDGET as u128 {
        depth -= 1;
    }
    // continuants stay far below 2^53 for every admissible (k, depth), so the
    // interval lengths below are exact integer arithmetic in f64
    let mut log_lengths = Vec::with_capacity((k as usize).pow(depth as u32));
    collect_log_lengths(k, depth, 1.0, 0.0, &mut log_lengths);

    let pressure = |s: f64| -> f64 {
        log_lengths.iter().map(|&l| (s * l).exp()).sum::<f64>().ln()
    };
    // upper bound: pressure(s) = 0; lower bound: pressure(s) = s ln 2
    let s_hi = bisect(|s| pressure(s), 0.0, &log_lengths)?;
    let s_lo = bisect(|s| pressure(s) - s * std::f64::consts::LN_2, 0.0, &log_lengths)?;
    let value = 0.5 * (s_lo + s_hi);
    Ok(DimensionEstimate {
        value,
        method: Method::CylinderPressure,
        stderr: 0.5 * (s_hi - s_lo),
        params: json!({
            "k": k,
            "depth": depth,
            "requested_depth": max_depth,
            "cylinders": log_lengths.len(),
            "bracket": [s_lo, s_hi],
        }),
    })
}

fn collect_log_lengths(k: u64, depth: usize, q: f64, q_prev: f64, out: &mut Vec<f64>) {
    for a in 1..=k {
        let q_next = a as f64 * q + q_prev;
        if depth == 1 {
            out.push(-(q_next * (q_next + q)).ln());
        } else {
            collect_log_lengths(k, depth - 1, q_next, q, out);
        }
    }
}

/// Solves `f(s) = 0` for a strictly decreasing `f` on `s in [0, 1.5]`.
fn bisect(f: impl Fn(f64) -> f64, _target: f64, lens: &[f64]) -> Result<f64> {
    let (mut lo, mut hi) = (0.0f64, 1.5f64);
    if f(lo) <= 0.0 || f(hi) >= 0.0 {
        return Err(Error::DegenerateInput(format!(
            "pressure equation has no root in [0, 1.5] over {} cylinders",
            lens.len()
        )));
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
