//! Box counting against a membership oracle with a log-log least-squares fit.

use serde_json::json;

use super::{DimensionEstimate, Method};
use crate::arith::Real;
use crate::diophantine::{ek_contains, EkVerdict};
use crate::{Error, Result};

/// Axis-aligned hypercube region to count over.
#[derive(Debug, Clone)]
pub struct Region {
    pub origin: Vec<f64>,
    pub side: f64,
}

impl Region {
    pub fn unit(dim: usize) -> Self {
        Region {
            origin: vec![0.0; dim],
            side: 1.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.origin.len()
    }
}

/// Grid cells of `region` at each scale that contain at least one
/// oracle-positive sample, fitted as `log(count) ~ dim * log(1/scale)`.
///
/// Sampling per cell is deterministic: the cell center first, then a Kronecker
/// (irrational-rotation) sequence, so runs are reproducible without an RNG.
/// Scales with zero positive cells are dropped from the regression; if all of
/// them are empty the input is degenerate. Full saturation at every scale is
/// reported via the `saturated` flag rather than an error (the fit then
/// returns the ambient dimension, which is the honest answer).
pub fn box_count_dim(
    oracle: &dyn Fn(&[f64]) -> bool,
    region: &Region,
    scales: &[f64],
    samples_per_cell: u32,
) -> Result<DimensionEstimate> {
    let d = region.dim();
    if scales.len() < 2 {
        return Err(Error::DegenerateInput("need at least two scales".into()));
    }
    for w in scales.windows(2) {
        if !(w[1] < w[0]) {
            return Err(Error::DegenerateInput(
                "scales must be strictly decreasing".into(),
            ));
        }
    }
    if !(region.side > 0.0) || samples_per_cell == 0 {
        return Err(Error::DegenerateInput("bad region or sample count".into()));
    }
    // Sample offsets inside a cell: equally spaced along the first axis
    // (every sub-feature wider than the pitch is then hit deterministically),
    // Kronecker (irrational-rotation) steps on the remaining axes.
    let mut alphas: Vec<f64> = [2f64, 3.0, 5.0, 7.0, 11.0, 13.0, 17.0, 19.0]
        .iter()
        .cycle()
        .take(d)
        .map(|p| p.sqrt().fract())
        .collect();
    alphas[0] = 1.0 / samples_per_cell as f64;

    let mut points = Vec::new(); // (ln(1/cell), ln(count))
    let mut counts = Vec::new();
    let mut saturated = true;
    for &scale in scales {
        let per_axis = ((region.side / scale).round() as u64).max(1);
        let total = (per_axis as u128).pow(d as u32);
        if total > (1 << 26) {
            return Err(Error::DegenerateInput(format!(
                "{total} cells at scale {scale} exceeds the counting budget"
            )));
        }
        let cell = region.side / per_axis as f64;
        let mut occupied = 0u64;
        let mut idx = vec![0u64; d];
        let mut sample = vec![0.0f64; d];
        'cells: loop {
            let mut hit = false;
            for s in 0..samples_per_cell {
                for i in 0..d {
                    let frac = if s == 0 {
                        0.5
                    } else {
                        (0.5 + s as f64 * alphas[i]).fract()
                    };
                    sample[i] = region.origin[i] + (idx[i] as f64 + frac) * cell;
                }
                if oracle(&sample) {
                    hit = true;
                    break;
                }
            }
            if hit {
                occupied += 1;
            }
            let mut k = 0;
            loop {
                idx[k] += 1;
                if idx[k] < per_axis {
                    break;
                }
                idx[k] = 0;
                k += 1;
                if k == d {
                    break 'cells;
                }
            }
        }
        counts.push((scale, per_axis, occupied, total as u64));
        if (occupied as u128) < total {
            saturated = false;
        }
        if occupied > 0 {
            points.push(((1.0 / cell).ln(), (occupied as f64).ln()));
        }
    }
    if points.len() < 2 {
        return Err(Error::DegenerateInput(
            "fewer than two scales produced occupied cells".into(),
        ));
    }
    let (slope, stderr) = least_squares(&points);
    let value = slope.clamp(0.0, d as f64);
    Ok(DimensionEstimate {
        value,
        method: Method::BoxCount,
        stderr,
        params: json!({
            "dim": d,
            "samples_per_cell": samples_per_cell,
            "saturated": saturated,
            "raw_slope": slope,
            "counts": counts
                .iter()
                .map(|(s, per_axis, occ, total)| json!({
                    "scale": s, "cells_per_axis": per_axis,
                    "occupied": occ, "total": total,
                }))
                .collect::<Vec<_>>(),
        }),
    })
}

fn least_squares(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points
        .iter()
        .map(|p| (p.0 - mean_x) * (p.1 - mean_y))
        .sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_res: f64 = points
        .iter()
        .map(|p| (p.1 - (slope * p.0 + intercept)).powi(2))
        .sum();
    let dof = (points.len().max(3) - 2) as f64;
    let stderr = (ss_res / dof / sxx).sqrt();
    (slope, stderr)
}

/// Membership oracle for the bounded-quotient set: grid samples are dyadic
/// rationals, so the expansion is exact and terminates; termination or any
/// quotient above `k` within `depth` excludes the point.
pub fn ek_box_oracle(k: u64, depth: usize) -> impl Fn(&[f64]) -> bool {
    move |x: &[f64]| {
        let v = x[0];
        if !(0.0..1.0).contains(&v) {
            return false;
        }
        matches!(
            Real::from_f64(v).ok().map(|r| ek_contains(&r, k, depth)),
            Some(Ok(EkVerdict::InUpToDepth))
        )
    }
}

/// Resolution-matched variant: accepts `x` when every partial quotient stays
/// `<= k` until the convergent denominator passes `q_resolution`. The accepted
/// set is a union of intervals of nearly uniform length `~ q_resolution^{-2}`,
/// which is the fattening of the bounded-quotient set that box counting with a
/// fixed sample pitch can measure without bias: fixed-depth truncation mixes
/// interval sizes across orders of magnitude.
pub fn ek_box_oracle_resolution(k: u64, q_resolution: u64) -> impl Fn(&[f64]) -> bool {
    move |x: &[f64]| {
        let v = x[0];
        if !(0.0..1.0).contains(&v) {
            return false;
        }
        // exact dyadic continued fraction on machine integers
        let (mut num, mut den) = match dyadic_parts(v) {
            Some(p) => p,
            None => return false,
        };
        // fractional part of v: expand den/num style Euclid
        let (mut q_prev, mut q) = (0u128, 1u128);
        while num != 0 {
            let a = den / num;
            let rem = den % num;
            den = num;
            num = rem;
            let q_next = a * q + q_prev;
            if a > k as u128 {
                return false;
            }
            q_prev = q;
            q = q_next;
            if q_prev > q_resolution as u128 {
                return true;
            }
        }
        false
    }
}

/// `(num, den)` of the fractional part of a finite `f64` in `[0, 1)`.
fn dyadic_parts(v: f64) -> Option<(u128, u128)> {
    if !(0.0..1.0).contains(&v) {
        return None;
    }
    let scaled = v * (1u128 << 60) as f64;
    let num = scaled as u128;
    if num == 0 {
        return None;
    }
    Some((num, 1u128 << 60))
}
