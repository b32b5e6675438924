//! Covering upper-bound estimator: subdivide a small box of matrix offsets,
//! kill every subcube whose center's renormalized lattice falls into the cusp
//! neighborhood, and read a box-dimension bound off the survivor counts.
//!
//! Renormalization keeps the procedure at unit scale: a surviving subcube
//! carries the flowed lattice of its center, and the next level tests
//! `g_t u_{offset * e^{sigma t}}` against that lattice instead of flowing the
//! original lattice for ever longer times. The conjugation identity makes the
//! two routes equal, which the tests check directly.

use serde_json::json;

use super::{DimensionEstimate, Method};
use crate::arith::Real;
use crate::diophantine::MatrixSystem;
use crate::lattice::{self, unipotent_embedding};
use crate::{Error, Result};

/// Parameters of one covering run.
#[derive(Debug, Clone)]
pub struct CoverParams {
    pub c: f64,
    /// Flow time per level; must exceed `m * n`.
    pub t: f64,
    pub depth: usize,
    /// Injectivity-radius constant (the box has side `b * delta^{m+n}`).
    pub b: f64,
    pub search_bound: u64,
}

impl Default for CoverParams {
    fn default() -> Self {
        CoverParams {
            c: 0.05,
            t: 10f64.ln(),
            depth: 3,
            b: 0.1,
            search_bound: 1 << 22,
        }
    }
}

/// Per-level survivor statistics.
#[derive(Debug, Clone)]
pub struct CoverLevelStats {
    pub level: usize,
    pub tested: u64,
    pub survivors: u64,
}

/// Survivors of the final completed level: flattened centers (absolute matrix
/// offsets from the base point) and their renormalized, reduced lattice bases.
#[derive(Debug, Clone, Default)]
pub struct CoverFrontier {
    pub count: usize,
    pub mn: usize,
    pub d: usize,
    pub centers: Vec<f64>,
    pub bases: Vec<f64>,
}

/// Full report of a covering run.
#[derive(Debug, Clone)]
pub struct CoverReport {
    pub m: usize,
    pub n: usize,
    pub eps: f64,
    pub delta: f64,
    pub r: f64,
    pub n_axis: u64,
    pub n_total: u64,
    pub levels: Vec<CoverLevelStats>,
    /// level at which the cover died out, if it did
    pub emptied_at: Option<usize>,
    /// worst certification ratio `||v||(1+2r) / (2 delta)` over all kills
    /// (soundness requires it `<= 1` up to the entry margin)
    pub worst_kill_ratio: f64,
    pub frontier: CoverFrontier,
}

impl CoverReport {
    /// Per-level survivor fractions `survivors / tested`.
    pub fn level_fractions(&self) -> Vec<f64> {
        self.levels
            .iter()
            .map(|l| l.survivors as f64 / l.tested as f64)
            .collect()
    }

    /// `level,total,survivors` CSV.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("level,total,survivors\n");
        for l in &self.levels {
            out.push_str(&format!("{},{},{}\n", l.level, l.tested, l.survivors));
        }
        out
    }
}

/// Runs the covering procedure for `Bad(c)` offsets around the base system
/// `a0`. Returns the dimension estimate (depth-limit extrapolation of the
/// survivor ratios) plus the full per-level report.
pub fn covering_upper_bound(
    a0: &MatrixSystem,
    params: &CoverParams,
) -> Result<(DimensionEstimate, CoverReport)> {
    let (m, n) = (a0.rows(), a0.cols());
    let mn = m * n;
    let d = m + n;
    if !(params.c > 0.0 && params.c < 1.0) {
        return Err(Error::DegenerateInput("need 0 < c < 1".into()));
    }
    if params.t <= mn as f64 {
        return Err(Error::DegenerateInput(format!(
            "flow time must exceed m*n = {mn} (got {})",
            params.t
        )));
    }
    if params.depth == 0 {
        return Err(Error::DegenerateInput("depth must be >= 1".into()));
    }
    let eps = params.c.powf(1.0 / d as f64);
    let delta = eps / 2.0;
    let r = params.b * delta.powi(d as i32);
    if !(r < 0.5) {
        return Err(Error::DegenerateInput(format!(
            "box side r = {r} must stay below 1/2 (shrink b or c)"
        )));
    }
    // subdivision count per axis: floor(e^{sigma t}), sigma = (m+n)/(mn)
    let sigma = d as f64 / mn as f64;
    let scale = (sigma * params.t).exp();
    let n_axis = (scale * (1.0 + 1e-12)).floor() as u64;
    let n_total = (n_axis as u128).pow(mn as u32);
    if n_total > 1 << 40 {
        return Err(Error::DegenerateInput("subdivision too fine".into()));
    }
    let n_total = n_total as u64;

    // level 0: the single box B(0, r/2) carrying the base lattice
    let base = unipotent_embedding(a0);
    let mut frontier = CoverFrontier {
        count: 1,
        mn,
        d,
        centers: vec![0.0; mn],
        bases: flatten_basis(&base.to_f64_cols(), d),
    };
    let mut side = r;
    let mut levels = Vec::new();
    let mut emptied_at = None;
    let mut worst_kill_ratio: f64 = 0.0;
    let kill_threshold = delta * (1.0 - lattice::ENTRY_MARGIN);
    // Conjugation scale for offsets against the stored renormalized lattice:
    // level k tests g_t u_{(A_k - A_{k-1}) e^{sigma (k-1) t}} Lambda_{k-1},
    // so the factor starts at 1 and gains e^{sigma t} per level.
    let mut renorm_scale = 1.0f64;

    for level in 1..=params.depth {
        let tested = frontier.count as u64 * n_total;
        if tested > 24_000_000 {
            return Err(Error::DegenerateInput(format!(
                "level {level} would test {tested} cubes; raise c or cut depth"
            )));
        }
        let child_side = side / n_axis as f64;
        let mut next = CoverFrontier {
            count: 0,
            mn,
            d,
            centers: Vec::new(),
            bases: Vec::new(),
        };
        let mut survivors = 0u64;
        for cube in 0..frontier.count {
            let center = &frontier.centers[cube * mn..(cube + 1) * mn];
            let basis_cols = unflatten_basis(&frontier.bases[cube * d * d..(cube + 1) * d * d], d);
            let mut idx = vec![0u64; mn];
            loop {
                // child center in absolute offset coordinates
                let mut child_center = vec![0.0; mn];
                for (k, cc) in child_center.iter_mut().enumerate() {
                    *cc = center[k] - side / 2.0 + (idx[k] as f64 + 0.5) * child_side;
                }
                // renormalized offset: (child - parent) * e^{sigma (k-1) t}
                let shear: Vec<f64> = child_center
                    .iter()
                    .zip(center)
                    .map(|(c, p)| (c - p) * renorm_scale)
                    .collect();
                let cols = flowed_shear_columns(&basis_cols, &shear, m, n, params.t)?;
                let sv = shortest_of(&cols, params.search_bound, delta * 1.0001)?;
                if sv.0 < kill_threshold {
                    // certification: the whole subcube maps into the doubled
                    // neighborhood together with its center's witness vector
                    let ratio = sv.0 * (1.0 + 2.0 * r) / (2.0 * delta);
                    worst_kill_ratio = worst_kill_ratio.max(ratio);
                    debug_assert!(ratio <= 1.0 + 1e-9);
                } else {
                    survivors += 1;
                    next.centers.extend_from_slice(&child_center);
                    next.bases.extend_from_slice(&flatten_basis(&sv.1, d));
                    next.count += 1;
                }
                let mut k = 0;
                loop {
                    idx[k] += 1;
                    if idx[k] < n_axis {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                    if k == mn {
                        break;
                    }
                }
                if k == mn {
                    break;
                }
            }
        }
        levels.push(CoverLevelStats {
            level,
            tested,
            survivors,
        });
        frontier = next;
        side = child_side;
        renorm_scale *= scale;
        if survivors == 0 {
            emptied_at = Some(level);
            break;
        }
    }

    let report = CoverReport {
        m,
        n,
        eps,
        delta,
        r,
        n_axis,
        n_total,
        levels,
        emptied_at,
        worst_kill_ratio,
        frontier,
    };
    let estimate = estimate_from_report(&report, params);
    Ok((estimate, report))
}

fn estimate_from_report(report: &CoverReport, params: &CoverParams) -> DimensionEstimate {
    let mn = (report.m * report.n) as f64;
    let ln_n = (report.n_total as f64).ln();
    let fractions = report.level_fractions();
    let value = if report.emptied_at.is_some() {
        0.0
    } else {
        // depth-limit extrapolation: the Cantor-type cover branches by
        // N * f_k per level, so the exponent uses the mean log-fraction
        let mean_ln_f =
            fractions.iter().map(|f| f.ln()).sum::<f64>() / fractions.len() as f64;
        (mn * (1.0 + mean_ln_f / ln_n)).clamp(0.0, mn)
    };
    // per-level (most conservative) reading: the largest single-level ratio
    let value_max_ratio = if report.emptied_at.is_some() {
        0.0
    } else {
        let max_f = fractions.iter().cloned().fold(0.0f64, f64::max);
        (mn * (1.0 + max_f.ln() / ln_n)).clamp(0.0, mn)
    };
    DimensionEstimate {
        value,
        method: Method::CoveringUpper,
        stderr: 0.0,
        params: json!({
            "m": report.m, "n": report.n,
            "c": params.c, "t": params.t, "b": params.b,
            "depth": params.depth,
            "eps": report.eps, "delta": report.delta, "r": report.r,
            "n_axis": report.n_axis, "n_per_cube": report.n_total,
            "level_fractions": fractions,
            "value_max_ratio": value_max_ratio,
            "emptied_at": report.emptied_at,
            "worst_kill_ratio": report.worst_kill_ratio,
            "survivor_counts": report.levels.iter().map(|l| l.survivors).collect::<Vec<_>>(),
        }),
    }
}

fn flatten_basis(cols: &[Vec<f64>], d: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(d * d);
    for col in cols {
        out.extend_from_slice(col);
    }
    out
}

fn unflatten_basis(flat: &[f64], d: usize) -> Vec<Vec<f64>> {
    (0..d).map(|j| flat[j * d..(j + 1) * d].to_vec()).collect()
}

/// Columns of `g_t * u_shear * B` where `shear` is an `m x n` offset matrix in
/// row-major order.
fn flowed_shear_columns(
    basis_cols: &[Vec<f64>],
    shear: &[f64],
    m: usize,
    n: usize,
    t: f64,
) -> Result<Vec<Vec<f64>>> {
    let d = m + n;
    let emt = (t / m as f64).exp();
    let ent = (-t / n as f64).exp();
    if !emt.is_finite() || ent == 0.0 {
        return Err(Error::DegenerateInput("flow overflow".into()));
    }
    let mut out = Vec::with_capacity(d);
    for col in basis_cols {
        let mut c = vec![0.0; d];
        for i in 0..m {
            let mut v = col[i];
            for j in 0..n {
                v += shear[i * n + j] * col[m + j];
            }
            c[i] = v * emt;
        }
        for j in 0..n {
            c[m + j] = col[m + j] * ent;
        }
        out.push(c);
    }
    Ok(out)
}

/// Certified shortest sup norm of a column basis, capped at `cap`, returning
/// the norm and the LLL-reduced column basis (same lattice) for reuse.
fn shortest_of(cols: &[Vec<f64>], search_bound: u64, cap: f64) -> Result<(f64, Vec<Vec<f64>>)> {
    let (norm, reduced) = lattice::capped_shortest_with_reduction(cols, search_bound, cap)?;
    Ok((norm, reduced))
}

/// Direct (un-renormalized) orbit test used by the cross-check suite: flows
/// the shear embedding of `a0 + offset` for the full elapsed time.
pub fn direct_orbit_delta(
    a0: &MatrixSystem,
    offset: &[f64],
    elapsed_t: f64,
    search_bound: u64,
) -> Result<f64> {
    let (m, n) = (a0.rows(), a0.cols());
    let mut entries = Vec::with_capacity(m * n);
    for i in 0..m {
        for j in 0..n {
            entries.push(
                a0.entry(i, j)
                    .add(&Real::from_f64(offset[i * n + j])?),
            );
        }
    }
    let sys = MatrixSystem::new(m, n, entries)?;
    let basis = lattice::apply_flow(&unipotent_embedding(&sys), elapsed_t)?;
    let (nm, _) = lattice::shortest_vector(&basis, search_bound)?;
    Ok(nm.to_f64())
}
