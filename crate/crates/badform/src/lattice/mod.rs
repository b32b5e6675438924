//! Unimodular lattices, the shear embedding of a matrix system, the diagonal
//! flow, and the quantitative correspondence between cusp excursions and
//! Diophantine violations.

mod reduce;

pub(crate) use reduce::eval_sup_norm;

use num_traits::ToPrimitive;

use crate::arith::Real;
use crate::diophantine::MatrixSystem;
use crate::{Error, Result};

/// Determinant drift tolerated before a basis is rejected as non-unimodular
/// (scaled by the ambient dimension).
pub const UNIMODULAR_TOL: f64 = 1e-9;

/// Basis of a unimodular lattice in `R^(m+n)`, stored column-major with the
/// `(m, n)` split tag of the flow that acts on it.
#[derive(Debug, Clone)]
pub struct LatticeBasis {
    split: (usize, usize),
    cols: Vec<Vec<Real>>,
}

impl LatticeBasis {
    pub fn from_cols(cols: Vec<Vec<Real>>, split: (usize, usize)) -> Result<Self> {
        let d = split.0 + split.1;
        if cols.len() != d || cols.iter().any(|c| c.len() != d) {
            return Err(Error::DegenerateInput(format!(
                "expected a {d}x{d} basis for split {split:?}"
            )));
        }
        let b = LatticeBasis { split, cols };
        let det = b.det_f64();
        if !det.is_finite() || (det.abs() - 1.0).abs() > UNIMODULAR_TOL * d as f64 {
            return Err(Error::DegenerateInput(format!(
                "basis determinant {det} is not unimodular within tolerance"
            )));
        }
        Ok(b)
    }

    pub fn dim(&self) -> usize {
        self.split.0 + self.split.1
    }

    pub fn split(&self) -> (usize, usize) {
        self.split
    }

    pub fn columns(&self) -> &[Vec<Real>] {
        &self.cols
    }

    pub fn to_f64_cols(&self) -> Vec<Vec<f64>> {
        self.cols
            .iter()
            .map(|c| c.iter().map(|x| x.to_f64()).collect())
            .collect()
    }

    pub fn det_f64(&self) -> f64 {
        det_f64_cols(&self.to_f64_cols())
    }
}

pub(crate) fn det_f64_cols(cols: &[Vec<f64>]) -> f64 {
    let d = cols.len();
    let mut a: Vec<Vec<f64>> = (0..d)
        .map(|i| (0..d).map(|j| cols[j][i]).collect())
        .collect();
    let mut det = 1.0f64;
    for col in 0..d {
        let piv = (col..d)
            .max_by(|&x, &y| a[x][col].abs().partial_cmp(&a[y][col].abs()).unwrap())
            .unwrap();
        if a[piv][col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            a.swap(col, piv);
            det = -det;
        }
        det *= a[col][col];
        for r in col + 1..d {
            let f = a[r][col] / a[col][col];
            if f != 0.0 {
                for x in col..d {
                    a[r][x] -= f * a[col][x];
                }
            }
        }
    }
    det
}

/// The unipotent shear `[[I_m, A], [0, I_n]]` applied to the integer lattice:
/// the standard embedding of a matrix system into the space of unimodular
/// lattices. Determinant is exactly 1 by construction.
pub fn unipotent_embedding(a: &MatrixSystem) -> LatticeBasis {
    let (m, n) = (a.rows(), a.cols());
    let d = m + n;
    let mut cols = Vec::with_capacity(d);
    for j in 0..m {
        let mut c = vec![Real::zero(); d];
        c[j] = Real::one();
        cols.push(c);
    }
    for j in 0..n {
        let mut c = vec![Real::zero(); d];
        for i in 0..m {
            c[i] = a.entry(i, j).clone();
        }
        c[m + j] = Real::one();
        cols.push(c);
    }
    LatticeBasis {
        split: (m, n),
        cols,
    }
}

/// Flow scales for time `t`: the first `m` rows expand by `e^{t/m}` and the
/// last `n` rows contract by `e^{-t/n}`.
fn flow_scales(split: (usize, usize), t: f64) -> Result<(f64, f64)> {
    let (m, n) = split;
    let emt = (t / m as f64).exp();
    let ent = (-t / n as f64).exp();
    if !emt.is_finite() || !ent.is_finite() || emt == 0.0 || ent == 0.0 {
        return Err(Error::DegenerateInput(format!(
            "flow time {t} overflows the working precision"
        )));
    }
    Ok((emt, ent))
}

/// Applies the diagonal flow for time `t`. Row scales are exact dyadic
/// rationals (the `f64` exponentials embedded exactly), so exact entries stay
/// exact and the determinant drifts only at the `1e-16` relative level.
pub fn apply_flow(basis: &LatticeBasis, t: f64) -> Result<LatticeBasis> {
    let (m, _n) = basis.split;
    let (emt, ent) = flow_scales(basis.split, t)?;
    let se = Real::from_f64(emt)?;
    let sc = Real::from_f64(ent)?;
    let cols = basis
        .cols
        .iter()
        .map(|c| {
            c.iter()
                .enumerate()
                .map(|(i, x)| if i < m { x.mul(&se) } else { x.mul(&sc) })
                .collect()
        })
        .collect();
    Ok(LatticeBasis {
        split: basis.split,
        cols,
    })
}

/// Prepared f64 view of a basis with its LLL reduction and exact transform.
struct ReducedView {
    orig: Vec<Vec<f64>>,
    reduced: Vec<Vec<f64>>,
    transform: Vec<Vec<i128>>,
}

/// Reduces a basis with an accurate component evaluator. LLL's internal f64
/// column updates lose accuracy on ill-conditioned inputs (flowed bases), so
/// the loop re-evaluates the columns exactly from the integer transform and
/// reduces again until the transform stabilizes.
fn reduce_view_with(
    orig: Vec<Vec<f64>>,
    warm: Option<Vec<Vec<i128>>>,
    component_eval: &dyn Fn(&[i128]) -> Vec<f64>,
) -> ReducedView {
    let d = orig.len();
    let mut transform = warm.unwrap_or_else(|| {
        (0..d)
            .map(|j| (0..d).map(|i| (i == j) as i128).collect())
            .collect()
    });
    let mut reduced: Vec<Vec<f64>> = transform.iter().map(|t| component_eval(t)).collect();
    for _round in 0..6 {
        let before = transform.clone();
        reduce::lll_reduce(&mut reduced, &mut transform, 0.75);
        for (j, t) in transform.iter().enumerate() {
            reduced[j] = component_eval(t);
        }
        if transform == before {
            break;
        }
    }
    ReducedView {
        orig,
        reduced,
        transform,
    }
}

fn reduce_view(orig: Vec<Vec<f64>>, warm: Option<Vec<Vec<i128>>>) -> ReducedView {
    let cols = orig.clone();
    let eval = move |y: &[i128]| reduce::eval_components_dd(&cols, y);
    reduce_view_with(orig, warm, &eval)
}

/// Shortest nonzero vector in sup norm, certified by exhaustive enumeration of
/// an LLL-preconditioned coefficient box. Returns the minimum and an achieving
/// coefficient vector (in terms of the basis columns as given).
///
/// When every basis entry is exact the winner's norm is re-evaluated exactly.
pub fn shortest_vector(basis: &LatticeBasis, search_bound: u64) -> Result<(Real, Vec<i64>)> {
    let view = reduce_view(basis.to_f64_cols(), None);
    let eval = |y: &[i128]| eval_sup_norm(&view.orig, y);
    let sv = reduce::shortest_sup_norm(&eval, &view.reduced, &view.transform, search_bound, None)?;
    let coeffs: Vec<i64> = sv
        .coeffs
        .iter()
        .map(|&c| {
            c.to_i64()
                .ok_or_else(|| Error::DegenerateInput("coefficient overflow".into()))
        })
        .collect::<Result<_>>()?;
    let exact = basis.cols.iter().all(|c| c.iter().all(|x| x.is_exact()));
    let norm = if exact {
        exact_sup_norm(basis, &coeffs)
    } else {
        Real::from_f64(sv.norm)?
    };
    Ok((norm, coeffs))
}

fn exact_sup_norm(basis: &LatticeBasis, coeffs: &[i64]) -> Real {
    let d = basis.dim();
    let mut comps = vec![Real::zero(); d];
    for (j, &c) in coeffs.iter().enumerate() {
        if c != 0 {
            let cr = Real::from_i64(c);
            for i in 0..d {
                comps[i] = comps[i].add(&basis.cols[j][i].mul(&cr));
            }
        }
    }
    crate::arith::sup_norm(&comps)
}

/// Certified shortest sup norm of raw f64 columns, with the search capped at
/// `cap` (exact below the cap, a certificate of `>= cap` otherwise). Returns
/// the norm together with the LLL-reduced columns, which generate the same
/// lattice and keep later subdivision steps well conditioned.
pub fn capped_shortest_with_reduction(
    cols: &[Vec<f64>],
    search_bound: u64,
    cap: f64,
) -> Result<(f64, Vec<Vec<f64>>)> {
    let view = reduce_view(cols.to_vec(), None);
    let eval = |y: &[i128]| eval_sup_norm(&view.orig, y);
    let sv = reduce::shortest_sup_norm(
        &eval,
        &view.reduced,
        &view.transform,
        search_bound,
        Some(cap),
    )?;
    Ok((sv.norm, view.reduced))
}

/// Certified minimum sup norm of raw f64 columns.
pub fn basis_min_sup_norm(cols: &[Vec<f64>], search_bound: u64) -> Result<f64> {
    let view = reduce_view(cols.to_vec(), None);
    let eval = |y: &[i128]| eval_sup_norm(&view.orig, y);
    let sv = reduce::shortest_sup_norm(&eval, &view.reduced, &view.transform, search_bound, None)?;
    Ok(sv.norm)
}

/// Does the lattice meet the open ball of radius `eps` in a nonzero point?
/// True iff the certified shortest vector is below `eps * (1 - eta)`.
pub fn in_cusp(basis: &LatticeBasis, eps: &Real, search_bound: u64) -> Result<bool> {
    let eps_f = eps.to_f64();
    if !(eps_f > 0.0 && eps_f < 1.0) {
        return Err(Error::DegenerateInput("need 0 < eps < 1".into()));
    }
    let view = reduce_view(basis.to_f64_cols(), None);
    let eval = |y: &[i128]| eval_sup_norm(&view.orig, y);
    let sv = reduce::shortest_sup_norm(
        &eval,
        &view.reduced,
        &view.transform,
        search_bound,
        Some(eps_f * 1.0001),
    )?;
    let threshold = eps.mul(&Real::from_f64(1.0 - crate::DEFAULT_ETA)?);
    Ok(Real::from_f64(sv.norm)? < threshold)
}

/// One sample of the orbit's shortest-vector profile.
#[derive(Debug, Clone)]
pub struct OrbitSample {
    pub t: f64,
    pub delta: f64,
    /// Coefficients of the achieving vector in the shear-embedding basis.
    pub witness: Vec<i64>,
}

/// Sampled profile `delta(t)` of the shortest nonzero sup norm along the flow
/// orbit of the embedded lattice, with the log-Lipschitz step margin that
/// certifies behavior between samples.
#[derive(Debug, Clone)]
pub struct OrbitProfile {
    pub m: usize,
    pub n: usize,
    pub dt: f64,
    /// `log delta` moves by at most this much across one step.
    pub lipschitz_step: f64,
    pub samples: Vec<OrbitSample>,
}

impl OrbitProfile {
    pub fn min_delta(&self) -> f64 {
        self.samples
            .iter()
            .fold(f64::INFINITY, |m, s| m.min(s.delta))
    }

    /// CSV serialization: header `t,delta,witness`, witness space-separated.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,delta,witness\n");
        for s in &self.samples {
            let w: Vec<String> = s.witness.iter().map(|x| x.to_string()).collect();
            out.push_str(&format!("{},{},{}\n", s.t, s.delta, w.join(" ")));
        }
        out
    }
}

/// Scans `delta(t)` for `t = 0, dt, 2dt, ..., <= t_max` over the orbit of the
/// shear embedding of `a`. Evaluation is structure-aware: the unipotent part
/// of every candidate vector is accumulated in double-double before the flow
/// scales multiply in, so no accuracy is lost to cancellation at large `t`.
pub fn orbit_profile(
    a: &MatrixSystem,
    t_max: f64,
    dt: f64,
    search_bound: u64,
) -> Result<OrbitProfile> {
    if !(dt > 0.0) || t_max < dt {
        return Err(Error::DegenerateInput("need dt > 0 and t_max >= dt".into()));
    }
    let (m, n) = (a.rows(), a.cols());
    let d = m + n;
    let rows = a.to_f64_rows();
    // Double-double split of each entry so exact irrational inputs keep
    // ~32 significant digits through the inner cancellations; with plain f64
    // entries the scan would silently follow the dyadic approximation once
    // candidate coefficients reach ~1/ulp(A).
    let rows_dd: Vec<Vec<reduce::Dd>> = (0..m)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let x = a.entry(i, j);
                    let hi = x.to_f64();
                    let lo = x.sub(&Real::from_f64(hi).unwrap_or_else(|_| Real::zero())).to_f64();
                    reduce::Dd { hi, lo }
                })
                .collect()
        })
        .collect();
    let steps = (t_max / dt).floor() as usize;
    let mut samples = Vec::with_capacity(steps + 1);
    let mut warm: Option<Vec<Vec<i128>>> = None;
    for k in 0..=steps {
        let t = k as f64 * dt;
        let (emt, ent) = flow_scales((m, n), t)?;
        // columns of the flowed shear embedding
        let mut cols = Vec::with_capacity(d);
        for j in 0..m {
            let mut c = vec![0.0; d];
            c[j] = emt;
            cols.push(c);
        }
        for j in 0..n {
            let mut c = vec![0.0; d];
            for i in 0..m {
                c[i] = emt * rows[i][j];
            }
            c[m + j] = ent;
            cols.push(c);
        }
        // Structure-aware evaluation: the unipotent inner sums cancel, so they
        // are accumulated in double-double before the flow scales multiply in.
        let components = {
            let rows_dd = rows_dd.clone();
            move |y: &[i128]| -> Vec<f64> {
                let mut out = vec![0.0; m + n];
                for (i, row) in rows_dd.iter().enumerate() {
                    let mut acc = reduce::Dd::from_f64(y[i] as f64);
                    for (j, rv) in row.iter().enumerate() {
                        let yj = y[m + j] as f64;
                        acc = reduce::dd_add_prod(acc, yj, rv.hi);
                        acc = reduce::dd_add_prod(acc, yj, rv.lo);
                    }
                    out[i] = reduce::dd_mul_f64(acc, emt).value();
                }
                for j in 0..n {
                    out[m + j] = y[m + j] as f64 * ent;
                }
                out
            }
        };
        let view = reduce_view_with(cols, warm.take(), &components);
        let eval = |y: &[i128]| -> f64 {
            components(y).iter().fold(0.0f64, |s, x| s.max(x.abs()))
        };
        let sv =
            reduce::shortest_sup_norm(&eval, &view.reduced, &view.transform, search_bound, None)?;
        warm = Some(view.transform.clone());
        let witness: Vec<i64> = sv
            .coeffs
            .iter()
            .map(|&c| {
                c.to_i64()
                    .ok_or_else(|| Error::DegenerateInput("witness overflow".into()))
            })
            .collect::<Result<_>>()?;
        samples.push(OrbitSample {
            t,
            delta: sv.norm,
            witness,
        });
    }
    let lipschitz_step = (1.0 / m as f64).max(1.0 / n as f64) * dt;
    Ok(OrbitProfile {
        m,
        n,
        dt,
        lipschitz_step,
        samples,
    })
}

/// Verdict of the cusp-avoidance scan.
#[derive(Debug, Clone)]
pub enum DaniVerdict {
    /// No certified sample entered the cusp neighborhood. `boundary` is set
    /// when some inter-sample window could not be certified (the profile came
    /// within its Lipschitz margin of the threshold without crossing it).
    AvoidsCuspUpTo { t_max: f64, boundary: bool },
    /// A sample point of the orbit lies inside the cusp neighborhood.
    EntersCuspAt { t: f64, witness: Vec<i64> },
}

impl DaniVerdict {
    pub fn enters(&self) -> Option<f64> {
        match self {
            DaniVerdict::EntersCuspAt { t, .. } => Some(*t),
            _ => None,
        }
    }
}

/// Margin below the threshold required before a sample counts as a certified
/// cusp entry (absorbs the `~1e-14` relative noise of the scan itself).
pub const ENTRY_MARGIN: f64 = 1e-9;

/// Quantitative correspondence check: sets `eps = c^{1/(m+n)}` and scans the
/// orbit. The returned `f64` is the threshold `eps` actually used.
pub fn dani_check(
    a: &MatrixSystem,
    c: &Real,
    t_max: f64,
    dt: f64,
    search_bound: u64,
) -> Result<(DaniVerdict, f64)> {
    let cf = c.to_f64();
    if !(cf > 0.0 && cf < 1.0) {
        return Err(Error::DegenerateInput("need 0 < c < 1".into()));
    }
    let d = a.rows() + a.cols();
    let eps = c.nth_root(d as u32)?.to_f64();
    let profile = orbit_profile(a, t_max, dt, search_bound)?;
    Ok((cusp_verdict_from_profile(&profile, eps, t_max), eps))
}

/// Applies the entry/avoidance decision rule to an existing profile.
pub fn cusp_verdict_from_profile(profile: &OrbitProfile, eps: f64, t_max: f64) -> DaniVerdict {
    let lip = profile.lipschitz_step.exp();
    let mut boundary = false;
    for s in &profile.samples {
        if s.delta < eps * (1.0 - ENTRY_MARGIN) {
            return DaniVerdict::EntersCuspAt {
                t: s.t,
                witness: s.witness.clone(),
            };
        }
        // Between-samples certificate: delta(t) >= delta(t_i) e^{-L dt}.
        if s.delta / lip < eps {
            boundary = true;
        }
    }
    DaniVerdict::AvoidsCuspUpTo { t_max, boundary }
}

/// The flow conjugation identity rescales a matrix offset by
/// `e^{((m+n)/(mn)) t}`: conjugating the shear of a difference matrix by the
/// time-`t` flow is the shear of the rescaled difference.
pub fn conjugate_translation(delta_a: &MatrixSystem, t: f64) -> Result<MatrixSystem> {
    let (m, n) = (delta_a.rows() as f64, delta_a.cols() as f64);
    let factor = ((m + n) / (m * n) * t).exp();
    if !factor.is_finite() {
        return Err(Error::DegenerateInput(format!(
            "conjugation factor overflows at t = {t}"
        )));
    }
    Ok(delta_a.scale(&Real::from_f64(factor)?))
}

/// Lower bound `b * delta^(m+n)` for the injectivity radius away from the
/// cusp neighborhood of size `delta`. The constant `b` is convention-dependent
/// and supplied by the caller.
pub fn injectivity_radius_lower_bound(delta: f64, b: f64, m: u32, n: u32) -> f64 {
    assert!(delta > 0.0 && b > 0.0);
    b * delta.powi((m + n) as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn phi_system() -> MatrixSystem {
        MatrixSystem::scalar(Real::phi())
    }

    #[test]
    fn embedding_shapes_and_determinant() {
        let z = unipotent_embedding(&MatrixSystem::zero(2, 1));
        assert_eq!(z.dim(), 3);
        assert!((z.det_f64() - 1.0).abs() < 1e-15);
        let b = unipotent_embedding(&phi_system());
        let cols = b.to_f64_cols();
        assert_eq!(cols[0], vec![1.0, 0.0]);
        assert!((cols[1][0] - 1.618033988749895).abs() < 1e-15);
        assert_eq!(cols[1][1], 1.0);
        let mut s = 0x2545f4914f6cdd1du64;
        for _ in 0..100 {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            let x = (s >> 11) as f64 / (1u64 << 53) as f64;
            let a = MatrixSystem::new(
                2,
                2,
                vec![
                    Real::from_f64(x).unwrap(),
                    Real::from_f64(x * 0.7).unwrap(),
                    Real::from_f64(1.0 - x).unwrap(),
                    Real::from_f64(x * x).unwrap(),
                ],
            )
            .unwrap();
            let det = unipotent_embedding(&a).det_f64();
            assert!((det - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn flow_basics() {
        let b = unipotent_embedding(&MatrixSystem::zero(1, 1));
        let id = apply_flow(&b, 0.0).unwrap();
        assert_eq!(id.to_f64_cols(), b.to_f64_cols());
        let two = apply_flow(&b, std::f64::consts::LN_2).unwrap();
        let cols = two.to_f64_cols();
        assert!((cols[0][0] - 2.0).abs() < 1e-14);
        assert!((cols[1][1] - 0.5).abs() < 1e-15);
        assert!(apply_flow(&b, 1e9).is_err());
    }

    #[test]
    fn flow_group_law_within_tolerance() {
        let a = MatrixSystem::new(
            1,
            2,
            vec![Real::from_f64(0.31).unwrap(), Real::from_f64(0.77).unwrap()],
        )
        .unwrap();
        let b = unipotent_embedding(&a);
        for &(s, t) in &[(0.3, 0.9), (1.5, -0.4), (2.0, 2.0)] {
            let one = apply_flow(&apply_flow(&b, s).unwrap(), t).unwrap();
            let two = apply_flow(&b, s + t).unwrap();
            for (c1, c2) in one.to_f64_cols().iter().zip(two.to_f64_cols()) {
                for (x, y) in c1.iter().zip(c2) {
                    assert!((x - y).abs() <= 1e-12 * (1.0 + y.abs()));
                }
            }
        }
    }

    #[test]
    fn shortest_vector_basics() {
        let id = unipotent_embedding(&MatrixSystem::zero(1, 1));
        let (nm, v) = shortest_vector(&id, 1 << 20).unwrap();
        assert_eq!(nm, Real::one());
        assert_eq!(v.iter().map(|x| x.abs()).max(), Some(1));

        let diag = apply_flow(&id, std::f64::consts::LN_2).unwrap();
        let (nm, v) = shortest_vector(&diag, 1 << 20).unwrap();
        assert!((nm.to_f64() - 0.5).abs() < 1e-12);
        assert_eq!(v, vec![0, 1]);
    }

    #[test]
    fn shortest_vector_flowed_phi_regression() {
        // g_{ln 3} u_phi: certified minimum is 3*(2 phi - 3) = 3 sqrt(5) - 6
        // at coefficients (p, q) = (-3, 2) up to sign.
        let b = apply_flow(&unipotent_embedding(&phi_system()), 3f64.ln()).unwrap();
        let (nm, v) = shortest_vector(&b, 1 << 20).unwrap();
        assert!((nm.to_f64() - 0.7082039324993694).abs() < 1e-10);
        assert_eq!(v[1].abs(), 2);
    }

    #[test]
    fn cusp_membership() {
        let id = unipotent_embedding(&MatrixSystem::zero(1, 1));
        let half = Real::parse("0.5", 128).unwrap();
        assert!(!in_cusp(&id, &half, 1 << 20).unwrap());
        let deep = apply_flow(&id, 2.0).unwrap(); // shortest e^-2 = 0.135
        assert!(in_cusp(&deep, &half, 1 << 20).unwrap());
    }

    #[test]
    fn orbit_of_zero_matrix_decays_like_exp() {
        let p = orbit_profile(&MatrixSystem::zero(1, 1), 3.0, 0.25, 1 << 20).unwrap();
        for s in &p.samples {
            assert!((s.delta - (-s.t).exp()).abs() < 1e-12 * (1.0 + s.delta));
        }
    }

    #[test]
    fn orbit_of_rational_vanishes() {
        let a = MatrixSystem::scalar(Real::parse("1/2", 128).unwrap());
        let p = orbit_profile(&a, 6.0, 0.5, 1 << 20).unwrap();
        let last = p.samples.last().unwrap();
        // vector from (p_int, q) = (1, 2): (0, 2 e^{-t})
        assert!((last.delta - 2.0 * (-6.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn orbit_of_phi_dips_to_inverse_phi() {
        // First dip: quality (3 - sqrt 5)/2 at q = 1 bottoms out at
        // sqrt((3 - sqrt 5)/2) = (sqrt 5 - 1)/2 at t = ln(phi).
        let p = orbit_profile(&phi_system(), 5.0, 1e-3, 1 << 20).unwrap();
        let min = p.min_delta();
        let inv_phi = 0.6180339887498949;
        assert!((min - inv_phi).abs() < 2e-4, "min={min}");
        assert!(min >= inv_phi - 1e-9);
    }

    #[test]
    fn flow_compatibility_route_cross_check() {
        // delta(t) on the flowed basis equals the structured minimum
        // min over (p, q) of max(e^{t/m} |Aq - p|, e^{-t/n} |q|).
        let mut s = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..25 {
            let a = MatrixSystem::scalar(Real::from_f64(next()).unwrap());
            let t = 3.0 * next();
            let basis = apply_flow(&unipotent_embedding(&a), t).unwrap();
            let (nm, _) = shortest_vector(&basis, 1 << 20).unwrap();
            let av = a.entry(0, 0).to_f64();
            let (emt, ent) = (t.exp(), (-t).exp());
            let mut brute = f64::INFINITY;
            for q in -40i64..=40 {
                for p in -40i64..=40 {
                    if p == 0 && q == 0 {
                        continue;
                    }
                    let head = emt * (p as f64 + av * q as f64);
                    let tail = ent * q as f64;
                    brute = brute.min(head.abs().max(tail.abs()));
                }
            }
            assert!((nm.to_f64() - brute).abs() < 1e-9, "t={t}");
        }
    }

    #[test]
    fn dani_verdicts_for_phi() {
        // True constant of phi is (3 - sqrt 5)/2 = 0.381966...; c below it
        // avoids the cusp, c above it enters near t ~ 0.46.
        let c_avoid = Real::parse("0.37", 128).unwrap();
        let (v, eps) = dani_check(&phi_system(), &c_avoid, 20.0, 1e-3, 1 << 20).unwrap();
        assert!((eps - 0.37f64.sqrt()).abs() < 1e-12);
        assert!(v.enters().is_none(), "{v:?}");

        let c_enter = Real::parse("0.40", 128).unwrap();
        let (v, _) = dani_check(&phi_system(), &c_enter, 20.0, 1e-3, 1 << 20).unwrap();
        let t = v.enters().expect("should enter");
        assert!((0.40..0.52).contains(&t), "t={t}");

        // rational systems always fall into the cusp
        let half = MatrixSystem::scalar(Real::parse("1/2", 128).unwrap());
        let c = Real::parse("0.25", 128).unwrap();
        let (v, _) = dani_check(&half, &c, 20.0, 1e-3, 1 << 20).unwrap();
        assert!(v.enters().is_some());
    }

    #[test]
    fn conjugation_identity_against_matrix_product() {
        // g_t u_{dA} g_{-t} = u_{dA e^{((m+n)/mn) t}}: check by comparing
        // g_t u_{a1} with u_{scaled} g_t u_{a0} as matrices for m = n = 1.
        let mut s = 0xdeadbeefcafef00du64;
        let mut next = move || {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..100 {
            let t = 2.0 * next();
            let a0 = next();
            let a1 = next();
            let da = a1 - a0;
            let lhs = apply_flow(
                &unipotent_embedding(&MatrixSystem::scalar(Real::from_f64(a1).unwrap())),
                t,
            )
            .unwrap();
            let scaled =
                conjugate_translation(&MatrixSystem::scalar(Real::from_f64(da).unwrap()), t)
                    .unwrap();
            let rhs_inner = apply_flow(
                &unipotent_embedding(&MatrixSystem::scalar(Real::from_f64(a0).unwrap())),
                t,
            )
            .unwrap();
            let sc = scaled.entry(0, 0).to_f64();
            let rc = rhs_inner.to_f64_cols();
            let mut rhs = rc.clone();
            for j in 0..2 {
                rhs[j][0] = rc[j][0] + sc * rc[j][1];
            }
            for (c1, c2) in lhs.to_f64_cols().iter().zip(&rhs) {
                for (x, y) in c1.iter().zip(c2) {
                    assert!((x - y).abs() < 1e-9 * (1.0 + y.abs()), "t={t}");
                }
            }
        }
    }

    #[test]
    fn conjugation_scale_factor() {
        let da = MatrixSystem::scalar(Real::one());
        let same = conjugate_translation(&da, 0.0).unwrap();
        assert_eq!(same.entry(0, 0).to_f64(), 1.0);
        let four = conjugate_translation(&da, std::f64::consts::LN_2).unwrap();
        assert!((four.entry(0, 0).to_f64() - 4.0).abs() < 1e-14);
    }

    #[test]
    fn injectivity_bound_values() {
        assert!((injectivity_radius_lower_bound(0.5, 0.1, 1, 1) - 0.025).abs() < 1e-15);
        assert_eq!(injectivity_radius_lower_bound(1.0, 1.0, 1, 1), 1.0);
        let mut prev = 0.0;
        for i in 1..10 {
            let v = injectivity_radius_lower_bound(i as f64 * 0.1, 0.1, 2, 1);
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn lipschitz_margin_certifies_between_samples() {
        // Every fine sample between two coarse ones must respect the coarse
        // Lipschitz envelope.
        let a = phi_system();
        let coarse = orbit_profile(&a, 2.0, 0.1, 1 << 20).unwrap();
        let fine = orbit_profile(&a, 2.0, 0.01, 1 << 20).unwrap();
        let lip = coarse.lipschitz_step;
        for w in coarse.samples.windows(2) {
            let (s0, s1) = (&w[0], &w[1]);
            let floor0 = s0.delta * (-lip).exp();
            for f in fine
                .samples
                .iter()
                .filter(|f| f.t >= s0.t - 1e-12 && f.t <= s1.t + 1e-12)
            {
                assert!(f.delta >= floor0 * (1.0 - 1e-9));
            }
        }
    }

    #[test]
    fn orbit_csv_shape() {
        let p = orbit_profile(&MatrixSystem::zero(1, 1), 1.0, 0.5, 1 << 20).unwrap();
        let csv = p.to_csv();
        let lines: Vec<&str> = csv.trim().lines().collect();
        assert_eq!(lines[0], "t,delta,witness");
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("0,1,"));
    }

    #[test]
    fn search_bound_too_small_is_reported() {
        let b = apply_flow(&unipotent_embedding(&phi_system()), 10.0).unwrap();
        match shortest_vector(&b, 0) {
            Err(Error::SearchBoundTooSmall { .. }) => {}
            other => panic!("expected SearchBoundTooSmall, got {other:?}"),
        }
    }

    #[test]
    fn exact_norm_for_exact_bases() {
        let b = unipotent_embedding(&MatrixSystem::scalar(Real::parse("1/3", 128).unwrap()));
        let (nm, _) = shortest_vector(&b, 1 << 20).unwrap();
        assert!(nm.is_exact());
        assert_eq!(nm, Real::one());
    }
}
