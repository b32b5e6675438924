//! Approximation-quality oracles for systems of linear forms.
//!
//! The central quantity is `|q|^n |Aq - p|^m` (sup norms, `p` the nearest
//! integer vector to `Aq`). Searches run over sup-norm shells of `q` in a fast
//! `f64` pass; when the matrix entries are exact the near-minimal candidates
//! are re-ranked in exact arithmetic so quadratic-surd anchors come out exact.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{
    dist_to_nearest_int_vector, sup_norm, CfTail, ContinuedFraction, Real,
};
use crate::{Error, Result, DEFAULT_ETA};

/// An `m x n` real matrix viewed as a system of `m` linear forms in `n`
/// variables. Entries are stored row-major.
#[derive(Debug, Clone)]
pub struct MatrixSystem {
    m: usize,
    n: usize,
    entries: Vec<Real>,
}

impl MatrixSystem {
    pub fn new(m: usize, n: usize, entries: Vec<Real>) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::DegenerateInput("m and n must be >= 1".into()));
        }
        if entries.len() != m * n {
            return Err(Error::DegenerateInput(format!(
                "expected {} entries for a {m}x{n} system, got {}",
                m * n,
                entries.len()
            )));
        }
        for e in &entries {
            if !e.to_f64().is_finite() {
                return Err(Error::DegenerateInput("non-finite entry".into()));
            }
        }
        Ok(MatrixSystem { m, n, entries })
    }

    /// 1x1 system from a single scalar.
    pub fn scalar(x: Real) -> Self {
        MatrixSystem {
            m: 1,
            n: 1,
            entries: vec![x],
        }
    }

    pub fn zero(m: usize, n: usize) -> Self {
        MatrixSystem {
            m,
            n,
            entries: vec![Real::zero(); m * n],
        }
    }

    pub fn rows(&self) -> usize {
        self.m
    }

    pub fn cols(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &Real {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[Real] {
        &self.entries
    }

    pub fn is_exact(&self) -> bool {
        self.entries.iter().all(|e| e.is_exact())
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.m)
            .map(|i| (0..self.n).map(|j| self.entry(i, j).to_f64()).collect())
            .collect()
    }

    /// `A q` in exact arithmetic.
    pub fn apply(&self, q: &[BigInt]) -> Vec<Real> {
        assert_eq!(q.len(), self.n);
        (0..self.m)
            .map(|i| {
                let mut acc = Real::zero();
                for j in 0..self.n {
                    acc = acc.add(&self.entry(i, j).mul(&Real::from_bigint(q[j].clone())));
                }
                acc
            })
            .collect()
    }

    /// Entrywise scaling, used by the flow-conjugation identity.
    pub fn scale(&self, factor: &Real) -> Self {
        MatrixSystem {
            m: self.m,
            n: self.n,
            entries: self.entries.iter().map(|e| e.mul(factor)).collect(),
        }
    }
}

/// A specific `(q, p)` pair and the quality `|q|^n |Aq - p|^m` it achieves.
#[derive(Debug, Clone)]
pub struct ApproximationWitness {
    pub q: Vec<BigInt>,
    pub p: Vec<BigInt>,
    pub quality: Real,
}

/// Truncated membership verdict: either no violation was found among all
/// `0 < |q| <= Q` (a semi-decision, not a proof) or a concrete violation.
#[derive(Debug, Clone)]
pub enum BadVerdict {
    ConsistentUpTo(u64),
    ViolatedBy(ApproximationWitness),
}

impl BadVerdict {
    pub fn is_consistent(&self) -> bool {
        matches!(self, BadVerdict::ConsistentUpTo(_))
    }
}

/// Verdict for membership in the bounded-quotient set `E_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EkVerdict {
    InUpToDepth,
    /// Some partial quotient `a_i` with the given 1-based index exceeds `k`,
    /// or the expansion terminated just before this index (rational input).
    ExcludedAt(usize),
}

/// Enumerates the canonical half of each sup-norm shell `|q| = s`,
/// `s = 1..=bound`, in lexicographic order within a shell (first nonzero
/// coordinate positive; `-q` mirrors `q` with equal quality). The callback
/// returns `false` to stop early.
pub fn for_each_q_shell(n: usize, bound: u64, mut f: impl FnMut(&[i64]) -> bool) {
    let mut q = vec![0i64; n];
    for s in 1..=bound as i64 {
        if !shell_rec(&mut q, 0, s, false, &mut f) {
            return;
        }
    }
}

fn shell_rec(
    q: &mut Vec<i64>,
    idx: usize,
    s: i64,
    hit: bool,
    f: &mut impl FnMut(&[i64]) -> bool,
) -> bool {
    let n = q.len();
    if idx == n {
        debug_assert!(hit);
        return f(q);
    }
    // Canonical half: leading zeros may only be followed by positive values.
    let leading_zero = q[..idx].iter().all(|&x| x == 0);
    if idx + 1 == n && !hit {
        // the last coordinate must realize the shell radius; visiting the
        // whole box here would make scalar scans quadratic in the bound
        let vals: &[i64] = if leading_zero { &[s] } else { &[-s, s] };
        for &v in vals {
            q[idx] = v;
            if !shell_rec(q, idx + 1, s, true, f) {
                q[idx] = 0;
                return false;
            }
        }
    } else {
        let lo = if leading_zero { 0 } else { -s };
        for v in lo..=s {
            q[idx] = v;
            if !shell_rec(q, idx + 1, s, hit || v.abs() == s, f) {
                q[idx] = 0;
                return false;
            }
        }
    }
    q[idx] = 0;
    true
}

fn q_to_bigint(q: &[i64]) -> Vec<BigInt> {
    q.iter().map(|&x| BigInt::from(x)).collect()
}

/// Quality of a single `q` with the minimizing nearest-integer `p` recorded.
/// Exact when the matrix is exact.
pub fn approx_quality(a: &MatrixSystem, q: &[BigInt]) -> ApproximationWitness {
    assert!(
        q.len() == a.cols() && q.iter().any(|x| !x.is_zero()),
        "q must be a nonzero vector in Z^n"
    );
    let image = a.apply(q);
    let (dist, p) = dist_to_nearest_int_vector(&image);
    let qn: Vec<Real> = q.iter().map(|x| Real::from_bigint(x.clone())).collect();
    let quality = sup_norm(&qn)
        .pow_u32(a.cols() as u32)
        .mul(&dist.pow_u32(a.rows() as u32));
    ApproximationWitness {
        q: q.to_vec(),
        p,
        quality,
    }
}

/// f64 quality of `q` against a prepared row matrix.
fn quality_f64(rows: &[Vec<f64>], q: &[i64]) -> f64 {
    let n = q.len();
    let mut dist: f64 = 0.0;
    for row in rows {
        let mut y = 0.0;
        for j in 0..n {
            y += row[j] * q[j] as f64;
        }
        let d = (y - y.round()).abs();
        if d > dist {
            dist = d;
        }
    }
    let s = q.iter().fold(0i64, |acc, &x| acc.max(x.abs())) as f64;
    s.powi(n as i32) * dist.powi(rows.len() as i32)
}

/// Minimum quality over all `0 < |q| <= bound` plus the minimizing witness
/// (ties broken by enumeration order). The value is an upper bound for the
/// true approximation constant of the system.
///
/// The scan runs in `f64`; every candidate within a small absolute margin of
/// the float minimum is re-evaluated through [`approx_quality`], so exact
/// matrices get an exact truncated minimum.
pub fn approx_constant_truncated(a: &MatrixSystem, bound: u64) -> (Real, ApproximationWitness) {
    assert!(bound >= 1);
    let rows = a.to_f64_rows();
    let mut best = f64::INFINITY;
    for_each_q_shell(a.cols(), bound, |q| {
        let v = quality_f64(&rows, q);
        if v < best {
            best = v;
        }
        true
    });
    // Absolute margin covering f64 rounding in the scan: |Aq| accumulates at
    // most ~n*|q|*max|A| ulps per form, amplified by the outer |q|^n power.
    let margin = best * 1e-9 + (bound as f64).powi(a.cols() as i32) * 3e-11 + 1e-300;
    let mut candidates: Vec<Vec<i64>> = Vec::new();
    for_each_q_shell(a.cols(), bound, |q| {
        if quality_f64(&rows, q) <= best + margin {
            candidates.push(q.to_vec());
        }
        candidates.len() < 20_000
    });
    let mut winner: Option<ApproximationWitness> = None;
    for q in &candidates {
        let w = approx_quality(a, &q_to_bigint(q));
        let better = match &winner {
            None => true,
            Some(cur) => w.quality < cur.quality,
        };
        if better {
            winner = Some(w);
        }
    }
    let w = winner.expect("at least one candidate");
    (w.quality.clone(), w)
}

/// Parallel variant of [`approx_constant_truncated`]: sup-norm shells are
/// split into contiguous chunks, one worker each, and candidates merge in
/// enumeration order, so the result (value, witness, and tie-breaking) is
/// identical to the sequential scan for every worker count.
pub fn approx_constant_truncated_threaded(
    a: &MatrixSystem,
    bound: u64,
    threads: usize,
) -> (Real, ApproximationWitness) {
    let workers = threads.clamp(1, 64).min(bound as usize);
    if workers <= 1 || bound < 64 {
        return approx_constant_truncated(a, bound);
    }
    let rows = a.to_f64_rows();
    let n = a.cols();
    // chunk boundaries over shells, weighted by shell volume ~ s^{n-1}
    let mut bounds_list = Vec::with_capacity(workers + 1);
    for w in 0..=workers {
        let frac = w as f64 / workers as f64;
        let cut = (bound as f64 * frac.powf(1.0 / n as f64)).round() as u64;
        bounds_list.push(cut.min(bound));
    }
    bounds_list[0] = 0;
    bounds_list[workers] = bound;
    let best = std::sync::Mutex::new(f64::INFINITY);
    std::thread::scope(|scope| {
        for w in 0..workers {
            let (lo, hi) = (bounds_list[w], bounds_list[w + 1]);
            let rows = &rows;
            let best = &best;
            scope.spawn(move || {
                let mut local = f64::INFINITY;
                for_shell_range(n, lo + 1, hi, |q| {
                    let v = quality_f64(rows, q);
                    if v < local {
                        local = v;
                    }
                    true
                });
                let mut g = best.lock().expect("poisoned");
                if local < *g {
                    *g = local;
                }
            });
        }
    });
    let best = *best.lock().expect("poisoned");
    let margin = best * 1e-9 + (bound as f64).powi(a.cols() as i32) * 3e-11 + 1e-300;
    // candidate pass, chunked again; per-chunk vectors concatenate in shell
    // order so the final exact re-rank sees the sequential enumeration order
    let mut chunk_candidates: Vec<Vec<Vec<i64>>> = vec![Vec::new(); workers];
    std::thread::scope(|scope| {
        for (w, slot) in chunk_candidates.iter_mut().enumerate() {
            let (lo, hi) = (bounds_list[w], bounds_list[w + 1]);
            let rows = &rows;
            scope.spawn(move || {
                for_shell_range(n, lo + 1, hi, |q| {
                    if quality_f64(rows, q) <= best + margin {
                        slot.push(q.to_vec());
                    }
                    slot.len() < 20_000
                });
            });
        }
    });
    let mut winner: Option<ApproximationWitness> = None;
    for q in chunk_candidates.iter().flatten() {
        let w = approx_quality(a, &q_to_bigint(q));
        let better = match &winner {
            None => true,
            Some(cur) => w.quality < cur.quality,
        };
        if better {
            winner = Some(w);
        }
    }
    let w = winner.expect("bound >= 1 guarantees a candidate");
    (w.quality.clone(), w)
}

fn for_shell_range(n: usize, lo: u64, hi: u64, mut f: impl FnMut(&[i64]) -> bool) {
    let mut q = vec![0i64; n];
    for s in lo..=hi {
        if !shell_rec(&mut q, 0, s as i64, false, &mut f) {
            return;
        }
    }
}

/// Semi-decides membership in the constant-`c` set by searching `|q| <= bound`.
/// A witness only counts as a violation when its quality is below
/// `c * (1 - eta)`, so hair-thin precision artifacts cannot flip the verdict.
pub fn is_bad_truncated(a: &MatrixSystem, c: &Real, bound: u64, eta: f64) -> BadVerdict {
    assert!(c.sign() > 0, "c must be positive");
    let threshold = c.mul(&Real::from_f64(1.0 - eta).expect("finite eta"));
    let thr_f = threshold.to_f64();
    let rows = a.to_f64_rows();
    let mut hit: Option<Vec<i64>> = None;
    // Loose f64 screen; anything near the threshold gets confirmed through
    // the full-precision path before it can flip the verdict.
    let screen = thr_f * (1.0 + 1e-9) + 1e-300;
    for_each_q_shell(a.cols(), bound, |q| {
        if quality_f64(&rows, q) < screen {
            let w = approx_quality(a, &q_to_bigint(q));
            if w.quality < threshold {
                hit = Some(q.to_vec());
                return false;
            }
        }
        true
    });
    match hit {
        Some(q) => BadVerdict::ViolatedBy(approx_quality(a, &q_to_bigint(&q))),
        None => BadVerdict::ConsistentUpTo(bound),
    }
}

/// Bounded-quotient membership up to `depth` partial quotients.
///
/// A terminated expansion (rational input) is an exclusion: past its end the
/// quotients are infinite for sandwich purposes, so rationals never count as
/// members.
pub fn ek_contains(x: &Real, k: u64, depth: usize) -> Result<EkVerdict> {
    let cf = ContinuedFraction::expand(x, depth)?;
    let bound = BigInt::from(k);
    for (idx, a) in cf.quotients.iter().enumerate() {
        if *a > bound {
            return Ok(EkVerdict::ExcludedAt(idx + 1));
        }
    }
    if cf.tail == CfTail::Terminated {
        return Ok(EkVerdict::ExcludedAt(cf.depth() + 1));
    }
    Ok(EkVerdict::InUpToDepth)
}

/// Outcome of the sandwich consistency check between direct search and
/// bounded-quotient membership.
#[derive(Debug, Clone)]
pub struct SandwichReport {
    pub ek: EkVerdict,
    /// verdict at c = 1/(k+2)
    pub lower: BadVerdict,
    /// verdict at c = 1/k
    pub upper: BadVerdict,
    pub contradiction: Option<String>,
}

impl SandwichReport {
    pub fn is_consistent(&self) -> bool {
        self.contradiction.is_none()
    }
}

/// Cross-checks `Bad(1/k) subset E_k subset Bad(1/(k+2))` at finite truncation.
///
/// Contradictions are only flagged when the truncations genuinely overlap: an
/// exclusion must come with a convergent denominator `<= bound` for its
/// implied violation to be findable, and a violation can only contradict
/// membership when the computed expansion already covers every convergent
/// denominator up to `bound`.
pub fn sandwich_check(x: &Real, k: u64, depth: usize, bound: u64) -> Result<SandwichReport> {
    assert!(k >= 1);
    let ek = ek_contains(x, k, depth)?;
    let c_lower = Real::Rational(BigRational::new(BigInt::one(), BigInt::from(k + 2)));
    let c_upper = Real::Rational(BigRational::new(BigInt::one(), BigInt::from(k)));
    let a = MatrixSystem::scalar(x.clone());
    let lower = is_bad_truncated(&a, &c_lower, bound, DEFAULT_ETA);
    let upper = is_bad_truncated(&a, &c_upper, bound, DEFAULT_ETA);

    let cf = ContinuedFraction::expand(x, depth)?;
    let convergents = cf.convergents();
    let bound_big = BigInt::from(bound);

    let mut contradiction = None;
    // Branch 1: claimed member of E_k yet violated at 1/(k+2). Meaningful only
    // when no out-of-depth quotient could explain the violation, i.e. the last
    // computed convergent denominator already exceeds the search bound.
    if ek == EkVerdict::InUpToDepth {
        if let BadVerdict::ViolatedBy(w) = &lower {
            let depth_covers_bound = cf.tail == CfTail::Terminated
                || convergents
                    .last()
                    .map(|(_, q)| q > &bound_big)
                    .unwrap_or(false);
            if depth_covers_bound {
                contradiction = Some(format!(
                    "in E_{k} to depth {depth} but quality {} < 1/(k+2) at q={:?}",
                    w.quality.to_f64(),
                    w.q
                ));
            }
        }
    }
    // Branch 2: survives the 1/k search yet excluded from E_k early enough
    // that the exclusion's convergent denominator was inside the search range.
    if let EkVerdict::ExcludedAt(i) = ek {
        if upper.is_consistent() {
            if let Some((_, q_before)) = convergents.get(i - 1) {
                if q_before <= &bound_big {
                    contradiction = Some(format!(
                        "excluded from E_{k} at index {i} (convergent denominator {q_before} <= {bound}) yet no violation of 1/{k} found"
                    ));
                }
            }
        }
    }
    Ok(SandwichReport {
        ek,
        lower,
        upper,
        contradiction,
    })
}

/// Asymptotic dimension of the bounded-quotient set `E_k`:
/// `1 - 6/(pi^2 k) - 72 ln(k) / (pi^4 k^2)`, the unquantified `O(1/k^2)`
/// remainder dropped (callers record that as metadata).
pub fn hensley_dim(k: u64) -> Result<f64> {
    if k < 2 {
        return Err(Error::DegenerateInput(
            "asymptotic formula needs k >= 2".into(),
        ));
    }
    let kf = k as f64;
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    Ok(1.0 - 6.0 / (pi2 * kf) - 72.0 * kf.ln() / (pi2 * pi2 * kf * kf))
}

/// Decay exponent `p(m, n)` for the lower dimension bound: `2m` for one
/// variable, `2n^2` for one form, and the general product expression
/// otherwise.
pub fn p_exponent(m: u32, n: u32) -> f64 {
    assert!(m >= 1 && n >= 1);
    if n == 1 {
        return 2.0 * m as f64;
    }
    if m == 1 {
        return 2.0 * (n as f64) * (n as f64);
    }
    let (mf, nf) = (m as f64, n as f64);
    let s = mf + nf;
    (mf * s + nf * s * s * s) * ((4.0 * nf + 1.0) / mf).max((4.0 * mf + 1.0) / nf)
}

/// Caller-supplied constants for the two-sided dimension bound curves.
#[derive(Debug, Clone, Copy)]
pub struct BoundCurveParams {
    pub k1: f64,
    pub k2: f64,
    pub p_exponent: f64,
}

/// Evaluates the two-sided dimension bounds
/// `mn - k1 c^{1/p} / ln(1/c) <= dim <= mn - k2 c / ln(1/c)`,
/// clamped to `[0, mn]`.
pub fn bound_curves(m: u32, n: u32, c: f64, params: &BoundCurveParams) -> Result<(f64, f64)> {
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::DegenerateInput("need 0 < c < 1".into()));
    }
    if !(params.k1 > 0.0 && params.k2 > 0.0 && params.p_exponent > 0.0) {
        return Err(Error::DegenerateInput("params must be positive".into()));
    }
    let log_inv = -c.ln();
    if log_inv < DEFAULT_ETA {
        return Err(Error::DegenerateInput(
            "c too close to 1: log(1/c) underflows the tolerance".into(),
        ));
    }
    let mn = (m as f64) * (n as f64);
    let lower = mn - params.k1 * c.powf(1.0 / params.p_exponent) / log_inv;
    let upper = mn - params.k2 * c / log_inv;
    Ok((lower.clamp(0.0, mn), upper.clamp(0.0, mn)))
}

/// Transference exponent `1/(m+n-1)` relating the constants of a system and
/// its transpose. Only the exponent is specified; the multiplicative constant
/// is left to the caller.
pub fn transference_exponent(m: u32, n: u32) -> BigRational {
    assert!(m >= 1 && n >= 1);
    BigRational::new(BigInt::one(), BigInt::from(m + n - 1))
}
