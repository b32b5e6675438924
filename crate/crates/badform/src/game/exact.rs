//! Exact LLL reduction and sphere enumeration over a real quadratic field.
//!
//! The simplex strategy needs *all* rational points of bounded denominator in
//! a tiny ball whose center may be a quadratic surd (Cantor subdivision grids
//! live in `Q(sqrt d)`). Enumerating the denominator directly is hopeless --
//! its bound grows like `radius^{-m/(m+1)}` -- so the points are found as the
//! integer vectors of a scaled lattice inside a unit box, with every predicate
//! evaluated exactly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::Surd;
use crate::{Error, Result};

pub(crate) fn dot(a: &[Surd], b: &[Surd]) -> Result<Surd> {
    let mut acc = Surd::zero();
    for (x, y) in a.iter().zip(b) {
        acc = acc.add(&x.mul(y)?)?;
    }
    Ok(acc)
}

/// Exact Gram-Schmidt data for a small basis.
struct Gram {
    mu: Vec<Vec<Surd>>,
    norms2: Vec<Surd>,
}

fn gram(basis: &[Vec<Surd>]) -> Result<Gram> {
    let d = basis.len();
    let mut mu = vec![vec![Surd::zero(); d]; d];
    let mut norms2 = vec![Surd::zero(); d];
    let mut bstar: Vec<Vec<Surd>> = Vec::with_capacity(d);
    for i in 0..d {
        let mut bi = basis[i].clone();
        for j in 0..i {
            let m = if norms2[j].is_zero() {
                Surd::zero()
            } else {
                dot(&basis[i], &bstar[j])?.div(&norms2[j])?
            };
            for (x, y) in bi.iter_mut().zip(&bstar[j]) {
                *x = x.sub(&m.mul(y)?)?;
            }
            mu[i][j] = m;
        }
        norms2[i] = dot(&bi, &bi)?;
        bstar.push(bi);
    }
    Ok(Gram { mu, norms2 })
}

/// Exact LLL with Lovasz parameter 3/4, tracking the integer transform.
pub(crate) fn lll_exact(basis: &mut Vec<Vec<Surd>>, transform: &mut Vec<Vec<BigInt>>) -> Result<()> {
    let d = basis.len();
    if d < 2 {
        return Ok(());
    }
    let three_quarters = Surd::from_rational(BigRational::new(BigInt::from(3), BigInt::from(4)));
    let mut g = gram(basis)?;
    let mut k = 1usize;
    let mut guard = 0usize;
    while k < d {
        guard += 1;
        if guard > 10_000 {
            return Err(Error::DegenerateInput(
                "exact LLL failed to converge".into(),
            ));
        }
        for j in (0..k).rev() {
            let r = g.mu[k][j].round_half_down();
            // round to nearest is the usual choice; half-down ties keep it
            // deterministic and change nothing else
            if !r.is_zero() {
                let rs = Surd::from_bigint(r.clone());
                for i in 0..basis[0].len() {
                    let t = rs.mul(&basis[j][i])?;
                    basis[k][i] = basis[k][i].sub(&t)?;
                }
                for i in 0..d {
                    let t = &r * &transform[j][i];
                    transform[k][i] -= t;
                }
                for i in 0..=j {
                    let mji = if i == j {
                        Surd::one()
                    } else {
                        g.mu[j][i].clone()
                    };
                    g.mu[k][i] = g.mu[k][i].sub(&rs.mul(&mji)?)?;
                }
            }
        }
        // Lovasz: B_k >= (3/4 - mu_{k,k-1}^2) B_{k-1}
        let lhs = g.norms2[k].clone();
        let rhs = three_quarters
            .sub(&g.mu[k][k - 1].square())?
            .mul(&g.norms2[k - 1])?;
        if lhs.cmp_exact(&rhs)? != std::cmp::Ordering::Less {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            transform.swap(k, k - 1);
            g = gram(basis)?;
            k = k.max(2) - 1;
        }
    }
    Ok(())
}

/// All integer coefficient vectors `x` (in original basis coordinates) whose
/// lattice vector has squared Euclidean length `<= c2`, zero excluded, one of
/// each `{x, -x}` pair included.
pub(crate) fn enumerate_ball(
    basis: &[Vec<Surd>],
    transform: &[Vec<BigInt>],
    c2: &Surd,
) -> Result<Vec<Vec<BigInt>>> {
    let d = basis.len();
    let g = gram(basis)?;
    for n2 in &g.norms2 {
        if n2.is_zero() {
            return Err(Error::DegenerateInput("degenerate lattice basis".into()));
        }
    }
    let mut out = Vec::new();
    let mut x = vec![BigInt::zero(); d];
    enum_rec(&g, c2, d, &mut x, &Surd::zero(), &mut |x| {
        // canonical representative: last nonzero coefficient positive
        let mut orig = vec![BigInt::zero(); d];
        for (j, xv) in x.iter().enumerate() {
            if !xv.is_zero() {
                for i in 0..d {
                    orig[i] += xv * &transform[j][i];
                }
            }
        }
        if orig.iter().any(|v| !v.is_zero()) {
            out.push(orig);
        }
    })?;
    Ok(out)
}

fn enum_rec(
    g: &Gram,
    budget: &Surd,
    level: usize,
    x: &mut Vec<BigInt>,
    _partial: &Surd,
    emit: &mut impl FnMut(&[BigInt]),
) -> Result<()> {
    // Work from the last basis vector down. At `level = i+1` we choose x_i.
    if level == 0 {
        emit(x);
        return Ok(());
    }
    let i = level - 1;
    // center c_i = sum_{j > i} mu[j][i] x_j
    let mut center = Surd::zero();
    for j in level..x.len() {
        if !x[j].is_zero() {
            center = center.add(&g.mu[j][i].mul(&Surd::from_bigint(x[j].clone()))?)?;
        }
    }
    // B_i (x_i + c_i)^2 <= budget
    let bound2 = budget.div(&g.norms2[i])?;
    if bound2.sign() < 0 {
        return Ok(());
    }
    // integer range around -center, with f64 guidance and exact filtering
    let c_f = center.to_f64();
    let w_f = bound2.to_f64().max(0.0).sqrt();
    let lo = (-c_f - w_f).floor() as i64 - 2;
    let hi = (-c_f + w_f).ceil() as i64 + 2;
    for v in lo..=hi {
        let xv = BigInt::from(v);
        let off = Surd::from_bigint(xv.clone()).add(&center)?;
        let used = off.square().mul(&g.norms2[i])?;
        if used.cmp_exact(budget)? == std::cmp::Ordering::Greater {
            continue;
        }
        x[i] = xv;
        let rest = budget.sub(&used)?;
        enum_rec(g, &rest, i, x, &Surd::zero(), emit)?;
    }
    x[i] = BigInt::zero();
    Ok(())
}

/// A rational point `p/q` in lowest joint terms with positive denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPoint {
    pub q: BigInt,
    pub p: Vec<BigInt>,
}

impl RationalPoint {
    pub fn coords(&self) -> Vec<BigRational> {
        self.p
            .iter()
            .map(|pi| BigRational::new(pi.clone(), self.q.clone()))
            .collect()
    }

    fn reduced(q: BigInt, p: Vec<BigInt>) -> Self {
        let mut g = q.clone();
        for pi in &p {
            g = g.gcd(pi);
        }
        if g.is_one() || g.is_zero() {
            return RationalPoint { q, p };
        }
        RationalPoint {
            q: &q / &g,
            p: p.into_iter().map(|pi| pi / &g).collect(),
        }
    }
}

/// Every rational point with (positive) denominator at most `q_max` inside the
/// closed Euclidean ball `B(center, radius)`. Boundary points count as inside.
///
/// The search embeds `(q, p)` as the lattice `{(q/q_max, (q x_i - p_i)/radius)}`
/// and enumerates the sphere of squared radius `m + 1` circumscribing the unit
/// box, then filters exactly.
pub fn rationals_in_ball(
    center: &[Surd],
    radius: &BigRational,
    q_max: &BigInt,
) -> Result<Vec<RationalPoint>> {
    let m = center.len();
    if radius.is_zero() || radius.is_negative() {
        return Err(Error::DegenerateInput("ball radius must be positive".into()));
    }
    if q_max < &BigInt::one() {
        return Ok(Vec::new());
    }
    let d = m + 1;
    // Scaled coordinates: u_0 = q / q_max and u_i = (q x_i - p_i)/(r q_max);
    // membership |q x_i - p_i| <= r q then puts every admissible pair in the
    // unit box.
    let inv_qmax = Surd::from_rational(BigRational::new(BigInt::one(), q_max.clone()));
    let inv_rq = Surd::from_rational(
        (radius * BigRational::from_integer(q_max.clone())).recip(),
    );
    let mut basis: Vec<Vec<Surd>> = Vec::with_capacity(d);
    // generator for q
    let mut b0 = vec![inv_qmax; 1];
    for x in center {
        b0.push(x.mul(&inv_rq)?);
    }
    basis.push(b0);
    // generators for each p_i (negative so coefficients are p_i directly)
    for i in 0..m {
        let mut b = vec![Surd::zero(); d];
        b[i + 1] = inv_rq.neg();
        basis.push(b);
    }
    let mut transform: Vec<Vec<BigInt>> = (0..d)
        .map(|j| {
            (0..d)
                .map(|i| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    lll_exact(&mut basis, &mut transform)?;
    let c2 = Surd::from_bigint(BigInt::from(d as i64));
    let raw = enumerate_ball(&basis, &transform, &c2)?;

    let radius2 = Surd::from_rational(radius * radius);
    let mut points: Vec<RationalPoint> = Vec::new();
    for coeffs in raw {
        // coeffs = (q, p_1, ..., p_m); use the sign that makes q positive
        let (q, p): (BigInt, Vec<BigInt>) = if coeffs[0].is_negative() {
            (-coeffs[0].clone(), coeffs[1..].iter().map(|x| -x).collect())
        } else {
            (coeffs[0].clone(), coeffs[1..].to_vec())
        };
        if q.is_zero() || &q > q_max {
            continue;
        }
        // exact membership: sum (q x_i - p_i)^2 <= (radius q)^2
        let qs = Surd::from_bigint(q.clone());
        let mut lhs = Surd::zero();
        for (i, x) in center.iter().enumerate() {
            let diff = qs.mul(x)?.sub(&Surd::from_bigint(p[i].clone()))?;
            lhs = lhs.add(&diff.square())?;
        }
        let rhs = radius2.mul(&qs.square())?;
        if lhs.cmp_exact(&rhs)? == std::cmp::Ordering::Greater {
            continue;
        }
        let pt = RationalPoint::reduced(q, p);
        if !points.contains(&pt) {
            points.push(pt);
        }
    }
    // deterministic order: by denominator, then lexicographic numerators
    points.sort_by(|a, b| a.q.cmp(&b.q).then_with(|| a.p.cmp(&b.p)));
    Ok(points)
}
