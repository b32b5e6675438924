//! Alice's explicit strategy: the rationals of bounded denominator near the
//! current ball all lie in one hyperplane, and she deletes that hyperplane.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::exact::{rationals_in_ball, RationalPoint};
use super::{fallback_hyperplane, AliceStrategy, GameState, Hyperplane};
use crate::arith::Surd;
use crate::{Error, Result};

/// Largest integer `q` with `q^{m+1} * (4 m! rho)^m <= 1`: the denominator
/// bound of the simplex lemma for the doubled ball `B(x, 2 rho)` (radius
/// `r = 2 rho` gives the threshold `(2 m! * 2 rho)^{-m/(m+1)}`).
pub fn simplex_denominator_bound(m: u32, rho: &BigRational) -> BigInt {
    assert!(rho.is_positive());
    let fact: u64 = (1..=m as u64).product();
    let base = BigRational::from_integer(BigInt::from(4 * fact)) * rho;
    let base_pow = pow_rational(&base, m);
    // q <= base_pow^{-1/(m+1)}; boundary equality admits q = 1
    if base_pow > BigRational::one() {
        return BigInt::zero();
    }
    // exact (m+1)-th root: radii shrink geometrically along a play, so the
    // bound quickly outgrows machine integers
    let inv = base_pow.recip();
    let floor_inv = inv.numer() / inv.denom();
    let mut q = floor_inv.nth_root(m + 1);
    let ok = |q: &BigInt| -> bool {
        if q.is_zero() {
            return true;
        }
        let qr = BigRational::from_integer(q.clone());
        pow_rational(&qr, m + 1) <= inv
    };
    while !ok(&q) {
        q -= 1;
    }
    while ok(&(&q + 1)) {
        q += 1;
    }
    q
}

fn pow_rational(x: &BigRational, k: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..k {
        acc *= x;
    }
    acc
}

/// Builds a hyperplane containing every given rational point. Fails with
/// [`Error::SimplexViolation`] when the points affinely span the whole space
/// (the simplex lemma guarantees that never happens for a correct caller).
/// When the span has dimension below `m - 1` it is completed by appending
/// standard basis directions in index order, so the result is deterministic.
pub(crate) fn hyperplane_through(points: &[RationalPoint], m: usize) -> Result<Hyperplane> {
    assert!(!points.is_empty());
    let base = points[0].coords();
    // Row space of the difference vectors, kept in echelon form.
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for pt in &points[1..] {
        let v: Vec<BigRational> = pt
            .coords()
            .iter()
            .zip(&base)
            .map(|(a, b)| a - b)
            .collect();
        insert_into_echelon(&mut rows, v);
        if rows.len() >= m {
            return Err(Error::SimplexViolation(format!(
                "{} rational points affinely span all of R^{m}",
                points.len()
            )));
        }
    }
    // Complete the span to dimension m - 1 with standard basis directions.
    for i in 0..m {
        if rows.len() == m - 1 {
            break;
        }
        let mut e = vec![BigRational::zero(); m];
        e[i] = BigRational::one();
        insert_into_echelon(&mut rows, e);
    }
    debug_assert_eq!(rows.len(), m - 1);
    let normal = nullspace_direction(&rows, m);
    debug_assert!(points.iter().all(|pt| {
        let diff: Vec<BigRational> = pt.coords().iter().zip(&base).map(|(a, b)| a - b).collect();
        diff.iter()
            .zip(&normal)
            .map(|(d, n)| d * n)
            .sum::<BigRational>()
            .is_zero()
    }));
    Hyperplane::new(
        base.into_iter().map(Surd::from_rational).collect(),
        normal.into_iter().map(Surd::from_rational).collect(),
    )
}

/// Gaussian elimination step: reduce `v` against the echelon rows and insert
/// it if independent.
fn insert_into_echelon(rows: &mut Vec<Vec<BigRational>>, mut v: Vec<BigRational>) {
    for row in rows.iter() {
        let pivot = row.iter().position(|x| !x.is_zero()).expect("echelon row");
        if !v[pivot].is_zero() {
            let f = &v[pivot] / &row[pivot];
            for (x, r) in v.iter_mut().zip(row) {
                *x -= &f * r;
            }
        }
    }
    if v.iter().any(|x| !x.is_zero()) {
        rows.push(v);
        // keep rows sorted by pivot position for a canonical echelon
        rows.sort_by_key(|r| r.iter().position(|x| !x.is_zero()).unwrap());
        // re-reduce upwards so pivots are unique
        for i in (0..rows.len()).rev() {
            let pivot = rows[i].iter().position(|x| !x.is_zero()).unwrap();
            let pivot_row = rows[i].clone();
            for (j, row) in rows.iter_mut().enumerate() {
                if j != i && !row[pivot].is_zero() {
                    let f = &row[pivot] / &pivot_row[pivot];
                    for (x, r) in row.iter_mut().zip(&pivot_row) {
                        *x -= &f * r;
                    }
                }
            }
        }
    }
}

/// One-dimensional nullspace of an `(m-1) x m` full-rank echelon system, as a
/// primitive integer vector with positive leading coordinate.
fn nullspace_direction(rows: &[Vec<BigRational>], m: usize) -> Vec<BigRational> {
    let pivots: Vec<usize> = rows
        .iter()
        .map(|r| r.iter().position(|x| !x.is_zero()).unwrap())
        .collect();
    let free = (0..m)
        .find(|i| !pivots.contains(i))
        .expect("m-1 pivots leave one free column");
    let mut n = vec![BigRational::zero(); m];
    n[free] = BigRational::one();
    // back-substitute: row . n = 0  =>  n[pivot] = -row[free] / row[pivot]
    for (row, &piv) in rows.iter().zip(&pivots) {
        n[piv] = -&row[free] / &row[piv];
    }
    // clear denominators, divide by gcd, normalize sign
    let mut denom_lcm = BigInt::one();
    for x in &n {
        denom_lcm = num_integer::lcm(denom_lcm, x.denom().clone());
    }
    let mut ints: Vec<BigInt> = n
        .iter()
        .map(|x| x.numer() * (&denom_lcm / x.denom()))
        .collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = num_integer::gcd(g, x.clone());
    }
    if !g.is_zero() && !g.is_one() {
        for x in ints.iter_mut() {
            *x /= &g;
        }
    }
    if let Some(first) = ints.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in ints.iter_mut() {
                *x = -(x.clone());
            }
        }
    }
    ints.into_iter()
        .map(|x| BigRational::from_integer(x))
        .collect()
}

/// The simplex-lemma strategy for the game on `R^m` (one-variable systems):
/// collect every rational with denominator below the lemma's threshold inside
/// the doubled ball and delete the hyperplane they span; when there are none,
/// delete a hyperplane far outside the ball.
pub struct SimplexAlice;

impl AliceStrategy for SimplexAlice {
    fn choose(&mut self, state: &GameState) -> Result<Hyperplane> {
        let ball = state.last_ball();
        let m = state.dim();
        let rho = ball.radius.to_rational().ok_or_else(|| {
            Error::DegenerateInput("simplex strategy needs rational ball radii".into())
        })?;
        let q_max = simplex_denominator_bound(m as u32, &rho);
        if q_max < BigInt::one() {
            return fallback_hyperplane(ball);
        }
        let radius2 = &rho + &rho;
        let points = rationals_in_ball(&ball.center, &radius2, &q_max)?;
        if points.is_empty() {
            return fallback_hyperplane(ball);
        }
        hyperplane_through(&points, m)
    }

    fn name(&self) -> &'static str {
        "simplex"
    }
}
