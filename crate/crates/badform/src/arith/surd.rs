//! Exact arithmetic in real quadratic fields.
//!
//! A [`Surd`] is `a + b*sqrt(d)` with rational `a, b` and a nonsquare integer
//! `d >= 2`. Pure rationals are the `b = 0` case (stored with `d = 0`), so the
//! type doubles as the exact scalar for every game-geometry computation: sums,
//! products, quotients, sign tests, floors and square-compare predicates all
//! stay exact.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// `a + b*sqrt(d)`, exact. Invariants: `d == 0` iff `b == 0`; otherwise
/// `d >= 2` and `d` is not a perfect square.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Surd {
    a: BigRational,
    b: BigRational,
    d: u64,
}

fn isqrt_u64(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r.saturating_mul(r) > n {
        r -= 1;
    }
    while (r + 1).saturating_mul(r + 1) <= n {
        r += 1;
    }
    r
}

impl Surd {
    /// Builds `a + b*sqrt(d)`, folding perfect-square radicands into the
    /// rational part.
    pub fn new(a: BigRational, b: BigRational, d: u64) -> Self {
        if b.is_zero() || d == 0 {
            return Surd {
                a,
                b: BigRational::zero(),
                d: 0,
            };
        }
        if d == 1 {
            return Surd {
                a: a + b,
                b: BigRational::zero(),
                d: 0,
            };
        }
        let r = isqrt_u64(d);
        if r * r == d {
            return Surd {
                a: a + b * BigRational::from_integer(BigInt::from(r)),
                b: BigRational::zero(),
                d: 0,
            };
        }
        Surd { a, b, d }
    }

    pub fn from_rational(a: BigRational) -> Self {
        Surd {
            a,
            b: BigRational::zero(),
            d: 0,
        }
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::from_rational(BigRational::from_integer(n))
    }

    pub fn from_i64(n: i64) -> Self {
        Self::from_bigint(BigInt::from(n))
    }

    /// `sqrt(d)` for a nonnegative integer `d`.
    pub fn sqrt_of(d: u64) -> Self {
        Surd::new(BigRational::zero(), BigRational::one(), d)
    }

    /// Golden ratio `(1 + sqrt(5)) / 2`.
    pub fn phi() -> Self {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        Surd::new(half.clone(), half, 5)
    }

    pub fn zero() -> Self {
        Self::from_i64(0)
    }

    pub fn one() -> Self {
        Self::from_i64(1)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn surd_part(&self) -> (&BigRational, u64) {
        (&self.b, self.d)
    }

    /// Exact rational value, or `None` when the surd part is present.
    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.a.clone())
    }

    fn merged_d(&self, other: &Surd) -> Result<u64> {
        match (self.d, other.d) {
            (0, d) | (d, 0) => Ok(d),
            (d1, d2) if d1 == d2 => Ok(d1),
            (d1, d2) => Err(Error::DegenerateInput(format!(
                "incompatible quadratic fields sqrt({d1}) and sqrt({d2})"
            ))),
        }
    }

    pub fn add(&self, other: &Surd) -> Result<Surd> {
        let d = self.merged_d(other)?;
        Ok(Surd::new(&self.a + &other.a, &self.b + &other.b, d))
    }

    pub fn sub(&self, other: &Surd) -> Result<Surd> {
        let d = self.merged_d(other)?;
        Ok(Surd::new(&self.a - &other.a, &self.b - &other.b, d))
    }

    pub fn neg(&self) -> Surd {
        Surd {
            a: -self.a.clone(),
            b: -self.b.clone(),
            d: self.d,
        }
    }

    pub fn mul(&self, other: &Surd) -> Result<Surd> {
        let d = self.merged_d(other)?;
        let rad = BigRational::from_integer(BigInt::from(d));
        let a = &self.a * &other.a + &self.b * &other.b * rad;
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(Surd::new(a, b, d))
    }

    pub fn div(&self, other: &Surd) -> Result<Surd> {
        if other.is_zero() {
            return Err(Error::DegenerateInput("division by zero".into()));
        }
        let d = self.merged_d(other)?;
        // Multiply by the conjugate: (a - b sqrt(d)) / (a^2 - b^2 d).
        let rad = BigRational::from_integer(BigInt::from(d));
        let denom = &other.a * &other.a - &other.b * &other.b * &rad;
        debug_assert!(!denom.is_zero(), "nonzero surd with zero norm");
        let conj = Surd {
            a: other.a.clone(),
            b: -other.b.clone(),
            d,
        };
        let num = self.mul(&conj)?;
        Ok(Surd::new(num.a / &denom, num.b / &denom, d))
    }

    pub fn mul_rational(&self, r: &BigRational) -> Surd {
        Surd {
            a: &self.a * r,
            b: &self.b * r,
            d: if self.b.is_zero() { 0 } else { self.d },
        }
    }

    pub fn square(&self) -> Surd {
        self.mul(self).expect("same field")
    }

    pub fn abs(&self) -> Surd {
        if self.sign() < 0 {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Exact sign: -1, 0, or 1.
    pub fn sign(&self) -> i32 {
        if self.b.is_zero() {
            return match self.a.cmp(&BigRational::zero()) {
                Ordering::Less => -1,
                Ordering::Equal => 0,
                Ordering::Greater => 1,
            };
        }
        if self.a.is_zero() {
            return if self.b.is_positive() { 1 } else { -1 };
        }
        let a_pos = self.a.is_positive();
        let b_pos = self.b.is_positive();
        if a_pos == b_pos {
            return if a_pos { 1 } else { -1 };
        }
        // Opposite signs: compare a^2 against b^2 d.
        let rad = BigRational::from_integer(BigInt::from(self.d));
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * rad;
        match lhs.cmp(&rhs) {
            Ordering::Equal => 0,
            Ordering::Greater => {
                if a_pos {
                    1
                } else {
                    -1
                }
            }
            Ordering::Less => {
                if b_pos {
                    1
                } else {
                    -1
                }
            }
        }
    }

    /// Exact comparison; errors if the two values live in incompatible fields.
    pub fn cmp_exact(&self, other: &Surd) -> Result<Ordering> {
        let diff = self.sub(other)?;
        Ok(match diff.sign() {
            s if s < 0 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        })
    }

    pub fn to_f64(&self) -> f64 {
        let mut v = self.a.to_f64().unwrap_or(f64::NAN);
        if !self.b.is_zero() {
            v += self.b.to_f64().unwrap_or(f64::NAN) * (self.d as f64).sqrt();
        }
        v
    }

    /// Exact floor. Uses a float guess corrected by exact comparisons.
    pub fn floor_bigint(&self) -> BigInt {
        if self.b.is_zero() {
            return self.a.floor().to_integer();
        }
        let mut guess = BigInt::from(self.to_f64().floor() as i64);
        // Correct the guess: floor(x) = n with n <= x < n + 1.
        while self.cmp_rational(&BigRational::from_integer(&guess + 1)) != Ordering::Less {
            guess += 1;
        }
        while self.cmp_rational(&BigRational::from_integer(guess.clone())) == Ordering::Less {
            guess -= 1;
        }
        guess
    }

    pub fn ceil_bigint(&self) -> BigInt {
        -self.neg().floor_bigint()
    }

    /// Nearest integer with ties toward the smaller integer: `ceil(x - 1/2)`.
    pub fn round_half_down(&self) -> BigInt {
        let half = Surd::from_rational(BigRational::new(BigInt::one(), BigInt::from(2)));
        self.sub(&half).expect("rational shift").ceil_bigint()
    }

    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        self.cmp_exact(&Surd::from_rational(r.clone()))
            .expect("rational is compatible with every field")
    }

    /// Decomposes into `(p, n, q)` with the value equal to `(p + sqrt(n)) / q`,
    /// all integers, `q | n - p^2`. Errors on pure rationals.
    pub(crate) fn to_pnq(&self) -> Result<(BigInt, BigInt, BigInt)> {
        if self.b.is_zero() {
            return Err(Error::DegenerateInput("rational has no surd part".into()));
        }
        // a + b sqrt(d) = (a.num*b.den + b.num*a.den*sqrt(d)) / (a.den*b.den)
        let q0 = self.a.denom() * self.b.denom();
        let p0 = self.a.numer() * self.b.denom();
        let s0 = self.b.numer() * self.a.denom();
        // Fold s0 into the radicand: s0*sqrt(d) = sign(s0)*sqrt(s0^2 d).
        let n0 = &s0 * &s0 * BigInt::from(self.d);
        let (mut p, mut n, mut q) = if s0.is_negative() {
            (-p0, n0, -q0)
        } else {
            (p0, n0, q0)
        };
        // Ensure q | n - p^2 by scaling numerator and denominator by |q|.
        let rem = (&n - &p * &p) % &q;
        if !rem.is_zero() {
            let scale = q.abs();
            p *= &scale;
            n *= &scale * &scale;
            q *= scale;
        }
        debug_assert!(((&n - &p * &p) % &q).is_zero());
        Ok((p, n, q))
    }
}

impl PartialOrd for Surd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.cmp_exact(other).ok()
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + {}*sqrt({})", self.a, self.b, self.d)
        }
    }
}
