//! A scalar that is exact whenever its provenance allows.
//!
//! [`Real`] holds either an exact rational, an exact quadratic surd, or a
//! high-precision binary float (dashu `FBig`, at least
//! [`crate::MIN_PRECISION_BITS`] mantissa bits). Arithmetic stays in the most
//! exact representation that can express the result and only degrades to
//! floating point when forced (mixed radicands, transcendental inputs).

use std::cmp::Ordering;
use std::fmt;

use dashu::base::SquareRoot;
use dashu::float::round::mode::HalfEven;
use dashu::integer::IBig;
use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::surd::Surd;
use crate::{Error, Result, MIN_PRECISION_BITS};

/// High-precision binary float with round-to-nearest-even.
pub type BigFloat = dashu::float::FBig<HalfEven>;

pub(crate) fn bigint_to_ibig(n: &BigInt) -> IBig {
    let (sign, bytes) = n.to_bytes_le();
    let mag = dashu::integer::UBig::from_le_bytes(&bytes);
    match sign {
        Sign::Minus => -IBig::from(mag),
        _ => IBig::from(mag),
    }
}

pub(crate) fn ibig_to_bigint(n: &IBig) -> BigInt {
    let (sign, mag) = n.clone().into_parts();
    let bytes = mag.to_le_bytes();
    let v = BigInt::from_bytes_le(Sign::Plus, &bytes);
    match sign {
        dashu::base::Sign::Negative => -v,
        dashu::base::Sign::Positive => v,
    }
}

pub(crate) fn rational_to_bigfloat(r: &BigRational, prec: usize) -> BigFloat {
    let num = BigFloat::from(bigint_to_ibig(r.numer()))
        .with_precision(prec + 8)
        .value();
    let den = BigFloat::from(bigint_to_ibig(r.denom()))
        .with_precision(prec + 8)
        .value();
    (num / den).with_precision(prec).value()
}

/// Exact-or-high-precision scalar.
#[derive(Debug, Clone)]
pub enum Real {
    Rational(BigRational),
    Quadratic(Surd),
    Float(BigFloat),
}

impl Real {
    pub fn zero() -> Self {
        Real::Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Real::Rational(BigRational::one())
    }

    pub fn from_i64(n: i64) -> Self {
        Real::Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Real::Rational(BigRational::from_integer(n))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Real::Rational(r)
    }

    /// Exact embedding of a finite `f64` (every finite double is dyadic).
    pub fn from_f64(x: f64) -> Result<Self> {
        BigRational::from_float(x)
            .map(Real::Rational)
            .ok_or_else(|| Error::DegenerateInput(format!("non-finite scalar {x}")))
    }

    pub fn from_surd(s: Surd) -> Self {
        match s.to_rational() {
            Some(r) => Real::Rational(r),
            None => Real::Quadratic(s),
        }
    }

    /// Wraps a float, enforcing the minimum precision invariant.
    pub fn from_bigfloat(f: BigFloat) -> Self {
        if f.precision() < MIN_PRECISION_BITS {
            Real::Float(f.with_precision(MIN_PRECISION_BITS).value())
        } else {
            Real::Float(f)
        }
    }

    /// Golden ratio, exact.
    pub fn phi() -> Self {
        Real::Quadratic(Surd::phi())
    }

    /// `sqrt(2)`, exact.
    pub fn sqrt2() -> Self {
        Real::Quadratic(Surd::sqrt_of(2))
    }

    /// Euler's number at the given mantissa width.
    pub fn euler(prec: usize) -> Self {
        let prec = prec.max(MIN_PRECISION_BITS);
        Real::Float(BigFloat::ONE.with_precision(prec).value().exp())
    }

    /// Parses a named constant, decimal literal, or `p/q` fraction.
    pub fn parse(s: &str, prec: usize) -> Result<Self> {
        let s = s.trim();
        match s {
            "phi" => return Ok(Real::phi()),
            "sqrt2" => return Ok(Real::sqrt2()),
            "sqrt5" => return Ok(Real::Quadratic(Surd::sqrt_of(5))),
            "e" => return Ok(Real::euler(prec)),
            _ => {}
        }
        if let Some((num, den)) = s.split_once('/') {
            let n: BigInt = num
                .trim()
                .parse()
                .map_err(|_| Error::DegenerateInput(format!("bad numerator in {s:?}")))?;
            let d: BigInt = den
                .trim()
                .parse()
                .map_err(|_| Error::DegenerateInput(format!("bad denominator in {s:?}")))?;
            if d.is_zero() {
                return Err(Error::DegenerateInput("zero denominator".into()));
            }
            return Ok(Real::Rational(BigRational::new(n, d)));
        }
        Self::parse_decimal(s)
    }

    /// Parses a decimal literal (optionally with exponent) exactly.
    pub fn parse_decimal(s: &str) -> Result<Self> {
        let err = || Error::DegenerateInput(format!("bad numeric literal {s:?}"));
        let (mantissa, exp10) = match s.split_once(['e', 'E']) {
            Some((m, e)) => (m, e.parse::<i64>().map_err(|_| err())?),
            None => (s, 0),
        };
        let (int_part, frac_part) = match mantissa.split_once('.') {
            Some((i, f)) => (i, f),
            None => (mantissa, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(err());
        }
        let digits = format!(
            "{}{}",
            if int_part.is_empty() { "0" } else { int_part },
            frac_part
        );
        let num: BigInt = digits.parse().map_err(|_| err())?;
        let shift = exp10 - frac_part.len() as i64;
        let ten = BigInt::from(10);
        let r = if shift >= 0 {
            BigRational::from_integer(num * ten.pow(shift as u32))
        } else {
            BigRational::new(num, ten.pow((-shift) as u32))
        };
        Ok(Real::Rational(r))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Real::Rational(r) => r.is_zero(),
            Real::Quadratic(s) => s.is_zero(),
            Real::Float(f) => f.repr().is_zero(),
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Real::Float(_))
    }

    /// Mantissa width of the float representation; `None` when exact.
    pub fn precision_bits(&self) -> Option<usize> {
        match self {
            Real::Float(f) => Some(f.precision()),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Real::Rational(r) => {
                // Scale-aware conversion: BigRational::to_f64 handles huge
                // numerators/denominators correctly.
                r.to_f64().unwrap_or(f64::NAN)
            }
            // The naive a + b*sqrt(d) evaluation cancels catastrophically for
            // tiny values with huge parts, so go through the float path.
            Real::Quadratic(_) => self.to_bigfloat(96).to_f64().value(),
            Real::Float(f) => f.to_f64().value(),
        }
    }

    pub fn to_bigfloat(&self, prec: usize) -> BigFloat {
        let prec = prec.max(MIN_PRECISION_BITS);
        match self {
            Real::Rational(r) => rational_to_bigfloat(r, prec),
            Real::Quadratic(s) => {
                let a = rational_to_bigfloat(s.rational_part(), prec + 16);
                let (b, d) = s.surd_part();
                if b.is_zero() {
                    return a.with_precision(prec).value();
                }
                let bf = rational_to_bigfloat(b, prec + 16);
                let rad = BigFloat::from(d)
                    .with_precision(prec + 16)
                    .value()
                    .sqrt();
                (a + bf * rad).with_precision(prec).value()
            }
            Real::Float(f) => f.clone().with_precision(prec).value(),
        }
    }

    fn working_prec(&self, other: &Real) -> usize {
        self.precision_bits()
            .unwrap_or(MIN_PRECISION_BITS)
            .max(other.precision_bits().unwrap_or(MIN_PRECISION_BITS))
    }

    pub fn add(&self, other: &Real) -> Real {
        match (self, other) {
            (Real::Rational(a), Real::Rational(b)) => Real::Rational(a + b),
            (Real::Rational(a), Real::Quadratic(b)) | (Real::Quadratic(b), Real::Rational(a)) => {
                Real::from_surd(
                    Surd::from_rational(a.clone())
                        .add(b)
                        .expect("rational joins any field"),
                )
            }
            (Real::Quadratic(a), Real::Quadratic(b)) => match a.add(b) {
                Ok(s) => Real::from_surd(s),
                Err(_) => self.float_binop(other, |x, y| x + y),
            },
            _ => self.float_binop(other, |x, y| x + y),
        }
    }

    pub fn sub(&self, other: &Real) -> Real {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Real {
        match self {
            Real::Rational(r) => Real::Rational(-r.clone()),
            Real::Quadratic(s) => Real::Quadratic(s.neg()),
            Real::Float(f) => Real::Float(-f.clone()),
        }
    }

    pub fn mul(&self, other: &Real) -> Real {
        match (self, other) {
            (Real::Rational(a), Real::Rational(b)) => Real::Rational(a * b),
            (Real::Rational(a), Real::Quadratic(b)) | (Real::Quadratic(b), Real::Rational(a)) => {
                Real::from_surd(b.mul_rational(a))
            }
            (Real::Quadratic(a), Real::Quadratic(b)) => match a.mul(b) {
                Ok(s) => Real::from_surd(s),
                Err(_) => self.float_binop(other, |x, y| x * y),
            },
            _ => self.float_binop(other, |x, y| x * y),
        }
    }

    pub fn div(&self, other: &Real) -> Result<Real> {
        if other.is_zero() {
            return Err(Error::DegenerateInput("division by zero".into()));
        }
        Ok(match (self, other) {
            (Real::Rational(a), Real::Rational(b)) => Real::Rational(a / b),
            (Real::Quadratic(a), Real::Rational(b)) => {
                Real::from_surd(a.mul_rational(&b.recip()))
            }
            (Real::Rational(a), Real::Quadratic(b)) => {
                match Surd::from_rational(a.clone()).div(b) {
                    Ok(s) => Real::from_surd(s),
                    Err(_) => self.float_binop(other, |x, y| x / y),
                }
            }
            (Real::Quadratic(a), Real::Quadratic(b)) => match a.div(b) {
                Ok(s) => Real::from_surd(s),
                Err(_) => self.float_binop(other, |x, y| x / y),
            },
            _ => self.float_binop(other, |x, y| x / y),
        })
    }

    fn float_binop(&self, other: &Real, op: impl Fn(BigFloat, BigFloat) -> BigFloat) -> Real {
        let prec = self.working_prec(other);
        Real::Float(op(self.to_bigfloat(prec), other.to_bigfloat(prec)))
    }

    pub fn abs(&self) -> Real {
        if self.sign() < 0 {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn sign(&self) -> i32 {
        match self {
            Real::Rational(r) => match r.cmp(&BigRational::zero()) {
                Ordering::Less => -1,
                Ordering::Equal => 0,
                Ordering::Greater => 1,
            },
            Real::Quadratic(s) => s.sign(),
            Real::Float(f) => {
                if f.repr().is_zero() {
                    0
                } else if f < &BigFloat::ZERO {
                    -1
                } else {
                    1
                }
            }
        }
    }

    /// Comparison. Exact when both sides are exact (and in compatible fields);
    /// otherwise performed at the operands' working float precision.
    pub fn cmp_real(&self, other: &Real) -> Ordering {
        match (self, other) {
            (Real::Rational(a), Real::Rational(b)) => a.cmp(b),
            (Real::Rational(a), Real::Quadratic(b)) => b.cmp_rational(a).reverse(),
            (Real::Quadratic(a), Real::Rational(b)) => a.cmp_rational(b),
            (Real::Quadratic(a), Real::Quadratic(b)) => {
                if let Ok(ord) = a.cmp_exact(b) {
                    return ord;
                }
                self.float_cmp(other)
            }
            _ => self.float_cmp(other),
        }
    }

    fn float_cmp(&self, other: &Real) -> Ordering {
        let prec = self.working_prec(other) + 32;
        self.to_bigfloat(prec)
            .partial_cmp(&other.to_bigfloat(prec))
            .unwrap_or(Ordering::Equal)
    }

    pub fn floor_bigint(&self) -> BigInt {
        match self {
            Real::Rational(r) => r.floor().to_integer(),
            Real::Quadratic(s) => s.floor_bigint(),
            Real::Float(f) => ibig_to_bigint(&f.floor().to_int().value()),
        }
    }

    pub fn ceil_bigint(&self) -> BigInt {
        -self.neg().floor_bigint()
    }

    /// Nearest integer, ties toward the smaller integer (`ceil(x - 1/2)`).
    pub fn round_half_down(&self) -> BigInt {
        let half = Real::Rational(BigRational::new(BigInt::one(), BigInt::from(2)));
        self.sub(&half).ceil_bigint()
    }

    /// `sqrt`, exact when the operand is rational with a representable
    /// radicand, floating otherwise.
    pub fn sqrt(&self) -> Result<Real> {
        if self.sign() < 0 {
            return Err(Error::DegenerateInput("sqrt of negative value".into()));
        }
        match self {
            Real::Rational(r) => {
                if r.is_zero() {
                    return Ok(Real::zero());
                }
                let ns = r.numer().sqrt();
                let ds = r.denom().sqrt();
                if &(&ns * &ns) == r.numer() && &(&ds * &ds) == r.denom() {
                    return Ok(Real::Rational(BigRational::new(ns, ds)));
                }
                // sqrt(p/q) = sqrt(p*q)/q when p*q fits the surd radicand.
                let rad = r.numer() * r.denom();
                if let Some(d) = rad.to_u64() {
                    return Ok(Real::from_surd(
                        Surd::sqrt_of(d).mul_rational(&BigRational::new(
                            BigInt::one(),
                            r.denom().clone(),
                        )),
                    ));
                }
                Ok(Real::Float(
                    self.to_bigfloat(MIN_PRECISION_BITS + 16).sqrt(),
                ))
            }
            _ => Ok(Real::Float(
                self.to_bigfloat(MIN_PRECISION_BITS + 16).sqrt(),
            )),
        }
    }

    /// `self^(1/k)`; exact for `k <= 2` where possible.
    pub fn nth_root(&self, k: u32) -> Result<Real> {
        match k {
            0 => Err(Error::DegenerateInput("zeroth root".into())),
            1 => Ok(self.clone()),
            2 => self.sqrt(),
            _ => {
                if self.sign() < 0 {
                    return Err(Error::DegenerateInput("root of negative value".into()));
                }
                if self.is_zero() {
                    return Ok(Real::zero());
                }
                let prec = MIN_PRECISION_BITS + 16;
                let x = self.to_bigfloat(prec);
                let one_over_k = (BigFloat::ONE.with_precision(prec).value()
                    / BigFloat::from(k as i64))
                .with_precision(prec)
                .value();
                Ok(Real::Float(x.powf(&one_over_k)))
            }
        }
    }

    /// Integer power with exact propagation.
    pub fn pow_u32(&self, k: u32) -> Real {
        let mut acc = Real::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact string form for audit logs ("p/q", "a+b*sqrt(d)", or a dump of
    /// the float significand and exponent).
    pub fn exact_string(&self) -> String {
        match self {
            Real::Rational(r) => format!("{}/{}", r.numer(), r.denom()),
            Real::Quadratic(s) => format!("{s}"),
            Real::Float(f) => format!("{:?}", f.repr()),
        }
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_real(other) == Ordering::Equal
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_real(other))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Rational(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}", self.to_f64())
                }
            }
            _ => write!(f, "{}", self.to_f64()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f64_embedding_is_exact() {
        let x = Real::from_f64(0.1).unwrap();
        // 0.1 is not 1/10 in binary; the embedding must preserve the double.
        assert_eq!(x.to_f64(), 0.1);
        match x {
            Real::Rational(r) => assert!(!r.denom().is_one() || r.numer().is_zero()),
            _ => panic!("expected rational"),
        }
    }

    #[test]
    fn phi_float_agrees_with_exact() {
        let exact = Real::phi();
        let f = exact.to_bigfloat(192);
        let redone = Real::Float(f);
        let diff = exact.sub(&redone).abs();
        assert!(diff.to_f64() < 1e-50);
    }

    #[test]
    fn parse_forms() {
        assert_eq!(Real::parse("3/4", 128).unwrap().to_f64(), 0.75);
        assert_eq!(Real::parse("1.25e-2", 128).unwrap().to_f64(), 0.0125);
        assert!((Real::parse("e", 128).unwrap().to_f64() - std::f64::consts::E).abs() < 1e-15);
        assert!((Real::parse("phi", 128).unwrap().to_f64() - 1.618033988749895).abs() < 1e-15);
        assert!(Real::parse("zzz", 128).is_err());
    }

    #[test]
    fn sqrt_exactness() {
        let q = Real::parse("9/4", 128).unwrap().sqrt().unwrap();
        assert!(q.is_exact());
        assert_eq!(q.to_f64(), 1.5);
        let s = Real::from_i64(8).sqrt().unwrap();
        assert!(s.is_exact()); // 2*sqrt(2)
        assert!((s.to_f64() - 8f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn mixed_field_ops_degrade_to_float() {
        let x = Real::phi().add(&Real::sqrt2());
        assert!(!x.is_exact());
        assert!((x.to_f64() - (1.618033988749895 + std::f64::consts::SQRT_2)).abs() < 1e-14);
        assert!(x.precision_bits().unwrap() >= MIN_PRECISION_BITS);
    }

    #[test]
    fn round_half_down_ties() {
        assert_eq!(
            Real::parse("0.5", 128).unwrap().round_half_down(),
            BigInt::from(0)
        );
        assert_eq!(
            Real::parse("1.5", 128).unwrap().round_half_down(),
            BigInt::from(1)
        );
        assert_eq!(
            Real::parse("-0.5", 128).unwrap().round_half_down(),
            BigInt::from(-1)
        );
        assert_eq!(
            Real::parse("1.4", 128).unwrap().round_half_down(),
            BigInt::from(1)
        );
    }
}
