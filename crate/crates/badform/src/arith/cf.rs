//! Continued-fraction expansion with exact paths for rationals and quadratic
//! surds and a precision-tracked path for floating inputs.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::real::{BigFloat, Real};
use crate::{Error, Result};

/// What is known about the expansion beyond the computed quotients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CfTail {
    /// The expansion ends exactly where the quotient list ends (rational input).
    Terminated,
    /// More quotients exist but were not computed.
    Truncated,
    /// The expansion is eventually periodic: quotients from index `start`
    /// (0-based into `quotients`) repeat with period `len`.
    Periodic { start: usize, len: usize },
}

/// `a0 + 1/(a1 + 1/(a2 + ...))` with every `a_i >= 1` for `i >= 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuedFraction {
    pub a0: BigInt,
    pub quotients: Vec<BigInt>,
    pub tail: CfTail,
}

impl ContinuedFraction {
    /// Number of partial quotients past `a0`.
    pub fn depth(&self) -> usize {
        self.quotients.len()
    }

    /// Convergents `p_k / q_k`, starting with `p_0/q_0 = a0/1`.
    pub fn convergents(&self) -> Vec<(BigInt, BigInt)> {
        let mut out = Vec::with_capacity(self.quotients.len() + 1);
        let (mut p_prev, mut q_prev) = (BigInt::one(), BigInt::zero());
        let (mut p, mut q) = (self.a0.clone(), BigInt::one());
        out.push((p.clone(), q.clone()));
        for a in &self.quotients {
            let p_next = a * &p + &p_prev;
            let q_next = a * &q + &q_prev;
            p_prev = std::mem::replace(&mut p, p_next);
            q_prev = std::mem::replace(&mut q, q_next);
            out.push((p.clone(), q.clone()));
        }
        out
    }

    /// Value of the final convergent as an exact rational.
    pub fn last_convergent(&self) -> BigRational {
        let (p, q) = self.convergents().into_iter().last().expect("nonempty");
        BigRational::new(p, q)
    }

    /// Expands `x` to at most `depth` partial quotients past `a0`.
    ///
    /// Rationals use the Euclidean algorithm (exact, may terminate early);
    /// quadratic surds use the integer `(P, Q)` recursion (exact, with
    /// periodic-tail detection); floats track an error exponent and fail with
    /// [`Error::PrecisionExhausted`] as soon as a floor becomes ambiguous.
    pub fn expand(x: &Real, depth: usize) -> Result<ContinuedFraction> {
        if depth == 0 {
            return Err(Error::DegenerateInput("depth must be >= 1".into()));
        }
        match x {
            Real::Rational(r) => Ok(Self::expand_rational(r, depth)),
            Real::Quadratic(s) => {
                let (p, n, q) = s.to_pnq()?;
                Ok(Self::expand_quadratic(p, n, q, depth))
            }
            Real::Float(f) => Self::expand_float(f, depth),
        }
    }

    fn expand_rational(r: &BigRational, depth: usize) -> ContinuedFraction {
        let a0 = r.floor().to_integer();
        let mut quotients = Vec::new();
        // Euclid on (num, den) of the fractional part.
        let frac = r - BigRational::from_integer(a0.clone());
        let mut num = frac.numer().clone();
        let mut den = frac.denom().clone();
        let mut tail = CfTail::Terminated;
        while !num.is_zero() {
            if quotients.len() == depth {
                tail = CfTail::Truncated;
                break;
            }
            // 1/(num/den) = den/num
            let (q, rem) = den.div_rem(&num);
            quotients.push(q);
            den = std::mem::replace(&mut num, rem);
        }
        ContinuedFraction { a0, quotients, tail }
    }

    /// Expansion of `(p + sqrt(n)) / q` with `q | n - p^2`.
    fn expand_quadratic(mut p: BigInt, n: BigInt, mut q: BigInt, depth: usize) -> ContinuedFraction {
        let sqrt_n = n.sqrt();
        debug_assert!(&sqrt_n * &sqrt_n <= n && n < (&sqrt_n + 1u32) * (&sqrt_n + 1u32));
        let floor_state = |p: &BigInt, q: &BigInt| -> BigInt {
            // floor((p + sqrt(n)) / q), exact. sqrt(n) is irrational here.
            let num_lo = p + &sqrt_n; // floor of numerator
            let mut a = num_lo.div_floor(q);
            // Correct for the fractional part of sqrt(n) against the sign of q.
            // Check the defining inequalities a <= x < a+1 exactly:
            // x >= a  <=>  sqrt(n) >= a*q - p   (q > 0), flipped for q < 0.
            let ge = |bound: &BigInt| -> bool {
                // sqrt(n) >= bound ?
                if bound.is_negative() {
                    true
                } else {
                    &n >= &(bound * bound)
                }
            };
            let x_ge = |k: &BigInt| -> bool {
                let bound = k * q - p;
                // x >= k  <=>  sqrt(n) >= k*q - p for q > 0, and
                // (since sqrt(n) is irrational) sqrt(n) < k*q - p for q < 0.
                if q.is_positive() {
                    ge(&bound)
                } else {
                    !ge(&bound)
                }
            };
            while !x_ge(&a) {
                a -= 1;
            }
            while x_ge(&(&a + 1u32)) {
                a += 1;
            }
            a
        };

        let a0 = floor_state(&p, &q);
        p = &a0 * &q - &p;
        q = (&n - &p * &p) / &q;
        // State after extracting a0: x1 = (p + sqrt(n)) / q with the same n.
        let mut quotients: Vec<BigInt> = Vec::new();
        let mut seen: Vec<(BigInt, BigInt)> = Vec::new();
        let mut tail = CfTail::Truncated;
        while quotients.len() < depth {
            if let Some(start) = seen.iter().position(|(sp, sq)| sp == &p && sq == &q) {
                let len = seen.len() - start;
                tail = CfTail::Periodic { start, len };
                // The recursion is a fixed cycle from here on; emit the
                // remaining quotients without recomputing states.
                while quotients.len() < depth {
                    let idx = start + (quotients.len() - start) % len;
                    quotients.push(quotients[idx].clone());
                }
                break;
            }
            seen.push((p.clone(), q.clone()));
            let a = floor_state(&p, &q);
            quotients.push(a.clone());
            p = &a * &q - &p;
            q = (&n - &p * &p) / &q;
        }
        ContinuedFraction { a0, quotients, tail }
    }

    fn expand_float(f: &BigFloat, depth: usize) -> Result<ContinuedFraction> {
        let prec = f.precision();
        let mut v = f.clone();
        // log2 of the absolute error carried by `v`; grows as we invert.
        let mut err_log2 = -(prec as f64) + 2.0;
        let mut a0 = BigInt::zero();
        let mut quotients = Vec::new();
        let mut tail = CfTail::Truncated;
        for i in 0..=depth {
            let fl: BigFloat = v.floor();
            let n = super::real::ibig_to_bigint(&fl.to_int().value());
            let frac = (&v - fl).with_precision(prec).value();
            let frac_f = frac.to_f64().value();
            if frac_f == 0.0 {
                // The stored value is exactly an integer here; as a dyadic
                // rational its expansion terminates.
                tail = CfTail::Terminated;
                if i == 0 {
                    a0 = n;
                }
                break;
            }
            // Ambiguous when the fractional part is closer to an integer than
            // the accumulated error allows us to resolve.
            let margin = (err_log2 + 3.0).exp2();
            if frac_f < margin || (1.0 - frac_f) < margin {
                return Err(Error::PrecisionExhausted(format!(
                    "floor ambiguous at quotient {i}: fractional part {frac_f:.3e}, error 2^{err_log2:.1}"
                )));
            }
            if i == 0 {
                a0 = n;
            } else {
                quotients.push(n);
            }
            if quotients.len() == depth {
                break;
            }
            // invert: error scales by roughly 1/frac^2
            err_log2 += 2.0 * (-frac_f.log2()) + 2.0;
            v = (BigFloat::ONE.with_precision(prec).value() / frac)
                .with_precision(prec)
                .value();
        }
        Ok(ContinuedFraction { a0, quotients, tail })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::surd::Surd;

    fn expand(x: &Real, depth: usize) -> ContinuedFraction {
        ContinuedFraction::expand(x, depth).unwrap()
    }

    #[test]
    fn golden_ratio_is_all_ones() {
        let cf = expand(&Real::phi(), 6);
        assert_eq!(cf.a0, BigInt::from(1));
        assert_eq!(cf.quotients, vec![BigInt::one(); 6]);
        // Convergents of phi are ratios of consecutive Fibonacci numbers.
        let conv = cf.convergents();
        let fib = [1i64, 2, 3, 5, 8, 13, 21];
        for (k, (p, q)) in conv.iter().enumerate() {
            assert_eq!(p, &BigInt::from(fib[k]));
            if k > 0 {
                assert_eq!(q, &BigInt::from(fib[k - 1]));
            }
        }
    }

    #[test]
    fn one_half_terminates() {
        let cf = expand(&Real::parse("1/2", 128).unwrap(), 4);
        assert_eq!(cf.a0, BigInt::zero());
        assert_eq!(cf.quotients, vec![BigInt::from(2)]);
        assert_eq!(cf.tail, CfTail::Terminated);
    }

    #[test]
    fn sqrt2_is_periodic_twos() {
        let cf = expand(&Real::sqrt2(), 5);
        assert_eq!(cf.a0, BigInt::one());
        assert_eq!(cf.quotients, vec![BigInt::from(2); 5]);
        let cf_long = expand(&Real::sqrt2(), 50);
        match cf_long.tail {
            CfTail::Periodic { len, .. } => assert_eq!(len, 1),
            ref t => panic!("expected periodic tail, got {t:?}"),
        }
    }

    #[test]
    fn sqrt3_alternates() {
        let cf = expand(&Real::from_surd(Surd::sqrt_of(3)), 6);
        assert_eq!(cf.a0, BigInt::one());
        let want: Vec<BigInt> = [1, 2, 1, 2, 1, 2].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(cf.quotients, want);
    }

    #[test]
    fn float_expansion_matches_exact() {
        let x = Real::Float(Real::phi().to_bigfloat(192));
        let cf = expand(&x, 20);
        assert_eq!(cf.quotients, vec![BigInt::one(); 20]);
    }

    #[test]
    fn float_expansion_exhausts_precision_eventually() {
        let x = Real::Float(Real::phi().to_bigfloat(128));
        // phi loses ~1.39 bits per quotient; 128 bits cannot support depth 500.
        let r = ContinuedFraction::expand(&x, 500);
        assert!(matches!(r, Err(Error::PrecisionExhausted(_))));
    }

    #[test]
    fn reconstruction_within_convergent_bound() {
        // |x - p_k/q_k| <= 1/q_k^2 for every x and depth.
        let xs = [
            Real::parse("0.7390851332151607", 128).unwrap(),
            Real::phi(),
            Real::from_surd(Surd::sqrt_of(7)),
        ];
        for x in &xs {
            let cf = expand(x, 12);
            let approx = cf.last_convergent();
            let (_, q) = cf.convergents().into_iter().last().unwrap();
            let err = x.sub(&Real::Rational(approx)).abs();
            let bound = Real::Rational(BigRational::new(BigInt::one(), &q * &q));
            assert!(err <= bound, "x={x:?}");
        }
    }
}
