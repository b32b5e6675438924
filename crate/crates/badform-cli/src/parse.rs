//! Parsing of matrix literals, scalars, and the flat config format.

use badform::arith::Real;
use badform::diophantine::MatrixSystem;
use badform::{Error, Result, MIN_PRECISION_BITS};
use num_bigint::BigInt;
use num_rational::BigRational;

pub fn parse_scalar(s: &str, precision: usize) -> Result<Real> {
    Real::parse(s, precision)
}

/// Exact rational from "p/q" or a decimal literal.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    match parse_scalar(s, MIN_PRECISION_BITS)? {
        Real::Rational(r) => Ok(r),
        _ => Err(Error::DegenerateInput(format!(
            "{s:?} is not a rational value"
        ))),
    }
}

/// Parses "a,b;c,d" rows (or a single scalar) into a system, reconciling the
/// optional dimension hints.
pub fn parse_matrix(
    entries: &str,
    m: Option<usize>,
    n: Option<usize>,
    precision: usize,
) -> Result<MatrixSystem> {
    let rows: Vec<&str> = entries.split(';').collect();
    let parsed: Vec<Vec<Real>> = rows
        .iter()
        .map(|row| {
            row.split(',')
                .map(|e| parse_scalar(e, precision))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let rows_found = parsed.len();
    let cols_found = parsed[0].len();
    if parsed.iter().any(|r| r.len() != cols_found) {
        return Err(Error::DegenerateInput("ragged matrix literal".into()));
    }
    let m = m.unwrap_or(rows_found);
    let n = n.unwrap_or(cols_found);
    if (m, n) != (rows_found, cols_found) {
        // allow a flat scalar list to be reshaped when dimensions are given
        let flat: Vec<Real> = parsed.into_iter().flatten().collect();
        if flat.len() == m * n {
            return MatrixSystem::new(m, n, flat);
        }
        return Err(Error::DegenerateInput(format!(
            "matrix literal is {rows_found}x{cols_found} but --m/--n say {m}x{n}"
        )));
    }
    MatrixSystem::new(m, n, parsed.into_iter().flatten().collect())
}

/// Comma-separated exact rationals.
pub fn parse_rational_vec(s: &str, want: usize) -> Result<Vec<BigRational>> {
    let v: Vec<BigRational> = s
        .split(',')
        .map(parse_rational)
        .collect::<Result<Vec<_>>>()?;
    if v.len() != want {
        return Err(Error::DegenerateInput(format!(
            "expected {want} coordinates, got {}",
            v.len()
        )));
    }
    Ok(v)
}

/// "lo..hi" dyadic scale exponents to the scale list 2^-lo ..= 2^-hi.
pub fn parse_scales(s: &str) -> Result<Vec<f64>> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| Error::DegenerateInput(format!("bad scale range {s:?}")))?;
    let lo: i32 = lo
        .trim()
        .parse()
        .map_err(|_| Error::DegenerateInput(format!("bad scale range {s:?}")))?;
    let hi: i32 = hi
        .trim()
        .parse()
        .map_err(|_| Error::DegenerateInput(format!("bad scale range {s:?}")))?;
    if hi <= lo {
        return Err(Error::DegenerateInput("scale range must ascend".into()));
    }
    Ok((lo..=hi).map(|k| 2f64.powi(-k)).collect())
}

/// Flat `key = value` config lines; '#' starts a comment.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Error::DegenerateInput(format!("config line {} is not key = value", lineno + 1))
        })?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

pub fn default_center(d: usize) -> Vec<BigRational> {
    vec![BigRational::new(BigInt::from(1), BigInt::from(2)); d]
}
