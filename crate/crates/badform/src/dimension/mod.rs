//! Numerical Hausdorff/box-dimension estimators: generic box counting against
//! membership oracles, bounded-quotient cylinder pressure sums, and the
//! covering/renormalization upper-bound procedure over lattice orbits.

mod boxcount;
mod covering;
mod cylinder;

pub use boxcount::{box_count_dim, ek_box_oracle, ek_box_oracle_resolution, Region};
pub use covering::{covering_upper_bound, direct_orbit_delta, CoverParams, CoverReport};
pub use cylinder::ek_cylinder_dim;

use serde_json::json;

/// How an estimate was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    BoxCount,
    CylinderPressure,
    CoveringUpper,
    Formula,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::BoxCount => "box-count",
            Method::CylinderPressure => "cylinder-pressure",
            Method::CoveringUpper => "covering-upper",
            Method::Formula => "formula",
        }
    }
}

/// A dimension estimate with its provenance and a spread indicator
/// (regression standard error or bracketing half-width, as applicable).
#[derive(Debug, Clone)]
pub struct DimensionEstimate {
    pub value: f64,
    pub method: Method,
    pub stderr: f64,
    pub params: serde_json::Value,
}

impl DimensionEstimate {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "value": self.value,
            "method": self.method.as_str(),
            "stderr": self.stderr,
            "params": self.params,
        })
    }
}

/// Flow time that balances the covering procedure's decay terms:
/// `t = (1/lambda') (ln(2 E'' / D') + (m+n)(mn+1) ln(1/eps))`.
pub fn choose_t(eps: f64, m: u32, n: u32, lambda_prime: f64, e_pp: f64, d_p: f64) -> f64 {
    assert!(eps > 0.0 && eps < 1.0);
    assert!(lambda_prime > 0.0 && e_pp > 0.0 && d_p > 0.0);
    let (mf, nf) = (m as f64, n as f64);
    (1.0 / lambda_prime)
        * ((2.0 * e_pp / d_p).ln() + (mf + nf) * (mf * nf + 1.0) * (1.0 / eps).ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn choose_t_values() {
        // log term vanishes when E'' = D'/2
        let t = choose_t(0.3, 2, 1, 0.7, 0.5, 1.0);
        assert!((t - (1.0 / 0.7) * 3.0 * 3.0 * (1.0f64 / 0.3).ln()).abs() < 1e-12);
        // worked value: ln 4 + 4 ln 10
        let t = choose_t(0.1, 1, 1, 1.0, 2.0, 1.0);
        assert!((t - (4f64.ln() + 4.0 * 10f64.ln())).abs() < 1e-12);
        assert!((t - 10.59663).abs() < 1e-4);
        // increasing as eps decreases
        let mut prev = 0.0;
        for k in 1..8 {
            let t = choose_t(10f64.powi(-k), 1, 2, 0.5, 3.0, 1.0);
            assert!(t > prev);
            prev = t;
        }
    }
}
