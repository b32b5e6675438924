//! Wasm bindings for the browser demo. Each export computes one explorable
//! object and hands the page a JSON string; all drawing happens in plain JS.

use badform::arith::Real;
use badform::diophantine::{bound_curves, hensley_dim, p_exponent, BoundCurveParams, MatrixSystem};
use badform::dimension::{ek_cylinder_dim, CoverParams};
use badform::game::{cantor_build, Ball, CantorBuildOptions, FallbackAlice, SimplexAlice};
use badform::lattice::{cusp_verdict_from_profile, orbit_profile, DaniVerdict};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::json;
use wasm_bindgen::prelude::*;

fn err(e: badform::Error) -> JsError {
    JsError::new(&e.to_string())
}

fn parse_system(entries: &str) -> Result<MatrixSystem, JsError> {
    let rows: Vec<&str> = entries.split(';').collect();
    let parsed: Result<Vec<Vec<Real>>, _> = rows
        .iter()
        .map(|row| {
            row.split(',')
                .map(|e| Real::parse(e.trim(), 128))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect();
    let parsed = parsed.map_err(err)?;
    let (m, n) = (parsed.len(), parsed[0].len());
    MatrixSystem::new(m, n, parsed.into_iter().flatten().collect()).map_err(err)
}

/// Orbit profile of the flow over the embedded lattice of `entries`, with the
/// cusp threshold for constant `c` and the entry/avoidance verdict.
#[wasm_bindgen]
pub fn orbit_json(entries: &str, c: f64, t_max: f64, dt: f64) -> Result<String, JsError> {
    let a = parse_system(entries)?;
    let d = a.rows() + a.cols();
    if !(c > 0.0 && c < 1.0) {
        return Err(JsError::new("need 0 < c < 1"));
    }
    let eps = c.powf(1.0 / d as f64);
    let profile = orbit_profile(&a, t_max.clamp(1.0, 40.0), dt.clamp(1e-4, 0.5), 1 << 22)
        .map_err(err)?;
    let verdict = cusp_verdict_from_profile(&profile, eps, t_max);
    let vjson = match &verdict {
        DaniVerdict::AvoidsCuspUpTo { t_max, boundary } => {
            json!({ "type": "avoids", "t_max": t_max, "boundary": boundary })
        }
        DaniVerdict::EntersCuspAt { t, .. } => json!({ "type": "enters", "t": t }),
    };
    let doc = json!({
        "m": profile.m,
        "n": profile.n,
        "eps": eps,
        "t": profile.samples.iter().map(|s| s.t).collect::<Vec<_>>(),
        "delta": profile.samples.iter().map(|s| s.delta).collect::<Vec<_>>(),
        "min_delta": profile.min_delta(),
        "verdict": vjson,
    });
    Ok(doc.to_string())
}

/// Two-sided dimension bound curves over a log grid of constants, with the
/// bounded-quotient benchmark for the scalar case.
#[wasm_bindgen]
pub fn bounds_json(
    m: u32,
    n: u32,
    k1: f64,
    k2: f64,
    c_lo_exp: f64,
    c_hi_exp: f64,
    points: u32,
) -> Result<String, JsError> {
    if m == 0 || n == 0 || points < 2 {
        return Err(JsError::new("need m, n >= 1 and at least two points"));
    }
    let params = BoundCurveParams {
        k1,
        k2,
        p_exponent: p_exponent(m, n),
    };
    let mut cs = Vec::new();
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    let mut benchmark = Vec::new();
    for i in 0..points {
        let e = c_lo_exp + (c_hi_exp - c_lo_exp) * i as f64 / (points - 1) as f64;
        let c = 10f64.powf(e);
        let Ok((lo, hi)) = bound_curves(m, n, c, &params) else {
            continue;
        };
        cs.push(c);
        lower.push(lo);
        upper.push(hi);
        if m == 1 && n == 1 {
            let k = (1.0 / c).round().max(2.0) as u64;
            benchmark.push(hensley_dim(k).ok());
        }
    }
    let doc = json!({
        "m": m,
        "n": n,
        "p_exponent": params.p_exponent,
        "c": cs,
        "lower": lower,
        "upper": upper,
        "benchmark": benchmark,
        "cylinder_anchor": if m == 1 && n == 1 {
            ek_cylinder_dim(2, 10).ok().map(|e| json!({ "c": 0.5, "value": e.value }))
        } else {
            None
        },
    });
    Ok(doc.to_string())
}

/// Kept-cube geometry of the game-driven subdivision for canvas rendering.
#[wasm_bindgen]
pub fn cantor_json(
    d: u32,
    inv_beta: u32,
    depth: u32,
    use_simplex: bool,
    expand_limit: u32,
) -> Result<String, JsError> {
    if !(1..=2).contains(&d) || inv_beta < 4 || depth == 0 || depth > 4 {
        return Err(JsError::new("need d in {1,2}, 1/beta >= 4, depth in 1..=4"));
    }
    let beta = BigRational::new(BigInt::from(1), BigInt::from(inv_beta));
    let center = vec![BigRational::new(BigInt::from(1), BigInt::from(2)); d as usize];
    let initial = Ball::from_rational(&center, BigRational::from_integer(BigInt::from(1)))
        .map_err(err)?;
    let options = CantorBuildOptions {
        expand_limit: if expand_limit == 0 {
            None
        } else {
            Some(expand_limit as usize)
        },
        store_cap: 20_000,
    };
    let tree = if use_simplex {
        cantor_build(&mut SimplexAlice, &beta, &initial, depth as usize, &options)
    } else {
        cantor_build(&mut FallbackAlice, &beta, &initial, depth as usize, &options)
    }
    .map_err(err)?;
    Ok(tree.to_json().to_string())
}

/// Survivor counts of the covering procedure around a base system.
#[wasm_bindgen]
pub fn cover_json(entries: &str, c: f64, depth: u32) -> Result<String, JsError> {
    let a0 = parse_system(entries)?;
    let params = CoverParams {
        c: c.clamp(1e-4, 0.5),
        depth: depth.clamp(1, 3) as usize,
        ..Default::default()
    };
    let (est, report) = badform::dimension::covering_upper_bound(&a0, &params).map_err(err)?;
    let doc = json!({
        "value": est.value,
        "eps": report.eps,
        "delta": report.delta,
        "r": report.r,
        "n_per_cube": report.n_total,
        "levels": report.levels.iter().map(|l| json!({
            "level": l.level, "tested": l.tested, "survivors": l.survivors,
        })).collect::<Vec<_>>(),
        "emptied_at": report.emptied_at,
        "params": est.params,
    });
    Ok(doc.to_string())
}
