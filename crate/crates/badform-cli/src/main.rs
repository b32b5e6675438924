mod args;
mod parse;
mod record;

use std::collections::BTreeMap;
use std::process::ExitCode;

use badform::arith::Real;
use badform::diophantine::{
    self, bound_curves, hensley_dim, is_bad_truncated, p_exponent,
    transference_exponent, BadVerdict, BoundCurveParams,
};
use badform::dimension::{
    box_count_dim, covering_upper_bound, ek_box_oracle_resolution, ek_cylinder_dim, CoverParams,
    Region,
};
use badform::game::{
    self, cantor_build, child_loss_constant, codim_rate_bound, play, strategy_params_admissible,
    winning_dim_lower_bound, Ball, CantorBuildOptions,
};
use badform::lattice::{dani_check, orbit_profile, DaniVerdict};
use badform::{Error, MIN_PRECISION_BITS};
use clap::Parser;
use num_traits::ToPrimitive;
use serde_json::json;

use args::{AliceKind, BobKind, BoxdimMethod, BoxdimSet, Cli, Command};
use record::RunOutcome;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::SearchBoundTooSmall { .. } = e {
                eprintln!("hint: raise --search-bound to enlarge the certified enumeration box");
            }
            match e {
                Error::DegenerateInput(_) => ExitCode::from(2),
                _ => ExitCode::from(3),
            }
        }
    }
}

struct Settings {
    precision: usize,
    search_bound: u64,
    threads: usize,
    seed: u64,
}

fn run(cli: Cli) -> badform::Result<()> {
    let mut g = cli.global.clone();
    // config file values fill in unset globals; flags always win
    if let Some(path) = &g.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::DegenerateInput(format!("cannot read config: {e}")))?;
        for (k, v) in parse::parse_config(&text)? {
            match k.as_str() {
                "cache" if g.cache.is_none() => g.cache = Some(v.into()),
                "seed" if g.seed.is_none() => g.seed = v.parse().ok(),
                "threads" if g.threads.is_none() => g.threads = v.parse().ok(),
                "precision-bits" if g.precision_bits.is_none() => {
                    g.precision_bits = v.parse().ok()
                }
                "search-bound" if g.search_bound.is_none() => g.search_bound = v.parse().ok(),
                _ => {}
            }
        }
    }
    let settings = Settings {
        precision: g.precision_bits.unwrap_or(MIN_PRECISION_BITS),
        search_bound: g.search_bound.unwrap_or(1 << 22),
        threads: g.threads.unwrap_or(1).max(1),
        seed: g.seed.unwrap_or(0),
    };

    if let Command::Replay(ref r) = cli.command {
        return replay(&r.record, &settings);
    }

    let started = record::now_ms();
    let (name, params) = canonical_params(&cli.command, &settings)?;
    let (outcome, summary) = execute(&name, &params, &settings)?;
    println!("{summary}");

    if let Some(out) = &g.out {
        std::fs::write(out, record::canonical_bytes(&outcome.result))
            .map_err(|e| Error::DegenerateInput(format!("cannot write --out: {e}")))?;
    }
    let cache_dir = g.cache.or_else(|| std::env::var_os("BADFORM_CACHE").map(Into::into));
    if let Some(cache) = cache_dir {
        let dir = record::persist(&cache, &name, &params, &outcome, started)?;
        println!("record: {}", dir.join("record.json").display());
    }
    Ok(())
}

fn replay(path: &std::path::Path, settings: &Settings) -> badform::Result<()> {
    let loaded = record::load(path)?;
    let (outcome, _) = execute(&loaded.command, &loaded.parameters, settings)?;
    let old = record::canonical_bytes(&loaded.result);
    let new = record::canonical_bytes(&outcome.result);
    if old == new {
        println!(
            "replay ok: payload reproduced byte for byte ({} bytes)",
            old.len()
        );
        Ok(())
    } else {
        if std::env::var_os("BADFORM_REPLAY_DEBUG").is_some() {
            eprintln!("recorded: {}", String::from_utf8_lossy(&old));
            eprintln!("fresh   : {}", String::from_utf8_lossy(&new));
        }
        Err(Error::DegenerateInput(
            "replay mismatch: payload differs from the recorded one".into(),
        ))
    }
}

/// Canonical string-keyed parameters for each command; these are what gets
/// recorded and replayed.
fn canonical_params(
    cmd: &Command,
    s: &Settings,
) -> badform::Result<(String, BTreeMap<String, String>)> {
    let mut p = BTreeMap::new();
    let mut put = |k: &str, v: String| {
        p.insert(k.to_string(), v);
    };
    put("precision_bits", s.precision.to_string());
    let name = match cmd {
        Command::Approx(a) => {
            put("entries", a.entries.clone());
            if let Some(m) = a.m {
                put("m", m.to_string());
            }
            if let Some(n) = a.n {
                put("n", n.to_string());
            }
            put("bound", a.bound.to_string());
            if let Some(c) = &a.c {
                put("c", c.clone());
            }
            "approx"
        }
        Command::Orbit(a) => {
            put("entries", a.entries.clone());
            if let Some(m) = a.m {
                put("m", m.to_string());
            }
            if let Some(n) = a.n {
                put("n", n.to_string());
            }
            put("t_max", a.t_max.to_string());
            put("dt", a.dt.to_string());
            put("search_bound", s.search_bound.to_string());
            "orbit"
        }
        Command::Dani(a) => {
            put("entries", a.entries.clone());
            if let Some(m) = a.m {
                put("m", m.to_string());
            }
            if let Some(n) = a.n {
                put("n", n.to_string());
            }
            put("c", a.c.clone());
            put("t_max", a.t_max.to_string());
            put("dt", a.dt.to_string());
            put("search_bound", s.search_bound.to_string());
            "dani"
        }
        Command::Game(a) => {
            put("m", a.m.to_string());
            put("beta", a.beta.clone());
            put("rounds", a.rounds.to_string());
            put(
                "bob",
                match a.bob {
                    BobKind::Shrink => "shrink",
                    BobKind::Random => "random",
                    BobKind::Steer => "steer",
                }
                .to_string(),
            );
            put(
                "alice",
                match a.alice {
                    AliceKind::Simplex => "simplex",
                    AliceKind::Fallback => "fallback",
                }
                .to_string(),
            );
            if let Some(c) = &a.center {
                put("center", c.clone());
            }
            put("radius", a.radius.clone());
            if let Some(t) = &a.target {
                put("target", t.clone());
            }
            put("seed", s.seed.to_string());
            put("check_bound", a.check_bound.to_string());
            "game"
        }
        Command::Cantor(a) => {
            put("d", a.d.to_string());
            put("beta", a.beta.clone());
            put("depth", a.depth.to_string());
            put(
                "alice",
                match a.alice {
                    AliceKind::Simplex => "simplex",
                    AliceKind::Fallback => "fallback",
                }
                .to_string(),
            );
            if let Some(l) = a.expand_limit {
                put("expand_limit", l.to_string());
            }
            if let Some(c) = &a.center {
                put("center", c.clone());
            }
            put("radius", a.radius.clone());
            "cantor"
        }
        Command::Boxdim(a) => {
            put(
                "set",
                match a.set {
                    BoxdimSet::Ek => "ek",
                    BoxdimSet::Full => "full",
                    BoxdimSet::Strip => "strip",
                }
                .to_string(),
            );
            put("k", a.k.to_string());
            put("max_depth", a.max_depth.to_string());
            put(
                "method",
                match a.method {
                    BoxdimMethod::Cylinder => "cylinder",
                    BoxdimMethod::Boxcount => "boxcount",
                }
                .to_string(),
            );
            put("scales", a.scales.clone());
            put("samples", a.samples.to_string());
            put("q_res", a.q_res.to_string());
            put("dim", a.dim.to_string());
            "boxdim"
        }
        Command::Cover(a) => {
            put("entries", a.entries.clone());
            if let Some(m) = a.m {
                put("m", m.to_string());
            }
            if let Some(n) = a.n {
                put("n", n.to_string());
            }
            put("c", a.c.to_string());
            put("t", a.t.unwrap_or(10f64.ln()).to_string());
            put("depth", a.depth.to_string());
            put("b", a.b.to_string());
            put("search_bound", s.search_bound.to_string());
            "cover"
        }
        Command::Bounds(a) => {
            put("m", a.m.to_string());
            put("n", a.n.to_string());
            put("c", a.c.to_string());
            put("k1", a.k1.to_string());
            put("k2", a.k2.to_string());
            if let Some(beta) = a.beta {
                put("beta", beta.to_string());
            }
            if let Some(d) = a.d {
                put("d", d.to_string());
            }
            "bounds"
        }
        Command::Replay(_) => unreachable!("handled before"),
    };
    Ok((name.to_string(), p))
}

fn get<'a>(p: &'a BTreeMap<String, String>, k: &str) -> badform::Result<&'a str> {
    p.get(k)
        .map(|s| s.as_str())
        .ok_or_else(|| Error::DegenerateInput(format!("missing parameter {k}")))
}

fn get_f64(p: &BTreeMap<String, String>, k: &str) -> badform::Result<f64> {
    get(p, k)?
        .parse()
        .map_err(|_| Error::DegenerateInput(format!("parameter {k} is not a number")))
}

fn get_u64(p: &BTreeMap<String, String>, k: &str) -> badform::Result<u64> {
    get(p, k)?
        .parse()
        .map_err(|_| Error::DegenerateInput(format!("parameter {k} is not an integer")))
}

fn opt_usize(p: &BTreeMap<String, String>, k: &str) -> Option<usize> {
    p.get(k).and_then(|s| s.parse().ok())
}

fn witness_json(w: &diophantine::ApproximationWitness) -> serde_json::Value {
    json!({
        "q": w.q.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "p": w.p.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "quality": w.quality.to_f64(),
        "quality_exact": w.quality.exact_string(),
    })
}

fn verdict_json(v: &BadVerdict) -> serde_json::Value {
    match v {
        BadVerdict::ConsistentUpTo(b) => json!({ "type": "consistent-up-to", "bound": b }),
        BadVerdict::ViolatedBy(w) => json!({ "type": "violated-by", "witness": witness_json(w) }),
    }
}

/// Runs one command from canonical parameters. Every value in the returned
/// payload is a pure function of the parameters, which is what makes cached
/// runs replayable bit for bit.
fn execute(
    name: &str,
    p: &BTreeMap<String, String>,
    settings: &Settings,
) -> badform::Result<(RunOutcome, String)> {
    let precision = opt_usize(p, "precision_bits").unwrap_or(MIN_PRECISION_BITS);
    match name {
        "approx" => {
            let a = parse::parse_matrix(
                get(p, "entries")?,
                opt_usize(p, "m"),
                opt_usize(p, "n"),
                precision,
            )?;
            let bound = get_u64(p, "bound")?;
            let (constant, witness) =
                diophantine::approx_constant_truncated_threaded(&a, bound, settings.threads);
            let mut result = json!({
                "m": a.rows(),
                "n": a.cols(),
                "bound": bound,
                "constant": constant.to_f64(),
                "constant_exact": constant.exact_string(),
                "witness": witness_json(&witness),
            });
            let mut summary = format!(
                "upper bound for the approximation constant (|q| <= {bound}): {}\n  witness q={:?} p={:?}",
                constant.to_f64(),
                witness.q.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                witness.p.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            );
            if let Some(c_str) = p.get("c") {
                let c = parse::parse_scalar(c_str, precision)?;
                let verdict = is_bad_truncated(&a, &c, bound, badform::DEFAULT_ETA);
                summary.push_str(&format!(
                    "\n  membership at c = {c_str}: {}",
                    match &verdict {
                        BadVerdict::ConsistentUpTo(b) => format!("no violation up to {b}"),
                        BadVerdict::ViolatedBy(w) =>
                            format!("violated by q={:?}", w.q.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
                    }
                ));
                result["membership"] = verdict_json(&verdict);
            }
            Ok((
                RunOutcome {
                    result,
                    artifacts: vec![],
                },
                summary,
            ))
        }
        "orbit" => {
            let a = parse::parse_matrix(
                get(p, "entries")?,
                opt_usize(p, "m"),
                opt_usize(p, "n"),
                precision,
            )?;
            let t_max = get_f64(p, "t_max")?;
            let dt = get_f64(p, "dt")?;
            let search = get_u64(p, "search_bound")?;
            let profile = orbit_profile(&a, t_max, dt, search)?;
            let csv = profile.to_csv();
            let result = json!({
                "m": profile.m,
                "n": profile.n,
                "t_max": t_max,
                "dt": dt,
                "samples": profile.samples.len(),
                "min_delta": profile.min_delta(),
                "lipschitz_step": profile.lipschitz_step,
                "csv_artifact": "orbit.csv",
            });
            let summary = format!(
                "orbit profile: {} samples, min delta = {:.9}",
                profile.samples.len(),
                profile.min_delta()
            );
            Ok((
                RunOutcome {
                    result,
                    artifacts: vec![("orbit.csv".into(), csv)],
                },
                summary,
            ))
        }
        "dani" => {
            let a = parse::parse_matrix(
                get(p, "entries")?,
                opt_usize(p, "m"),
                opt_usize(p, "n"),
                precision,
            )?;
            let c = parse::parse_scalar(get(p, "c")?, precision)?;
            let t_max = get_f64(p, "t_max")?;
            let dt = get_f64(p, "dt")?;
            let search = get_u64(p, "search_bound")?;
            let (verdict, eps) = dani_check(&a, &c, t_max, dt, search)?;
            let (vjson, summary) = match &verdict {
                DaniVerdict::AvoidsCuspUpTo { t_max, boundary } => (
                    json!({ "type": "avoids-cusp-up-to", "t_max": t_max, "boundary": boundary }),
                    format!(
                        "orbit avoids the cusp neighborhood (eps = {eps:.9}) up to t = {t_max}{}",
                        if *boundary { " [boundary margin hit]" } else { "" }
                    ),
                ),
                DaniVerdict::EntersCuspAt { t, witness } => (
                    json!({ "type": "enters-cusp-at", "t": t, "witness": witness }),
                    format!("orbit enters the cusp neighborhood (eps = {eps:.9}) at t = {t}"),
                ),
            };
            Ok((
                RunOutcome {
                    result: json!({ "eps": eps, "t_max": t_max, "dt": dt, "verdict": vjson }),
                    artifacts: vec![],
                },
                summary,
            ))
        }
        "game" => {
            let m = opt_usize(p, "m").unwrap_or(1);
            let beta = parse::parse_rational(get(p, "beta")?)?;
            let rounds = opt_usize(p, "rounds").unwrap_or(40);
            let center = match p.get("center") {
                Some(c) => parse::parse_rational_vec(c, m)?,
                None => parse::default_center(m),
            };
            let radius = parse::parse_rational(get(p, "radius")?)?;
            let initial = Ball::from_rational(&center, radius)?;
            let mut alice: Box<dyn game::AliceStrategy> = match get(p, "alice")? {
                "fallback" => Box::new(game::FallbackAlice),
                _ => Box::new(game::SimplexAlice),
            };
            let seed = get_u64(p, "seed").unwrap_or(0);
            let mut bob: Box<dyn game::BobStrategy> = match get(p, "bob")? {
                "shrink" => Box::new(game::ShrinkAwayBob),
                "steer" => {
                    let t = match p.get("target") {
                        Some(t) => parse::parse_rational_vec(t, m)?,
                        None => parse::default_center(m),
                    };
                    Box::new(game::SteerBob::toward_rational(&t))
                }
                _ => Box::new(game::SeededBob::new(seed)),
            };
            let state = play(alice.as_mut(), bob.as_mut(), beta.clone(), initial, rounds)?;
            game::validate_transcript(&state)?;
            // guarantee check at the strategy's constant
            let check_bound = get_u64(p, "check_bound").unwrap_or(1000);
            let fact: f64 = (1..=m as u64).product::<u64>() as f64;
            let beta_f = beta.to_f64().unwrap();
            let c_star = (beta_f * beta_f / (4.0 * fact)).powi(m as i32);
            let limit: Vec<Real> = state
                .last_ball()
                .center
                .iter()
                .map(|s| Real::from_surd(s.clone()))
                .collect();
            let sys = diophantine::MatrixSystem::new(m, 1, limit)?;
            let c_test = Real::from_f64(c_star * (1.0 - 1e-6))?;
            let verdict = is_bad_truncated(&sys, &c_test, check_bound, badform::DEFAULT_ETA);
            let transcript = serde_json::to_string_pretty(&state.to_json()).expect("json");
            let result = json!({
                "m": m,
                "beta": beta.to_string(),
                "rounds": rounds,
                "seed": seed,
                "final_center": state.last_ball().center.iter().map(|x| x.to_f64()).collect::<Vec<_>>(),
                "final_radius": state.last_ball().radius.to_f64(),
                "guarantee": {
                    "c_star": c_star,
                    "check_bound": check_bound,
                    "admissible": strategy_params_admissible(c_star, beta_f, m as u32),
                    "holds": verdict.is_consistent(),
                    "verdict": verdict_json(&verdict),
                },
                "transcript_artifact": "transcript.json",
            });
            let summary = format!(
                "{} rounds complete; limit point {:?}\n  guarantee at c = (beta^2/4m!)^m = {:.3e}: {}",
                rounds,
                state
                    .last_ball()
                    .center
                    .iter()
                    .map(|x| x.to_f64())
                    .collect::<Vec<_>>(),
                c_star,
                if verdict.is_consistent() { "holds" } else { "VIOLATED" }
            );
            Ok((
                RunOutcome {
                    result,
                    artifacts: vec![("transcript.json".into(), transcript)],
                },
                summary,
            ))
        }
        "cantor" => {
            let d = opt_usize(p, "d").unwrap_or(1);
            let beta = parse::parse_rational(get(p, "beta")?)?;
            let depth = opt_usize(p, "depth").unwrap_or(3);
            let center = match p.get("center") {
                Some(c) => parse::parse_rational_vec(c, d)?,
                None => parse::default_center(d),
            };
            let radius = parse::parse_rational(get(p, "radius")?)?;
            let initial = Ball::from_rational(&center, radius)?;
            let mut alice: Box<dyn game::AliceStrategy> = match get(p, "alice")? {
                "fallback" => Box::new(game::FallbackAlice),
                _ => Box::new(game::SimplexAlice),
            };
            let options = CantorBuildOptions {
                expand_limit: opt_usize(p, "expand_limit"),
                ..Default::default()
            };
            let tree = cantor_build(alice.as_mut(), &beta, &initial, depth, &options)?;
            let (weak, sharp) = tree.kept_bounds();
            let min_kept = tree.min_kept();
            let beta_f = beta.to_f64().unwrap();
            let dim_bound = winning_dim_lower_bound(d as u32, beta_f).ok();
            let tree_json = serde_json::to_string_pretty(&tree.to_json()).expect("json");
            let result = json!({
                "d": d,
                "beta": beta.to_string(),
                "depth": depth,
                "loss_constant": child_loss_constant(d as u32),
                "min_kept": min_kept,
                "kept_bound_weak": weak,
                "kept_bound_sharp": sharp,
                "dim_lower_bound": dim_bound,
                "level_nodes": tree.levels.iter().map(|l| l.nodes.len()).collect::<Vec<_>>(),
                "tree_artifact": "tree.json",
            });
            let summary = format!(
                "subdivision of depth {depth}: min kept children = {min_kept:?} (guarantees: weak {:.2}, sharp {:.2}); dim lower bound {}",
                weak,
                sharp,
                dim_bound.map(|v| format!("{v:.7}")).unwrap_or_else(|| "n/a".into()),
            );
            Ok((
                RunOutcome {
                    result,
                    artifacts: vec![("tree.json".into(), tree_json)],
                },
                summary,
            ))
        }
        "boxdim" => {
            let set = get(p, "set")?;
            let k = get_u64(p, "k")?;
            let method = get(p, "method")?;
            let est = match (set, method) {
                ("ek", "cylinder") => ek_cylinder_dim(k, opt_usize(p, "max_depth").unwrap_or(12))?,
                _ => {
                    let scales = parse::parse_scales(get(p, "scales")?)?;
                    let samples = get_u64(p, "samples")? as u32;
                    let dim = opt_usize(p, "dim").unwrap_or(2);
                    match set {
                        "ek" => {
                            let oracle = ek_box_oracle_resolution(k, get_u64(p, "q_res")?);
                            box_count_dim(&oracle, &Region::unit(1), &scales, samples)?
                        }
                        "full" => {
                            box_count_dim(&|_: &[f64]| true, &Region::unit(dim), &scales, samples)?
                        }
                        "strip" => {
                            let thin = *scales.last().expect("nonempty");
                            box_count_dim(
                                &move |x: &[f64]| x[dim - 1] <= thin,
                                &Region::unit(dim),
                                &scales,
                                samples,
                            )?
                        }
                        other => {
                            return Err(Error::DegenerateInput(format!("unknown set {other}")))
                        }
                    }
                }
            };
            let summary = format!(
                "dimension estimate ({}): {:.4} +/- {:.4}",
                est.method.as_str(),
                est.value,
                est.stderr
            );
            Ok((
                RunOutcome {
                    result: est.to_json(),
                    artifacts: vec![],
                },
                summary,
            ))
        }
        "cover" => {
            let a0 = parse::parse_matrix(
                get(p, "entries")?,
                opt_usize(p, "m"),
                opt_usize(p, "n"),
                precision,
            )?;
            let params = CoverParams {
                c: get_f64(p, "c")?,
                t: get_f64(p, "t")?,
                depth: opt_usize(p, "depth").unwrap_or(3),
                b: get_f64(p, "b")?,
                search_bound: get_u64(p, "search_bound")?,
            };
            let (est, report) = covering_upper_bound(&a0, &params)?;
            let csv = report.to_csv();
            let mut result = est.to_json();
            result["levels_artifact"] = json!("cover.csv");
            let summary = format!(
                "covering estimate: value = {:.6} (eps = {:.6}, delta = {:.6}, r = {:.3e}, {} per-cube subcubes)\n  survivors per level: {:?}{}",
                est.value,
                report.eps,
                report.delta,
                report.r,
                report.n_total,
                report.levels.iter().map(|l| l.survivors).collect::<Vec<_>>(),
                report
                    .emptied_at
                    .map(|l| format!("\n  cover emptied at level {l}"))
                    .unwrap_or_default(),
            );
            Ok((
                RunOutcome {
                    result,
                    artifacts: vec![("cover.csv".into(), csv)],
                },
                summary,
            ))
        }
        "bounds" => {
            let m: u32 = get_u64(p, "m")? as u32;
            let n: u32 = get_u64(p, "n")? as u32;
            let c = get_f64(p, "c")?;
            let params = BoundCurveParams {
                k1: get_f64(p, "k1")?,
                k2: get_f64(p, "k2")?,
                p_exponent: p_exponent(m, n),
            };
            let (lower, upper) = bound_curves(m, n, c, &params)?;
            let mut result = json!({
                "m": m, "n": n, "c": c,
                "p_exponent": params.p_exponent,
                "k1": params.k1, "k2": params.k2,
                "dim_lower": lower,
                "dim_upper": upper,
                "transference_exponent": transference_exponent(m, n).to_string(),
            });
            let mut summary = format!(
                "dimension bounds at c = {c}: {lower:.6} <= dim <= {upper:.6} (p = {})",
                params.p_exponent
            );
            if m == 1 && n == 1 {
                let k = (1.0 / c).round().max(2.0) as u64;
                if let Ok(h) = hensley_dim(k) {
                    result["bounded_quotient_dim"] = json!({ "k": k, "value": h });
                    summary.push_str(&format!(
                        "\n  bounded-quotient benchmark: dim E_{k} ~ {h:.6}"
                    ));
                }
            }
            if let (Some(beta), Some(d)) = (
                p.get("beta").and_then(|x| x.parse::<f64>().ok()),
                p.get("d").and_then(|x| x.parse::<u32>().ok()),
            ) {
                let lb = winning_dim_lower_bound(d, beta)?;
                let rate = codim_rate_bound(d, beta)?;
                result["game_side"] = json!({
                    "d": d, "beta": beta,
                    "loss_constant": child_loss_constant(d),
                    "dim_lower_bound": lb,
                    "codim_rate_bound": rate,
                });
                summary.push_str(&format!(
                    "\n  game side at beta = {beta}: dim >= {lb:.7}, codim rate <= {rate:.7}"
                ));
            }
            Ok((
                RunOutcome {
                    result,
                    artifacts: vec![],
                },
                summary,
            ))
        }
        other => Err(Error::DegenerateInput(format!("unknown command {other}"))),
    }
}
