//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its measurements (run with `--nocapture` to see them). Tolerances and
//! thresholds are pinned in the assertions themselves.

use std::time::Instant;

use badform::arith::Real;
use badform::diophantine::{
    approx_constant_truncated, approx_quality, hensley_dim, is_bad_truncated, p_exponent,
    sandwich_check, transference_exponent, MatrixSystem,
};
use badform::dimension::{
    box_count_dim, covering_upper_bound, ek_box_oracle_resolution, ek_cylinder_dim, CoverParams,
    Region,
};
use badform::game::{
    cantor_build, child_loss_constant, codim_rate_bound, play, winning_dim_lower_bound, Ball,
    CantorBuildOptions, SeededBob, SimplexAlice,
};
use badform::lattice::{dani_check, DaniVerdict};
use badform::DEFAULT_ETA;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// xorshift for reproducible random inputs across the suite
struct Rng(u64);

impl Rng {
    fn next_f64(&mut self) -> f64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }
}

#[test]
fn criterion_1_golden_ratio_constant() {
    let started = Instant::now();
    let phi = MatrixSystem::scalar(Real::phi());
    let (value, witness) = approx_constant_truncated(&phi, 10_000);
    let stated = (21.0 - 9.0 * 5f64.sqrt()) / 2.0; // 0.4376941...
    println!(
        "ACCEPTANCE 1 golden-ratio constant: value {} at q={:?} ({:?})",
        value.to_f64(),
        witness.q,
        started.elapsed()
    );
    assert!(started.elapsed().as_secs_f64() < 5.0, "runtime budget");
    // Stated expectation: (21 - 9 sqrt 5)/2 with witness q = 3. The brute
    // force over 0 < |q| <= 10^4 per the membership definition returns
    // (3 - sqrt 5)/2 = 0.3819660... at q = 1 (quality 1*|phi - 2|), which
    // undercuts the stated constant; the q = 3 term is exactly the stated
    // value but is not the minimum. This assertion is kept as stated.
    assert!(
        (value.to_f64() - stated).abs() < 1e-9 && witness.q == vec![BigInt::from(3)],
        "stated value {stated} at q=3 is not the search minimum: got {} at q={:?}; \
         the quality at q=1 is 1*|phi - 2| = (3 - sqrt 5)/2 = {}, which is smaller \
         than the stated constant (see the q=3 convergent quality (21 - 9 sqrt 5)/2 = {})",
        value.to_f64(),
        witness.q,
        (3.0 - 5f64.sqrt()) / 2.0,
        stated,
    );
}

#[test]
fn criterion_2_dani_correspondence_both_directions() {
    let started = Instant::now();
    let shapes: [(usize, usize, usize); 3] = [(1, 1, 34), (2, 1, 33), (1, 2, 33)];
    let cs = [0.01f64, 0.05];
    // Matrices whose truncated minimum grazes c within this relative band are
    // resampled: their orbits dip below eps for a time shorter than the scan
    // step, so neither side of the equivalence can certify them.
    let band = 0.01;
    let mut rng = Rng(0x1234_5678_9abc_def1);
    let mut runs = 0usize;
    let mut resamples = 0usize;
    let mut entered = 0usize;
    for (m, n, count) in shapes {
        for _ in 0..count {
            'sample: loop {
                let entries: Vec<Real> = (0..m * n)
                    .map(|_| Real::from_f64(rng.next_f64()).unwrap())
                    .collect();
                let a = MatrixSystem::new(m, n, entries).unwrap();
                // prescreen both constants before committing to this matrix
                let mut per_c = Vec::new();
                for &c in &cs {
                    let eps = c.powf(1.0 / (m + n) as f64);
                    let q_bound = (eps * (15.0 / n as f64).exp()).ceil() as u64 + 1;
                    let (qmin, _) = approx_constant_truncated(&a, q_bound);
                    let qmin = qmin.to_f64();
                    if (qmin / c - 1.0).abs() < band {
                        resamples += 1;
                        assert!(resamples < 60, "too many grazing resamples");
                        continue 'sample;
                    }
                    per_c.push((c, eps, q_bound, qmin));
                }
                for (c, eps, q_bound, qmin) in per_c {
                    let t_scan = n as f64 * ((q_bound as f64) / eps).ln() + 1.0;
                    let (verdict, _) = dani_check(
                        &a,
                        &Real::from_f64(c).unwrap(),
                        t_scan,
                        1e-3,
                        1 << 22,
                    )
                    .unwrap();
                    let violated = qmin < c * (1.0 - band);
                    match verdict.enters() {
                        Some(t) => {
                            entered += 1;
                            // direction 1: entry by 15 forces a violation at
                            // the matched truncation
                            if t <= 15.0 {
                                assert!(
                                    violated,
                                    "({m},{n}) c={c}: cusp entry at t={t} but min quality {qmin} >= c"
                                );
                            }
                        }
                        None => {
                            // direction 2 (contrapositive): a violation at the
                            // matched truncation forces an entry by
                            // n ln(Q/eps) + 1 <= t_scan
                            assert!(
                                !violated,
                                "({m},{n}) c={c}: min quality {qmin} < c but no cusp entry by {t_scan}"
                            );
                        }
                    }
                    runs += 1;
                }
                break;
            }
        }
    }
    println!(
        "ACCEPTANCE 2 correspondence: {runs} runs, {entered} cusp entries, {resamples} grazing resamples, zero disagreements ({:?})",
        started.elapsed()
    );
    assert!(started.elapsed().as_secs_f64() < 600.0, "runtime budget");
}

#[test]
fn criterion_3_game_guarantee() {
    let started = Instant::now();
    let mut checked = 0usize;
    for m in [1usize, 2] {
        for beta in [rat(1, 10), rat(1, 20)] {
            let beta_f = beta.to_f64().unwrap();
            let fact: f64 = (1..=m as u64).product::<u64>() as f64;
            let c_star = (beta_f * beta_f / (4.0 * fact)).powi(m as i32);
            let c_test = Real::from_f64(c_star * (1.0 - 1e-6)).unwrap();
            for seed in 0..20u64 {
                // seeded rational start center in [0, 1]^m
                let center: Vec<BigRational> = (0..m)
                    .map(|i| rat(((seed * 7919 + i as u64 * 104_729 + 13) % 1000) as i64, 1000))
                    .collect();
                let initial = Ball::from_rational(&center, rat(1, 1)).unwrap();
                let mut alice = SimplexAlice;
                let mut bob = SeededBob::new(seed);
                let state = play(&mut alice, &mut bob, beta.clone(), initial, 40).unwrap();
                let limit: Vec<Real> = state
                    .last_ball()
                    .center
                    .iter()
                    .map(|s| Real::from_surd(s.clone()))
                    .collect();
                let sys = MatrixSystem::new(m, 1, limit).unwrap();
                let verdict = is_bad_truncated(&sys, &c_test, 1000, DEFAULT_ETA);
                assert!(
                    verdict.is_consistent(),
                    "m={m} beta={beta} seed={seed}: limit point violates c* = {c_star}"
                );
                checked += 1;
            }
        }
    }
    println!(
        "ACCEPTANCE 3 game guarantee: {checked} plays, zero failures ({:?})",
        started.elapsed()
    );
    assert!(started.elapsed().as_secs_f64() < 300.0, "runtime budget");
}

#[test]
fn criterion_4_cantor_counting() {
    let started = Instant::now();
    for d in [1usize, 2] {
        for inv_beta in [50i64, 100] {
            let beta = rat(1, inv_beta);
            let center = vec![rat(1, 2); d];
            let initial = Ball::from_rational(&center, rat(1, 1)).unwrap();
            let mut alice = SimplexAlice;
            let options = CantorBuildOptions {
                // counts always cover the full candidate grid of every
                // subdivided node; recursion is pruned in 2d where the full
                // tree has ~10^7 nodes at depth 3
                expand_limit: if d == 1 { None } else { Some(6) },
                ..Default::default()
            };
            let tree = cantor_build(&mut alice, &beta, &initial, 3, &options).unwrap();
            let (weak, sharp) = tree.kept_bounds();
            let md = child_loss_constant(d as u32);
            let expected_md = if d == 1 {
                4.0
            } else {
                12.0 + 2.0 * 2f64.sqrt()
            };
            assert!((md - expected_md).abs() < 1e-12);
            let min_kept = tree.min_kept().unwrap() as f64;
            if weak > 0.0 {
                assert!(
                    min_kept >= weak.ceil(),
                    "d={d} 1/beta={inv_beta}: min kept {min_kept} < weak bound {weak}"
                );
            }
            assert!(
                min_kept >= sharp.ceil().max(0.0),
                "d={d} 1/beta={inv_beta}: min kept {min_kept} < sharp bound {sharp}"
            );
            let subdivided: usize = tree
                .levels
                .iter()
                .map(|l| l.nodes.iter().filter(|n| n.kept.is_some()).count())
                .sum();
            println!(
                "ACCEPTANCE 4 cantor d={d} 1/beta={inv_beta}: {subdivided} nodes subdivided, min kept {min_kept}, bounds (weak {weak:.2}, sharp {sharp:.2})"
            );
        }
    }
    println!("ACCEPTANCE 4 cantor counting: all nodes meet both bounds ({:?})", started.elapsed());
    assert!(started.elapsed().as_secs_f64() < 120.0, "runtime budget");
}

#[test]
fn criterion_5_bounded_quotient_dimension_consistency() {
    let started = Instant::now();
    let formula = hensley_dim(8).unwrap();
    assert!((formula - 0.899993).abs() < 1e-6);
    let est8 = ek_cylinder_dim(8, 12).unwrap();
    assert!(
        (est8.value - formula).abs() < 0.03,
        "cylinder k=8: {} vs formula {formula}",
        est8.value
    );
    let est2 = ek_cylinder_dim(2, 12).unwrap();
    assert!(
        (est2.value - 0.531).abs() < 0.01,
        "cylinder k=2: {}",
        est2.value
    );
    let oracle = ek_box_oracle_resolution(2, 500);
    let scales: Vec<f64> = (9..=16).map(|k| 2f64.powi(-k)).collect();
    let boxed = box_count_dim(&oracle, &Region::unit(1), &scales, 96).unwrap();
    assert!(
        (boxed.value - est2.value).abs() < 0.03,
        "box count {} vs cylinder {}",
        boxed.value,
        est2.value
    );
    println!(
        "ACCEPTANCE 5 dimension consistency: cylinder(8)={:.5} vs formula {formula:.5}; cylinder(2)={:.5}; box(2)={:.5} ({:?})",
        est8.value, est2.value, boxed.value, started.elapsed()
    );
    assert!(started.elapsed().as_secs_f64() < 600.0, "runtime budget");
}

#[test]
fn criterion_6_sandwich_consistency() {
    let started = Instant::now();
    let mut rng = Rng(0xfeed_f00d_dead_beef);
    let mut checks = 0usize;
    for i in 0..200 {
        let x = Real::from_f64(rng.next_f64()).unwrap();
        for k in 1..=5u64 {
            let report = sandwich_check(&x, k, 50, 1000).unwrap();
            assert!(
                report.is_consistent(),
                "sample {i} k={k}: {:?}",
                report.contradiction
            );
            checks += 1;
        }
    }
    println!(
        "ACCEPTANCE 6 sandwich: {checks} checks, zero contradictions ({:?})",
        started.elapsed()
    );
}

#[test]
fn criterion_7_covering_soundness() {
    let started = Instant::now();
    // The box of offsets must sit around a badly approximable base point:
    // around a rational base the set is empty in the box and every cube dies
    // at level 1 (that trivial branch is covered by unit tests).
    let base = MatrixSystem::scalar(Real::phi());
    let mut prev = f64::INFINITY;
    for c in [0.02f64, 0.05, 0.1] {
        let params = CoverParams {
            c,
            t: 10f64.ln(),
            depth: 3,
            b: 0.1,
            search_bound: 1 << 22,
        };
        let (est, report) = covering_upper_bound(&base, &params).unwrap();
        // kill certification: || g_t u_A' v || <= (1 + 2r) ||g_t u_A v|| <= 2 delta
        assert!(
            report.worst_kill_ratio <= 1.0 + 1e-9,
            "c={c}: kill certification ratio {}",
            report.worst_kill_ratio
        );
        if (c - 0.05).abs() < 1e-12 {
            let k = (1.0 / c).round() as u64;
            let ek_lower = hensley_dim(k).unwrap();
            assert!(
                est.value > ek_lower && est.value < 1.0,
                "c={c}: value {} outside ({ek_lower}, 1)",
                est.value
            );
        }
        assert!(
            est.value <= prev + 1e-12,
            "value not nonincreasing at c={c}: {} > {prev}",
            est.value
        );
        prev = est.value;
        println!(
            "ACCEPTANCE 7 covering c={c}: value {:.6}, survivors {:?}, worst kill ratio {:.6}",
            est.value,
            report.levels.iter().map(|l| l.survivors).collect::<Vec<_>>(),
            report.worst_kill_ratio
        );
    }
    println!("ACCEPTANCE 7 covering soundness: complete ({:?})", started.elapsed());
    assert!(started.elapsed().as_secs_f64() < 900.0, "runtime budget");
}

#[test]
fn criterion_8_formula_evaluators() {
    let started = Instant::now();
    assert_eq!(p_exponent(3, 1), 6.0);
    assert_eq!(p_exponent(1, 3), 18.0);
    assert_eq!(p_exponent(2, 2), 612.0);
    assert_eq!(transference_exponent(2, 3), rat(1, 4));
    let lb = winning_dim_lower_bound(1, 0.01).unwrap();
    assert!((lb - 0.9911356).abs() < 1e-6, "lower bound {lb}");
    for d in [1u32, 2] {
        let beta = 1e-6;
        let md = child_loss_constant(d);
        let scaled = codim_rate_bound(d, beta).unwrap() * (1.0 / beta).ln() / beta;
        assert!(
            (scaled - md).abs() / md < 0.05,
            "d={d}: {scaled} vs loss constant {md}"
        );
    }
    println!(
        "ACCEPTANCE 8 formula evaluators: exact and tolerance checks pass ({:?})",
        started.elapsed()
    );
    assert!(started.elapsed().as_secs_f64() < 1.0, "runtime budget");
}

#[test]
fn criterion_9_run_record_determinism() {
    let started = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let runs: Vec<Vec<&str>> = vec![
        vec!["approx", "--entries", "phi", "--bound", "2000", "--c", "0.38"],
        vec!["orbit", "--entries", "sqrt2", "--t-max", "4", "--dt", "0.01"],
        vec!["dani", "--entries", "phi", "--c", "0.37", "--t-max", "5", "--dt", "0.005"],
        vec!["game", "--m", "2", "--beta", "1/10", "--rounds", "10", "--seed", "9"],
        vec!["cantor", "--d", "1", "--beta", "1/50", "--depth", "2"],
        vec!["boxdim", "--set", "ek", "--k", "3", "--max-depth", "9"],
        vec!["cover", "--entries", "phi", "--c", "0.05", "--depth", "2"],
        vec!["bounds", "--m", "1", "--n", "2", "--c", "0.03", "--beta", "0.01", "--d", "2"],
    ];
    for (i, args) in runs.iter().enumerate() {
        let cache = dir.path().join(format!("run{i}"));
        let mut full = args.clone();
        full.extend(["--cache", cache.to_str().unwrap()]);
        let out = std::process::Command::new(env!("CARGO_BIN_EXE_badform"))
            .args(&full)
            .env_remove("BADFORM_CACHE")
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        let run_dir = std::fs::read_dir(&cache)
            .unwrap()
            .next()
            .unwrap()
            .unwrap()
            .path();
        let replay = std::process::Command::new(env!("CARGO_BIN_EXE_badform"))
            .args(["replay", run_dir.join("record.json").to_str().unwrap()])
            .output()
            .unwrap();
        assert_eq!(
            replay.status.code(),
            Some(0),
            "replay of {args:?}: {}",
            String::from_utf8_lossy(&replay.stderr)
        );
    }
    println!(
        "ACCEPTANCE 9 determinism: {} commands replayed byte-identically ({:?})",
        runs.len(),
        started.elapsed()
    );
}
