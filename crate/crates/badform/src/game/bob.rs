//! Bob strategies: a deterministic shrink-and-dodge, a seeded random player,
//! and an adversarial player that steers toward a target point. All of them
//! produce exact (quadratic-field) balls and are validated by the rules
//! engine each round.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand_core::{RngCore, SeedableRng};

use super::{legal_move, Ball, BobStrategy, GameState};
use crate::arith::Surd;
use crate::{Error, Result};

fn shrunk_radius(state: &GameState) -> Result<Surd> {
    let prev = state.last_ball();
    Surd::from_rational(state.beta.clone()).mul(&prev.radius)
}

fn translated(center: &[Surd], dir: &[Surd], lambda: &Surd) -> Result<Vec<Surd>> {
    center
        .iter()
        .zip(dir)
        .map(|(c, d)| c.add(&lambda.mul(d)?))
        .collect()
}

/// Picks the minimal dyadic step along the pending hyperplane's normal that
/// clears the forbidden slab while staying inside the previous ball.
///
/// Feasibility for `beta < 1/3` is the game's basic geometric fact: moving a
/// distance `s` along the normal gains exactly `s` of hyperplane clearance,
/// the budget is `(1 - beta) rho` and the requirement is `2 beta rho`.
fn dodge(state: &GameState) -> Result<Ball> {
    let prev = state.last_ball();
    let hp = state.hyperplanes.last().expect("pending hyperplane");
    let r2 = shrunk_radius(state)?;
    let shrink = Ball::new(prev.center.clone(), r2.clone())?;
    if legal_move(state, &shrink)?.is_legal() {
        return Ok(shrink);
    }
    // Move away from the hyperplane along its normal, on the side the center
    // already leans toward (ties pick the positive side).
    let side = if hp.offset(&prev.center)?.sign() < 0 {
        -1
    } else {
        1
    };
    let dir: Vec<Surd> = hp
        .normal
        .iter()
        .map(|x| {
            if side < 0 {
                x.neg()
            } else {
                x.clone()
            }
        })
        .collect();
    // Rational upper bound for the admissible step: budget / max|dir_i|
    // (since the Euclidean length of dir is at least its sup norm).
    let budget = prev.radius.sub(&r2)?;
    let sup: Surd = dir
        .iter()
        .map(|x| x.abs())
        .reduce(|a, b| if a.cmp_exact(&b).unwrap() == std::cmp::Ordering::Less { b } else { a })
        .expect("nonzero normal");
    let cap = budget.div(&sup)?;
    // Walk a descending dyadic grid; the legal window has positive relative
    // width for beta < 1/3 so a modest grid always hits it.
    let steps = 512u32;
    for j in (1..=steps).rev() {
        let lambda = cap.mul_rational(&BigRational::new(BigInt::from(j), BigInt::from(steps)));
        let cand = Ball::new(translated(&prev.center, &dir, &lambda)?, r2.clone())?;
        if legal_move(state, &cand)?.is_legal() {
            return Ok(cand);
        }
    }
    Err(Error::NoLegalMove(
        "dodge failed to find a legal translation (is beta < 1/3?)".into(),
    ))
}

/// Shrinks in place, translating minimally away from the pending hyperplane
/// when the shrink alone is illegal.
pub struct ShrinkAwayBob;

impl BobStrategy for ShrinkAwayBob {
    fn choose(&mut self, state: &GameState) -> Result<Ball> {
        dodge(state)
    }

    fn name(&self) -> &'static str {
        "shrink-away"
    }
}

/// Seeded random Bob: tries dyadic random centers inside the allowed region,
/// falling back to the deterministic dodge if none of the attempts is legal.
pub struct SeededBob {
    rng: rand_chacha::ChaCha8Rng,
    attempts: u32,
}

impl SeededBob {
    pub fn new(seed: u64) -> Self {
        SeededBob {
            rng: rand_chacha::ChaCha8Rng::seed_from_u64(seed),
            attempts: 64,
        }
    }
}

impl BobStrategy for SeededBob {
    fn choose(&mut self, state: &GameState) -> Result<Ball> {
        let prev = state.last_ball();
        let r2 = shrunk_radius(state)?;
        let budget = prev.radius.sub(&r2)?;
        let d = state.dim();
        for _ in 0..self.attempts {
            // offset coordinates in [-1, 1] with 24 dyadic bits
            let mut center = Vec::with_capacity(d);
            for c in &prev.center {
                let raw = (self.rng.next_u32() >> 8) as i64 - (1 << 23);
                let u = BigRational::new(BigInt::from(raw), BigInt::from(1i64 << 23));
                // scale so the sup-norm offset stays within budget/sqrt(d):
                // |offset|_2 <= sqrt(d) * |offset|_sup <= budget
                let scale = budget.mul_rational(&u).mul_rational(&BigRational::new(
                    BigInt::one(),
                    BigInt::from(d as i64 + 1),
                ));
                center.push(c.add(&scale)?);
            }
            let cand = Ball::new(center, r2.clone())?;
            if legal_move(state, &cand)?.is_legal() {
                return Ok(cand);
            }
        }
        dodge(state)
    }

    fn name(&self) -> &'static str {
        "seeded-random"
    }
}

/// Adversarial Bob: moves as far toward a fixed target as the rules allow,
/// falling back to the dodge when even standing still is illegal.
pub struct SteerBob {
    pub target: Vec<Surd>,
}

impl SteerBob {
    pub fn toward_rational(target: &[BigRational]) -> Self {
        SteerBob {
            target: target.iter().cloned().map(Surd::from_rational).collect(),
        }
    }
}

impl BobStrategy for SteerBob {
    fn choose(&mut self, state: &GameState) -> Result<Ball> {
        let prev = state.last_ball();
        let r2 = shrunk_radius(state)?;
        let dir: Result<Vec<Surd>> = self
            .target
            .iter()
            .zip(&prev.center)
            .map(|(t, c)| t.sub(c))
            .collect();
        let dir = dir?;
        if dir.iter().all(|x| x.is_zero()) {
            return dodge(state);
        }
        let budget = prev.radius.sub(&r2)?;
        let sup: Surd = dir
            .iter()
            .map(|x| x.abs())
            .reduce(|a, b| {
                if a.cmp_exact(&b).unwrap() == std::cmp::Ordering::Less {
                    b
                } else {
                    a
                }
            })
            .expect("nonzero direction");
        // mu = 1 reaches the target if in range; cap by the movement budget
        let cap_by_budget = budget.div(&sup)?;
        let cap = if cap_by_budget.cmp_exact(&Surd::one())? == std::cmp::Ordering::Less {
            cap_by_budget
        } else {
            Surd::one()
        };
        let steps = 128u32;
        for j in (0..=steps).rev() {
            let mu = cap.mul_rational(&BigRational::new(BigInt::from(j), BigInt::from(steps)));
            let cand = Ball::new(translated(&prev.center, &dir, &mu)?, r2.clone())?;
            if legal_move(state, &cand)?.is_legal() {
                return Ok(cand);
            }
        }
        dodge(state)
    }

    fn name(&self) -> &'static str {
        "steer"
    }
}
