//! The hyperplane absolute game: rules engine, strategies, the Cantor-tree
//! subdivision that realizes the dimension lower bound, and the closed-form
//! bound evaluators attached to it.
//!
//! Geometry is Euclidean and exact: coordinates live in a real quadratic field
//! ([`Surd`]), every legality predicate compares squared quantities, and the
//! simplex strategy enumerates rationals with exact lattice arithmetic.

mod bob;
mod cantor;
mod exact;
mod simplex;

pub use bob::{SeededBob, ShrinkAwayBob, SteerBob};
pub use cantor::{cantor_build, CantorBuildOptions, CantorLevel, CantorNode, CantorTree};
pub use exact::{rationals_in_ball, RationalPoint};
pub use simplex::{simplex_denominator_bound, SimplexAlice};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::json;

use crate::arith::Surd;
use crate::{Error, Result};

/// Closed Euclidean ball with exact center and radius.
#[derive(Debug, Clone)]
pub struct Ball {
    pub center: Vec<Surd>,
    pub radius: Surd,
}

impl Ball {
    pub fn new(center: Vec<Surd>, radius: Surd) -> Result<Self> {
        if radius.sign() <= 0 {
            return Err(Error::DegenerateInput(
                "ball radius must be positive".into(),
            ));
        }
        Ok(Ball { center, radius })
    }

    pub fn from_rational(center: &[BigRational], radius: BigRational) -> Result<Self> {
        Ball::new(
            center.iter().cloned().map(Surd::from_rational).collect(),
            Surd::from_rational(radius),
        )
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }
}

/// Affine hyperplane through `point` with (non-unit, primitive integer)
/// `normal` direction. The stored direction keeps every distance predicate
/// exact; [`Hyperplane::unit_normal_f64`] provides the normalized view.
#[derive(Debug, Clone)]
pub struct Hyperplane {
    pub point: Vec<Surd>,
    pub normal: Vec<Surd>,
}

impl Hyperplane {
    pub fn new(point: Vec<Surd>, normal: Vec<Surd>) -> Result<Self> {
        if normal.iter().all(|x| x.is_zero()) {
            return Err(Error::DegenerateInput("hyperplane normal is zero".into()));
        }
        Ok(Hyperplane { point, normal })
    }

    pub fn unit_normal_f64(&self) -> Vec<f64> {
        let raw: Vec<f64> = self.normal.iter().map(|x| x.to_f64()).collect();
        let len = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
        raw.into_iter().map(|x| x / len).collect()
    }

    /// Signed inner product `<normal, x - point>` (not normalized).
    pub fn offset(&self, x: &[Surd]) -> Result<Surd> {
        let diff: Result<Vec<Surd>> =
            x.iter().zip(&self.point).map(|(a, b)| a.sub(b)).collect();
        exact::dot(&self.normal, &diff?)
    }

    /// Exact predicate: `dist(x, H) > bound`, i.e. the point stays strictly
    /// outside the closed `bound`-neighborhood of the hyperplane.
    pub fn point_clears(&self, x: &[Surd], bound: &Surd) -> Result<bool> {
        if bound.sign() < 0 {
            return Ok(true);
        }
        let off = self.offset(x)?;
        let n2 = exact::dot(&self.normal, &self.normal)?;
        let lhs = off.square();
        let rhs = bound.square().mul(&n2)?;
        Ok(lhs.cmp_exact(&rhs)? == std::cmp::Ordering::Greater)
    }
}

/// Whose move is pending.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Turn {
    Alice,
    Bob,
}

/// Full transcript of a play: `balls[0]` is the opening ball, `hyperplanes[i]`
/// answers `balls[i]`, and `balls[i+1]` answers `hyperplanes[i]`.
#[derive(Debug, Clone)]
pub struct GameState {
    pub beta: BigRational,
    pub balls: Vec<Ball>,
    pub hyperplanes: Vec<Hyperplane>,
}

impl GameState {
    pub fn new(beta: BigRational, initial: Ball) -> Result<Self> {
        if beta <= BigRational::zero() || beta >= BigRational::new(BigInt::one(), BigInt::from(3))
        {
            return Err(Error::DegenerateInput(
                "game parameter must satisfy 0 < beta < 1/3".into(),
            ));
        }
        Ok(GameState {
            beta,
            balls: vec![initial],
            hyperplanes: Vec::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.balls[0].dim()
    }

    pub fn whose_turn(&self) -> Turn {
        if self.hyperplanes.len() < self.balls.len() {
            Turn::Alice
        } else {
            Turn::Bob
        }
    }

    pub fn last_ball(&self) -> &Ball {
        self.balls.last().expect("at least the opening ball")
    }

    pub fn rounds_completed(&self) -> usize {
        self.balls.len() - 1
    }

    /// JSON document for replay and audit: exact values as strings, floats
    /// alongside for convenience.
    pub fn to_json(&self) -> serde_json::Value {
        let ball_json = |b: &Ball| {
            json!({
                "center": b.center.iter().map(|x| x.to_f64()).collect::<Vec<_>>(),
                "center_exact": b.center.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "radius": b.radius.to_f64(),
                "radius_exact": b.radius.to_string(),
            })
        };
        let hp_json = |h: &Hyperplane| {
            json!({
                "point": h.point.iter().map(|x| x.to_f64()).collect::<Vec<_>>(),
                "normal_unit": h.unit_normal_f64(),
                "normal_exact": h.normal.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            })
        };
        json!({
            "schema": "game-transcript/1",
            "beta": self.beta.to_string(),
            "d": self.dim(),
            "rounds": self.rounds_completed(),
            "balls": self.balls.iter().map(ball_json).collect::<Vec<_>>(),
            "hyperplanes": self.hyperplanes.iter().map(hp_json).collect::<Vec<_>>(),
        })
    }
}

/// Why a candidate ball is not a legal answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IllegalMove {
    NotBobsTurn,
    WrongDimension,
    RadiusBelowBeta,
    NotContained,
    MeetsNeighborhood,
}

/// Verdict of the rules engine for a candidate ball.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MoveVerdict {
    Legal,
    Illegal(IllegalMove),
}

impl MoveVerdict {
    pub fn is_legal(&self) -> bool {
        matches!(self, MoveVerdict::Legal)
    }
}

/// Checks the game rules for Bob's candidate exactly: radius at least `beta`
/// times the previous radius, containment in the previous ball, and
/// disjointness from the closed `beta * rho`-neighborhood of the pending
/// hyperplane.
pub fn legal_move(state: &GameState, candidate: &Ball) -> Result<MoveVerdict> {
    if state.whose_turn() != Turn::Bob {
        return Ok(MoveVerdict::Illegal(IllegalMove::NotBobsTurn));
    }
    if candidate.dim() != state.dim() {
        return Ok(MoveVerdict::Illegal(IllegalMove::WrongDimension));
    }
    let prev = state.last_ball();
    let hp = state.hyperplanes.last().expect("pending hyperplane");
    let beta = Surd::from_rational(state.beta.clone());
    let min_radius = beta.mul(&prev.radius)?;
    if candidate.radius.cmp_exact(&min_radius)? == std::cmp::Ordering::Less {
        return Ok(MoveVerdict::Illegal(IllegalMove::RadiusBelowBeta));
    }
    // containment: r' <= r and |c' - c|^2 <= (r - r')^2
    if candidate.radius.cmp_exact(&prev.radius)? == std::cmp::Ordering::Greater {
        return Ok(MoveVerdict::Illegal(IllegalMove::NotContained));
    }
    let mut dist2 = Surd::zero();
    for (a, b) in candidate.center.iter().zip(&prev.center) {
        dist2 = dist2.add(&a.sub(b)?.square())?;
    }
    let slack = prev.radius.sub(&candidate.radius)?;
    if dist2.cmp_exact(&slack.square())? == std::cmp::Ordering::Greater {
        return Ok(MoveVerdict::Illegal(IllegalMove::NotContained));
    }
    // neighborhood: the ball must stay strictly clear of the closed slab of
    // half-width beta * rho(prev) around the hyperplane
    let clearance = candidate.radius.add(&min_radius)?;
    if !hp.point_clears(&candidate.center, &clearance)? {
        return Ok(MoveVerdict::Illegal(IllegalMove::MeetsNeighborhood));
    }
    Ok(MoveVerdict::Legal)
}

/// Strategy interfaces. Strategies may keep internal state (RNG streams).
pub trait AliceStrategy {
    fn choose(&mut self, state: &GameState) -> Result<Hyperplane>;
    fn name(&self) -> &'static str;
}

pub trait BobStrategy {
    fn choose(&mut self, state: &GameState) -> Result<Ball>;
    fn name(&self) -> &'static str;
}

/// Deterministic far-away hyperplane (through `center + 3 rho e_1` with
/// normal `e_1`) used when a strategy has nothing to remove.
pub fn fallback_hyperplane(ball: &Ball) -> Result<Hyperplane> {
    let mut point = ball.center.clone();
    let three = Surd::from_bigint(BigInt::from(3));
    point[0] = point[0].add(&three.mul(&ball.radius)?)?;
    let mut normal = vec![Surd::zero(); ball.dim()];
    normal[0] = Surd::one();
    Hyperplane::new(point, normal)
}

/// Alice strategy that always plays the far-away hyperplane: deletes nothing.
pub struct FallbackAlice;

impl AliceStrategy for FallbackAlice {
    fn choose(&mut self, state: &GameState) -> Result<Hyperplane> {
        fallback_hyperplane(state.last_ball())
    }

    fn name(&self) -> &'static str {
        "fallback"
    }
}

/// Plays `rounds` full rounds (Alice hyperplane, Bob ball), validating every
/// Bob move through [`legal_move`].
pub fn play(
    alice: &mut dyn AliceStrategy,
    bob: &mut dyn BobStrategy,
    beta: BigRational,
    initial: Ball,
    rounds: usize,
) -> Result<GameState> {
    let mut state = GameState::new(beta, initial)?;
    for round in 0..rounds {
        let hp = alice.choose(&state)?;
        state.hyperplanes.push(hp);
        let ball = bob.choose(&state)?;
        match legal_move(&state, &ball)? {
            MoveVerdict::Legal => state.balls.push(ball),
            MoveVerdict::Illegal(why) => {
                return Err(Error::NoLegalMove(format!(
                    "{} produced an illegal ball in round {round}: {why:?}",
                    bob.name()
                )))
            }
        }
    }
    Ok(state)
}

/// Re-validates a finished transcript move by move (independent checker used
/// by tests and the audit path).
pub fn validate_transcript(state: &GameState) -> Result<()> {
    let mut replay = GameState::new(state.beta.clone(), state.balls[0].clone())?;
    for (i, hp) in state.hyperplanes.iter().enumerate() {
        replay.hyperplanes.push(hp.clone());
        if let Some(ball) = state.balls.get(i + 1) {
            match legal_move(&replay, ball)? {
                MoveVerdict::Legal => replay.balls.push(ball.clone()),
                MoveVerdict::Illegal(why) => {
                    return Err(Error::DegenerateInput(format!(
                        "transcript invalid at round {i}: {why:?}"
                    )))
                }
            }
        }
    }
    Ok(())
}

/// The explicit packing constant `d * d! + (2 sqrt d)^{d-1} (2 sqrt d + 1)`
/// controlling how many subdivision cubes one hyperplane neighborhood can
/// destroy.
pub fn child_loss_constant(d: u32) -> f64 {
    assert!(d >= 1);
    let df = d as f64;
    let fact: f64 = (1..=d as u64).product::<u64>() as f64;
    let s = 2.0 * df.sqrt();
    df * fact + s.powi(d as i32 - 1) * (s + 1.0)
}

/// Dimension lower bound `d - log(1 - M_d beta) / log beta` for sets the
/// hyperplane game wins at parameter `beta`.
pub fn winning_dim_lower_bound(d: u32, beta: f64) -> Result<f64> {
    let md = child_loss_constant(d);
    if !(beta > 0.0) || beta >= 1.0 / md || beta >= 1.0 / 3.0 {
        return Err(Error::DegenerateInput(format!(
            "need 0 < beta < min(1/3, 1/M_d) = {:.6}",
            (1.0 / md).min(1.0 / 3.0)
        )));
    }
    Ok(d as f64 - (1.0 - md * beta).ln() / beta.ln())
}

/// Proved decay bound `log(1 - M_d beta) / log beta` for the codimension of
/// winning sets; scaled by `log(1/beta) / beta` it tends to `M_d`.
pub fn codim_rate_bound(d: u32, beta: f64) -> Result<f64> {
    let md = child_loss_constant(d);
    if !(beta > 0.0) || beta >= 1.0 / md || beta >= 1.0 / 3.0 {
        return Err(Error::DegenerateInput(format!(
            "need 0 < beta < min(1/3, 1/M_d) = {:.6}",
            (1.0 / md).min(1.0 / 3.0)
        )));
    }
    Ok((1.0 - md * beta).ln() / beta.ln())
}

/// Does `(c, beta)` satisfy the strategy's admissibility condition
/// `c^{1/m} <= beta^2 / (4 m!)`?
pub fn strategy_params_admissible(c: f64, beta: f64, m: u32) -> bool {
    assert!(c > 0.0 && beta > 0.0 && m >= 1);
    let fact: f64 = (1..=m as u64).product::<u64>() as f64;
    c.powf(1.0 / m as f64) <= beta * beta / (4.0 * fact)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Pow;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn ball1(c: BigRational, r: BigRational) -> Ball {
        Ball::from_rational(&[c], r).unwrap()
    }

    #[test]
    fn legality_basics() {
        let beta = rat(1, 10);
        let initial = ball1(rat(1, 2), rat(1, 1));
        let mut state = GameState::new(beta, initial).unwrap();
        assert_eq!(state.whose_turn(), Turn::Alice);
        state
            .hyperplanes
            .push(fallback_hyperplane(state.last_ball()).unwrap());
        assert_eq!(state.whose_turn(), Turn::Bob);

        // shrink in place by beta: legal (hyperplane far away)
        let good = ball1(rat(1, 2), rat(1, 10));
        assert!(legal_move(&state, &good).unwrap().is_legal());
        // radius too small
        let tiny = ball1(rat(1, 2), rat(1, 21));
        assert_eq!(
            legal_move(&state, &tiny).unwrap(),
            MoveVerdict::Illegal(IllegalMove::RadiusBelowBeta)
        );
        // not contained
        let outside = ball1(rat(5, 2), rat(1, 10));
        assert_eq!(
            legal_move(&state, &outside).unwrap(),
            MoveVerdict::Illegal(IllegalMove::NotContained)
        );
        // centered on the hyperplane
        let mut on_plane_state = state.clone();
        on_plane_state.hyperplanes[0] =
            Hyperplane::new(vec![Surd::from_rational(rat(1, 2))], vec![Surd::one()]).unwrap();
        assert_eq!(
            legal_move(&on_plane_state, &good).unwrap(),
            MoveVerdict::Illegal(IllegalMove::MeetsNeighborhood)
        );
    }

    #[test]
    fn boundary_touching_is_handled_exactly() {
        let beta = rat(1, 4);
        let initial = ball1(rat(0, 1), rat(1, 1));
        let mut state = GameState::new(beta, initial).unwrap();
        state.hyperplanes.push(
            Hyperplane::new(vec![Surd::from_rational(rat(1, 2))], vec![Surd::one()]).unwrap(),
        );
        // distance from center 0 to the plane is exactly 1/2 = r' + beta*rho:
        // touching the closed slab, hence illegal.
        let touching = ball1(rat(0, 1), rat(1, 4));
        assert_eq!(
            legal_move(&state, &touching).unwrap(),
            MoveVerdict::Illegal(IllegalMove::MeetsNeighborhood)
        );
        let clear = ball1(rat(-1, 100), rat(1, 4));
        assert!(legal_move(&state, &clear).unwrap().is_legal());
    }

    #[test]
    fn game_parameter_range_is_enforced() {
        let b = ball1(rat(0, 1), rat(1, 1));
        assert!(GameState::new(rat(1, 3), b.clone()).is_err());
        assert!(GameState::new(rat(0, 1), b.clone()).is_err());
        assert!(GameState::new(rat(1, 4), b).is_ok());
    }

    #[test]
    fn play_with_fallback_alice_completes() {
        let mut alice = FallbackAlice;
        let mut bob = ShrinkAwayBob;
        let state = play(
            &mut alice,
            &mut bob,
            rat(1, 5),
            ball1(rat(1, 3), rat(1, 1)),
            12,
        )
        .unwrap();
        assert_eq!(state.rounds_completed(), 12);
        validate_transcript(&state).unwrap();
        let last = state.last_ball();
        assert_eq!(last.radius.to_rational().unwrap(), rat(1, 5).pow(12i32));
    }

    #[test]
    fn loss_constant_values() {
        assert_eq!(child_loss_constant(1), 4.0);
        assert!((child_loss_constant(2) - (12.0 + 2.0 * 2f64.sqrt())).abs() < 1e-12);
        let mut prev = 0.0;
        for d in 1..=10 {
            let v = child_loss_constant(d);
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn dim_bound_values() {
        let v = winning_dim_lower_bound(1, 0.01).unwrap();
        assert!((v - 0.9911356).abs() < 1e-6);
        let v = winning_dim_lower_bound(2, 0.02).unwrap();
        assert!((v - 1.910077).abs() < 1e-5);
        let mut prev = 0.0;
        for k in 2..8 {
            let beta = 10f64.powi(-k);
            let v = winning_dim_lower_bound(1, beta).unwrap();
            assert!(v > prev);
            prev = v;
        }
        assert!(prev > 0.9999);
        assert!(winning_dim_lower_bound(1, 0.3).is_err());
    }

    #[test]
    fn codim_rate_values_and_limit() {
        let v = codim_rate_bound(1, 0.01).unwrap();
        assert!((v - 0.0088644).abs() < 1e-6);
        for d in 1..=2u32 {
            let md = child_loss_constant(d);
            let mut prev_gap = f64::INFINITY;
            for k in 2..=6 {
                let beta = 10f64.powi(-k);
                let v = codim_rate_bound(d, beta).unwrap();
                let scaled = v * (1.0 / beta).ln() / beta;
                let gap = (scaled - md).abs();
                assert!(gap < prev_gap);
                prev_gap = gap;
            }
            let beta = 1e-6;
            let scaled = codim_rate_bound(d, beta).unwrap() * (1.0 / beta).ln() / beta;
            assert!((scaled - md).abs() / md < 0.05);
        }
        assert!(codim_rate_bound(1, 0.26).is_err());
    }

    #[test]
    fn admissibility_examples() {
        assert!(strategy_params_admissible(0.0025, 0.1, 1)); // boundary
        assert!(!strategy_params_admissible(0.003, 0.1, 1));
        assert!(strategy_params_admissible(1e-12, 0.1, 1));
        assert!(strategy_params_admissible(1e-12, 0.05, 2));
    }
}
