//! Cantor-type subdivision driven by the game: each node's hypercube is
//! subdivided on an exact grid, Alice's strategy is queried along the node's
//! ancestor play, and the subcubes too close to her hyperplane are discarded.
//! The surviving counts realize the dimension lower bound.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::json;

use super::{AliceStrategy, Ball, GameState, Hyperplane};
use crate::arith::Surd;
use crate::{Error, Result};

/// One hypercube of the construction. `candidates`/`kept` are filled on nodes
/// that were subdivided; leaves and unexpanded nodes carry `None`.
#[derive(Debug, Clone)]
pub struct CantorNode {
    pub center: Vec<Surd>,
    /// Index of the parent in the previous level's node list.
    pub parent: usize,
    pub hyperplane: Option<Hyperplane>,
    pub candidates: Option<u64>,
    pub kept: Option<u64>,
    pub expanded: bool,
}

#[derive(Debug, Clone)]
pub struct CantorLevel {
    /// Side length of every hypercube at this level.
    pub side: Surd,
    /// Radius of the superscribing balls (the game balls of this level).
    pub ball_radius: BigRational,
    pub nodes: Vec<CantorNode>,
    /// True when the stored node list was truncated by the storage cap.
    pub truncated: bool,
}

#[derive(Debug, Clone)]
pub struct CantorTree {
    pub dim: usize,
    pub beta: BigRational,
    pub rho0: BigRational,
    pub depth: usize,
    pub levels: Vec<CantorLevel>,
}

/// Construction knobs. `expand_limit` caps how many kept children of each node
/// are recursively subdivided (`None` = all of them: the full tree). Counts
/// are always computed over the full candidate grid of every subdivided node;
/// the limit only prunes recursion, which is what makes depth-3 audits of the
/// two-dimensional construction affordable.
#[derive(Debug, Clone)]
pub struct CantorBuildOptions {
    pub expand_limit: Option<usize>,
    pub store_cap: usize,
}

impl Default for CantorBuildOptions {
    fn default() -> Self {
        CantorBuildOptions {
            expand_limit: None,
            store_cap: 400_000,
        }
    }
}

/// Builds the subdivision tree of `depth` levels below the hypercube inscribed
/// in `initial`, querying `alice` once per subdivided node along its ancestor
/// play.
pub fn cantor_build(
    alice: &mut dyn AliceStrategy,
    beta: &BigRational,
    initial: &Ball,
    depth: usize,
    options: &CantorBuildOptions,
) -> Result<CantorTree> {
    if beta <= &BigRational::zero() || beta >= &BigRational::new(BigInt::one(), BigInt::from(3)) {
        return Err(Error::DegenerateInput("need 0 < beta < 1/3".into()));
    }
    let d = initial.dim();
    let rho0 = initial.radius.to_rational().ok_or_else(|| {
        Error::DegenerateInput("subdivision needs a rational initial radius".into())
    })?;
    // per-axis child count: floor(1/beta - 1)
    let per_axis_big = ((BigRational::one() - beta) / beta).floor().to_integer();
    let per_axis = per_axis_big
        .to_u64()
        .filter(|&x| x >= 1)
        .ok_or_else(|| Error::DegenerateInput("beta too close to 1/3 or 0".into()))?;
    let candidates_per_node = (per_axis as u128).pow(d as u32);
    if candidates_per_node > 20_000_000 {
        return Err(Error::DegenerateInput(format!(
            "{candidates_per_node} candidate children per node is beyond the subdivision budget"
        )));
    }
    // side of the inscribed hypercube: 2 rho / sqrt(d) = 2 rho sqrt(d) / d
    let inv_sqrt_d = Surd::sqrt_of(d as u64)
        .mul_rational(&BigRational::new(BigInt::one(), BigInt::from(d as i64)));
    let side0 = Surd::from_rational(&rho0 + &rho0).mul(&inv_sqrt_d)?;

    let mut levels = vec![CantorLevel {
        side: side0,
        ball_radius: rho0.clone(),
        nodes: vec![CantorNode {
            center: initial.center.clone(),
            parent: 0,
            hyperplane: None,
            candidates: None,
            kept: None,
            expanded: true,
        }],
        truncated: false,
    }];

    for level_idx in 0..depth {
        let child_radius = &levels[level_idx].ball_radius * beta;
        let child_side = levels[level_idx]
            .side
            .mul(&Surd::from_rational(beta.clone()))?;
        let threshold = Surd::from_rational(&child_radius + &child_radius);
        let mut next_nodes: Vec<CantorNode> = Vec::new();
        let mut truncated = false;

        let parent_count = levels[level_idx].nodes.len();
        for parent_idx in 0..parent_count {
            if !levels[level_idx].nodes[parent_idx].expanded {
                continue;
            }
            // Alice's hyperplane for this node's ancestor play.
            let state = ancestor_state(&levels, level_idx, parent_idx, beta, &rho0)?;
            let hp = alice.choose(&state)?;
            let kept_children = keep_children(
                &levels[level_idx].nodes[parent_idx].center,
                &levels[level_idx].side,
                &child_side,
                per_axis,
                &hp,
                &threshold,
                d,
            )?;
            {
                let parent = &mut levels[level_idx].nodes[parent_idx];
                parent.hyperplane = Some(hp);
                parent.candidates = Some(candidates_per_node as u64);
                parent.kept = Some(kept_children.len() as u64);
            }
            // choose which children to expand next: an evenly strided,
            // deterministic sample of the kept list
            let expand_set: Vec<usize> = match options.expand_limit {
                None => (0..kept_children.len()).collect(),
                Some(limit) if level_idx + 1 == depth => {
                    // last level: nothing will be expanded anyway
                    (0..kept_children.len().min(limit)).collect()
                }
                Some(limit) => {
                    let k = kept_children.len().min(limit);
                    (0..k)
                        .map(|i| i * kept_children.len() / k.max(1))
                        .collect()
                }
            };
            for (child_idx, center) in kept_children.into_iter().enumerate() {
                let expand = options.expand_limit.is_none() || expand_set.contains(&child_idx);
                if !expand && next_nodes.len() >= options.store_cap {
                    truncated = true;
                    continue;
                }
                next_nodes.push(CantorNode {
                    center,
                    parent: parent_idx,
                    hyperplane: None,
                    candidates: None,
                    kept: None,
                    expanded: expand,
                });
            }
        }
        levels.push(CantorLevel {
            side: child_side,
            ball_radius: child_radius,
            nodes: next_nodes,
            truncated,
        });
    }

    Ok(CantorTree {
        dim: d,
        beta: beta.clone(),
        rho0,
        depth,
        levels,
    })
}

/// Reconstructs the game transcript along a node's ancestor chain: the balls
/// superscribe the ancestor cubes and the hyperplanes are the ones chosen at
/// each subdivided ancestor.
fn ancestor_state(
    levels: &[CantorLevel],
    level_idx: usize,
    node_idx: usize,
    beta: &BigRational,
    rho0: &BigRational,
) -> Result<GameState> {
    let mut chain = Vec::with_capacity(level_idx + 1);
    let mut idx = node_idx;
    for l in (0..=level_idx).rev() {
        chain.push((l, idx));
        idx = levels[l].nodes[idx].parent;
    }
    chain.reverse();
    let (root_level, root_idx) = chain[0];
    debug_assert_eq!(root_level, 0);
    let mut state = GameState::new(
        beta.clone(),
        Ball::new(
            levels[0].nodes[root_idx].center.clone(),
            Surd::from_rational(rho0.clone()),
        )?,
    )?;
    for window in chain.windows(2) {
        let (pl, pi) = window[0];
        let (cl, ci) = window[1];
        let hp = levels[pl].nodes[pi]
            .hyperplane
            .clone()
            .expect("expanded ancestor has a hyperplane");
        state.hyperplanes.push(hp);
        state.balls.push(Ball::new(
            levels[cl].nodes[ci].center.clone(),
            Surd::from_rational(levels[cl].ball_radius.clone()),
        )?);
    }
    Ok(state)
}

/// Grid-subdivides one cube and keeps the children at distance at least
/// `threshold` from the hyperplane, exactly.
fn keep_children(
    center: &[Surd],
    side: &Surd,
    child_side: &Surd,
    per_axis: u64,
    hp: &Hyperplane,
    threshold: &Surd,
    d: usize,
) -> Result<Vec<Vec<Surd>>> {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let corner: Result<Vec<Surd>> = center
        .iter()
        .map(|c| c.sub(&side.mul_rational(&half)))
        .collect();
    let corner = corner?;
    // support of the child cube in the normal direction: (s'/2) * |n|_1
    let mut n1 = Surd::zero();
    for x in &hp.normal {
        n1 = n1.add(&x.abs())?;
    }
    let support = child_side.mul_rational(&half).mul(&n1)?;
    let n2 = super::exact::dot(&hp.normal, &hp.normal)?;
    let rhs = threshold.square().mul(&n2)?;

    let mut kept = Vec::new();
    let mut idx = vec![0u64; d];
    loop {
        // child center = corner + (idx + 1/2) * child_side
        let cc: Result<Vec<Surd>> = corner
            .iter()
            .zip(&idx)
            .map(|(c, &i)| {
                let off = BigRational::new(
                    BigInt::from(2 * i as i64 + 1),
                    BigInt::from(2),
                );
                c.add(&child_side.mul_rational(&off))
            })
            .collect();
        let cc = cc?;
        // dist(cube, H) >= threshold  <=>  |off| - support >= 0 and
        // (|off| - support)^2 >= threshold^2 |n|^2
        let off = hp.offset(&cc)?.abs();
        let lhs = off.sub(&support)?;
        let keep = lhs.sign() >= 0 && lhs.square().cmp_exact(&rhs)? != std::cmp::Ordering::Less;
        if keep {
            kept.push(cc);
        }
        // advance the multi-index
        let mut k = 0;
        loop {
            idx[k] += 1;
            if idx[k] < per_axis {
                break;
            }
            idx[k] = 0;
            k += 1;
            if k == d {
                return Ok(kept);
            }
        }
    }
}

impl CantorTree {
    /// Smallest kept-child count over all subdivided nodes.
    pub fn min_kept(&self) -> Option<u64> {
        self.levels
            .iter()
            .flat_map(|l| l.nodes.iter().filter_map(|n| n.kept))
            .min()
    }

    /// Counting guarantees: `(weak, sharp)` lower bounds for every node's
    /// kept-child count, `beta^{-d} - M_d beta^{-d+1}` and
    /// `(beta^{-1}-1)^d - (2 sqrt d + 1)(sqrt d beta^{-1} + 1)^{d-1}`.
    pub fn kept_bounds(&self) -> (f64, f64) {
        let d = self.dim as i32;
        let beta: f64 = self.beta.to_f64().unwrap();
        let md = super::child_loss_constant(self.dim as u32);
        let weak = beta.powi(-d) - md * beta.powi(-d + 1);
        let sq = (self.dim as f64).sqrt();
        let sharp =
            (1.0 / beta - 1.0).powi(d) - (2.0 * sq + 1.0) * (sq / beta + 1.0).powi(d - 1);
        (weak, sharp)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let (weak, sharp) = self.kept_bounds();
        json!({
            "schema": "cantor-tree/1",
            "d": self.dim,
            "beta": self.beta.to_string()	,
            "rho0": self.rho0.to_string(),
            "depth": self.depth,
            "kept_bound_weak": weak,
            "kept_bound_sharp": sharp,
            "min_kept": self.min_kept(),
            "levels": self.levels.iter().map(|l| json!({
                "side": l.side.to_f64(),
                "ball_radius": num_traits::ToPrimitive::to_f64(&l.ball_radius).unwrap_or(f64::NAN),
                "stored_nodes": l.nodes.len(),
                "truncated": l.truncated,
                "kept_counts_min": l.nodes.iter().filter_map(|n| n.kept).min(),
                "kept_counts_max": l.nodes.iter().filter_map(|n| n.kept).max(),
                "centers": l.nodes.iter().take(4096).map(|n| {
                    n.center.iter().map(|x| x.to_f64()).collect::<Vec<_>>()
                }).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{legal_move, FallbackAlice, SimplexAlice};

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn fallback_alice_keeps_every_candidate() {
        let initial = Ball::from_rational(&[rat(1, 2)], rat(1, 1)).unwrap();
        let mut alice = FallbackAlice;
        let tree = cantor_build(
            &mut alice,
            &rat(1, 10),
            &initial,
            2,
            &CantorBuildOptions::default(),
        )
        .unwrap();
        // per-axis count 9, everything survives a far-away hyperplane
        for level in &tree.levels[..2] {
            for node in &level.nodes {
                if node.expanded {
                    assert_eq!(node.candidates, Some(9));
                    assert_eq!(node.kept, Some(9));
                }
            }
        }
        assert_eq!(tree.levels[1].nodes.len(), 9);
        assert_eq!(tree.levels[2].nodes.len(), 81);
    }

    #[test]
    fn children_nest_and_tile_exactly() {
        let initial = Ball::from_rational(&[rat(1, 3), rat(2, 5)], rat(1, 2)).unwrap();
        let mut alice = FallbackAlice;
        let tree = cantor_build(
            &mut alice,
            &rat(1, 5),
            &initial,
            1,
            &CantorBuildOptions::default(),
        )
        .unwrap();
        let parent = &tree.levels[0];
        let children = &tree.levels[1];
        let half = rat(1, 2);
        for node in &children.nodes {
            // child cube inside parent cube, coordinatewise
            for (cc, pc) in node.center.iter().zip(&parent.nodes[0].center) {
                let gap = cc.sub(pc).unwrap().abs();
                let max_gap = parent
                    .side
                    .sub(&children.side)
                    .unwrap()
                    .mul_rational(&half);
                assert!(gap.cmp_exact(&max_gap).unwrap() != std::cmp::Ordering::Greater);
            }
        }
        // children are disjoint: centers differ by at least the child side
        for (i, a) in children.nodes.iter().enumerate() {
            for b in &children.nodes[i + 1..] {
                let mut separated = false;
                for (x, y) in a.center.iter().zip(&b.center) {
                    let gap = x.sub(y).unwrap().abs();
                    if gap.cmp_exact(&children.side).unwrap() != std::cmp::Ordering::Less {
                        separated = true;
                    }
                }
                assert!(separated);
            }
        }
    }

    #[test]
    fn kept_children_superscribing_balls_are_legal_moves() {
        // Property (4): each kept child's superscribing ball is a legal Bob
        // answer to Alice's hyperplane in the reconstructed play.
        let initial = Ball::from_rational(&[rat(1, 2)], rat(1, 1)).unwrap();
        let beta = rat(1, 20);
        let mut alice = SimplexAlice;
        let tree = cantor_build(
            &mut alice,
            &beta,
            &initial,
            2,
            &CantorBuildOptions::default(),
        )
        .unwrap();
        for (level_idx, level) in tree.levels.iter().enumerate().skip(1) {
            for node in level.nodes.iter().take(50) {
                let mut state = ancestor_state(
                    &tree.levels,
                    level_idx - 1,
                    node.parent,
                    &beta,
                    &tree.rho0,
                )
                .unwrap();
                let hp = tree.levels[level_idx - 1].nodes[node.parent]
                    .hyperplane
                    .clone()
                    .unwrap();
                state.hyperplanes.push(hp);
                let ball = Ball::new(
                    node.center.clone(),
                    Surd::from_rational(level.ball_radius.clone()),
                )
                .unwrap();
                assert!(
                    legal_move(&state, &ball).unwrap().is_legal(),
                    "level {level_idx} node is an illegal move"
                );
            }
        }
    }

    #[test]
    fn kept_counts_meet_the_guarantee_in_1d() {
        let initial = Ball::from_rational(&[rat(1, 2)], rat(1, 1)).unwrap();
        let beta = rat(1, 50);
        let mut alice = SimplexAlice;
        let tree = cantor_build(
            &mut alice,
            &beta,
            &initial,
            2,
            &CantorBuildOptions::default(),
        )
        .unwrap();
        let (weak, sharp) = tree.kept_bounds();
        assert_eq!(weak, 50.0 - 4.0); // beta^-1 - M_1
        let min = tree.min_kept().unwrap();
        assert!(min as f64 >= weak.ceil());
        assert!(min as f64 >= sharp.ceil());
        // candidates per node: 49
        assert!(tree.levels[0].nodes[0].candidates == Some(49));
    }

    #[test]
    fn expansion_limit_prunes_recursion_but_not_counts() {
        let initial = Ball::from_rational(&[rat(1, 2), rat(1, 3)], rat(1, 1)).unwrap();
        let beta = rat(1, 10);
        let mut alice = FallbackAlice;
        let opts = CantorBuildOptions {
            expand_limit: Some(3),
            store_cap: 100_000,
        };
        let tree = cantor_build(&mut alice, &beta, &initial, 2, &opts).unwrap();
        // all 81 candidates counted at the root, only 3 children expanded
        assert_eq!(tree.levels[0].nodes[0].kept, Some(81));
        let expanded: usize = tree.levels[1].nodes.iter().filter(|n| n.expanded).count();
        assert_eq!(expanded, 3);
        // level 2 holds the kept children of those 3 nodes
        assert_eq!(tree.levels[2].nodes.len(), 3 * 81);
    }
}
