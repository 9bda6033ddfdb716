//! Greedy local improvement of bipartitions: one-vertex moves and
//! two-vertex interchanges, each applied best-first under the capacity
//! constraints. The same primitives drive a repair routine that walks an
//! infeasible split toward feasibility.
//!
//! A move of `v` changes the cut by `d(v) = w(v, own part) − w(v, other
//! part)`; a swap of `s` and `t` by `d(s) + d(t) + 2·w(s, t)`. The gain
//! array `d` is updated in `O(deg v)` per applied move.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::{
    add_assign, check_feasibility, cut_size, fits, overflow, sub_assign, CapacityBound, Side,
    WeightedGraph,
};

/// Improvements smaller than this are not considered improvements.
pub const IMPROVEMENT_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefineConfig {
    /// Strict-improvement threshold for accepting a move.
    pub eps: f64,
    /// Repair infeasible inputs instead of rejecting them.
    pub repair: bool,
    /// Recompute the cut from scratch after each applied step and compare
    /// with the incremental delta.
    pub verify: bool,
}

impl Default for RefineConfig {
    fn default() -> Self {
        Self {
            eps: IMPROVEMENT_EPS,
            repair: false,
            verify: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MoveKind {
    OneMove { vertex: usize, from: Side, to: Side },
    Swap { s: usize, t: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MovePlan {
    pub kind: MoveKind,
    pub delta_cut: f64,
    pub feasible_after: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefineOutcome {
    /// `true` = first part.
    pub in_first: Vec<bool>,
    pub cut_before: f64,
    pub cut_after: f64,
    pub moves: usize,
    pub swaps: usize,
    /// Cut-decreasing single moves rejected by capacity in the final scan.
    pub blocked: usize,
    pub repaired: bool,
    pub plans: Vec<MovePlan>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepairOutcome {
    pub in_first: Vec<bool>,
    pub success: bool,
    /// Remaining `Σ max(0, usage − U)` over both parts.
    pub violation: i64,
    pub moves: usize,
    pub swaps: usize,
}

fn side_of(first: bool) -> Side {
    if first {
        Side::First
    } else {
        Side::Second
    }
}

fn part(first: bool) -> usize {
    if first {
        0
    } else {
        1
    }
}

/// Working copy of a bipartition with gain array and per-part usage.
struct TwoWay<'a> {
    g: &'a WeightedGraph,
    locked: &'a [bool],
    limits: [&'a [i64]; 2],
    side: Vec<bool>,
    usage: [Vec<i64>; 2],
    delta: Vec<f64>,
    cut: f64,
    verify: bool,
}

impl<'a> TwoWay<'a> {
    fn new(
        g: &'a WeightedGraph,
        in_first: &[bool],
        u: &'a CapacityBound,
        locked: &'a [bool],
        verify: bool,
    ) -> Result<Self> {
        let n = g.n();
        for len in [in_first.len(), locked.len()] {
            if len != n {
                return Err(Error::Dimension {
                    expected: n,
                    got: len,
                });
            }
        }
        let y2: Vec<bool> = in_first.iter().map(|b| !b).collect();
        let feas = check_feasibility(in_first, &y2, g.vertex_weights(), u)?;
        let mut delta = vec![0.0; n];
        for (v, d) in delta.iter_mut().enumerate() {
            *d = g
                .neighbors(v)
                .map(|(w, wt)| if in_first[w] == in_first[v] { wt } else { -wt })
                .sum();
        }
        Ok(Self {
            g,
            locked,
            limits: [u.row(0), u.row(1)],
            side: in_first.to_vec(),
            usage: feas.usage,
            delta,
            cut: cut_size(g, in_first)?,
            verify,
        })
    }

    fn weight(&self, v: usize) -> &'a [i64] {
        self.g.vertex_weights().row(v)
    }

    fn fits_move(&self, v: usize) -> bool {
        let to = 1 - part(self.side[v]);
        self.usage[to]
            .iter()
            .zip(self.weight(v))
            .zip(self.limits[to])
            .all(|((u, w), l)| u + w <= *l)
    }

    fn fits_swap(&self, s: usize, t: usize) -> bool {
        let (a, b) = (part(self.side[s]), part(self.side[t]));
        let (ws, wt) = (self.weight(s), self.weight(t));
        (0..ws.len()).all(|k| {
            self.usage[a][k] - ws[k] + wt[k] <= self.limits[a][k]
                && self.usage[b][k] - wt[k] + ws[k] <= self.limits[b][k]
        })
    }

    fn violation(&self) -> i64 {
        overflow(&self.usage[0], self.limits[0]) + overflow(&self.usage[1], self.limits[1])
    }

    fn feasible(&self) -> bool {
        fits(&self.usage[0], self.limits[0]) && fits(&self.usage[1], self.limits[1])
    }

    fn apply_move(&mut self, v: usize) {
        let from = part(self.side[v]);
        let w = self.weight(v);
        sub_assign(&mut self.usage[from], w);
        add_assign(&mut self.usage[1 - from], w);
        self.cut += self.delta[v];
        let was = self.side[v];
        for (u, wt) in self.g.neighbors(v) {
            if self.side[u] == was {
                self.delta[u] -= 2.0 * wt;
            } else {
                self.delta[u] += 2.0 * wt;
            }
        }
        self.delta[v] = -self.delta[v];
        self.side[v] = !was;
    }

    fn check(&self) -> Result<()> {
        if !self.verify {
            return Ok(());
        }
        let fresh = cut_size(self.g, &self.side)?;
        if (fresh - self.cut).abs() > 1e-9 * fresh.abs().max(1.0) {
            return Err(Error::Internal(format!(
                "incremental cut {} differs from recomputed cut {fresh}",
                self.cut
            )));
        }
        Ok(())
    }

    /// Best feasible cut-decreasing move, plus the number of improving moves
    /// blocked by capacity.
    fn best_move(&self, eps: f64) -> (Option<usize>, usize) {
        let mut best: Option<usize> = None;
        let mut blocked = 0;
        for v in 0..self.side.len() {
            // NaN gains never qualify.
            if self.locked[v] || self.delta[v] >= -eps || self.delta[v].is_nan() {
                continue;
            }
            if !self.fits_move(v) {
                blocked += 1;
                continue;
            }
            if best.is_none_or(|b| self.delta[v] < self.delta[b]) {
                best = Some(v);
            }
        }
        (best, blocked)
    }

    fn sorted_candidates(&self, first: bool) -> Vec<usize> {
        let mut c: Vec<usize> = (0..self.side.len())
            .filter(|&v| !self.locked[v] && self.side[v] == first)
            .collect();
        c.sort_by(|&a, &b| self.delta[a].total_cmp(&self.delta[b]).then(a.cmp(&b)));
        c
    }

    /// Best feasible cut-decreasing swap `(s in first part, t in second)`.
    fn best_swap(&self, eps: f64) -> Option<(usize, usize, f64)> {
        let a = self.sorted_candidates(true);
        let b = self.sorted_candidates(false);
        let min_b = self.delta[*b.first()?];
        let mut best: Option<(usize, usize, f64)> = None;
        let mut bound = -eps;
        for &s in &a {
            let ds = self.delta[s];
            // w(s, t) ≥ 0, so ds + dt is a lower bound on the swap delta
            if ds + min_b > bound {
                break;
            }
            for &t in &b {
                let dt = self.delta[t];
                if ds + dt > bound {
                    break;
                }
                let total = ds + dt + 2.0 * self.g.edge_weight(s, t);
                let better = match best {
                    None => total < bound,
                    Some((bs, bt, bd)) => total < bd || (total == bd && (s, t) < (bs, bt)),
                };
                if better && self.fits_swap(s, t) {
                    best = Some((s, t, total));
                    bound = total;
                }
            }
        }
        best
    }
}

/// Best-improvement local search over single moves, then swaps, repeated
/// until neither kind of step decreases the cut. Locked vertices never move.
///
/// The input must be feasible unless `cfg.repair` is set, in which case an
/// infeasible input is first repaired.
pub fn improve(
    g: &WeightedGraph,
    in_first: &[bool],
    u: &CapacityBound,
    locked: &[bool],
    cfg: &RefineConfig,
) -> Result<RefineOutcome> {
    let mut state = TwoWay::new(g, in_first, u, locked, cfg.verify)?;
    let mut repaired = false;
    if !state.feasible() {
        if !cfg.repair {
            return Err(invalid(format!(
                "input partition violates capacities by {}",
                state.violation()
            )));
        }
        let r = repair_toward_feasibility(g, in_first, u, locked)?;
        if !r.success {
            return Err(invalid(format!(
                "input partition could not be repaired (remaining violation {})",
                r.violation
            )));
        }
        state = TwoWay::new(g, &r.in_first, u, locked, cfg.verify)?;
        repaired = true;
    }
    let cut_before = state.cut;
    let mut plans = Vec::new();
    let (mut moves, mut swaps, mut blocked);
    moves = 0;
    swaps = 0;
    loop {
        loop {
            let (best, b) = state.best_move(cfg.eps);
            blocked = b;
            let Some(v) = best else { break };
            let from = side_of(state.side[v]);
            let delta = state.delta[v];
            state.apply_move(v);
            state.check()?;
            moves += 1;
            plans.push(MovePlan {
                kind: MoveKind::OneMove {
                    vertex: v,
                    from,
                    to: side_of(state.side[v]),
                },
                delta_cut: delta,
                feasible_after: true,
            });
        }
        let mut swapped = false;
        while let Some((s, t, delta)) = state.best_swap(cfg.eps) {
            state.apply_move(s);
            state.apply_move(t);
            state.check()?;
            swaps += 1;
            swapped = true;
            plans.push(MovePlan {
                kind: MoveKind::Swap { s, t },
                delta_cut: delta,
                feasible_after: true,
            });
        }
        if !swapped {
            break;
        }
    }
    Ok(RefineOutcome {
        cut_after: cut_size(g, &state.side)?,
        in_first: state.side,
        cut_before,
        moves,
        swaps,
        blocked,
        repaired,
        plans,
    })
}

/// Parts after refining the pair `(part_i, part_j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairOutcome {
    pub part_i: Vec<usize>,
    pub part_j: Vec<usize>,
    pub outcome: RefineOutcome,
}

/// Refines two disjoint parts of `g` against each other. `u` holds the
/// capacity rows of `part_i` and `part_j`; `locked` is full-length.
///
/// Edges to other parts stay cut whatever happens, so the change of the
/// pairwise cut equals the change of the multiway cut.
pub fn improve_pair(
    g: &WeightedGraph,
    part_i: &[usize],
    part_j: &[usize],
    u: &CapacityBound,
    locked: &[bool],
    cfg: &RefineConfig,
) -> Result<PairOutcome> {
    if locked.len() != g.n() {
        return Err(Error::Dimension {
            expected: g.n(),
            got: locked.len(),
        });
    }
    let mut seen = vec![false; g.n()];
    for &v in part_i.iter().chain(part_j) {
        if v >= g.n() || seen[v] {
            return Err(invalid(format!(
                "vertex {v} is out of range or in both parts"
            )));
        }
        seen[v] = true;
    }
    let vertices: Vec<usize> = part_i.iter().chain(part_j).copied().collect();
    let sub = g.induced(&vertices);
    let in_first: Vec<bool> = (0..vertices.len()).map(|k| k < part_i.len()).collect();
    let sub_locked: Vec<bool> = vertices.iter().map(|&v| locked[v]).collect();
    let outcome = improve(&sub, &in_first, u, &sub_locked, cfg)?;
    let mut pi = Vec::new();
    let mut pj = Vec::new();
    for (k, &v) in vertices.iter().enumerate() {
        if outcome.in_first[k] {
            pi.push(v);
        } else {
            pj.push(v);
        }
    }
    pi.sort_unstable();
    pj.sort_unstable();
    Ok(PairOutcome {
        part_i: pi,
        part_j: pj,
        outcome,
    })
}

/// Greedy descent on the total capacity violation. Each step applies the
/// single move, or failing that the swap, that lowers the violation most,
/// with the cut change and then vertex index as tie-breakers.
pub fn repair_toward_feasibility(
    g: &WeightedGraph,
    in_first: &[bool],
    u: &CapacityBound,
    locked: &[bool],
) -> Result<RepairOutcome> {
    let mut state = TwoWay::new(g, in_first, u, locked, false)?;
    let (mut moves, mut swaps) = (0, 0);
    let done = |state: &TwoWay, moves, swaps, success| RepairOutcome {
        in_first: state.side.clone(),
        success,
        violation: state.violation(),
        moves,
        swaps,
    };
    if state.feasible() {
        return Ok(done(&state, 0, 0, true));
    }
    // Pigeonhole: no assignment fits if some dimension exceeds U₁ + U₂, or
    // locked vertices alone overflow their side.
    let total = g.vertex_weights().total();
    let mut locked_usage = [vec![0; total.len()], vec![0; total.len()]];
    for v in (0..g.n()).filter(|&v| locked[v]) {
        add_assign(
            &mut locked_usage[part(in_first[v])],
            g.vertex_weights().row(v),
        );
    }
    let hopeless = (0..total.len()).any(|k| total[k] > state.limits[0][k] + state.limits[1][k])
        || !fits(&locked_usage[0], state.limits[0])
        || !fits(&locked_usage[1], state.limits[1]);
    if hopeless {
        return Ok(done(&state, 0, 0, false));
    }

    let n = g.n();
    let dims = total.len();
    let violation_with = |state: &TwoWay, out: &[i64], inn: &[i64], from: usize| -> i64 {
        let mut v = 0;
        for k in 0..dims {
            let a = state.usage[from][k] - out[k] + inn[k];
            let b = state.usage[1 - from][k] + out[k] - inn[k];
            v += (a - state.limits[from][k]).max(0) + (b - state.limits[1 - from][k]).max(0);
        }
        v
    };
    let zero = vec![0i64; dims];
    loop {
        let current = state.violation();
        if current == 0 {
            return Ok(done(&state, moves, swaps, true));
        }
        // (violation, cut delta, index)
        let mut best_move: Option<(i64, f64, usize)> = None;
        for v in (0..n).filter(|&v| !locked[v]) {
            let viol = violation_with(&state, state.weight(v), &zero, part(state.side[v]));
            if viol >= current {
                continue;
            }
            let key = (viol, state.delta[v], v);
            if best_move.is_none_or(|b| (key.1, key.0) < (b.1, b.0)) {
                best_move = Some(key);
            }
        }
        if let Some((_, _, v)) = best_move {
            state.apply_move(v);
            moves += 1;
            continue;
        }
        let mut best_swap: Option<(i64, f64, usize, usize)> = None;
        for s in (0..n).filter(|&s| !locked[s] && state.side[s]) {
            for t in (0..n).filter(|&t| !locked[t] && !state.side[t]) {
                let viol = violation_with(&state, state.weight(s), state.weight(t), 0);
                if viol >= current {
                    continue;
                }
                let d = state.delta[s] + state.delta[t] + 2.0 * g.edge_weight(s, t);
                if best_swap.is_none_or(|b| (d, viol) < (b.1, b.0)) {
                    best_swap = Some((viol, d, s, t));
                }
            }
        }
        match best_swap {
            Some((_, _, s, t)) => {
                state.apply_move(s);
                state.apply_move(t);
                swaps += 1;
            }
            None => return Ok(done(&state, moves, swaps, false)),
        }
    }
}

/// Exhaustive from-scratch search for a feasible cut-decreasing move or
/// swap. `None` certifies local optimality.
pub fn find_improving_step(
    g: &WeightedGraph,
    in_first: &[bool],
    u: &CapacityBound,
    locked: &[bool],
    eps: f64,
) -> Result<Option<MovePlan>> {
    let n = g.n();
    let base = cut_size(g, in_first)?;
    let mut y = in_first.to_vec();
    let eval = |y: &[bool]| -> Result<(f64, bool)> {
        let y2: Vec<bool> = y.iter().map(|b| !b).collect();
        let f = check_feasibility(y, &y2, g.vertex_weights(), u)?;
        Ok((cut_size(g, y)?, f.feasible))
    };
    for v in (0..n).filter(|&v| !locked[v]) {
        y[v] = !y[v];
        let (cut, feasible) = eval(&y)?;
        y[v] = !y[v];
        if feasible && cut < base - eps {
            return Ok(Some(MovePlan {
                kind: MoveKind::OneMove {
                    vertex: v,
                    from: side_of(y[v]),
                    to: side_of(!y[v]),
                },
                delta_cut: cut - base,
                feasible_after: true,
            }));
        }
    }
    for s in (0..n).filter(|&s| !locked[s] && in_first[s]) {
        for t in (0..n).filter(|&t| !locked[t] && !in_first[t]) {
            y[s] = false;
            y[t] = true;
            let (cut, feasible) = eval(&y)?;
            y[s] = true;
            y[t] = false;
            if feasible && cut < base - eps {
                return Ok(Some(MovePlan {
                    kind: MoveKind::Swap { s, t },
                    delta_cut: cut - base,
                    feasible_after: true,
                }));
            }
        }
    }
    Ok(None)
}

/// Uniformly random unordered pair `(i, j)`, `i < j < parts`.
pub fn pick_random_pair<R: Rng + ?Sized>(parts: usize, rng: &mut R) -> Result<(usize, usize)> {
    if parts < 2 {
        return Err(invalid(format!(
            "need at least two parts to pick a pair, got {parts}"
        )));
    }
    let mut k = rng.gen_range(0..parts * (parts - 1) / 2);
    for i in 0..parts {
        let row = parts - 1 - i;
        if k < row {
            return Ok((i, i + 1 + k));
        }
        k -= row;
    }
    unreachable!("pair index within range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p4() -> WeightedGraph {
        crate::graph::tests::path(&[1.0, 1.0, 1.0])
    }

    fn loose(n: i64) -> CapacityBound {
        CapacityBound::uniform(2, vec![n]).unwrap()
    }

    #[test]
    fn path_alternating_split_improves_to_cut_one() {
        let g = p4();
        // {1,3} vs {2,4}, 1-based
        let start = [true, false, true, false];
        let cfg = RefineConfig {
            verify: true,
            ..RefineConfig::default()
        };
        let out = improve(
            &g,
            &start,
            &CapacityBound::uniform(2, vec![2]).unwrap(),
            &[false; 4],
            &cfg,
        )
        .unwrap();
        assert_eq!(out.cut_before, 3.0);
        assert_eq!(out.cut_after, 1.0);
        let (ones, _): (Vec<usize>, Vec<usize>) = (0..4).partition(|&v| out.in_first[v]);
        assert!(ones == vec![0, 1] || ones == vec![2, 3]);
    }

    #[test]
    fn optimal_single_edge_is_unchanged() {
        let g = crate::graph::tests::path(&[1.0]);
        let out = improve(
            &g,
            &[true, false],
            &loose(1),
            &[false; 2],
            &RefineConfig::default(),
        )
        .unwrap();
        assert_eq!(out.in_first, vec![true, false]);
        assert_eq!(out.moves + out.swaps, 0);
    }

    #[test]
    fn saturated_capacities_block_every_move() {
        // distinct weights, capacities equal to current usage: every move or
        // swap overfills one side
        let b = crate::graph::VertexWeights::new(vec![vec![1], vec![2], vec![3], vec![4]]).unwrap();
        let g = WeightedGraph::new(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)], b).unwrap();
        let start = [true, false, true, false];
        let u = CapacityBound::new(vec![vec![4], vec![6]]).unwrap();
        let out = improve(&g, &start, &u, &[false; 4], &RefineConfig::default()).unwrap();
        assert_eq!(out.in_first, start.to_vec());
        assert_eq!(out.cut_after, 3.0);
        assert_eq!(out.blocked, 4);
    }

    #[test]
    fn infeasible_input_rejected_without_repair() {
        let g = p4();
        let err = improve(
            &g,
            &[true; 4],
            &loose(3),
            &[false; 4],
            &RefineConfig::default(),
        );
        assert!(err.is_err());
        let cfg = RefineConfig {
            repair: true,
            ..RefineConfig::default()
        };
        let out = improve(&g, &[true; 4], &loose(3), &[false; 4], &cfg).unwrap();
        assert!(out.repaired);
        assert!(out.cut_after <= 1.0);
    }

    #[test]
    fn repair_single_move() {
        let g = p4();
        let r = repair_toward_feasibility(&g, &[true, true, true, false], &loose(2), &[false; 4])
            .unwrap();
        assert!(r.success);
        assert_eq!(r.moves, 1);
        assert_eq!(r.swaps, 0);
        // vertex 2 (0-based) moves: cut stays 1
        assert_eq!(r.in_first, vec![true, true, false, false]);
    }

    #[test]
    fn repair_fails_by_pigeonhole() {
        let g = p4();
        let r = repair_toward_feasibility(&g, &[true; 4], &loose(1), &[false; 4]).unwrap();
        assert!(!r.success);
        assert_eq!(r.moves + r.swaps, 0);
    }

    #[test]
    fn repair_needs_swap_in_two_dimensions() {
        // Part 1 = {0: (5,0), 1: (5,0)} overflows (9,1) by one; part 2 =
        // {2: (4,0), 3: (0,1)} under (6,1). No single move lowers the
        // violation; swapping 0 and 2 gives (9,0) | (5,1).
        let b =
            crate::graph::VertexWeights::new(vec![vec![5, 0], vec![5, 0], vec![4, 0], vec![0, 1]])
                .unwrap();
        let g = WeightedGraph::new(4, [(0, 1, 1.0), (2, 3, 1.0)], b).unwrap();
        let u = CapacityBound::new(vec![vec![9, 1], vec![6, 1]]).unwrap();
        let start = [true, true, false, false];
        let r = repair_toward_feasibility(&g, &start, &u, &[false; 4]).unwrap();
        assert!(r.success, "{r:?}");
        assert_eq!((r.moves, r.swaps), (0, 1));
        assert_eq!(r.in_first, vec![false, true, true, false]);
    }

    #[test]
    fn locked_vertices_never_move() {
        let g = p4();
        let start = [true, false, true, false];
        let locked = [false, true, false, false];
        let out = improve(&g, &start, &loose(4), &locked, &RefineConfig::default()).unwrap();
        assert!(!out.in_first[1]);
        assert!(
            find_improving_step(&g, &out.in_first, &loose(4), &locked, IMPROVEMENT_EPS)
                .unwrap()
                .is_none()
        );
    }

    #[test]
    fn pair_refinement_maps_back_to_parts() {
        let g = p4();
        let u = CapacityBound::uniform(2, vec![2]).unwrap();
        let out = improve_pair(
            &g,
            &[0, 2],
            &[1, 3],
            &u,
            &[false; 4],
            &RefineConfig::default(),
        )
        .unwrap();
        assert_eq!(out.outcome.cut_after, 1.0);
        let mut all: Vec<usize> = out.part_i.iter().chain(&out.part_j).copied().collect();
        all.sort();
        assert_eq!(all, vec![0, 1, 2, 3]);
    }

    #[test]
    fn random_pair_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            assert_eq!(pick_random_pair(2, &mut rng).unwrap(), (0, 1));
        }
        assert!(pick_random_pair(1, &mut rng).is_err());
        let mut counts = [0usize; 3];
        for _ in 0..3000 {
            match pick_random_pair(3, &mut rng).unwrap() {
                (0, 1) => counts[0] += 1,
                (0, 2) => counts[1] += 1,
                (1, 2) => counts[2] += 1,
                p => panic!("unexpected pair {p:?}"),
            }
        }
        // binomial(3000, 1/3): σ ≈ 25.8
        for c in counts {
            assert!((c as f64 - 1000.0).abs() < 3.0 * 25.82, "{counts:?}");
        }
        let a: Vec<_> = {
            let mut r = ChaCha8Rng::seed_from_u64(9);
            (0..10)
                .map(|_| pick_random_pair(5, &mut r).unwrap())
                .collect()
        };
        let b: Vec<_> = {
            let mut r = ChaCha8Rng::seed_from_u64(9);
            (0..10)
                .map(|_| pick_random_pair(5, &mut r).unwrap())
                .collect()
        };
        assert_eq!(a, b);
    }
}
