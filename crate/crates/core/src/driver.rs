//! Recursive bipartition driver.
//!
//! The root bisection uses both capacity rows. Any resulting part whose
//! weight exceeds its row (possible only after capacity augmentation) is
//! bisected again with that row for both children, until every part fits,
//! a split degenerates, or the part cap is reached. Pairs of leaves are then
//! refined by local search.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::{
    build_laplacian, fits, multiway_cut, overflow, CapacityBound, FixedAssignment, WeightedGraph,
};
use crate::par::{self, Execution};
use crate::refine::{improve, improve_pair, pick_random_pair, RefineConfig, RefineOutcome};
use crate::relax::{eliminate_with, ModelOptions};
use crate::rounding::{round_and_select, RoundingConfig, SelectionStage};
use crate::solver::{solve, SolveStatus, SolverConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub model: ModelOptions,
    pub solver: SolverConfig,
    /// The seed field is replaced per bisection.
    pub rounding: RoundingConfig,
    pub refine: RefineConfig,
    /// Independent runs; the best forest is returned.
    pub restarts: usize,
    pub seed: u64,
    /// Refine exactly one random pair of parts.
    pub paper_strict: bool,
    /// Adjacent pairs once, then `refine_rounds − 1` random pairs.
    pub refine_rounds: usize,
    pub max_parts: Option<usize>,
    pub exec: Execution,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            model: ModelOptions::default(),
            solver: SolverConfig::default(),
            rounding: RoundingConfig::default(),
            refine: RefineConfig::default(),
            restarts: 1,
            seed: 0,
            paper_strict: false,
            refine_rounds: 1,
            max_parts: None,
            exec: Execution::default(),
        }
    }
}

impl PipelineConfig {
    /// Same configuration with every parallel loop sequential.
    pub fn sequential(mut self) -> Self {
        self.exec = Execution::Sequential;
        self.rounding.exec = Execution::Sequential;
        self
    }
}

/// Why a node of the bisection tree is a leaf.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StopReason {
    Fits,
    SingleVertex,
    /// The bisection put every vertex on one side.
    Degenerate,
    PartCap,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProvenanceNode {
    pub id: usize,
    pub parent: Option<usize>,
    /// Original vertex ids, ascending.
    pub vertices: Vec<usize>,
    pub children: Option<[usize; 2]>,
    /// Capacity row index this node must fit; `None` for the root.
    pub row: Option<usize>,
    /// Augmentations used when this node was bisected.
    pub augmentations: usize,
    pub stop: Option<StopReason>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BisectionStats {
    pub node: usize,
    pub n: usize,
    pub iters: usize,
    pub status: SolveStatus,
    pub case_counts: [usize; 4],
    pub accel_hits: usize,
    pub f_star: f64,
    pub augmentations: usize,
    pub stage: SelectionStage,
    pub cut: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AugmentationEntry {
    pub node: usize,
    pub augmentations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefineRecord {
    pub pair: (usize, usize),
    pub cut_before: f64,
    pub cut_after: f64,
    pub moves: usize,
    pub swaps: usize,
    /// One of the parts overflows its capacity, so the pair was left alone.
    pub skipped: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionForest {
    /// Nonempty parts in provenance order, vertices ascending.
    pub parts: Vec<Vec<usize>>,
    /// Part index of every vertex.
    pub labels: Vec<usize>,
    pub per_part_usage: Vec<Vec<i64>>,
    pub part_capacity: Vec<Vec<i64>>,
    pub overflow: Vec<bool>,
    pub augmentation_log: Vec<AugmentationEntry>,
    pub cut_total: f64,
    pub cut_before_refine: f64,
    pub provenance: Vec<ProvenanceNode>,
    pub bisections: Vec<BisectionStats>,
    pub refinements: Vec<RefineRecord>,
    pub restart: usize,
    pub seed: u64,
    pub paper_strict: bool,
    pub elapsed_seconds: f64,
}

impl PartitionForest {
    pub fn is_feasible(&self) -> bool {
        !self.overflow.iter().any(|o| *o)
    }

    /// `Σ max(0, usage − capacity)` over parts and dimensions.
    pub fn total_overflow(&self) -> i64 {
        self.per_part_usage
            .iter()
            .zip(&self.part_capacity)
            .map(|(u, c)| overflow(u, c))
            .sum()
    }

    pub fn solver_iterations(&self) -> usize {
        self.bisections.iter().map(|b| b.iters).sum()
    }

    pub fn case_counts(&self) -> [usize; 4] {
        let mut c = [0; 4];
        for b in &self.bisections {
            for (total, k) in c.iter_mut().zip(b.case_counts) {
                *total += k;
            }
        }
        c
    }

    /// Checks the structural invariants against `g`.
    pub fn verify(&self, g: &WeightedGraph) -> Result<()> {
        let mut owner = vec![usize::MAX; g.n()];
        for (k, p) in self.parts.iter().enumerate() {
            if p.is_empty() {
                return Err(Error::Internal(format!("part {k} is empty")));
            }
            for &v in p {
                if owner[v] != usize::MAX {
                    return Err(Error::Internal(format!("vertex {v} is in two parts")));
                }
                owner[v] = k;
            }
        }
        if owner.contains(&usize::MAX) || owner != self.labels {
            return Err(Error::Internal("parts do not cover the vertex set".into()));
        }
        let cut = multiway_cut(g, &self.labels);
        if (cut - self.cut_total).abs() > 1e-9 * cut.abs().max(1.0) {
            return Err(Error::Internal(format!(
                "cut_total {} differs from recomputed {cut}",
                self.cut_total
            )));
        }
        for (k, p) in self.parts.iter().enumerate() {
            let usage = g.vertex_weights().sum_of(p.iter().copied());
            if usage != self.per_part_usage[k] {
                return Err(Error::Internal(format!("usage of part {k} is stale")));
            }
            if fits(&usage, &self.part_capacity[k]) == self.overflow[k] {
                return Err(Error::Internal(format!(
                    "overflow flag of part {k} is wrong"
                )));
            }
        }
        Ok(())
    }
}

/// SplitMix64 finalizer over a combination of inputs.
fn derive_seed(base: u64, a: u64, b: u64) -> u64 {
    let mut z = base
        .wrapping_add(a.wrapping_mul(0x9e37_79b9_7f4a_7c15))
        .wrapping_add(b.wrapping_mul(0xd1b5_4a32_d192_ed03));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Subgraph, fixed set and two-row capacities for bisecting `part` (given
/// in the order that defines local indices) under capacity row `row`.
///
/// Fixed vertices keep their sides only if the part holds both groups;
/// otherwise they form one group on the first side.
pub fn induced_subproblem(
    g: &WeightedGraph,
    part: &[usize],
    row: &[i64],
    fixed: &FixedAssignment,
) -> Result<(WeightedGraph, FixedAssignment, CapacityBound)> {
    if part.is_empty() {
        return Err(invalid("cannot build a subproblem for an empty part"));
    }
    let sub = g.induced(part);
    let (mut f1, mut f2) = (Vec::new(), Vec::new());
    for (k, &v) in part.iter().enumerate() {
        match fixed.side_of(v) {
            Some(crate::graph::Side::First) => f1.push(k),
            Some(crate::graph::Side::Second) => f2.push(k),
            None => {}
        }
    }
    if f1.is_empty() || f2.is_empty() {
        f1.append(&mut f2);
    }
    let sub_fixed = FixedAssignment::new(f1, f2, part.len())?;
    let caps = CapacityBound::uniform(2, row.to_vec())?;
    Ok((sub, sub_fixed, caps))
}

/// One relaxed solve plus rounding on a (sub)graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BisectOutcome {
    pub in_first: Vec<bool>,
    pub stats: BisectionStats,
}

pub fn bisect(
    g: &WeightedGraph,
    u: &CapacityBound,
    fixed: &FixedAssignment,
    cfg: &PipelineConfig,
    seed: u64,
) -> Result<BisectOutcome> {
    let l = build_laplacian(g);
    let q = eliminate_with(&l, fixed, cfg.model)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let theta0: Vec<f64> = (0..q.dim())
        .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
        .collect();
    let report = solve(&q, &theta0, &cfg.solver)?;
    let rounding = RoundingConfig {
        seed: derive_seed(seed, 1, 0),
        ..cfg.rounding
    };
    let out = round_and_select(&report.theta_star, &q, g, u, &rounding)?;
    // Every retained candidate is polished; the smallest polished cut wins,
    // ties keep the better-ranked one.
    let locked = fixed.mask(g.n());
    let polished: Vec<Result<RefineOutcome>> = par::map_slice(cfg.exec, &out.partitions, |p| {
        improve(g, p.in_first(), &out.capacities, &locked, &cfg.refine)
    });
    let mut best: Option<RefineOutcome> = None;
    for r in polished {
        let r = r?;
        if best.as_ref().is_none_or(|b| r.cut_after < b.cut_after) {
            best = Some(r);
        }
    }
    let best = best.ok_or_else(|| Error::Internal("rounding returned no partition".into()))?;
    Ok(BisectOutcome {
        stats: BisectionStats {
            node: 0,
            n: g.n(),
            iters: report.iters,
            status: report.status,
            case_counts: report.case_counts,
            accel_hits: report.accel_hits,
            f_star: report.f_star,
            augmentations: out.augmentations,
            stage: out.stage,
            cut: best.cut_after,
        },
        in_first: best.in_first,
    })
}

/// Full pipeline: recursive bisection, then pairwise refinement. With
/// several restarts the forest with the least overflow, then the smallest
/// cut, then the lowest restart index wins.
pub fn partition(
    g: &WeightedGraph,
    u: &CapacityBound,
    fixed: &FixedAssignment,
    cfg: &PipelineConfig,
) -> Result<PartitionForest> {
    let u = match u.parts() {
        1 => CapacityBound::uniform(2, u.row(0).to_vec())?,
        2 => u.clone(),
        k => {
            return Err(invalid(format!(
                "expected one or two capacity rows, got {k}"
            )))
        }
    };
    if u.dims() != g.dims() {
        return Err(Error::Dimension {
            expected: g.dims(),
            got: u.dims(),
        });
    }
    if fixed.f1().iter().chain(fixed.f2()).any(|&v| v >= g.n()) {
        return Err(invalid("fixed vertex outside the graph"));
    }
    if cfg.max_parts.is_some_and(|k| k < 2) {
        return Err(invalid("max_parts must be at least 2"));
    }
    if cfg.restarts == 0 {
        return Err(invalid("restarts must be at least 1"));
    }
    let runs = par::map_range(cfg.exec, cfg.restarts, |r| run_once(g, &u, fixed, cfg, r));
    let mut best: Option<PartitionForest> = None;
    let mut first_err = None;
    for run in runs {
        match run {
            Ok(f) => {
                let better = best.as_ref().is_none_or(|b| {
                    (f.total_overflow(), f.cut_total) < (b.total_overflow(), b.cut_total)
                });
                if better {
                    best = Some(f);
                }
            }
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    best.ok_or_else(|| first_err.expect("at least one restart ran"))
}

fn run_once(
    g: &WeightedGraph,
    u: &CapacityBound,
    fixed: &FixedAssignment,
    cfg: &PipelineConfig,
    restart: usize,
) -> Result<PartitionForest> {
    let start = Instant::now();
    let seed = derive_seed(cfg.seed, restart as u64, 0);
    let n = g.n();
    let mut nodes = vec![ProvenanceNode {
        id: 0,
        parent: None,
        vertices: (0..n).collect(),
        children: None,
        row: None,
        augmentations: 0,
        stop: None,
    }];
    let mut bisections = Vec::new();
    let mut pending = vec![0usize];
    let max_parts = cfg.max_parts.unwrap_or(usize::MAX);

    while !pending.is_empty() {
        let leaves = nodes.iter().filter(|nd| nd.children.is_none()).count();
        // Each split adds one leaf; the root split always runs.
        let allowed = if nodes.len() == 1 {
            1
        } else {
            max_parts.saturating_sub(leaves)
        };
        let (run, capped) = pending.split_at(allowed.min(pending.len()));
        for &id in capped {
            nodes[id].stop = Some(StopReason::PartCap);
        }
        let jobs: Vec<usize> = run.to_vec();
        let results = par::map_slice(cfg.exec, &jobs, |&id| {
            let node = &nodes[id];
            let (sub, sub_fixed, caps) = match node.row {
                None => (g.clone(), fixed.clone(), u.clone()),
                Some(r) => induced_subproblem(g, &node.vertices, u.row(r), fixed)?,
            };
            bisect(
                &sub,
                &caps,
                &sub_fixed,
                cfg,
                derive_seed(seed, id as u64, 1),
            )
        });
        pending.clear();
        for (&id, result) in jobs.iter().zip(results) {
            let mut out = result?;
            out.stats.node = id;
            let (first, second) = split_by(&nodes[id].vertices, &out.in_first);
            nodes[id].augmentations = out.stats.augmentations;
            bisections.push(out.stats);
            if nodes[id].parent.is_some() && (first.is_empty() || second.is_empty()) {
                nodes[id].stop = Some(StopReason::Degenerate);
                continue;
            }
            let mut children = [0; 2];
            for (side, vertices) in [first, second].into_iter().enumerate() {
                let row = nodes[id].row.unwrap_or(side);
                let child = nodes.len();
                children[side] = child;
                let usage = g.vertex_weights().sum_of(vertices.iter().copied());
                let stop = if fits(&usage, u.row(row)) {
                    Some(StopReason::Fits)
                } else if vertices.len() <= 1 {
                    Some(StopReason::SingleVertex)
                } else {
                    pending.push(child);
                    None
                };
                nodes.push(ProvenanceNode {
                    id: child,
                    parent: Some(id),
                    vertices,
                    children: None,
                    row: Some(row),
                    augmentations: 0,
                    stop,
                });
            }
            nodes[id].children = Some(children);
        }
    }

    // Leaves in depth-first order, first child first.
    let mut order = Vec::new();
    let mut stack = vec![0usize];
    while let Some(id) = stack.pop() {
        match nodes[id].children {
            Some([a, b]) => {
                stack.push(b);
                stack.push(a);
            }
            None => order.push(id),
        }
    }
    let leaf_nodes: Vec<usize> = order
        .into_iter()
        .filter(|&id| !nodes[id].vertices.is_empty())
        .collect();
    let mut parts: Vec<Vec<usize>> = leaf_nodes
        .iter()
        .map(|&id| nodes[id].vertices.clone())
        .collect();
    let part_capacity: Vec<Vec<i64>> = leaf_nodes
        .iter()
        .map(|&id| match nodes[id].row {
            Some(r) => u.row(r).to_vec(),
            None => u.row(0).iter().zip(u.row(1)).map(|(a, b)| a + b).collect(),
        })
        .collect();
    let usage_of = |p: &[usize]| g.vertex_weights().sum_of(p.iter().copied());

    let labels_of = |parts: &[Vec<usize>]| {
        let mut labels = vec![0; n];
        for (k, p) in parts.iter().enumerate() {
            for &v in p {
                labels[v] = k;
            }
        }
        labels
    };
    let cut_before_refine = multiway_cut(g, &labels_of(&parts));

    // Pairwise refinement.
    let k = parts.len();
    let mut pairs = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, u64::MAX, 2));
    if k >= 2 {
        if cfg.paper_strict {
            pairs.push(pick_random_pair(k, &mut rng)?);
        } else {
            pairs.extend((0..k - 1).map(|i| (i, i + 1)));
            for _ in 1..cfg.refine_rounds {
                pairs.push(pick_random_pair(k, &mut rng)?);
            }
        }
    }
    let locked = fixed.mask(n);
    let mut refinements = Vec::new();
    for (i, j) in pairs {
        let fits_i = fits(&usage_of(&parts[i]), &part_capacity[i]);
        let fits_j = fits(&usage_of(&parts[j]), &part_capacity[j]);
        if !(fits_i && fits_j) {
            refinements.push(RefineRecord {
                pair: (i, j),
                cut_before: 0.0,
                cut_after: 0.0,
                moves: 0,
                swaps: 0,
                skipped: true,
            });
            continue;
        }
        let caps = CapacityBound::new(vec![part_capacity[i].clone(), part_capacity[j].clone()])?;
        let out = improve_pair(g, &parts[i], &parts[j], &caps, &locked, &cfg.refine)?;
        refinements.push(RefineRecord {
            pair: (i, j),
            cut_before: out.outcome.cut_before,
            cut_after: out.outcome.cut_after,
            moves: out.outcome.moves,
            swaps: out.outcome.swaps,
            skipped: false,
        });
        parts[i] = out.part_i;
        parts[j] = out.part_j;
    }

    let keep: Vec<usize> = (0..parts.len()).filter(|&k| !parts[k].is_empty()).collect();
    let parts: Vec<Vec<usize>> = keep.iter().map(|&k| parts[k].clone()).collect();
    let part_capacity: Vec<Vec<i64>> = keep.iter().map(|&k| part_capacity[k].clone()).collect();
    let per_part_usage: Vec<Vec<i64>> = parts.iter().map(|p| usage_of(p)).collect();
    let overflow_flags = per_part_usage
        .iter()
        .zip(&part_capacity)
        .map(|(u, c)| !fits(u, c))
        .collect();
    let labels = labels_of(&parts);
    let augmentation_log = nodes
        .iter()
        .filter(|nd| nd.augmentations > 0)
        .map(|nd| AugmentationEntry {
            node: nd.id,
            augmentations: nd.augmentations,
        })
        .collect();
    Ok(PartitionForest {
        cut_total: multiway_cut(g, &labels),
        labels,
        parts,
        per_part_usage,
        part_capacity,
        overflow: overflow_flags,
        augmentation_log,
        cut_before_refine,
        provenance: nodes,
        bisections,
        refinements,
        restart,
        seed,
        paper_strict: cfg.paper_strict,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImproveReport {
    pub labels: Vec<usize>,
    pub cut_before: f64,
    pub cut_after: f64,
    pub pairs: Vec<RefineRecord>,
}

/// Refines an existing labeling: every pair of parts `i < j` once, in
/// lexicographic order. `capacity[k]` bounds part `k`.
///
/// Overflowing parts are an error unless `cfg.repair` is set.
pub fn improve_labels(
    g: &WeightedGraph,
    labels: &[usize],
    capacity: &[Vec<i64>],
    fixed: &FixedAssignment,
    cfg: &RefineConfig,
) -> Result<ImproveReport> {
    if labels.len() != g.n() {
        return Err(Error::Dimension {
            expected: g.n(),
            got: labels.len(),
        });
    }
    let k = labels.iter().max().map_or(0, |m| m + 1);
    if capacity.len() != k {
        return Err(invalid(format!(
            "{k} parts but {} capacity rows",
            capacity.len()
        )));
    }
    let mut parts = vec![Vec::new(); k];
    for (v, &l) in labels.iter().enumerate() {
        parts[l].push(v);
    }
    if !cfg.repair {
        for (i, p) in parts.iter().enumerate() {
            let usage = g.vertex_weights().sum_of(p.iter().copied());
            if !fits(&usage, &capacity[i]) {
                return Err(invalid(format!(
                    "part {} exceeds its capacity ({usage:?} > {:?})",
                    i + 1,
                    capacity[i]
                )));
            }
        }
    }
    let cut_before = multiway_cut(g, labels);
    let locked = fixed.mask(g.n());
    let mut pairs = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let caps = CapacityBound::new(vec![capacity[i].clone(), capacity[j].clone()])?;
            let out = improve_pair(g, &parts[i], &parts[j], &caps, &locked, cfg)?;
            pairs.push(RefineRecord {
                pair: (i, j),
                cut_before: out.outcome.cut_before,
                cut_after: out.outcome.cut_after,
                moves: out.outcome.moves,
                swaps: out.outcome.swaps,
                skipped: false,
            });
            parts[i] = out.part_i;
            parts[j] = out.part_j;
        }
    }
    let mut out = vec![0; g.n()];
    for (l, p) in parts.iter().enumerate() {
        for &v in p {
            out[v] = l;
        }
    }
    Ok(ImproveReport {
        cut_after: multiway_cut(g, &out),
        labels: out,
        cut_before,
        pairs,
    })
}

/// Splits `vertices` by `mask` (indexed like `vertices`).
fn split_by(vertices: &[usize], mask: &[bool]) -> (Vec<usize>, Vec<usize>) {
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for (k, &v) in vertices.iter().enumerate() {
        if mask[k] {
            a.push(v);
        } else {
            b.push(v);
        }
    }
    (a, b)
}
