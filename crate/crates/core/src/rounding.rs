//! Hyperplane rounding of an angle vector into candidate bipartitions,
//! followed by the selection cascade: best-ranked feasible candidates, then
//! any feasible candidate, then local repair, then capacity augmentation.

use std::collections::HashSet;
use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::{overflow, Bipartition, CapacityBound, WeightedGraph};
use crate::par::{self, Execution};
use crate::refine::repair_toward_feasibility;
use crate::relax::ReducedQuadratic;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoundingConfig {
    /// Hyperplanes sampled.
    pub planes: usize,
    /// Best-ranked candidates inspected first (`1 ≤ keep ≤ planes`).
    pub keep: usize,
    pub seed: u64,
    pub augmentation_factor: f64,
    pub max_augmentations: usize,
    /// Standard deviation of Gaussian noise added to the angles before
    /// rounding. Zero disables it.
    pub perturb_theta_sigma: f64,
    /// Try local repair of the best candidates before augmenting.
    pub repair: bool,
    pub exec: Execution,
}

impl Default for RoundingConfig {
    fn default() -> Self {
        Self {
            planes: 100,
            keep: 10,
            seed: 0,
            augmentation_factor: 1.1,
            max_augmentations: 64,
            perturb_theta_sigma: 0.0,
            repair: true,
            exec: Execution::default(),
        }
    }
}

impl RoundingConfig {
    pub fn validate(&self) -> Result<()> {
        if self.planes == 0 || self.keep == 0 || self.keep > self.planes {
            return Err(invalid(format!(
                "rounding needs 1 ≤ keep ≤ planes (got keep {}, planes {})",
                self.keep, self.planes
            )));
        }
        if !(self.augmentation_factor > 1.0) {
            return Err(invalid("augmentation factor must exceed 1"));
        }
        if !(self.perturb_theta_sigma >= 0.0) {
            return Err(invalid("perturbation sigma must be nonnegative"));
        }
        Ok(())
    }
}

/// Which branch of the cascade produced the result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SelectionStage {
    BestRanked,
    AnyCandidate,
    Repaired,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundingOutcome {
    /// Full-length feasible bipartitions, best reduced objective first.
    pub partitions: Vec<Bipartition>,
    pub augmented: Vec<bool>,
    pub objective_values: Vec<f64>,
    /// Capacities the partitions were checked against.
    pub capacities: CapacityBound,
    pub augmentations: usize,
    pub stage: SelectionStage,
    /// Distinct candidates produced by the hyperplanes.
    pub distinct_candidates: usize,
}

/// Normal vectors `(cos γⱼ, sin γⱼ)` with `γⱼ` uniform on `[0, 2π)`.
pub fn sample_hyperplanes(p: usize, seed: u64) -> Vec<[f64; 2]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..p)
        .map(|_| {
            let gamma = rng.gen_range(0.0..TAU);
            [gamma.cos(), gamma.sin()]
        })
        .collect()
}

/// `true` (first part) where `cos θᵢ·βⱼ₁ + sin θᵢ·βⱼ₂ ≥ 0`.
pub fn round_against(theta: &[f64], beta: [f64; 2]) -> Vec<bool> {
    theta
        .iter()
        .map(|t| t.cos() * beta[0] + t.sin() * beta[1] >= 0.0)
        .collect()
}

struct Candidate {
    reduced: Vec<bool>,
    value: f64,
}

/// Rounds `theta_star` (reduced coordinates of `q`) against sampled
/// hyperplanes and selects feasible bipartitions of `g` under `u`.
pub fn round_and_select(
    theta_star: &[f64],
    q: &ReducedQuadratic,
    g: &WeightedGraph,
    u: &CapacityBound,
    cfg: &RoundingConfig,
) -> Result<RoundingOutcome> {
    cfg.validate()?;
    if theta_star.len() != q.dim() {
        return Err(Error::Dimension {
            expected: q.dim(),
            got: theta_star.len(),
        });
    }
    if g.n() != q.full_len() {
        return Err(Error::Dimension {
            expected: q.full_len(),
            got: g.n(),
        });
    }
    if u.parts() < 2 {
        return Err(invalid("rounding needs two capacity rows"));
    }

    let mut theta = theta_star.to_vec();
    if cfg.perturb_theta_sigma > 0.0 {
        let noise = Normal::new(0.0, cfg.perturb_theta_sigma)
            .map_err(|e| invalid(format!("bad perturbation sigma: {e}")))?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9e37_79b9_7f4a_7c15);
        for t in &mut theta {
            *t += noise.sample(&mut rng);
        }
    }

    let betas = sample_hyperplanes(cfg.planes, cfg.seed);
    let raw: Vec<Result<Candidate>> = par::map_slice(cfg.exec, &betas, |&beta| {
        let reduced = round_against(&theta, beta);
        let value = q.binary_value(&reduced)?;
        Ok(Candidate { reduced, value })
    });
    let mut indexed: Vec<(usize, Candidate)> = Vec::with_capacity(raw.len());
    for (j, c) in raw.into_iter().enumerate() {
        indexed.push((j, c?));
    }
    indexed.sort_by(|a, b| a.1.value.total_cmp(&b.1.value).then(a.0.cmp(&b.0)));
    let mut seen = HashSet::new();
    let ranked: Vec<Candidate> = indexed
        .into_iter()
        .map(|(_, c)| c)
        .filter(|c| seen.insert(c.reduced.clone()))
        .collect();
    let distinct = ranked.len();
    let full: Vec<Vec<bool>> = ranked.iter().map(|c| q.to_full(&c.reduced)).collect();
    let locked = q.fixed().mask(g.n());
    let keep = cfg.keep.min(ranked.len());

    let mut caps = u.clone();
    for attempt in 0..=cfg.max_augmentations {
        let evaluated: Vec<Result<Bipartition>> = par::map_slice(cfg.exec, &full, |y| {
            Bipartition::evaluate(g, y.clone(), &caps)
        });
        let evaluated: Vec<Bipartition> = evaluated.into_iter().collect::<Result<_>>()?;

        let pick = |range: std::ops::Range<usize>| -> Vec<(Bipartition, f64)> {
            range
                .filter(|&k| evaluated[k].feasible)
                .map(|k| (evaluated[k].clone(), ranked[k].value))
                .collect()
        };
        let mut found = pick(0..keep);
        let mut stage = SelectionStage::BestRanked;
        if found.is_empty() {
            found = pick(keep..ranked.len());
            stage = SelectionStage::AnyCandidate;
        }
        if found.is_empty() && cfg.repair {
            stage = SelectionStage::Repaired;
            let repaired: Vec<Result<Option<Vec<bool>>>> =
                par::map_slice(cfg.exec, &full[..keep], |y| {
                    let r = repair_toward_feasibility(g, y, &caps, &locked)?;
                    Ok(r.success.then_some(r.in_first))
                });
            let mut seen = HashSet::new();
            for r in repaired {
                if let Some(y) = r? {
                    if seen.insert(y.clone()) {
                        let value = q.binary_value(&q.to_reduced(&y))?;
                        found.push((Bipartition::evaluate(g, y, &caps)?, value));
                    }
                }
            }
            found.sort_by(|a, b| a.1.total_cmp(&b.1));
        }
        if !found.is_empty() {
            let augmented = attempt > 0;
            return Ok(RoundingOutcome {
                augmented: vec![augmented; found.len()],
                objective_values: found.iter().map(|f| f.1).collect(),
                partitions: found.into_iter().map(|f| f.0).collect(),
                capacities: caps,
                augmentations: attempt,
                stage,
                distinct_candidates: distinct,
            });
        }
        if attempt < cfg.max_augmentations {
            caps = caps.augmented(cfg.augmentation_factor);
        }
    }

    let best = &full[0];
    let original = Bipartition::evaluate(g, best.clone(), u)?;
    Err(Error::AugmentationExhausted {
        attempts: cfg.max_augmentations,
        violation: overflow(&original.usage[0], u.row(0)) + overflow(&original.usage[1], u.row(1)),
        best_candidate: best.clone(),
    })
}
