//! Generalized nonmonotone Wolfe line search.
//!
//! Accepts `α` with
//!
//! ```text
//! φ(α)  ≤ R + c1·α·φ'(0)
//! φ'(α) ≥ c2·φ'(0)
//! ```
//!
//! where `R ≥ φ(0)` is the nonmonotone reference value.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::defaults;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineSearchConfig {
    pub c1: f64,
    pub c2: f64,
    /// Window of recent values capping the reference. `1` gives a monotone
    /// search.
    pub memory: usize,
    /// Zhang–Hager averaging decay in `[0, 1]`.
    pub decay: f64,
    pub max_evals: usize,
    pub max_step: f64,
}

impl Default for LineSearchConfig {
    fn default() -> Self {
        Self {
            c1: defaults::WOLFE_C1,
            c2: defaults::WOLFE_C2,
            memory: defaults::REFERENCE_MEMORY,
            decay: defaults::REFERENCE_DECAY,
            max_evals: defaults::LINE_SEARCH_MAX_EVALS,
            max_step: defaults::LINE_SEARCH_MAX_STEP,
        }
    }
}

impl LineSearchConfig {
    pub fn monotone() -> Self {
        Self {
            memory: 1,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LineSearchError {
    /// `φ'(0) ≥ 0`.
    NotDescent { slope: f64 },
    /// No acceptable step within the evaluation budget.
    BracketFailure { evals: usize, last_alpha: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepAccepted {
    pub alpha: f64,
    pub value: f64,
    pub slope: f64,
    pub evals: usize,
    /// Accepted at the initial trial step.
    pub first_trial: bool,
}

/// Both acceptance inequalities at step `alpha`.
pub fn satisfies_wolfe(
    value: f64,
    slope: f64,
    alpha: f64,
    reference: f64,
    slope0: f64,
    c1: f64,
    c2: f64,
) -> bool {
    value <= reference + c1 * alpha * slope0 && slope >= c2 * slope0
}

/// Searches along `φ` (returning value and derivative) from `alpha0`.
///
/// The accepted step is always the last one passed to `phi`, so callers may
/// cache state computed there.
pub fn line_search<F>(
    mut phi: F,
    value0: f64,
    slope0: f64,
    reference: f64,
    alpha0: f64,
    cfg: &LineSearchConfig,
) -> Result<StepAccepted, LineSearchError>
where
    F: FnMut(f64) -> (f64, f64),
{
    if !(slope0 < 0.0) {
        return Err(LineSearchError::NotDescent { slope: slope0 });
    }
    let reference = reference.max(value0);
    let (mut lo, mut f_lo, mut d_lo) = (0.0, value0, slope0);
    let mut hi: Option<(f64, f64)> = None;
    let mut alpha = alpha0.min(cfg.max_step);
    if !(alpha > 0.0) {
        alpha = 1.0f64.min(cfg.max_step);
    }

    for evals in 1..=cfg.max_evals {
        let (f, d) = phi(alpha);
        let finite = f.is_finite() && d.is_finite();
        if !finite || f > reference + cfg.c1 * alpha * slope0 {
            hi = Some((alpha, if finite { f } else { f64::INFINITY }));
        } else if d < cfg.c2 * slope0 {
            lo = alpha;
            f_lo = f;
            d_lo = d;
        } else {
            return Ok(StepAccepted {
                alpha,
                value: f,
                slope: d,
                evals,
                first_trial: evals == 1,
            });
        }

        alpha = match hi {
            None => {
                if lo >= cfg.max_step {
                    return Err(LineSearchError::BracketFailure {
                        evals,
                        last_alpha: lo,
                    });
                }
                (4.0 * lo).min(cfg.max_step)
            }
            Some((a_hi, f_hi)) => {
                let width = a_hi - lo;
                if width <= f64::EPSILON * a_hi.max(1e-300) {
                    return Err(LineSearchError::BracketFailure {
                        evals,
                        last_alpha: alpha,
                    });
                }
                // quadratic through (lo, f_lo, d_lo) and (hi, f_hi)
                let curv = f_hi - f_lo - d_lo * width;
                let trial = if f_hi.is_finite() && curv > 0.0 {
                    lo - d_lo * width * width / (2.0 * curv)
                } else {
                    lo + 0.5 * width
                };
                trial.clamp(lo + 0.1 * width, a_hi - 0.1 * width)
            }
        };
    }
    Err(LineSearchError::BracketFailure {
        evals: cfg.max_evals,
        last_alpha: alpha,
    })
}

/// Reference value `R_k`: the Zhang–Hager average of past objective values,
/// capped by the largest of the last `memory` values.
#[derive(Debug, Clone)]
pub struct NonmonotoneReference {
    memory: usize,
    decay: f64,
    q: f64,
    c: f64,
    recent: VecDeque<f64>,
}

impl NonmonotoneReference {
    pub fn new(f0: f64, cfg: &LineSearchConfig) -> Self {
        let mut recent = VecDeque::with_capacity(cfg.memory.max(1));
        recent.push_back(f0);
        Self {
            memory: cfg.memory.max(1),
            decay: cfg.decay.clamp(0.0, 1.0),
            q: 1.0,
            c: f0,
            recent,
        }
    }

    pub fn value(&self) -> f64 {
        let latest = *self.recent.back().unwrap();
        if self.memory <= 1 {
            return latest;
        }
        let window_max = self
            .recent
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        self.c.min(window_max).max(latest)
    }

    pub fn push(&mut self, f: f64) {
        let q_next = self.decay * self.q + 1.0;
        self.c = (self.decay * self.q * self.c + f) / q_next;
        self.q = q_next;
        if self.recent.len() == self.memory {
            self.recent.pop_front();
        }
        self.recent.push_back(f);
    }
}
