//! Accelerated subspace-minimization conjugate gradient method with
//! Barzilai–Borwein steps.
//!
//! Each iteration picks a direction in `span{gₖ, sₖ₋₁}` (see
//! [`direction`]), runs a generalized nonmonotone Wolfe line search, and,
//! when the accepted step was the initial trial, tries to stretch or shrink
//! it by the minimizer of a quadratic interpolant along the ray.

pub mod defaults;
mod direction;
mod line_search;

pub use direction::{direction, interpolation_eta, DirectionCase, StepMemory};
pub use line_search::{
    line_search, satisfies_wolfe, LineSearchConfig, LineSearchError, NonmonotoneReference,
    StepAccepted,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smooth objective supplied as a combined value/gradient callback.
pub trait Objective {
    fn dim(&self) -> usize;

    /// Writes `∇f(x)` into `grad` and returns `f(x)`.
    fn value_and_gradient(&self, x: &[f64], grad: &mut [f64]) -> f64;
}

impl<T: Objective + ?Sized> Objective for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn value_and_gradient(&self, x: &[f64], grad: &mut [f64]) -> f64 {
        (**self).value_and_gradient(x, grad)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Stop when `‖g‖∞ ≤ epsilon`.
    pub epsilon: f64,
    pub max_iters: usize,
    pub line_search: LineSearchConfig,
    pub curvature_floor: f64,
    pub conjugacy_tol: f64,
    pub delta_floor: f64,
    pub quadratic_fit_tol: f64,
    pub descent_floor: f64,
    /// Clamp for the steepest-descent BB initial step.
    pub bb_clamp: (f64, f64),
    /// Forced steepest-descent period; `None` uses the problem dimension.
    pub restart_interval: Option<usize>,
    pub orthogonality_restart: f64,
    pub acceleration: bool,
    pub eta_clamp: (f64, f64),
    /// Re-verify both Wolfe inequalities at every accepted point.
    pub check_wolfe: bool,
    pub record_trace: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            epsilon: defaults::EPSILON,
            max_iters: defaults::MAX_ITERS,
            line_search: LineSearchConfig::default(),
            curvature_floor: defaults::CURVATURE_FLOOR,
            conjugacy_tol: defaults::CONJUGACY_TOL,
            delta_floor: defaults::DELTA_FLOOR,
            quadratic_fit_tol: defaults::QUADRATIC_FIT_TOL,
            descent_floor: defaults::DESCENT_FLOOR,
            bb_clamp: (defaults::BB_MIN, defaults::BB_MAX),
            restart_interval: None,
            orthogonality_restart: defaults::ORTHOGONALITY_RESTART,
            acceleration: true,
            eta_clamp: (defaults::ETA_MIN, defaults::ETA_MAX),
            check_wolfe: false,
            record_trace: false,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let ls = &self.line_search;
        if !(0.0 < ls.c1 && ls.c1 < ls.c2 && ls.c2 < 1.0) {
            return Err(Error::InvalidInput(format!(
                "line search constants need 0 < c1 < c2 < 1 (got {}, {})",
                ls.c1, ls.c2
            )));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::InvalidInput("epsilon must be positive".into()));
        }
        if !(self.bb_clamp.0 > 0.0 && self.bb_clamp.0 < self.bb_clamp.1) {
            return Err(Error::InvalidInput("bb_clamp needs 0 < min < max".into()));
        }
        if !(self.eta_clamp.0 > 0.0 && self.eta_clamp.0 <= self.eta_clamp.1) {
            return Err(Error::InvalidInput("eta_clamp needs 0 < min ≤ max".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveStatus {
    Converged,
    MaxIters,
    LineSearchFailure,
}

/// One accepted iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iter: usize,
    pub value: f64,
    /// `gₖᵀdₖ` of the direction actually searched.
    pub slope: f64,
    pub alpha: f64,
    pub eta: f64,
    pub case: DirectionCase,
    pub reference: f64,
    pub next_value: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveReport {
    pub theta_star: Vec<f64>,
    pub f_star: f64,
    pub grad_inf_norm: f64,
    pub iters: usize,
    pub status: SolveStatus,
    /// Tally of cases I–IV.
    pub case_counts: [usize; 4],
    pub accel_hits: usize,
    pub evaluations: usize,
    /// Accepted points failing either Wolfe inequality (only counted with
    /// `check_wolfe`).
    pub wolfe_violations: usize,
    pub trace: Vec<IterationRecord>,
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

struct Evaluator<'a, O: Objective> {
    obj: &'a O,
    evals: usize,
    iter: usize,
}

impl<O: Objective> Evaluator<'_, O> {
    fn eval(&mut self, x: &[f64], g: &mut [f64]) -> f64 {
        self.evals += 1;
        self.obj.value_and_gradient(x, g)
    }

    fn eval_checked(&mut self, x: &[f64], g: &mut [f64]) -> Result<f64> {
        let f = self.eval(x, g);
        if !f.is_finite() {
            return Err(Error::NonFinite {
                what: "objective",
                iter: self.iter,
            });
        }
        if g.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                what: "gradient",
                iter: self.iter,
            });
        }
        Ok(f)
    }
}

/// Minimizes `obj` from `theta0`.
pub fn solve<O: Objective>(obj: &O, theta0: &[f64], cfg: &SolverConfig) -> Result<SolveReport> {
    cfg.validate()?;
    let n = obj.dim();
    if theta0.len() != n {
        return Err(Error::Dimension {
            expected: n,
            got: theta0.len(),
        });
    }
    let mut ev = Evaluator {
        obj,
        evals: 0,
        iter: 0,
    };
    let mut theta = theta0.to_vec();
    let mut g = vec![0.0; n];
    let mut f = ev.eval_checked(&theta, &mut g)?;

    let restart_interval = cfg.restart_interval.unwrap_or(n).max(1);
    let mut reference = NonmonotoneReference::new(f, &cfg.line_search);
    let mut memory: Option<StepMemory> = None;
    let mut g_prev: Option<Vec<f64>> = None;
    let mut case_counts = [0usize; 4];
    let mut accel_hits = 0;
    let mut wolfe_violations = 0;
    let mut trace = Vec::new();
    let mut status = SolveStatus::MaxIters;
    let mut iters = 0;

    let mut trial = vec![0.0; n];
    let mut g_trial = vec![0.0; n];

    loop {
        if inf_norm(&g) <= cfg.epsilon {
            status = SolveStatus::Converged;
            break;
        }
        if iters >= cfg.max_iters {
            break;
        }
        ev.iter = iters;

        let gg = dot(&g, &g);
        let restart = iters % restart_interval == 0
            || g_prev
                .as_ref()
                .is_some_and(|gp| dot(&g, gp).abs() >= cfg.orthogonality_restart * gg);
        let (mut d, mut case) = direction(&g, memory.as_ref(), restart, cfg);
        let r_k = reference.value();

        // Step 3–4: initial step and line search, retrying once along −g.
        let accepted = loop {
            let alpha0 = match case {
                DirectionCase::SteepestDescent => bb_step(memory.as_ref(), &g, cfg),
                _ => 1.0,
            };
            let slope0 = dot(&g, &d);
            let result = line_search(
                |alpha| {
                    for i in 0..n {
                        trial[i] = theta[i] + alpha * d[i];
                    }
                    let fv = ev.eval(&trial, &mut g_trial);
                    (fv, dot(&g_trial, &d))
                },
                f,
                slope0,
                r_k,
                alpha0,
                &cfg.line_search,
            );
            match result {
                Ok(step) => break Some((step, slope0)),
                Err(_) if case != DirectionCase::SteepestDescent => {
                    d = g.iter().map(|x| -x).collect();
                    case = DirectionCase::SteepestDescent;
                }
                Err(_) => break None,
            }
        };
        let Some((step, slope0)) = accepted else {
            status = SolveStatus::LineSearchFailure;
            break;
        };
        case_counts[case.index()] += 1;
        if g_trial.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                what: "gradient",
                iter: iters,
            });
        }

        let mut alpha = step.alpha;
        let mut eta = 1.0;
        let mut f_next = step.value;
        let mut slope_next = step.slope;
        let mut theta_next = trial.clone();
        let mut g_next = g_trial.clone();

        // Step 5: the trial point may already be stationary.
        let trial_converged = inf_norm(&g_next) <= cfg.epsilon;

        // Step 6: acceleration.
        if !trial_converged && cfg.acceleration && step.first_trial {
            if let Some(e) = interpolation_eta(
                f,
                alpha * slope0,
                step.value,
                cfg.eta_clamp.0,
                cfg.eta_clamp.1,
            ) {
                if e != 1.0 {
                    let mut x_acc = vec![0.0; n];
                    for i in 0..n {
                        x_acc[i] = theta[i] + e * alpha * d[i];
                    }
                    let mut g_acc = vec![0.0; n];
                    let f_acc = ev.eval(&x_acc, &mut g_acc);
                    let s_acc = dot(&g_acc, &d);
                    let ok = f_acc.is_finite()
                        && g_acc.iter().all(|v| v.is_finite())
                        && f_acc < step.value
                        && satisfies_wolfe(
                            f_acc,
                            s_acc,
                            e * alpha,
                            r_k,
                            slope0,
                            cfg.line_search.c1,
                            cfg.line_search.c2,
                        );
                    if ok {
                        eta = e;
                        alpha *= e;
                        f_next = f_acc;
                        slope_next = s_acc;
                        theta_next = x_acc;
                        g_next = g_acc;
                        accel_hits += 1;
                    }
                }
            }
        }

        if cfg.check_wolfe
            && !satisfies_wolfe(
                f_next,
                slope_next,
                alpha,
                r_k.max(f),
                slope0,
                cfg.line_search.c1,
                cfg.line_search.c2,
            )
        {
            wolfe_violations += 1;
        }
        if cfg.record_trace {
            trace.push(IterationRecord {
                iter: iters,
                value: f,
                slope: slope0,
                alpha,
                eta,
                case,
                reference: r_k.max(f),
                next_value: f_next,
            });
        }

        // Step 7–8: commit and update memory.
        let s: Vec<f64> = theta_next.iter().zip(&theta).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_next.iter().zip(&g).map(|(a, b)| a - b).collect();
        memory = Some(StepMemory {
            s,
            y,
            f_prev: f,
            f_curr: f_next,
        });
        g_prev = Some(std::mem::replace(&mut g, g_next));
        theta = theta_next;
        f = f_next;
        reference.push(f);
        iters += 1;

        if trial_converged {
            status = SolveStatus::Converged;
            break;
        }
    }

    Ok(SolveReport {
        grad_inf_norm: inf_norm(&g),
        theta_star: theta,
        f_star: f,
        iters,
        status,
        case_counts,
        accel_hits,
        evaluations: ev.evals,
        wolfe_violations,
        trace,
    })
}

/// `sᵀs/sᵀy` clamped, or `1/‖g‖∞` without usable curvature.
fn bb_step(memory: Option<&StepMemory>, g: &[f64], cfg: &SolverConfig) -> f64 {
    let raw = memory
        .map(|m| (dot(&m.s, &m.s), dot(&m.s, &m.y)))
        .filter(|(ss, sy)| *sy > 0.0 && *ss > 0.0)
        .map(|(ss, sy)| ss / sy)
        .unwrap_or_else(|| 1.0 / inf_norm(g).max(f64::MIN_POSITIVE));
    raw.clamp(cfg.bb_clamp.0, cfg.bb_clamp.1)
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Quadratic {
        diag: Vec<f64>,
    }

    impl Objective for Quadratic {
        fn dim(&self) -> usize {
            self.diag.len()
        }

        fn value_and_gradient(&self, x: &[f64], g: &mut [f64]) -> f64 {
            let mut f = 0.0;
            for i in 0..x.len() {
                g[i] = self.diag[i] * x[i];
                f += 0.5 * self.diag[i] * x[i] * x[i];
            }
            f
        }
    }

    struct Rosenbrock;

    impl Objective for Rosenbrock {
        fn dim(&self) -> usize {
            2
        }

        fn value_and_gradient(&self, x: &[f64], g: &mut [f64]) -> f64 {
            let (a, b) = (x[0], x[1]);
            g[0] = -2.0 * (1.0 - a) - 400.0 * a * (b - a * a);
            g[1] = 200.0 * (b - a * a);
            (1.0 - a).powi(2) + 100.0 * (b - a * a).powi(2)
        }
    }

    #[test]
    fn identity_hessian_converges_fast() {
        let q = Quadratic { diag: vec![1.0; 6] };
        let cfg = SolverConfig {
            epsilon: 1e-8,
            ..SolverConfig::default()
        };
        let r = solve(&q, &[3.0, -1.0, 0.5, 7.0, -2.0, 1.0], &cfg).unwrap();
        assert_eq!(r.status, SolveStatus::Converged);
        assert!(r.iters <= 50);
        assert!(inf_norm(&r.theta_star) <= 1e-8);
    }

    #[test]
    fn descent_at_every_iteration_on_diag_quadratic() {
        let q = Quadratic {
            diag: vec![1.0, 10.0],
        };
        let cfg = SolverConfig {
            epsilon: 1e-10,
            record_trace: true,
            check_wolfe: true,
            ..SolverConfig::default()
        };
        for start in [[4.0, -3.0], [-0.3, 9.0]] {
            let r = solve(&q, &start, &cfg).unwrap();
            assert_eq!(r.status, SolveStatus::Converged);
            assert!(!r.trace.is_empty());
            assert!(r.trace.iter().all(|t| t.slope < 0.0));
            assert_eq!(r.wolfe_violations, 0);
        }
    }

    #[test]
    fn rosenbrock_from_standard_start() {
        let cfg = SolverConfig {
            epsilon: 1e-8,
            check_wolfe: true,
            ..SolverConfig::default()
        };
        let r = solve(&Rosenbrock, &[-1.2, 1.0], &cfg).unwrap();
        assert_eq!(r.status, SolveStatus::Converged, "{r:?}");
        assert!((r.theta_star[0] - 1.0).abs() < 1e-5);
        assert!((r.theta_star[1] - 1.0).abs() < 1e-5);
        assert_eq!(r.wolfe_violations, 0);
    }

    #[test]
    fn monotone_mode_without_acceleration_decreases() {
        let cfg = SolverConfig {
            epsilon: 1e-8,
            acceleration: false,
            line_search: LineSearchConfig::monotone(),
            record_trace: true,
            ..SolverConfig::default()
        };
        let r = solve(&Rosenbrock, &[-1.2, 1.0], &cfg).unwrap();
        for t in &r.trace {
            assert!(t.next_value <= t.value + cfg.line_search.c1 * t.alpha * t.slope);
        }
    }

    #[test]
    fn rejects_bad_config_and_dimension() {
        let q = Quadratic { diag: vec![1.0; 2] };
        let mut cfg = SolverConfig::default();
        cfg.line_search.c1 = 0.95;
        assert!(solve(&q, &[1.0, 1.0], &cfg).is_err());
        assert!(matches!(
            solve(&q, &[1.0], &SolverConfig::default()),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn non_finite_objective_aborts() {
        struct Bad;
        impl Objective for Bad {
            fn dim(&self) -> usize {
                1
            }
            fn value_and_gradient(&self, _: &[f64], g: &mut [f64]) -> f64 {
                g[0] = f64::NAN;
                0.0
            }
        }
        assert!(matches!(
            solve(&Bad, &[0.0], &SolverConfig::default()),
            Err(Error::NonFinite {
                what: "gradient",
                iter: 0
            })
        ));
    }
}
