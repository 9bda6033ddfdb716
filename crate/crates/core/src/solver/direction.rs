//! Search directions in `span{gₖ, sₖ₋₁}` and the acceleration factor.
//!
//! The 2-D model minimized over `d = u·g + v·s` is
//!
//! ```text
//! [‖g‖², gᵀs]·[u, v]ᵀ + ½[u, v] [[ρₖ, gᵀy], [gᵀy, sᵀy]] [u, v]ᵀ
//! ```

use serde::{Deserialize, Serialize};

use super::SolverConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DirectionCase {
    /// Case I: `u = 0`, `v = −gᵀs/sᵀy`.
    AlongStep,
    /// Case II: `ρₖ = (3/2)(‖y‖²/sᵀy)‖g‖²`.
    BbSubspace,
    /// Case III: `ρₖ = ‖g‖² + (gᵀy)²/sᵀy`.
    RegularizedSubspace,
    /// Case IV: `d = −g`.
    SteepestDescent,
}

impl DirectionCase {
    pub fn index(self) -> usize {
        match self {
            DirectionCase::AlongStep => 0,
            DirectionCase::BbSubspace => 1,
            DirectionCase::RegularizedSubspace => 2,
            DirectionCase::SteepestDescent => 3,
        }
    }
}

/// Previous step and gradient change, plus the two most recent objective
/// values.
#[derive(Debug, Clone)]
pub struct StepMemory {
    pub s: Vec<f64>,
    pub y: Vec<f64>,
    pub f_prev: f64,
    pub f_curr: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Chooses a case and returns the direction. `memory = None` or
/// `restart = true` forces steepest descent.
pub fn direction(
    g: &[f64],
    memory: Option<&StepMemory>,
    restart: bool,
    cfg: &SolverConfig,
) -> (Vec<f64>, DirectionCase) {
    let steepest = || {
        (
            g.iter().map(|x| -x).collect(),
            DirectionCase::SteepestDescent,
        )
    };
    let mem = match memory {
        Some(m) if !restart => m,
        _ => return steepest(),
    };
    let (s, y) = (&mem.s, &mem.y);
    let gg = dot(g, g);
    let sy = dot(s, y);
    let (ns, ny) = (dot(s, s).sqrt(), dot(y, y).sqrt());
    if !(sy >= cfg.curvature_floor * ns * ny) || sy <= 0.0 {
        return steepest();
    }
    let gy = dot(g, y);
    let gs = dot(g, s);
    let gnorm = gg.sqrt();

    let (u, v, case) = if gy.abs() <= cfg.conjugacy_tol * gnorm * ny {
        (0.0, -gs / sy, DirectionCase::AlongStep)
    } else {
        let rho_ii = 1.5 * (ny * ny / sy) * gg;
        let delta = rho_ii * sy - gy * gy;
        let fit = (2.0 * (mem.f_prev - mem.f_curr + gs) / sy - 1.0).abs();
        if delta > cfg.delta_floor * rho_ii * sy && fit <= cfg.quadratic_fit_tol {
            (
                (gy * gs - sy * gg) / delta,
                (gy * gg - rho_ii * gs) / delta,
                DirectionCase::BbSubspace,
            )
        } else {
            let ratio = gy * gs / (sy * gg);
            (
                -1.0 + ratio,
                (1.0 - ratio) * gy / sy - gs / sy,
                DirectionCase::RegularizedSubspace,
            )
        }
    };

    let d: Vec<f64> = g.iter().zip(s).map(|(gi, si)| u * gi + v * si).collect();
    let gd = dot(g, &d);
    let dnorm = dot(&d, &d).sqrt();
    let finite = d.iter().all(|x| x.is_finite());
    if !finite || dnorm == 0.0 || !(-gd >= cfg.descent_floor * gnorm * dnorm) {
        return steepest();
    }
    (d, case)
}

/// Minimizer of the quadratic through `φ(0)`, `φ'(0)` and `φ(1)`, clamped to
/// `[eta_min, eta_max]`. `None` when the interpolant has no positive
/// curvature (the caller keeps `η = 1`).
pub fn interpolation_eta(
    phi0: f64,
    dphi0: f64,
    phi1: f64,
    eta_min: f64,
    eta_max: f64,
) -> Option<f64> {
    let curvature = phi1 - phi0 - dphi0;
    if !(curvature.is_finite() && dphi0.is_finite()) || curvature <= 0.0 {
        return None;
    }
    let eta = -dphi0 / (2.0 * curvature);
    eta.is_finite().then(|| eta.clamp(eta_min, eta_max))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SolverConfig {
        SolverConfig::default()
    }

    #[test]
    fn first_iteration_is_steepest_descent() {
        let (d, case) = direction(&[1.0, -2.0], None, false, &cfg());
        assert_eq!(case, DirectionCase::SteepestDescent);
        assert_eq!(d, vec![-1.0, 2.0]);
    }

    #[test]
    fn zero_case_one_direction_falls_back() {
        // g ⟂ y selects Case I, but g ⟂ s makes its direction zero.
        let mem = StepMemory {
            s: vec![0.0, 1.0],
            y: vec![0.0, 2.0],
            f_prev: 1.0,
            f_curr: 0.0,
        };
        let (d, case) = direction(&[1.0, 0.0], Some(&mem), false, &cfg());
        assert_eq!(case, DirectionCase::SteepestDescent);
        assert_eq!(d, vec![-1.0, 0.0]);
    }

    #[test]
    fn case_one_direction_is_along_step() {
        let mem = StepMemory {
            s: vec![1.0, 1.0],
            y: vec![0.0, 2.0],
            f_prev: 1.0,
            f_curr: 0.0,
        };
        let (d, case) = direction(&[1.0, 0.0], Some(&mem), false, &cfg());
        assert_eq!(case, DirectionCase::AlongStep);
        assert_eq!(d, vec![-0.5, -0.5]);
    }

    #[test]
    fn negative_curvature_pair_forces_restart() {
        let mem = StepMemory {
            s: vec![1.0, 0.0],
            y: vec![-1.0, 0.5],
            f_prev: 1.0,
            f_curr: 0.0,
        };
        let (_, case) = direction(&[1.0, 1.0], Some(&mem), false, &cfg());
        assert_eq!(case, DirectionCase::SteepestDescent);
    }

    #[test]
    fn quadratic_memory_selects_case_two_and_matches_formula() {
        // f = ½xᵀDx, D = diag(1, 10): y = Ds, and the fit measure is exact.
        let d_diag = [1.0, 10.0];
        let x_prev = [1.0, 1.0];
        let x = [0.6, -0.2];
        let f = |x: &[f64]| 0.5 * (d_diag[0] * x[0] * x[0] + d_diag[1] * x[1] * x[1]);
        let g: Vec<f64> = (0..2).map(|i| d_diag[i] * x[i]).collect();
        let s: Vec<f64> = (0..2).map(|i| x[i] - x_prev[i]).collect();
        let y: Vec<f64> = (0..2).map(|i| d_diag[i] * s[i]).collect();
        let mem = StepMemory {
            s: s.clone(),
            y: y.clone(),
            f_prev: f(&x_prev),
            f_curr: f(&x),
        };
        let (d, case) = direction(&g, Some(&mem), false, &cfg());
        assert_eq!(case, DirectionCase::BbSubspace);
        let (gg, gy, gs, sy, yy) = (
            dot(&g, &g),
            dot(&g, &y),
            dot(&g, &s),
            dot(&s, &y),
            dot(&y, &y),
        );
        let rho = 1.5 * yy / sy * gg;
        let delta = rho * sy - gy * gy;
        let u = (gy * gs - sy * gg) / delta;
        let v = (gy * gg - rho * gs) / delta;
        for i in 0..2 {
            assert!((d[i] - (u * g[i] + v * s[i])).abs() < 1e-12);
        }
        assert!(dot(&g, &d) < 0.0);
    }

    #[test]
    fn poor_quadratic_fit_selects_case_three() {
        let mem = StepMemory {
            s: vec![1.0, 0.5],
            y: vec![2.0, 0.1],
            f_prev: 100.0,
            f_curr: 0.0,
        };
        let g = [1.0, 2.0];
        let (d, case) = direction(&g, Some(&mem), false, &cfg());
        assert_eq!(case, DirectionCase::RegularizedSubspace);
        assert!(dot(&g, &d) < 0.0);
    }

    #[test]
    fn restart_flag_overrides_memory() {
        let mem = StepMemory {
            s: vec![1.0, 1.0],
            y: vec![0.0, 2.0],
            f_prev: 1.0,
            f_curr: 0.0,
        };
        let (_, case) = direction(&[1.0, 0.0], Some(&mem), true, &cfg());
        assert_eq!(case, DirectionCase::SteepestDescent);
    }

    #[test]
    fn eta_from_quadratic_with_half_minimizer() {
        // φ(t) = (t − 0.5)²: φ(0) = 0.25, φ'(0) = −1, φ(1) = 0.25
        assert_eq!(interpolation_eta(0.25, -1.0, 0.25, 0.1, 10.0), Some(0.5));
    }

    #[test]
    fn eta_falls_back_without_curvature() {
        // linear φ
        assert_eq!(interpolation_eta(1.0, -1.0, 0.0, 0.1, 10.0), None);
        // φ(1) below the tangent line
        assert_eq!(interpolation_eta(1.0, -1.0, -0.5, 0.1, 10.0), None);
        assert_eq!(interpolation_eta(1.0, -1.0, f64::NAN, 0.1, 10.0), None);
    }

    #[test]
    fn eta_is_clamped() {
        assert_eq!(interpolation_eta(0.0, -1.0, -0.999, 0.1, 10.0), Some(10.0));
    }
}
