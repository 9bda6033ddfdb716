//! Default solver thresholds. Kept in one place so runs are reproducible.

/// `‖g‖∞` stopping tolerance used by the partitioning pipeline.
pub const EPSILON: f64 = 1e-5;
pub const MAX_ITERS: usize = 10_000;

/// Sufficient-decrease constant.
pub const WOLFE_C1: f64 = 1e-4;
/// Curvature constant.
pub const WOLFE_C2: f64 = 0.9;
/// Zhang–Hager averaging decay for the nonmonotone reference value.
pub const REFERENCE_DECAY: f64 = 0.85;
/// Window of recent objective values capping the reference value.
pub const REFERENCE_MEMORY: usize = 8;
pub const LINE_SEARCH_MAX_EVALS: usize = 60;
pub const LINE_SEARCH_MAX_STEP: f64 = 1e10;

/// Cases I–III need `sᵀy ≥ CURVATURE_FLOOR·‖s‖‖y‖`.
pub const CURVATURE_FLOOR: f64 = 1e-10;
/// Case I when `|gᵀy| ≤ CONJUGACY_TOL·‖g‖‖y‖`.
pub const CONJUGACY_TOL: f64 = 1e-4;
/// Case II needs `Δ > DELTA_FLOOR·ρ·sᵀy`.
pub const DELTA_FLOOR: f64 = 1e-10;
/// Case II also needs the objective to look quadratic along `s`:
/// `|2(f_{k−1} − f_k + gᵀs)/sᵀy − 1| ≤ QUADRATIC_FIT_TOL`.
pub const QUADRATIC_FIT_TOL: f64 = 0.1;
/// Subspace directions must satisfy `−gᵀd ≥ DESCENT_FLOOR·‖g‖‖d‖`.
pub const DESCENT_FLOOR: f64 = 1e-10;

/// Clamp for the Barzilai–Borwein initial step of steepest-descent
/// iterations.
pub const BB_MIN: f64 = 1e-5;
pub const BB_MAX: f64 = 1e5;

/// Restart to steepest descent when `|gₖᵀgₖ₋₁| ≥ ORTHOGONALITY_RESTART·‖gₖ‖²`.
pub const ORTHOGONALITY_RESTART: f64 = 0.2;

/// Clamp for the quadratic-interpolation acceleration factor.
pub const ETA_MIN: f64 = 0.1;
pub const ETA_MAX: f64 = 10.0;
