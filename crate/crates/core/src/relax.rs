//! Fixed-vertex elimination, balance penalty and the trigonometric
//! relaxation of the bipartition model.
//!
//! With `y1 = cos θ` and `y2 = sin θ` over the free vertices, the relaxed
//! objective is
//!
//! ```text
//! f(θ) = ½(cosᵀĀcos + 2b̄₁ᵀcos + c̄₁) + ½(sinᵀĀsin + 2b̄₂ᵀsin + c̄₂)
//! Ā = A + ρeeᵀ,  b̄ₖ = bₖ + ρ|Fₖ|e,  c̄ₖ = cₖ + ρ|Fₖ|²
//! ```
//!
//! where `A` is the free block of the Laplacian and `bₖ`, `cₖ` collect the
//! couplings to the vertices fixed in part `k`. `Ā` is never densified.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{FixedAssignment, Side, SparseSymmetric};
use crate::solver::Objective;

/// Default equilibrium factor.
pub const DEFAULT_RHO: f64 = 5.0;

/// Which balance term is added to the cut objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum BalanceTerm {
    /// `ρ((eᵀy₁)² + (eᵀy₂)²)`
    #[default]
    SumOfSquares,
    /// `ρ(eᵀy₁ − eᵀy₂)²`
    Difference,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelOptions {
    pub rho: f64,
    pub balance: BalanceTerm,
}

impl Default for ModelOptions {
    fn default() -> Self {
        Self {
            rho: DEFAULT_RHO,
            balance: BalanceTerm::SumOfSquares,
        }
    }
}

/// Eliminated and penalized quadratic data defining the relaxed objective.
#[derive(Debug, Clone)]
pub struct ReducedQuadratic {
    a: SparseSymmetric,
    rho: f64,
    balance: BalanceTerm,
    b1_bar: Vec<f64>,
    b2_bar: Vec<f64>,
    c1_bar: f64,
    c2_bar: f64,
    fixed_first: usize,
    fixed_second: usize,
    free_vertices: Vec<usize>,
    fixed: FixedAssignment,
    n: usize,
}

/// Builds `(Ā, b̄₁, b̄₂, c̄₁, c̄₂)` with the sum-of-squares balance term.
pub fn eliminate_and_penalize(
    l: &SparseSymmetric,
    fixed: &FixedAssignment,
    rho: f64,
) -> Result<ReducedQuadratic> {
    eliminate_with(
        l,
        fixed,
        ModelOptions {
            rho,
            balance: BalanceTerm::SumOfSquares,
        },
    )
}

pub fn eliminate_with(
    l: &SparseSymmetric,
    fixed: &FixedAssignment,
    opts: ModelOptions,
) -> Result<ReducedQuadratic> {
    let n = l.n();
    if !(opts.rho.is_finite() && opts.rho >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "equilibrium factor must be finite and nonnegative, got {}",
            opts.rho
        )));
    }
    // revalidate against this matrix size
    let fixed = FixedAssignment::new(fixed.f1().to_vec(), fixed.f2().to_vec(), n)?;
    let mut side = vec![None; n];
    for &v in fixed.f1() {
        side[v] = Some(Side::First);
    }
    for &v in fixed.f2() {
        side[v] = Some(Side::Second);
    }
    let free_vertices: Vec<usize> = (0..n).filter(|&v| side[v].is_none()).collect();
    let a = l.principal(&free_vertices);

    let (f1, f2) = (fixed.f1().len() as f64, fixed.f2().len() as f64);
    let mut b1_bar = Vec::with_capacity(free_vertices.len());
    let mut b2_bar = Vec::with_capacity(free_vertices.len());
    for &i in &free_vertices {
        let (mut b1, mut b2) = (0.0, 0.0);
        for (j, v) in l.row(i) {
            match side[j] {
                Some(Side::First) => b1 += v,
                Some(Side::Second) => b2 += v,
                None => {}
            }
        }
        b1_bar.push(b1 + opts.rho * f1);
        b2_bar.push(b2 + opts.rho * f2);
    }
    let block_sum = |set: &[usize], target: Side| -> f64 {
        set.iter()
            .flat_map(|&i| l.row(i))
            .filter(|(j, _)| side[*j] == Some(target))
            .map(|(_, v)| v)
            .sum()
    };
    let c1 = block_sum(fixed.f1(), Side::First);
    let c2 = block_sum(fixed.f2(), Side::Second);

    Ok(ReducedQuadratic {
        a,
        rho: opts.rho,
        balance: opts.balance,
        b1_bar,
        b2_bar,
        c1_bar: c1 + opts.rho * f1 * f1,
        c2_bar: c2 + opts.rho * f2 * f2,
        fixed_first: fixed.f1().len(),
        fixed_second: fixed.f2().len(),
        free_vertices,
        fixed,
        n,
    })
}

impl ReducedQuadratic {
    /// Number of free variables `n̄`.
    pub fn dim(&self) -> usize {
        self.free_vertices.len()
    }

    /// Vertex count of the original graph.
    pub fn full_len(&self) -> usize {
        self.n
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn balance(&self) -> BalanceTerm {
        self.balance
    }

    /// Free block `A` of the Laplacian, without the rank-one term.
    pub fn base(&self) -> &SparseSymmetric {
        &self.a
    }

    pub fn b1_bar(&self) -> &[f64] {
        &self.b1_bar
    }

    pub fn b2_bar(&self) -> &[f64] {
        &self.b2_bar
    }

    pub fn c1_bar(&self) -> f64 {
        self.c1_bar
    }

    pub fn c2_bar(&self) -> f64 {
        self.c2_bar
    }

    /// Reduced index → original vertex.
    pub fn free_vertices(&self) -> &[usize] {
        &self.free_vertices
    }

    pub fn fixed(&self) -> &FixedAssignment {
        &self.fixed
    }

    /// `out = Āx = Ax + ρ(eᵀx)e`.
    pub fn apply_a_bar(&self, x: &[f64], out: &mut [f64]) {
        self.a.apply(x, out);
        let shift = self.rho * x.iter().sum::<f64>();
        for o in out.iter_mut() {
            *o += shift;
        }
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                got: len,
            });
        }
        Ok(())
    }

    /// Shared evaluation for arbitrary `(y1, y2)` vectors.
    fn value_at(&self, y1: &[f64], y2: &[f64]) -> f64 {
        let s1: f64 = y1.iter().sum();
        let s2: f64 = y2.iter().sum();
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        let part1 =
            self.a.quad_form(y1) + self.rho * s1 * s1 + 2.0 * dot(&self.b1_bar, y1) + self.c1_bar;
        let part2 =
            self.a.quad_form(y2) + self.rho * s2 * s2 + 2.0 * dot(&self.b2_bar, y2) + self.c2_bar;
        let mut f = 0.5 * (part1 + part2);
        if self.balance == BalanceTerm::Difference {
            f -= self.rho * (self.fixed_first as f64 + s1) * (self.fixed_second as f64 + s2);
        }
        f
    }

    /// Relaxed objective at `theta`.
    pub fn objective(&self, theta: &[f64]) -> Result<f64> {
        self.check_dim(theta.len())?;
        let c: Vec<f64> = theta.iter().map(|t| t.cos()).collect();
        let s: Vec<f64> = theta.iter().map(|t| t.sin()).collect();
        Ok(self.value_at(&c, &s))
    }

    /// Analytic gradient:
    /// `gᵢ = −sin θᵢ (Ā cos θ + b̄₁)ᵢ + cos θᵢ (Ā sin θ + b̄₂)ᵢ`.
    pub fn gradient(&self, theta: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(theta.len())?;
        let mut g = vec![0.0; theta.len()];
        self.value_and_gradient(theta, &mut g);
        Ok(g)
    }

    /// Objective at the binary point `y1 = indicator`, `y2 = 1 − y1`
    /// (reduced coordinates).
    pub fn binary_value(&self, y1_bar: &[bool]) -> Result<f64> {
        self.check_dim(y1_bar.len())?;
        let y1: Vec<f64> = y1_bar.iter().map(|&b| b as u8 as f64).collect();
        let y2: Vec<f64> = y1_bar.iter().map(|&b| (!b) as u8 as f64).collect();
        Ok(self.value_at(&y1, &y2))
    }

    /// Angle vector encoding a binary point: 0 for the first part, π/2 for
    /// the second.
    pub fn angles_for(&self, y1_bar: &[bool]) -> Vec<f64> {
        y1_bar
            .iter()
            .map(|&b| if b { 0.0 } else { std::f64::consts::FRAC_PI_2 })
            .collect()
    }

    /// Reinserts fixed vertices into a full-length indicator (`true` = first
    /// part).
    pub fn to_full(&self, y1_bar: &[bool]) -> Vec<bool> {
        let mut full = vec![false; self.n];
        for &v in self.fixed.f1() {
            full[v] = true;
        }
        for (k, &v) in self.free_vertices.iter().enumerate() {
            full[v] = y1_bar[k];
        }
        full
    }

    /// Restricts a full-length indicator to the free vertices.
    pub fn to_reduced(&self, full: &[bool]) -> Vec<bool> {
        self.free_vertices.iter().map(|&v| full[v]).collect()
    }

    /// Evaluates the reduced objective at the `{0, π/2}` angles matching a
    /// binary point. Equals the penalized full-graph objective of the
    /// reassembled assignment.
    pub fn binary_roundtrip(&self, y1_bar: &[bool]) -> Result<f64> {
        self.objective(&self.angles_for(y1_bar))
    }
}

impl Objective for ReducedQuadratic {
    fn dim(&self) -> usize {
        self.free_vertices.len()
    }

    fn value_and_gradient(&self, theta: &[f64], grad: &mut [f64]) -> f64 {
        let n = theta.len();
        let c: Vec<f64> = theta.iter().map(|t| t.cos()).collect();
        let s: Vec<f64> = theta.iter().map(|t| t.sin()).collect();
        let mut ac = vec![0.0; n];
        let mut as_ = vec![0.0; n];
        self.apply_a_bar(&c, &mut ac);
        self.apply_a_bar(&s, &mut as_);
        let mut f = self.c1_bar + self.c2_bar;
        for i in 0..n {
            f += c[i] * ac[i] + 2.0 * self.b1_bar[i] * c[i];
            f += s[i] * as_[i] + 2.0 * self.b2_bar[i] * s[i];
            grad[i] = -s[i] * (ac[i] + self.b1_bar[i]) + c[i] * (as_[i] + self.b2_bar[i]);
        }
        f *= 0.5;
        if self.balance == BalanceTerm::Difference {
            let t1 = self.fixed_first as f64 + c.iter().sum::<f64>();
            let t2 = self.fixed_second as f64 + s.iter().sum::<f64>();
            f -= self.rho * t1 * t2;
            for i in 0..n {
                grad[i] += self.rho * (t2 * s[i] - t1 * c[i]);
            }
        }
        f
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_laplacian, VertexWeights, WeightedGraph};
    use std::f64::consts::FRAC_PI_2;

    fn lap(n: usize, edges: &[(usize, usize, f64)]) -> SparseSymmetric {
        build_laplacian(
            &WeightedGraph::new(n, edges.iter().copied(), VertexWeights::unit(n)).unwrap(),
        )
    }

    #[test]
    fn no_fixed_no_penalty_is_identity() {
        let l = lap(3, &[(0, 1, 2.0), (1, 2, 5.0)]);
        let q = eliminate_and_penalize(&l, &FixedAssignment::none(), 0.0).unwrap();
        assert_eq!(q.base().to_dense(), l.to_dense());
        assert_eq!(q.b1_bar(), &[0.0; 3]);
        assert_eq!(q.b2_bar(), &[0.0; 3]);
        assert_eq!((q.c1_bar(), q.c2_bar()), (0.0, 0.0));
    }

    #[test]
    fn path_elimination() {
        let l = lap(3, &[(0, 1, 1.0), (1, 2, 1.0)]);
        let fixed = FixedAssignment::new(vec![0], vec![2], 3).unwrap();
        let q = eliminate_and_penalize(&l, &fixed, 0.0).unwrap();
        assert_eq!(q.base().to_dense(), vec![vec![2.0]]);
        assert_eq!(q.b1_bar(), &[-1.0]);
        assert_eq!(q.b2_bar(), &[-1.0]);
        assert_eq!((q.c1_bar(), q.c2_bar()), (1.0, 1.0));
        assert_eq!(q.free_vertices(), &[1]);
    }

    #[test]
    fn penalty_is_rank_one_shift() {
        let l = lap(4, &[(0, 1, 1.0), (1, 2, 3.0), (2, 3, 2.0)]);
        let q = eliminate_and_penalize(&l, &FixedAssignment::none(), 5.0).unwrap();
        let dense = l.to_dense();
        let x = [0.3, -1.2, 2.0, 0.7];
        let mut got = [0.0; 4];
        q.apply_a_bar(&x, &mut got);
        for i in 0..4 {
            let want: f64 = (0..4).map(|j| (dense[i][j] + 5.0) * x[j]).sum();
            assert!((got[i] - want).abs() < 1e-12);
        }
        assert_eq!(q.b1_bar(), &[0.0; 4]);
        assert_eq!((q.c1_bar(), q.c2_bar()), (0.0, 0.0));
    }

    #[test]
    fn objective_examples() {
        let l = lap(2, &[(0, 1, 1.0)]);
        let q = eliminate_and_penalize(&l, &FixedAssignment::none(), 0.0).unwrap();
        assert!((q.objective(&[0.0, FRAC_PI_2]).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(q.objective(&[0.0, 0.0]).unwrap(), 0.0);

        let empty = lap(2, &[]);
        let q = eliminate_and_penalize(&empty, &FixedAssignment::none(), 1.0).unwrap();
        assert!((q.objective(&[0.0, 0.0]).unwrap() - 2.0).abs() < 1e-12);
        assert!(matches!(q.objective(&[0.0]), Err(Error::Dimension { .. })));
    }

    #[test]
    fn gradient_zero_at_origin() {
        let l = lap(3, &[(0, 1, 1.0), (1, 2, 4.0)]);
        let q = eliminate_and_penalize(&l, &FixedAssignment::none(), 5.0).unwrap();
        assert_eq!(q.gradient(&[0.0; 3]).unwrap(), vec![0.0; 3]);
    }

    #[test]
    fn one_dimensional_gradient_reduces_symbolically() {
        // n̄ = 1 with Ā=[a], b̄₁=[b], b̄₂=[c]: g(θ) = −b sinθ + c cosθ.
        // Build P3 with ends fixed so the middle vertex is the only variable.
        let l = lap(3, &[(0, 1, 2.0), (1, 2, 3.0)]);
        let fixed = FixedAssignment::new(vec![0], vec![2], 3).unwrap();
        for rho in [0.0, 1.5] {
            let q = eliminate_and_penalize(&l, &fixed, rho).unwrap();
            let (b, c) = (q.b1_bar()[0], q.b2_bar()[0]);
            for th in [-2.0, 0.1, 0.7, 3.0] {
                let g = q.gradient(&[th]).unwrap()[0];
                assert!((g - (-b * th.sin() + c * th.cos())).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn difference_balance_gradient_matches_value() {
        let l = lap(4, &[(0, 1, 1.0), (1, 2, 3.0), (2, 3, 2.0), (0, 3, 0.5)]);
        let fixed = FixedAssignment::new(vec![0], vec![], 4).unwrap();
        let q = eliminate_with(
            &l,
            &fixed,
            ModelOptions {
                rho: 2.0,
                balance: BalanceTerm::Difference,
            },
        )
        .unwrap();
        let th = [0.4, -1.1, 2.3];
        let g = q.gradient(&th).unwrap();
        let h = 1e-6;
        for i in 0..3 {
            let mut p = th;
            let mut m = th;
            p[i] += h;
            m[i] -= h;
            let fd = (q.objective(&p).unwrap() - q.objective(&m).unwrap()) / (2.0 * h);
            assert!((fd - g[i]).abs() <= 1e-5 * (1.0 + g[i].abs()));
        }
        // binary value: ½ρ(eᵀy₁ − eᵀy₂)² plus cut
        let v = q.binary_value(&[true, false, false]).unwrap();
        // y1 = {0,1}, y2 = {2,3}: cut = 3 + 0.5, balance = ½·2·0 = 0
        assert!((v - 3.5).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_rho_and_fixed() {
        let l = lap(2, &[(0, 1, 1.0)]);
        assert!(eliminate_and_penalize(&l, &FixedAssignment::none(), -1.0).is_err());
        let bad = FixedAssignment::new(vec![5], vec![], 10).unwrap();
        assert!(eliminate_and_penalize(&l, &bad, 1.0).is_err());
    }
}
