//! Graph, constraint and partition data structures.
//!
//! Vertices are dense 0-based indices everywhere inside the crate; the file
//! formats in [`io`] translate from 1-based labels.

mod hypergraph;
pub mod io;
mod laplacian;

pub use hypergraph::{clique_expansion_terms, expand_hypergraph, Hyperedge, Hypergraph};
pub use laplacian::{build_laplacian, SparseSymmetric};

use crate::error::{invalid, Error, Result};
use serde::{Deserialize, Serialize};

/// Row-major `n x m` matrix of nonnegative integer vertex weights.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexWeights {
    n: usize,
    dims: usize,
    data: Vec<i64>,
}

impl VertexWeights {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        let n = rows.len();
        let dims = rows.first().map_or(1, Vec::len);
        if dims == 0 {
            return Err(invalid("vertex weights need at least one dimension"));
        }
        let mut data = Vec::with_capacity(n * dims);
        for (v, row) in rows.into_iter().enumerate() {
            if row.len() != dims {
                return Err(invalid(format!(
                    "vertex {v} has {} weight dimensions, expected {dims}",
                    row.len()
                )));
            }
            if let Some(w) = row.iter().find(|w| **w < 0) {
                return Err(invalid(format!("vertex {v} has negative weight {w}")));
            }
            data.extend(row);
        }
        Ok(Self { n, dims, data })
    }

    /// Unit weights, one dimension.
    pub fn unit(n: usize) -> Self {
        Self {
            n,
            dims: 1,
            data: vec![1; n],
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn row(&self, v: usize) -> &[i64] {
        &self.data[v * self.dims..(v + 1) * self.dims]
    }

    pub fn total(&self) -> Vec<i64> {
        let mut total = vec![0; self.dims];
        for v in 0..self.n {
            add_assign(&mut total, self.row(v));
        }
        total
    }

    /// Summed weight of the listed vertices.
    pub fn sum_of(&self, vertices: impl IntoIterator<Item = usize>) -> Vec<i64> {
        let mut total = vec![0; self.dims];
        for v in vertices {
            add_assign(&mut total, self.row(v));
        }
        total
    }

    pub fn restrict(&self, vertices: &[usize]) -> Self {
        let mut data = Vec::with_capacity(vertices.len() * self.dims);
        for &v in vertices {
            data.extend_from_slice(self.row(v));
        }
        Self {
            n: vertices.len(),
            dims: self.dims,
            data,
        }
    }
}

pub(crate) fn add_assign(acc: &mut [i64], w: &[i64]) {
    for (a, b) in acc.iter_mut().zip(w) {
        *a += b;
    }
}

pub(crate) fn sub_assign(acc: &mut [i64], w: &[i64]) {
    for (a, b) in acc.iter_mut().zip(w) {
        *a -= b;
    }
}

/// Undirected edge with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

/// Undirected, loop-free graph with nonnegative edge weights and
/// `m`-dimensional integer vertex weights.
///
/// Adjacency is kept in CSR form alongside the canonical edge list.
#[derive(Debug, Clone)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
    vertex_weights: VertexWeights,
    offsets: Vec<usize>,
    adj: Vec<usize>,
    adj_w: Vec<f64>,
}

impl WeightedGraph {
    /// Builds a graph, rejecting self-loops, duplicate pairs, negative or
    /// non-finite weights and out-of-range endpoints.
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize, f64)>,
        vertex_weights: VertexWeights,
    ) -> Result<Self> {
        let mut canon = Vec::new();
        for (a, b, w) in edges {
            canon.push(canonical_edge(n, a, b, w)?);
        }
        canon.sort_by_key(|e| (e.u, e.v));
        if let Some(pair) = canon
            .windows(2)
            .find(|p| (p[0].u, p[0].v) == (p[1].u, p[1].v))
        {
            return Err(invalid(format!(
                "duplicate edge ({}, {})",
                pair[0].u, pair[0].v
            )));
        }
        Self::from_sorted(n, canon, vertex_weights)
    }

    /// Like [`WeightedGraph::new`], but coincident edges are merged by
    /// summing their weights.
    pub fn with_merged_edges(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize, f64)>,
        vertex_weights: VertexWeights,
    ) -> Result<Self> {
        let mut canon = Vec::new();
        for (a, b, w) in edges {
            canon.push(canonical_edge(n, a, b, w)?);
        }
        canon.sort_by_key(|e| (e.u, e.v));
        let mut merged: Vec<Edge> = Vec::with_capacity(canon.len());
        for e in canon {
            match merged.last_mut() {
                Some(last) if (last.u, last.v) == (e.u, e.v) => last.weight += e.weight,
                _ => merged.push(e),
            }
        }
        Self::from_sorted(n, merged, vertex_weights)
    }

    fn from_sorted(n: usize, edges: Vec<Edge>, vertex_weights: VertexWeights) -> Result<Self> {
        if vertex_weights.len() != n {
            return Err(Error::Dimension {
                expected: n,
                got: vertex_weights.len(),
            });
        }
        let mut degree = vec![0usize; n + 1];
        for e in &edges {
            degree[e.u] += 1;
            degree[e.v] += 1;
        }
        let mut offsets = vec![0usize; n + 1];
        for v in 0..n {
            offsets[v + 1] = offsets[v] + degree[v];
        }
        let mut fill = offsets.clone();
        let mut adj = vec![0usize; offsets[n]];
        let mut adj_w = vec![0.0; offsets[n]];
        for e in &edges {
            adj[fill[e.u]] = e.v;
            adj_w[fill[e.u]] = e.weight;
            fill[e.u] += 1;
            adj[fill[e.v]] = e.u;
            adj_w[fill[e.v]] = e.weight;
            fill[e.v] += 1;
        }
        // Edges arrive sorted by (u, v), so each row is already sorted by
        // neighbor except where lower neighbors were appended after higher
        // ones; sort rows to allow binary-search lookups.
        for v in 0..n {
            let (lo, hi) = (offsets[v], offsets[v + 1]);
            let mut row: Vec<(usize, f64)> = adj[lo..hi]
                .iter()
                .copied()
                .zip(adj_w[lo..hi].iter().copied())
                .collect();
            row.sort_by_key(|(u, _)| *u);
            for (k, (u, w)) in row.into_iter().enumerate() {
                adj[lo + k] = u;
                adj_w[lo + k] = w;
            }
        }
        Ok(Self {
            n,
            edges,
            vertex_weights,
            offsets,
            adj,
            adj_w,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Vertex weight dimensionality `m`.
    pub fn dims(&self) -> usize {
        self.vertex_weights.dims()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_weights(&self) -> &VertexWeights {
        &self.vertex_weights
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let (lo, hi) = (self.offsets[v], self.offsets[v + 1]);
        self.adj[lo..hi]
            .iter()
            .copied()
            .zip(self.adj_w[lo..hi].iter().copied())
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Weight of edge `{u, v}`, zero if absent.
    pub fn edge_weight(&self, u: usize, v: usize) -> f64 {
        let (lo, hi) = (self.offsets[u], self.offsets[u + 1]);
        match self.adj[lo..hi].binary_search(&v) {
            Ok(k) => self.adj_w[lo + k],
            Err(_) => 0.0,
        }
    }

    pub fn total_edge_weight(&self) -> f64 {
        self.edges.iter().fold(0.0, |acc, e| acc + e.weight)
    }

    /// Subgraph induced by `vertices` (listed in the order that defines the
    /// new 0-based indices).
    pub fn induced(&self, vertices: &[usize]) -> Self {
        let mut local = vec![usize::MAX; self.n];
        for (k, &v) in vertices.iter().enumerate() {
            local[v] = k;
        }
        let edges: Vec<Edge> = self
            .edges
            .iter()
            .filter(|e| local[e.u] != usize::MAX && local[e.v] != usize::MAX)
            .map(|e| {
                let (a, b) = (local[e.u], local[e.v]);
                Edge {
                    u: a.min(b),
                    v: a.max(b),
                    weight: e.weight,
                }
            })
            .collect();
        let mut edges = edges;
        edges.sort_by_key(|e| (e.u, e.v));
        Self::from_sorted(
            vertices.len(),
            edges,
            self.vertex_weights.restrict(vertices),
        )
        .expect("induced subgraph of a valid graph is valid")
    }
}

fn canonical_edge(n: usize, a: usize, b: usize, w: f64) -> Result<Edge> {
    if a >= n || b >= n {
        return Err(invalid(format!(
            "edge ({a}, {b}) has an endpoint outside 0..{n}"
        )));
    }
    if a == b {
        return Err(invalid(format!("self-loop on vertex {a}")));
    }
    if !(w.is_finite() && w >= 0.0) {
        return Err(invalid(format!("edge ({a}, {b}) has invalid weight {w}")));
    }
    Ok(Edge {
        u: a.min(b),
        v: a.max(b),
        weight: w,
    })
}

/// `k x m` matrix of per-part capacity limits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CapacityBound {
    limits: Vec<Vec<i64>>,
}

impl CapacityBound {
    pub fn new(limits: Vec<Vec<i64>>) -> Result<Self> {
        let dims = limits.first().map(Vec::len).unwrap_or(0);
        if limits.is_empty() || dims == 0 {
            return Err(invalid("capacity bound needs at least one row and column"));
        }
        for row in &limits {
            if row.len() != dims {
                return Err(invalid("capacity rows have different lengths"));
            }
            if row.iter().any(|u| *u < 0) {
                return Err(invalid("capacity limits must be nonnegative"));
            }
        }
        Ok(Self { limits })
    }

    /// `parts` identical rows.
    pub fn uniform(parts: usize, row: Vec<i64>) -> Result<Self> {
        Self::new(vec![row; parts.max(1)])
    }

    pub fn parts(&self) -> usize {
        self.limits.len()
    }

    pub fn dims(&self) -> usize {
        self.limits[0].len()
    }

    pub fn row(&self, k: usize) -> &[i64] {
        &self.limits[k]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.limits
    }

    /// Every limit multiplied by `factor`, rounded up, growing by at least
    /// one unit so zero limits can also be relaxed.
    pub fn augmented(&self, factor: f64) -> Self {
        let limits = self
            .limits
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&u| ((u as f64 * factor).ceil() as i64).max(u + 1))
                    .collect()
            })
            .collect();
        Self { limits }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    First,
    Second,
}

/// Vertices pre-assigned to the first (`f1`) or second (`f2`) part.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedAssignment {
    f1: Vec<usize>,
    f2: Vec<usize>,
}

impl FixedAssignment {
    pub fn new(mut f1: Vec<usize>, mut f2: Vec<usize>, n: usize) -> Result<Self> {
        f1.sort_unstable();
        f1.dedup();
        f2.sort_unstable();
        f2.dedup();
        if let Some(v) = f1.iter().chain(&f2).find(|v| **v >= n) {
            return Err(invalid(format!("fixed vertex {v} out of range 0..{n}")));
        }
        if let Some(v) = f1.iter().find(|v| f2.binary_search(v).is_ok()) {
            return Err(invalid(format!("vertex {v} is fixed to both parts")));
        }
        Ok(Self { f1, f2 })
    }

    pub fn none() -> Self {
        Self::default()
    }

    pub fn f1(&self) -> &[usize] {
        &self.f1
    }

    pub fn f2(&self) -> &[usize] {
        &self.f2
    }

    pub fn is_empty(&self) -> bool {
        self.f1.is_empty() && self.f2.is_empty()
    }

    pub fn len(&self) -> usize {
        self.f1.len() + self.f2.len()
    }

    pub fn side_of(&self, v: usize) -> Option<Side> {
        if self.f1.binary_search(&v).is_ok() {
            Some(Side::First)
        } else if self.f2.binary_search(&v).is_ok() {
            Some(Side::Second)
        } else {
            None
        }
    }

    /// Per-vertex lock mask of length `n`.
    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for &v in self.f1.iter().chain(&self.f2) {
            m[v] = true;
        }
        m
    }
}

/// Cut weight of the split `{i : y1[i]}` vs the rest.
pub fn cut_size(g: &WeightedGraph, y1: &[bool]) -> Result<f64> {
    if y1.len() != g.n() {
        return Err(Error::Dimension {
            expected: g.n(),
            got: y1.len(),
        });
    }
    Ok(g.edges()
        .iter()
        .filter(|e| y1[e.u] != y1[e.v])
        .fold(0.0, |acc, e| acc + e.weight))
}

/// Total weight of edges whose endpoints carry different labels.
pub fn multiway_cut(g: &WeightedGraph, labels: &[usize]) -> f64 {
    g.edges()
        .iter()
        .filter(|e| labels[e.u] != labels[e.v])
        .fold(0.0, |acc, e| acc + e.weight)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Feasibility {
    pub feasible: bool,
    /// `2 x m` usage, row 0 for the first part.
    pub usage: [Vec<i64>; 2],
}

/// Checks `y1ᵀB ≤ U₁` and `y2ᵀB ≤ U₂` for a complementary indicator pair.
pub fn check_feasibility(
    y1: &[bool],
    y2: &[bool],
    b: &VertexWeights,
    u: &CapacityBound,
) -> Result<Feasibility> {
    let n = b.len();
    for y in [y1, y2] {
        if y.len() != n {
            return Err(Error::Dimension {
                expected: n,
                got: y.len(),
            });
        }
    }
    if u.parts() < 2 {
        return Err(invalid("bipartition feasibility needs two capacity rows"));
    }
    if u.dims() != b.dims() {
        return Err(Error::Dimension {
            expected: b.dims(),
            got: u.dims(),
        });
    }
    if let Some(i) = (0..n).find(|&i| y1[i] == y2[i]) {
        return Err(invalid(format!(
            "indicators are not complementary at vertex {i}"
        )));
    }
    let usage = [
        b.sum_of((0..n).filter(|&i| y1[i])),
        b.sum_of((0..n).filter(|&i| y2[i])),
    ];
    let feasible = fits(&usage[0], u.row(0)) && fits(&usage[1], u.row(1));
    Ok(Feasibility { feasible, usage })
}

pub(crate) fn fits(usage: &[i64], limit: &[i64]) -> bool {
    usage.iter().zip(limit).all(|(a, b)| a <= b)
}

/// Σ max(0, usage − limit) over all dimensions.
pub(crate) fn overflow(usage: &[i64], limit: &[i64]) -> i64 {
    usage.iter().zip(limit).map(|(a, b)| (a - b).max(0)).sum()
}

/// A complementary pair `(y1, y2)` with its cut and capacity status.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bipartition {
    in_first: Vec<bool>,
    pub cut: f64,
    pub feasible: bool,
    pub usage: [Vec<i64>; 2],
}

impl Bipartition {
    /// Evaluates cut and feasibility from scratch.
    pub fn evaluate(g: &WeightedGraph, in_first: Vec<bool>, u: &CapacityBound) -> Result<Self> {
        let y2: Vec<bool> = in_first.iter().map(|b| !b).collect();
        let cut = cut_size(g, &in_first)?;
        let f = check_feasibility(&in_first, &y2, g.vertex_weights(), u)?;
        Ok(Self {
            in_first,
            cut,
            feasible: f.feasible,
            usage: f.usage,
        })
    }

    pub fn in_first(&self) -> &[bool] {
        &self.in_first
    }

    pub fn y1(&self) -> Vec<u8> {
        self.in_first.iter().map(|&b| b as u8).collect()
    }

    pub fn y2(&self) -> Vec<u8> {
        self.in_first.iter().map(|&b| (!b) as u8).collect()
    }

    pub fn part(&self, side: Side) -> Vec<usize> {
        let want = side == Side::First;
        (0..self.in_first.len())
            .filter(|&i| self.in_first[i] == want)
            .collect()
    }
}
