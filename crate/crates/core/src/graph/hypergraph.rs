use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use super::{VertexWeights, WeightedGraph};
use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hyperedge {
    pub pins: Vec<usize>,
    pub weight: i64,
}

/// Hypergraph with integer net weights.
#[derive(Debug, Clone)]
pub struct Hypergraph {
    n: usize,
    hyperedges: Vec<Hyperedge>,
    vertex_weights: VertexWeights,
}

impl Hypergraph {
    /// Pins are deduplicated; every net must keep at least two pins.
    pub fn new(
        n: usize,
        hyperedges: Vec<Hyperedge>,
        vertex_weights: VertexWeights,
    ) -> Result<Self> {
        if vertex_weights.len() != n {
            return Err(Error::Dimension {
                expected: n,
                got: vertex_weights.len(),
            });
        }
        let mut clean = Vec::with_capacity(hyperedges.len());
        for (k, mut e) in hyperedges.into_iter().enumerate() {
            e.pins.sort_unstable();
            e.pins.dedup();
            if e.pins.len() < 2 {
                return Err(invalid(format!("hyperedge {k} has fewer than two pins")));
            }
            if e.weight < 0 {
                return Err(invalid(format!("hyperedge {k} has negative weight")));
            }
            if let Some(v) = e.pins.iter().find(|v| **v >= n) {
                return Err(invalid(format!(
                    "hyperedge {k} pin {v} out of range 0..{n}"
                )));
            }
            clean.push(e);
        }
        Ok(Self {
            n,
            hyperedges: clean,
            vertex_weights,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn hyperedges(&self) -> &[Hyperedge] {
        &self.hyperedges
    }

    pub fn vertex_weights(&self) -> &VertexWeights {
        &self.vertex_weights
    }

    /// Total weight of nets spanning more than one label.
    pub fn connectivity_cut(&self, labels: &[usize]) -> i64 {
        self.hyperedges
            .iter()
            .filter(|e| e.pins.iter().any(|&v| labels[v] != labels[e.pins[0]]))
            .map(|e| e.weight)
            .sum()
    }
}

/// Clique-expansion edges in exact arithmetic: `(net index, u, v, W/(|E|−1))`.
pub fn clique_expansion_terms(
    h: &Hypergraph,
) -> impl Iterator<Item = (usize, usize, usize, Rational64)> + '_ {
    h.hyperedges.iter().enumerate().flat_map(|(k, e)| {
        let w = Rational64::new(e.weight, e.pins.len() as i64 - 1);
        e.pins
            .iter()
            .enumerate()
            .flat_map(move |(a, &u)| e.pins[a + 1..].iter().map(move |&v| (k, u, v, w)))
    })
}

/// Replaces each net by a clique whose edges weigh `W/(|E|−1)`; coincident
/// edges from different nets are summed.
pub fn expand_hypergraph(h: &Hypergraph) -> Result<WeightedGraph> {
    let edges = h.hyperedges.iter().flat_map(|e| {
        let w = e.weight as f64 / (e.pins.len() - 1) as f64;
        e.pins
            .iter()
            .enumerate()
            .flat_map(move |(a, &u)| e.pins[a + 1..].iter().map(move |&v| (u, v, w)))
    });
    WeightedGraph::with_merged_edges(h.n, edges, h.vertex_weights.clone())
}
