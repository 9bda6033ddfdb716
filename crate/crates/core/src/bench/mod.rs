//! Random GPKC instances, an exhaustive oracle for small graphs, and an
//! experiment runner producing per-run and per-instance CSV tables.

mod experiment;
mod oracle;

pub use experiment::{
    gap_column, gap_percent, run_experiment, summarize, write_runs_csv, write_summary_csv,
    ExperimentRow, RunRecord, RunStatus, SummaryRow,
};
pub use oracle::{brute_force_optimum, OracleSolution, ORACLE_LIMIT};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::graph::{CapacityBound, VertexWeights, WeightedGraph};

/// Random graph with independent edges, integer edge and vertex weights,
/// one weight dimension, and the same capacity for both parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GpkcRecipe {
    pub n: usize,
    pub edge_prob: f64,
    /// Inclusive integer range.
    pub edge_weight_range: (i64, i64),
    /// Inclusive integer range.
    pub vertex_weight_range: (i64, i64),
    pub capacity: i64,
    pub seed: u64,
}

impl GpkcRecipe {
    /// Edge weights in `1..=100`, vertex weights in `1..=1000`.
    pub fn new(n: usize, edge_prob: f64, capacity: i64, seed: u64) -> Self {
        Self {
            n,
            edge_prob,
            edge_weight_range: (1, 100),
            vertex_weight_range: (1, 1000),
            capacity,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.edge_prob > 0.0 && self.edge_prob <= 1.0) {
            return Err(invalid(format!(
                "edge probability {} not in (0, 1]",
                self.edge_prob
            )));
        }
        let (a, b) = self.edge_weight_range;
        let (c, d) = self.vertex_weight_range;
        if a > b || c > d || a < 0 || c < 0 {
            return Err(invalid("weight ranges must be nonempty and nonnegative"));
        }
        if self.capacity < 0 {
            return Err(invalid("capacity must be nonnegative"));
        }
        Ok(())
    }
}

/// Draws vertex weights, then each pair `i < j` in lexicographic order.
pub fn generate_gpkc(recipe: &GpkcRecipe) -> Result<(WeightedGraph, CapacityBound)> {
    recipe.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(recipe.seed);
    let (vlo, vhi) = recipe.vertex_weight_range;
    let rows: Vec<Vec<i64>> = (0..recipe.n)
        .map(|_| vec![rng.gen_range(vlo..=vhi)])
        .collect();
    let (elo, ehi) = recipe.edge_weight_range;
    let mut edges = Vec::new();
    for i in 0..recipe.n {
        for j in i + 1..recipe.n {
            if rng.gen_bool(recipe.edge_prob) {
                edges.push((i, j, rng.gen_range(elo..=ehi) as f64));
            }
        }
    }
    let g = WeightedGraph::new(recipe.n, edges, VertexWeights::new(rows)?)?;
    let u = CapacityBound::uniform(2, vec![recipe.capacity])?;
    Ok((g, u))
}

/// One row of the bundled capacity-bound tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableBound {
    pub table: u8,
    pub instance: String,
    pub edge_prob: f64,
    pub n: usize,
    pub capacity: i64,
    pub rba_cut: f64,
    pub rba_cpu_s: f64,
    pub ref_cut: f64,
    pub ref_cpu_s: f64,
    pub ref_hit_max_iters: bool,
    pub gap_pct: f64,
}

const TABLE_BOUNDS: &str = include_str!("../../data/gpkc_table_bounds.csv");

/// Published capacity bounds and reference results for the random GPKC
/// tables.
pub fn table_bounds() -> Result<Vec<TableBound>> {
    let mut reader = csv::Reader::from_reader(TABLE_BOUNDS.as_bytes());
    Ok(reader
        .deserialize()
        .collect::<std::result::Result<_, _>>()?)
}

/// Experiment rows for one table and size. Every bound shares one graph
/// generated from `seed`.
pub fn table_rows(table: u8, n: usize, seed: u64) -> Result<Vec<ExperimentRow>> {
    Ok(table_bounds()?
        .into_iter()
        .filter(|b| b.table == table && b.n == n)
        .map(|b| ExperimentRow {
            instance: format!("{}-n{}-u{}", b.instance, b.n, b.capacity),
            recipe: GpkcRecipe::new(b.n, b.edge_prob, b.capacity, seed),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::io::write_edge_list;

    #[test]
    fn complete_graph_at_probability_one() {
        let (g, u) = generate_gpkc(&GpkcRecipe::new(4, 1.0, 10, 0)).unwrap();
        assert_eq!(g.edges().len(), 6);
        assert_eq!(u.rows(), &[vec![10], vec![10]]);
    }

    #[test]
    fn weights_respect_ranges() {
        let (g, _) = generate_gpkc(&GpkcRecipe::new(60, 0.5, 10, 3)).unwrap();
        assert!(g
            .edges()
            .iter()
            .all(|e| (1.0..=100.0).contains(&e.weight) && e.weight.fract() == 0.0));
        assert!((0..60).all(|v| (1..=1000).contains(&g.vertex_weights().row(v)[0])));
    }

    #[test]
    fn same_seed_same_bytes() {
        let bytes = |seed| {
            let (g, _) = generate_gpkc(&GpkcRecipe::new(30, 0.3, 1, seed)).unwrap();
            let mut out = Vec::new();
            write_edge_list(&g, &mut out).unwrap();
            out
        };
        assert_eq!(bytes(5), bytes(5));
        assert_ne!(bytes(5), bytes(6));
    }

    #[test]
    fn bad_recipes_rejected() {
        assert!(generate_gpkc(&GpkcRecipe::new(4, 0.0, 1, 0)).is_err());
        assert!(generate_gpkc(&GpkcRecipe::new(4, 1.5, 1, 0)).is_err());
        let mut r = GpkcRecipe::new(4, 0.5, 1, 0);
        r.edge_weight_range = (5, 2);
        assert!(generate_gpkc(&r).is_err());
    }

    #[test]
    fn bundled_tables_load() {
        let rows = table_bounds().unwrap();
        assert_eq!(rows.len(), 102);
        let t1: Vec<i64> = rows
            .iter()
            .filter(|b| b.table == 1 && b.n == 100)
            .map(|b| b.capacity)
            .collect();
        assert_eq!(t1, vec![26472, 14310, 11397, 6349, 3973, 3082]);
        assert_eq!(table_rows(1, 100, 0).unwrap().len(), 6);
    }
}
