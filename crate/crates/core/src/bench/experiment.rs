//! Repeated seeded pipeline runs over a list of instances.

use std::io::Write;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{generate_gpkc, GpkcRecipe};
use crate::driver::{partition, PipelineConfig};
use crate::error::Result;
use crate::graph::FixedAssignment;
use crate::par::{self, Execution};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub instance: String,
    pub recipe: GpkcRecipe,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunStatus {
    Feasible,
    Infeasible,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub instance: String,
    pub n: usize,
    pub edge_prob: f64,
    pub capacity: i64,
    pub seed: u64,
    /// `NaN` for failed runs.
    pub cut: f64,
    pub cpu_s: f64,
    pub status: RunStatus,
    pub iters: usize,
    pub case_counts: [usize; 4],
    pub best_of: usize,
    pub parts: usize,
    pub labels: Vec<usize>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub instance: String,
    pub n: usize,
    pub edge_prob: f64,
    pub capacity: i64,
    pub runs: usize,
    pub feasible_runs: usize,
    /// Minimum cut over feasible runs.
    pub min_cut: Option<f64>,
    pub mean_cpu_s: f64,
}

/// `(ours − reference) / reference · 100`.
pub fn gap_percent(ours: f64, reference: f64) -> f64 {
    (ours - reference) / reference * 100.0
}

pub fn gap_column(ours: &[f64], reference: &[f64]) -> Vec<f64> {
    ours.iter()
        .zip(reference)
        .map(|(&a, &b)| gap_percent(a, b))
        .collect()
}

/// Runs `repeats` pipelines per row with seeds `cfg.seed + r`. Instance
/// generation is excluded from the timing; a failing run is recorded and
/// does not stop the others. Records come back row-major in input order.
pub fn run_experiment(
    rows: &[ExperimentRow],
    cfg: &PipelineConfig,
    repeats: usize,
    exec: Execution,
) -> Vec<RunRecord> {
    let jobs: Vec<(usize, usize)> = (0..rows.len())
        .flat_map(|i| (0..repeats).map(move |r| (i, r)))
        .collect();
    par::map_slice(exec, &jobs, |&(i, r)| {
        let row = &rows[i];
        let seed = cfg.seed.wrapping_add(r as u64);
        let mut rec = RunRecord {
            instance: row.instance.clone(),
            n: row.recipe.n,
            edge_prob: row.recipe.edge_prob,
            capacity: row.recipe.capacity,
            seed,
            cut: f64::NAN,
            cpu_s: 0.0,
            status: RunStatus::Failed,
            iters: 0,
            case_counts: [0; 4],
            best_of: cfg.restarts,
            parts: 0,
            labels: Vec::new(),
            error: None,
        };
        let (g, u) = match generate_gpkc(&row.recipe) {
            Ok(x) => x,
            Err(e) => {
                rec.error = Some(e.to_string());
                return rec;
            }
        };
        let run_cfg = PipelineConfig { seed, ..*cfg };
        let start = Instant::now();
        let out = partition(&g, &u, &FixedAssignment::none(), &run_cfg);
        rec.cpu_s = start.elapsed().as_secs_f64();
        match out {
            Ok(f) => {
                rec.cut = f.cut_total;
                rec.status = if f.is_feasible() {
                    RunStatus::Feasible
                } else {
                    RunStatus::Infeasible
                };
                rec.iters = f.solver_iterations();
                rec.case_counts = f.case_counts();
                rec.parts = f.parts.len();
                rec.labels = f.labels;
            }
            Err(e) => rec.error = Some(e.to_string()),
        }
        rec
    })
}

/// Per-instance minimum cut and mean time, in first-appearance order.
pub fn summarize(records: &[RunRecord]) -> Vec<SummaryRow> {
    let mut out: Vec<SummaryRow> = Vec::new();
    for r in records {
        let idx = match out.iter().position(|s| s.instance == r.instance) {
            Some(i) => i,
            None => {
                out.push(SummaryRow {
                    instance: r.instance.clone(),
                    n: r.n,
                    edge_prob: r.edge_prob,
                    capacity: r.capacity,
                    runs: 0,
                    feasible_runs: 0,
                    min_cut: None,
                    mean_cpu_s: 0.0,
                });
                out.len() - 1
            }
        };
        let s = &mut out[idx];
        s.mean_cpu_s = (s.mean_cpu_s * s.runs as f64 + r.cpu_s) / (s.runs + 1) as f64;
        s.runs += 1;
        if r.status == RunStatus::Feasible {
            s.feasible_runs += 1;
            s.min_cut = Some(s.min_cut.map_or(r.cut, |c| c.min(r.cut)));
        }
    }
    out
}

#[derive(Serialize)]
struct RunCsv<'a> {
    instance: &'a str,
    n: usize,
    edge_prob: f64,
    capacity: i64,
    seed: u64,
    cut: f64,
    cpu_s: String,
    status: RunStatus,
    iters: usize,
}

#[derive(Serialize)]
struct SummaryCsv<'a> {
    instance: &'a str,
    n: usize,
    edge_prob: f64,
    capacity: i64,
    runs: usize,
    feasible_runs: usize,
    min_cut: Option<f64>,
    mean_cpu_s: String,
    gap_pct: Option<String>,
}

/// `instance,n,edge_prob,capacity,seed,cut,cpu_s,status,iters`.
pub fn write_runs_csv<W: Write>(records: &[RunRecord], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in records {
        out.serialize(RunCsv {
            instance: &r.instance,
            n: r.n,
            edge_prob: r.edge_prob,
            capacity: r.capacity,
            seed: r.seed,
            cut: r.cut,
            cpu_s: format!("{:.3}", r.cpu_s),
            status: r.status,
            iters: r.iters,
        })?;
    }
    out.flush()?;
    Ok(())
}

/// Summary rows, with a gap column when `reference` cuts are given.
pub fn write_summary_csv<W: Write>(
    rows: &[SummaryRow],
    reference: Option<&[f64]>,
    w: W,
) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for (k, s) in rows.iter().enumerate() {
        let gap = match (reference.and_then(|r| r.get(k)), s.min_cut) {
            (Some(&r), Some(c)) => Some(format!("{:.4}", gap_percent(c, r))),
            _ => None,
        };
        out.serialize(SummaryCsv {
            instance: &s.instance,
            n: s.n,
            edge_prob: s.edge_prob,
            capacity: s.capacity,
            runs: s.runs,
            feasible_runs: s.feasible_runs,
            min_cut: s.min_cut,
            mean_cpu_s: format!("{:.3}", s.mean_cpu_s),
            gap_pct: gap,
        })?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn published_gap_example() {
        let gap = gap_percent(16511.0, 16751.0);
        assert_eq!(format!("{gap:.4}"), "-1.4328");
    }

    #[test]
    fn equal_columns_give_zero_gap() {
        assert_eq!(gap_column(&[3.0, 7.5], &[3.0, 7.5]), vec![0.0, 0.0]);
    }

    #[test]
    fn single_repeat_matches_direct_call() {
        let recipe = GpkcRecipe::new(8, 0.5, 3000, 4);
        let rows = vec![ExperimentRow {
            instance: "tiny".into(),
            recipe,
        }];
        let cfg = PipelineConfig {
            seed: 11,
            ..PipelineConfig::default()
        };
        let recs = run_experiment(&rows, &cfg, 1, Execution::Sequential);
        assert_eq!(recs.len(), 1);
        let (g, u) = generate_gpkc(&recipe).unwrap();
        let direct = partition(&g, &u, &FixedAssignment::none(), &cfg).unwrap();
        assert_eq!(recs[0].cut, direct.cut_total);
        let summary = summarize(&recs);
        assert_eq!(summary.len(), 1);
        assert_eq!(summary[0].runs, 1);
    }

    #[test]
    fn csv_headers() {
        let recs = run_experiment(
            &[ExperimentRow {
                instance: "t".into(),
                recipe: GpkcRecipe::new(6, 0.5, 4000, 1),
            }],
            &PipelineConfig::default(),
            2,
            Execution::Parallel,
        );
        let mut buf = Vec::new();
        write_runs_csv(&recs, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("instance,n,edge_prob,capacity,seed,cut,cpu_s,status,iters\n"));
        assert_eq!(text.lines().count(), 3);
        let mut buf = Vec::new();
        write_summary_csv(&summarize(&recs), Some(&[1.0]), &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().contains("gap_pct"));
    }
}
