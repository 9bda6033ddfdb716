//! Command-line front end: partition, generate, bench, oracle, improve.
//!
//! Exit codes: 0 ok, 2 parse or input error, 3 infeasible result,
//! 4 capacity augmentation exhausted, 5 internal error.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use knapart::bench::{
    brute_force_optimum, generate_gpkc, run_experiment, summarize, table_bounds, table_rows,
    write_runs_csv, write_summary_csv, GpkcRecipe,
};
use knapart::driver::{improve_labels, partition, PipelineConfig};
use knapart::graph::io::{
    parse_edge_list, parse_fixed, parse_hmetis, parse_partition, write_edge_list, write_partition,
    GraphFormat,
};
use knapart::graph::{
    expand_hypergraph, CapacityBound, FixedAssignment, Hypergraph, WeightedGraph,
};
use knapart::par::Execution;
use knapart::refine::RefineConfig;
use knapart::Error;
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "knapart",
    version,
    about = "Capacity-constrained graph partitioning by recursive bisection"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Partition a graph under per-part capacity limits.
    Partition(PartitionArgs),
    /// Write a random GPKC instance as an edge list.
    Generate(GenerateArgs),
    /// Run the bundled capacity-bound table experiments.
    Bench(BenchArgs),
    /// Exact minimum-cut bipartition by enumeration (small graphs only).
    Oracle(OracleArgs),
    /// Refine an existing partition with moves and swaps.
    Improve(ImproveArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Graph file.
    graph: PathBuf,
    /// Input format: edgelist or hmetis.
    #[arg(long, default_value = "edgelist")]
    format: GraphFormat,
}

#[derive(Args)]
struct SolverArgs {
    /// Balance factor.
    #[arg(long, default_value_t = 5.0)]
    rho: f64,
    /// Gradient tolerance of the relaxed solve.
    #[arg(long, default_value_t = 1e-5)]
    eps: f64,
    #[arg(long, default_value_t = 10_000)]
    max_iters: usize,
    /// Hyperplanes sampled per bisection.
    #[arg(long, default_value_t = 100)]
    planes: usize,
    /// Best-ranked candidates kept per bisection.
    #[arg(long, default_value_t = 10)]
    keep: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Independent runs; the best result is kept.
    #[arg(long, default_value_t = 1)]
    restarts: usize,
    /// Refine one random pair of parts only.
    #[arg(long)]
    paper_strict: bool,
    /// Repair overflowing parts during refinement.
    #[arg(long)]
    repair: bool,
}

impl SolverArgs {
    fn config(&self) -> PipelineConfig {
        let mut cfg = PipelineConfig {
            seed: self.seed,
            restarts: self.restarts,
            paper_strict: self.paper_strict,
            ..PipelineConfig::default()
        };
        cfg.model.rho = self.rho;
        cfg.solver.epsilon = self.eps;
        cfg.solver.max_iters = self.max_iters;
        cfg.rounding.planes = self.planes;
        cfg.rounding.keep = self.keep;
        cfg.refine.repair = self.repair;
        cfg
    }
}

#[derive(Args)]
struct PartitionArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Capacity row, comma-separated per weight dimension. Give it once for
    /// both sides of the first split, or twice for distinct sides.
    #[arg(long, required = true, num_args = 1, action = clap::ArgAction::Append)]
    capacity: Vec<String>,
    /// Fixed vertices: `vertex side` lines, 1-based, side 1 or 2.
    #[arg(long)]
    fixed: Option<PathBuf>,
    #[command(flatten)]
    solver: SolverArgs,
    /// Partition output (`vertex part` lines); stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON run report.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0.2)]
    edge_prob: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Edge-list output; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 1)]
    table: u8,
    #[arg(long, default_value_t = 100)]
    n: usize,
    /// Seed of the generated instance.
    #[arg(long, default_value_t = 0)]
    instance_seed: u64,
    #[arg(long, default_value_t = 20)]
    repeats: usize,
    #[command(flatten)]
    solver: SolverArgs,
    /// Per-run CSV; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-instance CSV with a gap column against the published cuts.
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, required = true, num_args = 1, action = clap::ArgAction::Append)]
    capacity: Vec<String>,
    #[arg(long)]
    fixed: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ImproveArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Initial partition: `vertex part` lines, both 1-based.
    #[arg(long)]
    partition: PathBuf,
    /// Capacity row shared by every part; defaults to the heaviest current
    /// part.
    #[arg(long)]
    capacity: Option<String>,
    #[arg(long)]
    fixed: Option<PathBuf>,
    /// Repair overflowing parts instead of failing.
    #[arg(long)]
    repair: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
}

/// A loaded graph plus its source hypergraph, if any.
struct Loaded {
    graph: WeightedGraph,
    hypergraph: Option<Hypergraph>,
}

fn load(input: &InputArgs) -> knapart::Result<Loaded> {
    let file = File::open(&input.graph)?;
    match input.format {
        GraphFormat::EdgeList => Ok(Loaded {
            graph: parse_edge_list(file)?,
            hypergraph: None,
        }),
        GraphFormat::Hmetis => {
            let (h, dropped) = parse_hmetis(file)?;
            if dropped > 0 {
                eprintln!("dropped {dropped} single-pin nets");
            }
            Ok(Loaded {
                graph: expand_hypergraph(&h)?,
                hypergraph: Some(h),
            })
        }
    }
}

fn parse_row(text: &str) -> knapart::Result<Vec<i64>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad capacity value `{t}`")))
        })
        .collect()
}

fn capacities(rows: &[String]) -> knapart::Result<CapacityBound> {
    let rows: Vec<Vec<i64>> = rows
        .iter()
        .map(|r| parse_row(r))
        .collect::<knapart::Result<_>>()?;
    match rows.len() {
        1 => CapacityBound::uniform(2, rows[0].clone()),
        2 => CapacityBound::new(rows),
        k => Err(Error::InvalidInput(format!(
            "expected one or two capacity rows, got {k}"
        ))),
    }
}

fn fixed_from(path: Option<&Path>, n: usize) -> knapart::Result<FixedAssignment> {
    match path {
        Some(p) => parse_fixed(File::open(p)?, n),
        None => Ok(FixedAssignment::none()),
    }
}

fn sink(path: Option<&Path>) -> knapart::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json(path: &Path, value: &serde_json::Value) -> knapart::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value).map_err(io::Error::from)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// Outcome of a successful command: whether the result fits its capacities.
enum Done {
    Ok,
    Infeasible,
}

fn cmd_partition(a: &PartitionArgs) -> knapart::Result<Done> {
    let loaded = load(&a.input)?;
    let g = &loaded.graph;
    let u = capacities(&a.capacity)?;
    let fixed = fixed_from(a.fixed.as_deref(), g.n())?;
    let cfg = a.solver.config();
    let forest = partition(g, &u, &fixed, &cfg)?;
    forest.verify(g)?;
    let mut out = sink(a.out.as_deref())?;
    write_partition(&forest.labels, &mut out)?;
    out.flush()?;
    let hyper_cut = loaded
        .hypergraph
        .as_ref()
        .map(|h| h.connectivity_cut(&forest.labels));
    eprintln!(
        "parts {} cut {} feasible {}{}",
        forest.parts.len(),
        forest.cut_total,
        forest.is_feasible(),
        hyper_cut.map_or(String::new(), |c| format!(" connectivity cut {c}"))
    );
    if let Some(path) = &a.report {
        write_json(
            path,
            &json!({ "config": cfg, "forest": forest, "connectivity_cut": hyper_cut }),
        )?;
    }
    Ok(if forest.is_feasible() {
        Done::Ok
    } else {
        Done::Infeasible
    })
}

fn cmd_generate(a: &GenerateArgs) -> knapart::Result<Done> {
    let (g, _) = generate_gpkc(&GpkcRecipe::new(a.n, a.edge_prob, 0, a.seed))?;
    let mut out = sink(a.out.as_deref())?;
    write_edge_list(&g, &mut out)?;
    out.flush()?;
    eprintln!("total vertex weight {}", g.vertex_weights().total()[0]);
    Ok(Done::Ok)
}

fn cmd_bench(a: &BenchArgs) -> knapart::Result<Done> {
    let rows = table_rows(a.table, a.n, a.instance_seed)?;
    if rows.is_empty() {
        return Err(Error::InvalidInput(format!(
            "no bundled rows for table {} at n = {}",
            a.table, a.n
        )));
    }
    let cfg = a.solver.config();
    let records = run_experiment(&rows, &cfg, a.repeats, Execution::Parallel);
    let mut out = sink(a.out.as_deref())?;
    write_runs_csv(&records, &mut out)?;
    if let Some(path) = &a.summary {
        let reference: Vec<f64> = table_bounds()?
            .into_iter()
            .filter(|b| b.table == a.table && b.n == a.n)
            .map(|b| b.ref_cut)
            .collect();
        write_summary_csv(&summarize(&records), Some(&reference), File::create(path)?)?;
    }
    let failed = records.iter().filter(|r| r.error.is_some()).count();
    if failed > 0 {
        eprintln!("{failed} of {} runs failed", records.len());
    }
    Ok(Done::Ok)
}

fn cmd_oracle(a: &OracleArgs) -> knapart::Result<Done> {
    let g = load(&a.input)?.graph;
    let u = capacities(&a.capacity)?;
    let fixed = fixed_from(a.fixed.as_deref(), g.n())?;
    match brute_force_optimum(&g, &u, &fixed, Execution::Parallel)? {
        Some(s) => {
            let labels: Vec<usize> = s.in_first.iter().map(|&f| if f { 0 } else { 1 }).collect();
            let mut out = sink(a.out.as_deref())?;
            write_partition(&labels, &mut out)?;
            out.flush()?;
            eprintln!(
                "optimal cut {} over {} feasible assignments",
                s.cut, s.feasible_assignments
            );
            Ok(Done::Ok)
        }
        None => {
            eprintln!("no feasible bipartition");
            Ok(Done::Infeasible)
        }
    }
}

fn cmd_improve(a: &ImproveArgs) -> knapart::Result<Done> {
    let loaded = load(&a.input)?;
    let g = &loaded.graph;
    let labels = parse_partition(File::open(&a.partition)?, g.n())?;
    let fixed = fixed_from(a.fixed.as_deref(), g.n())?;
    let parts = labels.iter().max().map_or(0, |m| m + 1);
    let row = match &a.capacity {
        Some(text) => parse_row(text)?,
        None => {
            let mut usage = vec![vec![0i64; g.dims()]; parts];
            for (v, &l) in labels.iter().enumerate() {
                for (u, w) in usage[l].iter_mut().zip(g.vertex_weights().row(v)) {
                    *u += w;
                }
            }
            (0..g.dims())
                .map(|k| usage.iter().map(|u| u[k]).max().unwrap_or(0))
                .collect()
        }
    };
    if row.len() != g.dims() {
        return Err(Error::Dimension {
            expected: g.dims(),
            got: row.len(),
        });
    }
    let caps = vec![row; parts];
    let cfg = RefineConfig {
        repair: a.repair,
        ..RefineConfig::default()
    };
    let report = improve_labels(g, &labels, &caps, &fixed, &cfg)?;
    let mut out = sink(a.out.as_deref())?;
    write_partition(&report.labels, &mut out)?;
    out.flush()?;
    let hyper = loaded.hypergraph.as_ref().map(|h| {
        (
            h.connectivity_cut(&labels),
            h.connectivity_cut(&report.labels),
        )
    });
    eprintln!(
        "cut {} -> {}{}",
        report.cut_before,
        report.cut_after,
        hyper.map_or(String::new(), |(b, a)| format!(
            ", connectivity cut {b} -> {a}"
        ))
    );
    if let Some(path) = &a.report {
        write_json(
            path,
            &json!({
                "capacity": caps[0],
                "improve": report,
                "connectivity_cut": hyper.map(|(b, a)| json!({ "before": b, "after": a })),
            }),
        )?;
    }
    Ok(Done::Ok)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::AugmentationExhausted { .. } => 4,
        Error::Internal(_) | Error::NonFinite { .. } => 5,
        Error::InvalidInput(_)
        | Error::Parse { .. }
        | Error::Dimension { .. }
        | Error::OracleRefused { .. }
        | Error::Io(_)
        | Error::Csv(_) => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Partition(a) => cmd_partition(a),
        Command::Generate(a) => cmd_generate(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Improve(a) => cmd_improve(a),
    };
    match result {
        Ok(Done::Ok) => ExitCode::SUCCESS,
        Ok(Done::Infeasible) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
