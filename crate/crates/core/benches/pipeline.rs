//! Sequential against parallel execution for the pipeline and the oracle.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use knapart::bench::{brute_force_optimum, generate_gpkc, GpkcRecipe};
use knapart::driver::{partition, PipelineConfig};
use knapart::graph::{CapacityBound, FixedAssignment};
use knapart::par::Execution;

fn pipeline(c: &mut Criterion) {
    let (g, _) = generate_gpkc(&GpkcRecipe::new(100, 0.2, 0, 20)).unwrap();
    let mut group = c.benchmark_group("partition_n100_restarts8");
    group.sample_size(10);
    for cap in [26472, 6349] {
        let u = CapacityBound::uniform(2, vec![cap]).unwrap();
        let cfg = PipelineConfig {
            restarts: 8,
            ..PipelineConfig::default()
        };
        for (name, cfg) in [("parallel", cfg), ("sequential", cfg.sequential())] {
            group.bench_with_input(BenchmarkId::new(name, cap), &cfg, |b, cfg| {
                b.iter(|| partition(&g, &u, &FixedAssignment::none(), cfg).unwrap())
            });
        }
    }
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let (g, _) = generate_gpkc(&GpkcRecipe::new(18, 0.4, 0, 3)).unwrap();
    let total = g.vertex_weights().total()[0];
    let u = CapacityBound::uniform(2, vec![total * 6 / 10]).unwrap();
    let mut group = c.benchmark_group("oracle_n18");
    group.sample_size(10);
    for (name, exec) in [
        ("parallel", Execution::Parallel),
        ("sequential", Execution::Sequential),
    ] {
        group.bench_function(name, |b| {
            b.iter(|| brute_force_optimum(&g, &u, &FixedAssignment::none(), exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, pipeline, oracle);
criterion_main!(benches);
