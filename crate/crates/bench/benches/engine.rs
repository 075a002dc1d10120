//! Generator and engine throughput. The r=64, l=1e4 case is the
//! interactive-time budget for a full replication run.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use quantpool::{
    derive, generate_ar1, generate_mm1, run_replications, Ar1Params, Mm1Params, ProcessModel,
    RunPlan,
};

fn bench_generators(c: &mut Criterion) {
    let ar1 = Ar1Params::standard(0.9).unwrap();
    c.bench_function("generate_ar1_l1e5", |b| {
        b.iter(|| generate_ar1(black_box(&ar1), 100_000, 0, derive(1, 0, 0)).unwrap())
    });
    let mm1 = Mm1Params::standard(0.9).unwrap();
    c.bench_function("generate_mm1_l1e5", |b| {
        b.iter(|| generate_mm1(black_box(&mm1), 100_000, 0, derive(2, 0, 0)).unwrap())
    });
}

fn bench_run_replications(c: &mut Criterion) {
    let plan = RunPlan {
        model: ProcessModel::ar1(Ar1Params::standard(0.5).unwrap()),
        r: 64,
        l: 10_000,
        base_seed: 3,
        workers: std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
    };
    let mut group = c.benchmark_group("run_replications");
    group.sample_size(10);
    group.bench_function("ar1_r64_l1e4", |b| {
        b.iter(|| run_replications(black_box(&plan)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_generators, bench_run_replications);
criterion_main!(benches);
