//! Quantile-estimator benchmarks: selection-based pooled quantile against a
//! full sort, the average estimator, and the two long-run-variance
//! estimators.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use quantpool::{
    average_quantile, default_truncation_lag, estimate_v2_batch_means, estimate_v2_truncated,
    pooled_quantile,
};
use quantpool_bench::ar1_set;

fn bench_pooled_quantile(c: &mut Criterion) {
    let data = ar1_set(0.5, 10, 10_000, 1);
    let mut group = c.benchmark_group("pooled_quantile_n1e5");
    group.bench_function("selection", |b| {
        b.iter(|| pooled_quantile(black_box(&data), black_box(0.95)).unwrap().value)
    });
    group.bench_function("full_sort", |b| {
        b.iter(|| {
            let mut all: Vec<f64> = data.pooled_entries().collect();
            all.sort_unstable_by(f64::total_cmp);
            let k = ((all.len() as f64 * 0.95).ceil() as usize).clamp(1, all.len());
            all[k - 1]
        })
    });
    group.finish();
}

fn bench_average_quantile(c: &mut Criterion) {
    let data = ar1_set(0.5, 64, 1_000, 2);
    c.bench_function("average_quantile_r64_l1e3", |b| {
        b.iter(|| average_quantile(black_box(&data), black_box(0.95)).unwrap().value)
    });
}

fn bench_v2_estimators(c: &mut Criterion) {
    let data = ar1_set(0.5, 1, 100_000, 3);
    let lag = default_truncation_lag(data.l());
    let mut group = c.benchmark_group("v2_l1e5");
    group.sample_size(20);
    group.bench_function("truncated_autocov", |b| {
        b.iter(|| estimate_v2_truncated(black_box(&data), 0.0, lag).unwrap())
    });
    group.bench_function("batch_means", |b| {
        b.iter(|| estimate_v2_batch_means(black_box(&data.paths()[0]), 0.0, 1_000).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_pooled_quantile,
    bench_average_quantile,
    bench_v2_estimators
);
criterion_main!(benches);
