use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use plapt::{double_hill_components, fit_mle, lambert_w, quantile, LambertBranch, WeightSpec};
use plapt_bench::{pareto_sample, reference_params, reference_sample};

fn bench_lambert(c: &mut Criterion) {
    let mut group = c.benchmark_group("lambert_w");
    for z in [-0.3678, -0.2, -1e-3, -1e-12] {
        group.bench_with_input(BenchmarkId::new("lower", z), &z, |b, &z| {
            b.iter(|| lambert_w(LambertBranch::NegativeOne, black_box(z)).unwrap())
        });
    }
    group.bench_function("principal/1.0", |b| {
        b.iter(|| lambert_w(LambertBranch::Principal, black_box(1.0)).unwrap())
    });
    group.finish();
}

fn bench_quantile(c: &mut Criterion) {
    let p = reference_params();
    let grid: Vec<f64> = (1..1000).map(|i| i as f64 / 1000.0).collect();
    c.bench_function("quantile/999-point grid", |b| {
        b.iter(|| grid.iter().map(|&u| quantile(&p, black_box(u)).unwrap()).sum::<f64>())
    });
}

fn bench_fit(c: &mut Criterion) {
    let mut group = c.benchmark_group("fit_mle");
    group.sample_size(20);
    for n in [1_000, 10_000] {
        let data = reference_sample(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &data, |b, data| {
            b.iter(|| fit_mle(2.0, black_box(data), None).unwrap())
        });
    }
    group.finish();
}

fn bench_double_hill(c: &mut Criterion) {
    let data = pareto_sample(5_000);
    let k = 165;
    c.bench_function("double_hill/hill k=165", |b| {
        b.iter(|| double_hill_components(black_box(&data), &WeightSpec::hill(), k).unwrap())
    });
    let w = WeightSpec {
        weight: plapt::Weight::Power { tau: 0.5 },
        s: 2.0,
    };
    c.bench_function("double_hill/power s=2 k=165", |b| {
        b.iter(|| double_hill_components(black_box(&data), &w, k).unwrap())
    });
}

criterion_group!(benches, bench_lambert, bench_quantile, bench_fit, bench_double_hill);
criterion_main!(benches);
