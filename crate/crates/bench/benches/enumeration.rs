use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dglap::invariants::{bernardi, coloring_stats, potts, potts_sokal};
use dglap::space::{laplace, universal_bernardi};
use dglap::verify::verify_theorem1;
use dglap::Guards;
use dglap_bench::{complete, directed_cycle};
use std::hint::black_box;

fn colorings(c: &mut Criterion) {
    let mut group = c.benchmark_group("coloring_stats");
    for n in [4, 6, 8] {
        let g = directed_cycle(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| {
            b.iter(|| coloring_stats(black_box(g), 5))
        });
    }
    group.finish();
}

fn bernardi_interpolation(c: &mut Criterion) {
    let guards = Guards::default();
    let mut group = c.benchmark_group("bernardi");
    for n in [3, 5, 7] {
        let g = directed_cycle(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| {
            b.iter(|| bernardi(black_box(g), &guards).unwrap())
        });
    }
    group.finish();
}

fn potts_routes(c: &mut Criterion) {
    let guards = Guards::default();
    let g = complete(5);
    let mut group = c.benchmark_group("potts_k5");
    group.bench_function("chromatic", |b| b.iter(|| potts(black_box(&g), &guards).unwrap()));
    group.bench_function("subgraph", |b| b.iter(|| potts_sokal(black_box(&g), &guards).unwrap()));
    group.finish();
}

fn universal(c: &mut Criterion) {
    let guards = Guards::default();
    let mut group = c.benchmark_group("universal");
    group.sample_size(10);
    group.bench_function("bernardi_3_2", |b| b.iter(|| universal_bernardi(3, 2, &guards).unwrap()));
    let v = universal_bernardi(3, 2, &guards).unwrap();
    group.bench_function("laplace_3_2", |b| b.iter(|| laplace(black_box(&v))));
    group.bench_function("verify_3_2", |b| b.iter(|| verify_theorem1(3, 2, &guards).unwrap()));
    group.finish();
}

criterion_group!(benches, colorings, bernardi_interpolation, potts_routes, universal);
criterion_main!(benches);
