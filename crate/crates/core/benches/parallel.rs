//! Sequential vs data-parallel throughput. `threads=1` runs inside a
//! one-thread rayon pool; the `sequential` feature set
//! (`--no-default-features`) compiles rayon out entirely.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use kapteyn_core::growth::GrowthProbe;
use kapteyn_core::phase::{render, Overlays};
use kapteyn_core::zeros::{find_zeros, DEFAULT_MAX_DEPTH};
use kapteyn_core::{SeriesSpec, WindowBox};
use std::hint::black_box;

fn pools() -> Vec<(usize, rayon::ThreadPool)> {
    let all = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    // on a single core the second pool still exercises the split overhead
    [1, all.max(4)]
        .into_iter()
        .map(|n| (n, rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap()))
        .collect()
}

fn bench_render(c: &mut Criterion) {
    let section = SeriesSpec::kepler_kapteyn(0.2).section(25).unwrap();
    let window = WindowBox::square(2.0).unwrap();
    let mut group = c.benchmark_group("render_64");
    group.sample_size(10);
    for (n, pool) in pools() {
        group.bench_with_input(BenchmarkId::new("threads", n), &n, |b, _| {
            b.iter(|| pool.install(|| render(&section, &window, 64, 64, &Overlays::default()).unwrap()))
        });
    }
    group.finish();
}

fn bench_growth(c: &mut Criterion) {
    let probe = GrowthProbe::new(&SeriesSpec::kepler_kapteyn(0.2), 256).unwrap();
    let window = WindowBox::square(2.0).unwrap();
    let mut group = c.benchmark_group("growth_sweep_16x16");
    group.sample_size(10);
    for (n, pool) in pools() {
        group.bench_with_input(BenchmarkId::new("threads", n), &n, |b, _| {
            b.iter(|| pool.install(|| black_box(probe.sweep_grid(&window, 16, 16).unwrap())))
        });
    }
    group.finish();
}

fn bench_zeros(c: &mut Criterion) {
    let section = SeriesSpec::kepler_lagrange(0.2).section(40).unwrap();
    let window = WindowBox::square(1.2).unwrap();
    let mut group = c.benchmark_group("find_zeros_lagrange_40");
    group.sample_size(10);
    for (n, pool) in pools() {
        group.bench_with_input(BenchmarkId::new("threads", n), &n, |b, _| {
            b.iter(|| pool.install(|| find_zeros(&section, &window, DEFAULT_MAX_DEPTH).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_render, bench_growth, bench_zeros);
criterion_main!(benches);
