//! Benchmarks for the numeric side: homotopy tracking of the 27 lines,
//! Eckardt clustering of a tracked line set, and one full exact/numeric
//! cross-validation.

use criterion::{criterion_group, criterion_main, Criterion};
use cubics_core::lines::track_all;
use cubics_core::lines::{cross_validate, eckardt_numeric};
use cubics_core::pentahedron::to_cubic_p3;
use cubics_core::{SylvesterPoint, TrackerConfig};
use std::hint::black_box;

/// The Fermat-like surface (all coefficients equal): 27 lines,
/// 18 Eckardt points, the densest clustering case.
fn fermat() -> SylvesterPoint {
    SylvesterPoint::from_ints([1, 1, 1, 1, 1])
}

fn bench_track_all(c: &mut Criterion) {
    let form = to_cubic_p3(&fermat());
    let cfg = TrackerConfig::from_seed(11);
    let mut group = c.benchmark_group("track_all");
    group.sample_size(10);
    group.bench_function("fermat_27_lines", |b| {
        b.iter(|| track_all(black_box(&form), black_box(&cfg)).unwrap())
    });
    group.finish();
}

fn bench_eckardt_numeric(c: &mut Criterion) {
    let form = to_cubic_p3(&fermat());
    let cfg = TrackerConfig::from_seed(11);
    let lines = track_all(&form, &cfg).unwrap();
    c.bench_function("eckardt_numeric/fermat_18_points", |b| {
        b.iter(|| eckardt_numeric(black_box(&lines), 1e-6).unwrap())
    });
}

fn bench_cross_validate(c: &mut Criterion) {
    let s = SylvesterPoint::from_ints([1, 2, 2, 3, 3]);
    let cfg = TrackerConfig::from_seed(7);
    let mut group = c.benchmark_group("cross_validate");
    group.sample_size(10);
    group.bench_function("two_pair_family", |b| {
        b.iter(|| cross_validate(black_box(&s), black_box(&cfg), 1e-6).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_track_all,
    bench_eckardt_numeric,
    bench_cross_validate
);
criterion_main!(benches);
