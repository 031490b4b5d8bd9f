//! Transform throughput, with or without the rayon data-parallel loops.
//!
//! Building with the default `parallel` feature adds a worker-count sweep so
//! the data-parallel speedup is visible next to the single-worker baseline;
//! `cargo bench --no-default-features` benches the plain sequential build of
//! the same code paths. Outputs are identical in all configurations.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qwlct_core::corpus;
use qwlct_core::grid::Grid2D;
use qwlct_core::qft;
use qwlct_core::qlct::{self, LctParams};
use qwlct_core::quat::Quaternion;
use qwlct_core::qwlct;
use qwlct_core::signal::{self, QSignal2D};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

fn random_signal(n: usize, dx: f64, seed: u64) -> QSignal2D {
    let grid = Grid2D::centered(n, dx).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = (0..grid.len())
        .map(|_| {
            Quaternion::new(
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            )
        })
        .collect();
    QSignal2D::from_samples(grid, samples).unwrap()
}

fn example_setup(n: usize) -> (QSignal2D, QSignal2D, Grid2D) {
    let grid = Grid2D::centered_span(n, 1.0).unwrap();
    let f = signal::example_gaussian(grid, 1.0 / 16.0, 0.0, 0.0).unwrap();
    let phi = signal::example_window(grid, 1.0 / 16.0, 0.0, 0.0).unwrap();
    let shift = corpus::shift_grid(&grid, 4, 16).unwrap();
    (f, phi, shift)
}

fn bench_qft(c: &mut Criterion) {
    let mut group = c.benchmark_group("qft");
    for n in [16usize, 64] {
        let f = random_signal(n, 0.2, 1);
        group.bench_with_input(BenchmarkId::new("fast", n), &f, |b, f| {
            b.iter(|| qft::qft_forward_fast(black_box(f)).unwrap())
        });
        if n <= 16 {
            group.bench_with_input(BenchmarkId::new("direct_sum", n), &f, |b, f| {
                b.iter(|| qft::qft_forward_naive(black_box(f)))
            });
        }
    }
    group.finish();
}

fn bench_qlct(c: &mut Criterion) {
    let mut group = c.benchmark_group("qlct");
    let a = LctParams::example_matrix();
    for n in [16usize, 64] {
        let f = random_signal(n, 0.2, 2);
        group.bench_with_input(BenchmarkId::new("fast", n), &f, |b, f| {
            b.iter(|| qlct::qlct_forward(black_box(f), &a, &a).unwrap())
        });
        if n <= 16 {
            group.bench_with_input(BenchmarkId::new("direct_sum", n), &f, |b, f| {
                b.iter(|| qlct::qlct_forward_direct(black_box(f), &a, &a).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_qwlct_field(c: &mut Criterion) {
    let mut group = c.benchmark_group("qwlct_forward");
    group.sample_size(10);
    let a = LctParams::example_matrix();
    let (f, phi, shift) = example_setup(32);
    group.bench_function("n32_shifts16x16", |b| {
        b.iter(|| qwlct::qwlct_forward(black_box(&f), &phi, &a, &a, &shift).unwrap())
    });
    group.finish();
}

/// Same field computation pinned to different worker counts; the sequential
/// fallback build runs the identical body without a pool.
fn bench_workers(c: &mut Criterion) {
    let mut group = c.benchmark_group("qwlct_forward_workers");
    group.sample_size(10);
    let a = LctParams::example_matrix();
    let (f, phi, shift) = example_setup(32);

    #[cfg(feature = "parallel")]
    for workers in [1usize, 2, 4, 8] {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .unwrap();
        group.bench_function(BenchmarkId::new("rayon", workers), |b| {
            b.iter(|| {
                pool.install(|| qwlct::qwlct_forward(black_box(&f), &phi, &a, &a, &shift).unwrap())
            })
        });
    }

    #[cfg(not(feature = "parallel"))]
    group.bench_function("sequential_fallback", |b| {
        b.iter(|| qwlct::qwlct_forward(black_box(&f), &phi, &a, &a, &shift).unwrap())
    });

    group.finish();
}

criterion_group!(benches, bench_qft, bench_qlct, bench_qwlct_field, bench_workers);
criterion_main!(benches);
