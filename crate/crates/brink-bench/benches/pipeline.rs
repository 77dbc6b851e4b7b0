//! Timings for the pipeline's hot paths, from geometry primitives up to
//! the full diagnostic. Inputs are seeded so runs are comparable.

use std::hint::black_box;

use brink_core::{
    boundary_diagnostic, chi2_quantile, envelope_of_lines, fit_mle, logistic, model_moments,
    suffstat_polytope_2d, Dataset, DiagnosticStatus, EdgeworthExpansion, FitResult, LineFamily,
    RngStream,
};
use criterion::{criterion_group, criterion_main, Criterion};

fn uniform_in(r: &mut RngStream, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * r.next_f64()
}

/// Design plus responses drawn from a fixed coefficient vector; asserts the
/// draw landed interior so the fit benchmarks measure full Newton solves.
fn interior_dataset(n: usize, tag: u64) -> Dataset {
    let mut r = RngStream::new(0xBE9C4, tag);
    let beta = [0.2, 0.8];
    let x: Vec<Vec<f64>> = (0..n)
        .map(|_| vec![1.0, uniform_in(&mut r, -2.0, 2.0)])
        .collect();
    let t: Vec<bool> = x
        .iter()
        .map(|row| r.next_f64() < logistic(row[0] * beta[0] + row[1] * beta[1]))
        .collect();
    let d = Dataset::new(x, t).unwrap();
    assert!(matches!(fit_mle(&d).unwrap(), FitResult::Interior(_)));
    d
}

fn bench_envelope(c: &mut Criterion) {
    let mut r = RngStream::new(0xBE9C4, 1);
    let pairs: Vec<(f64, f64)> = (0..256)
        .map(|_| (uniform_in(&mut r, -4.0, 4.0), uniform_in(&mut r, -4.0, 4.0)))
        .collect();
    let family = LineFamily::from_pairs(&pairs).unwrap();
    c.bench_function("envelope_256_lines", |b| {
        b.iter(|| envelope_of_lines(black_box(&family)))
    });
}

fn bench_polytope(c: &mut Criterion) {
    let mut r = RngStream::new(0xBE9C4, 2);
    let x: Vec<Vec<f64>> = (0..64)
        .map(|_| vec![1.0, uniform_in(&mut r, -2.0, 2.0)])
        .collect();
    c.bench_function("polytope_64_rows", |b| {
        b.iter(|| suffstat_polytope_2d(black_box(&x)).unwrap())
    });
}

fn bench_fit(c: &mut Criterion) {
    let d = interior_dataset(200, 3);
    c.bench_function("fit_mle_200_rows", |b| {
        b.iter(|| fit_mle(black_box(&d)).unwrap())
    });
}

fn bench_diagnostic(c: &mut Criterion) {
    let d = interior_dataset(100, 4);
    let report = boundary_diagnostic(&d, 0.99).unwrap();
    assert!(matches!(report.status, DiagnosticStatus::Evaluated(_)));
    c.bench_function("boundary_diagnostic_100_rows", |b| {
        b.iter(|| boundary_diagnostic(black_box(&d), 0.99).unwrap())
    });
}

fn bench_chi2(c: &mut Criterion) {
    c.bench_function("chi2_quantile_df2_p99", |b| {
        b.iter(|| chi2_quantile(black_box(2), black_box(0.99)).unwrap())
    });
}

fn bench_edgeworth(c: &mut Criterion) {
    let mut r = RngStream::new(0xBE9C4, 5);
    let x: Vec<Vec<f64>> = (0..50)
        .map(|_| vec![1.0, uniform_in(&mut r, -2.0, 2.0)])
        .collect();
    let m = model_moments(&x, &[0.3, 0.9]);
    let e = EdgeworthExpansion::new(&m).unwrap();
    let sd = [m.sigma.get(0, 0).sqrt(), m.sigma.get(1, 1).sqrt()];
    let zs: Vec<[f64; 2]> = (0..1024)
        .map(|i| {
            let u = i as f64 / 1023.0 * 8.0 - 4.0;
            [m.mu[0] + u * sd[0], m.mu[1] - u * sd[1]]
        })
        .collect();
    c.bench_function("edgeworth_density_1024_points", |b| {
        b.iter(|| zs.iter().map(|z| e.density(black_box(z))).sum::<f64>())
    });
}

criterion_group!(
    benches,
    bench_envelope,
    bench_polytope,
    bench_fit,
    bench_diagnostic,
    bench_chi2,
    bench_edgeworth
);
criterion_main!(benches);
