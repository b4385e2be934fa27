use criterion::{criterion_group, criterion_main, Criterion};
use dulac_bench::saddle_fixture;
use dulac_core::{
    asymptotic_deviation, characteristics_model, dulac_map, resonant_support, Lambda, SolverConfig,
    TruncatedSeries,
};
use num_complex::Complex64;
use std::hint::black_box;

fn bench_dulac_map(c: &mut Criterion) {
    let (field, base, params) = saddle_fixture();
    let cfg = SolverConfig::default();
    c.bench_function("dulac_map saddle z=-6+1i", |b| {
        b.iter(|| {
            dulac_map(
                &field,
                black_box(Complex64::new(-6.0, 1.0)),
                &base,
                &params,
                &cfg,
            )
        })
    });
}

fn bench_deviation(c: &mut Criterion) {
    let (field, base, params) = saddle_fixture();
    let cfg = SolverConfig::default();
    let g = TruncatedSeries::monomial(2, 1, Complex64::new(1.0, 0.0));
    c.bench_function("asymptotic_deviation z0=-20", |b| {
        b.iter(|| {
            asymptotic_deviation(
                &field,
                &g,
                black_box(Complex64::new(-20.0, 0.0)),
                &base,
                &params,
                &cfg,
            )
        })
    });
}

fn bench_model(c: &mut Criterion) {
    let (_, base, _) = saddle_fixture();
    let lambda = Lambda::negative_rational(2, 3).expect("valid ratio");
    let g =
        TruncatedSeries::from_terms((0..10).flat_map(|n| {
            (0..10).map(move |m| (n, m, Complex64::new(1.0 / (1 + n + m) as f64, 0.0)))
        }));
    c.bench_function("characteristics_model 100 terms", |b| {
        b.iter(|| characteristics_model(&g, black_box(Complex64::new(-7.0, 0.5)), &lambda, &base))
    });
}

fn bench_resonance(c: &mut Criterion) {
    let lambda = Lambda::real(-std::f64::consts::FRAC_PI_4).expect("nonzero");
    c.bench_function("resonant_support n_max=200", |b| {
        b.iter(|| resonant_support(1, &lambda, black_box(200)))
    });
}

criterion_group!(
    benches,
    bench_dulac_map,
    bench_deviation,
    bench_model,
    bench_resonance
);
criterion_main!(benches);
