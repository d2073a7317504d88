use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use umbra_bench::Fixtures;
use umbra_core::borel::{formal_borel, resum, Direction};
use umbra_core::gaussian::{
    cauchy_pv_integral, gauss_direct, gaussian_fourier_input, FourierInput, GaussKind, PvOptions,
};
use umbra_core::gevrey::estimate_gevrey_index;
use umbra_core::pade::pade;
use umbra_core::series::exp_series;
use umbra_core::umbral::{umbral_image, GroundState};
use umbra_core::Complex64;

fn series_algebra(c: &mut Criterion) {
    let mut group = c.benchmark_group("series");
    for n in [50, 200, 400] {
        let f = Fixtures::new(n);
        group.bench_with_input(BenchmarkId::new("cauchy_product", n), &f.dense, |b, s| {
            b.iter(|| black_box(s.cauchy_product(s)))
        });
        group.bench_with_input(BenchmarkId::new("gevrey_fit", n), &f.example8, |b, s| {
            b.iter(|| black_box(estimate_gevrey_index(s, None).unwrap()))
        });
    }
    group.finish();
}

fn umbral(c: &mut Criterion) {
    let f = exp_series(Complex64::i(), 200);
    let lambda = GroundState::lambda();
    c.bench_function("umbral_image/faddeeva_200", |b| {
        b.iter(|| black_box(umbral_image(&f, 1.0, &lambda).unwrap()))
    });
    let fx = Fixtures::new(200);
    c.bench_function("eval/faddeeva_200", |b| {
        b.iter(|| black_box(fx.faddeeva.eval(Complex64::new(2.5, 0.0))))
    });
}

fn borel_pade_laplace(c: &mut Criterion) {
    let f = Fixtures::new(60);
    c.bench_function("formal_borel/example7", |b| {
        b.iter(|| black_box(formal_borel(&f.example7, 1.0).unwrap()))
    });
    let borel = formal_borel(&f.example7, 1.0).unwrap();
    c.bench_function("pade_20_20/example7_borel", |b| {
        b.iter(|| black_box(pade(borel.coeffs(), 20, 20).unwrap()))
    });
    c.bench_function("resum/example7_build", |b| {
        b.iter(|| black_box(resum(&f.example7, 1.0, Direction::default(), 20).unwrap()))
    });
    let sum = resum(&f.example7, 1.0, Direction::default(), 20).unwrap();
    c.bench_function("resum/example7_evaluate", |b| {
        b.iter(|| black_box(sum.evaluate(Complex64::new(1.0, 0.0)).unwrap()))
    });
}

fn gaussian(c: &mut Criterion) {
    let mut group = c.benchmark_group("gaussian");
    group.sample_size(20);
    group.bench_function("gaussft/gaussian_a1_400", |b| {
        b.iter(|| {
            black_box(
                gaussian_fourier_input(&FourierInput::Gaussian { a: 1.0 }, 400, 1.0, false)
                    .unwrap(),
            )
        })
    });
    group.bench_function("gaussft/abs_exp_resum", |b| {
        b.iter(|| black_box(gaussian_fourier_input(&FourierInput::AbsExp, 120, 1.0, true).unwrap()))
    });
    let opts = PvOptions::default();
    group.bench_function("pv/dirichlet", |b| {
        b.iter(|| {
            let f = |x: f64| gauss_direct(GaussKind::SinG, Complex64::new(x, 0.0)) / x;
            black_box(cauchy_pv_integral(&f, 0.0, &opts).unwrap())
        })
    });
    group.finish();
}

criterion_group!(
    benches,
    series_algebra,
    umbral,
    borel_pade_laplace,
    gaussian
);
criterion_main!(benches);
