use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nilform::stokes::FieldPool;
use nilform::{verify, Monomial, Rational, Tolerance, Weil};
use nilform_bench::fixture;

fn weil_products(c: &mut Criterion) {
    let mut group = c.benchmark_group("weil_mul");
    for m in [2, 4, 6] {
        let dense = Weil::<f64>::from_terms(m, (0..1u32 << m).map(|b| {
            let gens: Vec<usize> = (0..m).filter(|i| b & (1 << i) != 0).map(|i| i + 1).collect();
            (Monomial::from_generators(&gens).unwrap(), 1.0 + b as f64)
        }))
        .unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(m), &dense, |b, w| b.iter(|| black_box(w) * black_box(w)));
    }
    group.finish();
}

fn stokes_identity(c: &mut Criterion) {
    let tol = Tolerance::default();
    let mut group = c.benchmark_group("verify_rational_n5");
    for k in 0..5 {
        let f = fixture::<Rational>(5, k, FieldPool::Polynomial, 7);
        group.bench_with_input(BenchmarkId::from_parameter(k), &f, |b, f| {
            b.iter(|| verify(black_box(&f.form), black_box(&f.cube), &tol).unwrap())
        });
    }
    group.finish();

    let mut group = c.benchmark_group("verify_float_n3");
    for k in 0..3 {
        let f = fixture::<f64>(3, k, FieldPool::Transcendental, 7);
        group.bench_with_input(BenchmarkId::from_parameter(k), &f, |b, f| {
            b.iter(|| verify(black_box(&f.form), black_box(&f.cube), &tol).unwrap())
        });
    }
    group.finish();
}

fn exterior_derivative(c: &mut Criterion) {
    let tol = Tolerance::default();
    let f = fixture::<Rational>(4, 2, FieldPool::Polynomial, 11);
    c.bench_function("d_formula_n4_k2", |b| b.iter(|| black_box(&f.form).d().unwrap()));
    c.bench_function("d_extracted_n4_k2", |b| b.iter(|| black_box(&f.form).d_extracted(&f.point, &tol).unwrap()));
}

criterion_group!(benches, weil_products, stokes_identity, exterior_derivative);
criterion_main!(benches);
