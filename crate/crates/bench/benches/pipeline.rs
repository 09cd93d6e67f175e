use std::hint::black_box;

use anosov_core::freenil::{free_nilpotent_lift, hall_basis};
use anosov_core::normalforms::{sr_group_dimension, ContractionSpectrum, Convention};
use anosov_core::report::{analyze, fixtures, ActionFile};
use anosov_core::weyl::{weyl_chambers, LyapunovFunctional};
use anosov_core::{root_modulus_classes, Config, IntPolynomial};
use criterion::{criterion_group, criterion_main, Criterion};

fn moduli(c: &mut Criterion) {
    let p = IntPolynomial::from_i64(&[1, -3, 0, 1]);
    c.bench_function("root_modulus_classes cubic", |b| b.iter(|| root_modulus_classes(black_box(&p))));
}

fn audits(c: &mut Criterion) {
    let cfg = Config::default();
    for (name, text) in [("cartan", fixtures::CARTAN), ("example", fixtures::BLOCK_UNIPOTENT)] {
        let f = ActionFile::parse(text).unwrap();
        c.bench_function(&format!("analyze {name}"), |b| b.iter(|| analyze(black_box(&f), &cfg).unwrap()));
    }
}

fn chambers(c: &mut Criterion) {
    let cfg = Config::default();
    let fs: Vec<LyapunovFunctional> = [[1, 0], [0, 1], [1, 1], [1, -1], [2, 1], [1, 2], [3, -1], [1, -3]]
        .iter()
        .map(|v| LyapunovFunctional::synthetic_i64(v))
        .collect();
    c.bench_function("planar chambers 8 lines", |b| b.iter(|| weyl_chambers(black_box(&fs), &cfg).unwrap()));
    let fs3: Vec<LyapunovFunctional> = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1], [1, -1, 0]]
        .iter()
        .map(|v| LyapunovFunctional::synthetic_i64(v))
        .collect();
    c.bench_function("spatial chambers 5 planes", |b| b.iter(|| weyl_chambers(black_box(&fs3), &cfg).unwrap()));
}

fn lifts(c: &mut Criterion) {
    c.bench_function("hall basis 3x4", |b| b.iter(|| hall_basis(3, 4, 10_000).unwrap()));
    let a = anosov_core::linalg::IntMatrix::from_i64(&[&[0, 0, -1], &[1, 0, 3], &[0, 1, 0]]);
    let act = anosov_core::actions::validate(vec![a]).unwrap();
    c.bench_function("free lift step 3", |b| b.iter(|| free_nilpotent_lift(black_box(&act), 3, 10_000).unwrap()));
}

fn subresonance(c: &mut Criterion) {
    let cfg = Config::default();
    let spec = ContractionSpectrum::from_i64(&[-1, -2, -3, -5], &[2, 1, 3, 2]).unwrap();
    c.bench_function("subresonance dimension l=4", |b| {
        b.iter(|| sr_group_dimension(black_box(&spec), Convention::DiagonalLinear, &cfg).unwrap())
    });
}

criterion_group!(benches, moduli, audits, chambers, lifts, subresonance);
criterion_main!(benches);
