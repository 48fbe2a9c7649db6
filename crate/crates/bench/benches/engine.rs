use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use waring_bench::{example_one_exact, example_one_float};
use waring_core::oracle::{solve_system, torus_residue_quadrature, QuadratureSpec, Radii};
use waring_core::transcend::{truncated_sigma, Example2Family, SeriesJob, Shells};
use waring_core::{power_sum, power_sum_transformed, Exact, Float, Jet, MultiIndex, PowerSumRequest, Scalar};

fn engine(c: &mut Criterion) {
    let exact = example_one_exact();
    let float = example_one_float();
    let ts = float.transform().unwrap();
    let mut g = c.benchmark_group("power_sum");
    for gamma in [[0u32, 0], [1, 1], [2, 2]] {
        let gamma = MultiIndex::from_slice(&gamma);
        let req = PowerSumRequest::new(gamma.clone(), Exact::from_i64(1));
        g.bench_function(format!("exact {gamma}"), |b| b.iter(|| power_sum(black_box(&exact), &req).unwrap()));
        let req = PowerSumRequest::new(gamma.clone(), Float::from_i64(1));
        g.bench_function(format!("float {gamma}"), |b| b.iter(|| power_sum(black_box(&float), &req).unwrap()));
        g.bench_function(format!("float transformed {gamma}"), |b| {
            b.iter(|| power_sum_transformed(black_box(&ts), &req).unwrap())
        });
    }
    g.finish();
}

fn jets(c: &mut Criterion) {
    let ts = example_one_float().transform().unwrap();
    let order = MultiIndex::from_slice(&[4, 4]);
    let center = vec![Float::new(0.3, 0.1), Float::new(-0.7, 0.2)];
    let a = Jet::from_poly(&ts.equation(0), &center, &order).unwrap();
    let b = Jet::from_poly(&ts.equation(1), &center, &order).unwrap();
    c.bench_function("jet mul 4x4", |bch| bch.iter(|| black_box(&a).mul(&b).unwrap()));
    c.bench_function("jet invert 4x4", |bch| bch.iter(|| black_box(&a).invert().unwrap()));
}

fn oracles(c: &mut Criterion) {
    let ts = example_one_exact().transform().unwrap();
    c.bench_function("solve_system example 1", |b| b.iter(|| solve_system(black_box(&ts)).unwrap()));
    let spec = QuadratureSpec {
        radii: Radii::Default,
        nodes_per_dim: 64,
        t: Float::new(0.001, 0.0),
    };
    c.bench_function("quadrature 64x64", |b| {
        b.iter(|| torus_residue_quadrature(black_box(&ts), &MultiIndex::zeros(2), &spec).unwrap())
    });
}

fn series(c: &mut Criterion) {
    let family = Example2Family {
        a2: 1.0,
        a3: 1.0,
        b1: 1.0,
        b2: -1.0,
        b3: 1.0,
    };
    let job = SeriesJob {
        gamma: MultiIndex::zeros(2),
        s_max: vec![20, 20],
        shells: Shells::Rectangle,
    };
    let mut g = c.benchmark_group("series");
    g.sample_size(10);
    g.bench_function("example 2, 400 subsystems", |b| b.iter(|| truncated_sigma(&family, black_box(&job)).unwrap()));
    g.finish();
}

criterion_group!(benches, engine, jets, oracles, series);
criterion_main!(benches);
