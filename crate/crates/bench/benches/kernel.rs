use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use t2lift_bench::{deformed_plane, sphere, warped};
use t2lift_core::analysis::{check_thm1_semisymmetry, Options};
use t2lift_core::manifold::{christoffel, riemann};
use t2lift_core::parse_expr;

fn simplification(c: &mut Criterion) {
    let vars = ["x1", "x2"];
    c.bench_function("parse+canonicalize rational", |b| {
        b.iter(|| {
            parse_expr(
                black_box("(x1^2 - x2^2)/(x1 - x2) + 1/(2 + x1^2) - x2/(x1*x2)"),
                &vars,
            )
            .unwrap()
        })
    });
    c.bench_function("canonicalize trig", |b| {
        b.iter(|| {
            parse_expr(
                black_box("sin(x1)^4 + 2*sin(x1)^2*cos(x1)^2 + cos(x1)^4"),
                &vars,
            )
            .unwrap()
        })
    });
    let e = parse_expr("exp(x2/(2 + x1^2))*sin(x1*x2)", &vars).unwrap();
    c.bench_function("second derivative", |b| {
        b.iter(|| black_box(&e).differentiate("x1").differentiate("x2"))
    });
}

fn curvature(c: &mut Criterion) {
    let s = sphere();
    c.bench_function("sphere christoffel+riemann", |b| {
        b.iter(|| riemann(&christoffel(black_box(s.metric())).unwrap()).unwrap())
    });
    let d = deformed_plane();
    c.bench_function("deformed gbar christoffel (dim 6)", |b| {
        b.iter(|| christoffel(black_box(d.gbar())).unwrap())
    });
    let w = warped();
    c.bench_function("warped gbar christoffel (dim 9)", |b| {
        b.iter(|| christoffel(black_box(w.gbar())).unwrap())
    });
}

fn semisymmetry(c: &mut Criterion) {
    let mut group = c.benchmark_group("semi-symmetry");
    group.sample_size(10);
    let opts = Options::default();
    group.bench_function("sphere numeric bundle", |b| {
        b.iter_with_large_drop(|| check_thm1_semisymmetry(&sphere(), &opts).unwrap())
    });
    group.finish();
}

criterion_group!(benches, simplification, curvature, semisymmetry);
criterion_main!(benches);
