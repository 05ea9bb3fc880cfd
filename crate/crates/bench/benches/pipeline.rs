use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use dynaheight::bounds::{certificate, sample_intersection, structure_degree_bound, CertifyOptions};
use dynaheight::commute::{commuter_set, default_k_max};
use dynaheight::heights::canonical_height;
use dynaheight::varieties::Signature;
use dynaheight::P1Point;
use dynaheight_bench::{graph_of_iterate, line, quadratic};

fn heights(c: &mut Criterion) {
    let f = quadratic();
    let p = P1Point::int(3);
    let mut g = c.benchmark_group("canonical_height");
    for err in [1e-6, 1e-9, 1e-12] {
        g.bench_with_input(BenchmarkId::from_parameter(err), &err, |b, &e| {
            b.iter(|| canonical_height(&f, black_box(&p), e).unwrap())
        });
    }
    g.finish();
}

fn commuters(c: &mut Criterion) {
    let f: dynaheight::Poly = "x^3 + x".parse().unwrap();
    c.bench_function("commuter_set x^3+x", |b| {
        b.iter(|| commuter_set(black_box(&f), default_k_max(&f).unwrap()).unwrap().elements_up_to(27))
    });
}

fn bounds(c: &mut Criterion) {
    let f = quadratic();
    let x = line();
    let sig = Signature::new(2, vec![], vec![vec![1, 2]]).unwrap();
    c.bench_function("certificate line", |b| b.iter(|| certificate(&x, black_box(&sig), &f).unwrap()));
    let mut g = c.benchmark_group("sample_intersection");
    for l in 1..=4u32 {
        let v = graph_of_iterate(l);
        g.bench_with_input(BenchmarkId::from_parameter(l), &v, |b, v| {
            b.iter(|| sample_intersection(&x, v, 64).unwrap())
        });
    }
    g.finish();
    c.bench_function("structure line", |b| {
        b.iter(|| structure_degree_bound(&x, &f, &CertifyOptions::default()).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = heights, commuters, bounds
}
criterion_main!(benches);
