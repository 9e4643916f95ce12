use betakit::example::example_parameters;
use betakit::{kneading_b, HofbauerGraph, KneadingPair, Parameters};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn kneading(c: &mut Criterion) {
    let mut g = c.benchmark_group("kneading");
    let rational = Parameters::parse("3/10", "29/10").unwrap();
    let algebraic = Parameters::parse("0.3", "poly:-7,0,1@2.5,2.7").unwrap();
    for n in [100, 400] {
        g.bench_with_input(BenchmarkId::new("rational", n), &n, |b, &n| {
            b.iter(|| KneadingPair::compute(black_box(&rational), n).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("sqrt7", n), &n, |b, &n| {
            b.iter(|| KneadingPair::compute(black_box(&algebraic), n).unwrap())
        });
    }
    let example = example_parameters().unwrap();
    g.bench_function("example_b_200", |b| {
        b.iter(|| kneading_b(black_box(&example), 200).unwrap())
    });
    g.finish();
}

fn graph(c: &mut Criterion) {
    let kp = KneadingPair::compute(&Parameters::parse("0.25", "2.5").unwrap(), 400).unwrap();
    c.bench_function("graph_build_400", |b| {
        b.iter(|| HofbauerGraph::build(black_box(&kp), 400).unwrap())
    });
}

criterion_group!(benches, kneading, graph);
criterion_main!(benches);
