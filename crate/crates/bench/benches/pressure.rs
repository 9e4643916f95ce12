use betakit::language::count_words;
use betakit::pressure::{log_partition_sum, Subset};
use betakit::{transfer_pressure, HofbauerGraph, KneadingPair, Parameters, Potential};
use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

fn pressure(c: &mut Criterion) {
    let kp = KneadingPair::compute(&Parameters::parse("0.5", "3.2").unwrap(), 200).unwrap();
    let phi = Potential::from_fn(2, &kp, |w| (w[0] as f64 - 0.7 * w[1] as f64).sin()).unwrap();
    let g = HofbauerGraph::build(&kp, 40).unwrap();
    c.bench_function("transfer_range2_depth40", |b| {
        b.iter(|| transfer_pressure(black_box(&g), &phi).unwrap())
    });
    c.bench_function("partition_sum_n100", |b| {
        b.iter(|| log_partition_sum(100, black_box(&phi), &kp, Subset::FullLanguage).unwrap())
    });
    c.bench_function("count_words_n60", |b| {
        b.iter(|| count_words(60, black_box(&kp)).unwrap())
    });
}

criterion_group!(benches, pressure);
criterion_main!(benches);
