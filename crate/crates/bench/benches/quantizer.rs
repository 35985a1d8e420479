use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use pqdtw_bench::walks;
use pqdtw_core::{train, TrainParams};

fn quantizer(c: &mut Criterion) {
    let data = walks(256, 320, 1);
    let params = TrainParams::new(8, 64).with_tail(4).with_level(3).with_seed(2);
    let cb = train(&data, &params).unwrap();
    let queries = walks(20, 320, 3);
    let codes = cb.encode_all(&data).unwrap();

    let mut g = c.benchmark_group("pq");
    g.sample_size(20);
    g.bench_function("train/256x320/M8/K64", |b| b.iter(|| train(black_box(&data), &params).unwrap()));
    g.finish();

    c.bench_function("encode/320/M8/K64", |b| b.iter(|| cb.encode(black_box(&queries[0])).unwrap()));
    c.bench_function("asym_table/320/M8/K64", |b| b.iter(|| cb.asym_table(black_box(&queries[0])).unwrap()));
    let table = cb.asym_table(&queries[0]).unwrap();
    c.bench_function("asym_scan/256", |b| {
        b.iter(|| codes.iter().map(|code| table.distance(code).unwrap()).fold(f64::INFINITY, f64::min))
    });
    c.bench_function("sym_scan/256", |b| {
        b.iter(|| {
            codes
                .iter()
                .map(|code| cb.sym_distance(&codes[0], code).unwrap())
                .fold(f64::INFINITY, f64::min)
        })
    });
}

criterion_group!(benches, quantizer);
criterion_main!(benches);
