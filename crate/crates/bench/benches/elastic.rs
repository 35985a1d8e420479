use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pqdtw_bench::walks;
use pqdtw_core::{dtw, keogh_envelope, lb_keogh, modwt_scale, nn_search_cascaded, WarpingWindow};

fn dtw_by_length(c: &mut Criterion) {
    let mut g = c.benchmark_group("dtw");
    for len in [128, 512, 1600] {
        let s = walks(2, len, 1);
        for (name, w) in [("full", WarpingWindow::Unconstrained), ("10%", WarpingWindow::from_percent(10.0, len))] {
            g.bench_with_input(BenchmarkId::new(name, len), &s, |b, s| {
                b.iter(|| dtw(black_box(&s[0]), black_box(&s[1]), w).unwrap())
            });
        }
    }
    g.finish();
}

fn lower_bounds(c: &mut Criterion) {
    let s = walks(2, 512, 2);
    let w = WarpingWindow::SakoeChiba(25);
    let env = keogh_envelope(&s[1], w);
    c.bench_function("lb_keogh/512", |b| b.iter(|| lb_keogh(black_box(&s[0]), &env).unwrap()));
    c.bench_function("keogh_envelope/512", |b| b.iter(|| keogh_envelope(black_box(&s[1]), w)));

    let data = walks(200, 256, 3);
    let query = &walks(1, 256, 4)[0];
    let w = WarpingWindow::SakoeChiba(12);
    let envs: Vec<_> = data.iter().map(|s| keogh_envelope(s, w)).collect();
    c.bench_function("nn_search_cascaded/200x256", |b| {
        b.iter(|| nn_search_cascaded(black_box(query), &data, &envs, w).unwrap())
    });
}

fn modwt(c: &mut Criterion) {
    let s = walks(1, 1600, 5);
    c.bench_function("modwt_scale/1600/J3", |b| b.iter(|| modwt_scale(black_box(&s[0]), 3).unwrap()));
}

criterion_group!(benches, dtw_by_length, lower_bounds, modwt);
criterion_main!(benches);
