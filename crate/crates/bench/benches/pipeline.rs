use std::hint::black_box;

use circlefix::localization::{abbv_integral, ChernMonomial};
use circlefix::{enumerate_skeletons, laurent_ratio, rigidity_verdict};
use circlefix_bench::{cpn, product};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn localization(c: &mut Criterion) {
    let mut g = c.benchmark_group("abbv_integral");
    for n in [3, 6, 9] {
        let d = cpn(n);
        let m = ChernMonomial::c1_pow(n);
        g.bench_with_input(BenchmarkId::new("cpn_c1_pow_n", n), &d, |b, d| {
            b.iter(|| abbv_integral(black_box(d), &m).unwrap())
        });
    }
    g.finish();
}

fn skeletons(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate_skeletons");
    for (a, b) in [(1, 1), (2, 2), (3, 3)] {
        let d = product(a, b);
        g.bench_with_input(BenchmarkId::new("product", format!("{a}x{b}")), &d, |bch, d| {
            bch.iter(|| enumerate_skeletons(black_box(d), 1000, false))
        });
    }
    g.finish();
}

fn laurent(c: &mut Criterion) {
    let num: Vec<i64> = vec![12, -7, 5, 9, -3, 11, 4, -8];
    let den: Vec<i64> = vec![-7, 4, 12, -3];
    c.bench_function("laurent_ratio/8_by_4", |b| b.iter(|| laurent_ratio(black_box(&num), black_box(&den)).unwrap()));
}

fn rigidity(c: &mut Criterion) {
    let mut g = c.benchmark_group("rigidity_verdict");
    for n in [2, 5, 8] {
        let d = cpn(n);
        g.bench_with_input(BenchmarkId::new("cpn", n), &d, |b, d| b.iter(|| rigidity_verdict(black_box(d))));
    }
    g.finish();
}

criterion_group!(benches, localization, skeletons, laurent, rigidity);
criterion_main!(benches);
