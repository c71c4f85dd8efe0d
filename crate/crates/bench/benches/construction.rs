use betapolar::beta_expansion::{breakpoints, constraining_pairs, rank_by_pw, BetaInterval};
use betapolar::oracles::{ga_reliability, oracle_order};
use betapolar::partial_order::{construct_up_to, cover_edges};
use betapolar::BETA_QUARTER_ROOT_TWO;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn partial_order(c: &mut Criterion) {
    let mut g = c.benchmark_group("upo");
    for n in [6u32, 8] {
        g.bench_with_input(BenchmarkId::new("cover_edges", n), &n, |b, &n| {
            b.iter(|| cover_edges(black_box(n)).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("recursive", n), &n, |b, &n| {
            b.iter(|| construct_up_to(black_box(n)).unwrap())
        });
    }
    g.finish();
}

fn ranking(c: &mut Criterion) {
    c.bench_function("rank_by_pw/n10", |b| {
        b.iter(|| rank_by_pw(black_box(10), BETA_QUARTER_ROOT_TWO).unwrap())
    });
    c.bench_function("ga_order/n10", |b| {
        b.iter(|| oracle_order(&ga_reliability(black_box(10), 2.0).unwrap()))
    });
}

fn breakpoint_sets(c: &mut Criterion) {
    let mut g = c.benchmark_group("breakpoints");
    g.sample_size(10);
    for n in [5u32, 7] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| breakpoints(black_box(n)).unwrap())
        });
    }
    let iv = BetaInterval::new(1.18, 1.2).unwrap();
    g.bench_function("constraining/n9", |b| b.iter(|| constraining_pairs(9, iv).unwrap()));
    g.finish();
}

criterion_group!(benches, partial_order, ranking, breakpoint_sets);
criterion_main!(benches);
