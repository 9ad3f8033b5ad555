use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use kruskal_cert::criteria::{check_kgen, check_kruskal, tensor_rank_lb_subset};
use kruskal_cert::generators::identity_n_m;
use kruskal_cert::matroid::connected_components;
use kruskal_cert::oracle::{
    all_decompositions, brute_force_rank, uniqueness_bruteforce, SearchBudget,
};
use kruskal_cert::tensor::family_sum;
use kruskal_cert::{Field, KRankProfile};
use kruskal_cert_bench::{random_gf, random_q};

fn linalg(c: &mut Criterion) {
    let mut g = c.benchmark_group("k-ranks");
    for n in [6, 10, 14] {
        let f = random_q(&[5, 5, 5], n, 1).unwrap();
        g.bench_with_input(BenchmarkId::new("rational 5x5x5", n), &f, |b, f| {
            b.iter(|| KRankProfile::of(black_box(f)))
        });
        let f = random_gf(101, &[5, 5, 5], n, 1).unwrap();
        g.bench_with_input(BenchmarkId::new("GF(101) 5x5x5", n), &f, |b, f| {
            b.iter(|| KRankProfile::of(black_box(f)))
        });
    }
    g.finish();
}

fn criteria(c: &mut Criterion) {
    let mut g = c.benchmark_group("criteria");
    g.sample_size(20);
    for n in [8, 12, 16] {
        let f = random_gf(101, &[6, 6, 6], n, 2).unwrap();
        g.bench_with_input(BenchmarkId::new("kgen", n), &f, |b, f| {
            b.iter(|| check_kgen(black_box(f), None).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("kruskal", n), &f, |b, f| {
            b.iter(|| check_kruskal(black_box(f)).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("subset bound", n), &f, |b, f| {
            b.iter(|| tensor_rank_lb_subset(black_box(f), None).unwrap())
        });
    }
    g.finish();
}

fn matroid(c: &mut Criterion) {
    let mut g = c.benchmark_group("components");
    for n in [8, 16, 32] {
        let v = random_gf(7, &[2, 2, 2], n, 3).unwrap().assembled();
        g.bench_with_input(BenchmarkId::new("GF(7) 2x2x2", n), &v, |b, v| {
            b.iter(|| connected_components(black_box(v)).unwrap())
        });
    }
    g.finish();
}

fn oracle(c: &mut Criterion) {
    let mut g = c.benchmark_group("oracle");
    g.sample_size(10);
    let budget = SearchBudget::default();
    let id = identity_n_m(Field::prime(3).unwrap(), 3, 3).unwrap();
    g.bench_function("rank of 3x3x3 identity over GF(3)", |b| {
        b.iter(|| brute_force_rank(&family_sum(&id), id.mode_dims(), &budget).unwrap())
    });
    g.bench_function("4-term decompositions of 3x3x3 identity over GF(3)", |b| {
        b.iter(|| all_decompositions(&family_sum(&id), id.mode_dims(), 4, &budget).unwrap())
    });
    let f = random_gf(2, &[4, 4, 2], 4, 4).unwrap();
    g.bench_function("uniqueness of 4 random terms in GF(2)^{4x4x2}", |b| {
        b.iter(|| uniqueness_bruteforce(&f, 4, &budget).unwrap())
    });
    g.finish();
}

criterion_group!(benches, linalg, criteria, matroid, oracle);
criterion_main!(benches);
