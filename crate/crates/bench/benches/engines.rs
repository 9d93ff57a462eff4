use catstat_bench::spec;
use catstat_core::abnormal::{analyze, Tolerances};
use catstat_core::census::{bona_census_132, AverageEngine};
use catstat_core::funceq::{eval_full, eval_marginal, eval_truncated};
use catstat_core::guess::{guess_p_recursive, Sequence};
use catstat_core::moments::moments_from_truncated;
use catstat_core::{Family, Permutation, Rational};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_bigint::BigUint;
use std::hint::black_box;

fn funceq(c: &mut Criterion) {
    let mut g = c.benchmark_group("funceq");
    g.sample_size(10);
    let inv = spec(Family::Av132, "21");
    let av123 = spec(Family::Av123, "213");
    g.bench_function("full av132/21 n=30", |b| b.iter(|| eval_full(black_box(&inv), 30).unwrap()));
    g.bench_function("full av123/213 n=14", |b| b.iter(|| eval_full(black_box(&av123), 14).unwrap()));
    g.bench_function("marginal av123/213 n=30", |b| b.iter(|| eval_marginal(black_box(&av123), 30, "t").unwrap()));
    for n in [50, 100] {
        g.bench_with_input(BenchmarkId::new("truncated av132/231 R=4", n), &n, |b, &n| {
            let s = spec(Family::Av132, "231");
            b.iter(|| eval_truncated(&s, n, 4).unwrap())
        });
    }
    g.bench_function("truncated av123/213 n=60 R=4", |b| b.iter(|| eval_truncated(&av123, 60, 4).unwrap()));
    g.finish();
}

fn moments(c: &mut Criterion) {
    let s = spec(Family::Av132, "321");
    let seq = eval_truncated(&s, 80, 6).unwrap();
    c.bench_function("moments av132/321 n=80 r=6", |b| b.iter(|| moments_from_truncated(black_box(&seq), 6).unwrap()));
}

fn census(c: &mut Criterion) {
    let mut g = c.benchmark_group("census");
    g.sample_size(10);
    let all5 = Permutation::all(5);
    g.bench_function("averages |p|=5 n=30", |b| b.iter(|| AverageEngine::<BigUint>::new(black_box(&all5), 30).unwrap()));
    g.bench_function("bona 132 k=7", |b| b.iter(|| bona_census_132(7, 30).unwrap()));
    g.finish();
}

fn guessing(c: &mut Criterion) {
    let s = spec(Family::Av123, "213");
    let seq = eval_truncated(&s, 35, 3).unwrap();
    let six = Rational::from(6);
    let f3: Vec<Rational> = seq.truncated().unwrap().iter().map(|x| &x.coeff(&[3, 0, 0]) * &six).collect();
    let f3 = Sequence::new("f3", 0, f3);
    let mut g = c.benchmark_group("guess");
    g.sample_size(10);
    g.bench_function("p-recursive third moment", |b| b.iter(|| guess_p_recursive(black_box(&f3), 4, 4, 6).unwrap()));
    g.finish();
}

fn abnormality(c: &mut Criterion) {
    let mut g = c.benchmark_group("abnormal");
    g.sample_size(10);
    let p = "21".parse().unwrap();
    g.bench_function("av132/21 N=100", |b| b.iter(|| analyze(Family::Av132, &p, 100, 4, &Tolerances::default()).unwrap()));
    g.finish();
}

criterion_group!(benches, funceq, moments, census, guessing, abnormality);
criterion_main!(benches);
