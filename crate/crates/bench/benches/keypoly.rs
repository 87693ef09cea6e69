use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use keypoly_bench::shipped_scenario;
use keypoly_core::{construct_fp, kaplansky_minimizer, rat, run_check, truncate, CheckId, GammaSeq, MinimizerInput};

fn valuation(c: &mut Criterion) {
    let s = shipped_scenario("as2.scn");
    let f = s.big_f().clone();
    let q4 = s.key(4).unwrap().clone();
    c.bench_function("nu(F) by series evaluation", |b| b.iter(|| s.nu(black_box(&f)).unwrap()));
    c.bench_function("truncation of F at Q4", |b| {
        b.iter(|| truncate(s.valuation(), black_box(&f), &q4).unwrap())
    });
    c.bench_function("epsilon(F)", |b| b.iter(|| s.valuation().epsilon(black_box(&f)).unwrap()));
}

fn rewrites(c: &mut Criterion) {
    let s = shipped_scenario("as2.scn");
    c.bench_function("construct_fp at theta 5", |b| b.iter(|| construct_fp(&s, black_box(5)).unwrap()));
    let input = MinimizerInput {
        pairs: vec![(rat(3, 2), 1), (rat(0, 1), 2), (rat(-1, 3), 4)],
        gammas: GammaSeq::closed_form(1, Some(rat(0, 1)), |s| -rat(1, 1 << s.min(40))),
    };
    c.bench_function("kaplansky minimizer", |b| b.iter(|| kaplansky_minimizer(black_box(&input)).unwrap()));
}

fn checks(c: &mut Criterion) {
    let s = shipped_scenario("as2.scn");
    let corpus = s.corpus();
    let mut g = c.benchmark_group("checks");
    g.sample_size(10);
    for id in [CheckId::Trc, CheckId::L22, CheckId::P24] {
        g.bench_function(id.as_str(), |b| b.iter(|| run_check(id, &s, &corpus, 5).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, valuation, rewrites, checks);
criterion_main!(benches);
