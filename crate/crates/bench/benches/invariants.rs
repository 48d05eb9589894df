use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use qalens::exactmath::dedekind_sum;
use qalens::obstruct::lp1_search;
use qalens::spinccob::residue_pairing_table;
use qalens::{classify, LensSpace, Registry};

fn d_invariants(c: &mut Criterion) {
    let mut g = c.benchmark_group("d_invariants");
    for (p, q) in [(101, 37), (1009, 433), (10007, 4321)] {
        let l = LensSpace::new(p, q).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(format!("L({p},{q})")), &l, |b, l| {
            b.iter(|| black_box(l).d_invariants())
        });
    }
    g.finish();
}

fn dedekind(c: &mut Criterion) {
    c.bench_function("dedekind_sum(4321, 10007)", |b| b.iter(|| dedekind_sum(black_box(4321), black_box(10007))));
}

fn residue_table(c: &mut Criterion) {
    let (s, t) = (LensSpace::new(5, 3).unwrap(), LensSpace::new(2, 1).unwrap());
    c.bench_function("residue_table L(5,3) -> L(2,1)", |b| {
        b.iter(|| residue_pairing_table(black_box(&s), black_box(&t), -10))
    });
}

fn classification(c: &mut Criterion) {
    let registry = Registry::standard();
    c.bench_function("classify det 7", |b| b.iter(|| classify(black_box(7), &registry)));
}

fn lp1(c: &mut Criterion) {
    let mut g = c.benchmark_group("lp1_search");
    g.sample_size(10);
    g.bench_function("max 1000000", |b| b.iter(|| lp1_search(black_box(1_000_000))));
    g.finish();
}

criterion_group!(benches, d_invariants, dedekind, residue_table, classification, lp1);
criterion_main!(benches);
