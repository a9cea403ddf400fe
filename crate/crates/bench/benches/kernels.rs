use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use enumtc_bench::restricted_sequence;
use enumtc_core::arith::{Fp, NumberField, PrimeField};
use enumtc_core::bpu::{standard_generators, verify_generators, NablaContext};
use enumtc_core::geometry::{fermat_k_elements, fermat_lines, flex_points, klein_quartic, lines_induced_permutation};
use enumtc_core::koszul::{em_poincare, is_regular_maximal, tor_concentration_check};
use enumtc_core::restriction::SubgroupDatum;

fn koszul(c: &mut Criterion) {
    let (k, m) = restricted_sequence(&SubgroupDatum::fermat_k());
    c.bench_function("regularity certificate (K)", |b| b.iter(|| is_regular_maximal(black_box(&k)).unwrap()));
    c.bench_function("em_poincare (K)", |b| b.iter(|| em_poincare(black_box(&k), m, 17).unwrap()));
    c.bench_function("tor concentration to 20 (K)", |b| b.iter(|| tor_concentration_check(black_box(&k), m, 20)));
}

fn nabla(c: &mut Criterion) {
    let gens = standard_generators(4).unwrap();
    let ctx = NablaContext::<Fp>::new(4, &PrimeField::new(3).unwrap()).unwrap();
    c.bench_function("nabla generators n=4 p=3 to degree 12", |b| {
        b.iter(|| verify_generators(black_box(&ctx), &gens, 12).unwrap())
    });
}

fn geometry(c: &mut Criterion) {
    let q3 = NumberField::cyclotomic(3).unwrap();
    c.bench_function("fermat lines", |b| b.iter(|| fermat_lines(black_box(&q3)).unwrap()));
    let lines = fermat_lines(&q3).unwrap();
    let els = fermat_k_elements(&q3);
    c.bench_function("K action on lines", |b| {
        b.iter(|| els.iter().map(|g| lines_induced_permutation(g, black_box(&lines)).unwrap()).collect::<Vec<_>>())
    });

    let (f, k) = klein_quartic().unwrap();
    let mut group = c.benchmark_group("klein");
    group.sample_size(10);
    group.bench_function("flex points", |b| b.iter(|| flex_points(black_box(&f), k.embedding, 1e-8).unwrap()));
    group.finish();
}

criterion_group!(benches, koszul, nabla, geometry);
criterion_main!(benches);
