use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use arrfq_bench::appendix_arrangements;
use arrfq_core::constructions::full3q;
use arrfq_core::group::{cycle_type_tally, polya_polynomial};
use arrfq_core::search::{canonize, enumerate_simplicial, incidence_of};
use arrfq_core::{Arrangement, FiniteField, Plane};

fn profile(c: &mut Criterion) {
    let last = appendix_arrangements().pop().unwrap();
    c.bench_function("profile q=13 31 lines", |b| {
        b.iter(|| {
            let a = Arrangement::from_indices(last.plane().clone(), last.lines().iter().map(|&l| l as usize)).unwrap();
            black_box(a.simplicial_by_count().unwrap())
        })
    });
}

fn canonical_forms(c: &mut Criterion) {
    let a = full3q(&FiniteField::of_order(7).unwrap()).unwrap();
    c.bench_function("canonize full3q q=7", |b| {
        b.iter(|| black_box(canonize(a.plane(), a.lines()).unwrap()))
    });
    let rows = appendix_arrangements();
    c.bench_function("incidence certificate appendix row 29", |b| {
        b.iter(|| black_box(incidence_of(&rows[28]).certificate()))
    });
}

fn polya(c: &mut Criterion) {
    let plane = Plane::of_order(4).unwrap();
    c.bench_function("polya q=4", |b| {
        b.iter(|| {
            let t = cycle_type_tally(&plane, 7).unwrap();
            black_box(polya_polynomial(&t, None).unwrap())
        })
    });
}

fn census(c: &mut Criterion) {
    let plane = Plane::of_order(4).unwrap();
    let mut g = c.benchmark_group("census");
    g.sample_size(10);
    g.bench_function("enumerate simplicial q=4", |b| {
        b.iter(|| black_box(enumerate_simplicial(&plane, 12).unwrap()))
    });
    g.finish();
}

criterion_group!(benches, profile, canonical_forms, polya, census);
criterion_main!(benches);
