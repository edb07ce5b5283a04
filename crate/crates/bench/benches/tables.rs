use std::hint::black_box;

use acd_core::catalog::{self, builtin_simple_data};
use acd_core::metrics::Analysis;
use acd_core::socle::{simulate, SocleShape, TopAction};
use acd_core::{character_table, conjugacy_classes, Cyclotomic};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn tables(c: &mut Criterion) {
    let mut group = c.benchmark_group("character_table");
    let cases = [
        ("A5", catalog::alternating(5).unwrap()),
        ("F13", catalog::frobenius_agl1(13).unwrap()),
        ("S6", catalog::symmetric(6).unwrap()),
        ("S4wrS2", catalog::wreath_imprimitive(&catalog::symmetric(4).unwrap(), 2).unwrap()),
        ("F41", catalog::frobenius_agl1(41).unwrap()),
    ];
    for (name, g) in &cases {
        group.bench_with_input(BenchmarkId::from_parameter(name), g, |b, g| {
            b.iter(|| {
                let classes = conjugacy_classes(g);
                character_table(g, &classes).unwrap()
            })
        });
    }
    group.finish();
}

fn wreath(c: &mut Criterion) {
    let mut group = c.benchmark_group("s4_wreath_s3");
    group.sample_size(10);
    let g = catalog::wreath_imprimitive(&catalog::symmetric(4).unwrap(), 3).unwrap();
    group.bench_function("classes", |b| b.iter(|| conjugacy_classes(black_box(&g))));
    group.bench_function("build_and_analyze", |b| {
        b.iter(|| {
            let g = catalog::wreath_imprimitive(&catalog::symmetric(4).unwrap(), 3).unwrap();
            Analysis::new("S4wrS3", g).unwrap()
        })
    });
    group.finish();
}

fn cyclotomics(c: &mut Criterion) {
    let x = Cyclotomic::root_of_unity(7, 1).add(&Cyclotomic::root_of_unity(9, 2));
    let y = Cyclotomic::root_of_unity(4, 1).sub(&Cyclotomic::root_of_unity(5, 3));
    c.bench_function("cyclotomic_mul_conductor_1260", |b| b.iter(|| black_box(&x).mul(black_box(&y))));
}

fn socle_sim(c: &mut Criterion) {
    let pack = builtin_simple_data();
    let mut group = c.benchmark_group("socle_simulate");
    for shape in ["A5^3", "A5^4", "A5^2 x A6"] {
        let s = SocleShape::parse(shape, &pack).unwrap();
        let action = TopAction::full(&s);
        group.bench_with_input(BenchmarkId::from_parameter(shape), &s, |b, s| b.iter(|| simulate(s, &action).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, tables, wreath, cyclotomics, socle_sim);
criterion_main!(benches);
