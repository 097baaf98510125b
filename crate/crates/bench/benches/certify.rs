use std::hint::black_box;

use campana_core::campana::generate_campana_contacts;
use campana_core::curve::{normalized_markings, seeded_markings};
use campana_core::p1::{dihedral_cover, icosahedral_cover};
use campana_core::{
    build_curve, projective_space_fan, smith_normal_form, verify_tangency, CampanaStructure,
    Characteristic, IntegerMatrix, Multiplicity,
};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn snf(c: &mut Criterion) {
    let mut group = c.benchmark_group("smith_normal_form");
    for n in [4usize, 8, 16] {
        // deterministic dense matrix with mixed signs
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| ((i * 7 + j * 13) % 19) as i64 - 9).collect())
            .collect();
        let a = IntegerMatrix::from_rows(&rows).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &a, |b, a| {
            b.iter(|| smith_normal_form(black_box(a)))
        });
    }
    group.finish();
}

fn p2_pipeline(c: &mut Criterion) {
    let fan = projective_space_fan(2).unwrap();
    let structure = CampanaStructure::uniform(&fan, Multiplicity::Finite(2)).unwrap();
    let mut group = c.benchmark_group("p2_pipeline");
    for degree in [6u64, 12, 24] {
        group.bench_with_input(
            BenchmarkId::from_parameter(degree),
            &degree,
            |b, &degree| {
                b.iter(|| {
                    let contacts = generate_campana_contacts(
                        &fan,
                        &structure,
                        &[degree; 3],
                        Characteristic::ZERO,
                    )
                    .unwrap();
                    let table = contacts.coefficient_table();
                    let s = seeded_markings(1, table.len(), Characteristic::ZERO);
                    let x = seeded_markings(2, 3, Characteristic::ZERO);
                    let curve = build_curve(2, &normalized_markings(&s), &table, &x).unwrap();
                    verify_tangency(&curve, Some(structure.multiplicities())).unwrap()
                })
            },
        );
    }
    group.finish();
}

fn covers(c: &mut Criterion) {
    let mut group = c.benchmark_group("orbifold_covers");
    group.sample_size(10);
    group.bench_function("dihedral_7", |b| {
        b.iter(|| dihedral_cover(black_box(7), Characteristic::ZERO).unwrap())
    });
    group.bench_function("icosahedral", |b| {
        b.iter(|| icosahedral_cover(Characteristic::ZERO).unwrap())
    });
    group.finish();
}

criterion_group!(benches, snf, p2_pipeline, covers);
criterion_main!(benches);
