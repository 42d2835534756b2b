use criterion::{Criterion, criterion_group, criterion_main};
use std::hint::black_box;

use bipath_core::bipath::{BipathPoset, plant_random};
use bipath_core::distance::bottleneck_distance;
use bipath_core::field::FieldSpec;
use bipath_core::zigzag::{ZigzagShape, plant_random_rep};

fn bench_slice_barcode(c: &mut Criterion) {
    let field = FieldSpec::new(5).unwrap();
    let shape = ZigzagShape::alternating(21);
    let (rep, _) = plant_random_rep(&shape, field, 10, 42);
    c.bench_function("zigzag_barcode_L21_s10", |b| {
        b.iter(|| black_box(&rep).barcode())
    });
}

fn bench_arc_code(c: &mut Criterion) {
    let poset = BipathPoset::new(4, 4).unwrap();
    let field = FieldSpec::new(5).unwrap();
    let (module, _) = plant_random(poset, field, 8, 42);
    c.bench_function("arc_code_n4_m4_s8", |b| {
        b.iter(|| black_box(&module).arc_code().unwrap())
    });
}

fn bench_bottleneck(c: &mut Criterion) {
    let poset = BipathPoset::new(4, 4).unwrap();
    let field = FieldSpec::new(2).unwrap();
    let (ma, _) = plant_random(poset, field, 8, 1);
    let (mb, _) = plant_random(poset, field, 8, 2);
    let a = ma.arc_code().unwrap();
    let b = mb.arc_code().unwrap();
    c.bench_function("bottleneck_n4_m4_s8", |bch| {
        bch.iter(|| bottleneck_distance(black_box(&a), black_box(&b), &poset).unwrap())
    });
}

criterion_group!(
    benches,
    bench_slice_barcode,
    bench_arc_code,
    bench_bottleneck
);
criterion_main!(benches);
