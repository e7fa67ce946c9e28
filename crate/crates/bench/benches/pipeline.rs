use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use gkf_core::coboundary::{betti_row, d_matrix, invariant_bases, NoCheckpoint};
use gkf_core::exactlin::{kernel_basis, rank};
use gkf_core::{cochain_dimension, dims_row};

fn dimensions(c: &mut Criterion) {
    c.bench_function("cochain_dimension m=7 w=30", |b| {
        b.iter(|| cochain_dimension(black_box(7), black_box(30)))
    });
    c.bench_function("dims_row w=30", |b| b.iter(|| dims_row(black_box(30))));
}

fn linear_algebra(c: &mut Criterion) {
    // the largest differential at weight 16
    let source = invariant_bases(16, 6, &NoCheckpoint).unwrap();
    let target = invariant_bases(16, 7, &NoCheckpoint).unwrap();
    let d = d_matrix(16, 6, &source, &target).unwrap().matrix;
    c.bench_function("rank d w=16 m=6", |b| b.iter(|| rank(black_box(&d))));
    c.bench_function("kernel d w=16 m=6", |b| {
        b.iter(|| kernel_basis(black_box(&d)))
    });
    c.bench_function("d_matrix w=16 m=6", |b| {
        b.iter(|| d_matrix(16, 6, black_box(&source), black_box(&target)).unwrap())
    });
}

fn pipeline(c: &mut Criterion) {
    let mut g = c.benchmark_group("betti_row");
    g.sample_size(10);
    for w in [10, 12, 14] {
        g.bench_function(format!("w={w}"), |b| {
            b.iter(|| betti_row(black_box(w)).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, dimensions, linear_algebra, pipeline);
criterion_main!(benches);
