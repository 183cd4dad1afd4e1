use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use docwarp::warper::{warp_image_with, WarpMode};
use docwarp::warpfield::{build_field_with, diagonal, sample_params, WarpType};
use docwarp::{pages, Exec, Interpolant};

const ROWS: usize = 1754;
const COLS: usize = 1240;

fn field(c: &mut Criterion) {
    let params = sample_params(WarpType::I, diagonal(ROWS, COLS), 7);
    let mut group = c.benchmark_group("build_field");
    group.sample_size(20);
    for exec in [Exec::Sequential, Exec::Parallel] {
        group.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &exec, |b, &exec| {
            b.iter(|| build_field_with(exec, ROWS, COLS, black_box(&params), Interpolant::Monotone).unwrap())
        });
    }
    group.finish();
}

fn warp(c: &mut Criterion) {
    let params = sample_params(WarpType::III, diagonal(ROWS, COLS), 7);
    let field = build_field_with(Exec::Parallel, ROWS, COLS, &params, Interpolant::Monotone).unwrap();
    let page = pages::text_page(ROWS, COLS, 1);
    let mut group = c.benchmark_group("warp_image");
    group.sample_size(20);
    for exec in [Exec::Sequential, Exec::Parallel] {
        group.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &exec, |b, &exec| {
            b.iter(|| warp_image_with(exec, black_box(&page), &field, WarpMode::Backward).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, field, warp);
criterion_main!(benches);
