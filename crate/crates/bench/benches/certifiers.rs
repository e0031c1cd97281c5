use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use sparsecode::codes::lwise_distance;
use sparsecode::group_testing::{gt_roundtrip, verify_disjunct};
use sparsecode::list_decoding::list_size_at_radius;
use sparsecode::props::{flat_rip_constant, kernel_injectivity, rip2_constant};
use sparsecode::recovery::{cs_decode_exhaustive, DEFAULT_TOLERANCE};
use sparsecode::{Caps, Complex64};
use sparsecode_bench::{binary_linear_code, kautz_singleton_matrix, sparse_measurement, spherical_matrix, vandermonde};

fn matrix_properties(c: &mut Criterion) {
    let caps = Caps::default();
    let m = spherical_matrix(16, 5, 5);
    c.bench_function("rip2 order 3, 32 columns", |b| b.iter(|| rip2_constant(black_box(&m), 3, &caps).unwrap()));
    c.bench_function("flat rip order 2, 32 columns", |b| {
        b.iter(|| flat_rip_constant(black_box(&m), 2, &caps).unwrap())
    });
    let v = vandermonde(6, 12);
    c.bench_function("kernel injectivity order 3, 6x12", |b| {
        b.iter(|| kernel_injectivity(black_box(&v), 3, &caps).unwrap())
    });
}

fn group_testing(c: &mut Criterion) {
    let caps = Caps::default();
    let ks = kautz_singleton_matrix(5, 2);
    c.bench_function("disjunct order 4, KS(5,2)", |b| b.iter(|| verify_disjunct(black_box(&ks), 4, &caps).unwrap()));
    c.bench_function("gt roundtrip weight 2, KS(5,2)", |b| b.iter(|| gt_roundtrip(black_box(&ks), 2, 0).unwrap()));
}

fn codes(c: &mut Criterion) {
    let caps = Caps::default();
    let code = binary_linear_code(14, 4, 5);
    c.bench_function("list size, n=14, 16 words", |b| {
        b.iter(|| list_size_at_radius(black_box(&code), 0.25, &caps).unwrap())
    });
    c.bench_function("6-wise distance, 16 words", |b| b.iter(|| lwise_distance(black_box(&code), 6, &caps).unwrap()));
}

fn recovery(c: &mut Criterion) {
    let caps = Caps::default();
    let m = vandermonde(6, 12);
    let y = sparse_measurement(&m, &[7, 9, 11], Complex64::new(1.0, -0.5));
    c.bench_function("exhaustive decode L=3, 6x12", |b| {
        b.iter(|| cs_decode_exhaustive(black_box(&m), black_box(&y), 3, DEFAULT_TOLERANCE, &caps).unwrap())
    });
}

criterion_group!(benches, matrix_properties, group_testing, codes, recovery);
criterion_main!(benches);
