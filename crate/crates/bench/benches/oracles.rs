//! Benchmarks for the hot paths: field arithmetic, point-set generation,
//! and the two exhaustive oracles.

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use ipqmc::charsum::max_abs_charsum;
use ipqmc::discrepancy::star_discrepancy_exact;
use ipqmc::field::make_field;
use ipqmc::pointset::{generate_size_q, InversiveVectors, SizeQConfig};
use ipqmc::DEFAULT_ORACLE_BUDGET;

fn bench_field_ops(c: &mut Criterion) {
    let field = make_field(2, 10).unwrap();
    let a = field.from_index(777).unwrap();
    let b = field.from_index(555).unwrap();
    c.bench_function("field_mul_gf1024", |bench| {
        bench.iter(|| field.mul(black_box(&a), black_box(&b)).unwrap())
    });
    c.bench_function("field_inv_gf1024", |bench| {
        bench.iter(|| field.inv_or_zero(black_box(&a)).unwrap())
    });
    c.bench_function("field_trace_gf1024", |bench| {
        bench.iter(|| field.trace(black_box(&a)).unwrap())
    });
}

fn bench_generate(c: &mut Criterion) {
    let field = make_field(2, 10).unwrap();
    let cfg = SizeQConfig::with_dimension(field, 3).unwrap();
    c.bench_function("generate_size_q_1024x3", |bench| {
        bench.iter(|| generate_size_q(black_box(&cfg)).unwrap())
    });
}

fn bench_charsum(c: &mut Criterion) {
    let field = make_field(2, 6).unwrap();
    let cfg = SizeQConfig::with_dimension(field, 2).unwrap();
    let vectors = InversiveVectors::size_q(&cfg).unwrap();
    c.bench_function("max_charsum_gf64_order2", |bench| {
        bench.iter(|| max_abs_charsum(black_box(&vectors), &[1, 2], DEFAULT_ORACLE_BUDGET).unwrap())
    });
}

fn bench_discrepancy(c: &mut Criterion) {
    let field = make_field(2, 6).unwrap();
    let cfg = SizeQConfig::with_dimension(field, 2).unwrap();
    let points = generate_size_q(&cfg).unwrap().to_rational();
    c.bench_function("star_discrepancy_gf64_s2", |bench| {
        bench.iter(|| star_discrepancy_exact(black_box(&points), DEFAULT_ORACLE_BUDGET).unwrap())
    });
}

criterion_group!(
    benches,
    bench_field_ops,
    bench_generate,
    bench_charsum,
    bench_discrepancy
);
criterion_main!(benches);
