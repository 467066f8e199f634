use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lumpkit_bench::{hypercube, planted, uniform_coupon};
use lumpkit_core::{build_quotient, compress, preservation_check, DEFAULT_EPSILON};

fn bench_compress(c: &mut Criterion) {
    let mut group = c.benchmark_group("compress");
    for n in [4, 6, 8] {
        let (chain, targets) = uniform_coupon(n);
        group.bench_with_input(BenchmarkId::new("coupon", n), &n, |b, _| {
            b.iter(|| compress(&chain, &targets).unwrap())
        });
    }
    for d in [3, 5, 7] {
        let (chain, targets) = hypercube(d);
        group.bench_with_input(BenchmarkId::new("hypercube", d), &d, |b, _| {
            b.iter(|| compress(&chain, &targets).unwrap())
        });
    }
    for n in [20, 50, 200] {
        let (chain, targets) = planted(n, 7);
        group.bench_with_input(BenchmarkId::new("planted", n), &n, |b, _| {
            b.iter(|| compress(&chain, &targets).unwrap())
        });
    }
    group.finish();
}

fn bench_quotient_and_check(c: &mut Criterion) {
    let (chain, targets) = hypercube(6);
    let partition = compress(&chain, &targets).unwrap().partition;
    c.bench_function("quotient/hypercube/6", |b| {
        b.iter(|| build_quotient(&chain, &partition, &targets, DEFAULT_EPSILON).unwrap())
    });
    c.bench_function("preservation/hypercube/6/tau20", |b| {
        b.iter(|| preservation_check(&chain, &targets, &partition, 20).unwrap())
    });
}

criterion_group!(benches, bench_compress, bench_quotient_and_check);
criterion_main!(benches);
