use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use deltacert::certify::certify_n;
use deltacert::family::default_epsilon;
use deltacert::par::{map_parallel, map_serial};

fn certify_sweep(c: &mut Criterion) {
    let eps = default_epsilon();
    let mut group = c.benchmark_group("certify_sweep");
    group.sample_size(10);
    for hi in [10i64, 40] {
        let ns: Vec<i64> = (2..=hi).collect();
        group.bench_with_input(BenchmarkId::new("serial", hi), &ns, |b, ns| {
            b.iter(|| map_serial(black_box(ns), |&n| certify_n(n, &eps).unwrap().verdict))
        });
        group.bench_with_input(BenchmarkId::new("parallel", hi), &ns, |b, ns| {
            b.iter(|| map_parallel(black_box(ns), |&n| certify_n(n, &eps).unwrap().verdict))
        });
    }
    group.finish();
}

criterion_group!(benches, certify_sweep);
criterion_main!(benches);
