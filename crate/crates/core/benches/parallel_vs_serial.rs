use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use wildchar::matrix_real::verify_suite_with;
use wildchar::sweep::{sweep_random_types, TypeShape};
use wildchar::Execution;

const MODES: [(&str, Execution); 2] = [
    ("parallel", Execution::Parallel),
    ("sequential", Execution::Sequential),
];

fn verify(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_suite");
    group.sample_size(10);
    let configs: [(usize, Vec<Vec<usize>>, usize); 2] = [
        (2, vec![vec![0], vec![1]], 3),
        (4, vec![vec![0, 1], vec![2, 3]], 2),
    ];
    for (n, blocks, r) in &configs {
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, format!("n{n}_r{r}")), &(), |b, _| {
                b.iter(|| {
                    verify_suite_with(*n, blocks, *r, 200, 1e-9, black_box(42), exec).unwrap()
                })
            });
        }
    }
    group.finish();
}

fn types(c: &mut Criterion) {
    let mut group = c.benchmark_group("random_type_sweep");
    group.sample_size(10);
    let shape = TypeShape::default();
    for count in [250usize, 1000] {
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, count), &count, |b, &count| {
                b.iter(|| sweep_random_types(count, &shape, black_box(7), exec).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, verify, types);
criterion_main!(benches);
