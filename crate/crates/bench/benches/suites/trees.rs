use colop_core::trees::{aut_order_formula, automorphism_group, enumerate_marked};
use criterion::{criterion_group, Criterion};

fn automorphisms(c: &mut Criterion) {
    let trees = enumerate_marked(2, 4, 2);
    let mut group = c.benchmark_group("trees");
    group.bench_function("enumerate 2 colors, 4 vertices", |b| b.iter(|| enumerate_marked(2, 4, 2).len()));
    group.bench_function("automorphism groups", |b| b.iter(|| trees.iter().map(|t| automorphism_group(t).order()).sum::<usize>()));
    group.bench_function("automorphism formula", |b| b.iter(|| trees.iter().map(aut_order_formula).sum::<u128>()));
    group.finish();
}

criterion_group!(benches, automorphisms);
