use colop_bench::operads;
use colop_core::operad::{assoc, validate_operad};
use criterion::{criterion_group, Criterion};

fn axioms(c: &mut Criterion) {
    let mut group = c.benchmark_group("validate");
    group.sample_size(10);
    let a = assoc(3);
    group.bench_function("assoc bound 3", |b| b.iter(|| validate_operad(&a, 3)));
    let rs = operads(4, 3);
    group.bench_function("random operads bound 3", |b| {
        b.iter(|| rs.iter().map(|o| validate_operad(o, 3).checked).sum::<usize>())
    });
    group.finish();
}

criterion_group!(benches, axioms);
