use colop_bench::sequences;
use colop_core::circle::{circle, witness_associativity};
use criterion::{black_box, criterion_group, BenchmarkId, Criterion};

fn products(c: &mut Criterion) {
    let mut group = c.benchmark_group("circle");
    for two in [false, true] {
        let s = sequences(two, 2, 2, 2);
        group.bench_with_input(BenchmarkId::new("product", if two { "2 colors" } else { "1 color" }), &s, |b, s| {
            b.iter(|| circle(black_box(&s[0]), black_box(&s[1])).unwrap())
        });
    }
    let s = sequences(false, 2, 2, 3);
    group.bench_function("associativity witness", |b| b.iter(|| witness_associativity(&s[0], &s[1], &s[2], 3, 1_000_000).unwrap()));
    group.finish();
}

criterion_group!(benches, products);
