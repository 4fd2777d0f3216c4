use std::sync::Arc;

use colop_core::operad::{assoc, com, Operad};
use colop_core::pushout::{dwyer_plus, free_extension, oracle_pushout, AttachmentData};
use colop_core::{Color, IOPair, Profile};
use criterion::{criterion_group, BenchmarkId, Criterion};

fn star_io(n: usize) -> IOPair {
    IOPair::new(Color(0), Profile::uniform(Color(0), n))
}

fn filtration(c: &mut Criterion) {
    let mut group = c.benchmark_group("extension");
    group.sample_size(10);
    for j in [3, 4] {
        group.bench_with_input(BenchmarkId::new("dwyer assoc", j), &j, |b, &j| b.iter(|| dwyer_plus(Arc::new(assoc(j)), j).unwrap()));
    }
    let ambient: Arc<dyn Operad> = Arc::new(com(6));
    let data = AttachmentData::single(ambient, star_io(2), "y").unwrap();
    group.bench_function("binary generator on com, 2 stages", |b| b.iter(|| free_extension(&data, &star_io(1), 2, 7).unwrap()));
    group.bench_function("oracle, binary generator on com", |b| b.iter(|| oracle_pushout(&data, &star_io(0), 5).unwrap()));
    group.finish();
}

criterion_group!(benches, filtration);
