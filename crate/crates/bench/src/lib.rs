//! Fixed inputs shared by the benchmarks.

use std::sync::Arc;

use colop_core::operad::{random_operad, TableOperad};
use colop_core::{ColorSet, SymSeq};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Random sequences over one or two colors, the same on every run.
pub fn sequences(two_colors: bool, max_arity: usize, max_size: usize, count: usize) -> Vec<SymSeq> {
    let cs = Arc::new(if two_colors { ColorSet::new(["a", "b"]).expect("colors") } else { ColorSet::single() });
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    (0..count).map(|_| SymSeq::random(cs.clone(), max_arity, max_size, &mut rng)).collect()
}

pub fn operads(bound: usize, count: usize) -> Vec<TableOperad> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    (0..count).map(|_| random_operad(&mut rng, bound)).collect()
}
