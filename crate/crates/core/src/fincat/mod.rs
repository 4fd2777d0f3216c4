//! Finite sets, permutation groups, and right group actions: the pieces of
//! the category of finite sets that the rest of the crate is built from.
//!
//! Groups are stored by their full element lists; every group arising here
//! is a subgroup of some small symmetric group.

mod group;
mod gset;
mod perm;

pub use group::{Hom, PermGroup};
pub use gset::{induce, pushout, quotient_by_action, FinSet, GSet, Induced, Pushout, Quotient, Side, UnionFind};
pub use perm::Perm;
