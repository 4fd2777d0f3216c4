//! Free extensions of an operad along an attachment of generators at one
//! entry: the Q-construction, the stage filtration indexed by reduced
//! trees, the tree-backed operad of the result and an independent
//! congruence-closure oracle.

mod extension;
mod filtration;
mod oracle;
mod q;

pub use extension::Extension;
pub use filtration::{dwyer_plus, free_extension, DwyerRow, FiltrationStage, TreeContribution};
pub use oracle::{oracle_pushout, OracleReport};
pub use q::{fixed_points, q_closed_form, q_object, q_subset_model, Injection, QObject};

use std::collections::HashMap;
use std::sync::Arc;

use crate::elem::Elem;
use crate::error::{Error, Result};
use crate::fincat::Perm;
use crate::operad::Operad;
use crate::profiles::IOPair;

/// Generators `Y ⊇ X` attached at the entry `s` of `A`, with `f` sending
/// each `x ∈ X` to an element of `A(s)`.
///
/// The generators span the free symmetric sequence `Y·Σ_s` at `s`: an
/// element is a pair `(y, π)` with `π` in the stabilizer of `s`, acted on
/// by `(y, π)·σ = (y, π∘σ)`.
#[derive(Clone)]
pub struct AttachmentData {
    pub ambient: Arc<dyn Operad>,
    pub s: IOPair,
    pub y_names: Vec<String>,
    pub i: Injection,
    pub f: Vec<Elem>,
    lookup: HashMap<String, usize>,
}

impl AttachmentData {
    pub fn new(ambient: Arc<dyn Operad>, s: IOPair, y_names: Vec<String>, i: Injection, f: Vec<Elem>) -> Result<Self> {
        if !s.is_representative() {
            return Err(Error::Invalid("the generator entry must be an orbit representative".into()));
        }
        ambient.colors().check(&s.inputs)?;
        if i.y_len != y_names.len() {
            return Err(Error::Invalid(format!("{} generator names for a {}-element Y", y_names.len(), i.y_len)));
        }
        if f.len() != i.x_len() {
            return Err(Error::Invalid(format!("f has {} values for a {}-element X", f.len(), i.x_len())));
        }
        let entry = ambient.entry(s.output, &s.inputs)?;
        for v in &f {
            if !entry.contains(v) {
                return Err(Error::UnknownElement { element: v.to_string(), entry: ambient.colors().show_io(&s) });
            }
        }
        let lookup: HashMap<String, usize> = y_names.iter().cloned().enumerate().map(|(k, n)| (n, k)).collect();
        if lookup.len() != y_names.len() {
            return Err(Error::Invalid("generator names must be distinct".into()));
        }
        Ok(AttachmentData { ambient, s, y_names, i, f, lookup })
    }

    /// `∅ → {name}` at `s`.
    pub fn single(ambient: Arc<dyn Operad>, s: IOPair, name: &str) -> Result<Self> {
        Self::new(ambient, s, vec![name.to_string()], Injection::new(1, vec![])?, vec![])
    }

    pub fn y_index(&self, name: &str) -> Option<usize> {
        self.lookup.get(name).copied()
    }

    /// The preimage of `y` in `X`, if any.
    pub fn x_of(&self, y: usize) -> Option<usize> {
        self.i.map.iter().position(|&v| v == y)
    }

    /// The generator label `(y, π)`.
    pub fn generator(&self, y: usize, pi: &Perm) -> Elem {
        Elem::tuple(vec![Elem::sym(&self.y_names[y]), Elem::Perm(pi.clone())])
    }

    /// Splits a generator label into `(y, π)`.
    pub fn parse_generator(&self, e: &Elem) -> Result<(usize, Perm)> {
        let bad = || Error::UnknownElement { element: e.to_string(), entry: "the attached generators".into() };
        let parts = e.as_tuple().ok_or_else(bad)?;
        let [Elem::Sym(name), Elem::Perm(pi)] = parts else { return Err(bad()) };
        Ok((self.y_index(name).ok_or_else(bad)?, pi.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operad::{assoc, com, commutative_monoid, trivial, validate_operad, Monoid};
    use crate::profiles::{Color, ColorSet, Profile};

    fn star() -> Color {
        Color(0)
    }

    fn unary() -> IOPair {
        IOPair::new(star(), Profile::uniform(star(), 1))
    }

    #[test]
    fn free_unary_generator_on_trivial() {
        let a: Arc<dyn Operad> = Arc::new(trivial(Arc::new(ColorSet::single()), 8));
        let data = AttachmentData::single(a, unary(), "y").unwrap();
        let stages = free_extension(&data, &unary(), 3, 7).unwrap();
        let sizes: Vec<usize> = stages.iter().map(FiltrationStage::size).collect();
        assert_eq!(sizes, vec![1, 2, 3, 4]);
        assert!(stages.iter().all(|s| s.complete && s.is_injective()));
        let report = oracle_pushout(&data, &unary(), 7).unwrap();
        assert_eq!(report.certified, 3);
        for k in 0..=3 {
            assert_eq!(report.cumulative(k), sizes[k]);
        }
    }

    #[test]
    fn dwyer_com_and_assoc() {
        for a in [Arc::new(com(4)) as Arc<dyn Operad>, Arc::new(assoc(4))] {
            let rows = dwyer_plus(a, 4).unwrap();
            for row in rows {
                assert_eq!(row.contribution, 1);
                assert_eq!(row.orbits, 1);
                assert_eq!(row.cumulative, row.j + 1);
            }
        }
    }

    #[test]
    fn dwyer_counts_trivial_orbits() {
        let a = commutative_monoid(&Monoid::cyclic(3), &|_| true, "all", 3);
        let rows = dwyer_plus(Arc::new(a), 3).unwrap();
        let contributions: Vec<usize> = rows.iter().map(|r| r.contribution).collect();
        assert_eq!(contributions, vec![3, 3, 3]);
        assert!(rows.iter().all(|r| r.contribution == r.orbits));
    }

    #[test]
    fn no_stages_is_the_base() {
        let a: Arc<dyn Operad> = Arc::new(assoc(3));
        let r = IOPair::new(star(), Profile::uniform(star(), 3));
        let data = AttachmentData::single(a, unary(), "y").unwrap();
        let stages = free_extension(&data, &r, 0, 4).unwrap();
        assert_eq!(stages.len(), 1);
        assert_eq!(stages[0].size(), 6);
    }

    #[test]
    fn attaching_along_identity_changes_nothing() {
        let a: Arc<dyn Operad> = Arc::new(com(6));
        let s = IOPair::new(star(), Profile::uniform(star(), 2));
        let f = vec![Elem::sym("*")];
        let data = AttachmentData::new(a, s, vec!["x".into()], Injection::identity(1), f).unwrap();
        let r = IOPair::new(star(), Profile::uniform(star(), 2));
        let stages = free_extension(&data, &r, 1, 4).unwrap();
        assert_eq!(stages.iter().map(FiltrationStage::size).collect::<Vec<_>>(), vec![1, 1]);
        let report = oracle_pushout(&data, &r, 4).unwrap();
        assert_eq!(report.by_new, vec![1, 0]);
    }

    #[test]
    fn binary_generator_on_com_matches_oracle() {
        let a: Arc<dyn Operad> = Arc::new(com(7));
        let s = IOPair::new(star(), Profile::uniform(star(), 2));
        let data = AttachmentData::single(a, s, "y").unwrap();
        for n in 0..=2 {
            let r = IOPair::new(star(), Profile::uniform(star(), n));
            let stages = free_extension(&data, &r, 1, 4).unwrap();
            let report = oracle_pushout(&data, &r, 4).unwrap();
            assert_eq!(report.certified, 1);
            for (k, st) in stages.iter().enumerate() {
                assert_eq!(report.cumulative(k), st.size(), "arity {n}, stage {k}");
            }
        }
    }

    #[test]
    fn extension_is_an_operad() {
        let a: Arc<dyn Operad> = Arc::new(com(4));
        let data = AttachmentData::single(a, unary(), "y").unwrap();
        let ext = Extension::new(data, 2, 2).unwrap();
        let report = validate_operad(&ext, 2);
        assert!(report.is_valid(), "{:?}", report.violations.first());
        assert!(report.checked > 0);
    }
}
