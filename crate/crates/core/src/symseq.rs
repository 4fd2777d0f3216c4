//! Colored symmetric sequences valued in finite sets.
//!
//! Entries are stored only at orbit representatives `(d; rep)`, as sets with
//! a right action of the stabilizer of `rep`. The value at any other profile
//! `c = rep·τ` is reached by transport along the canonical `τ`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::elem::Elem;
use crate::error::{Error, Result};
use rand::Rng;

use crate::fincat::{induce, GSet, Hom, Perm, PermGroup};
use crate::profiles::{Color, ColorSet, IOPair, Profile};

/// One stored entry: the stabilizer-set plus a label index.
#[derive(Clone, Debug)]
pub struct Entry {
    set: GSet<Elem>,
    index: HashMap<Elem, usize>,
}

impl Entry {
    pub fn new(set: GSet<Elem>) -> Result<Self> {
        let index: HashMap<Elem, usize> = set.elements().iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        if index.len() != set.len() {
            return Err(Error::Invalid("duplicate element labels in an entry".into()));
        }
        Ok(Entry { set, index })
    }

    pub fn set(&self) -> &GSet<Elem> {
        &self.set
    }

    pub fn position(&self, e: &Elem) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct SymSeq {
    colors: Arc<ColorSet>,
    entries: BTreeMap<IOPair, Entry>,
}

/// A fixed point that shows a stabilizer action is not free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreenessWitness {
    pub key: IOPair,
    pub element: Elem,
    pub permutation: Perm,
}

impl SymSeq {
    pub fn empty(colors: Arc<ColorSet>) -> Self {
        SymSeq { colors, entries: BTreeMap::new() }
    }

    pub fn colors(&self) -> &Arc<ColorSet> {
        &self.colors
    }

    /// Stores `value` at the representative key; empty values are dropped.
    pub fn insert(&mut self, key: IOPair, value: GSet<Elem>) -> Result<()> {
        self.colors.check(&key.inputs)?;
        if key.output.0 as usize >= self.colors.len() {
            return Err(Error::UndeclaredColor { index: 0, name: format!("#{}", key.output.0) });
        }
        if !key.is_representative() {
            return Err(Error::Invalid(format!("key {key:?} is not an orbit representative")));
        }
        if **value.group() != *key.inputs.stabilizer() {
            return Err(Error::Invalid(format!("entry {key:?} is not acted on by the stabilizer")));
        }
        if value.is_empty() {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, Entry::new(value)?);
        }
        Ok(())
    }

    pub fn get(&self, key: &IOPair) -> Option<&Entry> {
        self.entries.get(key)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&IOPair, &Entry)> {
        self.entries.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &IOPair> {
        self.entries.keys()
    }

    pub fn size_at(&self, key: &IOPair) -> usize {
        self.entries.get(key).map_or(0, Entry::len)
    }

    pub fn total_size(&self) -> usize {
        self.entries.values().map(Entry::len).sum()
    }

    pub fn max_arity(&self) -> usize {
        self.entries.keys().map(IOPair::arity).max().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Orbit representatives with output `d` and a non-empty value.
    pub fn support(&self, d: Color) -> impl Iterator<Item = &IOPair> {
        self.entries.keys().filter(move |k| k.output == d)
    }

    /// Elements of `X(d; c)` at an arbitrary profile, labeled by transport.
    pub fn entry(&self, d: Color, c: &Profile) -> Vec<Elem> {
        let key = IOPair::new(d, c.representative());
        let Some(e) = self.entries.get(&key) else { return Vec::new() };
        let tau = c.transport();
        e.set.elements().iter().map(|x| located(x, &tau)).collect()
    }

    /// `e·σ ∈ X(d; c·σ)` for `e ∈ X(d; c)`.
    pub fn act_at(&self, d: Color, c: &Profile, e: &Elem, sigma: &Perm) -> Result<Elem> {
        let key = IOPair::new(d, c.representative());
        let entry = self
            .entries
            .get(&key)
            .ok_or_else(|| Error::UnknownElement { element: e.to_string(), entry: format!("{key:?}") })?;
        let (x, tau) = unlocate(e, c);
        let xi = entry
            .position(&x)
            .ok_or_else(|| Error::UnknownElement { element: e.to_string(), entry: format!("{key:?}") })?;
        let target = c.act(sigma);
        let tau2 = target.transport();
        let h = tau.compose(sigma).compose(&tau2.inverse());
        let x2 = entry
            .set
            .act_perm(xi, &h)
            .ok_or_else(|| Error::Invalid(format!("transport mismatch: {h} does not fix the representative")))?;
        Ok(located(&entry.set.elements()[x2], &tau2))
    }

    /// Symmetric sequence concentrated in arity 0: `X(c; ()) = family[c]`.
    pub fn concentrated(colors: Arc<ColorSet>, family: Vec<(Color, Vec<Elem>)>) -> Result<Self> {
        let mut s = SymSeq::empty(colors);
        for (c, elems) in family {
            let key = IOPair::new(c, Profile::empty());
            let grp = key.inputs.stabilizer();
            let mut elems = elems;
            elems.sort();
            elems.dedup();
            s.insert(key, GSet::trivial(elems, grp))?;
        }
        Ok(s)
    }

    pub fn is_concentrated_in_arity(&self, n: usize) -> bool {
        self.entries.keys().all(|k| k.arity() == n)
    }

    /// Whether every stored stabilizer action is free; on failure, the first
    /// fixed pair in key order.
    pub fn is_levelwise_free(&self) -> (bool, Option<FreenessWitness>) {
        for (key, e) in &self.entries {
            if let Some((x, g)) = e.set.fixed_point() {
                let w = FreenessWitness {
                    key: key.clone(),
                    element: e.set.elements()[x].clone(),
                    permutation: e.set.group().element(g).clone(),
                };
                return (false, Some(w));
            }
        }
        (true, None)
    }

    /// The unit sequence: a point at `(c; (c))` for each color.
    pub fn unit(colors: Arc<ColorSet>) -> Self {
        let mut s = SymSeq::empty(colors.clone());
        for c in colors.colors() {
            let key = IOPair::new(c, Profile(vec![c]));
            let grp = key.inputs.stabilizer();
            s.insert(key, GSet::trivial(vec![Elem::sym("1")], grp)).expect("valid unit entry");
        }
        s
    }

    /// A random sequence with at most `max_size` elements in each entry of
    /// arity at most `max_arity`, built from transitive orbits `H\G` for
    /// cyclic subgroups `H` of each stabilizer.
    pub fn random(colors: Arc<ColorSet>, max_arity: usize, max_size: usize, rng: &mut impl Rng) -> Self {
        let mut s = SymSeq::empty(colors.clone());
        for d in colors.colors() {
            for n in 0..=max_arity {
                for p in crate::operad::all_profiles(colors.len(), n).into_iter().filter(Profile::is_representative) {
                    let group = p.stabilizer();
                    let target = rng.gen_range(0..=max_size);
                    let mut orbits = Vec::new();
                    let mut size = 0;
                    while size < target {
                        let g = group.element(rng.gen_range(0..group.order())).clone();
                        let cyclic = Arc::new(PermGroup::generate(n, &[g]).expect("cyclic subgroup"));
                        let sub = if group.order() / cyclic.order() <= target - size { cyclic } else { group.clone() };
                        let orbit = induce(&GSet::trivial(vec![()], sub.clone()), &Hom::inclusion(sub, group.clone()).expect("subgroup"))
                            .expect("induced orbit");
                        size += orbit.len();
                        orbits.push(orbit.gset.map_labels(|_| ()));
                    }
                    let set = GSet::coproduct(orbits, group).expect("same group");
                    let set = set.map_labels({
                        let mut k = 0;
                        move |()| {
                            k += 1;
                            Elem::sym(&format!("e{k}"))
                        }
                    });
                    s.insert(IOPair::new(d, p), set).expect("random entry");
                }
            }
        }
        s
    }

    /// The entries of arity at most `n`.
    pub fn truncated(&self, n: usize) -> SymSeq {
        SymSeq { colors: self.colors.clone(), entries: self.entries.iter().filter(|(k, _)| k.arity() <= n).map(|(k, v)| (k.clone(), v.clone())).collect() }
    }
}

fn located(x: &Elem, tau: &Perm) -> Elem {
    if tau.is_identity() {
        x.clone()
    } else {
        Elem::Moved(Arc::new((x.clone(), tau.clone())))
    }
}

fn unlocate(e: &Elem, c: &Profile) -> (Elem, Perm) {
    match e {
        Elem::Moved(m) => (m.0.clone(), m.1.clone()),
        _ => (e.clone(), Perm::identity(c.len())),
    }
}

/// A map of symmetric sequences, given at representatives as index maps.
#[derive(Clone, Debug, Default)]
pub struct SymSeqMap {
    pub components: BTreeMap<IOPair, Vec<usize>>,
}

/// Why a candidate map fails to be an equivariant bijection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MapDefect {
    MissingComponent(IOPair),
    SizeMismatch { key: IOPair, source: usize, target: usize },
    NotInjective { key: IOPair },
    NotEquivariant { key: IOPair, element: usize, permutation: Perm },
}

impl SymSeqMap {
    /// Checks equivariance on every component and group element.
    pub fn check_equivariant(&self, source: &SymSeq, target: &SymSeq) -> Result<(), MapDefect> {
        for (key, e) in source.entries() {
            let comp = self.components.get(key).ok_or_else(|| MapDefect::MissingComponent(key.clone()))?;
            let t = target.get(key).ok_or_else(|| MapDefect::MissingComponent(key.clone()))?;
            for x in 0..e.len() {
                for g in 0..e.set.group().order() {
                    if comp[e.set.act(x, g)] != t.set.act(comp[x], g) {
                        return Err(MapDefect::NotEquivariant {
                            key: key.clone(),
                            element: x,
                            permutation: e.set.group().element(g).clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Checks that the map is an entrywise bijection onto `target`.
    pub fn check_bijective(&self, source: &SymSeq, target: &SymSeq) -> Result<(), MapDefect> {
        let keys: std::collections::BTreeSet<&IOPair> = source.keys().chain(target.keys()).collect();
        for key in keys {
            let (s, t) = (source.size_at(key), target.size_at(key));
            if s != t {
                return Err(MapDefect::SizeMismatch { key: key.clone(), source: s, target: t });
            }
            if s == 0 {
                continue;
            }
            let comp = self.components.get(key).ok_or_else(|| MapDefect::MissingComponent(key.clone()))?;
            let mut img = comp.clone();
            img.sort_unstable();
            img.dedup();
            if img.len() != s {
                return Err(MapDefect::NotInjective { key: key.clone() });
            }
        }
        Ok(())
    }
}
