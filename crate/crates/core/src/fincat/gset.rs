use std::sync::Arc;

use super::{Hom, Perm, PermGroup};
use crate::error::{Error, Result};

/// A finite set with a canonical (sorted, duplicate-free) element order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinSet<T> {
    elements: Vec<T>,
}

impl<T: Ord> FinSet<T> {
    pub fn new(mut elements: Vec<T>) -> Self {
        elements.sort();
        elements.dedup();
        FinSet { elements }
    }

    pub fn empty() -> Self {
        FinSet { elements: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[T] {
        &self.elements
    }

    pub fn position(&self, x: &T) -> Option<usize> {
        self.elements.binary_search(x).ok()
    }

    pub fn into_vec(self) -> Vec<T> {
        self.elements
    }
}

impl FinSet<()> {
    /// The monoidal unit: a one-point set.
    pub fn point() -> Self {
        FinSet { elements: vec![()] }
    }
}

/// A finite set with a right action of a permutation group, stored as a
/// full action table.
#[derive(Clone, Debug)]
pub struct GSet<T> {
    elements: Vec<T>,
    group: Arc<PermGroup>,
    table: Vec<u32>,
}

impl<T: PartialEq> PartialEq for GSet<T> {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements && *self.group == *other.group && self.table == other.table
    }
}

impl<T> GSet<T> {
    /// Builds the table from `act(x, g) = x·g` without checking the axioms.
    pub fn from_fn(elements: Vec<T>, group: Arc<PermGroup>, act: impl Fn(usize, usize) -> usize) -> Self {
        let order = group.order();
        let mut table = Vec::with_capacity(elements.len() * order);
        for x in 0..elements.len() {
            for g in 0..order {
                table.push(act(x, g) as u32);
            }
        }
        GSet { elements, group, table }
    }

    /// Builds from an explicit table (row per element, column per group
    /// element) and checks that it is a right action.
    pub fn from_table(elements: Vec<T>, group: Arc<PermGroup>, table: Vec<Vec<usize>>) -> Result<Self> {
        if table.len() != elements.len() || table.iter().any(|r| r.len() != group.order()) {
            return Err(Error::NotAnAction("action table has the wrong shape".into()));
        }
        if table.iter().flatten().any(|&v| v >= elements.len()) {
            return Err(Error::NotAnAction("action table refers to a missing element".into()));
        }
        let flat = table.into_iter().flatten().map(|v| v as u32).collect();
        let s = GSet { elements, group, table: flat };
        s.check_action()?;
        Ok(s)
    }

    /// Trivial action.
    pub fn trivial(elements: Vec<T>, group: Arc<PermGroup>) -> Self {
        Self::from_fn(elements, group, |x, _| x)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[T] {
        &self.elements
    }

    pub fn group(&self) -> &Arc<PermGroup> {
        &self.group
    }

    #[inline]
    pub fn act(&self, x: usize, g: usize) -> usize {
        self.table[x * self.group.order() + g] as usize
    }

    pub fn act_perm(&self, x: usize, g: &Perm) -> Option<usize> {
        self.group.index_of(g).map(|g| self.act(x, g))
    }

    /// Checks `x·e = x` and `x·(gh) = (x·g)·h`. Reports the first failing
    /// instance.
    pub fn check_action(&self) -> Result<()> {
        let grp = &self.group;
        let e = grp.identity();
        for x in 0..self.len() {
            if self.act(x, e) != x {
                return Err(Error::NotAnAction(format!("element #{x} is moved by the identity")));
            }
        }
        for g in 0..grp.order() {
            for h in 0..grp.order() {
                let gh = grp.mul(g, h);
                for x in 0..self.len() {
                    if self.act(x, gh) != self.act(self.act(x, g), h) {
                        return Err(Error::NotAnAction(format!(
                            "element #{x}: x·({}{}) ≠ (x·{})·{}",
                            grp.element(g),
                            grp.element(h),
                            grp.element(g),
                            grp.element(h)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// First `(element, non-identity group element)` with `x·g = x`, if any.
    pub fn fixed_point(&self) -> Option<(usize, usize)> {
        for x in 0..self.len() {
            for g in 1..self.group.order() {
                if self.act(x, g) == x {
                    return Some((x, g));
                }
            }
        }
        None
    }

    pub fn map_labels<U>(self, f: impl FnMut(T) -> U) -> GSet<U> {
        GSet { elements: self.elements.into_iter().map(f).collect(), group: self.group, table: self.table }
    }

    /// Disjoint union of G-sets over the same group.
    pub fn coproduct(parts: Vec<GSet<T>>, group: Arc<PermGroup>) -> Result<Self> {
        let order = group.order();
        let mut elements = Vec::new();
        let mut table = Vec::new();
        for p in parts {
            if *p.group != *group {
                return Err(Error::Invalid("coproduct of G-sets over different groups".into()));
            }
            let off = elements.len() as u32;
            table.extend(p.table.iter().map(|v| v + off));
            elements.extend(p.elements);
        }
        debug_assert_eq!(table.len(), elements.len() * order);
        Ok(GSet { elements, group, table })
    }
}

/// Orbit decomposition of a G-set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    /// Minimal element index of each orbit, ascending.
    pub representatives: Vec<usize>,
    /// Orbit number of each element.
    pub projection: Vec<usize>,
}

pub fn quotient_by_action<T>(s: &GSet<T>) -> Quotient {
    let mut projection = vec![usize::MAX; s.len()];
    let mut representatives = Vec::new();
    for x in 0..s.len() {
        if projection[x] != usize::MAX {
            continue;
        }
        let orbit = representatives.len();
        representatives.push(x);
        for g in 0..s.group().order() {
            projection[s.act(x, g)] = orbit;
        }
    }
    Quotient { representatives, projection }
}

/// The induced G-set `X ·_H G = (X × G)/((x·h, g) ∼ (x, f(h)g))`, with
/// `G` acting by right translation.
#[derive(Clone, Debug)]
pub struct Induced {
    /// Each class is labeled by its minimal pair `(x index, g index)`.
    pub gset: GSet<(usize, usize)>,
    class: Vec<u32>,
    target_order: usize,
}

impl Induced {
    pub fn class_of(&self, x: usize, g: usize) -> usize {
        self.class[x * self.target_order + g] as usize
    }

    pub fn len(&self) -> usize {
        self.gset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gset.is_empty()
    }
}

pub fn induce<T>(x: &GSet<T>, f: &Hom) -> Result<Induced> {
    if *f.source != **x.group() {
        return Err(Error::Invalid("induction: G-set group differs from the homomorphism source".into()));
    }
    let h_grp = &f.source;
    let g_grp = &f.target;
    let go = g_grp.order();
    let mut class = vec![u32::MAX; x.len() * go];
    let mut reps = Vec::new();
    let inv_images: Vec<usize> = (0..h_grp.order()).map(|h| g_grp.inv(f.image(h))).collect();
    for a in 0..x.len() {
        for g in 0..go {
            if class[a * go + g] != u32::MAX {
                continue;
            }
            let id = reps.len() as u32;
            reps.push((a, g));
            for h in 0..h_grp.order() {
                let a2 = x.act(a, h);
                let g2 = g_grp.mul(inv_images[h], g);
                class[a2 * go + g2] = id;
            }
        }
    }
    let gset = GSet::from_fn(reps.clone(), g_grp.clone(), |c, t| {
        let (a, g) = reps[c];
        class[a * go + g_grp.mul(g, t)] as usize
    });
    Ok(Induced { gset, class, target_order: go })
}

/// Pushout of `f: A → B` and `g: A → C` in finite sets, given by index maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pushout {
    pub size: usize,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

/// An element of `B ⊔ C`, used to label pushout classes by their minimum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left(usize),
    Right(usize),
}

impl Pushout {
    /// Minimal representative of each class, `Left` before `Right`.
    pub fn representatives(&self) -> Vec<Side> {
        let mut reps = vec![None; self.size];
        for (b, &p) in self.left.iter().enumerate() {
            reps[p].get_or_insert(Side::Left(b));
        }
        for (c, &p) in self.right.iter().enumerate() {
            reps[p].get_or_insert(Side::Right(c));
        }
        reps.into_iter().map(|r| r.expect("legs are jointly surjective")).collect()
    }
}

pub fn pushout(b_len: usize, c_len: usize, f: &[usize], g: &[usize]) -> Result<Pushout> {
    if f.len() != g.len() {
        return Err(Error::Invalid("pushout legs have different domains".into()));
    }
    if f.iter().any(|&v| v >= b_len) || g.iter().any(|&v| v >= c_len) {
        return Err(Error::Invalid("pushout leg is not total".into()));
    }
    let mut uf = UnionFind::new(b_len + c_len);
    for (&fb, &gc) in f.iter().zip(g) {
        uf.union(fb, b_len + gc);
    }
    let mut ids = vec![usize::MAX; b_len + c_len];
    let mut size = 0;
    let mut label = |i: usize, uf: &mut UnionFind| {
        let r = uf.find(i);
        if ids[r] == usize::MAX {
            ids[r] = size;
            size += 1;
        }
        ids[r]
    };
    let left: Vec<usize> = (0..b_len).map(|i| label(i, &mut uf)).collect();
    let right: Vec<usize> = (0..c_len).map(|i| label(b_len + i, &mut uf)).collect();
    Ok(Pushout { size, left, right })
}

/// Disjoint-set forest with path halving.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Keeps the smaller root so that roots are class minima.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn regular(g: Arc<PermGroup>) -> GSet<usize> {
        let n = g.order();
        let gg = g.clone();
        GSet::from_fn((0..n).collect(), g, move |x, h| gg.mul(x, h))
    }

    #[test]
    fn regular_action_has_one_orbit() {
        let s2 = Arc::new(PermGroup::symmetric(2));
        let q = quotient_by_action(&regular(s2));
        assert_eq!(q.representatives.len(), 1);
    }

    #[test]
    fn trivial_group_gives_singleton_orbits() {
        let t = Arc::new(PermGroup::trivial(0));
        let s = GSet::trivial(vec!['a', 'b', 'c'], t);
        assert_eq!(quotient_by_action(&s).representatives, vec![0, 1, 2]);
    }

    #[test]
    fn ordered_pairs_under_relabeling() {
        // Σ₃ acting on {1,2,3}² by relabeling both coordinates; oracle:
        // exhaustive orbit enumeration.
        let s3 = Arc::new(PermGroup::symmetric(3));
        let pairs: Vec<(usize, usize)> = (0..3).flat_map(|a| (0..3).map(move |b| (a, b))).collect();
        let grp = s3.clone();
        let ps = pairs.clone();
        let s = GSet::from_fn(pairs.clone(), s3, move |x, g| {
            let p = grp.element(g).inverse();
            let (a, b) = ps[x];
            ps.iter().position(|&q| q == (p.apply(a), p.apply(b))).unwrap()
        });
        s.check_action().unwrap();
        let q = quotient_by_action(&s);
        assert_eq!(q.representatives.len(), 2);
        let mut oracle: Vec<Vec<(usize, usize)>> = Vec::new();
        for &(a, b) in &pairs {
            let orbit: Vec<_> = {
                let mut o: Vec<_> = Perm::all(3).iter().map(|p| (p.apply(a), p.apply(b))).collect();
                o.sort();
                o.dedup();
                o
            };
            if !oracle.contains(&orbit) {
                oracle.push(orbit);
            }
        }
        assert_eq!(oracle.len(), 2);
    }

    #[test]
    fn induce_point_gives_cosets() {
        let s3 = Arc::new(PermGroup::symmetric(3));
        let h = Arc::new(PermGroup::generate(3, &[Perm::transposition(3, 0, 1)]).unwrap());
        let f = Hom::inclusion(h.clone(), s3).unwrap();
        let x = GSet::trivial(vec![()], h);
        let ind = induce(&x, &f).unwrap();
        assert_eq!(ind.len(), 3);
        ind.gset.check_action().unwrap();
        assert_eq!(quotient_by_action(&ind.gset).representatives.len(), 1);
    }

    #[test]
    fn induce_regular_is_regular() {
        let s3 = Arc::new(PermGroup::symmetric(3));
        let h = Arc::new(PermGroup::generate(3, &[Perm::from_images(vec![1, 2, 0]).unwrap()]).unwrap());
        let f = Hom::inclusion(h.clone(), s3.clone()).unwrap();
        let ind = induce(&regular(h), &f).unwrap();
        assert_eq!(ind.len(), 6);
        assert!(ind.gset.fixed_point().is_none());
        ind.gset.check_action().unwrap();
    }

    #[test]
    fn induce_empty_is_empty() {
        let s2 = Arc::new(PermGroup::symmetric(2));
        let x: GSet<()> = GSet::trivial(vec![], s2.clone());
        assert!(induce(&x, &Hom::identity(s2)).unwrap().is_empty());
    }

    #[test]
    fn induce_along_identity_is_isomorphic() {
        let s3 = Arc::new(PermGroup::symmetric(3));
        let x = regular(s3.clone());
        let ind = induce(&x, &Hom::identity(s3.clone())).unwrap();
        // witness bijection a ↦ [(a, e)]
        let phi: Vec<usize> = (0..x.len()).map(|a| ind.class_of(a, s3.identity())).collect();
        let mut sorted = phi.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), x.len());
        for a in 0..x.len() {
            for g in 0..s3.order() {
                assert_eq!(phi[x.act(a, g)], ind.gset.act(phi[a], g));
            }
        }
    }

    #[test]
    fn induce_along_composite_agrees_with_iterated() {
        let k = Arc::new(PermGroup::trivial(3));
        let h = Arc::new(PermGroup::generate(3, &[Perm::transposition(3, 0, 1)]).unwrap());
        let g = Arc::new(PermGroup::symmetric(3));
        let kh = Hom::inclusion(k.clone(), h.clone()).unwrap();
        let hg = Hom::inclusion(h, g.clone()).unwrap();
        let x = GSet::trivial(vec!['p', 'q'], k);
        let direct = induce(&x, &hg.compose(&kh).unwrap()).unwrap();
        let step = induce(&x, &kh).unwrap();
        let twice = induce(&step.gset, &hg).unwrap();
        assert_eq!(direct.len(), twice.len());
        // bijection: [(a, g)] ↦ [([(a, e)], g)]
        let e_h = 0;
        let phi: Vec<usize> = direct
            .gset
            .elements()
            .iter()
            .map(|&(a, gi)| twice.class_of(step.class_of(a, e_h), gi))
            .collect();
        let mut s = phi.clone();
        s.sort();
        s.dedup();
        assert_eq!(s.len(), phi.len());
        for c in 0..direct.len() {
            for t in 0..g.order() {
                assert_eq!(phi[direct.gset.act(c, t)], twice.gset.act(phi[c], t));
            }
        }
    }

    #[test]
    fn pushout_examples() {
        let p = pushout(2, 3, &[], &[]).unwrap();
        assert_eq!(p.size, 5);
        let p = pushout(2, 2, &[0, 1], &[0, 1]).unwrap();
        assert_eq!(p.size, 2);
        let p = pushout(2, 2, &[0], &[1]).unwrap();
        assert_eq!(p.size, 3);
    }

    #[test]
    fn from_table_rejects_non_action() {
        let s2 = Arc::new(PermGroup::symmetric(2));
        let bad = GSet::from_table(vec!['a', 'b'], s2, vec![vec![0, 0], vec![1, 0]]);
        assert!(bad.is_err());
    }
}
