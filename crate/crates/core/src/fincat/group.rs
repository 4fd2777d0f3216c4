use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use super::Perm;
use crate::error::{Error, Result};

/// A finite permutation group stored by its full, sorted element list.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
}

impl PartialEq for PermGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.elements == other.elements
    }
}
impl Eq for PermGroup {}

impl PermGroup {
    fn from_sorted(degree: usize, elements: Vec<Perm>) -> Self {
        let index = elements.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        PermGroup { degree, elements, index }
    }

    pub fn trivial(degree: usize) -> Self {
        Self::from_sorted(degree, vec![Perm::identity(degree)])
    }

    pub fn symmetric(degree: usize) -> Self {
        Self::from_sorted(degree, Perm::all(degree))
    }

    /// The subgroup generated by `gens`, by breadth-first closure.
    pub fn generate(degree: usize, gens: &[Perm]) -> Result<Self> {
        for g in gens {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch { expected: degree, found: g.degree() });
            }
        }
        let id = Perm::identity(degree);
        let mut seen: std::collections::HashSet<Perm> = [id.clone()].into_iter().collect();
        let mut queue: VecDeque<Perm> = [id].into_iter().collect();
        while let Some(p) = queue.pop_front() {
            for g in gens {
                let q = p.compose(g);
                if seen.insert(q.clone()) {
                    queue.push_back(q);
                }
            }
        }
        let mut elements: Vec<Perm> = seen.into_iter().collect();
        elements.sort();
        Ok(Self::from_sorted(degree, elements))
    }

    /// Validates an explicit element list: identity, closure, inverses, and
    /// Lagrange's divisibility against `degree!`.
    pub fn from_elements(degree: usize, mut elements: Vec<Perm>) -> Result<Self> {
        elements.sort();
        elements.dedup();
        if elements.iter().any(|p| p.degree() != degree) {
            return Err(Error::NotAGroup("mixed degrees".into()));
        }
        let g = Self::from_sorted(degree, elements);
        if !g.index.contains_key(&Perm::identity(degree)) {
            return Err(Error::NotAGroup("missing identity".into()));
        }
        for a in &g.elements {
            if !g.index.contains_key(&a.inverse()) {
                return Err(Error::NotAGroup(format!("missing inverse of {a}")));
            }
            for b in &g.elements {
                if !g.index.contains_key(&a.compose(b)) {
                    return Err(Error::NotAGroup(format!("{a}·{b} not closed")));
                }
            }
        }
        let fact: usize = (1..=degree).product();
        if fact % g.order() != 0 {
            return Err(Error::NotAGroup("order does not divide n!".into()));
        }
        Ok(g)
    }

    /// Direct product of the given groups acting on consecutive blocks.
    pub fn block_product(parts: &[&PermGroup]) -> Self {
        let degree = parts.iter().map(|g| g.degree).sum();
        let mut acc = vec![Perm::identity(0)];
        for g in parts {
            let mut next = Vec::with_capacity(acc.len() * g.order());
            for a in &acc {
                for b in &g.elements {
                    next.push(Perm::block_sum(&[a, b]));
                }
            }
            acc = next;
        }
        acc.sort();
        Self::from_sorted(degree, acc)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Perm {
        &self.elements[i]
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.index.contains_key(p)
    }

    /// Identity is the lexicographically smallest permutation.
    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.index[&self.elements[a].compose(&self.elements[b])]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.index[&self.elements[a].inverse()]
    }

    /// Generating set: the non-identity elements, greedily pruned to those
    /// not already generated by earlier picks.
    pub fn generators(&self) -> Vec<Perm> {
        let mut gens: Vec<Perm> = Vec::new();
        let mut span = PermGroup::trivial(self.degree);
        for p in &self.elements {
            if !span.contains(p) {
                gens.push(p.clone());
                span = PermGroup::generate(self.degree, &gens).expect("same degree");
                if span.order() == self.order() {
                    break;
                }
            }
        }
        gens
    }
}

/// A group homomorphism between two permutation groups, by element images.
#[derive(Clone, Debug)]
pub struct Hom {
    pub source: Arc<PermGroup>,
    pub target: Arc<PermGroup>,
    images: Vec<usize>,
}

impl Hom {
    /// Checks the full multiplication table.
    pub fn new(source: Arc<PermGroup>, target: Arc<PermGroup>, images: Vec<usize>) -> Result<Self> {
        if images.len() != source.order() || images.iter().any(|&i| i >= target.order()) {
            return Err(Error::Invalid("homomorphism image table has the wrong shape".into()));
        }
        for a in 0..source.order() {
            for b in 0..source.order() {
                let ab = source.mul(a, b);
                if images[ab] != target.mul(images[a], images[b]) {
                    return Err(Error::NotAHomomorphism {
                        a: source.element(a).to_string(),
                        b: source.element(b).to_string(),
                    });
                }
            }
        }
        Ok(Hom { source, target, images })
    }

    /// Builds the table from a function on permutations and checks it.
    pub fn from_fn(
        source: Arc<PermGroup>,
        target: Arc<PermGroup>,
        f: impl Fn(&Perm) -> Perm,
    ) -> Result<Self> {
        let images = source
            .elements()
            .iter()
            .map(|p| {
                let q = f(p);
                target
                    .index_of(&q)
                    .ok_or_else(|| Error::Invalid(format!("image {q} of {p} is not in the target group")))
            })
            .collect::<Result<Vec<_>>>()?;
        Hom::new(source, target, images)
    }

    /// Subgroup inclusion `H ≤ G` (same degree).
    pub fn inclusion(sub: Arc<PermGroup>, group: Arc<PermGroup>) -> Result<Self> {
        Hom::from_fn(sub, group, |p| p.clone())
    }

    pub fn identity(group: Arc<PermGroup>) -> Self {
        let images = (0..group.order()).collect();
        Hom { source: group.clone(), target: group, images }
    }

    pub fn image(&self, h: usize) -> usize {
        self.images[h]
    }

    pub fn is_injective(&self) -> bool {
        let mut v = self.images.clone();
        v.sort_unstable();
        v.dedup();
        v.len() == self.images.len()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Hom) -> Result<Hom> {
        if *inner.target != *self.source {
            return Err(Error::Invalid("homomorphisms are not composable".into()));
        }
        let images = inner.images.iter().map(|&i| self.images[i]).collect();
        Ok(Hom { source: inner.source.clone(), target: self.target.clone(), images })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_orders() {
        for n in 0..6 {
            let fact: usize = (1..=n).product();
            assert_eq!(PermGroup::symmetric(n).order(), fact);
        }
    }

    #[test]
    fn generate_matches_symmetric() {
        let gens = [Perm::transposition(4, 0, 1), Perm::from_images(vec![1, 2, 3, 0]).unwrap()];
        let g = PermGroup::generate(4, &gens).unwrap();
        assert_eq!(g, PermGroup::symmetric(4));
        let back = PermGroup::generate(4, &g.generators()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn from_elements_rejects_non_closed() {
        let elems = vec![Perm::identity(3), Perm::from_images(vec![1, 2, 0]).unwrap()];
        assert!(PermGroup::from_elements(3, elems).is_err());
    }

    #[test]
    fn block_product_order() {
        let s2 = PermGroup::symmetric(2);
        let s3 = PermGroup::symmetric(3);
        let p = PermGroup::block_product(&[&s2, &s3]);
        assert_eq!(p.order(), 12);
        assert_eq!(p.degree(), 5);
        assert!(PermGroup::from_elements(5, p.elements().to_vec()).is_ok());
    }

    #[test]
    fn hom_rejects_non_homomorphism() {
        let s3 = Arc::new(PermGroup::symmetric(3));
        let s2 = Arc::new(PermGroup::symmetric(2));
        // sends every transposition-like element to the swap: not multiplicative
        let bad = Hom::from_fn(s3.clone(), s2.clone(), |p| {
            if p.is_identity() { Perm::identity(2) } else { Perm::transposition(2, 0, 1) }
        });
        assert!(bad.is_err());
        let sign = Hom::from_fn(s3, s2, |p| {
            let inv = (0..3)
                .flat_map(|i| (i + 1..3).map(move |j| (i, j)))
                .filter(|&(i, j)| p.apply(i) > p.apply(j))
                .count();
            if inv % 2 == 0 { Perm::identity(2) } else { Perm::transposition(2, 0, 1) }
        });
        assert!(sign.is_ok());
    }
}
