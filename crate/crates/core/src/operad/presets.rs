use std::sync::Arc;

use rand::Rng;

use super::{GammaImpl, TableOperad};
use crate::elem::Elem;
use crate::error::Result;
use crate::fincat::{GSet, Perm};
use crate::profiles::{Color, ColorSet, IOPair, Profile};
use crate::symseq::SymSeq;

fn star() -> Color {
    Color(0)
}

fn one_color() -> Arc<ColorSet> {
    Arc::new(ColorSet::single())
}

/// The associative operad: `A(n) = Σ_n` with the regular action, for
/// `n ≤ max(bound, 1)`. A permutation `x` sends input `i` to word position
/// `x(i)`.
pub fn assoc(bound: usize) -> TableOperad {
    let bound = bound.max(1);
    let cs = one_color();
    let mut seq = SymSeq::empty(cs);
    for n in 0..=bound {
        let key = IOPair::new(star(), Profile::uniform(star(), n));
        let g = key.inputs.stabilizer();
        let gg = g.clone();
        let elems = g.elements().iter().cloned().map(Elem::Perm).collect();
        seq.insert(key, GSet::from_fn(elems, g, move |a, b| gg.mul(a, b))).expect("regular action");
    }
    let rule = Arc::new(|a: &super::GammaArgs| -> Result<Elem> {
        let x = a.x.as_perm().expect("assoc element");
        let ys: Vec<&Perm> = a.ys.iter().map(|(_, y)| y.as_perm().expect("assoc element")).collect();
        let sizes: Vec<usize> = ys.iter().map(|p| p.degree()).collect();
        let outer = x.inverse().block_permutation(&sizes).inverse();
        Ok(Elem::Perm(outer.compose(&Perm::block_sum(&ys))))
    });
    TableOperad::new("assoc", seq, bound, vec![Elem::Perm(Perm::identity(1))], GammaImpl::Direct(rule))
        .expect("assoc preset")
}

/// The commutative operad: one point in every arity `n ≤ max(bound, 1)`.
pub fn com(bound: usize) -> TableOperad {
    let bound = bound.max(1);
    let cs = one_color();
    let mut seq = SymSeq::empty(cs);
    for n in 0..=bound {
        let key = IOPair::new(star(), Profile::uniform(star(), n));
        let g = key.inputs.stabilizer();
        seq.insert(key, GSet::trivial(vec![Elem::sym("*")], g)).expect("trivial action");
    }
    let rule = Arc::new(|_: &super::GammaArgs| Ok(Elem::sym("*")));
    TableOperad::new("com", seq, bound, vec![Elem::sym("*")], GammaImpl::Direct(rule)).expect("com preset")
}

/// The initial operad: only the colored units. Every entry up to `bound`
/// is known, most of them empty.
pub fn trivial(colors: Arc<ColorSet>, bound: usize) -> TableOperad {
    let seq = SymSeq::unit(colors.clone());
    let units = colors.colors().map(|_| Elem::sym("1")).collect();
    let rule = Arc::new(|a: &super::GammaArgs| Ok(a.ys[0].1.clone()));
    TableOperad::new("trivial", seq, bound.max(1), units, GammaImpl::Direct(rule)).expect("trivial preset")
}

/// The operad of pointed inputs: `P(n) = {0..n-1}` for `1 ≤ n ≤ bound`,
/// where `i` marks an input; `i·σ = σ⁻¹(i)`.
pub fn perm(bound: usize) -> TableOperad {
    let cs = one_color();
    let mut seq = SymSeq::empty(cs);
    for n in 1..=bound {
        let key = IOPair::new(star(), Profile::uniform(star(), n));
        let g = key.inputs.stabilizer();
        let gg = g.clone();
        let elems = (0..n as i64).map(Elem::Int).collect();
        seq.insert(key, GSet::from_fn(elems, g, move |i, s| gg.element(s).inverse().apply(i))).expect("action");
    }
    let rule = Arc::new(|a: &super::GammaArgs| -> Result<Elem> {
        let i = a.x.as_int().expect("perm element") as usize;
        let start: usize = a.ys[..i].iter().map(|(b, _)| b.len()).sum();
        Ok(Elem::Int((start as i64) + a.ys[i].1.as_int().expect("perm element")))
    });
    TableOperad::new("perm", seq, bound, vec![Elem::Int(0)], GammaImpl::Direct(rule)).expect("perm preset")
}

/// A finite monoid by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monoid {
    pub name: String,
    pub table: Vec<Vec<usize>>,
    pub unit: usize,
}

impl Monoid {
    pub fn cyclic(n: usize) -> Monoid {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Monoid { name: format!("Z/{n}"), table, unit: 0 }
    }

    /// `{0..n-1}` under `max`.
    pub fn max(n: usize) -> Monoid {
        let table = (0..n).map(|a| (0..n).map(|b| a.max(b)).collect()).collect();
        Monoid { name: format!("max{n}"), table, unit: 0 }
    }

    /// `{0, 1}` under multiplication.
    pub fn boolean_and() -> Monoid {
        Monoid { name: "and".into(), table: vec![vec![0, 0], vec![0, 1]], unit: 1 }
    }

    pub fn size(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn is_associative(&self) -> bool {
        let n = self.size();
        (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c)))))
    }

    pub fn is_unital(&self) -> bool {
        (0..self.size()).all(|a| self.mul(self.unit, a) == a && self.mul(a, self.unit) == a)
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.size();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }
}

/// `O(n) = M` for `n` in a support closed under composition (and
/// containing 1), with the trivial action and `γ` the product in `M`.
pub fn commutative_monoid(m: &Monoid, support: &dyn Fn(usize) -> bool, support_name: &str, bound: usize) -> TableOperad {
    assert!(m.is_associative() && m.is_unital() && m.is_commutative());
    let cs = one_color();
    let mut seq = SymSeq::empty(cs);
    for n in (0..=bound).filter(|&n| support(n)) {
        let key = IOPair::new(star(), Profile::uniform(star(), n));
        let g = key.inputs.stabilizer();
        seq.insert(key, GSet::trivial((0..m.size() as i64).map(Elem::Int).collect(), g)).expect("trivial action");
    }
    let mm = m.clone();
    let rule = Arc::new(move |a: &super::GammaArgs| -> Result<Elem> {
        let mut acc = a.x.as_int().expect("monoid element") as usize;
        for (_, y) in a.ys {
            acc = mm.mul(acc, y.as_int().expect("monoid element") as usize);
        }
        Ok(Elem::Int(acc as i64))
    });
    let name = format!("{}[{}]", m.name, support_name);
    TableOperad::new(name, seq, bound, vec![Elem::Int(m.unit as i64)], GammaImpl::Direct(rule)).expect("monoid operad")
}

/// A random one-colored operad with entries of at most 4 elements: a
/// commutative-monoid operad on a random closed support, or `perm`.
pub fn random_operad(rng: &mut impl Rng, bound: usize) -> TableOperad {
    let monoids = [Monoid::cyclic(1), Monoid::cyclic(2), Monoid::cyclic(3), Monoid::cyclic(4), Monoid::max(2), Monoid::max(3), Monoid::boolean_and()];
    type Support = (&'static str, fn(usize) -> bool);
    let supports: [Support; 5] = [
        ("1", |n| n == 1),
        ("0,1", |n| n <= 1),
        ("all", |_| true),
        (">=1", |n| n >= 1),
        ("odd", |n| n % 2 == 1),
    ];
    if rng.gen_range(0..monoids.len() + 1) == monoids.len() {
        return perm(bound);
    }
    let m = &monoids[rng.gen_range(0..monoids.len())];
    let (name, f) = supports[rng.gen_range(0..supports.len())];
    commutative_monoid(m, &f, name, bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operad::Operad;

    #[test]
    fn assoc_block_substitution() {
        let a = assoc(4);
        let c = Profile::uniform(star(), 2);
        let id2 = Elem::Perm(Perm::identity(2));
        let id1 = Elem::Perm(Perm::identity(1));
        let r = a
            .gamma(star(), &c, &id2, &[(Profile::uniform(star(), 2), id2.clone()), (Profile::uniform(star(), 1), id1)])
            .unwrap();
        assert_eq!(r, Elem::Perm(Perm::identity(3)));
    }

    #[test]
    fn entry_sizes() {
        let a = assoc(4);
        for n in 0..=4 {
            let fact: usize = (1..=n).product();
            assert_eq!(a.entry(star(), &Profile::uniform(star(), n)).unwrap().len(), fact);
        }
        assert!(a.entry(star(), &Profile::uniform(star(), 5)).is_err());
        assert_eq!(perm(3).entry(star(), &Profile::uniform(star(), 0)).unwrap().len(), 0);
        assert_eq!(perm(3).entry(star(), &Profile::uniform(star(), 3)).unwrap().len(), 3);
    }

    #[test]
    fn monoid_constructors_are_commutative_monoids() {
        for m in [Monoid::cyclic(3), Monoid::max(3), Monoid::boolean_and()] {
            assert!(m.is_associative() && m.is_unital() && m.is_commutative(), "{}", m.name);
        }
    }
}
