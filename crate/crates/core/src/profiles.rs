//! Colors, profiles, and the profile groupoid.
//!
//! Permutations act on profiles from the right: `(a·σ)_i = a_{σ(i)}`. The
//! left permutation `σ·a` of the groupoid is `a·σ⁻¹`. Every orbit has a
//! canonical representative, the sorted profile in declared color order.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use once_cell::sync::Lazy;
use parking_lot::Mutex;

use crate::error::{Error, Result};
use crate::fincat::{Perm, PermGroup};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Color(pub u8);

/// A declared, totally ordered, non-empty set of colors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ColorSet {
    names: Vec<String>,
}

impl ColorSet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::Invalid("a color set must be non-empty".into()));
        }
        if names.len() > u8::MAX as usize {
            return Err(Error::Invalid("too many colors".into()));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::Invalid(format!("duplicate color {n}")));
            }
            if n.is_empty() || n.chars().any(|c| "()<>[],:; \t\n#".contains(c)) {
                return Err(Error::Invalid(format!("unusable color name {n:?}")));
            }
        }
        Ok(ColorSet { names })
    }

    /// The one-color set `{*}`.
    pub fn single() -> Self {
        ColorSet { names: vec!["*".into()] }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn colors(&self) -> impl Iterator<Item = Color> {
        (0..self.names.len() as u8).map(Color)
    }

    pub fn name(&self, c: Color) -> &str {
        &self.names[c.0 as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn color(&self, name: &str) -> Option<Color> {
        self.names.iter().position(|n| n == name).map(|i| Color(i as u8))
    }

    /// Resolves names, reporting the first undeclared one with its index.
    pub fn profile<S: AsRef<str>>(&self, names: &[S]) -> Result<Profile> {
        names
            .iter()
            .enumerate()
            .map(|(index, n)| {
                self.color(n.as_ref())
                    .ok_or_else(|| Error::UndeclaredColor { index, name: n.as_ref().to_string() })
            })
            .collect::<Result<Vec<_>>>()
            .map(Profile)
    }

    pub fn check(&self, p: &Profile) -> Result<()> {
        for (index, c) in p.0.iter().enumerate() {
            if c.0 as usize >= self.names.len() {
                return Err(Error::UndeclaredColor { index, name: format!("#{}", c.0) });
            }
        }
        Ok(())
    }

    /// Parses `out:in1,in2,...` (an empty input list is `out:`).
    pub fn io_pair(&self, text: &str) -> Result<IOPair> {
        let (out, ins) = text
            .split_once(':')
            .ok_or_else(|| Error::Invalid(format!("expected `out:in,..`, got {text:?}")))?;
        let output = self
            .color(out.trim())
            .ok_or_else(|| Error::UndeclaredColor { index: 0, name: out.trim().to_string() })?;
        let names: Vec<&str> = if ins.trim().is_empty() { vec![] } else { ins.split(',').map(str::trim).collect() };
        Ok(IOPair { inputs: self.profile(&names)?, output })
    }

    pub fn show_profile(&self, p: &Profile) -> String {
        p.0.iter().map(|&c| self.name(c)).collect::<Vec<_>>().join(",")
    }

    pub fn show_io(&self, io: &IOPair) -> String {
        format!("{}:{}", self.name(io.output), self.show_profile(&io.inputs))
    }
}

/// A finite sequence of colors.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Profile(pub Vec<Color>);

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", c.0)?;
        }
        write!(f, ")")
    }
}

impl Profile {
    pub fn empty() -> Self {
        Profile(Vec::new())
    }

    pub fn uniform(c: Color, n: usize) -> Self {
        Profile(vec![c; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn colors(&self) -> &[Color] {
        &self.0
    }

    /// Right action `a·σ`.
    pub fn act(&self, sigma: &Perm) -> Profile {
        Profile(sigma.permute(&self.0))
    }

    /// Left permutation `σ·a = a·σ⁻¹`.
    pub fn left_act(&self, sigma: &Perm) -> Profile {
        self.act(&sigma.inverse())
    }

    pub fn representative(&self) -> Profile {
        let mut v = self.0.clone();
        v.sort();
        Profile(v)
    }

    pub fn is_representative(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }

    /// The lexicographically minimal `τ` with `rep·τ = self`.
    pub fn transport(&self) -> Perm {
        let rep = self.representative();
        let mut used = vec![false; self.len()];
        let images = self
            .0
            .iter()
            .map(|c| {
                let j = (0..rep.len()).find(|&j| !used[j] && rep.0[j] == *c).expect("same multiset");
                used[j] = true;
                j
            })
            .collect();
        Perm::from_images(images).expect("bijection by construction")
    }

    /// `{σ : self·σ = self}`, shared per color-count pattern.
    pub fn stabilizer(&self) -> Arc<PermGroup> {
        let rep = self.representative();
        let rep_stab = rep_stabilizer(&rep);
        if rep == *self {
            return rep_stab;
        }
        let tau = self.transport();
        let tau_inv = tau.inverse();
        let elems = rep_stab.elements().iter().map(|h| tau_inv.compose(h).compose(&tau)).collect();
        Arc::new(PermGroup::from_elements(self.len(), elems).expect("conjugate of a group"))
    }

    pub fn concat(parts: &[&Profile]) -> Profile {
        Profile(parts.iter().flat_map(|p| p.0.iter().copied()).collect())
    }

    pub fn count(&self, c: Color) -> usize {
        self.0.iter().filter(|&&d| d == c).count()
    }
}

static STABILIZERS: Lazy<Mutex<HashMap<Vec<usize>, Arc<PermGroup>>>> = Lazy::new(Default::default);

fn rep_stabilizer(rep: &Profile) -> Arc<PermGroup> {
    let mut runs: Vec<usize> = Vec::new();
    for (i, c) in rep.0.iter().enumerate() {
        if i > 0 && rep.0[i - 1] == *c {
            *runs.last_mut().unwrap() += 1;
        } else {
            runs.push(1);
        }
    }
    let mut cache = STABILIZERS.lock();
    cache
        .entry(runs.clone())
        .or_insert_with(|| {
            let parts: Vec<PermGroup> = runs.iter().map(|&n| PermGroup::symmetric(n)).collect();
            let refs: Vec<&PermGroup> = parts.iter().collect();
            Arc::new(PermGroup::block_product(&refs))
        })
        .clone()
}

/// An orbit of profiles under the symmetric groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileOrbit {
    pub representative: Profile,
    pub stabilizer: Arc<PermGroup>,
}

impl ProfileOrbit {
    /// Number of profiles in the orbit.
    pub fn size(&self) -> usize {
        let fact: usize = (1..=self.representative.len()).product();
        fact / self.stabilizer.order()
    }
}

pub fn orbit_of(colors: &ColorSet, p: &Profile) -> Result<ProfileOrbit> {
    colors.check(p)?;
    let representative = p.representative();
    let stabilizer = representative.stabilizer();
    Ok(ProfileOrbit { representative, stabilizer })
}

/// An element `(c; d)` of `ℕ(C)`: input profile and output color.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct IOPair {
    pub output: Color,
    pub inputs: Profile,
}

impl IOPair {
    pub fn new(output: Color, inputs: Profile) -> Self {
        IOPair { output, inputs }
    }

    pub fn arity(&self) -> usize {
        self.inputs.len()
    }

    pub fn representative(&self) -> IOPair {
        IOPair { output: self.output, inputs: self.inputs.representative() }
    }

    pub fn is_representative(&self) -> bool {
        self.inputs.is_representative()
    }
}

/// The concatenation functor on a list of profiles, with its block
/// embedding `∏ Σ_{|b_j|} → Σ_{|b|}`.
#[derive(Clone, Debug)]
pub struct BlockEmbedding {
    pub sizes: Vec<usize>,
}

impl BlockEmbedding {
    pub fn embed(&self, parts: &[&Perm]) -> Result<Perm> {
        if parts.len() != self.sizes.len() {
            return Err(Error::Invalid("wrong number of blocks".into()));
        }
        for (p, &n) in parts.iter().zip(&self.sizes) {
            if p.degree() != n {
                return Err(Error::DegreeMismatch { expected: n, found: p.degree() });
            }
        }
        Ok(Perm::block_sum(parts))
    }

    pub fn degree(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// Image of the given factor groups.
    pub fn image(&self, factors: &[&PermGroup]) -> PermGroup {
        PermGroup::block_product(factors)
    }
}

pub fn concat_homomorphism(parts: &[Profile]) -> (Profile, BlockEmbedding) {
    let refs: Vec<&Profile> = parts.iter().collect();
    (Profile::concat(&refs), BlockEmbedding { sizes: parts.iter().map(Profile::len).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> ColorSet {
        ColorSet::new(["a", "b"]).unwrap()
    }

    #[test]
    fn orbit_examples() {
        let cs = ab();
        let o = orbit_of(&cs, &cs.profile(&["a", "a", "b"]).unwrap()).unwrap();
        assert_eq!(o.representative, cs.profile(&["a", "a", "b"]).unwrap());
        assert_eq!(o.stabilizer.order(), 2);
        let o = orbit_of(&cs, &cs.profile(&["b", "a"]).unwrap()).unwrap();
        assert_eq!(o.representative, cs.profile(&["a", "b"]).unwrap());
        assert_eq!(o.stabilizer.order(), 1);
        let o = orbit_of(&cs, &Profile::empty()).unwrap();
        assert_eq!(o.representative.len(), 0);
        assert_eq!(o.stabilizer.order(), 1);
        assert_eq!(o.stabilizer.degree(), 0);
    }

    #[test]
    fn undeclared_color_reports_index() {
        let cs = ab();
        match cs.profile(&["a", "z"]) {
            Err(Error::UndeclaredColor { index, name }) => {
                assert_eq!(index, 1);
                assert_eq!(name, "z");
            }
            other => panic!("{other:?}"),
        }
        assert!(orbit_of(&cs, &Profile(vec![Color(0), Color(7)])).is_err());
    }

    #[test]
    fn orbit_constant_and_stabilizer_correct() {
        let cs = ab();
        for n in 0..=5usize {
            for mask in 0..(1u32 << n) {
                let p = Profile((0..n).map(|i| Color(((mask >> i) & 1) as u8)).collect());
                let o = orbit_of(&cs, &p).unwrap();
                let fact: usize = (1..=n).product();
                assert_eq!(o.size() * o.stabilizer.order(), fact);
                let stab = p.stabilizer();
                for s in Perm::all(n) {
                    assert_eq!(orbit_of(&cs, &p.act(&s)).unwrap(), o);
                    assert_eq!(stab.contains(&s), p.act(&s) == p);
                }
                assert_eq!(o.representative.act(&p.transport()), p);
            }
        }
    }

    #[test]
    fn transport_is_lexicographically_minimal() {
        let cs = ab();
        let p = cs.profile(&["b", "a", "a", "b"]).unwrap();
        let rep = p.representative();
        let tau = p.transport();
        let best = Perm::all(4).into_iter().find(|t| rep.act(t) == p).unwrap();
        assert_eq!(tau, best);
    }

    #[test]
    fn concat_examples() {
        let cs = ab();
        let (b, emb) = concat_homomorphism(&[cs.profile(&["a"]).unwrap(), cs.profile(&["b"]).unwrap()]);
        assert_eq!(b, cs.profile(&["a", "b"]).unwrap());
        let s1 = PermGroup::symmetric(1);
        assert_eq!(emb.image(&[&s1, &s1]).order(), 1);

        let parts = [cs.profile(&["a", "a"]).unwrap(), cs.profile(&["a"]).unwrap()];
        let (b, emb) = concat_homomorphism(&parts);
        assert_eq!(b.len(), 3);
        let img = emb.image(&[&PermGroup::symmetric(2), &PermGroup::symmetric(1)]);
        assert_eq!(img.order(), 2);
        assert!(img.contains(&Perm::transposition(3, 0, 1)));

        let (b, emb) = concat_homomorphism(&[]);
        assert!(b.is_empty());
        assert_eq!(emb.degree(), 0);
    }

    #[test]
    fn block_embedding_is_injective_homomorphism() {
        for sizes in [vec![1, 2], vec![2, 2], vec![3, 1, 2], vec![2, 0, 3]] {
            let emb = BlockEmbedding { sizes: sizes.clone() };
            let groups: Vec<PermGroup> = sizes.iter().map(|&n| PermGroup::symmetric(n)).collect();
            let tuples = groups.iter().fold(vec![vec![]], |acc: Vec<Vec<Perm>>, g| {
                acc.iter()
                    .flat_map(|t| {
                        g.elements().iter().map(move |p| {
                            let mut t = t.clone();
                            t.push(p.clone());
                            t
                        })
                    })
                    .collect()
            });
            let mut images = Vec::new();
            for s in &tuples {
                let es = emb.embed(&s.iter().collect::<Vec<_>>()).unwrap();
                for t in &tuples {
                    let st: Vec<Perm> = s.iter().zip(t).map(|(a, b)| a.compose(b)).collect();
                    let lhs = emb.embed(&st.iter().collect::<Vec<_>>()).unwrap();
                    let et = emb.embed(&t.iter().collect::<Vec<_>>()).unwrap();
                    assert_eq!(lhs, es.compose(&et));
                }
                images.push(es);
            }
            images.sort();
            images.dedup();
            assert_eq!(images.len(), tuples.len());
        }
    }

    #[test]
    fn io_pair_parsing() {
        let cs = ColorSet::single();
        let io = cs.io_pair("*:*,*").unwrap();
        assert_eq!(io.arity(), 2);
        assert_eq!(cs.io_pair("*:").unwrap().arity(), 0);
        assert!(cs.io_pair("x:*").is_err());
    }
}
