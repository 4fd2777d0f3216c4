//! The colored circle product `X∘Y` and its monoidal structure.
//!
//! An element of `(X∘Y)(d; b)` is written `(x; y_1..y_m; σ)`: `x` at
//! `(d; c)` with `c` a representative, each `y_j` at a representative
//! `(c_j; b_j)`, and `σ` a leaf map with `(b_1 ⊕ .. ⊕ b_m)·σ = b`. Position
//! `i` of `b` is fed by position `σ(i)` of the concatenation.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use crate::elem::Elem;
use crate::error::{Error, Result};
use crate::fincat::{induce, GSet, Hom, Induced, Perm, PermGroup, UnionFind};
use crate::profiles::{Color, IOPair, Profile};
use crate::symseq::{MapDefect, SymSeq, SymSeqMap};
use crate::trees::{Kind, Node};

/// A structured circle-product element; see the module docs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircleElem {
    pub c: Profile,
    pub x: usize,
    pub ys: Vec<(IOPair, usize)>,
    pub sigma: Perm,
}

struct Decomp {
    parts: Vec<IOPair>,
    sizes: Vec<usize>,
    sigma0: Perm,
    sigma0_inv: Perm,
    induced: Induced,
    offset: usize,
}

/// `Y^{⊗c}` at one target orbit `[b]`, as a `Σ_[b]`-set.
pub struct YPower {
    b: Profile,
    stab: Arc<PermGroup>,
    decomps: Vec<Decomp>,
    index: HashMap<Vec<IOPair>, usize>,
    len: usize,
}

impl YPower {
    /// Coproduct over decompositions `([b_1],..,[b_m])`, in lexicographic
    /// order, of the induction of `⊗ Y(c_j; b_j)` along the block embedding.
    pub fn new(y: &SymSeq, c: &Profile, b: &Profile) -> Result<Self> {
        if !b.is_representative() {
            return Err(Error::Invalid("y_power target must be an orbit representative".into()));
        }
        let stab = b.stabilizer();
        let choices: Vec<Vec<IOPair>> =
            c.colors().iter().map(|&cj| y.support(cj).cloned().collect()).collect();
        let mut tuples: Vec<Vec<IOPair>> = vec![Vec::new()];
        for ch in &choices {
            let mut next = Vec::new();
            for t in &tuples {
                let used: usize = t.iter().map(IOPair::arity).sum();
                for k in ch {
                    if used + k.arity() <= b.len() {
                        let mut t2 = t.clone();
                        t2.push(k.clone());
                        next.push(t2);
                    }
                }
            }
            tuples = next;
        }
        tuples.retain(|t| {
            let parts: Vec<&Profile> = t.iter().map(|k| &k.inputs).collect();
            Profile::concat(&parts).representative() == *b
        });
        tuples.sort_by(|s, t| {
            let a: Vec<&Profile> = s.iter().map(|k| &k.inputs).collect();
            let b: Vec<&Profile> = t.iter().map(|k| &k.inputs).collect();
            a.cmp(&b)
        });
        let mut decomps = Vec::with_capacity(tuples.len());
        let mut index = HashMap::new();
        let mut offset = 0;
        for parts in tuples {
            let d = Self::decomposition(y, parts.clone(), &stab, offset)?;
            offset += d.induced.len();
            index.insert(parts, decomps.len());
            decomps.push(d);
        }
        Ok(YPower { b: b.clone(), stab, decomps, index, len: offset })
    }

    fn decomposition(y: &SymSeq, parts: Vec<IOPair>, stab: &Arc<PermGroup>, offset: usize) -> Result<Decomp> {
        let profiles: Vec<&Profile> = parts.iter().map(|k| &k.inputs).collect();
        let concat = Profile::concat(&profiles);
        let sigma0_inv = concat.transport();
        let sigma0 = sigma0_inv.inverse();
        let entries: Vec<_> = parts.iter().map(|k| y.get(k).expect("decomposition uses stored keys")).collect();
        let sizes: Vec<usize> = entries.iter().map(|e| e.len()).collect();
        let stabs: Vec<Arc<PermGroup>> = parts.iter().map(|k| k.inputs.stabilizer()).collect();
        let refs: Vec<&PermGroup> = stabs.iter().map(|g| g.as_ref()).collect();
        let h_grp = Arc::new(PermGroup::block_product(&refs));
        let total: usize = sizes.iter().product();
        let arities: Vec<usize> = parts.iter().map(IOPair::arity).collect();
        let factors = GSet::from_fn((0..total).collect::<Vec<usize>>(), h_grp.clone(), |t, h| {
            let p = h_grp.element(h);
            let mut digits = decode(t, &sizes);
            let mut start = 0;
            for (j, e) in entries.iter().enumerate() {
                let local = restrict(p, start, arities[j]);
                digits[j] = e.set().act_perm(digits[j], &local).expect("block factor lies in the stabilizer");
                start += arities[j];
            }
            encode(&digits, &sizes)
        });
        let f = Hom::from_fn(h_grp.clone(), stab.clone(), |h| sigma0_inv.compose(h).compose(&sigma0))?;
        let induced = induce(&factors, &f)?;
        Ok(Decomp { parts, sizes, sigma0, sigma0_inv, induced, offset })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn group(&self) -> &Arc<PermGroup> {
        &self.stab
    }

    fn decomp_of(&self, w: usize) -> &Decomp {
        let i = self.decomps.partition_point(|d| d.offset <= w) - 1;
        &self.decomps[i]
    }

    pub fn act(&self, w: usize, g: usize) -> usize {
        let d = self.decomp_of(w);
        d.offset + d.induced.gset.act(w - d.offset, g)
    }

    /// The canonical `(y_1..y_m; σ)` of an element.
    pub fn element(&self, w: usize) -> (Vec<(IOPair, usize)>, Perm) {
        let d = self.decomp_of(w);
        let (t, g) = d.induced.gset.elements()[w - d.offset];
        let digits = decode(t, &d.sizes);
        let ys = d.parts.iter().cloned().zip(digits).collect();
        (ys, d.sigma0.compose(self.stab.element(g)))
    }

    /// The element represented by arbitrary factors at representatives and
    /// a leaf map `σ`.
    pub fn locate(&self, ys: &[(IOPair, usize)], sigma: &Perm) -> Result<usize> {
        let parts: Vec<IOPair> = ys.iter().map(|(k, _)| k.clone()).collect();
        let di = *self
            .index
            .get(&parts)
            .ok_or_else(|| Error::Invalid(format!("no decomposition {parts:?} of {:?}", self.b)))?;
        let d = &self.decomps[di];
        let digits: Vec<usize> = ys.iter().map(|(_, i)| *i).collect();
        if digits.iter().zip(&d.sizes).any(|(i, n)| i >= n) {
            return Err(Error::OutOfBounds("factor index".into()));
        }
        let g = d.sigma0_inv.compose(sigma);
        let gi = self
            .stab
            .index_of(&g)
            .ok_or_else(|| Error::Invalid(format!("leaf map {sigma} does not reach the representative")))?;
        Ok(d.offset + d.induced.class_of(encode(&digits, &d.sizes), gi))
    }

    /// Labeled view: `((y_1, .., y_m), σ)` per element.
    pub fn to_gset(&self, y: &SymSeq) -> GSet<Elem> {
        let labels = (0..self.len)
            .map(|w| {
                let (ys, s) = self.element(w);
                let items = ys.iter().map(|(k, i)| y.get(k).expect("stored").set().elements()[*i].clone()).collect();
                Elem::tuple(vec![Elem::tuple(items), Elem::Perm(s)])
            })
            .collect();
        GSet::from_fn(labels, self.stab.clone(), |w, g| self.act(w, g))
    }
}

fn restrict(p: &Perm, start: usize, len: usize) -> Perm {
    Perm::from_images((start..start + len).map(|i| p.apply(i) - start).collect()).expect("block of a block sum")
}

fn decode(mut t: usize, sizes: &[usize]) -> Vec<usize> {
    let mut out = vec![0; sizes.len()];
    for j in (0..sizes.len()).rev() {
        out[j] = t % sizes[j];
        t /= sizes[j];
    }
    out
}

fn encode(digits: &[usize], sizes: &[usize]) -> usize {
    digits.iter().zip(sizes).fold(0, |acc, (d, s)| acc * s + d)
}

/// `Y^{⊗c}` at `[b]` as a labeled `Σ_[b]`-set.
pub fn y_power(y: &SymSeq, c: &Profile, b: &Profile) -> Result<GSet<Elem>> {
    Ok(YPower::new(y, c, b)?.to_gset(y))
}

struct Part {
    c: Profile,
    yp: YPower,
    class: Vec<u32>,
    reps: Vec<(usize, usize)>,
    base: usize,
}

struct CircleEntry {
    parts: Vec<Part>,
}

/// `X∘Y` with enough structure to locate arbitrary composites.
pub struct Circle {
    pub seq: SymSeq,
    entries: BTreeMap<IOPair, CircleEntry>,
}

/// Largest number of `(x, w)` pairs tolerated in one entry.
pub const DEFAULT_CAP: usize = 2_000_000;

impl Circle {
    /// Computes every entry of arity at most `max_arity` (all when `None`).
    pub fn new(x: &SymSeq, y: &SymSeq, max_arity: Option<usize>, cap: usize) -> Result<Self> {
        if x.colors() != y.colors() {
            return Err(Error::Invalid("circle product of sequences over different color sets".into()));
        }
        let mut targets: BTreeMap<IOPair, BTreeSet<Profile>> = BTreeMap::new();
        for xk in x.keys() {
            for b in reachable(y, &xk.inputs, max_arity) {
                targets.entry(IOPair::new(xk.output, b)).or_default().insert(xk.inputs.clone());
            }
        }
        let mut seq = SymSeq::empty(x.colors().clone());
        let mut entries = BTreeMap::new();
        for (key, cs) in targets {
            let (entry, gset) = Self::entry(x, y, &key, &cs, cap)?;
            if !gset.is_empty() {
                seq.insert(key.clone(), gset)?;
                entries.insert(key, entry);
            }
        }
        Ok(Circle { seq, entries })
    }

    fn entry(x: &SymSeq, y: &SymSeq, key: &IOPair, cs: &BTreeSet<Profile>, cap: usize) -> Result<(CircleEntry, GSet<Elem>)> {
        let b = &key.inputs;
        let stab_b = b.stabilizer();
        let mut parts = Vec::new();
        let mut labels = Vec::new();
        let mut base = 0;
        for c in cs {
            let xe = x.get(&IOPair::new(key.output, c.clone())).expect("stored key");
            let yp = YPower::new(y, c, b)?;
            let nw = yp.len();
            let npairs = xe.len() * nw;
            if npairs > cap {
                return Err(Error::SizeCap(format!("{} pairs at {key:?}", npairs)));
            }
            if npairs == 0 {
                continue;
            }
            let mut uf = UnionFind::new(npairs);
            let stab_c = c.stabilizer();
            for pi in stab_c.elements().iter().filter(|p| !p.is_identity()) {
                let pi_inv = pi.inverse();
                for w in 0..nw {
                    let (ys, sigma) = yp.element(w);
                    let zs = pi_inv.permute(&ys);
                    let sizes: Vec<usize> = zs.iter().map(|(k, _)| k.arity()).collect();
                    let w2 = yp.locate(&zs, &pi.block_permutation(&sizes).compose(&sigma))?;
                    for xi in 0..xe.len() {
                        let x2 = xe.set().act_perm(xi, &pi_inv).expect("stabilizer element");
                        uf.union(xi * nw + w, x2 * nw + w2);
                    }
                }
            }
            let mut class = vec![u32::MAX; npairs];
            let mut reps = Vec::new();
            let mut root_class: HashMap<usize, u32> = HashMap::new();
            for p in 0..npairs {
                let r = uf.find(p);
                let id = *root_class.entry(r).or_insert_with(|| {
                    reps.push((p / nw, p % nw));
                    (reps.len() - 1) as u32
                });
                class[p] = id;
            }
            for &(xi, w) in &reps {
                let (ys, sigma) = yp.element(w);
                labels.push(two_level_tree(x, y, key.output, c, xi, &ys, &sigma));
            }
            let n = reps.len();
            parts.push(Part { c: c.clone(), yp, class, reps, base });
            base += n;
        }
        let entry = CircleEntry { parts };
        let table: Vec<Vec<usize>> = (0..base)
            .map(|i| {
                let part = entry.parts.iter().rev().find(|p| p.base <= i).expect("part");
                let (xi, w) = part.reps[i - part.base];
                let nw = part.yp.len();
                (0..stab_b.order()).map(|g| part.base + part.class[xi * nw + part.yp.act(w, g)] as usize).collect()
            })
            .collect();
        let gset = GSet::from_table(labels, stab_b, table)?;
        Ok((entry, gset))
    }

    pub fn get(&self, key: &IOPair) -> Option<usize> {
        self.seq.get(key).map(|e| e.len())
    }

    /// The element `(x; ys; σ)` of `(X∘Y)(d; b)`, where `b` must come out
    /// as a representative.
    pub fn locate(&self, d: Color, c: &Profile, x: usize, ys: &[(IOPair, usize)], sigma: &Perm) -> Result<(IOPair, usize)> {
        let profiles: Vec<&Profile> = ys.iter().map(|(k, _)| &k.inputs).collect();
        let b = Profile::concat(&profiles).act(sigma);
        let key = IOPair::new(d, b);
        let entry = self.entries.get(&key).ok_or_else(|| Error::Invalid(format!("no entry at {key:?}")))?;
        let part = entry
            .parts
            .iter()
            .find(|p| p.c == *c)
            .ok_or_else(|| Error::Invalid(format!("no component for {c:?} at {key:?}")))?;
        let w = part.yp.locate(ys, sigma)?;
        let idx = part.base + part.class[x * part.yp.len() + w] as usize;
        Ok((key, idx))
    }

    /// The canonical representative of an element.
    pub fn element(&self, key: &IOPair, idx: usize) -> Option<CircleElem> {
        let entry = self.entries.get(key)?;
        let part = entry.parts.iter().rev().find(|p| p.base <= idx)?;
        let (x, w) = *part.reps.get(idx - part.base)?;
        let (ys, sigma) = part.yp.element(w);
        Some(CircleElem { c: part.c.clone(), x, ys, sigma })
    }
}

/// Target representatives `[b]` reachable from `c` through `Y`'s keys.
fn reachable(y: &SymSeq, c: &Profile, max_arity: Option<usize>) -> BTreeSet<Profile> {
    let mut acc: Vec<Vec<Color>> = vec![Vec::new()];
    for &cj in c.colors() {
        let mut next = BTreeSet::new();
        for a in &acc {
            for k in y.support(cj) {
                let mut v = a.clone();
                v.extend_from_slice(k.inputs.colors());
                if max_arity.map_or(true, |m| v.len() <= m) {
                    v.sort();
                    next.insert(v);
                }
            }
        }
        acc = next.into_iter().collect();
    }
    acc.into_iter().map(Profile).collect()
}

fn two_level_tree(x: &SymSeq, y: &SymSeq, d: Color, c: &Profile, xi: usize, ys: &[(IOPair, usize)], sigma: &Perm) -> Elem {
    let xl = x.get(&IOPair::new(d, c.clone())).expect("stored").set().elements()[xi].clone();
    let inv = sigma.inverse();
    let mut pos = 0;
    let children = ys
        .iter()
        .map(|(k, i)| {
            let yl = y.get(k).expect("stored").set().elements()[*i].clone();
            let leaves = k
                .inputs
                .colors()
                .iter()
                .map(|&col| {
                    let l = Node::labeled_leaf(col, inv.apply(pos));
                    pos += 1;
                    l
                })
                .collect();
            Node::vertex(Kind::Normal, k.output, yl, leaves)
        })
        .collect();
    Node::vertex(Kind::Normal, d, xl, children).into_elem()
}

/// `X∘Y` as a symmetric sequence.
pub fn circle(x: &SymSeq, y: &SymSeq) -> Result<SymSeq> {
    Ok(Circle::new(x, y, None, DEFAULT_CAP)?.seq)
}

pub fn unit_symseq(colors: Arc<crate::profiles::ColorSet>) -> SymSeq {
    SymSeq::unit(colors)
}

/// A candidate isomorphism together with the outcome of its checks.
#[derive(Clone, Debug)]
pub struct Witness {
    pub map: SymSeqMap,
    pub defect: Option<MapDefect>,
}

impl Witness {
    fn checked(map: SymSeqMap, source: &SymSeq, target: &SymSeq) -> Self {
        let defect = map.check_bijective(source, target).and_then(|_| map.check_equivariant(source, target)).err();
        Witness { map, defect }
    }

    pub fn holds(&self) -> bool {
        self.defect.is_none()
    }
}

fn unit_of(i: &SymSeq, c: Color) -> (IOPair, usize) {
    let k = IOPair::new(c, Profile(vec![c]));
    debug_assert!(i.get(&k).is_some());
    (k, 0)
}

/// `λ: X → I∘X`, `x ↦ (u_d; x; id)`.
pub fn witness_left_unit(x: &SymSeq) -> Result<Witness> {
    let i = SymSeq::unit(x.colors().clone());
    let ix = Circle::new(&i, x, None, DEFAULT_CAP)?;
    let mut map = SymSeqMap::default();
    for (key, e) in x.entries() {
        let d = Profile(vec![key.output]);
        let comp = (0..e.len())
            .map(|xi| ix.locate(key.output, &d, 0, &[(key.clone(), xi)], &Perm::identity(key.arity())).map(|r| r.1))
            .collect::<Result<Vec<_>>>()?;
        map.components.insert(key.clone(), comp);
    }
    Ok(Witness::checked(map, x, &ix.seq))
}

/// `ρ: X → X∘I`, `x ↦ (x; u_{c_1}..u_{c_m}; id)`.
pub fn witness_right_unit(x: &SymSeq) -> Result<Witness> {
    let i = SymSeq::unit(x.colors().clone());
    let xi_seq = Circle::new(x, &i, None, DEFAULT_CAP)?;
    let mut map = SymSeqMap::default();
    for (key, e) in x.entries() {
        let units: Vec<(IOPair, usize)> = key.inputs.colors().iter().map(|&c| unit_of(&i, c)).collect();
        let comp = (0..e.len())
            .map(|xi| xi_seq.locate(key.output, &key.inputs, xi, &units, &Perm::identity(key.arity())).map(|r| r.1))
            .collect::<Result<Vec<_>>>()?;
        map.components.insert(key.clone(), comp);
    }
    Ok(Witness::checked(map, x, &xi_seq.seq))
}

/// `α: (X∘Y)∘Z → X∘(Y∘Z)` on all entries of arity at most `bound`.
///
/// `X∘Y` is computed in full, since arity-0 entries of `Z` can lower the
/// arity of a composite.
pub fn witness_associativity(x: &SymSeq, y: &SymSeq, z: &SymSeq, bound: usize, cap: usize) -> Result<Witness> {
    let xy = Circle::new(x, y, None, cap)?;
    let xy_z = Circle::new(&xy.seq, z, Some(bound), cap)?;
    let yz = Circle::new(y, z, Some(bound), cap)?;
    let x_yz = Circle::new(x, &yz.seq, Some(bound), cap)?;
    let mut map = SymSeqMap::default();
    for (key, e) in xy_z.seq.entries() {
        let mut comp = Vec::with_capacity(e.len());
        for idx in 0..e.len() {
            let outer = xy_z.element(key, idx).expect("element");
            let wkey = IOPair::new(key.output, outer.c.clone());
            let inner = xy.element(&wkey, outer.x).expect("inner element");
            // z'_q = z_{τ⁻¹(q)} feeds concatenated Y-input q
            let tau = &inner.sigma;
            let zp = tau.inverse().permute(&outer.ys);
            let zsizes: Vec<usize> = zp.iter().map(|(k, _)| k.arity()).collect();
            let tau_block = tau.block_permutation(&zsizes);
            let mut vs = Vec::with_capacity(inner.ys.len());
            let mut mus = Vec::with_capacity(inner.ys.len());
            let mut q = 0;
            for (yk, yi) in &inner.ys {
                let zs = &zp[q..q + yk.arity()];
                q += yk.arity();
                let profiles: Vec<&Profile> = zs.iter().map(|(k, _)| &k.inputs).collect();
                let mu = Profile::concat(&profiles).transport().inverse();
                let v = yz.locate(yk.output, &yk.inputs, *yi, zs, &mu)?;
                vs.push(v);
                mus.push(mu.inverse());
            }
            let mu_refs: Vec<&Perm> = mus.iter().collect();
            let total = Perm::block_sum(&mu_refs).compose(&tau_block).compose(&outer.sigma);
            let (k2, i2) = x_yz.locate(key.output, &inner.c, inner.x, &vs, &total)?;
            if k2 != *key {
                return Err(Error::Invalid(format!("associator moved {key:?} to {k2:?}")));
            }
            comp.push(i2);
        }
        map.components.insert(key.clone(), comp);
    }
    Ok(Witness::checked(map, &xy_z.seq, &x_yz.seq))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::ColorSet;

    fn one() -> Arc<ColorSet> {
        Arc::new(ColorSet::single())
    }

    fn key(n: usize) -> IOPair {
        IOPair::new(Color(0), Profile::uniform(Color(0), n))
    }

    fn trivial_at(cs: Arc<ColorSet>, entries: &[(usize, usize)]) -> SymSeq {
        let mut s = SymSeq::empty(cs);
        for &(n, size) in entries {
            let k = key(n);
            let g = k.inputs.stabilizer();
            s.insert(k, GSet::trivial((0..size as i64).map(Elem::Int).collect(), g)).unwrap();
        }
        s
    }

    #[test]
    fn y_power_examples() {
        let cs = one();
        let y0 = trivial_at(cs.clone(), &[(0, 1)]);
        assert_eq!(y_power(&y0, &Profile::empty(), &Profile::empty()).unwrap().len(), 1);
        assert_eq!(y_power(&y0, &Profile::empty(), &Profile::uniform(Color(0), 1)).unwrap().len(), 0);
        assert_eq!(y_power(&y0, &Profile::uniform(Color(0), 2), &Profile::empty()).unwrap().len(), 1);
        let y1 = trivial_at(cs, &[(1, 1)]);
        let p = y_power(&y1, &Profile::uniform(Color(0), 1), &Profile::uniform(Color(0), 1)).unwrap();
        assert_eq!(p.len(), 1);
    }

    #[test]
    fn binary_over_constant() {
        let cs = one();
        let x = trivial_at(cs.clone(), &[(2, 1)]);
        let y = trivial_at(cs, &[(0, 1)]);
        let xy = circle(&x, &y).unwrap();
        assert_eq!(xy.total_size(), 1);
        assert_eq!(xy.size_at(&key(0)), 1);
        assert!(xy.is_concentrated_in_arity(0));
    }

    #[test]
    fn empty_right_factor() {
        let cs = one();
        let x = trivial_at(cs.clone(), &[(1, 2), (2, 1)]);
        let y = SymSeq::empty(cs);
        assert!(circle(&x, &y).unwrap().is_empty());
    }

    #[test]
    fn unit_laws_on_regular_binary() {
        let cs = one();
        let mut x = trivial_at(cs.clone(), &[(0, 2), (1, 1)]);
        let k = key(2);
        let g = k.inputs.stabilizer();
        let gg = g.clone();
        let regular = GSet::from_fn(g.elements().iter().cloned().map(Elem::Perm).collect(), g, move |a, b| gg.mul(a, b));
        x.insert(k, regular).unwrap();
        assert!(witness_left_unit(&x).unwrap().holds());
        assert!(witness_right_unit(&x).unwrap().holds());
        let i = SymSeq::unit(cs);
        assert_eq!(circle(&i, &i).unwrap().total_size(), 1);
    }

    #[test]
    fn associativity_small() {
        let cs = one();
        let x = trivial_at(cs.clone(), &[(2, 1), (1, 2)]);
        let y = trivial_at(cs.clone(), &[(0, 1), (2, 2)]);
        let z = trivial_at(cs, &[(1, 1), (0, 2)]);
        let w = witness_associativity(&x, &y, &z, 3, DEFAULT_CAP).unwrap();
        assert!(w.holds(), "{:?}", w.defect);
    }
}
