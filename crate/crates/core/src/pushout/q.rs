use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fincat::{induce, pushout, GSet, Hom, Perm, PermGroup};

/// An injection `i: X → Y` of finite sets `{0..|X|} → {0..|Y|}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Injection {
    pub y_len: usize,
    pub map: Vec<usize>,
}

impl Injection {
    pub fn new(y_len: usize, map: Vec<usize>) -> Result<Self> {
        if map.iter().any(|&y| y >= y_len) {
            return Err(Error::OutOfBounds(format!("image outside a {y_len}-element set")));
        }
        let mut seen = vec![false; y_len];
        for &y in &map {
            if std::mem::replace(&mut seen[y], true) {
                return Err(Error::Invalid(format!("the map is not injective: {y} is hit twice")));
            }
        }
        Ok(Injection { y_len, map })
    }

    pub fn identity(n: usize) -> Self {
        Injection { y_len: n, map: (0..n).collect() }
    }

    pub fn x_len(&self) -> usize {
        self.map.len()
    }

    /// Every injection `{0..x} → {0..y}`.
    pub fn all(x: usize, y: usize) -> Vec<Injection> {
        let mut out = vec![Vec::new()];
        for _ in 0..x {
            out = out
                .into_iter()
                .flat_map(|m: Vec<usize>| (0..y).filter(|v| !m.contains(v)).map(|v| [m.clone(), vec![v]].concat()).collect::<Vec<_>>())
                .collect();
        }
        out.into_iter().map(|map| Injection { y_len: y, map }).collect()
    }
}

/// `Q^t_q` as a `Σ_t`-set, carried by the tuples of `Y^t` it maps onto.
#[derive(Clone, Debug)]
pub struct QObject {
    pub t: usize,
    pub q: usize,
    pub carrier: GSet<Vec<usize>>,
}

impl QObject {
    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }
}

/// `Σ_{j≤q} C(t,j)·(|Y|−|X|)^j·|X|^{t−j}`.
pub fn q_closed_form(x: usize, y: usize, t: usize, q: usize) -> u128 {
    let binom = |n: usize, k: usize| (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128);
    (0..=q.min(t)).map(|j| binom(t, j) * ((y - x) as u128).pow(j as u32) * (x as u128).pow((t - j) as u32)).sum()
}

fn tuples(values: &[usize], len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out.into_iter().flat_map(|t: Vec<usize>| values.iter().map(move |&v| [t.clone(), vec![v]].concat())).collect();
    }
    out
}

fn tuple_gset(mut elems: Vec<Vec<usize>>, group: Arc<PermGroup>) -> GSet<Vec<usize>> {
    elems.sort();
    elems.dedup();
    let index: HashMap<Vec<usize>, usize> = elems.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
    let g = group.clone();
    let table: Vec<usize> = (0..elems.len())
        .flat_map(|x| (0..g.order()).map(|h| index[&g.element(h).permute(&elems[x])]).collect::<Vec<_>>())
        .collect();
    let order = group.order();
    GSet::from_fn(elems, group, move |x, h| table[x * order + h])
}

struct Builder<'a> {
    i: &'a Injection,
    memo: HashMap<(usize, usize), QObject>,
}

impl Builder<'_> {
    fn get(&mut self, t: usize, q: usize) -> Result<QObject> {
        if let Some(o) = self.memo.get(&(t, q)) {
            return Ok(o.clone());
        }
        let o = self.build(t, q)?;
        self.memo.insert((t, q), o.clone());
        Ok(o)
    }

    fn build(&mut self, t: usize, q: usize) -> Result<QObject> {
        let sym = Arc::new(PermGroup::symmetric(t));
        if q == 0 {
            return Ok(QObject { t, q, carrier: tuple_gset(tuples(&self.i.map, t), sym) });
        }
        // Q^t_q = Q^t_{q-1} ⊔ (X^{t-q} × Y^q)·Σ_t  over  (X^{t-q} × Q^q_{q-1})·Σ_t
        let prev = self.get(t, q - 1)?;
        let top = self.get(q, q - 1)?;
        let h = Arc::new(PermGroup::block_product(&[&PermGroup::symmetric(t - q), &PermGroup::symmetric(q)]));
        let inclusion = Hom::inclusion(h.clone(), sym.clone())?;
        let xs = tuples(&self.i.map, t - q);
        let ys: Vec<usize> = (0..self.i.y_len).collect();
        let glue = |zs: &[Vec<usize>]| -> Vec<Vec<usize>> {
            xs.iter().flat_map(|w| zs.iter().map(move |z| [w.clone(), z.clone()].concat())).collect()
        };
        let a_set = tuple_gset(glue(top.carrier.elements()), h.clone());
        let b_set = tuple_gset(glue(&tuples(&ys, q)), h);
        let a_ind = induce(&a_set, &inclusion)?;
        let b_ind = induce(&b_set, &inclusion)?;
        let realize = |set: &GSet<Vec<usize>>, (x, g): (usize, usize)| sym.element(g).permute(&set.elements()[x]);
        let prev_index: HashMap<&Vec<usize>, usize> = prev.carrier.elements().iter().enumerate().map(|(i, t)| (t, i)).collect();
        let mut to_prev = Vec::with_capacity(a_ind.len());
        let mut to_b = Vec::with_capacity(a_ind.len());
        for &(x, g) in a_ind.gset.elements() {
            let tuple = realize(&a_set, (x, g));
            let p = prev_index.get(&tuple).copied().ok_or_else(|| Error::Invalid(format!("attaching tuple {tuple:?} missing from Q^{t}_{}", q - 1)))?;
            to_prev.push(p);
            let bx = b_set.elements().iter().position(|e| *e == a_set.elements()[x]).expect("X^{t-q} × Q^q_{q-1} ⊆ X^{t-q} × Y^q");
            to_b.push(b_ind.class_of(bx, g));
        }
        let po = pushout(prev.len(), b_ind.len(), &to_prev, &to_b)?;
        let mut labels: Vec<Option<Vec<usize>>> = vec![None; po.size];
        let mut assign = |class: usize, tuple: Vec<usize>| -> Result<()> {
            match &labels[class] {
                Some(old) if *old != tuple => Err(Error::Invalid(format!("pushout class maps to both {old:?} and {tuple:?}"))),
                _ => {
                    labels[class] = Some(tuple);
                    Ok(())
                }
            }
        };
        for (i, &c) in po.left.iter().enumerate() {
            assign(c, prev.carrier.elements()[i].clone())?;
        }
        for (i, &c) in po.right.iter().enumerate() {
            assign(c, realize(&b_set, b_ind.gset.elements()[i]))?;
        }
        let carrier: Vec<Vec<usize>> = labels.into_iter().map(|l| l.expect("legs are jointly surjective")).collect();
        let n = carrier.len();
        let carrier = tuple_gset(carrier, sym);
        if carrier.len() != n {
            return Err(Error::Invalid("two pushout classes map to the same tuple".into()));
        }
        Ok(QObject { t, q, carrier })
    }
}

/// `Q^t_q` for an injection `i: X → Y`, built by the inductive pushouts
/// from `Q^t_0 = X^t` up to `Q^t_t = Y^t`.
pub fn q_object(i: &Injection, t: usize, q: usize) -> Result<QObject> {
    if q > t {
        return Err(Error::OutOfBounds(format!("q = {q} exceeds t = {t}")));
    }
    Builder { i, memo: HashMap::new() }.get(t, q)
}

/// The subset model: tuples in `Y^t` with at most `q` coordinates outside
/// the image of `i`.
pub fn q_subset_model(i: &Injection, t: usize, q: usize) -> Vec<Vec<usize>> {
    let ys: Vec<usize> = (0..i.y_len).collect();
    tuples(&ys, t).into_iter().filter(|tu| tu.iter().filter(|v| !i.map.contains(v)).count() <= q).collect()
}

/// Fixed points of `σ` on a `Σ_t`-set of tuples.
pub fn fixed_points(set: &GSet<Vec<usize>>, sigma: &Perm) -> usize {
    set.elements().iter().filter(|t| sigma.permute(t) == **t).count()
}
