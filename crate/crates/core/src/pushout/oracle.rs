use std::collections::HashMap;

use super::{AttachmentData, Extension};
use crate::error::{Error, Result};
use crate::fincat::UnionFind;
use crate::profiles::IOPair;
use crate::trees::{enumerate_shapes, Kind, Node, ShapeGrammar, Vertex};

/// Largest number of terms the oracle will generate.
pub const ORACLE_CAP: usize = 3_000_000;

/// Classes of the pushout at one entry, found by congruence closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    pub entry: IOPair,
    pub size_bound: usize,
    /// Free terms generated.
    pub terms: usize,
    /// `by_new[k]`: classes whose terms carry `k` generators outside `X`.
    pub by_new: Vec<usize>,
    /// Largest `K` for which every class with at most `K` new generators is
    /// certified to have a term within the size bound.
    pub certified: usize,
}

impl OracleReport {
    /// Classes with at most `k` new generators.
    pub fn cumulative(&self, k: usize) -> usize {
        self.by_new.iter().take(k + 1).sum()
    }
}

fn count_new(ext: &Extension, t: &Node) -> Result<usize> {
    let mut n = 0;
    for v in t.vertices() {
        if v.kind == Kind::Distinguished {
            let (y, _) = ext.data().parse_generator(&v.deco)?;
            n += usize::from(ext.data().x_of(y).is_none());
        }
    }
    Ok(n)
}

/// One-step rewrites applied at the root vertex of the canonical `v`, in
/// canonical form.
fn local_moves(ext: &Extension, v: &Vertex) -> Result<Vec<Node>> {
    let a = ext.data().ambient.as_ref();
    let mut out = Vec::new();
    match v.kind {
        Kind::Normal => {
            if v.children.len() == 1 && v.deco == a.unit(v.out) {
                out.push(v.children[0].clone());
            }
            for (i, c) in v.children.iter().enumerate() {
                let Node::Vertex(w) = c else { continue };
                if w.kind != Kind::Normal {
                    continue;
                }
                let deco = a.compose_at(v.out, &v.inputs(), &v.deco, i, &w.inputs(), &w.deco)?;
                let mut children = v.children[..i].to_vec();
                children.extend(w.children.iter().cloned());
                children.extend(v.children[i + 1..].iter().cloned());
                out.push(ext.canonical_top(Vertex { kind: Kind::Normal, out: v.out, deco, children })?);
            }
        }
        Kind::Distinguished => {
            let (y, pi) = ext.data().parse_generator(&v.deco)?;
            if let Some(x) = ext.data().x_of(y) {
                let s = &ext.data().s;
                let deco = a.act(s.output, &s.inputs, &ext.data().f[x], &pi)?;
                out.push(ext.canonical_top(Vertex { kind: Kind::Normal, out: v.out, deco, children: v.children.clone() })?);
            }
        }
    }
    Ok(out)
}

/// Every term one rewrite away from the canonical `t`, in canonical form.
fn moves(ext: &Extension, t: &Node) -> Result<Vec<Node>> {
    let Node::Vertex(v) = t else { return Ok(Vec::new()) };
    let mut out = local_moves(ext, v)?;
    for (i, c) in v.children.iter().enumerate() {
        for m in moves(ext, c)? {
            let mut children = v.children.clone();
            children[i] = m;
            out.push(ext.canonical_top(Vertex { kind: v.kind, out: v.out, deco: v.deco.clone(), children })?);
        }
    }
    Ok(out)
}

/// The pushout at entry `r`, as classes of free terms on the elements of
/// `A` and the generators `Y` with at most `size_bound` vertices, under the
/// congruence generated by composing adjacent elements of `A`, removing
/// units and replacing `x ∈ X` by `f(x)`.
///
/// Every rewrite keeps or lowers the vertex count, so the bounded term set
/// is closed under them. A class with `k` new generators has a term with
/// `1 + k + k·|s|` vertices or fewer; bounds at least that certify stage `k`.
pub fn oracle_pushout(data: &AttachmentData, r: &IOPair, size_bound: usize) -> Result<OracleReport> {
    let max_arity = (size_bound + r.arity()).saturating_sub(1).max(1);
    let ext = Extension::new(data.clone(), 0, max_arity)?;
    let a = data.ambient.as_ref();
    let ncol = a.colors().len();
    let s_rep = data.s.clone();
    let vertex_ok = |kind: Kind, io: &IOPair| match kind {
        Kind::Normal => io.arity() <= max_arity && ext.normal_support(io),
        Kind::Distinguished => io.representative() == s_rep,
    };
    let edge_ok = |_: Kind, _: Option<Kind>| true;
    let root_ok = |_: Option<Kind>| true;
    let g = ShapeGrammar { colors: ncol, kinds: vec![Kind::Normal, Kind::Distinguished], max_arity, vertex_ok: &vertex_ok, edge_ok: &edge_ok, root_ok: &root_ok };
    let mut leaves = vec![0; ncol];
    for c in r.inputs.colors() {
        leaves[c.0 as usize] += 1;
    }
    let shapes = enumerate_shapes(&g, r.output, Some(&leaves), None, size_bound);
    let mut index: HashMap<Node, usize> = HashMap::new();
    let mut terms: Vec<Node> = Vec::new();
    for shape in &shapes {
        let labelings = shape.labelings(&r.inputs);
        for dec in shape.decorations(&|v| ext.vertex_options(v, false)) {
            for lab in &labelings {
                let t = ext.canonical(&dec.with_labels(lab))?;
                if !index.contains_key(&t) {
                    index.insert(t.clone(), terms.len());
                    terms.push(t);
                    if terms.len() > ORACLE_CAP {
                        return Err(Error::SizeCap(format!("more than {ORACLE_CAP} oracle terms")));
                    }
                }
            }
        }
    }
    let new_counts = terms.iter().map(|t| count_new(&ext, t)).collect::<Result<Vec<_>>>()?;
    let mut uf = UnionFind::new(terms.len());
    for (i, t) in terms.iter().enumerate() {
        for m in moves(&ext, t)? {
            let j = *index.get(&m).ok_or_else(|| Error::Invalid(format!("rewrite of {} left the term set", t.code(None))))?;
            if new_counts[i] != new_counts[j] {
                return Err(Error::Invalid(format!("a rewrite of {} changed the number of new generators", t.code(None))));
            }
            uf.union(i, j);
        }
    }
    let mut by_new = Vec::new();
    for i in 0..terms.len() {
        if uf.find(i) == i {
            let k = new_counts[i];
            if by_new.len() <= k {
                by_new.resize(k + 1, 0);
            }
            by_new[k] += 1;
        }
    }
    let m = data.s.arity();
    let certified = (0..).take_while(|&k| 1 + k + k * m <= size_bound).last().unwrap_or(0);
    by_new.resize(certified + 1, 0);
    Ok(OracleReport { entry: r.clone(), size_bound, terms: terms.len(), by_new, certified })
}
