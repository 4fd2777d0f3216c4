use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use parking_lot::RwLock;

use super::AttachmentData;
use crate::elem::Elem;
use crate::error::{Error, Result};
use crate::fincat::Perm;
use crate::operad::Operad;
use crate::profiles::{Color, ColorSet, IOPair, Profile};
use crate::trees::{enumerate_reduced, Kind, Node, Vertex};

/// The free extension `A ∪_X Y`, truncated to elements with at most
/// `stages` new generators and arity at most `bound`.
///
/// Elements are canonical reduced trees: normal vertices carry elements of
/// `A` at their stored profile, distinguished vertices carry generators
/// `(y, π)` with `y ∉ X`, and leaves are labeled by input positions. An
/// element of `A` itself is its labeled corolla.
pub struct Extension {
    data: AttachmentData,
    stages: usize,
    bound: usize,
    cache: RwLock<HashMap<(Color, Profile), Arc<Vec<Elem>>>>,
}

impl Extension {
    pub fn new(data: AttachmentData, stages: usize, bound: usize) -> Result<Self> {
        let need = bound + stages;
        if let Some(b) = data.ambient.arity_bound() {
            if b < need {
                return Err(Error::OutOfBounds(format!("the ambient operad is known to arity {b}, {need} is needed")));
            }
        }
        Ok(Extension { data, stages, bound, cache: RwLock::new(HashMap::new()) })
    }

    pub fn data(&self) -> &AttachmentData {
        &self.data
    }

    pub fn stages(&self) -> usize {
        self.stages
    }

    fn ambient(&self) -> &dyn Operad {
        self.data.ambient.as_ref()
    }

    /// `deco·σ` at a vertex.
    pub fn vertex_act(&self, v: &Vertex, sigma: &Perm) -> Result<Elem> {
        match v.kind {
            Kind::Normal => self.ambient().act(v.out, &v.inputs(), &v.deco, sigma),
            Kind::Distinguished => {
                let (y, pi) = self.data.parse_generator(&v.deco)?;
                Ok(self.data.generator(y, &pi.compose(sigma)))
            }
        }
    }

    pub fn canonical(&self, t: &Node) -> Result<Node> {
        t.canonical_with(&|v, s| self.vertex_act(v, s))
    }

    /// Canonical form of a vertex over canonical children.
    pub(crate) fn canonical_top(&self, v: Vertex) -> Result<Node> {
        Node::canonical_top(v, &|v, s| self.vertex_act(v, s))
    }

    /// Merges every edge between two normal vertices by composing in `A`.
    pub fn collapse(&self, t: &Node) -> Result<Node> {
        let Node::Vertex(v) = t else { return Ok(t.clone()) };
        let kids = v.children.iter().map(|c| self.collapse(c)).collect::<Result<Vec<_>>>()?;
        if v.kind == Kind::Distinguished {
            return Ok(Node::vertex(v.kind, v.out, v.deco.clone(), kids));
        }
        if !kids.iter().any(|k| matches!(k, Node::Vertex(w) if w.kind == Kind::Normal)) {
            return Ok(Node::vertex(Kind::Normal, v.out, v.deco.clone(), kids));
        }
        let profile = Profile(kids.iter().map(Node::out_color).collect());
        let mut ys = Vec::with_capacity(kids.len());
        let mut children = Vec::with_capacity(kids.len());
        for kid in kids {
            match kid {
                Node::Vertex(w) if w.kind == Kind::Normal => {
                    ys.push((w.inputs(), w.deco.clone()));
                    children.extend(w.children);
                }
                other => {
                    let c = other.out_color();
                    ys.push((Profile(vec![c]), self.ambient().unit(c)));
                    children.push(other);
                }
            }
        }
        let deco = self.ambient().gamma(v.out, &profile, &v.deco, &ys)?;
        Ok(Node::vertex(Kind::Normal, v.out, deco, children))
    }

    /// Replaces every generator `(x, π)` with `x ∈ X` by the normal vertex
    /// `f(x)·π`.
    fn substitute_x(&self, t: &Node) -> Result<Node> {
        let Node::Vertex(v) = t else { return Ok(t.clone()) };
        let kids = v.children.iter().map(|c| self.substitute_x(c)).collect::<Result<Vec<_>>>()?;
        if v.kind == Kind::Distinguished {
            let (y, pi) = self.data.parse_generator(&v.deco)?;
            if let Some(x) = self.data.x_of(y) {
                let s = &self.data.s;
                let deco = self.ambient().act(s.output, &s.inputs, &self.data.f[x], &pi)?;
                return Ok(Node::vertex(Kind::Normal, v.out, deco, kids));
            }
        }
        Ok(Node::vertex(v.kind, v.out, v.deco.clone(), kids))
    }

    /// Attaches the `X`-decorated generators through `f` and reduces: the
    /// result has fewer distinguished vertices and lies in an earlier stage.
    pub fn attach_reduce(&self, t: &Node) -> Result<Node> {
        self.canonical(&self.collapse(&self.substitute_x(t)?)?)
    }

    /// The element `a ∈ A(d; c)` as a labeled corolla.
    pub fn corolla(&self, d: Color, c: &Profile, a: &Elem) -> Result<Node> {
        let leaves = c.colors().iter().enumerate().map(|(i, &ci)| Node::labeled_leaf(ci, i)).collect();
        self.canonical(&Node::vertex(Kind::Normal, d, a.clone(), leaves))
    }

    /// `t·σ`: the leaf labeled `j` is relabeled `σ⁻¹(j)`.
    pub fn relabel(&self, t: &Node, sigma: &Perm) -> Result<Node> {
        let inv = sigma.inverse();
        self.canonical(&t.map_labels(&|l| inv.apply(l as usize) as u32))
    }

    pub(crate) fn normal_support(&self, io: &IOPair) -> bool {
        self.ambient().entry(io.output, &io.inputs).map(|e| !e.is_empty()).unwrap_or(false)
    }

    /// Generator labels `(y, π)` with `s·π = c`, restricted to `y ∉ X`
    /// when `new_only`.
    pub(crate) fn generator_options(&self, c: &Profile, new_only: bool) -> Vec<Elem> {
        if c.representative() != self.data.s.inputs {
            return Vec::new();
        }
        let tau = c.transport();
        let stab = self.data.s.inputs.stabilizer();
        (0..self.data.y_names.len())
            .filter(|&y| !new_only || self.data.x_of(y).is_none())
            .flat_map(|y| stab.elements().iter().map(|h| (y, h.compose(&tau))).collect::<Vec<_>>())
            .map(|(y, p)| self.data.generator(y, &p))
            .collect()
    }

    pub(crate) fn vertex_options(&self, v: &Vertex, new_only: bool) -> Vec<Elem> {
        match v.kind {
            Kind::Normal => self.ambient().entry(v.out, &v.inputs()).unwrap_or_default(),
            Kind::Distinguished if v.out == self.data.s.output => self.generator_options(&v.inputs(), new_only),
            Kind::Distinguished => Vec::new(),
        }
    }

    /// Elements of `(d; c)` with exactly `k` new generators, found by
    /// decorating and labeling every reduced tree.
    pub fn stage_elements(&self, d: Color, c: &Profile, k: usize) -> Result<Vec<Node>> {
        if k == 0 {
            return self.ambient().entry(d, c)?.iter().map(|a| self.corolla(d, c, a)).collect();
        }
        let r = IOPair::new(d, c.clone());
        let s = &self.data.s;
        let en = enumerate_reduced(self.colors().len(), s, k, &r, &|io| self.normal_support(io), 1 + k + k * s.arity());
        debug_assert!(en.complete);
        let mut found = BTreeSet::new();
        for shape in &en.trees {
            let labelings = shape.labelings(c);
            for dec in shape.decorations(&|v| self.vertex_options(v, true)) {
                for lab in &labelings {
                    found.insert(self.canonical(&dec.with_labels(lab))?);
                }
            }
        }
        Ok(found.into_iter().collect())
    }

    fn tree<'a>(&self, x: &'a Elem) -> Result<&'a Node> {
        x.as_tree().map(|t| t.as_ref()).ok_or_else(|| Error::UnknownElement { element: x.to_string(), entry: "a tree operad".into() })
    }
}

impl Operad for Extension {
    fn colors(&self) -> &Arc<ColorSet> {
        self.data.ambient.colors()
    }

    fn arity_bound(&self) -> Option<usize> {
        Some(self.bound)
    }

    fn entry(&self, d: Color, c: &Profile) -> Result<Vec<Elem>> {
        if c.len() > self.bound {
            return Err(Error::OutOfBounds(format!("arity {} above bound {}", c.len(), self.bound)));
        }
        let key = (d, c.clone());
        if let Some(v) = self.cache.read().get(&key) {
            return Ok(v.as_ref().clone());
        }
        let mut all = Vec::new();
        for k in 0..=self.stages {
            all.extend(self.stage_elements(d, c, k)?.into_iter().map(Node::into_elem));
        }
        all.sort();
        self.cache.write().insert(key, Arc::new(all.clone()));
        Ok(all)
    }

    fn unit(&self, c: Color) -> Elem {
        self.corolla(c, &Profile(vec![c]), &self.ambient().unit(c)).expect("unit corolla").into_elem()
    }

    fn act(&self, _d: Color, c: &Profile, x: &Elem, sigma: &Perm) -> Result<Elem> {
        if sigma.degree() != c.len() {
            return Err(Error::DegreeMismatch { expected: c.len(), found: sigma.degree() });
        }
        Ok(self.relabel(self.tree(x)?, sigma)?.into_elem())
    }

    fn gamma(&self, d: Color, c: &Profile, x: &Elem, ys: &[(Profile, Elem)]) -> Result<Elem> {
        if ys.len() != c.len() {
            return Err(Error::ProfileMismatch { index: ys.len().min(c.len()), detail: format!("{} inputs for arity {}", ys.len(), c.len()) });
        }
        let total: usize = ys.iter().map(|(b, _)| b.len()).sum();
        if total > self.bound {
            return Err(Error::OutOfBounds(format!("composite of arity {total} above bound {}", self.bound)));
        }
        let top = self.tree(x)?;
        if top.out_color() != d {
            return Err(Error::ProfileMismatch { index: 0, detail: format!("{x} does not have output color {}", d.0) });
        }
        let mut bottoms = Vec::with_capacity(ys.len());
        for (i, ((b, y), &ci)) in ys.iter().zip(c.colors()).enumerate() {
            let t = self.tree(y)?;
            if t.out_color() != ci || t.leaf_count() != b.len() {
                return Err(Error::ProfileMismatch { index: i, detail: format!("{y} is not in entry {i}") });
            }
            bottoms.push(t.clone());
        }
        let grafted = top.substitute(&bottoms)?;
        if grafted.distinguished_count() > self.stages {
            return Err(Error::OutOfBounds(format!("composite with more than {} generators", self.stages)));
        }
        Ok(self.canonical(&self.collapse(&grafted)?)?.into_elem())
    }
}
