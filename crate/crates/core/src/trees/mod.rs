//! Colored rooted trees with distinguished vertices, canonical forms,
//! automorphism groups, grafting and reduced-tree enumeration.
//!
//! A tree is stored planar (children in a list), and the canonical form
//! quotients the planar structure by sorting children. Leaves may carry a
//! label: the position of the leaf in the overall input profile.

mod aut;
mod enumerate;

pub use aut::{aut_order_formula, automorphism_group, Layout, TreeAut};
pub use enumerate::{enumerate_marked, enumerate_reduced, enumerate_shapes, ShapeGrammar, Enumeration};

use std::fmt::Write as _;
use std::sync::Arc;

use crate::elem::Elem;
use crate::error::{Error, Result};
use crate::fincat::Perm;
use crate::profiles::{Color, ColorSet, IOPair, Profile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Normal,
    Distinguished,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    pub kind: Kind,
    pub out: Color,
    pub deco: Elem,
    pub children: Vec<Node>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Leaf { color: Color, label: Option<u32> },
    Vertex(Vertex),
}

impl Vertex {
    /// Input profile in the stored child order.
    pub fn inputs(&self) -> Profile {
        Profile(self.children.iter().map(Node::out_color).collect())
    }

    pub fn io(&self) -> IOPair {
        IOPair::new(self.out, self.inputs())
    }
}

impl Node {
    pub fn leaf(color: Color) -> Node {
        Node::Leaf { color, label: None }
    }

    pub fn labeled_leaf(color: Color, label: usize) -> Node {
        Node::Leaf { color, label: Some(label as u32) }
    }

    pub fn vertex(kind: Kind, out: Color, deco: Elem, children: Vec<Node>) -> Node {
        Node::Vertex(Vertex { kind, out, deco, children })
    }

    /// Corolla over `io` with unlabeled leaves and a trivial decoration.
    pub fn corolla(kind: Kind, io: &IOPair) -> Node {
        let children = io.inputs.colors().iter().map(|&c| Node::leaf(c)).collect();
        Node::vertex(kind, io.output, Elem::unit(), children)
    }

    /// Corolla with leaves labeled `0..n` in order.
    pub fn labeled_corolla(kind: Kind, io: &IOPair, deco: Elem) -> Node {
        let children = io.inputs.colors().iter().enumerate().map(|(i, &c)| Node::labeled_leaf(c, i)).collect();
        Node::vertex(kind, io.output, deco, children)
    }

    pub fn out_color(&self) -> Color {
        match self {
            Node::Leaf { color, .. } => *color,
            Node::Vertex(v) => v.out,
        }
    }

    pub fn as_vertex(&self) -> Option<&Vertex> {
        match self {
            Node::Vertex(v) => Some(v),
            Node::Leaf { .. } => None,
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Node::Leaf { .. })
    }

    pub fn vertex_count(&self) -> usize {
        match self {
            Node::Leaf { .. } => 0,
            Node::Vertex(v) => 1 + v.children.iter().map(Node::vertex_count).sum::<usize>(),
        }
    }

    pub fn distinguished_count(&self) -> usize {
        match self {
            Node::Leaf { .. } => 0,
            Node::Vertex(v) => {
                (v.kind == Kind::Distinguished) as usize + v.children.iter().map(Node::distinguished_count).sum::<usize>()
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Node::Leaf { .. } => 1,
            Node::Vertex(v) => v.children.iter().map(Node::leaf_count).sum(),
        }
    }

    /// Leaves left to right.
    pub fn leaves(&self) -> Vec<(Color, Option<u32>)> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<(Color, Option<u32>)>) {
        match self {
            Node::Leaf { color, label } => out.push((*color, *label)),
            Node::Vertex(v) => v.children.iter().for_each(|c| c.collect_leaves(out)),
        }
    }

    /// Leaf colors in planar order.
    pub fn planar_profile(&self) -> Profile {
        Profile(self.leaves().into_iter().map(|(c, _)| c).collect())
    }

    /// For a tree labeled by `0..n`, the profile whose `i`-th color is the
    /// color of the leaf labeled `i`.
    pub fn labeled_profile(&self) -> Result<Profile> {
        let leaves = self.leaves();
        let mut out = vec![None; leaves.len()];
        for (c, l) in leaves {
            let l = l.ok_or_else(|| Error::Invalid("unlabeled leaf".into()))? as usize;
            if l >= out.len() || out[l].is_some() {
                return Err(Error::Invalid("leaf labels are not a bijection onto 0..n".into()));
            }
            out[l] = Some(c);
        }
        Ok(Profile(out.into_iter().map(Option::unwrap).collect()))
    }

    /// Checks that every edge color matches the child's output.
    pub fn io(&self) -> Result<IOPair> {
        Ok(IOPair::new(self.out_color(), self.labeled_profile()?))
    }

    /// Every vertex in preorder.
    pub fn vertices(&self) -> Vec<&Vertex> {
        let mut out = Vec::new();
        fn go<'a>(n: &'a Node, out: &mut Vec<&'a Vertex>) {
            if let Node::Vertex(v) = n {
                out.push(v);
                v.children.iter().for_each(|c| go(c, out));
            }
        }
        go(self, &mut out);
        out
    }

    /// Drops leaf labels.
    pub fn unlabeled(&self) -> Node {
        match self {
            Node::Leaf { color, .. } => Node::leaf(*color),
            Node::Vertex(v) => Node::Vertex(Vertex {
                kind: v.kind,
                out: v.out,
                deco: v.deco.clone(),
                children: v.children.iter().map(Node::unlabeled).collect(),
            }),
        }
    }

    /// Replaces every decoration by the trivial one.
    pub fn shape(&self) -> Node {
        match self {
            Node::Leaf { .. } => self.clone(),
            Node::Vertex(v) => Node::Vertex(Vertex {
                kind: v.kind,
                out: v.out,
                deco: Elem::unit(),
                children: v.children.iter().map(Node::shape).collect(),
            }),
        }
    }

    /// Applies `f` to the leaf labels.
    pub fn map_labels(&self, f: &dyn Fn(u32) -> u32) -> Node {
        match self {
            Node::Leaf { color, label } => Node::Leaf { color: *color, label: label.map(f) },
            Node::Vertex(v) => Node::Vertex(Vertex {
                kind: v.kind,
                out: v.out,
                deco: v.deco.clone(),
                children: v.children.iter().map(|c| c.map_labels(f)).collect(),
            }),
        }
    }

    /// Canonical form under non-planar isomorphism.
    ///
    /// Children are sorted, and each decoration is moved along the sorting
    /// permutation by `act(vertex, σ) = deco·σ`. Identical sibling subtrees
    /// leave a residual choice, resolved by taking the smallest decoration.
    pub fn canonical_with(&self, act: &dyn Fn(&Vertex, &Perm) -> Result<Elem>) -> Result<Node> {
        let Node::Vertex(v) = self else { return Ok(self.clone()) };
        let kids = v.children.iter().map(|c| c.canonical_with(act)).collect::<Result<Vec<_>>>()?;
        Node::canonical_top(Vertex { kind: v.kind, out: v.out, deco: v.deco.clone(), children: kids }, act)
    }

    /// Canonical form of a vertex whose children are already canonical.
    pub fn canonical_top(v: Vertex, act: &dyn Fn(&Vertex, &Perm) -> Result<Elem>) -> Result<Node> {
        let mut order: Vec<usize> = (0..v.children.len()).collect();
        order.sort_by(|&a, &b| v.children[a].cmp(&v.children[b]));
        let mut v = v;
        if order.iter().enumerate().any(|(i, &o)| i != o) {
            let sigma = Perm::from_images(order).expect("sorting permutation");
            v.deco = act(&v, &sigma)?;
            v.children = sigma.permute(&v.children);
        }
        let ties = tie_group(&v.children);
        if ties.len() > 1 {
            let mut best = v.deco.clone();
            for t in ties.iter().skip(1) {
                let cand = act(&v, t)?;
                if cand < best {
                    best = cand;
                }
            }
            v.deco = best;
        }
        Ok(Node::Vertex(v))
    }

    /// Canonical form of a tree whose decorations carry no symmetry.
    pub fn canonical(&self) -> Node {
        self.canonical_with(&|v, _| Ok(v.deco.clone())).expect("trivial action never fails")
    }

    /// Text encoding; equal for isomorphic trees once canonicalized.
    pub fn code(&self, colors: Option<&ColorSet>) -> String {
        let mut s = String::new();
        self.write_code(colors, &mut s);
        s
    }

    fn write_code(&self, colors: Option<&ColorSet>, s: &mut String) {
        let name = |c: Color| match colors {
            Some(cs) if (c.0 as usize) < cs.len() => cs.name(c).to_string(),
            _ => c.0.to_string(),
        };
        match self {
            Node::Leaf { color, label } => {
                s.push_str(&name(*color));
                if let Some(l) = label {
                    let _ = write!(s, "#{}", l + 1);
                }
            }
            Node::Vertex(v) => {
                s.push(if v.kind == Kind::Normal { 'N' } else { 'D' });
                s.push_str(&name(v.out));
                if v.deco != Elem::unit() {
                    let _ = write!(s, "<{}>", v.deco);
                }
                s.push('(');
                for (i, c) in v.children.iter().enumerate() {
                    if i > 0 {
                        s.push(',');
                    }
                    c.write_code(colors, s);
                }
                s.push(')');
            }
        }
    }

    /// Grafts `upper` onto the leaf at planar position `index`.
    pub fn graft(&self, index: usize, upper: &Node) -> Result<Node> {
        let mut seen = 0;
        let out = self.graft_rec(index, upper, &mut seen)?;
        if seen <= index {
            return Err(Error::OutOfBounds(format!("leaf {index} of a tree with {seen} leaves")));
        }
        Ok(out)
    }

    fn graft_rec(&self, index: usize, upper: &Node, seen: &mut usize) -> Result<Node> {
        match self {
            Node::Leaf { color, .. } => {
                let here = *seen == index;
                *seen += 1;
                if !here {
                    return Ok(self.clone());
                }
                if *color != upper.out_color() {
                    return Err(Error::GraftColorMismatch { leaf: color.0.to_string(), root: upper.out_color().0.to_string() });
                }
                Ok(upper.clone())
            }
            Node::Vertex(v) => Ok(Node::Vertex(Vertex {
                kind: v.kind,
                out: v.out,
                deco: v.deco.clone(),
                children: v.children.iter().map(|c| c.graft_rec(index, upper, seen)).collect::<Result<_>>()?,
            })),
        }
    }

    /// Operadic substitution on labeled trees: the leaf labeled `i` is
    /// replaced by `bottoms[i]`, whose labels are shifted past the leaves of
    /// earlier bottoms.
    pub fn substitute(&self, bottoms: &[Node]) -> Result<Node> {
        let n = self.leaf_count();
        if bottoms.len() != n {
            return Err(Error::Invalid(format!("{} inputs supplied for {n} leaves", bottoms.len())));
        }
        let mut offsets = Vec::with_capacity(n);
        let mut acc = 0u32;
        for b in bottoms {
            offsets.push(acc);
            acc += b.leaf_count() as u32;
        }
        let shifted: Vec<Node> =
            bottoms.iter().zip(&offsets).map(|(b, &o)| b.map_labels(&|l| l + o)).collect();
        self.substitute_rec(&shifted)
    }

    fn substitute_rec(&self, bottoms: &[Node]) -> Result<Node> {
        match self {
            Node::Leaf { color, label } => {
                let l = label.ok_or_else(|| Error::Invalid("substitution into an unlabeled leaf".into()))? as usize;
                let b = bottoms.get(l).ok_or_else(|| Error::OutOfBounds(format!("leaf label {l}")))?;
                if b.out_color() != *color {
                    return Err(Error::GraftColorMismatch { leaf: color.0.to_string(), root: b.out_color().0.to_string() });
                }
                Ok(b.clone())
            }
            Node::Vertex(v) => Ok(Node::Vertex(Vertex {
                kind: v.kind,
                out: v.out,
                deco: v.deco.clone(),
                children: v.children.iter().map(|c| c.substitute_rec(bottoms)).collect::<Result<_>>()?,
            })),
        }
    }

    /// The two reducedness conditions: every flag of a distinguished vertex
    /// is an internal edge to a normal vertex, and no internal edge joins two
    /// normal vertices.
    pub fn is_reduced(&self) -> bool {
        match self {
            Node::Leaf { .. } => true,
            Node::Vertex(v) => v.kind == Kind::Normal && reduced_below(v),
        }
    }

    /// Every way of decorating the vertices, with `options(v)` the choices
    /// at vertex `v` (in its stored child order).
    pub fn decorations(&self, options: &dyn Fn(&Vertex) -> Vec<Elem>) -> Vec<Node> {
        match self {
            Node::Leaf { .. } => vec![self.clone()],
            Node::Vertex(v) => {
                let own = options(v);
                let mut kids: Vec<Vec<Node>> = vec![Vec::new()];
                for c in &v.children {
                    let opts = c.decorations(options);
                    kids = kids
                        .into_iter()
                        .flat_map(|k| opts.iter().map(move |o| [k.clone(), vec![o.clone()]].concat()))
                        .collect();
                }
                own.iter()
                    .flat_map(|d| {
                        kids.iter().map(move |k| Node::vertex(v.kind, v.out, d.clone(), k.clone()))
                    })
                    .collect()
            }
        }
    }

    /// Labels the leaves, left to right, by `images[k]`.
    pub fn with_labels(&self, images: &[usize]) -> Node {
        let mut next = 0;
        self.with_labels_rec(images, &mut next)
    }

    fn with_labels_rec(&self, images: &[usize], next: &mut usize) -> Node {
        match self {
            Node::Leaf { color, .. } => {
                let l = Node::labeled_leaf(*color, images[*next]);
                *next += 1;
                l
            }
            Node::Vertex(v) => Node::Vertex(Vertex {
                kind: v.kind,
                out: v.out,
                deco: v.deco.clone(),
                children: v.children.iter().map(|c| c.with_labels_rec(images, next)).collect(),
            }),
        }
    }

    /// Every color-respecting bijection from the leaves (left to right) to
    /// the positions of `r`, as image lists.
    pub fn labelings(&self, r: &Profile) -> Vec<Vec<usize>> {
        let colors: Vec<Color> = self.leaves().into_iter().map(|(c, _)| c).collect();
        if colors.len() != r.len() {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut used = vec![false; r.len()];
        let mut cur = Vec::with_capacity(r.len());
        fn go(colors: &[Color], r: &Profile, used: &mut [bool], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            let k = cur.len();
            if k == colors.len() {
                out.push(cur.clone());
                return;
            }
            for p in 0..r.len() {
                if !used[p] && r.colors()[p] == colors[k] {
                    used[p] = true;
                    cur.push(p);
                    go(colors, r, used, cur, out);
                    cur.pop();
                    used[p] = false;
                }
            }
        }
        go(&colors, r, &mut used, &mut cur, &mut out);
        out
    }

    pub fn into_elem(self) -> Elem {
        Elem::Tree(Arc::new(self))
    }
}

fn reduced_below(v: &Vertex) -> bool {
    v.children.iter().all(|c| match c {
        Node::Leaf { .. } => v.kind == Kind::Normal,
        Node::Vertex(w) => {
            let alternates = (v.kind == Kind::Normal) != (w.kind == Kind::Normal);
            alternates && reduced_below(w)
        }
    })
}

/// Permutations of a sorted child list that only exchange equal children.
fn tie_group(children: &[Node]) -> Vec<Perm> {
    let n = children.len();
    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && children[j] == children[i] {
            j += 1;
        }
        if j - i > 1 {
            runs.push((i, j - i));
        }
        i = j;
    }
    let mut out = vec![Perm::identity(n)];
    for (start, len) in runs {
        let mut next = Vec::new();
        for p in &out {
            for q in Perm::all(len) {
                let mut images: Vec<usize> = p.images().collect();
                for (k, v) in q.images().enumerate() {
                    images[start + k] = p.apply(start + v);
                }
                next.push(Perm::from_images(images).expect("block permutation"));
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star() -> Color {
        Color(0)
    }

    fn bin() -> IOPair {
        IOPair::new(star(), Profile::uniform(star(), 2))
    }

    #[test]
    fn planar_reorderings_agree() {
        let cs = ColorSet::new(["a", "b"]).unwrap();
        let a = cs.color("a").unwrap();
        let b = cs.color("b").unwrap();
        let t1 = Node::vertex(Kind::Normal, a, Elem::unit(), vec![Node::leaf(a), Node::leaf(b)]);
        let t2 = Node::vertex(Kind::Normal, a, Elem::unit(), vec![Node::leaf(b), Node::leaf(a)]);
        assert_ne!(t1, t2);
        assert_eq!(t1.canonical().code(Some(&cs)), t2.canonical().code(Some(&cs)));
        assert_eq!(t1.canonical().code(Some(&cs)), "Na(a,b)");
    }

    #[test]
    fn marking_distinguishes() {
        let n = Node::corolla(Kind::Normal, &bin());
        let d = Node::corolla(Kind::Distinguished, &bin());
        assert_ne!(n.canonical().code(None), d.canonical().code(None));
    }

    #[test]
    fn graft_examples() {
        let unary = Node::corolla(Kind::Normal, &IOPair::new(star(), Profile::uniform(star(), 1)));
        let b = Node::corolla(Kind::Normal, &bin());
        let g = unary.graft(0, &b).unwrap();
        assert_eq!(g.leaf_count(), 2);
        let g = b.graft(1, &b).unwrap();
        assert_eq!((g.leaf_count(), g.vertex_count()), (3, 2));
        assert!(b.graft(2, &b).is_err());
        let cs = ColorSet::new(["a", "b"]).unwrap();
        let lower = Node::corolla(Kind::Normal, &IOPair::new(Color(0), Profile(vec![Color(1)])));
        assert!(matches!(lower.graft(0, &b), Err(Error::GraftColorMismatch { .. })));
        let _ = cs;
    }

    #[test]
    fn graft_at_disjoint_leaves_commutes() {
        let b = Node::corolla(Kind::Normal, &bin());
        let t = Node::corolla(Kind::Normal, &IOPair::new(star(), Profile::uniform(star(), 3)));
        let d = Node::corolla(Kind::Distinguished, &bin());
        // leaf 2 of t, then leaf 0; versus leaf 0 then the shifted leaf 3
        let x = t.graft(2, &d).unwrap().graft(0, &b).unwrap();
        let y = t.graft(0, &b).unwrap().graft(3, &d).unwrap();
        assert_eq!(x.canonical(), y.canonical());
    }

    #[test]
    fn reducedness_examples() {
        let d0 = Node::corolla(Kind::Distinguished, &IOPair::new(star(), Profile::empty()));
        assert!(!d0.is_reduced());
        let over = Node::vertex(Kind::Normal, star(), Elem::unit(), vec![d0.clone()]);
        assert!(over.is_reduced());
        let chain = Node::vertex(
            Kind::Normal,
            star(),
            Elem::unit(),
            vec![Node::corolla(Kind::Normal, &IOPair::new(star(), Profile::uniform(star(), 1)))],
        );
        assert!(!chain.is_reduced());
        let d1 = Node::corolla(Kind::Distinguished, &IOPair::new(star(), Profile::uniform(star(), 1)));
        let d_leaf = Node::vertex(Kind::Normal, star(), Elem::unit(), vec![d1]);
        assert!(!d_leaf.is_reduced());
        assert!(Node::leaf(star()).is_reduced());
    }

    #[test]
    fn substitute_shifts_labels() {
        let top = Node::labeled_corolla(Kind::Normal, &bin(), Elem::sym("x"));
        let y = Node::labeled_corolla(Kind::Normal, &bin(), Elem::sym("y"));
        let e = Node::labeled_leaf(star(), 0);
        let t = top.substitute(&[e.clone(), y.clone()]).unwrap();
        assert_eq!(t.labeled_profile().unwrap().len(), 3);
        assert_eq!(t.code(None), "N0<x>(0#1,N0<y>(0#2,0#3))");
        assert_eq!(e.substitute(&[y.clone()]).unwrap(), y);
    }

    #[test]
    fn tie_minimization_is_order_independent() {
        // two identical leafless children with a decoration carrying a swap
        let cap = Node::vertex(Kind::Normal, star(), Elem::sym("c"), vec![]);
        let act = |v: &Vertex, s: &Perm| -> Result<Elem> {
            let p = v.deco.as_perm().unwrap();
            Ok(Elem::Perm(p.compose(s)))
        };
        let sw = Perm::transposition(2, 0, 1);
        let t1 = Node::vertex(Kind::Normal, star(), Elem::Perm(sw.clone()), vec![cap.clone(), cap.clone()]);
        let t2 = Node::vertex(Kind::Normal, star(), Elem::Perm(Perm::identity(2)), vec![cap.clone(), cap]);
        assert_eq!(t1.canonical_with(&act).unwrap(), t2.canonical_with(&act).unwrap());
    }
}
