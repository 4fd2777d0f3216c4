use std::collections::HashMap;
use std::sync::Arc;

use super::{Kind, Node};
use crate::elem::Elem;
use crate::profiles::{Color, IOPair, Profile};

/// Which marked trees to generate: allowed vertex profiles per kind,
/// allowed parent/child adjacencies, and allowed roots.
pub struct ShapeGrammar<'a> {
    pub colors: usize,
    pub kinds: Vec<Kind>,
    pub max_arity: usize,
    /// Whether a vertex of the given kind may have the given (sorted) profile.
    pub vertex_ok: &'a dyn Fn(Kind, &IOPair) -> bool,
    /// Whether a child (`None` for a leaf) may sit under a parent kind.
    pub edge_ok: &'a dyn Fn(Kind, Option<Kind>) -> bool,
    /// Whether the root may be of the given kind (`None` for the bare edge).
    pub root_ok: &'a dyn Fn(Option<Kind>) -> bool,
}

/// Result of a bounded enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    pub trees: Vec<Node>,
    /// True when no tree beyond the vertex bound can satisfy the request.
    pub complete: bool,
}

type Key = (Kind, Color, Option<Vec<usize>>, Option<usize>, usize);

struct Ctx<'g, 'a> {
    g: &'g ShapeGrammar<'a>,
    memo: HashMap<Key, Arc<Vec<Node>>>,
}

impl Ctx<'_, '_> {
    /// Canonical subtrees rooted at a `kind` vertex with output `out`,
    /// exactly `v` vertices, and (when given) exactly the leaf color counts
    /// and distinguished-vertex count.
    fn sub(&mut self, kind: Kind, out: Color, leaves: Option<Vec<usize>>, d: Option<usize>, v: usize) -> Arc<Vec<Node>> {
        let key = (kind, out, leaves.clone(), d, v);
        if let Some(r) = self.memo.get(&key) {
            return r.clone();
        }
        let mut found = Vec::new();
        let own = (kind == Kind::Distinguished) as usize;
        if v >= 1 && d.map_or(true, |x| x >= own) {
            let rem_d = d.map(|x| x - own);
            let arity_cap = match &leaves {
                Some(l) => self.g.max_arity.min(l.iter().sum::<usize>() + v - 1),
                None => self.g.max_arity,
            };
            for m in 0..=arity_cap {
                for p in sorted_profiles(self.g.colors, m) {
                    if !(self.g.vertex_ok)(kind, &IOPair::new(out, p.clone())) {
                        continue;
                    }
                    let mut acc = Vec::with_capacity(m);
                    self.fill(kind, out, &p, 0, leaves.clone(), rem_d, v - 1, &mut acc, &mut found);
                }
            }
        }
        found.sort();
        found.dedup();
        let r = Arc::new(found);
        self.memo.insert(key, r.clone());
        r
    }

    #[allow(clippy::too_many_arguments)]
    fn fill(
        &mut self,
        kind: Kind,
        out: Color,
        p: &Profile,
        idx: usize,
        leaves: Option<Vec<usize>>,
        d: Option<usize>,
        v: usize,
        acc: &mut Vec<Node>,
        found: &mut Vec<Node>,
    ) {
        if idx == p.len() {
            let done = leaves.as_ref().map_or(true, |l| l.iter().all(|&x| x == 0)) && d.map_or(true, |x| x == 0) && v == 0;
            if done {
                let node = Node::vertex(kind, out, Elem::unit(), acc.clone()).canonical();
                found.push(node);
            }
            return;
        }
        let c = p.colors()[idx];
        let prev = (idx > 0 && p.colors()[idx - 1] == c).then(|| acc[idx - 1].clone());
        let ok_order = |n: &Node| prev.as_ref().map_or(true, |q| n >= q);
        // a leaf in this slot
        if (self.g.edge_ok)(kind, None) && leaves.as_ref().map_or(true, |l| l[c.0 as usize] > 0) {
            let leaf = Node::leaf(c);
            if ok_order(&leaf) {
                let rest = leaves.clone().map(|mut l| {
                    l[c.0 as usize] -= 1;
                    l
                });
                acc.push(leaf);
                self.fill(kind, out, p, idx + 1, rest, d, v, acc, found);
                acc.pop();
            }
        }
        // a subtree in this slot
        for ck in self.g.kinds.clone() {
            if !(self.g.edge_ok)(kind, Some(ck)) {
                continue;
            }
            for cv in 1..=v {
                let leaf_splits: Vec<Option<Vec<usize>>> = match &leaves {
                    Some(l) => sub_vectors(l).into_iter().map(Some).collect(),
                    None => vec![None],
                };
                for cl in leaf_splits {
                    let d_splits: Vec<Option<usize>> = match d {
                        Some(x) => (0..=x).map(Some).collect(),
                        None => vec![None],
                    };
                    for cd in d_splits {
                        let subs = self.sub(ck, c, cl.clone(), cd, cv);
                        if subs.is_empty() {
                            continue;
                        }
                        let rest_l = match (&leaves, &cl) {
                            (Some(l), Some(s)) => Some(l.iter().zip(s).map(|(a, b)| a - b).collect()),
                            _ => None,
                        };
                        let rest_d = d.zip(cd).map(|(a, b)| a - b);
                        for t in subs.iter() {
                            if !ok_order(t) {
                                continue;
                            }
                            acc.push(t.clone());
                            self.fill(kind, out, p, idx + 1, rest_l.clone(), rest_d, v - cv, acc, found);
                            acc.pop();
                        }
                    }
                }
            }
        }
    }
}

/// All multisets of `m` colors, as sorted profiles.
fn sorted_profiles(colors: usize, m: usize) -> Vec<Profile> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(m);
    fn go(colors: usize, m: usize, start: usize, cur: &mut Vec<Color>, out: &mut Vec<Profile>) {
        if cur.len() == m {
            out.push(Profile(cur.clone()));
            return;
        }
        for c in start..colors {
            cur.push(Color(c as u8));
            go(colors, m, c, cur, out);
            cur.pop();
        }
    }
    go(colors, m, 0, &mut cur, &mut out);
    out
}

fn sub_vectors(v: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &x in v {
        out = out.into_iter().flat_map(|p| (0..=x).map(move |i| [p.clone(), vec![i]].concat())).collect();
    }
    out
}

/// All canonical trees allowed by the grammar with the given root color,
/// leaf color counts (when given), distinguished count (when given) and at
/// most `max_vertices` vertices, sorted.
pub fn enumerate_shapes(
    g: &ShapeGrammar,
    out: Color,
    leaves: Option<&[usize]>,
    distinguished: Option<usize>,
    max_vertices: usize,
) -> Vec<Node> {
    let mut ctx = Ctx { g, memo: HashMap::new() };
    let mut found = Vec::new();
    let bare = leaves.map_or(true, |l| l.iter().sum::<usize>() == 1 && l[out.0 as usize] == 1);
    if bare && distinguished.unwrap_or(0) == 0 && (g.root_ok)(None) {
        found.push(Node::leaf(out));
    }
    for kind in g.kinds.clone() {
        if !(g.root_ok)(Some(kind)) {
            continue;
        }
        for v in 1..=max_vertices {
            found.extend(ctx.sub(kind, out, leaves.map(<[usize]>::to_vec), distinguished, v).iter().cloned());
        }
    }
    found.sort();
    found.dedup();
    found
}

fn leaf_counts(colors: usize, p: &Profile) -> Vec<usize> {
    let mut v = vec![0; colors];
    for c in p.colors() {
        v[c.0 as usize] += 1;
    }
    v
}

/// Reduced trees with exactly `k` distinguished vertices of profile orbit
/// `s`, overall profile orbit `r`, and normal vertices only at profiles
/// accepted by `normal_support`.
///
/// A non-trivial reduced tree alternates normal and distinguished levels
/// with a normal root, so it has exactly `1 + k + k·|s|` vertices; the
/// enumeration is complete once the bound reaches that number.
pub fn enumerate_reduced(
    colors: usize,
    s: &IOPair,
    k: usize,
    r: &IOPair,
    normal_support: &dyn Fn(&IOPair) -> bool,
    vertex_bound: usize,
) -> Enumeration {
    let s_rep = s.representative();
    let vertex_ok = |kind: Kind, io: &IOPair| match kind {
        Kind::Normal => normal_support(io),
        Kind::Distinguished => *io == s_rep,
    };
    let edge_ok = |parent: Kind, child: Option<Kind>| match (parent, child) {
        (Kind::Normal, None) => true,
        (Kind::Normal, Some(c)) => c == Kind::Distinguished,
        (Kind::Distinguished, Some(c)) => c == Kind::Normal,
        (Kind::Distinguished, None) => false,
    };
    let root_ok = |k: Option<Kind>| k != Some(Kind::Distinguished);
    let g = ShapeGrammar {
        colors,
        kinds: vec![Kind::Normal, Kind::Distinguished],
        max_arity: (r.arity() + k).max(s.arity()),
        vertex_ok: &vertex_ok,
        edge_ok: &edge_ok,
        root_ok: &root_ok,
    };
    let leaves = leaf_counts(colors, &r.inputs);
    let needed = if k == 0 { 1 } else { 1 + k + k * s.arity() };
    let trees = enumerate_shapes(&g, r.output, Some(&leaves), Some(k), vertex_bound.min(needed));
    Enumeration { trees, complete: vertex_bound >= needed }
}

/// Every marked tree (any markings, any leaves) with at most `max_vertices`
/// vertices of arity at most `max_arity`.
pub fn enumerate_marked(colors: usize, max_vertices: usize, max_arity: usize) -> Vec<Node> {
    let any = |_: Kind, _: &IOPair| true;
    let edges = |_: Kind, _: Option<Kind>| true;
    let roots = |k: Option<Kind>| k.is_some();
    let g = ShapeGrammar {
        colors,
        kinds: vec![Kind::Normal, Kind::Distinguished],
        max_arity,
        vertex_ok: &any,
        edge_ok: &edges,
        root_ok: &roots,
    };
    let mut out = Vec::new();
    for c in 0..colors {
        out.extend(enumerate_shapes(&g, Color(c as u8), None, None, max_vertices));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star() -> Color {
        Color(0)
    }

    fn io(n: usize) -> IOPair {
        IOPair::new(star(), Profile::uniform(star(), n))
    }

    #[test]
    fn dwyer_two_caps() {
        let e = enumerate_reduced(1, &io(0), 2, &io(0), &|_| true, 10);
        assert!(e.complete);
        assert_eq!(e.trees.len(), 1);
        assert_eq!(e.trees[0].code(None), "N0(D0(),D0())");
    }

    #[test]
    fn no_distinguished_gives_corollas_and_edge() {
        let e = enumerate_reduced(1, &io(0), 0, &io(2), &|_| true, 6);
        assert_eq!(e.trees.len(), 1);
        assert_eq!(e.trees[0].code(None), "N0(0,0)");
        let e = enumerate_reduced(1, &io(0), 0, &io(1), &|_| true, 6);
        assert_eq!(e.trees.len(), 2);
    }

    #[test]
    fn empty_support_has_no_reduced_trees() {
        let e = enumerate_reduced(1, &io(0), 1, &io(0), &|_| false, 6);
        assert!(e.trees.is_empty());
    }

    #[test]
    fn unary_chain_with_padding() {
        let units = |x: &IOPair| x.arity() == 1;
        for k in 0..4 {
            let e = enumerate_reduced(1, &io(1), k, &io(1), &units, 20);
            assert_eq!(e.trees.len(), 1 + (k == 0) as usize, "k = {k}");
            assert!(e.trees.iter().all(|t| t.is_reduced() && t.distinguished_count() == k));
        }
    }

    #[test]
    fn larger_bound_only_appends() {
        let small = enumerate_reduced(1, &io(2), 2, &io(3), &|_| true, 4);
        let big = enumerate_reduced(1, &io(2), 2, &io(3), &|_| true, 12);
        assert!(!small.complete && big.complete);
        assert!(small.trees.iter().all(|t| big.trees.contains(t)));
    }

    #[test]
    fn marked_counts_small() {
        // one vertex of arity ≤ 1, two marks, and for arity 1 a leaf: N(), N(0), D(), D(0)
        assert_eq!(enumerate_marked(1, 1, 1).len(), 4);
        let all = enumerate_marked(2, 3, 2);
        let mut codes: Vec<String> = all.iter().map(|t| t.code(None)).collect();
        codes.dedup();
        assert_eq!(codes.len(), all.len());
        assert!(all.iter().all(|t| *t == t.canonical()));
    }

    #[test]
    fn sub_vectors_count() {
        assert_eq!(sub_vectors(&[2, 1]).len(), 6);
        assert_eq!(sorted_profiles(2, 2).len(), 3);
    }
}
