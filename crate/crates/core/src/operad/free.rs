use std::collections::BTreeSet;

use crate::elem::Elem;
use crate::error::Result;
use crate::profiles::{IOPair, Profile};
use crate::symseq::SymSeq;
use crate::trees::{enumerate_shapes, Kind, Node, ShapeGrammar};

/// One entry of a free operad, truncated by a vertex bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeOperadEntry {
    /// Canonical labeled `X`-decorated trees, sorted.
    pub elements: Vec<Elem>,
    /// True when no tree beyond the bound belongs to the entry.
    pub complete: bool,
}

fn leaf_counts(colors: usize, p: &Profile) -> Vec<usize> {
    let mut v = vec![0; colors];
    for c in p.colors() {
        v[c.0 as usize] += 1;
    }
    v
}

/// The entry `F(X)(entry)` of the free operad on `X`: isomorphism classes
/// of `X`-decorated trees with at most `vertex_bound` vertices, leaves
/// labeled by the positions of the input profile.
///
/// With every generator of arity at least 2 a tree on `n` leaves has at
/// most `n − 1` vertices, which certifies completeness.
pub fn free_operad(x: &SymSeq, entry: &IOPair, vertex_bound: usize) -> Result<FreeOperadEntry> {
    let ncol = x.colors().len();
    x.colors().check(&entry.inputs)?;
    let vertex_ok = |_: Kind, io: &IOPair| x.get(&io.representative()).is_some();
    let edge_ok = |_: Kind, _: Option<Kind>| true;
    let root_ok = |k: Option<Kind>| k != Some(Kind::Distinguished);
    let g = ShapeGrammar {
        colors: ncol,
        kinds: vec![Kind::Normal],
        max_arity: x.max_arity(),
        vertex_ok: &vertex_ok,
        edge_ok: &edge_ok,
        root_ok: &root_ok,
    };
    let shapes = enumerate_shapes(&g, entry.output, Some(&leaf_counts(ncol, &entry.inputs)), None, vertex_bound);
    let act = |v: &crate::trees::Vertex, s: &crate::fincat::Perm| x.act_at(v.out, &v.inputs(), &v.deco, s);
    let mut found = BTreeSet::new();
    for shape in &shapes {
        let labelings = shape.labelings(&entry.inputs);
        for dec in shape.decorations(&|v| x.entry(v.out, &v.inputs())) {
            for lab in &labelings {
                found.insert(dec.with_labels(lab).canonical_with(&act)?);
            }
        }
    }
    let n = entry.arity();
    let all_wide = x.keys().all(|k| k.arity() >= 2);
    let complete = all_wide && vertex_bound >= n.saturating_sub(1).max(1);
    Ok(FreeOperadEntry { elements: found.into_iter().map(Node::into_elem).collect(), complete })
}

/// Isomorphism classes of colored trees whose vertex profiles are exactly
/// the given multiset (up to orbit) and whose overall profile is `t`; the
/// entry of the operad of colored trees, with unlabeled vertices and leaves.
pub fn opc_entry(colors: usize, vertex_profiles: &[IOPair], t: &IOPair) -> Vec<Node> {
    let mut wanted: Vec<IOPair> = vertex_profiles.iter().map(IOPair::representative).collect();
    wanted.sort();
    let allowed = wanted.clone();
    let vertex_ok = move |_: Kind, io: &IOPair| allowed.binary_search(io).is_ok();
    let edge_ok = |_: Kind, _: Option<Kind>| true;
    let root_ok = |k: Option<Kind>| k != Some(Kind::Distinguished);
    let g = ShapeGrammar {
        colors,
        kinds: vec![Kind::Normal],
        max_arity: wanted.iter().map(IOPair::arity).max().unwrap_or(0),
        vertex_ok: &vertex_ok,
        edge_ok: &edge_ok,
        root_ok: &root_ok,
    };
    let leaves = leaf_counts(colors, &t.inputs);
    enumerate_shapes(&g, t.output, Some(&leaves), None, wanted.len())
        .into_iter()
        .filter(|tree| {
            let mut got: Vec<IOPair> = tree.vertices().iter().map(|v| v.io().representative()).collect();
            got.sort();
            got == wanted
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::Color;
    use crate::fincat::GSet;
    use crate::profiles::ColorSet;
    use std::sync::Arc;

    fn star() -> Color {
        Color(0)
    }

    fn io(n: usize) -> IOPair {
        IOPair::new(star(), Profile::uniform(star(), n))
    }

    fn gens(arity: usize, names: &[&str]) -> SymSeq {
        let mut s = SymSeq::empty(Arc::new(ColorSet::single()));
        let k = io(arity);
        let g = k.inputs.stabilizer();
        s.insert(k, GSet::trivial(names.iter().map(|n| Elem::sym(n)).collect(), g)).unwrap();
        s
    }

    #[test]
    fn binary_generator_counts() {
        let x = gens(2, &["m"]);
        let sizes: Vec<usize> = (1..=3).map(|n| free_operad(&x, &io(n), 6).unwrap().elements.len()).collect();
        assert_eq!(sizes, vec![1, 1, 3]);
        assert!(free_operad(&x, &io(3), 6).unwrap().complete);
    }

    #[test]
    fn empty_generators() {
        let x = SymSeq::empty(Arc::new(ColorSet::single()));
        assert_eq!(free_operad(&x, &io(1), 3).unwrap().elements.len(), 1);
        assert_eq!(free_operad(&x, &io(2), 3).unwrap().elements.len(), 0);
    }

    #[test]
    fn unary_chain() {
        let x = gens(1, &["f"]);
        let e = free_operad(&x, &io(1), 4).unwrap();
        assert_eq!(e.elements.len(), 5);
        assert!(!e.complete);
    }

    #[test]
    fn opc_examples() {
        assert_eq!(opc_entry(1, &[io(2), io(0)], &io(1)).len(), 1);
        assert_eq!(opc_entry(1, &[io(3)], &io(3)).len(), 1);
        let cs = ColorSet::new(["a", "b"]).unwrap();
        let a = cs.color("a").unwrap();
        let b = cs.color("b").unwrap();
        // a vertex a:b and a vertex a:a cannot be stacked to reach a:b,b
        let p = IOPair::new(a, Profile(vec![b]));
        let q = IOPair::new(a, Profile(vec![a]));
        assert!(opc_entry(2, &[p, q], &IOPair::new(a, Profile(vec![b, b]))).is_empty());
    }
}
