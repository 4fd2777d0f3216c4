use std::sync::Arc;

use super::Node;
use crate::fincat::{Perm, PermGroup};

/// Preorder indexing of the nodes of a tree (vertices and leaves).
#[derive(Clone, Debug)]
pub struct Layout {
    pub parent: Vec<Option<usize>>,
    pub children: Vec<Vec<usize>>,
    pub is_leaf: Vec<bool>,
    pub size: Vec<usize>,
}

impl Layout {
    pub fn of(t: &Node) -> Layout {
        let mut l = Layout { parent: Vec::new(), children: Vec::new(), is_leaf: Vec::new(), size: Vec::new() };
        l.push(t, None);
        l
    }

    fn push(&mut self, t: &Node, parent: Option<usize>) -> usize {
        let id = self.parent.len();
        self.parent.push(parent);
        self.children.push(Vec::new());
        self.is_leaf.push(t.is_leaf());
        self.size.push(1);
        if let Node::Vertex(v) = t {
            for c in &v.children {
                let cid = self.push(c, Some(id));
                self.children[id].push(cid);
            }
        }
        self.size[id] = self.parent.len() - id;
        id
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.is_leaf[i]).collect()
    }

    pub fn vertices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !self.is_leaf[i]).collect()
    }
}

/// `Aut(T, ds)` as a permutation group on the preorder node indices.
#[derive(Clone, Debug)]
pub struct TreeAut {
    pub layout: Layout,
    pub group: Arc<PermGroup>,
    leaf_nodes: Vec<usize>,
    leaf_ordinal: Vec<usize>,
}

impl TreeAut {
    /// The induced permutation of leaves, indexed left to right.
    pub fn leaf_action(&self, g: usize) -> Perm {
        let p = self.group.element(g);
        Perm::from_images(self.leaf_nodes.iter().map(|&n| self.leaf_ordinal[p.apply(n)]).collect())
            .expect("automorphisms permute leaves")
    }

    /// For the automorphism `α` and vertex node `v`: the `σ` with
    /// `children(α(v))[i] = α(children(v)[σ(i)])`.
    pub fn child_permutation(&self, g: usize, v: usize) -> Perm {
        let a = self.group.element(g);
        let src = &self.layout.children[v];
        let dst = &self.layout.children[a.apply(v)];
        let images = dst
            .iter()
            .map(|&d| src.iter().position(|&s| a.apply(s) == d).expect("children map to children"))
            .collect();
        Perm::from_images(images).expect("bijection on children")
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }
}

/// Automorphism group of a canonical tree, generated by exchanging equal
/// adjacent sibling subtrees.
pub fn automorphism_group(t: &Node) -> TreeAut {
    let layout = Layout::of(t);
    let n = layout.len();
    let mut gens = Vec::new();
    let mut stack = vec![(t, 0usize)];
    while let Some((node, id)) = stack.pop() {
        let Node::Vertex(v) = node else { continue };
        let kids = &layout.children[id];
        for i in 0..v.children.len() {
            stack.push((&v.children[i], kids[i]));
            if i + 1 < v.children.len() && v.children[i] == v.children[i + 1] {
                let (a, b) = (kids[i], kids[i + 1]);
                let mut images: Vec<usize> = (0..n).collect();
                for off in 0..layout.size[a] {
                    images[a + off] = b + off;
                    images[b + off] = a + off;
                }
                gens.push(Perm::from_images(images).expect("swap of equal subtrees"));
            }
        }
    }
    let group = Arc::new(PermGroup::generate(n, &gens).expect("uniform degree"));
    let leaf_nodes = layout.leaves();
    let mut leaf_ordinal = vec![usize::MAX; n];
    for (i, &l) in leaf_nodes.iter().enumerate() {
        leaf_ordinal[l] = i;
    }
    TreeAut { layout, group, leaf_nodes, leaf_ordinal }
}

/// `|Aut(T)| = ∏_i |Aut(T_i)|^{n_i} · n_i!` over the distinct child
/// subtrees `T_i` of the root with multiplicities `n_i`, recursively.
/// Assumes canonical input, where equal subtrees are adjacent.
pub fn aut_order_formula(t: &Node) -> u128 {
    let Node::Vertex(v) = t else { return 1 };
    let mut total: u128 = 1;
    let mut i = 0;
    while i < v.children.len() {
        let mut j = i + 1;
        while j < v.children.len() && v.children[j] == v.children[i] {
            j += 1;
        }
        let n = (j - i) as u32;
        let fact: u128 = (1..=n as u128).product();
        total *= aut_order_formula(&v.children[i]).pow(n) * fact;
        i = j;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elem::Elem;
    use crate::profiles::{Color, IOPair, Profile};
    use crate::trees::Kind;

    fn c() -> Color {
        Color(0)
    }

    #[test]
    fn corolla_with_three_identical_caps() {
        let cap = Node::corolla(Kind::Normal, &IOPair::new(c(), Profile::uniform(c(), 1)));
        let t = Node::vertex(Kind::Normal, c(), Elem::unit(), vec![cap.clone(), cap.clone(), cap]).canonical();
        let a = automorphism_group(&t);
        assert_eq!(a.order(), 6);
        assert_eq!(aut_order_formula(&t), 6);
        // the leaf action is faithful here
        let mut images: Vec<Perm> = (0..a.order()).map(|g| a.leaf_action(g)).collect();
        images.sort();
        images.dedup();
        assert_eq!(images.len(), 6);
    }

    #[test]
    fn chain_of_distinct_arities_is_rigid() {
        let leafy = Node::corolla(Kind::Normal, &IOPair::new(c(), Profile::uniform(c(), 0)));
        let mid = Node::vertex(Kind::Normal, c(), Elem::unit(), vec![leafy, Node::leaf(c())]);
        let t = Node::vertex(Kind::Normal, c(), Elem::unit(), vec![mid]).canonical();
        assert_eq!(automorphism_group(&t).order(), 1);
    }

    #[test]
    fn distinct_subtrees_multiply() {
        let two = Node::corolla(Kind::Normal, &IOPair::new(c(), Profile::uniform(c(), 2)));
        let three = Node::corolla(Kind::Normal, &IOPair::new(c(), Profile::uniform(c(), 3)));
        let t = Node::vertex(Kind::Normal, c(), Elem::unit(), vec![two, three]).canonical();
        assert_eq!(automorphism_group(&t).order(), 2 * 6);
        assert_eq!(aut_order_formula(&t), 12);
    }

    #[test]
    fn child_permutation_of_swap() {
        let t = Node::corolla(Kind::Normal, &IOPair::new(c(), Profile::uniform(c(), 2)));
        let a = automorphism_group(&t);
        let g = (0..a.order()).find(|&g| !a.group.element(g).is_identity()).unwrap();
        assert_eq!(a.child_permutation(g, 0), Perm::transposition(2, 0, 1));
        assert_eq!(a.leaf_action(g), Perm::transposition(2, 0, 1));
    }
}
