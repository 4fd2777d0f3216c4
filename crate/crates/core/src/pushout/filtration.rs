use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use super::{AttachmentData, Extension};
use crate::elem::Elem;
use crate::error::{Error, Result};
use crate::fincat::{induce, pushout, quotient_by_action, GSet, Hom, Perm};
use crate::operad::Operad;
use crate::profiles::{Color, IOPair, Profile};
use crate::trees::{automorphism_group, enumerate_reduced, Kind, Node, Vertex};

/// Largest `|decorations| · |Aut|` table built for a single tree.
pub const TREE_CAP: usize = 4_000_000;

/// What one reduced tree adds at its stage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeContribution {
    /// Undecorated, unlabeled canonical shape.
    pub shape: Node,
    pub aut_order: usize,
    /// `|∏_u A(u) × (Y·Σ_s)^k|`.
    pub decorations: usize,
    /// Classes with a generator from `X`, glued to the previous stage.
    pub attached: usize,
    /// Classes with every generator outside `X`.
    pub added: usize,
}

/// `A_k(r)` with its stabilizer action and the inclusion of `A_{k-1}(r)`.
#[derive(Clone, Debug)]
pub struct FiltrationStage {
    pub k: usize,
    pub entry: IOPair,
    /// Elements of `A_k(r)` as canonical trees; the first `previous` are the
    /// image of `A_{k-1}(r)`, in order.
    pub set: GSet<Elem>,
    pub previous: usize,
    pub added: usize,
    pub contributions: Vec<TreeContribution>,
    /// `h_k: A_{k-1}(r) → A_k(r)` by index.
    pub inclusion: Vec<usize>,
    /// False when trees beyond the vertex bound may exist.
    pub complete: bool,
}

impl FiltrationStage {
    pub fn size(&self) -> usize {
        self.set.len()
    }

    pub fn elements(&self) -> &[Elem] {
        self.set.elements()
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.set.len()];
        self.inclusion.iter().all(|&i| !std::mem::replace(&mut seen[i], true))
    }
}

/// Vertices in preorder, aligned with [`Layout`] node indices.
fn preorder(t: &Node) -> Vec<Option<&Vertex>> {
    let mut out = Vec::new();
    fn go<'a>(t: &'a Node, out: &mut Vec<Option<&'a Vertex>>) {
        match t {
            Node::Leaf { .. } => out.push(None),
            Node::Vertex(v) => {
                out.push(Some(v));
                for c in &v.children {
                    go(c, out);
                }
            }
        }
    }
    go(t, &mut out);
    out
}

/// Rebuilds `shape` with the given decorations, indexed by preorder node.
fn decorate(shape: &Node, decos: &HashMap<usize, Elem>, next: &mut usize) -> Node {
    let id = *next;
    *next += 1;
    match shape {
        Node::Leaf { .. } => shape.clone(),
        Node::Vertex(v) => {
            let children = v.children.iter().map(|c| decorate(c, decos, next)).collect();
            Node::vertex(v.kind, v.out, decos[&id].clone(), children)
        }
    }
}

struct ShapeResult {
    contribution: TreeContribution,
    /// Class trees with every generator new.
    added: Vec<Node>,
    /// Class trees with a generator in `X`, with their attached image.
    attached: Vec<(Node, Node)>,
}

fn process_shape(ext: &Extension, shape: &Node, r: &IOPair) -> Result<ShapeResult> {
    let nodes = preorder(shape);
    let vids: Vec<usize> = (0..nodes.len()).filter(|&i| nodes[i].is_some()).collect();
    let options: HashMap<usize, Vec<Elem>> = vids.iter().map(|&i| (i, ext.vertex_options(nodes[i].expect("vertex"), false))).collect();
    let aut = automorphism_group(shape);
    let count = vids.iter().try_fold(1usize, |acc, i| acc.checked_mul(options[i].len()));
    let empty = TreeContribution { shape: shape.clone(), aut_order: aut.order(), decorations: 0, attached: 0, added: 0 };
    let Some(count) = count.filter(|&c| c > 0) else {
        return Ok(ShapeResult { contribution: empty, added: Vec::new(), attached: Vec::new() });
    };
    if count.saturating_mul(aut.order()) > TREE_CAP {
        return Err(Error::SizeCap(format!("{count} decorations of a tree with {} automorphisms", aut.order())));
    }
    let radix: Vec<usize> = vids.iter().map(|i| options[i].len()).collect();
    let decode = |mut x: usize| -> Vec<usize> {
        let mut out = vec![0; radix.len()];
        for (slot, &n) in out.iter_mut().zip(&radix).rev() {
            *slot = x % n;
            x /= n;
        }
        out
    };
    let encode = |v: &[usize]| v.iter().zip(&radix).fold(0, |acc, (&a, &n)| acc * n + a);
    let slot: HashMap<usize, usize> = vids.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let index: Vec<HashMap<&Elem, usize>> = vids.iter().map(|i| options[i].iter().enumerate().map(|(k, e)| (e, k)).collect()).collect();
    // (dec·α)(w) = dec(α(w))·σ with σ the child permutation of α⁻¹ at α(w)
    let order = aut.order();
    let mut moved: HashMap<(usize, usize, usize), usize> = HashMap::new();
    let mut table = vec![0usize; count * order];
    for x in 0..count {
        let dec = decode(x);
        for g in 0..order {
            let alpha = aut.group.element(g);
            let ginv = aut.group.inv(g);
            let mut out = vec![0; dec.len()];
            for (k, &w) in vids.iter().enumerate() {
                let src = alpha.apply(w);
                let sk = slot[&src];
                let key = (src, dec[sk], g);
                let val = match moved.get(&key) {
                    Some(&v) => v,
                    None => {
                        let sigma = aut.child_permutation(ginv, src);
                        let v = nodes[src].expect("vertex");
                        let staged = Vertex { kind: v.kind, out: v.out, deco: options[&src][dec[sk]].clone(), children: v.children.clone() };
                        let e = if sigma.is_identity() { staged.deco.clone() } else { ext.vertex_act(&staged, &sigma)? };
                        let idx = *index[k].get(&e).ok_or_else(|| Error::NotAnAction(format!("{e} left the decorations of a vertex")))?;
                        moved.insert(key, idx);
                        idx
                    }
                };
                out[k] = val;
            }
            table[x * order + g] = encode(&out);
        }
    }
    let decs = GSet::from_fn((0..count).collect::<Vec<usize>>(), aut.group.clone(), |x, g| table[x * order + g]);
    let stab = r.inputs.stabilizer();
    let l0 = Perm::from_images(shape.labelings(&r.inputs).into_iter().next().ok_or_else(|| Error::Invalid("leaf colors do not match the entry".into()))?)?;
    let l0_inv = l0.inverse();
    let images = (0..order)
        .map(|g| {
            let p = l0.compose(&aut.leaf_action(g)).compose(&l0_inv);
            stab.index_of(&p).ok_or_else(|| Error::Invalid(format!("leaf action {p} is not in the stabilizer")))
        })
        .collect::<Result<Vec<_>>>()?;
    let psi = Hom::new(aut.group.clone(), stab.clone(), images)?;
    let induced = induce(&decs, &psi)?;
    let realize = |x: usize, g: usize| -> Result<Node> {
        let dec = decode(x);
        let decos: HashMap<usize, Elem> = vids.iter().zip(&dec).map(|(&i, &k)| (i, options[&i][k].clone())).collect();
        let labels: Vec<usize> = (0..l0.degree()).map(|i| stab.element(g).inverse().apply(l0.apply(i))).collect();
        ext.canonical(&decorate(shape, &decos, &mut 0).with_labels(&labels))
    };
    let class_trees = induced.gset.elements().iter().map(|&(x, g)| realize(x, g)).collect::<Result<Vec<_>>>()?;
    // every pair realizes the tree of its class, and classes realize distinct trees
    let mut owner: HashMap<&Node, usize> = HashMap::new();
    for (c, t) in class_trees.iter().enumerate() {
        if owner.insert(t, c).is_some() {
            return Err(Error::Invalid(format!("two induced classes realize the tree {}", t.code(None))));
        }
    }
    for x in 0..count {
        for g in 0..stab.order() {
            let t = realize(x, g)?;
            if owner.get(&t) != Some(&induced.class_of(x, g)) {
                return Err(Error::Invalid(format!("induced class and tree class disagree at {}", t.code(None))));
            }
        }
    }
    let d_slots: Vec<usize> = vids.iter().enumerate().filter(|(_, &i)| nodes[i].expect("vertex").kind == Kind::Distinguished).map(|(k, _)| k).collect();
    let mut added = Vec::new();
    let mut attached = Vec::new();
    for (&(x, _), t) in induced.gset.elements().iter().zip(class_trees) {
        let dec = decode(x);
        let mut has_x = false;
        for &k in &d_slots {
            let (y, _) = ext.data().parse_generator(&options[&vids[k]][dec[k]])?;
            has_x |= ext.data().x_of(y).is_some();
        }
        if has_x {
            let image = ext.attach_reduce(&t)?;
            attached.push((t, image));
        } else {
            added.push(t);
        }
    }
    let contribution = TreeContribution {
        shape: shape.clone(),
        aut_order: order,
        decorations: count,
        attached: attached.len(),
        added: added.len(),
    };
    Ok(ShapeResult { contribution, added, attached })
}

fn stage_set(ext: &Extension, r: &IOPair, elements: Vec<Node>) -> Result<GSet<Elem>> {
    let stab = r.inputs.stabilizer();
    let index: HashMap<&Node, usize> = elements.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let mut table = Vec::with_capacity(elements.len());
    for t in &elements {
        let row = stab
            .elements()
            .iter()
            .map(|s| {
                let moved = ext.relabel(t, s)?;
                index.get(&moved).copied().ok_or_else(|| Error::NotAnAction(format!("{} left the stage", moved.code(None))))
            })
            .collect::<Result<Vec<_>>>()?;
        table.push(row);
    }
    GSet::from_table(elements.into_iter().map(Node::into_elem).collect(), stab, table)
}

/// The filtration `A = A_0 → A_1 → .. → A_K` of the free extension at the
/// entry `r`.
///
/// Stage `k` is the pushout of `A_{k-1}(r)` and the trees with `k`
/// generators over the trees with a generator from `X`, the latter glued
/// by [`Extension::attach_reduce`]. Each reduced tree contributes the
/// decorations induced from `Aut(T)` to the stabilizer of `r` along the
/// leaf action.
pub fn free_extension(data: &AttachmentData, r: &IOPair, stages: usize, vertex_bound: usize) -> Result<Vec<FiltrationStage>> {
    if !r.is_representative() {
        return Err(Error::Invalid("the entry must be an orbit representative".into()));
    }
    data.ambient.colors().check(&r.inputs)?;
    let ext = Extension::new(data.clone(), stages, r.arity())?;
    let base = ext.stage_elements(r.output, &r.inputs, 0)?;
    let mut out = vec![FiltrationStage {
        k: 0,
        entry: r.clone(),
        previous: 0,
        added: base.len(),
        inclusion: Vec::new(),
        set: stage_set(&ext, r, base.clone())?,
        contributions: Vec::new(),
        complete: true,
    }];
    let mut prev = base;
    for k in 1..=stages {
        let en = enumerate_reduced(ext.colors().len(), &data.s, k, r, &|io| ext.normal_support(io), vertex_bound);
        let results = en.trees.par_iter().map(|shape| process_shape(&ext, shape, r)).collect::<Result<Vec<_>>>()?;
        let prev_index: HashMap<&Node, usize> = prev.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let mut right = Vec::new();
        let mut f = Vec::new();
        let mut g = Vec::new();
        for res in &results {
            for (t, image) in &res.attached {
                let p = prev_index.get(image).copied().ok_or_else(|| {
                    Error::Invalid(format!("{} attaches to {}, which is not in stage {}", t.code(None), image.code(None), k - 1))
                })?;
                f.push(p);
                g.push(right.len());
                right.push(t.clone());
            }
            right.extend(res.added.iter().cloned());
        }
        let po = pushout(prev.len(), right.len(), &f, &g)?;
        let mut elements: Vec<Option<Node>> = vec![None; po.size];
        for (i, &c) in po.left.iter().enumerate() {
            elements[c].get_or_insert_with(|| prev[i].clone());
        }
        for (i, &c) in po.right.iter().enumerate() {
            elements[c].get_or_insert_with(|| right[i].clone());
        }
        let elements: Vec<Node> = elements.into_iter().map(|e| e.expect("legs are jointly surjective")).collect();
        let added: usize = results.iter().map(|r| r.contribution.added).sum();
        if po.size != prev.len() + added {
            return Err(Error::Invalid(format!("stage {k}: pushout has {} elements, expected {} + {added}", po.size, prev.len())));
        }
        let stage = FiltrationStage {
            k,
            entry: r.clone(),
            previous: prev.len(),
            added,
            inclusion: po.left.clone(),
            set: stage_set(&ext, r, elements.clone())?,
            contributions: results.into_iter().map(|r| r.contribution).collect(),
            complete: en.complete,
        };
        if !stage.is_injective() {
            return Err(Error::Invalid(format!("h_{k} is not injective")));
        }
        out.push(stage);
        prev = elements;
    }
    Ok(out)
}

/// Stage `j` of the arity-0 filtration for a free arity-0 generator, next
/// to `|A(j)/Σ_j|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DwyerRow {
    pub j: usize,
    pub contribution: usize,
    pub orbits: usize,
    pub cumulative: usize,
}

/// Adjoins a free constant `x` to a one-colored operad and reports each
/// stage of the arity-0 entry together with the orbit count of `A(j)`.
pub fn dwyer_plus(ambient: Arc<dyn Operad>, max_j: usize) -> Result<Vec<DwyerRow>> {
    if ambient.colors().len() != 1 {
        return Err(Error::Invalid("the arity-0 formula concerns one-colored operads".into()));
    }
    let star = Color(0);
    let s = IOPair::new(star, Profile::empty());
    let data = AttachmentData::single(ambient.clone(), s.clone(), "x")?;
    let stages = free_extension(&data, &s, max_j, 1 + max_j)?;
    let mut rows = Vec::with_capacity(max_j);
    for j in 1..=max_j {
        let c = Profile::uniform(star, j);
        let elems = ambient.entry(star, &c)?;
        let group = c.stabilizer();
        let index: HashMap<&Elem, usize> = elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let table = elems
            .iter()
            .map(|x| {
                group
                    .elements()
                    .iter()
                    .map(|g| {
                        let y = ambient.act(star, &c, x, g)?;
                        index.get(&y).copied().ok_or_else(|| Error::NotAnAction(format!("{x}·{g} left A({j})")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let set = GSet::from_table(elems.clone(), group, table)?;
        let orbits = quotient_by_action(&set).representatives.len();
        rows.push(DwyerRow { j, contribution: stages[j].added, orbits, cumulative: stages[j].size() });
    }
    Ok(rows)
}
