//! Acceptance suite: one PASS/FAIL line per criterion, run sequentially so
//! that the timings are not distorted by other tests.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;
use std::time::{Duration, Instant};

use colop_core::circle::{witness_associativity, witness_left_unit, witness_right_unit, DEFAULT_CAP};
use colop_core::fincat::{GSet, Perm, PermGroup};
use colop_core::operad::{assoc, com, free_operad, random_operad, trivial, validate_operad, GammaKey, Operad, TableOperad};
use colop_core::pushout::{dwyer_plus, free_extension, oracle_pushout, q_closed_form, q_object, AttachmentData, Injection};
use colop_core::trees::{aut_order_formula, automorphism_group, enumerate_marked, Kind, Node};
use colop_core::{Color, ColorSet, Elem, IOPair, Profile, SymSeq};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;

use common::count_isos;

type Outcome = Result<String, String>;

fn star() -> Color {
    Color(0)
}

fn uniform(n: usize) -> Profile {
    Profile::uniform(star(), n)
}

/// `|A(j)/Σ_j|` by Burnside's lemma.
fn burnside_orbits(a: &dyn Operad, j: usize) -> Result<usize, String> {
    let c = uniform(j);
    let elems = a.entry(star(), &c).map_err(|e| e.to_string())?;
    let group = PermGroup::symmetric(j);
    let mut fixed = 0;
    for g in group.elements() {
        for x in &elems {
            if a.act(star(), &c, x, g).map_err(|e| e.to_string())? == *x {
                fixed += 1;
            }
        }
    }
    if fixed % group.order() != 0 {
        return Err(format!("Burnside count {fixed} is not divisible by {}", group.order()));
    }
    Ok(fixed / group.order())
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut operads: Vec<TableOperad> = vec![assoc(4), com(4)];
    operads.extend((0..5).map(|_| random_operad(&mut rng, 4)));
    let mut slowest = Duration::ZERO;
    for o in operads {
        let report = validate_operad(&o, 3);
        if !report.is_valid() {
            return Err(format!("{} is not an operad: {}", o.name, report.violations[0]));
        }
        let start = Instant::now();
        let name = o.name.clone();
        let a: Arc<dyn Operad> = Arc::new(o);
        let rows = dwyer_plus(a.clone(), 4).map_err(|e| format!("{name}: {e}"))?;
        for row in &rows {
            let orbits = burnside_orbits(a.as_ref(), row.j)?;
            if row.contribution != orbits {
                return Err(format!("{name}: stage {} adds {}, |A({})/Σ| = {orbits}", row.j, row.contribution, row.j));
            }
        }
        let took = start.elapsed();
        if took > Duration::from_secs(10) {
            return Err(format!("{name} took {took:?}"));
        }
        slowest = slowest.max(took);
    }
    Ok(format!("7 operads, j ≤ 4, slowest {slowest:.2?}"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut cases = 0;
    for y in 0..=3 {
        for x in 0..=y.min(2) {
            for i in Injection::all(x, y) {
                for t in 1..=5 {
                    for q in 0..=t {
                        let got = q_object(&i, t, q).map_err(|e| e.to_string())?.len() as u128;
                        let want = q_closed_form(x, y, t, q);
                        if got != want {
                            return Err(format!("|X|={x} |Y|={y} map {:?} t={t} q={q}: {got} ≠ {want}", i.map));
                        }
                        cases += 1;
                    }
                }
            }
        }
    }
    let took = start.elapsed();
    if took > Duration::from_secs(5) {
        return Err(format!("took {took:?}"));
    }
    Ok(format!("{cases} cases in {took:.2?}"))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let two = Arc::new(ColorSet::new(["a", "b"]).map_err(|e| e.to_string())?);
    let one = Arc::new(ColorSet::single());
    let mut sequences = 0;
    for round in 0..50 {
        let cs = if rng.gen_bool(0.5) { two.clone() } else { one.clone() };
        let xs: Vec<SymSeq> = (0..3).map(|_| SymSeq::random(cs.clone(), 2, 2, &mut rng)).collect();
        for x in &xs {
            for (law, w) in [("left unit", witness_left_unit(x)), ("right unit", witness_right_unit(x))] {
                let w = w.map_err(|e| format!("round {round}: {e}"))?;
                if let Some(d) = w.defect {
                    return Err(format!("round {round}: {law} fails: {d:?}"));
                }
            }
        }
        let w = witness_associativity(&xs[0], &xs[1], &xs[2], 4, DEFAULT_CAP).map_err(|e| format!("round {round}: {e}"))?;
        if let Some(d) = w.defect {
            return Err(format!("round {round}: associativity fails: {d:?}"));
        }
        sequences += 3;
    }
    let took = start.elapsed();
    if took > Duration::from_secs(60) {
        return Err(format!("took {took:?}"));
    }
    Ok(format!("{sequences} sequences, 50 associativity triples up to arity 4, {took:.2?}"))
}

/// Compares stage sizes with oracle classes on `r`, stage by stage.
fn agree(data: &AttachmentData, r: &IOPair, stages: usize, size_bound: usize) -> Result<Vec<usize>, String> {
    let filtration = free_extension(data, r, stages, size_bound).map_err(|e| e.to_string())?;
    let report = oracle_pushout(data, r, size_bound).map_err(|e| e.to_string())?;
    if report.certified < stages {
        return Err(format!("oracle certifies only {} stages", report.certified));
    }
    let mut sizes = Vec::new();
    for st in &filtration {
        if !st.complete {
            return Err(format!("stage {} is incomplete", st.k));
        }
        if st.size() != report.cumulative(st.k) {
            return Err(format!("arity {} stage {}: {} elements, oracle {}", r.arity(), st.k, st.size(), report.cumulative(st.k)));
        }
        sizes.push(st.size());
    }
    Ok(sizes)
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();

    let a: Arc<dyn Operad> = Arc::new(trivial(Arc::new(ColorSet::single()), 12));
    let data = AttachmentData::single(a, IOPair::new(star(), uniform(1)), "y").map_err(|e| e.to_string())?;
    for n in 0..=2 {
        let sizes = agree(&data, &IOPair::new(star(), uniform(n)), 5, 11)?;
        notes.push(format!("trivial+unary({n}) {sizes:?}"));
    }

    let a: Arc<dyn Operad> = Arc::new(com(8));
    let data = AttachmentData::single(a, IOPair::new(star(), uniform(0)), "y").map_err(|e| e.to_string())?;
    for n in 0..=2 {
        let sizes = agree(&data, &IOPair::new(star(), uniform(n)), 4, 5)?;
        notes.push(format!("com+constant({n}) {sizes:?}"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..3 {
        let o = random_operad(&mut rng, 9);
        let report = validate_operad(&o, 4);
        if !report.is_valid() {
            return Err(format!("{} is not an operad: {}", o.name, report.violations[0]));
        }
        let name = o.name.clone();
        let a: Arc<dyn Operad> = Arc::new(o);
        let data = AttachmentData::single(a, IOPair::new(star(), uniform(2)), "y").map_err(|e| e.to_string())?;
        for n in 0..=2 {
            let sizes = agree(&data, &IOPair::new(star(), uniform(n)), 2, 7).map_err(|e| format!("{name}: {e}"))?;
            notes.push(format!("{name}+binary({n}) {sizes:?}"));
        }
    }
    let took = start.elapsed();
    if took > Duration::from_secs(120) {
        return Err(format!("took {took:?}"));
    }
    Ok(format!("{}; {took:.2?}", notes.join(", ")))
}

/// Every marked tree rooted at `color` with exactly `nodes` nodes, leaves
/// included, over `colors` colors.
fn trees_by_nodes(colors: usize, color: Color, nodes: usize) -> BTreeSet<Node> {
    let mut out = BTreeSet::new();
    if nodes == 1 {
        out.insert(Node::leaf(color));
    }
    if nodes >= 1 {
        for kind in [Kind::Normal, Kind::Distinguished] {
            for kids in forests(colors, nodes - 1) {
                out.insert(Node::vertex(kind, color, Elem::unit(), kids).canonical());
            }
        }
    }
    out
}

/// Ordered lists of trees with `nodes` nodes in total.
fn forests(colors: usize, nodes: usize) -> Vec<Vec<Node>> {
    if nodes == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=nodes {
        for c in 0..colors {
            for t in trees_by_nodes(colors, Color(c as u8), first) {
                for mut rest in forests(colors, nodes - first) {
                    rest.insert(0, t.clone());
                    out.push(rest);
                }
            }
        }
    }
    out
}

fn check_aut(t: &Node) -> Result<(), String> {
    let group = automorphism_group(t).order() as u128;
    let formula = aut_order_formula(t);
    let brute = count_isos(t, t);
    if group != formula || formula != brute {
        return Err(format!("{}: group {group}, formula {formula}, matching {brute}", t.code(None)));
    }
    Ok(())
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut by_nodes = 0;
    for colors in 1..=2 {
        for root in 0..colors {
            for n in 1..=6 {
                for t in trees_by_nodes(colors, Color(root as u8), n) {
                    check_aut(&t)?;
                    by_nodes += 1;
                }
            }
        }
    }
    let mut bounded = 0;
    for (colors, vertices, arity) in [(1, 6, 3), (2, 6, 1), (2, 5, 2)] {
        for t in enumerate_marked(colors, vertices, arity) {
            check_aut(&t)?;
            bounded += 1;
        }
    }
    let took = start.elapsed();
    if took > Duration::from_secs(60) {
        return Err(format!("took {took:?}"));
    }
    Ok(format!("{by_nodes} trees with ≤ 6 nodes; {bounded} more with bounded vertex arity; {took:.2?}"))
}

fn criterion_6() -> Outcome {
    for o in [assoc(4), com(4)] {
        let r = validate_operad(&o, 4);
        if !r.is_valid() {
            return Err(format!("{}: {} violations, first {}", o.name, r.violations.len(), r.violations[0]));
        }
    }
    let mut bad = assoc(4);
    let id = |n| Elem::Perm(Perm::identity(n));
    let key = GammaKey { d: star(), c: uniform(2), x: id(2), ys: vec![(uniform(1), id(1)), (uniform(2), id(2))] };
    bad.patch(key, Elem::Perm(Perm::from_images(vec![2, 1, 0]).map_err(|e| e.to_string())?));
    let r = validate_operad(&bad, 4);
    let Some(v) = r.violations.first() else { return Err("a corrupted composite went unnoticed".into()) };
    if v.instance.is_empty() {
        return Err("violation without a named instance".into());
    }
    let group = Arc::new(PermGroup::symmetric(2));
    let broken = GSet::from_table(vec![Elem::sym("p"), Elem::sym("q")], group, vec![vec![1, 1], vec![0, 0]]);
    let Err(e) = broken else { return Err("a broken action table was accepted".into()) };
    Ok(format!("assoc and com clean at bound 4; caught {} violations, first \"{v}\"; table rejected: {e}", r.violations.len()))
}

/// Canonical string of a planar binary tree with labeled leaves, up to
/// swapping the two children at any vertex.
fn binary_code(t: &Bin) -> String {
    match t {
        Bin::Leaf(l) => l.to_string(),
        Bin::Node(a, b) => {
            let (x, y) = (binary_code(a), binary_code(b));
            if x <= y {
                format!("({x},{y})")
            } else {
                format!("({y},{x})")
            }
        }
    }
}

enum Bin {
    Leaf(usize),
    Node(Box<Bin>, Box<Bin>),
}

fn binary_trees(labels: &[usize]) -> Vec<Bin> {
    if labels.len() == 1 {
        return vec![Bin::Leaf(labels[0])];
    }
    let mut out = Vec::new();
    for mask in 1..(1u32 << labels.len()) - 1 {
        let (l, r): (Vec<usize>, Vec<usize>) = labels.iter().enumerate().fold((vec![], vec![]), |(mut l, mut r), (i, &x)| {
            if mask & (1 << i) != 0 {
                l.push(x)
            } else {
                r.push(x)
            }
            (l, r)
        });
        for a in binary_trees(&l) {
            for b in binary_trees(&r) {
                out.push(Bin::Node(Box::new(a.clone_tree()), Box::new(b)));
            }
        }
    }
    out
}

impl Bin {
    fn clone_tree(&self) -> Bin {
        match self {
            Bin::Leaf(l) => Bin::Leaf(*l),
            Bin::Node(a, b) => Bin::Node(Box::new(a.clone_tree()), Box::new(b.clone_tree())),
        }
    }
}

fn criterion_7() -> Outcome {
    let cs = Arc::new(ColorSet::single());
    let mut x = SymSeq::empty(cs);
    let key = IOPair::new(star(), uniform(2));
    x.insert(key.clone(), GSet::trivial(vec![Elem::sym("g")], key.inputs.stabilizer())).map_err(|e| e.to_string())?;
    let mut sizes = Vec::new();
    for n in 1..=3 {
        let entry = free_operad(&x, &IOPair::new(star(), uniform(n)), 6).map_err(|e| e.to_string())?;
        if !entry.complete {
            return Err(format!("arity {n} not certified complete"));
        }
        let labels: Vec<usize> = (0..n).collect();
        let brute: BTreeSet<String> = binary_trees(&labels).iter().map(binary_code).collect();
        if entry.elements.len() != brute.len() {
            return Err(format!("arity {n}: {} trees, brute force {}", entry.elements.len(), brute.len()));
        }
        sizes.push(entry.elements.len());
    }
    if sizes != [1, 1, 3] {
        return Err(format!("sizes {sizes:?}"));
    }
    Ok(format!("sizes {sizes:?}, complete"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("arity-0 formula for a free constant", criterion_1),
        ("Q-construction closed form", criterion_2),
        ("monoidal witnesses", criterion_3),
        ("free extension vs congruence oracle", criterion_4),
        ("automorphism decomposition", criterion_5),
        ("operad axiom validation", criterion_6),
        ("free operad counts", criterion_7),
    ];
    let mut failed = HashMap::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail} [{took:.2?}]", i + 1),
            Err(detail) => {
                println!("FAIL {} {name}: {detail} [{took:.2?}]", i + 1);
                failed.insert(i + 1, detail);
            }
        }
    }
    if !failed.is_empty() {
        let mut ids: Vec<_> = failed.keys().collect();
        ids.sort();
        eprintln!("failed criteria: {ids:?}");
        std::process::exit(1);
    }
}
