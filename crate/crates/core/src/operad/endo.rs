use std::fmt;
use std::sync::Arc;

use super::{all_profiles, GammaArgs, GammaImpl, Operad, TableOperad};
use crate::elem::Elem;
use crate::error::{Error, Result};
use crate::fincat::{GSet, Perm};
use crate::profiles::{Color, ColorSet, IOPair, Profile};
use crate::symseq::SymSeq;

/// Largest entry the endomorphism operad will tabulate.
pub const ENDO_CAP: usize = 1 << 16;

/// A colored finite set `A = (A_c)`, given by the size of each `A_c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredFinSet {
    pub sizes: Vec<usize>,
}

impl ColoredFinSet {
    pub fn new(sizes: Vec<usize>) -> Self {
        ColoredFinSet { sizes }
    }

    pub fn size(&self, c: Color) -> usize {
        self.sizes[c.0 as usize]
    }

    /// Sizes of the factors of `A_c = A_{c_1} × .. × A_{c_n}`.
    pub fn domain(&self, c: &Profile) -> Vec<usize> {
        c.colors().iter().map(|&x| self.size(x)).collect()
    }
}

/// A function `A_{c_1} × .. × A_{c_n} → A_d`, tabulated in mixed radix
/// with the first argument most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Function {
    pub domain: Vec<usize>,
    pub values: Vec<usize>,
}

fn decode(mut index: usize, domain: &[usize]) -> Vec<usize> {
    let mut out = vec![0; domain.len()];
    for (slot, &n) in out.iter_mut().zip(domain).rev() {
        *slot = index % n;
        index /= n;
    }
    out
}

fn encode(args: &[usize], domain: &[usize]) -> usize {
    args.iter().zip(domain).fold(0, |acc, (&a, &n)| acc * n + a)
}

impl Function {
    pub fn from_fn(domain: Vec<usize>, f: impl Fn(&[usize]) -> usize) -> Function {
        let len: usize = domain.iter().product();
        let values = (0..len).map(|i| f(&decode(i, &domain))).collect();
        Function { domain, values }
    }

    pub fn identity(size: usize) -> Function {
        Function::from_fn(vec![size], |a| a[0])
    }

    pub fn eval(&self, args: &[usize]) -> usize {
        self.values[encode(args, &self.domain)]
    }

    /// `f·σ`: input `i` of the result is input `σ(i)` of `f`.
    pub fn act(&self, sigma: &Perm) -> Function {
        let domain = sigma.permute(&self.domain);
        Function::from_fn(domain, |b| {
            let mut a = vec![0; b.len()];
            for (i, &bi) in b.iter().enumerate() {
                a[sigma.apply(i)] = bi;
            }
            self.eval(&a)
        })
    }

    /// `f(g_1, .., g_m)` on the concatenated domain.
    pub fn gamma(&self, gs: &[Function]) -> Function {
        let domain: Vec<usize> = gs.iter().flat_map(|g| g.domain.iter().copied()).collect();
        Function::from_fn(domain, |a| {
            let mut start = 0;
            let inner: Vec<usize> = gs
                .iter()
                .map(|g| {
                    let v = g.eval(&a[start..start + g.domain.len()]);
                    start += g.domain.len();
                    v
                })
                .collect();
            self.eval(&inner)
        })
    }

    pub fn to_elem(&self) -> Elem {
        Elem::tuple(self.values.iter().map(|&v| Elem::Int(v as i64)).collect())
    }

    /// Reads a table label back, given the domain it lives on.
    pub fn from_elem(domain: Vec<usize>, e: &Elem) -> Option<Function> {
        let values = e.as_tuple()?.iter().map(|v| v.as_int().map(|i| i as usize)).collect::<Option<Vec<_>>>()?;
        (values.len() == domain.iter().product::<usize>()).then_some(Function { domain, values })
    }
}

fn all_functions(domain: &[usize], target: usize) -> Result<Vec<Function>> {
    let len: usize = domain.iter().product();
    let count = (0..len).try_fold(1usize, |acc, _| acc.checked_mul(target).filter(|&n| n <= ENDO_CAP));
    let Some(count) = count else {
        return Err(Error::SizeCap(format!("{target}^{len} endomorphisms exceed {ENDO_CAP}")));
    };
    Ok((0..count).map(|i| Function { domain: domain.to_vec(), values: decode(i, &vec![target; len]) }).collect())
}

/// The endomorphism operad `End(A)` up to arity `bound`, with
/// `End(A)(d; c) = Hom(A_c, A_d)`.
pub fn endomorphism(colors: Arc<ColorSet>, a: &ColoredFinSet, bound: usize) -> Result<TableOperad> {
    if a.sizes.len() != colors.len() {
        return Err(Error::Invalid(format!("{} sizes for {} colors", a.sizes.len(), colors.len())));
    }
    let mut seq = SymSeq::empty(colors.clone());
    for d in colors.colors() {
        for n in 0..=bound {
            for p in all_profiles(colors.len(), n).into_iter().filter(Profile::is_representative) {
                let funs = all_functions(&a.domain(&p), a.size(d))?;
                if funs.is_empty() {
                    continue;
                }
                let g = p.stabilizer();
                let gg = g.clone();
                let target = vec![a.size(d); funs[0].values.len()];
                let elems = funs.iter().map(Function::to_elem).collect();
                let set = GSet::from_fn(elems, g, |x, s| encode(&funs[x].act(gg.element(s)).values, &target));
                seq.insert(IOPair::new(d, p), set)?;
            }
        }
    }
    let units = colors.colors().map(|c| Function::identity(a.size(c)).to_elem()).collect();
    let carrier = a.clone();
    let rule = Arc::new(move |args: &GammaArgs| -> Result<Elem> {
        let f = label_function(&carrier, args.c, args.x)?;
        let gs = args.ys.iter().map(|(b, y)| label_function(&carrier, b, y)).collect::<Result<Vec<_>>>()?;
        let h = f.gamma(&gs);
        let parts: Vec<&Profile> = args.ys.iter().map(|(b, _)| b).collect();
        Ok(function_label(&Profile::concat(&parts), &h))
    });
    TableOperad::new("End", seq, bound, units, GammaImpl::Direct(rule))
}

/// The function named by a label of `End(A)` at profile `c`.
fn label_function(a: &ColoredFinSet, c: &Profile, x: &Elem) -> Result<Function> {
    let bad = || Error::UnknownElement { element: x.to_string(), entry: format!("{c:?}") };
    match x {
        Elem::Moved(m) => {
            let f0 = Function::from_elem(a.domain(&c.representative()), &m.0).ok_or_else(bad)?;
            Ok(f0.act(&m.1))
        }
        _ => Function::from_elem(a.domain(c), x).ok_or_else(bad),
    }
}

/// The label of `f` at profile `c`: moved from the representative when `c`
/// is not one.
fn function_label(c: &Profile, f: &Function) -> Elem {
    if c.is_representative() {
        return f.to_elem();
    }
    let tau = c.transport();
    Elem::Moved(Arc::new((f.act(&tau.inverse()).to_elem(), tau)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AlgebraAxiom {
    Unit,
    Equivariance,
    Composition,
}

impl fmt::Display for AlgebraAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AlgebraAxiom::Unit => "unit",
            AlgebraAxiom::Equivariance => "equivariance",
            AlgebraAxiom::Composition => "composition",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraViolation {
    pub axiom: AlgebraAxiom,
    pub instance: String,
}

#[derive(Clone, Debug, Default)]
pub struct AlgebraReport {
    pub checked: usize,
    pub violations: Vec<AlgebraViolation>,
}

impl AlgebraReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

pub type Structure<'a> = &'a dyn Fn(Color, &Profile, &Elem) -> Result<Function>;

/// Checks that `mu` makes `A` an `O`-algebra, exhaustively up to arity
/// `bound`: units act as identities, `mu` is equivariant and it carries
/// `γ` to substitution of functions.
pub fn check_algebra(o: &dyn Operad, a: &ColoredFinSet, mu: Structure, bound: usize) -> Result<AlgebraReport> {
    let colors = o.colors().clone();
    let ncol = colors.len();
    let mut report = AlgebraReport::default();
    let mut fail = |axiom, instance: String| report.violations.push(AlgebraViolation { axiom, instance });
    let mut checked = 0;
    for c in colors.colors() {
        checked += 1;
        if mu(c, &Profile(vec![c]), &o.unit(c))? != Function::identity(a.size(c)) {
            fail(AlgebraAxiom::Unit, format!("unit of {}", colors.name(c)));
        }
    }
    let profiles: Vec<Vec<Profile>> = (0..=bound).map(|n| all_profiles(ncol, n)).collect();
    for d in colors.colors() {
        for n in 0..=bound {
            for c in &profiles[n] {
                for x in o.entry(d, c)? {
                    let fx = mu(d, c, &x)?;
                    for s in Perm::all(n) {
                        checked += 1;
                        let xs = o.act(d, c, &x, &s)?;
                        if mu(d, &c.act(&s), &xs)? != fx.act(&s) {
                            fail(AlgebraAxiom::Equivariance, format!("{x}·{s} in {}", colors.show_io(&IOPair::new(d, c.clone()))));
                        }
                    }
                    let mut ys = Vec::new();
                    composition_instances(o, &profiles, c.colors(), bound, &mut ys, &mut |ys| {
                        checked += 1;
                        let lhs = mu(d, &Profile::concat(&ys.iter().map(|(b, _)| b).collect::<Vec<_>>()), &o.gamma(d, c, &x, ys)?)?;
                        let gs = ys.iter().zip(c.colors()).map(|((b, y), &ci)| mu(ci, b, y)).collect::<Result<Vec<_>>>()?;
                        if lhs != fx.gamma(&gs) {
                            let args: Vec<String> = ys.iter().map(|(_, y)| y.to_string()).collect();
                            fail(AlgebraAxiom::Composition, format!("γ({x}; {})", args.join(", ")));
                        }
                        Ok(())
                    })?;
                }
            }
        }
    }
    report.checked = checked;
    Ok(report)
}

/// Calls `visit` on every input tuple `(b_i, y_i)` for the given input
/// colors whose total arity stays within `bound`.
fn composition_instances(
    o: &dyn Operad,
    profiles: &[Vec<Profile>],
    inputs: &[Color],
    bound: usize,
    acc: &mut Vec<(Profile, Elem)>,
    visit: &mut dyn FnMut(&[(Profile, Elem)]) -> Result<()>,
) -> Result<()> {
    let Some((&ci, rest)) = inputs.split_first() else {
        return visit(acc);
    };
    let used: usize = acc.iter().map(|(b, _)| b.len()).sum();
    for m in 0..=bound - used {
        for b in &profiles[m] {
            for y in o.entry(ci, b)? {
                acc.push((b.clone(), y));
                composition_instances(o, profiles, rest, bound, acc, visit)?;
                acc.pop();
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operad::{assoc, com, validate_operad, Monoid};

    fn star() -> Color {
        Color(0)
    }

    fn fold(m: &Monoid, args: impl Iterator<Item = usize>) -> usize {
        args.fold(m.unit, |acc, v| m.mul(acc, v))
    }

    /// `x` sends input `i` to word position `x(i)`.
    fn assoc_structure(m: &Monoid) -> impl Fn(Color, &Profile, &Elem) -> Result<Function> + '_ {
        move |_, c, x| {
            let x = x.as_perm().expect("assoc element").clone();
            Ok(Function::from_fn(vec![m.size(); c.len()], |a| fold(m, (0..a.len()).map(|w| a[x.inverse().apply(w)]))))
        }
    }

    #[test]
    fn endomorphism_sizes() {
        let cs = Arc::new(ColorSet::single());
        let e = endomorphism(cs, &ColoredFinSet::new(vec![2]), 2).unwrap();
        let sizes: Vec<usize> = (0..=2).map(|n| e.entry(star(), &Profile::uniform(star(), n)).unwrap().len()).collect();
        assert_eq!(sizes, vec![2, 4, 16]);
        assert!(validate_operad(&e, 2).is_valid());
    }

    #[test]
    fn two_colored_endomorphisms_are_an_operad() {
        let cs = Arc::new(ColorSet::new(["a", "b"]).unwrap());
        let e = endomorphism(cs.clone(), &ColoredFinSet::new(vec![1, 2]), 2).unwrap();
        let a = cs.color("a").unwrap();
        let b = cs.color("b").unwrap();
        assert_eq!(e.entry(b, &Profile(vec![a, b])).unwrap().len(), 4);
        assert_eq!(e.entry(b, &Profile(vec![b, a])).unwrap().len(), 4);
        assert!(validate_operad(&e, 2).is_valid());
    }

    #[test]
    fn monoid_structures_on_two_points() {
        for code in 0..16usize {
            let table = vec![vec![code & 1, (code >> 1) & 1], vec![(code >> 2) & 1, (code >> 3) & 1]];
            for unit in 0..2 {
                let m = Monoid { name: format!("t{code}"), table: table.clone(), unit };
                let mu = assoc_structure(&m);
                let report = check_algebra(&assoc(3), &ColoredFinSet::new(vec![2]), &mu, 3).unwrap();
                assert_eq!(report.holds(), m.is_associative() && m.is_unital(), "table {code} unit {unit}");
            }
        }
    }

    #[test]
    fn commutative_operad_needs_commutativity() {
        // {1, a, b} with a, b left zeros
        let m = Monoid {
            name: "left-zero".into(),
            table: vec![vec![0, 1, 2], vec![1, 1, 1], vec![2, 2, 2]],
            unit: 0,
        };
        assert!(m.is_associative() && m.is_unital() && !m.is_commutative());
        let mu = |_: Color, c: &Profile, _: &Elem| Ok(Function::from_fn(vec![3; c.len()], |a| fold(&m, a.iter().copied())));
        let report = check_algebra(&com(3), &ColoredFinSet::new(vec![3]), &mu, 3).unwrap();
        assert!(report.violations.iter().all(|v| v.axiom == AlgebraAxiom::Equivariance));
        assert!(report.violations.iter().any(|v| v.instance.starts_with("*·[2 1]")));
        assert!(check_algebra(&assoc(3), &ColoredFinSet::new(vec![3]), &assoc_structure(&m), 3).unwrap().holds());
    }
}
