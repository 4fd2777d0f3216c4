use std::collections::{HashMap, HashSet};
use std::fmt;

use super::{all_profiles, Operad};
use crate::elem::Elem;
use crate::error::{Error, Result};
use crate::fincat::Perm;
use crate::profiles::{Color, IOPair, Profile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    ActionIdentity,
    ActionComposition,
    Closure,
    LeftUnit,
    RightUnit,
    TopEquivariance,
    BottomEquivariance,
    Associativity,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::ActionIdentity => "action identity",
            Axiom::ActionComposition => "action composition",
            Axiom::Closure => "closure",
            Axiom::LeftUnit => "left unit",
            Axiom::RightUnit => "right unit",
            Axiom::TopEquivariance => "top equivariance",
            Axiom::BottomEquivariance => "bottom equivariance",
            Axiom::Associativity => "associativity",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub axiom: Axiom,
    pub instance: String,
    pub expected: String,
    pub found: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} expected {} found {}", self.axiom, self.instance, self.expected, self.found)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub checked: usize,
    /// Instances whose composites fall outside the known entries.
    pub skipped: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

type Inputs = Vec<(Profile, Elem)>;

fn show(o: &dyn Operad, d: Color, c: &Profile, x: &Elem) -> String {
    format!("{x}@{}", o.colors().show_io(&IOPair::new(d, c.clone())))
}

fn show_gamma(o: &dyn Operad, d: Color, c: &Profile, x: &Elem, ys: &[(Profile, Elem)]) -> String {
    let parts: Vec<String> = ys.iter().zip(c.colors()).map(|((b, y), &ci)| show(o, ci, b, y)).collect();
    format!("γ({}; {})", show(o, d, c, x), parts.join(", "))
}

struct Validator<'a> {
    o: &'a dyn Operad,
    bound: usize,
    entries: HashMap<(Color, Profile), (Vec<Elem>, HashSet<Elem>)>,
    report: ValidationReport,
}

impl Validator<'_> {
    fn entry(&mut self, d: Color, c: &Profile) -> Result<&(Vec<Elem>, HashSet<Elem>)> {
        let key = (d, c.clone());
        if !self.entries.contains_key(&key) {
            let v = self.o.entry(d, c)?;
            let set = v.iter().cloned().collect();
            self.entries.insert(key.clone(), (v, set));
        }
        Ok(&self.entries[&key])
    }

    fn violation(&mut self, axiom: Axiom, instance: String, expected: &Elem, found: &Elem) {
        self.report.violations.push(Violation { axiom, instance, expected: expected.to_string(), found: found.to_string() });
    }

    /// Runs `f`; out-of-bounds errors skip the instance, other errors are
    /// reported as violations of `axiom`.
    fn attempt(&mut self, axiom: Axiom, instance: impl Fn() -> String, f: impl FnOnce(&mut Self) -> Result<Option<(Elem, Elem)>>) {
        match f(self) {
            Ok(Some((e, g))) => {
                self.report.checked += 1;
                if e != g {
                    self.violation(axiom, instance(), &e, &g);
                }
            }
            Ok(None) => self.report.checked += 1,
            Err(Error::OutOfBounds(_)) => self.report.skipped += 1,
            Err(err) => {
                self.report.checked += 1;
                self.report.violations.push(Violation {
                    axiom,
                    instance: instance(),
                    expected: "a defined result".into(),
                    found: err.to_string(),
                });
            }
        }
    }

    fn gamma_checked(&mut self, d: Color, c: &Profile, x: &Elem, ys: &[(Profile, Elem)]) -> Result<Elem> {
        let r = self.o.gamma(d, c, x, ys)?;
        let parts: Vec<&Profile> = ys.iter().map(|(b, _)| b).collect();
        let b = Profile::concat(&parts);
        if !self.entry(d, &b)?.1.contains(&r) {
            return Err(Error::UnknownElement { element: r.to_string(), entry: self.o.colors().show_io(&IOPair::new(d, b)) });
        }
        Ok(r)
    }

    /// Every tuple of inputs for `c` with total arity at most `budget`.
    fn input_tuples(&mut self, c: &Profile, budget: usize) -> Vec<Inputs> {
        let mut out: Vec<(Inputs, usize)> = vec![(Vec::new(), 0)];
        for &ci in c.colors() {
            let mut next = Vec::new();
            for (t, used) in &out {
                for n in 0..=budget - used {
                    for b in all_profiles(self.o.colors().len(), n) {
                        let elems = match self.entry(ci, &b) {
                            Ok(e) => e.0.clone(),
                            Err(_) => continue,
                        };
                        for y in elems {
                            let mut t2 = t.clone();
                            t2.push((b.clone(), y));
                            next.push((t2, used + n));
                        }
                    }
                }
            }
            out = next;
        }
        out.into_iter().map(|(t, _)| t).collect()
    }

    fn run(&mut self) {
        let colors: Vec<Color> = self.o.colors().colors().collect();
        let ncol = colors.len();
        for &d in &colors {
            for m in 0..=self.bound {
                for c in all_profiles(ncol, m) {
                    let xs = match self.entry(d, &c) {
                        Ok(e) => e.0.clone(),
                        Err(_) => continue,
                    };
                    for x in &xs {
                        self.check_element(d, &c, x);
                    }
                }
            }
        }
    }

    fn check_element(&mut self, d: Color, c: &Profile, x: &Elem) {
        let o = self.o;
        let m = c.len();
        let perms = Perm::all(m);
        // action axioms
        self.attempt(Axiom::ActionIdentity, || show(o, d, c, x), |v| {
            Ok(Some((x.clone(), v.o.act(d, c, x, &Perm::identity(m))?)))
        });
        for s in &perms {
            let xs = match self.o.act(d, c, x, s) {
                Ok(e) => e,
                Err(e) => {
                    self.attempt(Axiom::Closure, || format!("{}·{s}", show(o, d, c, x)), |_| Err(e));
                    continue;
                }
            };
            let cs = c.act(s);
            let member = self.entry(d, &cs).map(|e| e.1.contains(&xs)).unwrap_or(false);
            if !member {
                self.attempt(Axiom::Closure, || format!("{}·{s}", show(o, d, c, x)), |_| {
                    Err(Error::UnknownElement { element: xs.to_string(), entry: format!("{cs:?}") })
                });
            }
            for t in &perms {
                self.attempt(Axiom::ActionComposition, || format!("({}·{s})·{t}", show(o, d, c, x)), |v| {
                    let lhs = v.o.act(d, &cs, &xs, t)?;
                    let rhs = v.o.act(d, c, x, &s.compose(t))?;
                    Ok(Some((rhs, lhs)))
                });
            }
        }
        // units
        let ud = self.o.unit(d);
        self.attempt(Axiom::LeftUnit, || format!("γ(1; {})", show(o, d, c, x)), |v| {
            let r = v.gamma_checked(d, &Profile(vec![d]), &ud, &[(c.clone(), x.clone())])?;
            Ok(Some((x.clone(), r)))
        });
        let units: Inputs = c.colors().iter().map(|&ci| (Profile(vec![ci]), self.o.unit(ci))).collect();
        self.attempt(Axiom::RightUnit, || format!("γ({}; 1,..,1)", show(o, d, c, x)), |v| {
            let r = v.gamma_checked(d, c, x, &units)?;
            Ok(Some((x.clone(), r)))
        });
        if m == 0 {
            return;
        }
        let tuples = self.input_tuples(c, self.bound);
        for ys in &tuples {
            self.check_bottom(d, c, x, ys);
            self.check_associativity(d, c, x, ys);
        }
        for pi in perms.iter().filter(|p| !p.is_identity()) {
            let cp = c.act(pi);
            let Ok(xp) = self.o.act(d, c, x, pi) else { continue };
            for ys in self.input_tuples(&cp, self.bound) {
                self.attempt(Axiom::TopEquivariance, || show_gamma(o, d, &cp, &xp, &ys), |v| {
                    let lhs = v.gamma_checked(d, &cp, &xp, &ys)?;
                    let z = pi.inverse().permute(&ys);
                    let sizes: Vec<usize> = z.iter().map(|(b, _)| b.len()).collect();
                    let inner = v.gamma_checked(d, c, x, &z)?;
                    let parts: Vec<&Profile> = z.iter().map(|(b, _)| b).collect();
                    let rhs = v.o.act(d, &Profile::concat(&parts), &inner, &pi.block_permutation(&sizes))?;
                    Ok(Some((rhs, lhs)))
                });
            }
        }
    }

    fn check_bottom(&mut self, d: Color, c: &Profile, x: &Elem, ys: &Inputs) {
        let o = self.o;
        let mut choices: Vec<Vec<Perm>> = vec![Vec::new()];
        for (b, _) in ys {
            choices = choices
                .into_iter()
                .flat_map(|ch| Perm::all(b.len()).into_iter().map(move |p| [ch.clone(), vec![p]].concat()))
                .collect();
        }
        let base = match self.gamma_checked(d, c, x, ys) {
            Ok(r) => r,
            Err(e) => {
                self.attempt(Axiom::Closure, || show_gamma(o, d, c, x, ys), |_| Err(e));
                return;
            }
        };
        let parts: Vec<&Profile> = ys.iter().map(|(b, _)| b).collect();
        let b = Profile::concat(&parts);
        for taus in choices.iter().filter(|t| t.iter().any(|p| !p.is_identity())) {
            self.attempt(Axiom::BottomEquivariance, || format!("{} under {taus:?}", show_gamma(o, d, c, x, ys)), |v| {
                let moved = ys
                    .iter()
                    .zip(taus)
                    .zip(c.colors())
                    .map(|(((bi, y), t), &ci)| Ok((bi.act(t), v.o.act(ci, bi, y, t)?)))
                    .collect::<Result<Inputs>>()?;
                let lhs = v.gamma_checked(d, c, x, &moved)?;
                let refs: Vec<&Perm> = taus.iter().collect();
                let rhs = v.o.act(d, &b, &base, &Perm::block_sum(&refs))?;
                Ok(Some((rhs, lhs)))
            });
        }
    }

    fn check_associativity(&mut self, d: Color, c: &Profile, x: &Elem, ys: &Inputs) {
        let o = self.o;
        let Ok(xy) = self.o.gamma(d, c, x, ys) else { return };
        let parts: Vec<&Profile> = ys.iter().map(|(b, _)| b).collect();
        let b = Profile::concat(&parts);
        for zs in self.input_tuples(&b, self.bound) {
            self.attempt(Axiom::Associativity, || format!("{} then {:?}", show_gamma(o, d, c, x, ys), zs), |v| {
                let lhs = v.gamma_checked(d, &b, &xy, &zs)?;
                let mut inner = Vec::with_capacity(ys.len());
                let mut off = 0;
                for ((bi, y), &ci) in ys.iter().zip(c.colors()) {
                    let block = &zs[off..off + bi.len()];
                    off += bi.len();
                    let r = v.gamma_checked(ci, bi, y, block)?;
                    let bparts: Vec<&Profile> = block.iter().map(|(p, _)| p).collect();
                    inner.push((Profile::concat(&bparts), r));
                }
                let rhs = v.gamma_checked(d, c, x, &inner)?;
                Ok(Some((rhs, lhs)))
            });
        }
    }
}

/// Checks the action, unit, equivariance and associativity axioms on every
/// instance whose entries all have arity at most `bound`.
pub fn validate_operad(o: &dyn Operad, bound: usize) -> ValidationReport {
    let mut v = Validator { o, bound, entries: HashMap::new(), report: ValidationReport::default() };
    v.run();
    v.report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operad::{assoc, com, trivial, GammaKey};
    use crate::profiles::ColorSet;
    use std::sync::Arc;

    #[test]
    fn presets_are_valid_at_bound_3() {
        for o in [assoc(3), com(3)] {
            let r = validate_operad(&o, 3);
            assert!(r.is_valid(), "{}: {}", o.name, r.violations[0]);
            assert!(r.checked > 0);
        }
        let t = trivial(Arc::new(ColorSet::new(["a", "b"]).unwrap()), 3);
        assert!(validate_operad(&t, 3).is_valid());
    }

    #[test]
    fn corrupted_composite_is_reported() {
        let mut a = assoc(3);
        let star = Color(0);
        let id = |n| Elem::Perm(Perm::identity(n));
        let key = GammaKey {
            d: star,
            c: Profile::uniform(star, 2),
            x: id(2),
            ys: vec![(Profile::uniform(star, 2), id(2)), (Profile::uniform(star, 1), id(1))],
        };
        a.patch(key, Elem::Perm(Perm::from_images(vec![1, 0, 2]).unwrap()));
        let r = validate_operad(&a, 3);
        assert!(!r.is_valid());
        assert!(r.violations.iter().any(|v| v.instance.starts_with("γ([1 2]@*:*,*; [1 2]@*:*,*, [1]@*:*)")), "{:?}", r.violations[0]);
    }
}
