//! Colored operads over finite sets: the common interface, table-backed
//! operads and presets, axiom validation, free operads, the operad of
//! colored trees, endomorphism operads and algebras.

mod endo;
mod free;
mod presets;
mod validate;

pub use endo::{check_algebra, endomorphism, AlgebraAxiom, AlgebraReport, AlgebraViolation, ColoredFinSet, Function, Structure, ENDO_CAP};
pub use free::{free_operad, opc_entry, FreeOperadEntry};
pub use presets::{assoc, com, commutative_monoid, perm, random_operad, trivial, Monoid};
pub use validate::{validate_operad, Axiom, ValidationReport, Violation};

use std::collections::HashMap;
use std::sync::Arc;

use crate::elem::Elem;
use crate::error::{Error, Result};
use crate::fincat::Perm;
use crate::profiles::{Color, ColorSet, IOPair, Profile};
use crate::symseq::SymSeq;

/// An operad given by its entries, units, symmetric action and composition.
///
/// Entries may be available only up to an arity bound; operations beyond it
/// fail with [`Error::OutOfBounds`].
pub trait Operad: Send + Sync {
    fn colors(&self) -> &Arc<ColorSet>;

    /// Largest arity whose entries are known, if bounded.
    fn arity_bound(&self) -> Option<usize>;

    /// Elements of `O(d; c)` at an arbitrary profile.
    fn entry(&self, d: Color, c: &Profile) -> Result<Vec<Elem>>;

    fn unit(&self, c: Color) -> Elem;

    /// `x·σ ∈ O(d; c·σ)`.
    fn act(&self, d: Color, c: &Profile, x: &Elem, sigma: &Perm) -> Result<Elem>;

    /// `γ(x; y_1..y_m)` with `x ∈ O(d; c)` and `y_i ∈ O(c_i; b_i)`, given as
    /// `(b_i, y_i)`. The result lies in `O(d; b_1 ⊕ .. ⊕ b_m)`.
    fn gamma(&self, d: Color, c: &Profile, x: &Elem, ys: &[(Profile, Elem)]) -> Result<Elem>;

    /// Partial composition `x ∘_i y`.
    fn compose_at(&self, d: Color, c: &Profile, x: &Elem, i: usize, b: &Profile, y: &Elem) -> Result<Elem> {
        if i >= c.len() {
            return Err(Error::OutOfBounds(format!("input {i} of an arity-{} element", c.len())));
        }
        let ys: Vec<(Profile, Elem)> = c
            .colors()
            .iter()
            .enumerate()
            .map(|(j, &cj)| if j == i { (b.clone(), y.clone()) } else { (Profile(vec![cj]), self.unit(cj)) })
            .collect();
        self.gamma(d, c, x, &ys)
    }
}

/// Arguments to a composition rule.
pub struct GammaArgs<'a> {
    pub d: Color,
    pub c: &'a Profile,
    pub x: &'a Elem,
    pub ys: &'a [(Profile, Elem)],
}

pub type GammaRule = Arc<dyn Fn(&GammaArgs) -> Result<Elem> + Send + Sync>;

/// How a table operad composes.
#[derive(Clone)]
pub enum GammaImpl {
    /// A rule valid at every profile.
    Direct(GammaRule),
    /// A rule or table valid when `x` and every `y_i` sit at orbit
    /// representatives; other instances are reduced to it by equivariance.
    Normalized(GammaRule),
    /// Explicit values at representative instances.
    Table(Arc<HashMap<GammaKey, Elem>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GammaKey {
    pub d: Color,
    pub c: Profile,
    pub x: Elem,
    pub ys: Vec<(Profile, Elem)>,
}

/// An operad with finite tables up to an arity bound.
#[derive(Clone)]
pub struct TableOperad {
    pub name: String,
    seq: SymSeq,
    bound: usize,
    units: Vec<Elem>,
    gamma: GammaImpl,
    patches: HashMap<GammaKey, Elem>,
}

impl TableOperad {
    pub fn new(name: impl Into<String>, seq: SymSeq, bound: usize, units: Vec<Elem>, gamma: GammaImpl) -> Result<Self> {
        let colors = seq.colors().clone();
        if units.len() != colors.len() {
            return Err(Error::Invalid("one unit per color is required".into()));
        }
        for (c, u) in colors.colors().zip(&units) {
            let key = IOPair::new(c, Profile(vec![c]));
            let ok = seq.get(&key).and_then(|e| e.position(u)).is_some();
            if !ok {
                return Err(Error::UnknownElement { element: u.to_string(), entry: colors.show_io(&key) });
            }
        }
        if seq.max_arity() > bound {
            return Err(Error::OutOfBounds(format!("entries above the declared bound {bound}")));
        }
        Ok(TableOperad { name: name.into(), seq, bound, units, gamma, patches: HashMap::new() })
    }

    pub fn seq(&self) -> &SymSeq {
        &self.seq
    }

    /// Overrides one composition instance, e.g. to inject a fault.
    pub fn patch(&mut self, key: GammaKey, value: Elem) {
        self.patches.insert(key, value);
    }

    fn check_member(&self, d: Color, c: &Profile, x: &Elem) -> Result<()> {
        let key = IOPair::new(d, c.representative());
        let x0 = match x {
            Elem::Moved(m) if !c.is_representative() => &m.0,
            _ => x,
        };
        let found = self.seq.get(&key).and_then(|e| e.position(x0)).is_some();
        let canonical = c.is_representative() == !matches!(x, Elem::Moved(_));
        if found && canonical {
            Ok(())
        } else {
            Err(Error::UnknownElement { element: x.to_string(), entry: self.colors().show_io(&IOPair::new(d, c.clone())) })
        }
    }

    /// Splits a label at an arbitrary profile into `(label at rep, τ)`.
    fn split(x: &Elem, c: &Profile) -> (Elem, Perm) {
        match x {
            Elem::Moved(m) => (m.0.clone(), m.1.clone()),
            _ => (x.clone(), Perm::identity(c.len())),
        }
    }

    fn normalized(&self, rule: &dyn Fn(&GammaArgs) -> Result<Elem>, d: Color, c: &Profile, x: &Elem, ys: &[(Profile, Elem)]) -> Result<Elem> {
        // γ(x0·τ; y) = γ(x0; z)·τ_block with z_j = y_{τ⁻¹(j)}
        let (x0, tau) = Self::split(x, c);
        let c0 = c.representative();
        let z = tau.inverse().permute(ys);
        let sizes: Vec<usize> = z.iter().map(|(b, _)| b.len()).collect();
        let tau_block = tau.block_permutation(&sizes);
        // z_j = z0_j·ρ_j
        let mut z0 = Vec::with_capacity(z.len());
        let mut rhos = Vec::with_capacity(z.len());
        for (b, y) in &z {
            let (y0, rho) = Self::split(y, b);
            z0.push((b.representative(), y0));
            rhos.push(rho);
        }
        let base = rule(&GammaArgs { d, c: &c0, x: &x0, ys: &z0 })?;
        let refs: Vec<&Perm> = rhos.iter().collect();
        let total = Perm::block_sum(&refs).compose(&tau_block);
        let parts: Vec<&Profile> = z0.iter().map(|(b, _)| b).collect();
        let at = Profile::concat(&parts);
        if total.is_identity() {
            return Ok(base);
        }
        self.act(d, &at, &base, &total)
    }
}

impl Operad for TableOperad {
    fn colors(&self) -> &Arc<ColorSet> {
        self.seq.colors()
    }

    fn arity_bound(&self) -> Option<usize> {
        Some(self.bound)
    }

    fn entry(&self, d: Color, c: &Profile) -> Result<Vec<Elem>> {
        if c.len() > self.bound {
            return Err(Error::OutOfBounds(format!("arity {} above bound {}", c.len(), self.bound)));
        }
        Ok(self.seq.entry(d, c))
    }

    fn unit(&self, c: Color) -> Elem {
        self.units[c.0 as usize].clone()
    }

    fn act(&self, d: Color, c: &Profile, x: &Elem, sigma: &Perm) -> Result<Elem> {
        if sigma.degree() != c.len() {
            return Err(Error::DegreeMismatch { expected: c.len(), found: sigma.degree() });
        }
        self.seq.act_at(d, c, x, sigma)
    }

    fn gamma(&self, d: Color, c: &Profile, x: &Elem, ys: &[(Profile, Elem)]) -> Result<Elem> {
        if ys.len() != c.len() {
            return Err(Error::ProfileMismatch {
                index: ys.len().min(c.len()),
                detail: format!("{} inputs supplied to an arity-{} element", ys.len(), c.len()),
            });
        }
        let total: usize = ys.iter().map(|(b, _)| b.len()).sum();
        if total > self.bound || c.len() > self.bound {
            return Err(Error::OutOfBounds(format!("composite of arity {total} above bound {}", self.bound)));
        }
        self.check_member(d, c, x)?;
        for (i, ((b, y), &ci)) in ys.iter().zip(c.colors()).enumerate() {
            self.check_member(ci, b, y).map_err(|_| Error::ProfileMismatch {
                index: i,
                detail: format!("{y} is not in {}", self.colors().show_io(&IOPair::new(ci, b.clone()))),
            })?;
        }
        if !self.patches.is_empty() {
            let key = GammaKey { d, c: c.clone(), x: x.clone(), ys: ys.to_vec() };
            if let Some(v) = self.patches.get(&key) {
                return Ok(v.clone());
            }
        }
        match &self.gamma {
            GammaImpl::Direct(rule) => rule(&GammaArgs { d, c, x, ys }),
            GammaImpl::Normalized(rule) => self.normalized(rule.as_ref(), d, c, x, ys),
            GammaImpl::Table(table) => {
                let lookup = |a: &GammaArgs| -> Result<Elem> {
                    let key = GammaKey { d: a.d, c: a.c.clone(), x: a.x.clone(), ys: a.ys.to_vec() };
                    table.get(&key).cloned().ok_or_else(|| Error::Invalid(format!("no composition table entry for {key:?}")))
                };
                self.normalized(&lookup, d, c, x, ys)
            }
        }
    }
}

/// Every profile of length `n` over `colors` colors, lexicographically.
pub fn all_profiles(colors: usize, n: usize) -> Vec<Profile> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p: Vec<Color>| {
                (0..colors).map(move |c| {
                    let mut q = p.clone();
                    q.push(Color(c as u8));
                    q
                })
            })
            .collect();
    }
    out.into_iter().map(Profile).collect()
}

/// The underlying symmetric sequence, up to `max_arity`.
pub fn underlying(o: &dyn Operad, max_arity: usize) -> Result<SymSeq> {
    let colors = o.colors().clone();
    let mut s = SymSeq::empty(colors.clone());
    for d in colors.colors() {
        for n in 0..=max_arity {
            for p in all_profiles(colors.len(), n).into_iter().filter(Profile::is_representative) {
                let elems = o.entry(d, &p)?;
                if elems.is_empty() {
                    continue;
                }
                let group = p.stabilizer();
                let index: HashMap<&Elem, usize> = elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
                let mut table = Vec::with_capacity(elems.len());
                for x in &elems {
                    let row = group
                        .elements()
                        .iter()
                        .map(|g| {
                            let y = o.act(d, &p, x, g)?;
                            index.get(&y).copied().ok_or_else(|| Error::NotAnAction(format!("{x}·{g} left the entry")))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    table.push(row);
                }
                s.insert(IOPair::new(d, p), crate::fincat::GSet::from_table(elems, group, table)?)?;
            }
        }
    }
    Ok(s)
}
