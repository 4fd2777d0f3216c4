//! The JSON input document and its validated model.
//!
//! ```json
//! {
//!   "colors": ["a", "b"],
//!   "symseq": { "X": [ { "entry": "a:a,b", "elements": ["p", "q"], "action": [[0], [1]] } ] },
//!   "operads": { "A": { "preset": "com", "bound": 4 } },
//!   "maps": { "f": { "operad": "A", "entry": "*:*,*", "generators": ["x", "y"], "images": { "x": "*" } } }
//! }
//! ```
//!
//! Entries are keyed by orbit representatives (inputs in declaration
//! order). An action table has one row per element and one column per
//! stabilizer element, the stabilizer listed in increasing one-line
//! notation; omitting it gives the trivial action.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use colop_core::fincat::{GSet, Perm};
use colop_core::operad::{assoc, com, trivial, GammaImpl, GammaKey, Operad, TableOperad};
use colop_core::pushout::{AttachmentData, Injection};
use colop_core::{ColorSet, Elem, IOPair, Profile, SymSeq};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    #[serde(default = "default_colors")]
    pub colors: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub symseq: BTreeMap<String, Vec<EntryDoc>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub operads: BTreeMap<String, OperadDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub maps: BTreeMap<String, MapDoc>,
}

fn default_colors() -> Vec<String> {
    vec!["*".into()]
}

impl Default for Document {
    fn default() -> Self {
        Document { colors: default_colors(), symseq: BTreeMap::new(), operads: BTreeMap::new(), maps: BTreeMap::new() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryDoc {
    pub entry: String,
    pub elements: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<Vec<Vec<usize>>>,
}

/// Either a preset (`preset`, optional `bound`) or a table over a declared
/// symmetric sequence (`symseq`, `units`, `compose`). A preset without a
/// bound is truncated wherever the command needs. Composites `γ(x; )` of
/// constants default to `x`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperadDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symseq: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub units: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub compose: Vec<ComposeDoc>,
}

/// `γ(x; y_1..y_m) = result·σ`, all at representative entries. `sigma` is
/// 1-based one-line notation and defaults to the transport from the
/// representative to the concatenated input profile.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComposeDoc {
    pub entry: String,
    pub x: String,
    pub ys: Vec<InputDoc>,
    pub result: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDoc {
    pub entry: String,
    pub y: String,
}

/// Generators `Y` attached at `entry` of `operad`; `images` sends the
/// generators in `X ⊆ Y` to elements of that entry, written as displayed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub operad: String,
    pub entry: String,
    pub generators: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub images: BTreeMap<String, String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Preset {
    Assoc,
    Com,
    Trivial,
}

impl Preset {
    pub fn parse(name: &str) -> Option<Preset> {
        match name {
            "assoc" => Some(Preset::Assoc),
            "com" => Some(Preset::Com),
            "trivial" => Some(Preset::Trivial),
            _ => None,
        }
    }

    pub fn build(self, colors: &Arc<ColorSet>, bound: usize) -> TableOperad {
        match self {
            Preset::Assoc => assoc(bound),
            Preset::Com => com(bound),
            Preset::Trivial => trivial(colors.clone(), bound),
        }
    }
}

/// A declared operad. Tables list every non-empty entry, so they are known
/// in all arities and are instantiated at whatever bound a command needs.
#[derive(Clone)]
pub enum OperadDecl {
    Preset { preset: Preset, bound: Option<usize> },
    Table { seq: SymSeq, units: Vec<Elem>, table: Arc<HashMap<GammaKey, Elem>> },
}

impl OperadDecl {
    pub fn instantiate(&self, name: &str, colors: &Arc<ColorSet>, need: usize) -> colop_core::Result<Arc<dyn Operad>> {
        Ok(match self {
            OperadDecl::Preset { preset, bound } => Arc::new(preset.build(colors, bound.unwrap_or(need))),
            OperadDecl::Table { seq, units, table } => {
                let bound = need.max(seq.max_arity());
                Arc::new(TableOperad::new(name, seq.clone(), bound, units.clone(), GammaImpl::Table(table.clone()))?)
            }
        })
    }
}

#[derive(Clone)]
pub struct MapDecl {
    pub operad: String,
    pub s: IOPair,
    pub generators: Vec<String>,
    /// Positions in `generators` of the elements of `X`, in order.
    pub x: Vec<usize>,
    pub images: Vec<Elem>,
}

/// A document with every name resolved and every table checked.
#[derive(Clone)]
pub struct Model {
    pub colors: Arc<ColorSet>,
    pub symseqs: BTreeMap<String, SymSeq>,
    pub operads: BTreeMap<String, OperadDecl>,
    pub maps: BTreeMap<String, MapDecl>,
}

fn at(path: impl Into<String>, e: impl std::fmt::Display) -> CliError {
    CliError::Document { path: path.into(), message: e.to_string() }
}

fn rep_entry(colors: &ColorSet, text: &str, path: &str) -> Result<IOPair> {
    let io = colors.io_pair(text).map_err(|e| at(path, e))?;
    if !io.is_representative() {
        let rep = io.representative();
        return Err(at(path, format!("{text} is not an orbit representative; use {}", colors.show_io(&rep))));
    }
    Ok(io)
}

fn perm_1based(images: &[usize], path: &str) -> Result<Perm> {
    let zero: Vec<usize> = images.iter().map(|&v| v.wrapping_sub(1)).collect();
    Perm::from_images(zero).map_err(|e| at(path, e))
}

impl Document {
    pub fn parse(text: &str) -> Result<Document> {
        serde_json::from_str(text).map_err(CliError::Json)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    pub fn build(&self) -> Result<Model> {
        let colors = Arc::new(ColorSet::new(self.colors.clone()).map_err(|e| at("colors", e))?);
        let mut symseqs = BTreeMap::new();
        for (name, entries) in &self.symseq {
            symseqs.insert(name.clone(), build_symseq(&colors, entries, &format!("symseq.{name}"))?);
        }
        let mut model = Model { colors, symseqs, operads: BTreeMap::new(), maps: BTreeMap::new() };
        for (name, doc) in &self.operads {
            let decl = model.build_operad(name, doc, &format!("operads.{name}"))?;
            model.operads.insert(name.clone(), decl);
        }
        for (name, doc) in &self.maps {
            let decl = model.build_map(doc, &format!("maps.{name}"))?;
            model.maps.insert(name.clone(), decl);
        }
        Ok(model)
    }
}

fn build_symseq(colors: &Arc<ColorSet>, entries: &[EntryDoc], path: &str) -> Result<SymSeq> {
    let mut seq = SymSeq::empty(colors.clone());
    for (i, e) in entries.iter().enumerate() {
        let here = format!("{path}[{i}]");
        let key = rep_entry(colors, &e.entry, &format!("{here}.entry"))?;
        if seq.get(&key).is_some() {
            return Err(at(format!("{here}.entry"), format!("entry {} declared twice", e.entry)));
        }
        let mut names = e.elements.clone();
        names.sort();
        names.dedup();
        if names.len() != e.elements.len() {
            return Err(at(format!("{here}.elements"), "element names must be distinct"));
        }
        let group = key.inputs.stabilizer();
        let elems: Vec<Elem> = e.elements.iter().map(|s| Elem::sym(s)).collect();
        let set = match &e.action {
            None => GSet::trivial(elems, group),
            Some(table) => GSet::from_table(elems, group, table.clone()).map_err(|err| at(format!("{here}.action"), err))?,
        };
        seq.insert(key, set).map_err(|err| at(&here, err))?;
    }
    Ok(seq)
}

impl Model {
    fn build_operad(&self, name: &str, doc: &OperadDoc, path: &str) -> Result<OperadDecl> {
        match (&doc.preset, &doc.symseq) {
            (Some(p), None) => {
                if !doc.units.is_empty() || !doc.compose.is_empty() {
                    return Err(at(path, "a preset takes no units or compose table"));
                }
                let preset = Preset::parse(p).ok_or_else(|| at(format!("{path}.preset"), format!("unknown preset {p:?} (assoc, com, trivial)")))?;
                Ok(OperadDecl::Preset { preset, bound: doc.bound })
            }
            (None, Some(s)) => {
                if doc.bound.is_some() {
                    return Err(at(format!("{path}.bound"), "a table lists every non-empty entry and takes no bound"));
                }
                self.build_table(name, s, doc, path)
            }
            _ => Err(at(path, "give exactly one of `preset` and `symseq`")),
        }
    }

    fn build_table(&self, name: &str, s: &str, doc: &OperadDoc, path: &str) -> Result<OperadDecl> {
        let cs = &self.colors;
        let seq = self.symseqs.get(s).ok_or_else(|| at(format!("{path}.symseq"), format!("no symmetric sequence named {s:?}")))?;
        let mut units = Vec::new();
        for c in cs.colors() {
            let u = doc.units.get(cs.name(c)).ok_or_else(|| at(format!("{path}.units"), format!("no unit for color {}", cs.name(c))))?;
            units.push(Elem::sym(u));
        }
        if let Some(extra) = doc.units.keys().find(|k| cs.color(k).is_none()) {
            return Err(at(format!("{path}.units.{extra}"), format!("undeclared color {extra}")));
        }
        let member = |key: &IOPair, e: &str, p: String| -> Result<Elem> {
            let el = Elem::sym(e);
            if seq.get(key).and_then(|en| en.position(&el)).is_some() {
                Ok(el)
            } else {
                Err(at(p, format!("{e} is not an element of {s}({})", cs.show_io(key))))
            }
        };
        let mut table = HashMap::new();
        for (i, g) in doc.compose.iter().enumerate() {
            let here = format!("{path}.compose[{i}]");
            let top = rep_entry(cs, &g.entry, &format!("{here}.entry"))?;
            let x = member(&top, &g.x, format!("{here}.x"))?;
            if g.ys.len() != top.arity() {
                return Err(at(format!("{here}.ys"), format!("{} inputs for an arity-{} element", g.ys.len(), top.arity())));
            }
            let mut ys = Vec::new();
            for (j, (inp, &cj)) in g.ys.iter().zip(top.inputs.colors()).enumerate() {
                let p = format!("{here}.ys[{j}]");
                let key = rep_entry(cs, &inp.entry, &format!("{p}.entry"))?;
                if key.output != cj {
                    return Err(at(format!("{p}.entry"), format!("input {j} has color {}, not {}", cs.name(cj), cs.name(key.output))));
                }
                ys.push((key.inputs.clone(), member(&key, &inp.y, format!("{p}.y"))?));
            }
            let parts: Vec<&Profile> = ys.iter().map(|(b, _)| b).collect();
            let target = Profile::concat(&parts);
            let rep = IOPair::new(top.output, target.representative());
            let r = member(&rep, &g.result, format!("{here}.result"))?;
            let sigma = match &g.sigma {
                Some(v) => perm_1based(v, &format!("{here}.sigma"))?,
                None => target.transport(),
            };
            if rep.inputs.act(&sigma) != target {
                return Err(at(format!("{here}.sigma"), format!("σ does not carry {} to {}", cs.show_profile(&rep.inputs), cs.show_profile(&target))));
            }
            let value = seq.act_at(rep.output, &rep.inputs, &r, &sigma).map_err(|e| at(&here, e))?;
            let key = GammaKey { d: top.output, c: top.inputs.clone(), x, ys };
            if table.insert(key, value).is_some() {
                return Err(at(here, "composite declared twice"));
            }
        }
        // γ(x; ) = x for constants
        for (key, entry) in seq.entries().filter(|(k, _)| k.arity() == 0) {
            for x in entry.set().elements() {
                let k = GammaKey { d: key.output, c: Profile::empty(), x: x.clone(), ys: vec![] };
                table.entry(k).or_insert_with(|| x.clone());
            }
        }
        let decl = OperadDecl::Table { seq: seq.clone(), units, table: Arc::new(table) };
        decl.instantiate(name, cs, 1).map_err(|e| at(path, e))?;
        Ok(decl)
    }

    /// The colors an operad lives over, without building large tables.
    fn operad_colors(&self, name: &str) -> Option<Arc<ColorSet>> {
        match self.operads.get(name)? {
            OperadDecl::Preset { preset: Preset::Trivial, .. } => Some(self.colors.clone()),
            OperadDecl::Preset { .. } => Some(Arc::new(ColorSet::single())),
            OperadDecl::Table { seq, .. } => Some(seq.colors().clone()),
        }
    }

    fn build_map(&self, doc: &MapDoc, path: &str) -> Result<MapDecl> {
        let cs = self
            .operad_colors(&doc.operad)
            .ok_or_else(|| at(format!("{path}.operad"), format!("no operad named {:?}", doc.operad)))?;
        let s = rep_entry(&cs, &doc.entry, &format!("{path}.entry"))?;
        let mut x = Vec::new();
        let mut images = Vec::new();
        if doc.images.is_empty() && doc.generators.is_empty() {
            return Err(at(format!("{path}.generators"), "at least one generator is required"));
        }
        let ambient = self.operad(&doc.operad, s.arity()).map_err(|e| at(path, e))?;
        let entry = ambient.entry(s.output, &s.inputs).map_err(|e| at(format!("{path}.entry"), e))?;
        for (g, shown) in &doc.images {
            let p = format!("{path}.images.{g}");
            let k = doc.generators.iter().position(|n| n == g).ok_or_else(|| at(&p, format!("{g} is not a generator")))?;
            let e = entry
                .iter()
                .find(|e| e.to_string() == *shown)
                .ok_or_else(|| at(&p, format!("{shown} is not an element of {}({})", doc.operad, cs.show_io(&s))))?;
            x.push(k);
            images.push(e.clone());
        }
        let decl = MapDecl { operad: doc.operad.clone(), s, generators: doc.generators.clone(), x, images };
        decl.attachment(ambient).map_err(|e| at(path, e))?;
        Ok(decl)
    }

    /// The named operad, known to arity `need` unless a preset declares its
    /// own bound.
    pub fn operad(&self, name: &str, need: usize) -> Result<Arc<dyn Operad>> {
        match self.operads.get(name) {
            Some(decl) => Ok(decl.instantiate(name, &self.colors, need)?),
            None => match Preset::parse(name) {
                Some(p) => Ok(Arc::new(p.build(&self.colors, need))),
                None => Err(CliError::Unknown { kind: "operad", name: name.into() }),
            },
        }
    }

    /// A symmetric sequence by name; `I` is the unit.
    pub fn symseq(&self, name: &str) -> Result<SymSeq> {
        if name == "I" && !self.symseqs.contains_key("I") {
            return Ok(SymSeq::unit(self.colors.clone()));
        }
        self.symseqs.get(name).cloned().ok_or_else(|| CliError::Unknown { kind: "symmetric sequence", name: name.into() })
    }

    pub fn map(&self, name: &str) -> Result<&MapDecl> {
        self.maps.get(name).ok_or_else(|| CliError::Unknown { kind: "map", name: name.into() })
    }
}

impl MapDecl {
    pub fn attachment(&self, ambient: Arc<dyn Operad>) -> colop_core::Result<AttachmentData> {
        let i = Injection::new(self.generators.len(), self.x.clone())?;
        AttachmentData::new(ambient, self.s.clone(), self.generators.clone(), i, self.images.clone())
    }
}
