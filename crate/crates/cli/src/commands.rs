use std::sync::Arc;

use colop_core::circle::{Circle, DEFAULT_CAP};
use colop_core::operad::{free_operad, validate_operad, Operad};
use colop_core::pushout::{dwyer_plus, free_extension, oracle_pushout};
use colop_core::trees::{automorphism_group, enumerate_marked};

use crate::document::{Model, Preset};
use crate::error::{CliError, Result};
use crate::report::*;

pub fn validate(model: &Model, operad: &str, bound: usize) -> Result<Report> {
    let o = model.operad(operad, bound)?;
    let r = validate_operad(o.as_ref(), bound);
    let violations = r
        .violations
        .iter()
        .map(|v| ViolationLine { axiom: v.axiom.to_string(), instance: v.instance.clone(), expected: v.expected.clone(), found: v.found.clone() })
        .collect();
    Ok(Report::Validate(ValidateReport { operad: operad.into(), bound, checked: r.checked, skipped: r.skipped, violations }))
}

pub fn circle(model: &Model, x: &str, y: &str, max_arity: Option<usize>) -> Result<Report> {
    let (xs, ys) = (model.symseq(x)?, model.symseq(y)?);
    let c = Circle::new(&xs, &ys, max_arity, DEFAULT_CAP)?;
    let cs = xs.colors();
    let entries: Vec<SizeLine> = c.seq.entries().map(|(k, e)| SizeLine { entry: cs.show_io(k), size: e.len() }).collect();
    Ok(Report::Circle(CircleReport { x: x.into(), y: y.into(), total: c.seq.total_size(), entries }))
}

pub fn free(model: &Model, x: &str, entry: &str, max_vertices: usize) -> Result<Report> {
    let xs = model.symseq(x)?;
    let io = xs.colors().io_pair(entry)?;
    let r = free_operad(&xs, &io, max_vertices)?;
    Ok(Report::Free(FreeReport {
        x: x.into(),
        entry: entry.into(),
        max_vertices,
        complete: r.complete,
        elements: r.elements.iter().map(ToString::to_string).collect(),
    }))
}

pub struct PushoutArgs<'a> {
    pub map: &'a str,
    pub entry: &'a str,
    pub stages: usize,
    pub max_vertices: usize,
    /// Size bound for the congruence-closure cross-check, if wanted.
    pub oracle: Option<usize>,
}

pub fn pushout(model: &Model, a: &PushoutArgs) -> Result<Report> {
    let decl = model.map(a.map)?;
    let probe = model.operad(&decl.operad, 1)?;
    let r = probe.colors().io_pair(a.entry)?;
    if !r.is_representative() {
        return Err(CliError::Usage(format!("--entry {} is not an orbit representative", a.entry)));
    }
    // normal vertices reach arity |r| + stages, oracle terms |r| + bound - 1
    let need = (r.arity() + a.stages).max(decl.s.arity()).max(a.oracle.map_or(0, |b| r.arity() + b.saturating_sub(1)));
    let data = decl.attachment(model.operad(&decl.operad, need)?)?;
    let stages = free_extension(&data, &r, a.stages, a.max_vertices)?;
    let cs = data.ambient.colors().clone();
    let lines = stages
        .iter()
        .map(|s| StageLine {
            stage: s.k,
            added: s.added,
            cumulative: s.size(),
            complete: s.complete,
            trees: s
                .contributions
                .iter()
                .map(|t| TreeLine { tree: t.shape.code(Some(&cs)), aut: t.aut_order, decorations: t.decorations, attached: t.attached, added: t.added })
                .collect(),
        })
        .collect();
    let oracle = match a.oracle {
        None => None,
        Some(bound) => {
            let o = oracle_pushout(&data, &r, bound)?;
            let upto = o.certified.min(a.stages);
            let cumulative: Vec<usize> = (0..=upto).map(|k| o.cumulative(k)).collect();
            let agrees = cumulative.iter().zip(&stages).all(|(&n, s)| n == s.size());
            Some(OracleLine { size_bound: bound, certified: o.certified, cumulative, agrees })
        }
    };
    Ok(Report::Pushout(PushoutReport { map: a.map.into(), entry: cs.show_io(&r), max_vertices: a.max_vertices, stages: lines, oracle }))
}

pub fn dwyer(model: &Model, preset: Option<Preset>, operad: Option<&str>, max_j: usize) -> Result<Report> {
    let (name, o): (String, Arc<dyn Operad>) = match (preset, operad) {
        (Some(p), None) => {
            let name = format!("{p:?}").to_lowercase();
            (name, Arc::new(p.build(&model.colors, max_j)))
        }
        (None, Some(n)) => (n.to_string(), model.operad(n, max_j)?),
        _ => return Err(CliError::Usage("give exactly one of --preset and --operad".into())),
    };
    let rows = dwyer_plus(o, max_j)?
        .into_iter()
        .map(|r| DwyerLine { j: r.j, contribution: r.contribution, orbits: r.orbits, cumulative: r.cumulative })
        .collect();
    Ok(Report::Dwyer(DwyerReport { operad: name, rows }))
}

pub fn trees(colors: usize, max_vertices: usize, max_arity: usize) -> Result<Report> {
    if colors == 0 || colors > u8::MAX as usize {
        return Err(CliError::Usage(format!("--colors must be between 1 and {}", u8::MAX)));
    }
    let trees = enumerate_marked(colors, max_vertices, max_arity)
        .into_iter()
        .map(|t| AutLine { tree: t.code(None), aut: automorphism_group(&t).order() })
        .collect();
    Ok(Report::Trees(TreesReport { colors, max_vertices, max_arity, trees }))
}
