//! Command results. The text and JSON renderings carry the same content.

use std::fmt;

use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Report {
    Validate(ValidateReport),
    Circle(CircleReport),
    Free(FreeReport),
    Pushout(PushoutReport),
    Dwyer(DwyerReport),
    Trees(TreesReport),
}

impl Report {
    /// True when the command found what it was checking for to be false.
    pub fn failed(&self) -> bool {
        match self {
            Report::Validate(r) => !r.violations.is_empty(),
            Report::Pushout(r) => r.oracle.as_ref().is_some_and(|o| !o.agrees),
            Report::Dwyer(r) => r.rows.iter().any(|row| row.contribution != row.orbits),
            _ => false,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ViolationLine {
    pub axiom: String,
    pub instance: String,
    pub expected: String,
    pub found: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidateReport {
    pub operad: String,
    pub bound: usize,
    pub checked: usize,
    pub skipped: usize,
    pub violations: Vec<ViolationLine>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SizeLine {
    pub entry: String,
    pub size: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CircleReport {
    pub x: String,
    pub y: String,
    pub entries: Vec<SizeLine>,
    pub total: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct FreeReport {
    pub x: String,
    pub entry: String,
    pub max_vertices: usize,
    pub complete: bool,
    pub elements: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TreeLine {
    pub tree: String,
    pub aut: usize,
    pub decorations: usize,
    pub attached: usize,
    pub added: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct StageLine {
    pub stage: usize,
    pub added: usize,
    pub cumulative: usize,
    pub complete: bool,
    pub trees: Vec<TreeLine>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleLine {
    pub size_bound: usize,
    pub certified: usize,
    pub cumulative: Vec<usize>,
    pub agrees: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PushoutReport {
    pub map: String,
    pub entry: String,
    pub max_vertices: usize,
    pub stages: Vec<StageLine>,
    pub oracle: Option<OracleLine>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DwyerLine {
    pub j: usize,
    pub contribution: usize,
    pub orbits: usize,
    pub cumulative: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct DwyerReport {
    pub operad: String,
    pub rows: Vec<DwyerLine>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AutLine {
    pub tree: String,
    pub aut: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct TreesReport {
    pub colors: usize,
    pub max_vertices: usize,
    pub max_arity: usize,
    pub trees: Vec<AutLine>,
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "complete"
    } else {
        "truncated"
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Report::Validate(r) => {
                writeln!(f, "operad {} bound {}: {} instances checked, {} skipped", r.operad, r.bound, r.checked, r.skipped)?;
                for v in &r.violations {
                    writeln!(f, "{}: {} expected {} found {}", v.axiom, v.instance, v.expected, v.found)?;
                }
                writeln!(f, "{} violations", r.violations.len())
            }
            Report::Circle(r) => {
                writeln!(f, "{} ∘ {}", r.x, r.y)?;
                for e in &r.entries {
                    writeln!(f, "{}\t{}", e.entry, e.size)?;
                }
                writeln!(f, "total {}", r.total)
            }
            Report::Free(r) => {
                writeln!(f, "free {} at {}, ≤ {} vertices: {} elements, {}", r.x, r.entry, r.max_vertices, r.elements.len(), yes_no(r.complete))?;
                r.elements.iter().try_for_each(|e| writeln!(f, "{e}"))
            }
            Report::Pushout(r) => {
                writeln!(f, "pushout along {} at {}, ≤ {} vertices", r.map, r.entry, r.max_vertices)?;
                for s in &r.stages {
                    writeln!(f, "stage {} entry {}: added {}, cumulative {}, {}", s.stage, r.entry, s.added, s.cumulative, yes_no(s.complete))?;
                    for t in &s.trees {
                        writeln!(f, "  {}\t|Aut| {}\tdecorations {}\tattached {}\tadded {}", t.tree, t.aut, t.decorations, t.attached, t.added)?;
                    }
                }
                if let Some(o) = &r.oracle {
                    let sizes: Vec<String> = o.cumulative.iter().map(usize::to_string).collect();
                    let verdict = if o.agrees { "agrees" } else { "DISAGREES" };
                    writeln!(f, "oracle ≤ {} vertices certifies {} stages: [{}] {verdict}", o.size_bound, o.certified, sizes.join(", "))?;
                }
                Ok(())
            }
            Report::Dwyer(r) => {
                writeln!(f, "free constant on {}", r.operad)?;
                for row in &r.rows {
                    writeln!(f, "stage {}: contribution {}, orbits {}, cumulative {}", row.j, row.contribution, row.orbits, row.cumulative)?;
                }
                Ok(())
            }
            Report::Trees(r) => r.trees.iter().try_for_each(|t| writeln!(f, "{}\t{}", t.tree, t.aut)),
        }
    }
}
