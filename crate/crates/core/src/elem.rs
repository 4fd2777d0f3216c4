use std::fmt;
use std::sync::Arc;

use crate::fincat::Perm;
use crate::trees::Node;

/// An element label of a finite set.
///
/// Labels are plain data ordered structurally; every construction in the
/// crate produces canonical labels so that equal elements compare equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Int(i64),
    Sym(Arc<str>),
    Perm(Perm),
    Tuple(Arc<[Elem]>),
    /// A canonical labeled tree.
    Tree(Arc<Node>),
    /// An element `x·τ` of an entry that is not stored at the orbit
    /// representative, written with the canonical transport `τ`.
    Moved(Arc<(Elem, Perm)>),
}

impl Elem {
    pub fn sym(s: &str) -> Elem {
        Elem::Sym(Arc::from(s))
    }

    pub fn tuple(items: Vec<Elem>) -> Elem {
        Elem::Tuple(Arc::from(items))
    }

    pub fn unit() -> Elem {
        Elem::Tuple(Arc::from(Vec::new()))
    }

    pub fn as_tuple(&self) -> Option<&[Elem]> {
        match self {
            Elem::Tuple(t) => Some(t),
            _ => None,
        }
    }

    pub fn as_perm(&self) -> Option<&Perm> {
        match self {
            Elem::Perm(p) => Some(p),
            _ => None,
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Elem::Int(i) => Some(*i),
            _ => None,
        }
    }

    pub fn as_tree(&self) -> Option<&Arc<Node>> {
        match self {
            Elem::Tree(t) => Some(t),
            _ => None,
        }
    }
}

impl From<i64> for Elem {
    fn from(v: i64) -> Self {
        Elem::Int(v)
    }
}

impl From<&str> for Elem {
    fn from(v: &str) -> Self {
        Elem::sym(v)
    }
}

impl From<Perm> for Elem {
    fn from(p: Perm) -> Self {
        Elem::Perm(p)
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Int(i) => write!(f, "{i}"),
            Elem::Sym(s) => write!(f, "{s}"),
            Elem::Perm(p) => write!(f, "{p}"),
            Elem::Tuple(items) => {
                write!(f, "(")?;
                for (i, x) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
            Elem::Tree(t) => write!(f, "{}", t.code(None)),
            Elem::Moved(m) => write!(f, "{}·{}", m.0, m.1),
        }
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
