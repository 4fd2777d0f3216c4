use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("not a permutation: {0:?}")]
    InvalidPermutation(Vec<usize>),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("not a homomorphism: f({a}·{b}) ≠ f({a})·f({b})")]
    NotAHomomorphism { a: String, b: String },
    #[error("not a group action: {0}")]
    NotAnAction(String),
    #[error("undeclared color at index {index}: {name}")]
    UndeclaredColor { index: usize, name: String },
    #[error("profile mismatch at input {index}: {detail}")]
    ProfileMismatch { index: usize, detail: String },
    #[error("color mismatch when grafting: leaf has color {leaf}, tree outputs {root}")]
    GraftColorMismatch { leaf: String, root: String },
    #[error("element {element} is not in entry {entry}")]
    UnknownElement { element: String, entry: String },
    #[error("outside the computed truncation: {0}")]
    OutOfBounds(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("size cap exceeded: {0}")]
    SizeCap(String),
}
