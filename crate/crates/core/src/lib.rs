pub mod circle;
pub mod elem;
pub mod error;
pub mod fincat;
pub mod operad;
pub mod profiles;
pub mod pushout;
pub mod symseq;
pub mod trees;

pub use elem::Elem;
pub use error::{Error, Result};
pub use profiles::{Color, ColorSet, IOPair, Profile};
pub use symseq::SymSeq;
