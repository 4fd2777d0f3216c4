pub mod circle;
pub mod extension;
pub mod trees;
pub mod validate;
