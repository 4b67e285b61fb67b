//! The chapters of `book/src` as doc comments, one module per chapter, so
//! `cargo test` runs every Rust snippet in the guide.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/lexicon.md")]
pub mod lexicon {}
#[doc = include_str!("../../../book/src/induction.md")]
pub mod induction {}
#[doc = include_str!("../../../book/src/scoring.md")]
pub mod scoring {}
#[doc = include_str!("../../../book/src/cascade.md")]
pub mod cascade {}
#[doc = include_str!("../../../book/src/evaluation.md")]
pub mod evaluation {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
