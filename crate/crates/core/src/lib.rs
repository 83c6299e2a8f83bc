//! `dbgen` turns an annotated inductive definition into De Bruijn binding
//! infrastructure written as proof-assistant vernacular: the nameless and
//! named syntax, lifting and substitution functions, translation, lemma
//! statements and tactics.
//!
//! The pipeline is [`frontend::parse_source`] → [`validate::validate_grammar`]
//! → [`analysis::plan_functions`] → [`emit::emit_module`]. The [`term`] module
//! interprets the generated functions on concrete terms and checks the binding
//! laws they are expected to satisfy.

pub mod analysis;
pub mod cli;
pub mod emit;
pub mod frontend;
pub mod grammar;
pub mod term;
pub mod validate;

pub use analysis::{plan_functions, FunctionPlan};
pub use frontend::parse_source;
pub use grammar::SourceGrammar;
pub use validate::{validate_grammar, ValidGrammar};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
