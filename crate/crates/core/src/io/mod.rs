//! Grammar files, canonical JSON and Graphviz output.

pub mod dot;
pub mod grammar;
pub mod json;

pub use grammar::{Diagnostic, Grammar, GrammarError, QueryDoc};
