pub mod colimits;
pub mod condition;
pub mod diagram;
pub mod feta;
pub mod graph;
pub mod io;
pub mod matching;
pub mod morphism;
pub mod rewriting;
pub mod rule;
pub mod sample;
pub mod tracelet;
