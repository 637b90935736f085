//! Rule application, rule composition, concurrency and independence.

pub mod composition;
pub mod concurrency;
pub mod derivation;
pub mod independence;

pub use composition::{candidate_overlaps, compose, compose_rules, enumerate_compositions, enumerate_rule_matches, Composition};
pub use concurrency::{concurrency_analysis, concurrency_synthesis, Synthesis};
pub use derivation::{
    admissible_structure, apply, apply_dagger, apply_rule, find_matches, DirectDerivation, Kind, RewriteError, RuleWithConditions,
};
pub use independence::{compositional_independence, conditions_agree, sequentially_independent, switch_match, Switch};
