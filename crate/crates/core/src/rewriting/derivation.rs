//! Direct derivations of DPO, SqPO and reversed-DPO type.

use std::fmt;

use thiserror::Error;

use crate::colimits::{final_pullback_complement, has_pushout_complement, pushout, pushout_complement};
use crate::condition::{Condition, ConditionError};
use crate::graph::GraphRef;
use crate::matching::HomSearch;
use crate::morphism::{same_graph, Morphism};
use crate::rule::Rule;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Dpo,
    SqPo,
    /// Double pushout read backwards: the comatch is given, the match derived.
    DpoDagger,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Dpo => "dpo",
            Kind::SqPo => "sqpo",
            Kind::DpoDagger => "dpo-dagger",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("match is not injective")]
    NotMono,
    #[error("match does not start at the rule's {0} graph")]
    WrongDomain(&'static str),
    #[error("no pushout-complement: deleting the matched elements would leave dangling edges")]
    NoPushoutComplement,
    #[error("match violates the rule's application condition")]
    ConditionViolated,
    #[error("{0} derivations cannot be started from a match")]
    UnsupportedKind(Kind),
    #[error("derivations are not chained: the first result is not the second start graph")]
    NotChained,
    #[error("overlap is not admissible: {0}")]
    InadmissibleOverlap(&'static str),
    #[error(transparent)]
    Condition(#[from] ConditionError),
}

/// A linear rule paired with a condition over its input.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RuleWithConditions {
    rule: Rule,
    cond: Condition,
}

impl RuleWithConditions {
    pub fn new(rule: Rule, cond: Condition) -> Result<Self, ConditionError> {
        if !same_graph(rule.input(), cond.root()) {
            return Err(ConditionError::RootMismatch);
        }
        Ok(RuleWithConditions { rule, cond })
    }

    pub fn unconditional(rule: Rule) -> Self {
        let cond = Condition::always(rule.input());
        RuleWithConditions { rule, cond }
    }

    pub fn rule(&self) -> &Rule {
        &self.rule
    }

    pub fn cond(&self) -> &Condition {
        &self.cond
    }

    pub fn input(&self) -> &GraphRef {
        self.rule.input()
    }

    pub fn output(&self) -> &GraphRef {
        self.rule.output()
    }
}

impl From<Rule> for RuleWithConditions {
    fn from(rule: Rule) -> Self {
        RuleWithConditions::unconditional(rule)
    }
}

/// The diagram `O -> Y <- X̄ -> X <- I` over `O <- K -> I`.
///
/// `interior: K -> X̄`, `into_input: X̄ -> X`, `into_output: X̄ -> Y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectDerivation {
    pub kind: Kind,
    pub rule: Rule,
    pub matching: Morphism,
    pub comatch: Morphism,
    pub interior: Morphism,
    pub into_input: Morphism,
    pub into_output: Morphism,
}

impl DirectDerivation {
    /// The graph being rewritten.
    pub fn start(&self) -> &GraphRef {
        self.matching.cod()
    }

    /// The rewritten graph.
    pub fn result(&self) -> &GraphRef {
        self.comatch.cod()
    }

    /// The bottom row `Y <- X̄ -> X` as a rule.
    pub fn as_rule(&self) -> Rule {
        Rule::new(self.into_output.clone(), self.into_input.clone()).expect("derivation legs are mono")
    }

    /// Checks that both squares commute.
    pub fn commutes(&self) -> bool {
        let left = self.rule.i().then(&self.matching).ok() == self.interior.then(&self.into_input).ok();
        let right = self.rule.o().then(&self.comatch).ok() == self.interior.then(&self.into_output).ok();
        left && right
    }
}

/// Whether `m: I -> X` is admissible for the rule alone (no condition).
pub fn admissible_structure(rule: &Rule, m: &Morphism, kind: Kind) -> bool {
    match kind {
        Kind::Dpo => has_pushout_complement(rule.i(), m),
        Kind::SqPo => true,
        Kind::DpoDagger => false,
    }
}

/// All admissible matches of `r` into `x`, in canonical order.
pub fn find_matches(r: &RuleWithConditions, x: &GraphRef, kind: Kind) -> Vec<Morphism> {
    HomSearch::new(r.input(), x, true)
        .collect(r.input(), x)
        .into_iter()
        .filter(|m| admissible_structure(&r.rule, m, kind))
        .filter(|m| r.cond.satisfied_by(m).unwrap_or(false))
        .collect()
}

/// Applies `r` at `m` with the given semantics.
pub fn apply(r: &RuleWithConditions, m: &Morphism, kind: Kind) -> Result<DirectDerivation, RewriteError> {
    if !same_graph(m.dom(), r.input()) {
        return Err(RewriteError::WrongDomain("input"));
    }
    if !m.is_mono() {
        return Err(RewriteError::NotMono);
    }
    let m = m.with_dom(r.input());
    let (interior, into_input) = match kind {
        Kind::Dpo => pushout_complement(r.rule.i(), &m).ok_or(RewriteError::NoPushoutComplement)?,
        Kind::SqPo => final_pullback_complement(r.rule.i(), &m),
        Kind::DpoDagger => return Err(RewriteError::UnsupportedKind(kind)),
    };
    if !r.cond.satisfied_by(&m)? {
        return Err(RewriteError::ConditionViolated);
    }
    Ok(finish(r.rule.clone(), kind, m, interior, into_input))
}

/// Applies a bare rule at `m`; identical to [`apply`] with a true condition.
pub fn apply_rule(r: &Rule, m: &Morphism, kind: Kind) -> Result<DirectDerivation, RewriteError> {
    apply(&RuleWithConditions::unconditional(r.clone()), m, kind)
}

fn finish(rule: Rule, kind: Kind, m: Morphism, interior: Morphism, into_input: Morphism) -> DirectDerivation {
    let po = pushout(rule.o(), &interior).expect("shared context");
    DirectDerivation { kind, rule, matching: m, comatch: po.left, interior, into_input, into_output: po.right }
}

/// Reversed application: given a comatch `O -> Y`, reconstructs the graph
/// the rule would have been applied to. `None` when the comatch dangles.
pub fn apply_dagger(r: &Rule, comatch: &Morphism) -> Option<DirectDerivation> {
    if !same_graph(comatch.dom(), r.output()) || !comatch.is_mono() {
        return None;
    }
    let comatch = comatch.with_dom(r.output());
    let (interior, into_output) = pushout_complement(r.o(), &comatch)?;
    let po = pushout(r.i(), &interior).expect("shared context");
    Some(DirectDerivation {
        kind: Kind::DpoDagger,
        rule: r.clone(),
        matching: po.left,
        comatch,
        interior,
        into_input: po.right,
        into_output,
    })
}
