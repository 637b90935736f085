//! Tracelets: minimal derivation traces that encode sequential compositions
//! of rules, together with their composition, evaluation and the
//! correspondence with concrete derivation traces.
//!
//! A tracelet of length `n` is stored as `n` chained direct derivations
//! `Y_0 => Y_1 => ... => Y_n`. Step `j` applies rule `R_j` (application
//! order, so `steps[0]` is applied first); `Y_0` is the composite input and
//! `Y_n` the composite output.

mod equivalence;
mod surgery;

use thiserror::Error;

use crate::colimits::{compose_spans, pullback, pushout, Cospan, Span};
use crate::condition::{not_false_bounded, shift, trans, Bound, Condition, ConditionError};
use crate::graph::GraphRef;
use crate::morphism::{mediate, same_graph, Morphism};
use crate::rewriting::{
    admissible_structure, apply_dagger, apply_rule, candidate_overlaps, DirectDerivation, Kind, RewriteError,
    RuleWithConditions,
};
use crate::rule::Rule;

pub use equivalence::{
    abstraction_equivalent, collapsed_diagram, shift_equivalent, tracelet_diagram, EquivalenceConfig, ShiftVerdict,
};
pub use surgery::surgery;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceletError {
    #[error("a trace needs at least one step")]
    Empty,
    #[error("step {0} does not start where the previous step ended")]
    NotChained(usize),
    #[error("steps mix rewriting semantics")]
    MixedKinds,
    #[error("tracelets of different semantics cannot be composed")]
    KindMismatch,
    #[error("window {lo}..={hi} is outside a tracelet of length {len}")]
    WindowOutOfRange { lo: usize, hi: usize, len: usize },
    #[error("trace step {0} is not compatible with the tracelet built so far")]
    Incoherent(usize),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error(transparent)]
    Condition(#[from] ConditionError),
}

#[derive(Debug, Clone)]
pub struct Tracelet {
    kind: Kind,
    rules: Vec<RuleWithConditions>,
    steps: Vec<DirectDerivation>,
    composite: RuleWithConditions,
}

impl Tracelet {
    /// The length-one tracelet of a rule: `I => O` along identities.
    pub fn of_rule(r: &RuleWithConditions, kind: Kind) -> Tracelet {
        let rule = r.rule();
        let step = DirectDerivation {
            kind,
            rule: rule.clone(),
            matching: Morphism::identity(rule.input()),
            comatch: Morphism::identity(rule.output()),
            interior: Morphism::identity(rule.context()),
            into_input: rule.i().clone(),
            into_output: rule.o().clone(),
        };
        Tracelet { kind, rules: vec![r.clone()], steps: vec![step], composite: r.clone() }
    }

    fn assemble(
        kind: Kind,
        rules: Vec<RuleWithConditions>,
        steps: Vec<DirectDerivation>,
        cond: Condition,
    ) -> Result<Tracelet, TraceletError> {
        let span = bottom_span(&steps);
        let rule = Rule::from_span(span).expect("bottom legs are mono");
        let composite = RuleWithConditions::new(rule, cond)?;
        Ok(Tracelet { kind, rules, steps, composite })
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    /// Rules in application order.
    pub fn rules(&self) -> &[RuleWithConditions] {
        &self.rules
    }

    pub fn steps(&self) -> &[DirectDerivation] {
        &self.steps
    }

    /// Interface object `Y_j`, `0 <= j <= len`.
    pub fn level(&self, j: usize) -> &GraphRef {
        if j == 0 {
            self.steps[0].start()
        } else {
            self.steps[j - 1].result()
        }
    }

    pub fn input(&self) -> &GraphRef {
        self.level(0)
    }

    pub fn output(&self) -> &GraphRef {
        self.level(self.len())
    }

    pub fn condition(&self) -> &Condition {
        self.composite.cond()
    }

    /// The composite rule with its condition.
    pub fn evaluate(&self) -> &RuleWithConditions {
        &self.composite
    }

    pub fn last_rule(&self) -> &RuleWithConditions {
        self.rules.last().expect("non-empty")
    }
}

/// Composite of the bottom spans `Y_{j+1} <- K̄_j -> Y_j`.
fn bottom_span(steps: &[DirectDerivation]) -> Span {
    let mut acc = Span { left: steps[0].into_output.clone(), right: steps[0].into_input.clone() };
    for s in &steps[1..] {
        let next = Span { left: s.into_output.clone(), right: s.into_input.clone() };
        acc = compose_spans(&next, &acc).expect("chained steps");
    }
    acc
}

/// `step` pasted on top of `below`, a derivation of `step`'s bottom rule.
fn paste(step: &DirectDerivation, below: &DirectDerivation) -> DirectDerivation {
    DirectDerivation {
        kind: below.kind,
        rule: step.rule.clone(),
        matching: step.matching.then(&below.matching).expect("composable"),
        comatch: step.comatch.then(&below.comatch).expect("composable"),
        interior: step.interior.then(&below.interior).expect("composable"),
        into_input: below.into_input.clone(),
        into_output: below.into_output.clone(),
    }
}

/// Applies the steps forwards, starting with `embed: Y_0 -> X`.
fn paste_forward(
    steps: &[DirectDerivation],
    embed: &Morphism,
    kind: Kind,
) -> Result<(Vec<DirectDerivation>, Morphism), RewriteError> {
    let mut embed = embed.clone();
    let mut out = Vec::with_capacity(steps.len());
    for s in steps {
        let below = apply_rule(&s.as_rule(), &embed.with_dom(s.start()), kind)?;
        embed = below.comatch.clone();
        out.push(paste(s, &below));
    }
    Ok((out, embed))
}

struct Pasted {
    tracelet: Tracelet,
    glue: Cospan,
    /// `Y_j` of the earlier tracelet into `Y_j` of the composite, for
    /// `0 <= j <= earlier.len()`.
    earlier_embeds: Vec<Morphism>,
}

fn compose_with_data(
    later: &Tracelet,
    overlap: &Span,
    earlier: &Tracelet,
    kind: Kind,
) -> Result<Pasted, TraceletError> {
    if later.kind != kind || earlier.kind != kind {
        return Err(TraceletError::KindMismatch);
    }
    if !matches!(kind, Kind::Dpo | Kind::SqPo) {
        return Err(RewriteError::UnsupportedKind(kind).into());
    }
    if !same_graph(overlap.left.cod(), later.input()) || !same_graph(overlap.right.cod(), earlier.output()) {
        return Err(RewriteError::InadmissibleOverlap("legs do not end at the composite input and output").into());
    }
    if !overlap.is_mono() {
        return Err(RewriteError::InadmissibleOverlap("legs are not injective").into());
    }
    let left = overlap.left.with_cod(later.input());
    let right = overlap.right.with_cod(earlier.output());
    let glue = pushout(&left, &right).expect("shared apex");

    let (top, _) = paste_forward(&later.steps, &glue.left, kind).map_err(|e| match e {
        RewriteError::NoPushoutComplement => {
            RewriteError::InadmissibleOverlap("later tracelet has no pushout-complement at the overlap")
        }
        other => other,
    })?;

    let n = earlier.len();
    let mut embeds = vec![glue.right.clone(); n + 1];
    let mut bottom = Vec::with_capacity(n);
    for (j, s) in earlier.steps.iter().enumerate().rev() {
        let below = apply_dagger(&s.as_rule(), &embeds[j + 1].with_dom(s.result()))
            .ok_or(RewriteError::InadmissibleOverlap("earlier tracelet has no pushout-complement at the overlap"))?;
        embeds[j] = below.matching.clone();
        bottom.push(paste(s, &below));
    }
    bottom.reverse();

    let first_part = Rule::from_span(bottom_span(&bottom)).expect("mono legs");
    let shifted_first = shift(&embeds[0], earlier.condition())?;
    let moved = trans(&first_part, &shift(&glue.left, later.condition())?)?;
    let cond = Condition::and(first_part.input(), vec![shifted_first, moved])?;

    let mut rules = earlier.rules.clone();
    rules.extend(later.rules.iter().cloned());
    let mut steps = bottom;
    steps.extend(top);
    let tracelet = Tracelet::assemble(kind, rules, steps, cond)?;
    Ok(Pasted { tracelet, glue, earlier_embeds: embeds })
}

/// `later` composed after `earlier` along `overlap = (I_later <- M -> O_earlier)`.
pub fn compose_tracelets(
    later: &Tracelet,
    overlap: &Span,
    earlier: &Tracelet,
    kind: Kind,
) -> Result<Tracelet, TraceletError> {
    compose_with_data(later, overlap, earlier, kind).map(|p| p.tracelet)
}

/// Admissible overlaps of `later` into `earlier`, in canonical order.
pub fn enumerate_tracelet_matches(later: &Tracelet, earlier: &Tracelet, kind: Kind, bound: Bound) -> Vec<Span> {
    enumerate_tracelet_compositions(later, earlier, kind, bound).into_iter().map(|(mu, _)| mu).collect()
}

/// Every admissible composition of `later` after `earlier`, with its overlap.
pub fn enumerate_tracelet_compositions(
    later: &Tracelet,
    earlier: &Tracelet,
    kind: Kind,
    bound: Bound,
) -> Vec<(Span, Tracelet)> {
    candidate_overlaps(later.input(), earlier.output())
        .into_iter()
        .filter_map(|mu| compose_tracelets(later, &mu, earlier, kind).ok().map(|t| (mu, t)))
        .filter(|(_, t)| not_false_bounded(t.condition(), bound))
        .collect()
}

/// A chain of direct derivations `X_0 => X_1 => ... => X_n`.
#[derive(Debug, Clone)]
pub struct DerivationTrace {
    rules: Vec<RuleWithConditions>,
    steps: Vec<DirectDerivation>,
}

impl DerivationTrace {
    pub fn new(rules: Vec<RuleWithConditions>, steps: Vec<DirectDerivation>) -> Result<Self, TraceletError> {
        if steps.is_empty() {
            return Err(TraceletError::Empty);
        }
        assert_eq!(rules.len(), steps.len(), "one rule per step");
        for j in 1..steps.len() {
            if !same_graph(steps[j - 1].result(), steps[j].start()) {
                return Err(TraceletError::NotChained(j));
            }
        }
        Ok(DerivationTrace { rules, steps })
    }

    pub fn single(rule: RuleWithConditions, step: DirectDerivation) -> Self {
        DerivationTrace { rules: vec![rule], steps: vec![step] }
    }

    /// Appends a step applied to the current result.
    pub fn push(&mut self, rule: RuleWithConditions, step: DirectDerivation) -> Result<(), TraceletError> {
        if !same_graph(self.result(), step.start()) {
            return Err(TraceletError::NotChained(self.steps.len()));
        }
        self.rules.push(rule);
        self.steps.push(step);
        Ok(())
    }

    pub fn start(&self) -> &GraphRef {
        self.steps[0].start()
    }

    pub fn result(&self) -> &GraphRef {
        self.steps.last().expect("non-empty").result()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn rules(&self) -> &[RuleWithConditions] {
        &self.rules
    }

    pub fn steps(&self) -> &[DirectDerivation] {
        &self.steps
    }
}

/// Runs the tracelet at a match of its composite rule.
pub fn apply_tracelet(t: &Tracelet, x0: &GraphRef, m: &Morphism) -> Result<DerivationTrace, TraceletError> {
    if !same_graph(m.dom(), t.input()) {
        return Err(RewriteError::WrongDomain("composite input").into());
    }
    if !same_graph(m.cod(), x0) {
        return Err(RewriteError::WrongDomain("start graph").into());
    }
    if !m.is_mono() {
        return Err(RewriteError::NotMono.into());
    }
    if !admissible_structure(t.composite.rule(), m, t.kind) {
        return Err(RewriteError::NoPushoutComplement.into());
    }
    if !t.condition().satisfied_by(m)? {
        return Err(RewriteError::ConditionViolated.into());
    }
    let (steps, _) = paste_forward(&t.steps, &m.with_cod(x0), t.kind)?;
    DerivationTrace::new(t.rules.clone(), steps)
}

/// The tracelet a trace runs, and its match into the start graph.
pub fn tracelet_from_trace(tr: &DerivationTrace) -> Result<(Tracelet, Morphism), TraceletError> {
    let kind = tr.steps[0].kind;
    if !matches!(kind, Kind::Dpo | Kind::SqPo) {
        return Err(RewriteError::UnsupportedKind(kind).into());
    }
    if tr.steps.iter().any(|s| s.kind != kind) {
        return Err(TraceletError::MixedKinds);
    }
    let (t, embeds) = characterize(tr, kind)?;
    Ok((t, embeds[0].clone()))
}

/// Builds the tracelet of `tr` inductively, returning it with the embeddings
/// `Y_j -> X_j` of all its levels into the trace.
pub(crate) fn characterize(tr: &DerivationTrace, kind: Kind) -> Result<(Tracelet, Vec<Morphism>), TraceletError> {
    let first = &tr.steps[0];
    let mut t = Tracelet::of_rule(&tr.rules[0], kind);
    let mut embeds = vec![first.matching.with_dom(t.input()), first.comatch.with_dom(t.output())];
    for k in 1..tr.len() {
        let d = &tr.steps[k];
        let m = d.matching.with_dom(tr.rules[k].input());
        let here = embeds[k].with_cod(m.cod());
        let overlap = pullback(&m, &here).expect("shared codomain");
        let single = Tracelet::of_rule(&tr.rules[k], kind);
        let pasted = compose_with_data(&single, &overlap, &t, kind)?;
        let incoherent = || TraceletError::Incoherent(k);

        let glue = &pasted.glue;
        let u = mediate(&[&glue.left, &glue.right], &[&m.with_dom(glue.left.dom()), &here.with_dom(glue.right.dom())])
            .ok_or_else(incoherent)?;
        let mut next = vec![u.clone(); k + 2];
        for j in (0..k).rev() {
            let s = &pasted.tracelet.steps[j];
            let old = &tr.steps[j];
            let h = s
                .into_output
                .then(&next[j + 1].with_dom(s.result()))
                .ok()
                .and_then(|x| x.with_cod(old.result()).factor_through(&old.into_output))
                .ok_or_else(incoherent)?;
            let via = h.then(&old.into_input).expect("composable");
            next[j] = mediate(
                &[&pasted.earlier_embeds[j], &s.into_input],
                &[&embeds[j].with_dom(pasted.earlier_embeds[j].dom()), &via],
            )
            .ok_or_else(incoherent)?;
        }
        let s = &pasted.tracelet.steps[k];
        let h = s
            .into_input
            .then(&u.with_dom(s.start()))
            .ok()
            .and_then(|x| x.factor_through(&d.into_input.with_cod(x.cod())))
            .ok_or_else(incoherent)?;
        let via = h.then(&d.into_output).expect("composable");
        next[k + 1] = mediate(&[&s.comatch, &s.into_output], &[&d.comatch.with_dom(s.comatch.dom()), &via])
            .ok_or_else(incoherent)?;
        t = pasted.tracelet;
        embeds = next;
    }
    Ok((t, embeds))
}
