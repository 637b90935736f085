//! Sequential independence, in the classical form on derivations and in
//! the compositional form on composition diagrams, and the switch of
//! independent compositions.

use std::ops::ControlFlow;

use crate::colimits::{pushout, Span};
use crate::condition::{equivalent_bounded, Bound};
use crate::diagram::{for_each_diagram_iso, rule_diagram, rule_iso};
use crate::morphism::{mediate, same_graph, Morphism};
use crate::rule::Rule;

use super::composition::{compose, Composition};
use super::derivation::{DirectDerivation, Kind, RewriteError, RuleWithConditions};

/// Whether `second` (applied to the result of `first`) is independent of
/// `first`: the first comatch survives the second step and the second match
/// avoids what the first step created.
pub fn sequentially_independent(second: &DirectDerivation, first: &DirectDerivation) -> Result<bool, RewriteError> {
    if !same_graph(first.result(), second.start()) {
        return Err(RewriteError::NotChained);
    }
    let comatch = first.comatch.with_cod(second.start());
    let survives = comatch.factor_through(&second.into_input).is_some();
    let avoids = second.matching.with_cod(first.result()).factor_through(&first.into_output).is_some();
    Ok(survives && avoids)
}

/// The same criterion read off the composition diagram alone.
pub fn compositional_independence(c: &Composition) -> bool {
    c.n1().factor_through(&c.later.into_input).is_some() && c.n2().factor_through(&c.earlier.into_output).is_some()
}

/// The composition in the opposite order for an independent pair.
#[derive(Debug, Clone)]
pub struct Switch {
    /// `I1 <- M -> O2`.
    pub overlap: Span,
    /// `r1` after `r2` along `overlap`, with the same semantics as the input.
    pub reversed: Composition,
    /// All of DPO/SqPO in both orders yield isomorphic rules.
    pub composites_isomorphic: bool,
    /// The composite's O, K, I are the pushouts of the two rules over `M`.
    pub amalgamated: bool,
    /// The composite conditions agree within the bound.
    pub conditions_equivalent: bool,
}

/// Switches an independent composition of `r2` after `r1`. `Ok(None)` when
/// the composition is not independent.
pub fn switch_match(
    c: &Composition,
    r2: &RuleWithConditions,
    r1: &RuleWithConditions,
    bound: Bound,
) -> Result<Option<Switch>, RewriteError> {
    if !compositional_independence(c) {
        return Ok(None);
    }
    let (Some(a1), Some(a2)) = (c.overlap.right.factor_through(r1.rule().o()), c.overlap.left.factor_through(r2.rule().i()))
    else {
        return Ok(None);
    };
    let overlap = Span {
        left: a1.then(r1.rule().i()).expect("composable"),
        right: a2.then(r2.rule().o()).expect("composable"),
    };
    let reversed = compose(r1, &overlap, r2, c.kind)?;

    let mu21 = &c.overlap;
    let variants = [
        compose(r2, mu21, r1, Kind::Dpo)?,
        compose(r2, mu21, r1, Kind::SqPo)?,
        compose(r1, &overlap, r2, Kind::Dpo)?,
        compose(r1, &overlap, r2, Kind::SqPo)?,
    ];
    let composites_isomorphic = variants.iter().all(|v| rule_iso(v.rule(), c.rule()).is_some());

    let amalgamated = amalgamation(r2.rule(), r1.rule(), &a2, &a1, &c.overlap.right)
        .is_some_and(|am| rule_iso(&am, c.rule()).is_some());

    let conditions_equivalent = conditions_agree(&c.composite, &reversed.composite, bound);

    Ok(Some(Switch { overlap, reversed, composites_isomorphic, amalgamated, conditions_equivalent }))
}

/// The rule `O2 +_M O1 <- K2 +_M K1 -> I2 +_M I1`.
fn amalgamation(r2: &Rule, r1: &Rule, a2: &Morphism, a1: &Morphism, into_o1: &Morphism) -> Option<Rule> {
    let k = pushout(a2, a1).ok()?;
    let o = pushout(&a2.then(r2.o()).ok()?, into_o1).ok()?;
    let i = pushout(&a2.then(r2.i()).ok()?, &a1.then(r1.i()).ok()?).ok()?;
    let to_o = mediate(
        &[&k.left, &k.right],
        &[&r2.o().then(&o.left).ok()?, &r1.o().then(&o.right).ok()?],
    )?;
    let to_i = mediate(
        &[&k.left, &k.right],
        &[&r2.i().then(&i.left).ok()?, &r1.i().then(&i.right).ok()?],
    )?;
    Rule::new(to_o, to_i).ok()
}

/// Whether two rules with conditions are isomorphic as rules with their
/// conditions equivalent (within the bound) along some rule isomorphism.
pub fn conditions_agree(a: &RuleWithConditions, b: &RuleWithConditions, bound: Bound) -> bool {
    if a.cond().is_true() && b.cond().is_true() {
        return rule_iso(a.rule(), b.rule()).is_some();
    }
    let mut ok = false;
    for_each_diagram_iso(&rule_diagram(a.rule()), &rule_diagram(b.rule()), &[], |isos| {
        let back = isos[2].inverse().expect("iso");
        let moved = b.cond().transport_iso(&back);
        if equivalent_bounded(a.cond(), &moved, bound) {
            ok = true;
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    ok
}
