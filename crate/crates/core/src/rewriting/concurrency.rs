//! Translating between two-step derivations and single applications of a
//! composite rule.

use crate::colimits::pullback;
use crate::morphism::{mediate, same_graph, Morphism};

use super::composition::{compose, Composition};
use super::derivation::{apply, DirectDerivation, Kind, RewriteError, RuleWithConditions};

/// The composite obtained from a two-step derivation.
#[derive(Debug, Clone)]
pub struct Synthesis {
    pub composition: Composition,
    /// Match of the composite rule into the start graph.
    pub matching: Morphism,
    /// The glued graph `N` mapped into the intermediate graph.
    pub glue_to_middle: Morphism,
}

/// From `first` (r1 applied to `X0`, giving `X1`) and a match `m2` of r2
/// into `X1`, builds the overlap and the match of the composite into `X0`.
pub fn concurrency_synthesis(
    r2: &RuleWithConditions,
    r1: &RuleWithConditions,
    first: &DirectDerivation,
    m2: &Morphism,
    kind: Kind,
) -> Result<Synthesis, RewriteError> {
    if !same_graph(m2.cod(), first.result()) {
        return Err(RewriteError::NotChained);
    }
    if !same_graph(m2.dom(), r2.input()) {
        return Err(RewriteError::WrongDomain("input"));
    }
    let m2 = m2.with_cod(first.result());
    let overlap = pullback(&m2, &first.comatch).expect("shared codomain");
    let composition = compose(r2, &overlap, r1, kind)?;
    let glue_to_middle = mediate(
        &[composition.n2(), composition.n1()],
        &[&m2.with_dom(composition.n2().dom()), &first.comatch.with_dom(composition.n1().dom())],
    )
    .ok_or(RewriteError::NotChained)?;
    let interior = composition
        .earlier
        .into_output
        .then(&glue_to_middle)
        .expect("composable")
        .factor_through(&first.into_output)
        .ok_or(RewriteError::InadmissibleOverlap("second match does not avoid the first rule's deletions"))?;
    let via_interior = interior.then(&first.into_input).expect("composable");
    let matching = mediate(
        &[&composition.earlier.matching, &composition.earlier.into_input],
        &[&first.matching.with_dom(composition.earlier.matching.dom()), &via_interior],
    )
    .ok_or(RewriteError::NotChained)?;
    Ok(Synthesis { composition, matching, glue_to_middle })
}

/// From a composite match `m21: I21 -> X0`, recovers the two-step derivation
/// `X0 => X1 => X2` it encodes.
pub fn concurrency_analysis(
    composition: &Composition,
    r2: &RuleWithConditions,
    r1: &RuleWithConditions,
    m21: &Morphism,
    kind: Kind,
) -> Result<(DirectDerivation, DirectDerivation), RewriteError> {
    let earlier = &composition.earlier;
    if !same_graph(m21.dom(), earlier.start()) {
        return Err(RewriteError::WrongDomain("composite input"));
    }
    let m21 = m21.with_dom(earlier.start());
    let m1 = earlier.matching.then(&m21).expect("composable");
    let first = apply(r1, &m1.with_dom(r1.input()), kind)?;
    let interior = earlier
        .into_input
        .then(&m21)
        .expect("composable")
        .factor_through(&first.into_input)
        .ok_or(RewriteError::InadmissibleOverlap("composite match deletes part of the first rule's context"))?;
    let to_middle = mediate(
        &[composition.n1(), &earlier.into_output],
        &[
            &first.comatch.with_dom(composition.n1().dom()),
            &interior.then(&first.into_output).expect("composable"),
        ],
    )
    .ok_or(RewriteError::NotChained)?;
    let m2 = composition.n2().then(&to_middle).expect("composable");
    let second = apply(r2, &m2.with_dom(r2.input()), kind)?;
    Ok((first, second))
}
