use super::{bottom_span, characterize, DerivationTrace, Tracelet, TraceletError};
use crate::rewriting::DirectDerivation;

/// Cuts out steps `lo..=hi` (application order, zero-based).
///
/// Returns the window collapsed into a single direct derivation of its
/// evaluated rule between `Y_lo` and `Y_{hi+1}`, and the minimal tracelet
/// of the window.
pub fn surgery(t: &Tracelet, lo: usize, hi: usize) -> Result<(DirectDerivation, Tracelet), TraceletError> {
    if lo > hi || hi >= t.len() {
        return Err(TraceletError::WindowOutOfRange { lo, hi, len: t.len() });
    }
    let window = DerivationTrace::new(t.rules[lo..=hi].to_vec(), t.steps[lo..=hi].to_vec())?;
    let (inner, embeds) = characterize(&window, t.kind)?;
    let span = bottom_span(&t.steps[lo..=hi]);
    let rule = inner.evaluate().rule().clone();
    let matching = embeds[0].clone();
    let comatch = embeds.last().expect("non-empty").clone();
    let interior = rule
        .i()
        .then(&matching)
        .expect("composable")
        .factor_through(&span.right)
        .ok_or(TraceletError::Incoherent(lo))?;
    let local = DirectDerivation {
        kind: t.kind,
        rule,
        matching,
        comatch,
        interior,
        into_input: span.right,
        into_output: span.left,
    };
    Ok((local, inner))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::rule_iso;
    use crate::graph::{Graph, GraphRef};
    use crate::morphism::Morphism;
    use crate::rewriting::{candidate_overlaps, Kind, RuleWithConditions};
    use crate::rule::Rule;
    use crate::tracelet::compose_tracelets;

    fn g(n: u32, e: &[(u32, u32)]) -> GraphRef {
        Graph::from_edges(n, e).into_ref()
    }

    fn chain3() -> Tracelet {
        let v = g(1, &[]);
        let r: RuleWithConditions =
            Rule::new(Morphism::inclusion(&v, &g(2, &[(0, 1)])).unwrap(), Morphism::identity(&v)).unwrap().into();
        let one = Tracelet::of_rule(&r, Kind::Dpo);
        let mut t = one.clone();
        for _ in 0..2 {
            let mu = candidate_overlaps(one.input(), t.output()).pop().unwrap();
            t = compose_tracelets(&one, &mu, &t, Kind::Dpo).unwrap();
        }
        t
    }

    #[test]
    fn single_step_window_is_the_step_itself() {
        let t = chain3();
        for j in 0..t.len() {
            let (local, inner) = surgery(&t, j, j).unwrap();
            let step = &t.steps()[j];
            assert_eq!(inner.len(), 1);
            assert_eq!(local.matching, step.matching);
            assert_eq!(local.comatch, step.comatch);
            assert_eq!(local.into_input, step.into_input);
            assert!(rule_iso(inner.evaluate().rule(), &step.rule).is_some());
        }
    }

    #[test]
    fn full_window_collapses_to_evaluation() {
        let t = chain3();
        let (local, inner) = surgery(&t, 0, 2).unwrap();
        assert!(local.commutes());
        assert!(rule_iso(&local.rule, t.evaluate().rule()).is_some());
        assert!(rule_iso(inner.evaluate().rule(), t.evaluate().rule()).is_some());
        assert!(surgery(&t, 1, 3).is_err());
    }
}
