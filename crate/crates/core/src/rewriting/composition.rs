//! Sequential composition of rules along overlaps `I2 <- M -> O1`.

use crate::colimits::{pullback, pushout, Cospan, Span};
use crate::condition::{not_false_bounded, shift, subgraphs_containing, trans, Bound, Condition};
use crate::graph::GraphRef;
use crate::matching::enumerate_monos;
use crate::morphism::{same_graph, Morphism};
use crate::rule::Rule;

use super::derivation::{
    admissible_structure, apply_dagger, apply_rule, DirectDerivation, Kind, RewriteError, RuleWithConditions,
};

/// Every object and arrow of the composition of `later` after `earlier`
/// along an overlap.
///
/// The glued graph `N` receives `n2: I2 -> N` and `n1: O1 -> N`. The later
/// rule is applied forwards at `n2` (bottom span `O21 <- K̄2 -> N`); the
/// earlier rule is applied backwards at `n1` (bottom span `N <- K̄1 -> I21`).
#[derive(Debug, Clone)]
pub struct Composition {
    pub kind: Kind,
    pub overlap: Span,
    pub glue: Cospan,
    pub later: DirectDerivation,
    pub earlier: DirectDerivation,
    /// `K21 -> K̄2` and `K21 -> K̄1` from pulling back over `N`.
    pub apex: Span,
    pub composite: RuleWithConditions,
}

impl Composition {
    pub fn glued(&self) -> &GraphRef {
        self.glue.apex()
    }

    /// `n2: I2 -> N`.
    pub fn n2(&self) -> &Morphism {
        &self.glue.left
    }

    /// `n1: O1 -> N`.
    pub fn n1(&self) -> &Morphism {
        &self.glue.right
    }

    /// `I1 -> I21`.
    pub fn input_embedding(&self) -> &Morphism {
        &self.earlier.matching
    }

    /// `O2 -> O21`.
    pub fn output_embedding(&self) -> &Morphism {
        &self.later.comatch
    }

    pub fn rule(&self) -> &Rule {
        self.composite.rule()
    }

    pub fn cond(&self) -> &Condition {
        self.composite.cond()
    }
}

/// Composes `r2` after `r1` along `overlap = (I2 <- M -> O1)`, ignoring
/// whether the resulting condition is satisfiable.
pub fn compose(
    r2: &RuleWithConditions,
    overlap: &Span,
    r1: &RuleWithConditions,
    kind: Kind,
) -> Result<Composition, RewriteError> {
    if !matches!(kind, Kind::Dpo | Kind::SqPo) {
        return Err(RewriteError::UnsupportedKind(kind));
    }
    if !same_graph(overlap.left.cod(), r2.input()) || !same_graph(overlap.right.cod(), r1.output()) {
        return Err(RewriteError::InadmissibleOverlap("legs do not end at I2 and O1"));
    }
    if !overlap.is_mono() {
        return Err(RewriteError::InadmissibleOverlap("legs are not injective"));
    }
    let left = overlap.left.with_cod(r2.input());
    let right = overlap.right.with_cod(r1.output());
    let overlap = Span { left, right };
    let glue = pushout(&overlap.left, &overlap.right).expect("shared apex");
    let n2 = &glue.left;
    let n1 = &glue.right;
    if !admissible_structure(r2.rule(), n2, kind) {
        return Err(RewriteError::InadmissibleOverlap("later rule has no pushout-complement at the overlap"));
    }
    let later = apply_rule(r2.rule(), n2, kind)?;
    let earlier = apply_dagger(r1.rule(), n1)
        .ok_or(RewriteError::InadmissibleOverlap("earlier rule has no pushout-complement at the overlap"))?;
    let apex = pullback(&later.into_input, &earlier.into_output).expect("shared codomain");
    let o = apex.left.then(&later.into_output).expect("composable");
    let i = apex.right.then(&earlier.into_input).expect("composable");
    let rule = Rule::new(o, i).expect("mono legs");

    let shifted_first = shift(&earlier.matching, r1.cond())?;
    let backwards = Rule::new(earlier.into_output.clone(), earlier.into_input.clone()).expect("mono legs");
    let shifted_second = shift(n2, r2.cond())?;
    let moved = trans(&backwards, &shifted_second)?;
    let cond = Condition::and(rule.input(), vec![shifted_first, moved])?;
    let composite = RuleWithConditions::new(rule, cond)?;
    Ok(Composition { kind, overlap, glue, later, earlier, apex, composite })
}

/// The composite rule alone.
pub fn compose_rules(
    r2: &RuleWithConditions,
    overlap: &Span,
    r1: &RuleWithConditions,
    kind: Kind,
) -> Result<RuleWithConditions, RewriteError> {
    compose(r2, overlap, r1, kind).map(|c| c.composite)
}

/// Candidate overlaps `I2 <- M -> O1`: `M` a subgraph of `I2` and any mono
/// into `O1`. Distinct candidates are non-isomorphic as spans.
pub fn candidate_overlaps(i2: &GraphRef, o1: &GraphRef) -> Vec<Span> {
    let mut out = Vec::new();
    for m in subgraphs_containing(i2, &[], &[]) {
        let m = m.into_ref();
        let left = Morphism::inclusion(&m, i2).expect("subgraph");
        for right in enumerate_monos(&m, o1) {
            out.push(Span { left: left.clone(), right });
        }
    }
    out
}

/// All admissible compositions of `r2` after `r1`, with conditions checked
/// for satisfiability within `bound`.
pub fn enumerate_compositions(
    r2: &RuleWithConditions,
    r1: &RuleWithConditions,
    kind: Kind,
    bound: Bound,
) -> Vec<Composition> {
    candidate_overlaps(r2.input(), r1.output())
        .into_iter()
        .filter_map(|mu| compose(r2, &mu, r1, kind).ok())
        .filter(|c| not_false_bounded(c.cond(), bound))
        .collect()
}

/// The admissible overlaps of `r2` into `r1`.
pub fn enumerate_rule_matches(
    r2: &RuleWithConditions,
    r1: &RuleWithConditions,
    kind: Kind,
    bound: Bound,
) -> Vec<Span> {
    enumerate_compositions(r2, r1, kind, bound).into_iter().map(|c| c.overlap).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::rule_iso;
    use crate::graph::Graph;

    fn g(n: u32, e: &[(u32, u32)]) -> GraphRef {
        Graph::from_edges(n, e).into_ref()
    }

    fn create_vertex() -> RuleWithConditions {
        let empty = g(0, &[]);
        Rule::new(Morphism::from_empty(&g(1, &[])), Morphism::identity(&empty)).unwrap().into()
    }

    #[test]
    fn two_creators_compose_disjointly() {
        let r = create_vertex();
        let comps = enumerate_compositions(&r, &r, Kind::Dpo, Bound::default());
        // I2 is empty, so the only overlap is the empty one.
        assert_eq!(comps.len(), 1);
        let c = &comps[0];
        assert_eq!(c.rule().output().vertex_count(), 2);
        assert_eq!(c.rule().input().vertex_count(), 0);
    }

    #[test]
    fn identity_after_rule_along_full_overlap() {
        let k = g(2, &[]);
        let r1: RuleWithConditions =
            Rule::new(Morphism::inclusion(&k, &g(2, &[(0, 1)])).unwrap(), Morphism::identity(&k)).unwrap().into();
        let id: RuleWithConditions = Rule::identity(r1.output()).into();
        let full = Span::identity(r1.output());
        let c = compose(&id, &full, &r1, Kind::Dpo).unwrap();
        assert!(rule_iso(c.rule(), r1.rule()).is_some());
        assert!(c.cond().is_true());
    }

    #[test]
    fn composite_of_creation_and_deletion_of_same_vertex() {
        let create = create_vertex();
        let delete = RuleWithConditions::from(create.rule().reversed());
        let comps = enumerate_compositions(&delete, &create, Kind::Dpo, Bound::default());
        // Overlap empty (delete some other vertex) or the created vertex.
        assert_eq!(comps.len(), 2);
        let sizes: Vec<_> = comps.iter().map(|c| c.rule().input().vertex_count()).collect();
        assert!(sizes.contains(&0) && sizes.contains(&1));
    }
}
