//! Abstraction equivalence (isomorphic diagrams) and shift equivalence
//! (permuted windows whose collapsed diagrams are isomorphic).

use std::collections::HashMap;
use std::ops::ControlFlow;

use itertools::Itertools;

use super::{surgery, Tracelet, TraceletError};
use crate::condition::{equivalent_bounded, Bound};
use crate::diagram::{for_each_diagram_iso, rule_iso, Diagram};
use crate::graph::GraphRef;
use crate::morphism::Morphism;
use crate::rewriting::{conditions_agree, DirectDerivation, RuleWithConditions};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EquivalenceConfig {
    /// Model-checking bound for conditions.
    pub bound: Bound,
    /// Windows span at most `window_cap + 1` steps.
    pub window_cap: usize,
}

impl Default for EquivalenceConfig {
    fn default() -> Self {
        EquivalenceConfig { bound: Bound::default(), window_cap: 2 }
    }
}

/// Shift equivalence with and without comparing conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ShiftVerdict {
    /// Rule content and collapsed diagrams match.
    pub structural: bool,
    /// Additionally, rule conditions and composite conditions agree within the bound.
    pub with_conditions: bool,
}

/// Levels first, then `O, K, I, K̄` for each column.
fn build(levels: &[GraphRef], columns: &[(usize, usize, &DirectDerivation)]) -> Diagram {
    let mut d = Diagram::default();
    for y in levels {
        d.add_object(y.clone());
    }
    for &(lo, hi, s) in columns {
        let o = d.add_object(s.rule.output().clone());
        let k = d.add_object(s.rule.context().clone());
        let i = d.add_object(s.rule.input().clone());
        let bar = d.add_object(s.interior.cod().clone());
        d.add_arrow(k, o, s.rule.o().clone());
        d.add_arrow(k, i, s.rule.i().clone());
        d.add_arrow(k, bar, s.interior.clone());
        d.add_arrow(bar, lo, s.into_input.clone());
        d.add_arrow(bar, hi, s.into_output.clone());
        d.add_arrow(i, lo, s.matching.clone());
        d.add_arrow(o, hi, s.comatch.clone());
    }
    d
}

/// The full commuting diagram of a tracelet. Object 0 is its input.
pub fn tracelet_diagram(t: &Tracelet) -> Diagram {
    let levels: Vec<GraphRef> = (0..=t.len()).map(|j| t.level(j).clone()).collect();
    let columns: Vec<_> = t.steps().iter().enumerate().map(|(j, s)| (j, j + 1, s)).collect();
    build(&levels, &columns)
}

/// The diagram with steps `lo..=hi` replaced by one column for their
/// evaluated rule. Object 0 is the tracelet's input.
pub fn collapsed_diagram(t: &Tracelet, lo: usize, hi: usize) -> Result<Diagram, TraceletError> {
    let (local, _) = surgery(t, lo, hi)?;
    let width = hi - lo;
    let levels: Vec<GraphRef> =
        (0..=t.len()).filter(|&j| j <= lo || j > hi).map(|j| t.level(j).clone()).collect();
    let squeeze = |j: usize| if j <= lo { j } else { j - width };
    let mut columns = Vec::new();
    for (j, s) in t.steps().iter().enumerate() {
        if j == lo {
            columns.push((lo, lo + 1, &local));
        } else if j < lo || j > hi {
            columns.push((squeeze(j), squeeze(j + 1), s));
        }
    }
    Ok(build(&levels, &columns))
}

/// Whether some family of isomorphisms carries one diagram onto the other
/// and, when conditions are present, the composite conditions onto each other.
fn isomorphic_with_conditions(a: &Tracelet, da: &Diagram, b: &Tracelet, db: &Diagram, bound: Bound) -> (bool, bool) {
    let trivial = a.condition().is_true() && b.condition().is_true();
    let mut structural = false;
    let mut strict = false;
    for_each_diagram_iso(da, db, &[], |isos| {
        structural = true;
        if trivial || conditions_match(a, b, &isos[0], bound) {
            strict = true;
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    (structural, strict)
}

fn conditions_match(a: &Tracelet, b: &Tracelet, input_iso: &Morphism, bound: Bound) -> bool {
    let back = input_iso.inverse().expect("iso");
    let moved = b.condition().transport_iso(&back);
    equivalent_bounded(a.condition(), &moved, bound)
}

/// Isomorphic diagrams and composite conditions that agree within `bound`.
pub fn abstraction_equivalent(a: &Tracelet, b: &Tracelet, bound: Bound) -> bool {
    if a.len() != b.len() || a.kind() != b.kind() {
        return false;
    }
    if !a.rules().iter().zip(b.rules()).all(|(x, y)| x == y || rule_iso(x.rule(), y.rule()).is_some()) {
        return false;
    }
    isomorphic_with_conditions(a, &tracelet_diagram(a), b, &tracelet_diagram(b), bound).1
}

fn same_content(x: &RuleWithConditions, y: &RuleWithConditions, bound: Bound) -> (bool, bool) {
    if x == y {
        return (true, true);
    }
    if rule_iso(x.rule(), y.rule()).is_none() {
        return (false, false);
    }
    (true, conditions_agree(x, y, bound))
}

/// One shift step: some window of at most `window_cap + 1` steps whose rules
/// are a permutation of each other, with isomorphic collapsed diagrams.
pub fn shift_equivalent(a: &Tracelet, b: &Tracelet, config: EquivalenceConfig) -> ShiftVerdict {
    let mut verdict = ShiftVerdict::default();
    if a.len() != b.len() || a.kind() != b.kind() {
        return verdict;
    }
    let n = a.len();
    let mut cache: HashMap<(usize, usize), Option<(Diagram, Diagram)>> = HashMap::new();
    for size in 1..=(config.window_cap + 1).min(n) {
        for lo in 0..=n - size {
            let hi = lo + size - 1;
            if (0..lo).chain(hi + 1..n).any(|j| !same_content(&a.rules()[j], &b.rules()[j], config.bound).0) {
                continue;
            }
            for perm in (0..size).permutations(size) {
                let mut content = (true, true);
                for (p, &q) in perm.iter().enumerate() {
                    let (s, c) = same_content(&a.rules()[lo + p], &b.rules()[lo + q], config.bound);
                    content = (content.0 && s, content.1 && c);
                }
                if !content.0 {
                    continue;
                }
                let entry = cache.entry((lo, hi)).or_insert_with(|| {
                    Some((collapsed_diagram(a, lo, hi).ok()?, collapsed_diagram(b, lo, hi).ok()?))
                });
                let Some((da, db)) = entry else { continue };
                let (structural, strict) = isomorphic_with_conditions(a, da, b, db, config.bound);
                verdict.structural |= structural;
                verdict.with_conditions |= structural && strict && content.1;
                if verdict.with_conditions {
                    return verdict;
                }
            }
        }
    }
    verdict
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::rewriting::{candidate_overlaps, Kind};
    use crate::rule::Rule;
    use crate::tracelet::compose_tracelets;

    fn g(n: u32, e: &[(u32, u32)]) -> GraphRef {
        Graph::from_edges(n, e).into_ref()
    }

    fn sprout() -> RuleWithConditions {
        let v = g(1, &[]);
        Rule::new(Morphism::inclusion(&v, &g(2, &[(0, 1)])).unwrap(), Morphism::identity(&v)).unwrap().into()
    }

    #[test]
    fn relabelled_composition_is_abstraction_equivalent() {
        let r = sprout();
        let t = Tracelet::of_rule(&r, Kind::Dpo);
        let mus = candidate_overlaps(t.input(), t.output());
        let all: Vec<_> = mus.iter().map(|mu| compose_tracelets(&t, mu, &t, Kind::Dpo).unwrap()).collect();
        // Empty overlap, sprouting from the root again, and sprouting from the new vertex.
        assert_eq!(all.len(), 3);
        for x in &all {
            assert!(abstraction_equivalent(x, x, Bound::default()));
        }
        assert!(!abstraction_equivalent(&all[1], &all[2], Bound::default()));
        let v = shift_equivalent(&all[0], &all[0], EquivalenceConfig::default());
        assert!(v.structural && v.with_conditions);
    }
}
