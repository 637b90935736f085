mod support;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use support::*;
use tracelets::colimits::Span;
use tracelets::condition::Bound;
use tracelets::diagram::rule_iso;
use tracelets::matching::{enumerate_monos, isomorphic};
use tracelets::morphism::Morphism;
use tracelets::rewriting::{
    apply, compose, compositional_independence, concurrency_analysis, concurrency_synthesis, enumerate_compositions,
    find_matches, sequentially_independent, switch_match, Kind, RewriteError, RuleWithConditions,
};
use tracelets::rule::Rule;
use tracelets::sample::{random_extension, random_rule};
use tracelets::tracelet::DerivationTrace;

fn kind_of(flag: bool) -> Kind {
    if flag {
        Kind::Dpo
    } else {
        Kind::SqPo
    }
}

fn trace(r1: &RuleWithConditions, d1: &tracelets::rewriting::DirectDerivation, r2: &RuleWithConditions, d2: &tracelets::rewriting::DirectDerivation) -> DerivationTrace {
    let mut t = DerivationTrace::single(r1.clone(), d1.clone());
    t.push(r2.clone(), d2.clone()).unwrap();
    t
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dpo_and_sqpo_agree_where_the_pushout_complement_exists(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = random_rule(&mut rng, 3);
        let x = random_extension(&mut rng, r.input(), 3).into_ref();
        for m in find_matches(&r, &x, Kind::Dpo) {
            let dpo = apply(&r, &m, Kind::Dpo).unwrap();
            let sqpo = apply(&r, &m, Kind::SqPo).unwrap();
            prop_assert!(dpo.commutes() && sqpo.commutes());
            prop_assert_eq!(dpo.result(), sqpo.result());
            prop_assert_eq!(&dpo.comatch, &sqpo.comatch);
        }
    }

    #[test]
    fn synthesis_then_analysis_reproduces_the_derivation(seed in any::<u64>(), dpo in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let kind = kind_of(dpo);
        let Some(c) = random_two_step(&mut rng, kind, true) else { return Ok(()) };
        let syn = concurrency_synthesis(&c.r2, &c.r1, &c.first, &c.second.matching, kind).unwrap();
        let direct = apply(&syn.composition.composite, &syn.matching, kind).unwrap();
        prop_assert!(isomorphic(direct.result(), c.second.result()).is_some());
        let (e1, e2) = concurrency_analysis(&syn.composition, &c.r2, &c.r1, &syn.matching, kind).unwrap();
        prop_assert_eq!(&e1.matching, &c.first.matching);
        prop_assert!(traces_isomorphic(&trace(&c.r1, &e1, &c.r2, &e2), &trace(&c.r1, &c.first, &c.r2, &c.second)));
    }

    #[test]
    fn analysis_then_synthesis_reproduces_the_composite(seed in any::<u64>(), dpo in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let kind = kind_of(dpo);
        let r1 = random_rule_with_condition(&mut rng, true);
        let r2 = random_rule_with_condition(&mut rng, true);
        let Some(comp) = enumerate_compositions(&r2, &r1, kind, Bound::default()).choose(&mut rng).cloned() else {
            return Ok(());
        };
        let x0 = random_extension(&mut rng, comp.composite.input(), 2).into_ref();
        let Some(m21) = find_matches(&comp.composite, &x0, kind).choose(&mut rng).cloned() else { return Ok(()) };
        let (first, second) = concurrency_analysis(&comp, &r2, &r1, &m21, kind).unwrap();
        let syn = concurrency_synthesis(&r2, &r1, &first, &second.matching, kind).unwrap();
        prop_assert_eq!(span_relation(&syn.composition.overlap), span_relation(&comp.overlap));
        prop_assert!(rule_iso(syn.composition.rule(), comp.rule()).is_some());
        let again = apply(&syn.composition.composite, &syn.matching, kind).unwrap();
        prop_assert!(isomorphic(again.result(), second.result()).is_some());
    }

    #[test]
    fn independence_verdicts_agree_and_switch(seed in any::<u64>(), dpo in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let kind = kind_of(dpo);
        let Some(c) = random_two_step(&mut rng, kind, false) else { return Ok(()) };
        let traditional = sequentially_independent(&c.second, &c.first).unwrap();
        let syn = concurrency_synthesis(&c.r2, &c.r1, &c.first, &c.second.matching, kind).unwrap();
        prop_assert_eq!(traditional, compositional_independence(&syn.composition));
        let switched = switch_match(&syn.composition, &c.r2, &c.r1, Bound::default()).unwrap();
        prop_assert_eq!(switched.is_some(), traditional);
        if let Some(s) = switched {
            prop_assert!(s.composites_isomorphic && s.amalgamated && s.conditions_equivalent);
        }
    }
}

fn creator(n: u32) -> RuleWithConditions {
    let empty = graph(0, &[]);
    Rule::new(Morphism::from_empty(&graph(n, &[])), Morphism::identity(&empty)).unwrap().into()
}

#[test]
fn disjoint_creators_compose_along_the_empty_overlap() {
    let (r1, r2) = (creator(1), creator(2));
    let all = enumerate_compositions(&r2, &r1, Kind::Dpo, Bound::default());
    assert_eq!(all.len(), 1);
    assert!(all[0].overlap.apex().is_empty());
    assert_eq!(all[0].composite.output().vertex_count(), 3);
}

#[test]
fn identity_after_a_rule_contains_the_rule() {
    let r = sprout();
    let id: RuleWithConditions = Rule::identity(r.output()).into();
    let all = enumerate_compositions(&id, &r, Kind::Dpo, Bound::default());
    assert!(all.iter().any(|c| rule_iso(c.rule(), r.rule()).is_some()));
}

#[test]
fn deleting_a_vertex_with_a_dangling_edge_is_dpo_inadmissible() {
    let v = graph(1, &[]);
    let empty = graph(0, &[]);
    let delete: RuleWithConditions =
        Rule::new(Morphism::identity(&empty), Morphism::from_empty(&v)).unwrap().into();
    let x = graph(2, &[(0, 1)]);
    let m = Morphism::new(v.clone(), x.clone(), vec![0], vec![]).unwrap();
    assert_eq!(apply(&delete, &m, Kind::Dpo).unwrap_err(), RewriteError::NoPushoutComplement);
    let sq = apply(&delete, &m, Kind::SqPo).unwrap();
    assert_eq!(sq.result().vertex_count(), 1);
    assert_eq!(sq.result().edge_count(), 0);
}

#[test]
fn consuming_what_the_first_step_made_is_dependent() {
    let r = sprout();
    let x0 = graph(1, &[]);
    let m1 = enumerate_monos(r.input(), &x0)[0].clone();
    let first = apply(&r, &m1, Kind::Dpo).unwrap();
    let fresh = first.comatch.v(1);
    let m2 = Morphism::new(r.input().clone(), first.result().clone(), vec![fresh], vec![]).unwrap();
    let second = apply(&r, &m2, Kind::Dpo).unwrap();
    assert!(!sequentially_independent(&second, &first).unwrap());
    let syn = concurrency_synthesis(&r, &r, &first, &m2, Kind::Dpo).unwrap();
    assert!(!compositional_independence(&syn.composition));
    assert!(switch_match(&syn.composition, &r, &r, Bound::default()).unwrap().is_none());
}

#[test]
fn overlap_legs_must_end_at_the_right_objects() {
    let r = sprout();
    let wrong = Span::identity(r.output());
    assert!(compose(&r, &wrong, &r, Kind::Dpo).is_err());
}
