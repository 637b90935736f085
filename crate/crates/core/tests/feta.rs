mod support;

use support::*;
use tracelets::feta::{feta, precedes, quotient, PathwayQuery, PathwaySet};
use tracelets::graph::GraphRef;
use tracelets::matching::isomorphic;
use tracelets::morphism::Morphism;
use tracelets::rewriting::{Kind, RuleWithConditions};
use tracelets::tracelet::{
    abstraction_equivalent, apply_tracelet, shift_equivalent, tracelet_from_trace, EquivalenceConfig, Tracelet,
};

fn query(target: RuleWithConditions, name: &str, nmax: usize) -> PathwayQuery {
    PathwayQuery {
        transitions: vec![("r".into(), sprout())],
        target: (name.into(), target),
        nmax,
        kind: Kind::Dpo,
        config: EquivalenceConfig::default(),
    }
}

/// A path of `n` edges from a single root with the back edge on its last edge.
fn chain_with_back_edge(n: u32) -> GraphRef {
    let mut edges: Vec<(u32, u32)> = (0..n).map(|k| (k, k + 1)).collect();
    edges.push((n, n - 1));
    graph(n + 1, &edges)
}

fn equivalent(a: &Tracelet, b: &Tracelet) -> bool {
    let config = EquivalenceConfig::default();
    abstraction_equivalent(a, b, config.bound) || shift_equivalent(a, b, config).with_conditions
}

#[test]
fn sprout_fixture_back_edge_pathways_are_single_chains() {
    let set = feta(&query(back_edge(), "e1", 4));
    for n in 2..=4 {
        let level = set.of_length(n);
        assert_eq!(level.len(), 1, "length {n}");
        let p = &level[0];
        let mut names = vec!["r"; n - 1];
        names.push("e1");
        assert_eq!(p.rules, names);
        assert_eq!(p.tracelet.input().vertex_count(), 1);
        assert!(isomorphic(p.tracelet.output(), &chain_with_back_edge(n as u32 - 1)).is_some());
    }
}

#[test]
fn sprout_fixture_converging_pair_has_no_pathways() {
    let set = feta(&query(converging_pair(), "e2", 3));
    assert_eq!(set.of_length(1).len(), 1);
    assert!(set.of_length(2).is_empty());
    assert!(set.of_length(3).is_empty());
}

#[test]
fn sprouting_never_creates_a_converging_pair() {
    let pattern = converging_pair().input().clone();
    let rules = [sprout()];
    for x0 in small_graphs().into_iter().filter(|g| !occurs(&pattern, g)) {
        for len in 1..=4 {
            for (_, tr) in enumerate_traces(&rules, &x0, len, Kind::Dpo) {
                assert!(!occurs(&pattern, tr.result()), "created from {x0:?} in {len} steps");
            }
        }
    }
}

#[test]
fn pathways_are_sound_and_canonical() {
    let q = query(back_edge(), "e1", 4);
    let set: PathwaySet = feta(&q);
    for level in &set.levels {
        for p in level {
            let t = &p.tracelet;
            let tr = apply_tracelet(t, t.input(), &Morphism::identity(t.input())).unwrap();
            assert_eq!(tr.rules().last().unwrap(), &back_edge());
            assert!(precedes(&back_edge(), t, q.config));
        }
        let again = quotient(level.clone(), q.config);
        assert_eq!(again.len(), level.len());
        for (a, b) in again.iter().zip(level) {
            assert_eq!(a.rules, b.rules);
            assert!(abstraction_equivalent(&a.tracelet, &b.tracelet, q.config.bound));
        }
    }
}

/// Traces ending in the target whose target step cannot move earlier are
/// all represented among the pathways.
#[test]
fn brute_force_traces_are_covered_by_pathways() {
    let q = query(back_edge(), "e1", 3);
    let set = feta(&q);
    let rules = [sprout(), back_edge()];
    let starts = [graph(1, &[]), graph(2, &[]), graph(2, &[(0, 1)])];
    let mut covered = 0;
    for x0 in &starts {
        for len in 2..=3 {
            for (idx, tr) in enumerate_traces(&rules, x0, len, Kind::Dpo) {
                if idx[..len - 1].iter().any(|&k| k == 1) || idx[len - 1] != 1 {
                    continue;
                }
                let (t, _) = tracelet_from_trace(&tr).unwrap();
                if !precedes(&back_edge(), &t, q.config) {
                    continue;
                }
                assert!(set.of_length(len).iter().any(|p| equivalent(&p.tracelet, &t)), "uncovered {idx:?} from {x0:?}");
                covered += 1;
            }
        }
    }
    assert!(covered > 0);
}
