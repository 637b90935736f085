//! Static synthesis of strongly compressed pathways: tracelets that end in a
//! target event which cannot be moved to an earlier position.
//!
//! Pathways of length `n` are obtained by prepending one transition to each
//! pathway of length `n - 1`, dropping candidates in which the target can
//! be placed earlier, and keeping one representative per equivalence class.

use std::collections::BTreeMap;

use itertools::Itertools;
use serde_json::{json, Value};

use crate::diagram::rule_iso;
use crate::io::json::tracelet_value;
use crate::io::json::tracelet_key;
use crate::rewriting::{conditions_agree, Kind, RuleWithConditions};
use crate::tracelet::{
    abstraction_equivalent, enumerate_tracelet_compositions, shift_equivalent, surgery, EquivalenceConfig, Tracelet,
};

#[derive(Debug, Clone)]
pub struct PathwayQuery {
    pub transitions: Vec<(String, RuleWithConditions)>,
    pub target: (String, RuleWithConditions),
    pub nmax: usize,
    pub kind: Kind,
    pub config: EquivalenceConfig,
}

/// A pathway with the names of its rules in application order.
#[derive(Debug, Clone)]
pub struct Pathway {
    pub tracelet: Tracelet,
    pub rules: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct PathwaySet {
    /// `levels[n - 1]` holds the pathways of length `n`.
    pub levels: Vec<Vec<Pathway>>,
    pub diagnostics: Vec<String>,
}

impl PathwaySet {
    pub fn of_length(&self, n: usize) -> &[Pathway] {
        self.levels.get(n.wrapping_sub(1)).map(Vec::as_slice).unwrap_or(&[])
    }
}

fn same_rule(a: &RuleWithConditions, b: &RuleWithConditions, config: EquivalenceConfig) -> bool {
    a == b || (rule_iso(a.rule(), b.rule()).is_some() && conditions_agree(a, b, config.bound))
}

/// Whether the last step of `t` (a copy of `target`) cannot be moved to an
/// earlier position by a shift step on a window ending at the last step.
/// Windows of every length are tried here; the window cap only limits the
/// shift steps used for quotienting.
pub fn precedes(target: &RuleWithConditions, t: &Tracelet, config: EquivalenceConfig) -> bool {
    let n = t.len();
    if n == 1 {
        return true;
    }
    if t.rules()[..n - 1].iter().any(|r| same_rule(r, target, config)) {
        return false;
    }
    for size in 2..=n {
        let lo = n - size;
        let Ok((_, window)) = surgery(t, lo, n - 1) else { continue };
        let goal = window.evaluate();
        let rules = &t.rules()[lo..];
        for perm in (0..size).permutations(size) {
            if same_rule(&rules[perm[size - 1]], target, config) {
                continue;
            }
            let order: Vec<&RuleWithConditions> = perm.iter().map(|&p| &rules[p]).collect();
            if has_reordering(&order, t.kind(), goal, config) {
                return false;
            }
        }
    }
    true
}

/// Whether some tracelet applying `order` evaluates to `goal`.
fn has_reordering(
    order: &[&RuleWithConditions],
    kind: Kind,
    goal: &RuleWithConditions,
    config: EquivalenceConfig,
) -> bool {
    let fits = |t: &Tracelet| {
        let i = t.input();
        i.vertex_count() <= goal.input().vertex_count() && i.edge_count() <= goal.input().edge_count()
    };
    let mut acc = vec![Tracelet::of_rule(order[0], kind)];
    for r in &order[1..] {
        let single = Tracelet::of_rule(r, kind);
        acc = acc
            .iter()
            .flat_map(|a| enumerate_tracelet_compositions(&single, a, kind, config.bound))
            .map(|(_, t)| t)
            .filter(fits)
            .collect();
    }
    acc.iter().any(|t| conditions_agree(t.evaluate(), goal, config.bound))
}

/// One representative per class of the equivalence generated by
/// abstraction and shift equivalence, sorted by canonical form.
pub fn quotient(items: Vec<Pathway>, config: EquivalenceConfig) -> Vec<Pathway> {
    let n = items.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if find(&mut parent, i) == find(&mut parent, j) {
                continue;
            }
            let (a, b) = (&items[i].tracelet, &items[j].tracelet);
            if abstraction_equivalent(a, b, config.bound) || shift_equivalent(a, b, config).with_conditions {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let keys: Vec<String> = items.iter().map(|p| tracelet_key(&p.tracelet)).collect();
    let mut best: BTreeMap<usize, usize> = BTreeMap::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        let slot = best.entry(root).or_insert(i);
        if keys[i] < keys[*slot] {
            *slot = i;
        }
    }
    let mut chosen: Vec<usize> = best.into_values().collect();
    chosen.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    let mut items: Vec<Option<Pathway>> = items.into_iter().map(Some).collect();
    chosen.into_iter().map(|i| items[i].take().expect("chosen once")).collect()
}

pub fn feta(q: &PathwayQuery) -> PathwaySet {
    let (target_name, target) = &q.target;
    let mut diagnostics = Vec::new();
    let conditional = std::iter::once(target).chain(q.transitions.iter().map(|(_, r)| r)).any(|r| !r.cond().is_true());
    if conditional {
        let b = q.config.bound;
        diagnostics.push(format!(
            "conditions were model-checked on extensions by at most {} vertices and {} edges; \
             satisfiability beyond that bound is not covered",
            b.extra_vertices, b.extra_edges
        ));
    }
    let first = Pathway { tracelet: Tracelet::of_rule(target, q.kind), rules: vec![target_name.clone()] };
    let mut levels = vec![vec![first]];
    let singles: Vec<(String, Tracelet)> =
        q.transitions.iter().map(|(name, r)| (name.clone(), Tracelet::of_rule(r, q.kind))).collect();
    for _ in 2..=q.nmax {
        let mut pre = Vec::new();
        for p in levels.last().expect("non-empty") {
            for (name, single) in &singles {
                for (_, t) in enumerate_tracelet_compositions(&p.tracelet, single, q.kind, q.config.bound) {
                    let mut rules = vec![name.clone()];
                    rules.extend(p.rules.iter().cloned());
                    pre.push(Pathway { tracelet: t, rules });
                }
            }
        }
        let kept: Vec<Pathway> = pre.into_iter().filter(|p| precedes(target, &p.tracelet, q.config)).collect();
        levels.push(quotient(kept, q.config));
    }
    PathwaySet { levels, diagnostics }
}

/// The pathway report: query echo, search closure, diagnostics, and the
/// pathways of each length.
pub fn pathway_report(q: &PathwayQuery, set: &PathwaySet) -> Value {
    let levels: Vec<Value> = set
        .levels
        .iter()
        .enumerate()
        .map(|(k, ps)| {
            json!({
                "length": k + 1,
                "count": ps.len(),
                "pathways": ps.iter().map(|p| json!({"rules": p.rules, "tracelet": tracelet_value(&p.tracelet)})).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "query": {
            "target": q.target.0,
            "transitions": q.transitions.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>(),
            "nmax": q.nmax,
            "type": q.kind.to_string(),
            "bound": {"vertices": q.config.bound.extra_vertices, "edges": q.config.bound.extra_edges},
            "window": q.config.window_cap,
        },
        "closure": format!(
            "target placement searched over permutations of every window ending at the target; \
             classes generated by abstraction and shift equivalence on windows of at most {} steps",
            q.config.window_cap + 1
        ),
        "diagnostics": set.diagnostics,
        "levels": levels,
    })
}
