//! Brute-force oracles shared by the integration tests and the acceptance
//! suite. Nothing here calls the construction it checks.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use tracelets::colimits::Cospan;
use tracelets::diagram::{diagram_iso, for_each_diagram_iso, Diagram};
use tracelets::graph::{Graph, GraphRef, Id};
use tracelets::matching::enumerate_homs;
use tracelets::morphism::Morphism;
use tracelets::rewriting::{apply, find_matches, Kind, RuleWithConditions};
use tracelets::rule::Rule;
use tracelets::tracelet::{tracelet_diagram, DerivationTrace, Tracelet};

pub fn graph(n: u32, edges: &[(Id, Id)]) -> GraphRef {
    Graph::from_edges(n, edges).into_ref()
}

/// `o <- k -> i` with both legs inclusions.
pub fn inclusion_rule(o: &GraphRef, k: &GraphRef, i: &GraphRef) -> RuleWithConditions {
    Rule::new(Morphism::inclusion(k, o).unwrap(), Morphism::inclusion(k, i).unwrap()).unwrap().into()
}

/// Adds a fresh vertex `1` and an edge `0 -> 1` at a vertex `0`.
pub fn sprout() -> RuleWithConditions {
    let v = graph(1, &[]);
    inclusion_rule(&graph(2, &[(0, 1)]), &v, &v)
}

/// Adds a path `0 -> 1 -> 2` of two fresh vertices at a vertex `0`.
pub fn double_sprout() -> RuleWithConditions {
    let v = graph(1, &[]);
    inclusion_rule(&graph(3, &[(0, 1), (1, 2)]), &v, &v)
}

/// Fires on an edge `0 -> 1` and adds the back edge `1 -> 0`.
pub fn back_edge() -> RuleWithConditions {
    let e = graph(2, &[(0, 1)]);
    inclusion_rule(&graph(2, &[(0, 1), (1, 0)]), &e, &e)
}

/// Fires on two edges from distinct vertices into a common vertex.
pub fn converging_pair() -> RuleWithConditions {
    Rule::identity(&graph(3, &[(0, 2), (1, 2)])).into()
}

// ---------------------------------------------------------------------------
// Element sets

pub type Elements = (BTreeSet<Id>, BTreeSet<Id>);

pub fn image_of(m: &Morphism) -> Elements {
    (m.vmap().iter().copied().collect(), m.emap().iter().copied().collect())
}

pub fn all_of(g: &Graph) -> Elements {
    (g.vertices().iter().copied().collect(), g.edges().iter().map(|e| e.id).collect())
}

fn union(a: &Elements, b: &Elements) -> Elements {
    (a.0.union(&b.0).copied().collect(), a.1.union(&b.1).copied().collect())
}

fn intersection(a: &Elements, b: &Elements) -> Elements {
    (a.0.intersection(&b.0).copied().collect(), a.1.intersection(&b.1).copied().collect())
}

fn subset(a: &Elements, b: &Elements) -> bool {
    a.0.is_subset(&b.0) && a.1.is_subset(&b.1)
}

/// Every subgraph of `g` as its element set, by subset enumeration.
pub fn subgraphs(g: &Graph) -> Vec<Elements> {
    let vs = g.vertices();
    let mut out = Vec::new();
    for vmask in 0u32..(1 << vs.len()) {
        let kept: BTreeSet<Id> = vs.iter().enumerate().filter(|(k, _)| vmask >> k & 1 == 1).map(|(_, v)| *v).collect();
        let allowed: Vec<Id> =
            g.edges().iter().filter(|e| kept.contains(&e.src) && kept.contains(&e.tgt)).map(|e| e.id).collect();
        for emask in 0u32..(1 << allowed.len()) {
            let es = allowed.iter().enumerate().filter(|(k, _)| emask >> k & 1 == 1).map(|(_, e)| *e).collect();
            out.push((kept.clone(), es));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Universal properties by exhaustive cocone and cone enumeration

/// Whether the commuting square `in_b ∘ f = in_c ∘ g` has the pushout
/// property against every cocone into every tester.
pub fn is_pushout_square(f: &Morphism, g: &Morphism, in_b: &Morphism, in_c: &Morphism, testers: &[GraphRef]) -> bool {
    if f.then(in_b).unwrap() != g.then(in_c).unwrap() {
        return false;
    }
    for z in testers {
        let mut via_c: HashMap<Morphism, usize> = HashMap::new();
        for hc in enumerate_homs(in_c.dom(), z) {
            *via_c.entry(g.then(&hc).unwrap()).or_default() += 1;
        }
        let mut cocones = 0usize;
        for hb in enumerate_homs(in_b.dom(), z) {
            cocones += via_c.get(&f.then(&hb).unwrap()).copied().unwrap_or(0);
        }
        let mut seen = std::collections::HashSet::new();
        for u in enumerate_homs(in_b.cod(), z) {
            let pair = (in_b.then(&u).unwrap(), in_c.then(&u).unwrap());
            if !seen.insert(pair) {
                return false;
            }
        }
        if seen.len() != cocones {
            return false;
        }
    }
    true
}

/// Whether the commuting square `f ∘ p_b = g ∘ p_c` has the pullback
/// property against every cone from every tester.
pub fn is_pullback_square(f: &Morphism, g: &Morphism, p_b: &Morphism, p_c: &Morphism, testers: &[GraphRef]) -> bool {
    if p_b.then(f).unwrap() != p_c.then(g).unwrap() {
        return false;
    }
    for w in testers {
        let mut via_c: HashMap<Morphism, usize> = HashMap::new();
        for wc in enumerate_homs(w, g.dom()) {
            *via_c.entry(wc.then(g).unwrap()).or_default() += 1;
        }
        let mut cones = 0usize;
        for wb in enumerate_homs(w, f.dom()) {
            cones += via_c.get(&wb.then(f).unwrap()).copied().unwrap_or(0);
        }
        let mut seen = std::collections::HashSet::new();
        for u in enumerate_homs(w, p_b.dom()) {
            let pair = (u.then(p_b).unwrap(), u.then(p_c).unwrap());
            if !seen.insert(pair) {
                return false;
            }
        }
        if seen.len() != cones {
            return false;
        }
    }
    true
}

pub fn cospan_is_pushout(f: &Morphism, g: &Morphism, c: &Cospan, testers: &[GraphRef]) -> bool {
    is_pushout_square(f, g, &c.left, &c.right, testers)
}

/// `e` cancels on the right against every pair of maps into the testers.
pub fn right_cancellable(e: &Morphism, testers: &[GraphRef]) -> bool {
    testers.iter().all(|z| {
        let homs = enumerate_homs(e.cod(), z);
        let mut by_restriction: HashMap<Morphism, usize> = HashMap::new();
        for h in &homs {
            *by_restriction.entry(e.then(h).unwrap()).or_default() += 1;
        }
        by_restriction.values().all(|&k| k == 1)
    })
}

/// The pushout complements of `a: K -> I` and `m: I -> X`, as subgraphs of
/// `X`: every `D` with `D ∪ m(I) = X` and `D ∩ m(I) = m(a(K))`.
pub fn pushout_complements(a: &Morphism, m: &Morphism) -> Vec<Elements> {
    let x = all_of(m.cod());
    let mi = image_of(m);
    let mk = image_of(&a.then(m).unwrap());
    subgraphs(m.cod()).into_iter().filter(|d| union(d, &mi) == x && intersection(d, &mi) == mk).collect()
}

/// The largest subgraph `Z` of `X` with `Z ∩ m(I) ⊆ m(a(K))`, found by
/// checking every competitor.
pub fn largest_pullback_complement(a: &Morphism, m: &Morphism) -> Elements {
    let mi = image_of(m);
    let mk = image_of(&a.then(m).unwrap());
    let ok: Vec<Elements> = subgraphs(m.cod()).into_iter().filter(|z| subset(&intersection(z, &mi), &mk)).collect();
    let top = ok.iter().max_by_key(|z| z.0.len() + z.1.len()).cloned().unwrap();
    assert!(ok.iter().all(|z| subset(z, &top)), "competitors have no largest element");
    top
}

// ---------------------------------------------------------------------------
// Derivation traces

/// Every trace of exactly `len` steps from `x0`, applying any rule at any
/// admissible match at each step. Each trace carries its rule indices.
pub fn enumerate_traces(
    rules: &[RuleWithConditions],
    x0: &GraphRef,
    len: usize,
    kind: Kind,
) -> Vec<(Vec<usize>, DerivationTrace)> {
    let mut frontier: Vec<(Vec<usize>, Option<DerivationTrace>, GraphRef)> = vec![(Vec::new(), None, x0.clone())];
    for _ in 0..len {
        let mut next = Vec::new();
        for (idx, tr, x) in &frontier {
            for (k, r) in rules.iter().enumerate() {
                for m in find_matches(r, x, kind) {
                    let step = apply(r, &m, kind).expect("admissible match");
                    let y = step.result().clone();
                    let tr = match tr {
                        None => DerivationTrace::single(r.clone(), step),
                        Some(t) => {
                            let mut t = t.clone();
                            t.push(r.clone(), step).expect("chained");
                            t
                        }
                    };
                    let mut idx = idx.clone();
                    idx.push(k);
                    next.push((idx, Some(tr), y));
                }
            }
        }
        frontier = next;
    }
    frontier.into_iter().map(|(i, t, _)| (i, t.expect("len > 0"))).collect()
}

/// Levels `X_0..X_n` first, then `O, K, I, Xbar` per step.
pub fn trace_diagram(tr: &DerivationTrace) -> Diagram {
    let mut d = Diagram::default();
    d.add_object(tr.start().clone());
    for s in tr.steps() {
        d.add_object(s.result().clone());
    }
    for (j, s) in tr.steps().iter().enumerate() {
        let o = d.add_object(s.rule.output().clone());
        let k = d.add_object(s.rule.context().clone());
        let i = d.add_object(s.rule.input().clone());
        let bar = d.add_object(s.interior.cod().clone());
        d.add_arrow(k, o, s.rule.o().clone());
        d.add_arrow(k, i, s.rule.i().clone());
        d.add_arrow(k, bar, s.interior.clone());
        d.add_arrow(bar, j, s.into_input.clone());
        d.add_arrow(bar, j + 1, s.into_output.clone());
        d.add_arrow(i, j, s.matching.clone());
        d.add_arrow(o, j + 1, s.comatch.clone());
    }
    d
}

/// Identity constraints on `X_0` and on every rule object.
fn fixed_objects(d1: &Diagram, d2: &Diagram, levels: usize, steps: usize) -> Option<Vec<(usize, Morphism)>> {
    let mut fixed = Vec::new();
    let mut pin = |k: usize| -> Option<()> {
        if d1.objects[k] != d2.objects[k] {
            return None;
        }
        fixed.push((k, Morphism::identity(&d1.objects[k]).with_cod(&d2.objects[k])));
        Some(())
    };
    pin(0)?;
    for j in 0..steps {
        for off in 0..3 {
            pin(levels + 4 * j + off)?;
        }
    }
    Some(fixed)
}

/// Isomorphic as diagrams, fixing the start graph and the rules.
pub fn traces_isomorphic(a: &DerivationTrace, b: &DerivationTrace) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let (d1, d2) = (trace_diagram(a), trace_diagram(b));
    let Some(fixed) = fixed_objects(&d1, &d2, a.len() + 1, a.len()) else { return false };
    diagram_iso(&d1, &d2, &fixed).is_some()
}

/// Whether `(a, ma)` and `(b, mb)` are related by a tracelet isomorphism
/// fixing the rules whose input component carries `ma` to `mb`.
pub fn matched_tracelets_equivalent(a: &Tracelet, ma: &Morphism, b: &Tracelet, mb: &Morphism) -> bool {
    if a.len() != b.len() || ma.cod() != mb.cod() {
        return false;
    }
    let (d1, d2) = (tracelet_diagram(a), tracelet_diagram(b));
    let n = a.len();
    let mut fixed = Vec::new();
    for j in 0..n {
        for off in 0..3 {
            let k = n + 1 + 4 * j + off;
            if d1.objects[k] != d2.objects[k] {
                return false;
            }
            fixed.push((k, Morphism::identity(&d1.objects[k]).with_cod(&d2.objects[k])));
        }
    }
    let mut found = false;
    for_each_diagram_iso(&d1, &d2, &fixed, |isos| {
        if isos[0].then(mb).unwrap() == ma.with_cod(mb.cod()) {
            found = true;
            return std::ops::ControlFlow::Break(());
        }
        std::ops::ControlFlow::Continue(())
    });
    found
}

/// Whether `pattern` has an injective occurrence in `g`.
pub fn occurs(pattern: &GraphRef, g: &GraphRef) -> bool {
    tracelets::matching::find_mono(pattern, g).is_some()
}

// ---------------------------------------------------------------------------
// Random two-step derivations

pub struct TwoStep {
    pub r1: RuleWithConditions,
    pub r2: RuleWithConditions,
    pub first: tracelets::rewriting::DirectDerivation,
    pub second: tracelets::rewriting::DirectDerivation,
}

/// A rule of at most three vertices; with `conditional`, half of them carry
/// a random condition of depth one.
pub fn random_rule_with_condition<R: rand::Rng>(rng: &mut R, conditional: bool) -> RuleWithConditions {
    let r = tracelets::sample::random_rule(rng, 3);
    if conditional && rng.gen_bool(0.5) {
        let c = tracelets::sample::random_condition(rng, r.input(), 1);
        RuleWithConditions::new(r.rule().clone(), c).unwrap()
    } else {
        r
    }
}

/// `X0 => X1 => X2` with random rules at random admissible matches, on a
/// start graph of at most four vertices. `None` if no attempt applies.
pub fn random_two_step<R: rand::Rng>(rng: &mut R, kind: Kind, conditional: bool) -> Option<TwoStep> {
    use rand::seq::SliceRandom;
    for _ in 0..50 {
        let x0 = tracelets::sample::random_graph(rng, 4, 4).into_ref();
        let r1 = random_rule_with_condition(rng, conditional);
        let r2 = random_rule_with_condition(rng, conditional);
        let Some(m1) = find_matches(&r1, &x0, kind).choose(rng).cloned() else { continue };
        let first = apply(&r1, &m1, kind).unwrap();
        let Some(m2) = find_matches(&r2, first.result(), kind).choose(rng).cloned() else { continue };
        let second = apply(&r2, &m2, kind).unwrap();
        return Some(TwoStep { r1, r2, first, second });
    }
    None
}

/// The relation a span of monos induces between its two feet.
pub fn span_relation(s: &tracelets::colimits::Span) -> (BTreeSet<(Id, Id)>, BTreeSet<(Id, Id)>) {
    (
        s.left.vmap().iter().copied().zip(s.right.vmap().iter().copied()).collect(),
        s.left.emap().iter().copied().zip(s.right.emap().iter().copied()).collect(),
    )
}

// ---------------------------------------------------------------------------
// Tracelet-level checks

/// Both bracketings of `t3 ∘ t2 ∘ t1`, over every admissible pair of overlaps.
pub fn both_bracketings(
    t3: &Tracelet,
    t2: &Tracelet,
    t1: &Tracelet,
    kind: Kind,
    bound: tracelets::condition::Bound,
) -> (Vec<Tracelet>, Vec<Tracelet>) {
    use tracelets::tracelet::enumerate_tracelet_compositions as all;
    let left = all(t2, t1, kind, bound).into_iter().flat_map(|(_, t21)| all(t3, &t21, kind, bound)).map(|(_, t)| t).collect();
    let right = all(t3, t2, kind, bound).into_iter().flat_map(|(_, t32)| all(&t32, t1, kind, bound)).map(|(_, t)| t).collect();
    (left, right)
}

/// A bijection pairing abstraction-equivalent tracelets exists.
pub fn iso_pairing(a: &[Tracelet], b: &[Tracelet], bound: tracelets::condition::Bound) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    a.iter().all(|x| {
        let hit = (0..b.len()).find(|&k| !used[k] && tracelets::tracelet::abstraction_equivalent(x, &b[k], bound));
        hit.map(|k| used[k] = true).is_some()
    })
}

/// Round trip and injectivity over all traces of length `len`. Returns the
/// number of traces checked.
pub fn check_characterization(rules: &[RuleWithConditions], x0: &GraphRef, len: usize, kind: Kind) -> Result<usize, String> {
    use tracelets::tracelet::{apply_tracelet, tracelet_from_trace};
    let traces = enumerate_traces(rules, x0, len, kind);
    let mut groups: HashMap<(Vec<usize>, Elements), Vec<(usize, Tracelet, Morphism)>> = HashMap::new();
    for (k, (idx, tr)) in traces.iter().enumerate() {
        let (t, m) = tracelet_from_trace(tr).map_err(|e| format!("trace {k} {idx:?}: {e}"))?;
        let back = apply_tracelet(&t, x0, &m).map_err(|e| format!("trace {k} {idx:?}: reapply: {e}"))?;
        if !traces_isomorphic(&back, tr) {
            return Err(format!("trace {k} {idx:?}: reapplying its tracelet gives a different trace"));
        }
        groups.entry((idx.clone(), image_of(&m))).or_default().push((k, t, m));
    }
    for members in groups.values() {
        for (p, (ka, ta, ma)) in members.iter().enumerate() {
            for (kb, tb, mb) in &members[p + 1..] {
                let same_pair = matched_tracelets_equivalent(ta, ma, tb, mb);
                let same_trace = traces_isomorphic(&traces[*ka].1, &traces[*kb].1);
                if same_pair != same_trace {
                    return Err(format!("traces {ka} and {kb}: tracelet classes {same_pair}, trace classes {same_trace}"));
                }
            }
        }
    }
    Ok(traces.len())
}

/// Every graph on one to three vertices with at most two edges.
pub fn small_graphs() -> Vec<GraphRef> {
    let mut out = Vec::new();
    for n in 1..=3u32 {
        let pairs: Vec<(u32, u32)> = (0..n).flat_map(|s| (0..n).map(move |t| (s, t))).collect();
        out.push(graph(n, &[]));
        for (a, p) in pairs.iter().enumerate() {
            out.push(graph(n, &[*p]));
            for q in &pairs[a..] {
                out.push(graph(n, &[*p, *q]));
            }
        }
    }
    out
}
