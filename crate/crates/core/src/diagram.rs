//! Isomorphisms of finite diagrams of graphs.
//!
//! Two diagrams of the same shape are isomorphic when there is one graph
//! isomorphism per object such that every arrow square commutes. The search
//! assigns objects one at a time, most constrained first, and pins elements
//! through arrows to objects already assigned.

use std::collections::HashMap;
use std::ops::ControlFlow;

use crate::graph::{GraphRef, Id};
use crate::matching::HomSearch;
use crate::morphism::{same_graph, Morphism};
use crate::rule::Rule;

/// Objects plus arrows `(source index, target index, morphism)`.
#[derive(Debug, Clone, Default)]
pub struct Diagram {
    pub objects: Vec<GraphRef>,
    pub arrows: Vec<(usize, usize, Morphism)>,
}

impl Diagram {
    pub fn add_object(&mut self, g: GraphRef) -> usize {
        self.objects.push(g);
        self.objects.len() - 1
    }

    /// Adds an arrow between existing objects. Panics if the morphism's
    /// domain or codomain differs from the objects at those indices.
    pub fn add_arrow(&mut self, src: usize, tgt: usize, m: Morphism) {
        assert!(same_graph(m.dom(), &self.objects[src]), "arrow domain mismatch");
        assert!(same_graph(m.cod(), &self.objects[tgt]), "arrow codomain mismatch");
        self.arrows.push((src, tgt, m));
    }

    fn same_shape(&self, other: &Diagram) -> bool {
        self.objects.len() == other.objects.len()
            && self.arrows.len() == other.arrows.len()
            && self.arrows.iter().zip(&other.arrows).all(|(a, b)| a.0 == b.0 && a.1 == b.1)
    }
}

/// Finds object-wise isomorphisms `d1 -> d2` commuting with all arrows,
/// with the isomorphisms on the `fixed` objects prescribed.
pub fn diagram_iso(d1: &Diagram, d2: &Diagram, fixed: &[(usize, Morphism)]) -> Option<Vec<Morphism>> {
    let mut found = None;
    for_each_diagram_iso(d1, d2, fixed, |isos| {
        found = Some(isos.to_vec());
        ControlFlow::Break(())
    });
    found
}

/// Calls `visit` with each family of isomorphisms `d1 -> d2`.
pub fn for_each_diagram_iso(
    d1: &Diagram,
    d2: &Diagram,
    fixed: &[(usize, Morphism)],
    mut visit: impl FnMut(&[Morphism]) -> ControlFlow<()>,
) {
    if !d1.same_shape(d2) {
        return;
    }
    for (a, b) in d1.objects.iter().zip(&d2.objects) {
        if a.vertex_count() != b.vertex_count()
            || a.edge_count() != b.edge_count()
            || a.degree_profile() != b.degree_profile()
        {
            return;
        }
    }
    let n = d1.objects.len();
    let mut assigned: Vec<Option<Morphism>> = vec![None; n];
    for (k, iso) in fixed {
        if !iso.is_iso() || !same_graph(iso.dom(), &d1.objects[*k]) || !same_graph(iso.cod(), &d2.objects[*k]) {
            return;
        }
        assigned[*k] = Some(iso.clone());
    }
    let mut search = Search { d1, d2, assigned };
    if !search.consistent() {
        return;
    }
    let _ = search.step(&mut visit);
}

struct Search<'d> {
    d1: &'d Diagram,
    d2: &'d Diagram,
    assigned: Vec<Option<Morphism>>,
}

impl Search<'_> {
    /// Every arrow with both ends assigned commutes.
    fn consistent(&self) -> bool {
        self.d1.arrows.iter().zip(&self.d2.arrows).all(|((s, t, f), (_, _, g))| {
            match (&self.assigned[*s], &self.assigned[*t]) {
                (Some(ps), Some(pt)) => commutes(f, g, ps, pt),
                _ => true,
            }
        })
    }

    /// Pins for object `k` implied by arrows to and from assigned objects.
    /// Returns `None` on a contradiction.
    fn pins(&self, k: usize) -> Option<(Vec<(Id, Id)>, Vec<(Id, Id)>)> {
        let mut pv: Vec<(Id, Id)> = Vec::new();
        let mut pe: Vec<(Id, Id)> = Vec::new();
        for ((s, t, f), (_, _, g)) in self.d1.arrows.iter().zip(&self.d2.arrows) {
            if *t == k {
                if let Some(ps) = &self.assigned[*s] {
                    // phi_k(f(x)) = g(phi_s(x))
                    for (x, fx) in f.vertex_pairs() {
                        pv.push((fx, g.v(ps.v(x))));
                    }
                    for (x, fx) in f.edge_pairs() {
                        pe.push((fx, g.e(ps.e(x))));
                    }
                }
            }
            if *s == k && *t != k {
                if let Some(pt) = &self.assigned[*t] {
                    // g(phi_k(y)) = phi_t(f(y)); determined when g is mono.
                    if g.is_mono() {
                        let ginv_v: HashMap<Id, Id> =
                            g.vertex_pairs().map(|(a, b)| (b, a)).collect();
                        let ginv_e: HashMap<Id, Id> =
                            g.edge_pairs().map(|(a, b)| (b, a)).collect();
                        for (y, fy) in f.vertex_pairs() {
                            pv.push((y, *ginv_v.get(&pt.v(fy))?));
                        }
                        for (y, fy) in f.edge_pairs() {
                            pe.push((y, *ginv_e.get(&pt.e(fy))?));
                        }
                    }
                }
            }
        }
        Some((pv, pe))
    }

    fn pick_next(&self) -> Option<usize> {
        let mut best: Option<(usize, (usize, usize))> = None;
        for k in 0..self.assigned.len() {
            if self.assigned[k].is_some() {
                continue;
            }
            let links = self
                .d1
                .arrows
                .iter()
                .filter(|(s, t, _)| {
                    (*s == k && self.assigned[*t].is_some()) || (*t == k && self.assigned[*s].is_some())
                })
                .count();
            // Prefer linked objects, then smaller ones.
            let key = (links, usize::MAX - self.d1.objects[k].size());
            if best.is_none_or(|(_, b)| key > b) {
                best = Some((k, key));
            }
        }
        best.map(|(k, _)| k)
    }

    fn step(&mut self, visit: &mut impl FnMut(&[Morphism]) -> ControlFlow<()>) -> ControlFlow<()> {
        let Some(k) = self.pick_next() else {
            let isos: Vec<Morphism> = self.assigned.iter().map(|m| m.clone().expect("all assigned")).collect();
            return visit(&isos);
        };
        let Some((pv, pe)) = self.pins(k) else {
            return ControlFlow::Continue(());
        };
        let a = self.d1.objects[k].clone();
        let b = self.d2.objects[k].clone();
        let mut search = HomSearch::new(&a, &b, true);
        for (x, y) in pv {
            search = search.fix_vertex(x, y);
        }
        for (x, y) in pe {
            search = search.fix_edge(x, y);
        }
        let candidates = search.collect(&a, &b);
        for iso in candidates {
            self.assigned[k] = Some(iso);
            if self.consistent() {
                self.step(visit)?;
            }
        }
        self.assigned[k] = None;
        ControlFlow::Continue(())
    }
}

/// `pt ∘ f == g ∘ ps` elementwise.
fn commutes(f: &Morphism, g: &Morphism, ps: &Morphism, pt: &Morphism) -> bool {
    f.vertex_pairs().all(|(x, fx)| pt.v(fx) == g.v(ps.v(x)))
        && f.edge_pairs().all(|(x, fx)| pt.e(fx) == g.e(ps.e(x)))
}

/// The diagram `O <- K -> I` of a rule, objects in that order.
pub fn rule_diagram(r: &Rule) -> Diagram {
    let mut d = Diagram::default();
    let o = d.add_object(r.output().clone());
    let k = d.add_object(r.context().clone());
    let i = d.add_object(r.input().clone());
    d.add_arrow(k, o, r.o().clone());
    d.add_arrow(k, i, r.i().clone());
    d
}

/// Isomorphisms `(O, K, I)` between two rules, if any.
pub fn rule_iso(r1: &Rule, r2: &Rule) -> Option<Vec<Morphism>> {
    if r1.quick_iso_reject(r2) {
        return None;
    }
    diagram_iso(&rule_diagram(r1), &rule_diagram(r2), &[])
}
