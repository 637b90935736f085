//! Backtracking enumeration of graph morphisms.
//!
//! Vertices of the domain are assigned in id order and candidates are tried
//! in id order, then edges likewise, so results come out sorted
//! lexicographically by `(vmap, emap)`.

use std::collections::HashSet;
use std::ops::ControlFlow;

use crate::graph::{Adjacency, Graph, GraphRef, Id};
use crate::morphism::{same_graph, Morphism};

/// A configurable search for morphisms `dom -> cod`.
pub struct HomSearch<'a> {
    dom: &'a Graph,
    cod: &'a Graph,
    injective: bool,
    fixed_v: Vec<Option<Id>>,
    fixed_e: Vec<Option<Id>>,
    conflict: bool,
}

impl<'a> HomSearch<'a> {
    pub fn new(dom: &'a Graph, cod: &'a Graph, injective: bool) -> Self {
        HomSearch {
            dom,
            cod,
            injective,
            fixed_v: vec![None; dom.vertex_count()],
            fixed_e: vec![None; dom.edge_count()],
            conflict: false,
        }
    }

    /// Requires `v` to be sent to `w`.
    pub fn fix_vertex(mut self, v: Id, w: Id) -> Self {
        self.pin_vertex(v, w);
        self
    }

    /// Requires edge `e` to be sent to `f` (and its endpoints accordingly).
    pub fn fix_edge(mut self, e: Id, f: Id) -> Self {
        let (Some(i), Some(de), Some(ce)) = (self.dom.edge_index(e), self.dom.edge(e), self.cod.edge(f))
        else {
            self.conflict = true;
            return self;
        };
        match self.fixed_e[i] {
            Some(old) if old != f => self.conflict = true,
            _ => self.fixed_e[i] = Some(f),
        }
        self.pin_vertex(de.src, ce.src);
        self.pin_vertex(de.tgt, ce.tgt);
        self
    }

    fn pin_vertex(&mut self, v: Id, w: Id) {
        match self.dom.vertex_index(v) {
            Some(i) if self.cod.has_vertex(w) => match self.fixed_v[i] {
                Some(old) if old != w => self.conflict = true,
                _ => self.fixed_v[i] = Some(w),
            },
            _ => self.conflict = true,
        }
    }

    /// Calls `visit(vmap, emap)` for every morphism, in canonical order,
    /// until it returns `Break`.
    pub fn for_each(&self, mut visit: impl FnMut(&[Id], &[Id]) -> ControlFlow<()>) {
        if self.conflict {
            return;
        }
        if self.injective
            && (self.dom.vertex_count() > self.cod.vertex_count()
                || self.dom.edge_count() > self.cod.edge_count())
        {
            return;
        }
        let mut st = State::new(self);
        let _ = st.assign_vertex(0, &mut visit);
    }

    pub fn collect(&self, dom: &GraphRef, cod: &GraphRef) -> Vec<Morphism> {
        let mut out = Vec::new();
        self.for_each(|vm, em| {
            out.push(Morphism::new_unchecked(dom.clone(), cod.clone(), vm.to_vec(), em.to_vec()));
            ControlFlow::Continue(())
        });
        out
    }

    pub fn first(&self, dom: &GraphRef, cod: &GraphRef) -> Option<Morphism> {
        let mut out = None;
        self.for_each(|vm, em| {
            out = Some(Morphism::new_unchecked(dom.clone(), cod.clone(), vm.to_vec(), em.to_vec()));
            ControlFlow::Break(())
        });
        out
    }

    pub fn count(&self) -> usize {
        let mut n = 0;
        self.for_each(|_, _| {
            n += 1;
            ControlFlow::Continue(())
        });
        n
    }
}

struct State<'s, 'a> {
    search: &'s HomSearch<'a>,
    adj: Adjacency,
    // Per dom vertex index: (source index, target index, edge multiplicity)
    // for every connected pair whose later-assigned endpoint is this vertex.
    checks: Vec<Vec<(usize, usize, usize)>>,
    dom_deg: Vec<(usize, usize, usize)>,
    vmap: Vec<Id>,
    emap: Vec<Id>,
    used_v: HashSet<Id>,
    used_e: HashSet<Id>,
}

impl<'s, 'a> State<'s, 'a> {
    fn new(search: &'s HomSearch<'a>) -> Self {
        let dom = search.dom;
        let dom_adj = Adjacency::of(dom);
        let mut checks = vec![Vec::new(); dom.vertex_count()];
        for (&(s, t), ids) in &dom_adj.between {
            let si = dom.vertex_index(s).expect("valid graph");
            let ti = dom.vertex_index(t).expect("valid graph");
            checks[si.max(ti)].push((si, ti, ids.len()));
        }
        for c in &mut checks {
            c.sort_unstable();
        }
        let dom_deg = dom.vertices().iter().map(|&v| dom_adj.degrees(v)).collect();
        State {
            search,
            adj: Adjacency::of(search.cod),
            checks,
            dom_deg,
            vmap: Vec::with_capacity(dom.vertex_count()),
            emap: Vec::with_capacity(dom.edge_count()),
            used_v: HashSet::new(),
            used_e: HashSet::new(),
        }
    }

    fn assign_vertex(
        &mut self,
        i: usize,
        visit: &mut impl FnMut(&[Id], &[Id]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let s = self.search;
        if i == s.dom.vertex_count() {
            return self.assign_edge(0, visit);
        }
        let candidates: Vec<Id> = match s.fixed_v[i] {
            Some(w) => vec![w],
            None => s.cod.vertices().to_vec(),
        };
        for w in candidates {
            if !self.try_vertex(i, w) {
                continue;
            }
            if s.injective {
                self.used_v.insert(w);
            }
            let flow = self.assign_vertex(i + 1, visit);
            if s.injective {
                self.used_v.remove(&w);
            }
            self.vmap.pop();
            flow?;
        }
        ControlFlow::Continue(())
    }

    /// Pushes `w` as the image of vertex `i` if compatible; leaves `vmap`
    /// unchanged otherwise.
    fn try_vertex(&mut self, i: usize, w: Id) -> bool {
        let s = self.search;
        if s.injective {
            if self.used_v.contains(&w) {
                return false;
            }
            let (o, n, l) = self.dom_deg[i];
            let (co, cn, cl) = self.adj.degrees(w);
            if o > co || n > cn || l > cl {
                return false;
            }
        } else if self.dom_deg[i].2 > 0 && self.adj.degrees(w).2 == 0 {
            return false;
        }
        self.vmap.push(w);
        for k in 0..self.checks[i].len() {
            let (si, ti, need) = self.checks[i][k];
            let have = self.adj.edges_between(self.vmap[si], self.vmap[ti]).len();
            let fine = if s.injective { need <= have } else { have > 0 };
            if !fine {
                self.vmap.pop();
                return false;
            }
        }
        true
    }

    fn assign_edge(
        &mut self,
        j: usize,
        visit: &mut impl FnMut(&[Id], &[Id]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let s = self.search;
        if j == s.dom.edge_count() {
            return visit(&self.vmap, &self.emap);
        }
        let e = s.dom.edges()[j];
        let src = self.vmap[s.dom.vertex_index(e.src).expect("valid graph")];
        let tgt = self.vmap[s.dom.vertex_index(e.tgt).expect("valid graph")];
        let between: Vec<Id> = self.adj.edges_between(src, tgt).to_vec();
        for f in between {
            if s.fixed_e[j].is_some_and(|x| x != f) {
                continue;
            }
            if s.injective && self.used_e.contains(&f) {
                continue;
            }
            if s.injective {
                self.used_e.insert(f);
            }
            self.emap.push(f);
            let flow = self.assign_edge(j + 1, visit);
            self.emap.pop();
            if s.injective {
                self.used_e.remove(&f);
            }
            flow?;
        }
        ControlFlow::Continue(())
    }
}

/// All injective morphisms `a -> b` in canonical order.
pub fn enumerate_monos(a: &GraphRef, b: &GraphRef) -> Vec<Morphism> {
    HomSearch::new(a, b, true).collect(a, b)
}

/// All morphisms `a -> b` in canonical order.
pub fn enumerate_homs(a: &GraphRef, b: &GraphRef) -> Vec<Morphism> {
    HomSearch::new(a, b, false).collect(a, b)
}

pub fn find_mono(a: &GraphRef, b: &GraphRef) -> Option<Morphism> {
    HomSearch::new(a, b, true).first(a, b)
}

/// An isomorphism `g -> h`, if one exists. Equal graphs yield the identity.
pub fn isomorphic(g: &GraphRef, h: &GraphRef) -> Option<Morphism> {
    if same_graph(g, h) {
        return Some(Morphism::identity(g).with_cod(h));
    }
    if g.vertex_count() != h.vertex_count()
        || g.edge_count() != h.edge_count()
        || g.degree_profile() != h.degree_profile()
    {
        return None;
    }
    find_mono(g, h)
}

/// All isomorphisms `g -> h`.
pub fn enumerate_isos(g: &GraphRef, h: &GraphRef) -> Vec<Morphism> {
    if g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count() {
        return Vec::new();
    }
    enumerate_monos(g, h)
}

/// Search for `q: a.cod -> m.cod` with `q ∘ a = m`.
pub fn extension_search<'a>(a: &'a Morphism, m: &'a Morphism, injective: bool) -> HomSearch<'a> {
    debug_assert!(same_graph(a.dom(), m.dom()));
    let mut s = HomSearch::new(a.cod(), m.cod(), injective);
    for ((_, x), (_, y)) in a.vertex_pairs().zip(m.vertex_pairs()) {
        s = s.fix_vertex(x, y);
    }
    for ((_, x), (_, y)) in a.edge_pairs().zip(m.edge_pairs()) {
        s = s.fix_edge(x, y);
    }
    s
}

/// All monos `q` with `q ∘ a = m`.
pub fn mono_extensions(a: &Morphism, m: &Morphism) -> Vec<Morphism> {
    extension_search(a, m, true).collect(a.cod(), m.cod())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn g(n: u32, e: &[(Id, Id)]) -> GraphRef {
        Graph::from_edges(n, e).into_ref()
    }

    #[test]
    fn empty_has_one_mono_everywhere() {
        let e = g(0, &[]);
        assert_eq!(enumerate_monos(&e, &g(3, &[(0, 1)])).len(), 1);
        assert_eq!(enumerate_monos(&e, &e).len(), 1);
        assert!(enumerate_homs(&g(1, &[]), &e).is_empty());
    }

    #[test]
    fn monos_into_two_cycle() {
        let c = g(2, &[(0, 1), (1, 0)]);
        assert_eq!(enumerate_monos(&g(1, &[]), &c).len(), 2);
        assert_eq!(enumerate_monos(&g(2, &[(0, 1)]), &c).len(), 2);
    }

    #[test]
    fn order_is_lexicographic() {
        let c = g(3, &[]);
        let ms = enumerate_monos(&g(2, &[]), &c);
        let keys: Vec<Vec<Id>> = ms.iter().map(|m| m.vmap().to_vec()).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert_eq!(keys.len(), 6);
    }

    #[test]
    fn parallel_edges_count_for_monos() {
        let par = g(2, &[(0, 1), (0, 1)]);
        let single = g(2, &[(0, 1)]);
        assert!(find_mono(&par, &single).is_none());
        assert_eq!(enumerate_homs(&par, &single).len(), 1);
        assert_eq!(enumerate_monos(&single, &par).len(), 2);
    }

    #[test]
    fn cycle_and_parallel_pair_are_not_isomorphic() {
        assert!(isomorphic(&g(2, &[(0, 1), (1, 0)]), &g(2, &[(0, 1), (0, 1)])).is_none());
        let a = g(3, &[(0, 1), (1, 2)]);
        let b = Graph::new(
            [7, 8, 9],
            [
                crate::graph::Edge { id: 4, src: 9, tgt: 7 },
                crate::graph::Edge { id: 5, src: 7, tgt: 8 },
            ],
        )
        .unwrap()
        .into_ref();
        let iso = isomorphic(&a, &b).unwrap();
        assert!(iso.is_iso());
    }

    #[test]
    fn extensions_respect_fixed_part() {
        let x = g(1, &[]);
        let a = g(2, &[(0, 1)]);
        let target = g(3, &[(0, 1), (0, 2), (1, 2)]);
        let leg = Morphism::new(x.clone(), a.clone(), vec![0], vec![]).unwrap();
        let m = Morphism::new(x.clone(), target.clone(), vec![0], vec![]).unwrap();
        let ext = mono_extensions(&leg, &m);
        assert_eq!(ext.len(), 2);
        for q in ext {
            assert_eq!(leg.then(&q).unwrap(), m);
        }
    }
}
