//! Pushouts, pullbacks, pushout complements, final pullback complements,
//! image factorization and span composition.
//!
//! Id allocation is deterministic. When one leg of a pushout is mono, the
//! result reuses the ids of the other leg's codomain and numbers the new
//! elements after them; pullbacks along a mono are subgraphs keeping ids;
//! complements are subgraphs of the host graph.

use std::collections::{BTreeMap, HashMap, HashSet};

use thiserror::Error;

use crate::graph::{Edge, Graph, GraphRef, Id};
use crate::morphism::{same_graph, Morphism};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColimitError {
    #[error("legs do not share a common {0}")]
    Mismatch(&'static str),
}

/// Two morphisms out of a shared apex: `left: apex -> L`, `right: apex -> R`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Span {
    pub left: Morphism,
    pub right: Morphism,
}

/// Two morphisms into a shared target: `left: L -> apex`, `right: R -> apex`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cospan {
    pub left: Morphism,
    pub right: Morphism,
}

impl Span {
    pub fn new(left: Morphism, right: Morphism) -> Result<Self, ColimitError> {
        if !same_graph(left.dom(), right.dom()) {
            return Err(ColimitError::Mismatch("apex"));
        }
        let right = right.with_dom(left.dom());
        Ok(Span { left, right })
    }

    pub fn apex(&self) -> &GraphRef {
        self.left.dom()
    }

    pub fn is_mono(&self) -> bool {
        self.left.is_mono() && self.right.is_mono()
    }

    pub fn identity(g: &GraphRef) -> Self {
        Span { left: Morphism::identity(g), right: Morphism::identity(g) }
    }
}

impl Cospan {
    pub fn new(left: Morphism, right: Morphism) -> Result<Self, ColimitError> {
        if !same_graph(left.cod(), right.cod()) {
            return Err(ColimitError::Mismatch("target"));
        }
        let right = right.with_cod(left.cod());
        Ok(Cospan { left, right })
    }

    pub fn apex(&self) -> &GraphRef {
        self.left.cod()
    }
}

pub fn initial_object() -> Graph {
    Graph::empty()
}

/// Pushout of `f: A -> B` and `g: A -> C`, returned as `(B -> P, C -> P)`.
pub fn pushout(f: &Morphism, g: &Morphism) -> Result<Cospan, ColimitError> {
    if !same_graph(f.dom(), g.dom()) {
        return Err(ColimitError::Mismatch("domain"));
    }
    if f.is_mono() {
        Ok(pushout_along_mono(f, g))
    } else if g.is_mono() {
        let c = pushout_along_mono(g, f);
        Ok(Cospan { left: c.right, right: c.left })
    } else {
        Ok(pushout_general(f, g))
    }
}

/// `f` mono: `P` extends `C = cod(g)` by the part of `B` outside `f`'s image.
fn pushout_along_mono(f: &Morphism, g: &Morphism) -> Cospan {
    let b = f.cod();
    let c = g.cod();
    let fv_inv: HashMap<Id, Id> = f.vertex_pairs().map(|(a, x)| (x, a)).collect();
    let fe_inv: HashMap<Id, Id> = f.edge_pairs().map(|(a, x)| (x, a)).collect();

    let mut next = c.next_vertex_id();
    let mut bv = Vec::with_capacity(b.vertex_count());
    let mut vertices = c.vertices().to_vec();
    for &v in b.vertices() {
        let img = match fv_inv.get(&v) {
            Some(&a) => g.v(a),
            None => {
                let id = next;
                next += 1;
                vertices.push(id);
                id
            }
        };
        bv.push(img);
    }
    let vimg: HashMap<Id, Id> = b.vertices().iter().copied().zip(bv.iter().copied()).collect();

    let mut next_e = c.next_edge_id();
    let mut be = Vec::with_capacity(b.edge_count());
    let mut edges = c.edges().to_vec();
    for e in b.edges() {
        let img = match fe_inv.get(&e.id) {
            Some(&a) => g.e(a),
            None => {
                let id = next_e;
                next_e += 1;
                edges.push(Edge { id, src: vimg[&e.src], tgt: vimg[&e.tgt] });
                id
            }
        };
        be.push(img);
    }
    let p = Graph::from_sorted_parts(vertices, edges).into_ref();
    let left = Morphism::new_unchecked(b.clone(), p.clone(), bv, be);
    let right = Morphism::new_unchecked(
        c.clone(),
        p,
        c.vertices().to_vec(),
        c.edges().iter().map(|e| e.id).collect(),
    );
    Cospan { left, right }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let nxt = self.0[y];
            self.0[y] = r;
            y = nxt;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

/// Quotient of the disjoint union `B + C`; classes numbered by first member.
fn pushout_general(f: &Morphism, g: &Morphism) -> Cospan {
    let (b, c) = (f.cod(), g.cod());
    let (nb, nc) = (b.vertex_count(), c.vertex_count());
    let mut uf = UnionFind::new(nb + nc);
    for (x, y) in f.vmap().iter().zip(g.vmap()) {
        uf.union(b.vertex_index(*x).expect("valid"), nb + c.vertex_index(*y).expect("valid"));
    }
    let (mb, mc) = (b.edge_count(), c.edge_count());
    let mut ue = UnionFind::new(mb + mc);
    for (x, y) in f.emap().iter().zip(g.emap()) {
        ue.union(b.edge_index(*x).expect("valid"), mb + c.edge_index(*y).expect("valid"));
    }
    let mut vclass: BTreeMap<usize, Id> = BTreeMap::new();
    let vid: Vec<Id> = (0..nb + nc)
        .map(|i| {
            let r = uf.find(i);
            let n = vclass.len() as Id;
            *vclass.entry(r).or_insert(n)
        })
        .collect();
    let mut eclass: BTreeMap<usize, Id> = BTreeMap::new();
    let mut edges = Vec::new();
    let eid: Vec<Id> = (0..mb + mc)
        .map(|i| {
            let r = ue.find(i);
            let n = eclass.len() as Id;
            *eclass.entry(r).or_insert_with(|| {
                let e = if i < mb { b.edges()[i] } else { c.edges()[i - mb] };
                let (s, t) = if i < mb {
                    (vid[b.vertex_index(e.src).expect("valid")], vid[b.vertex_index(e.tgt).expect("valid")])
                } else {
                    (
                        vid[nb + c.vertex_index(e.src).expect("valid")],
                        vid[nb + c.vertex_index(e.tgt).expect("valid")],
                    )
                };
                edges.push(Edge { id: n, src: s, tgt: t });
                n
            })
        })
        .collect();
    let p = Graph::from_sorted_parts((0..vclass.len() as Id).collect(), edges).into_ref();
    let left = Morphism::new_unchecked(b.clone(), p.clone(), vid[..nb].to_vec(), eid[..mb].to_vec());
    let right = Morphism::new_unchecked(c.clone(), p, vid[nb..].to_vec(), eid[mb..].to_vec());
    Cospan { left, right }
}

/// Pullback of `f: B -> D` and `g: C -> D`, returned as `(P -> B, P -> C)`.
pub fn pullback(f: &Morphism, g: &Morphism) -> Result<Span, ColimitError> {
    if !same_graph(f.cod(), g.cod()) {
        return Err(ColimitError::Mismatch("codomain"));
    }
    if g.is_mono() {
        Ok(pullback_along_mono(f, g))
    } else if f.is_mono() {
        let s = pullback_along_mono(g, f);
        Ok(Span { left: s.right, right: s.left })
    } else {
        Ok(pullback_general(f, g))
    }
}

/// `g` mono: `P` is the preimage under `f` of `g`'s image, inside `B`.
fn pullback_along_mono(f: &Morphism, g: &Morphism) -> Span {
    let b = f.dom();
    let gv: HashMap<Id, Id> = g.vertex_pairs().map(|(c, d)| (d, c)).collect();
    let ge: HashMap<Id, Id> = g.edge_pairs().map(|(c, d)| (d, c)).collect();
    let keep_v: Vec<bool> = f.vmap().iter().map(|d| gv.contains_key(d)).collect();
    let keep_e: Vec<bool> = f.emap().iter().map(|d| ge.contains_key(d)).collect();
    let p = b.subgraph_by_mask(&keep_v, &keep_e).into_ref();
    let to_b = Morphism::inclusion(&p, b).expect("subgraph");
    let vmap = p.vertices().iter().map(|&v| gv[&f.v(v)]).collect();
    let emap = p.edges().iter().map(|e| ge[&f.e(e.id)]).collect();
    let to_c = Morphism::new_unchecked(p, g.dom().clone(), vmap, emap);
    Span { left: to_b, right: to_c }
}

fn pullback_general(f: &Morphism, g: &Morphism) -> Span {
    let (b, c) = (f.dom(), g.dom());
    let mut vpairs = Vec::new();
    for (x, fx) in f.vertex_pairs() {
        for (y, gy) in g.vertex_pairs() {
            if fx == gy {
                vpairs.push((x, y));
            }
        }
    }
    let vid: HashMap<(Id, Id), Id> = vpairs.iter().enumerate().map(|(i, &p)| (p, i as Id)).collect();
    let mut epairs = Vec::new();
    for (x, fx) in f.edge_pairs() {
        for (y, gy) in g.edge_pairs() {
            if fx == gy {
                epairs.push((x, y));
            }
        }
    }
    let edges: Vec<Edge> = epairs
        .iter()
        .enumerate()
        .map(|(i, &(x, y))| {
            let (ex, ey) = (b.edge(x).expect("valid"), c.edge(y).expect("valid"));
            Edge { id: i as Id, src: vid[&(ex.src, ey.src)], tgt: vid[&(ex.tgt, ey.tgt)] }
        })
        .collect();
    let p = Graph::from_sorted_parts((0..vpairs.len() as Id).collect(), edges).into_ref();
    let left = Morphism::new_unchecked(
        p.clone(),
        b.clone(),
        vpairs.iter().map(|p| p.0).collect(),
        epairs.iter().map(|p| p.0).collect(),
    );
    let right = Morphism::new_unchecked(
        p,
        c.clone(),
        vpairs.iter().map(|p| p.1).collect(),
        epairs.iter().map(|p| p.1).collect(),
    );
    Span { left, right }
}

/// Elements of `X` in `m(I)` but outside `m(a(K))`.
fn deleted_part(a: &Morphism, m: &Morphism) -> (HashSet<Id>, HashSet<Id>) {
    let kept_v: HashSet<Id> = a.vmap().iter().map(|&v| m.v(v)).collect();
    let kept_e: HashSet<Id> = a.emap().iter().map(|&e| m.e(e)).collect();
    let del_v = m.vmap().iter().copied().filter(|v| !kept_v.contains(v)).collect();
    let del_e = m.emap().iter().copied().filter(|e| !kept_e.contains(e)).collect();
    (del_v, del_e)
}

fn complement_with(
    a: &Morphism,
    m: &Morphism,
    del_v: &HashSet<Id>,
    del_e: &HashSet<Id>,
) -> (Morphism, Morphism) {
    let x = m.cod();
    let keep_v: Vec<bool> = x.vertices().iter().map(|v| !del_v.contains(v)).collect();
    let keep_e: Vec<bool> = x.edges().iter().map(|e| !del_e.contains(&e.id)).collect();
    let d = x.subgraph_by_mask(&keep_v, &keep_e).into_ref();
    let into_x = Morphism::inclusion(&d, x).expect("subgraph");
    let from_k = a.then(m).expect("composable").factor_through(&into_x).expect("context survives");
    (from_k, into_x)
}

/// Pushout complement of `a: K -> I` and `m: I -> X` (both mono), returned
/// as `(K -> D, D -> X)` with `D` a subgraph of `X`. `None` when an edge
/// outside the match would be left dangling.
pub fn pushout_complement(a: &Morphism, m: &Morphism) -> Option<(Morphism, Morphism)> {
    debug_assert!(a.is_mono() && m.is_mono());
    if !same_graph(a.cod(), m.dom()) {
        return None;
    }
    let (del_v, del_e) = deleted_part(a, m);
    let dangling = m
        .cod()
        .edges()
        .iter()
        .any(|e| !del_e.contains(&e.id) && (del_v.contains(&e.src) || del_v.contains(&e.tgt)));
    if dangling {
        return None;
    }
    Some(complement_with(a, m, &del_v, &del_e))
}

/// Whether the pushout complement of `a` and `m` exists, without building it.
pub fn has_pushout_complement(a: &Morphism, m: &Morphism) -> bool {
    let (del_v, del_e) = deleted_part(a, m);
    !m.cod()
        .edges()
        .iter()
        .any(|e| !del_e.contains(&e.id) && (del_v.contains(&e.src) || del_v.contains(&e.tgt)))
}

/// Final pullback complement of `a: K -> I` and `m: I -> X` (both mono):
/// `X` minus the deleted part and every edge incident to a deleted vertex.
pub fn final_pullback_complement(a: &Morphism, m: &Morphism) -> (Morphism, Morphism) {
    debug_assert!(a.is_mono() && m.is_mono());
    assert!(same_graph(a.cod(), m.dom()), "final_pullback_complement: a and m not composable");
    let (del_v, mut del_e) = deleted_part(a, m);
    for e in m.cod().edges() {
        if del_v.contains(&e.src) || del_v.contains(&e.tgt) {
            del_e.insert(e.id);
        }
    }
    complement_with(a, m, &del_v, &del_e)
}

/// Factors `f` as an epi onto its image followed by the image inclusion.
pub fn epi_mono_factorize(f: &Morphism) -> (Morphism, Morphism) {
    let img = f.image().into_ref();
    let m = Morphism::inclusion(&img, f.cod()).expect("image is a subgraph");
    let e = Morphism::new_unchecked(f.dom().clone(), img, f.vmap().to_vec(), f.emap().to_vec());
    (e, m)
}

/// Composes `s2 = (C <- K2 -> B)` after `s1 = (B <- K1 -> A)` by pulling
/// back the two legs into `B`. The result is `(C <- P -> A)`.
pub fn compose_spans(s2: &Span, s1: &Span) -> Result<Span, ColimitError> {
    if !same_graph(s1.left.cod(), s2.right.cod()) {
        return Err(ColimitError::Mismatch("middle object"));
    }
    let right2 = s2.right.with_cod(s1.left.cod());
    let pb = pullback(&s1.left, &right2)?;
    let left = pb.right.then(&s2.left).expect("composable");
    let right = pb.left.then(&s1.right).expect("composable");
    Ok(Span { left, right })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: u32, e: &[(Id, Id)]) -> GraphRef {
        Graph::from_edges(n, e).into_ref()
    }

    fn vertex_at(cod: &GraphRef, v: Id) -> Morphism {
        Morphism::new(g(1, &[]), cod.clone(), vec![v], vec![]).unwrap()
    }

    #[test]
    fn pushout_over_empty_is_disjoint_union() {
        let p = g(1, &[]);
        let e = Morphism::from_empty(&p);
        let c = pushout(&e, &e).unwrap();
        assert_eq!(c.apex().vertex_count(), 2);
        assert!(c.left.is_mono() && c.right.is_mono());
    }

    #[test]
    fn pushout_glues_along_shared_vertex() {
        let ab = g(2, &[(0, 1)]);
        let f = vertex_at(&ab, 0);
        let h = Morphism::new(f.dom().clone(), ab.clone(), vec![0], vec![]).unwrap();
        let c = pushout(&f, &h).unwrap();
        assert_eq!(c.apex().vertex_count(), 3);
        assert_eq!(c.apex().edge_count(), 2);
        assert_eq!(f.then(&c.left).unwrap(), h.then(&c.right).unwrap());
    }

    #[test]
    fn general_pushout_merges() {
        let two = g(2, &[]);
        let one = g(1, &[]);
        let collapse = Morphism::new(two.clone(), one.clone(), vec![0, 0], vec![]).unwrap();
        let c = pushout(&collapse, &collapse).unwrap();
        assert_eq!(c.apex().vertex_count(), 1);
    }

    #[test]
    fn pullback_of_overlapping_subgraphs_is_intersection() {
        let path = g(3, &[(0, 1), (1, 2)]);
        let left = Graph::new([0, 1], [Edge { id: 0, src: 0, tgt: 1 }]).unwrap().into_ref();
        let right = Graph::new([1, 2], [Edge { id: 1, src: 1, tgt: 2 }]).unwrap().into_ref();
        let s = pullback(
            &Morphism::inclusion(&left, &path).unwrap(),
            &Morphism::inclusion(&right, &path).unwrap(),
        )
        .unwrap();
        assert_eq!(s.apex().vertices(), &[1]);
        assert_eq!(s.apex().edge_count(), 0);
    }

    #[test]
    fn dangling_edge_blocks_complement() {
        let x = g(2, &[(0, 1)]);
        let v = g(1, &[]);
        let a = Morphism::from_empty(&v);
        let m = vertex_at(&x, 0);
        assert!(pushout_complement(&a, &m).is_none());
        let (_, d) = final_pullback_complement(&a, &m);
        assert_eq!(d.dom().vertices(), &[1]);
        assert_eq!(d.dom().edge_count(), 0);
    }

    #[test]
    fn complement_of_isolated_vertex() {
        let x = g(2, &[]);
        let v = g(1, &[]);
        let (_, d) = pushout_complement(&Morphism::from_empty(&v), &vertex_at(&x, 1)).unwrap();
        assert_eq!(d.dom().vertices(), &[0]);
    }

    #[test]
    fn image_factorization_of_parallel_edges() {
        let par = g(2, &[(0, 1), (0, 1)]);
        let single = g(2, &[(0, 1), (1, 0)]);
        let f = Morphism::new(par, single, vec![0, 1], vec![0, 0]).unwrap();
        let (e, m) = epi_mono_factorize(&f);
        assert!(e.is_epi() && m.is_mono());
        assert_eq!(e.then(&m).unwrap(), f);
        assert_eq!(e.cod().edge_count(), 1);
    }

    #[test]
    fn composing_with_identity_span() {
        let x = g(2, &[(0, 1)]);
        let sub = g(2, &[]);
        let s = Span::new(Morphism::inclusion(&sub, &x).unwrap(), Morphism::identity(&sub)).unwrap();
        let c = compose_spans(&Span::identity(&x), &s).unwrap();
        assert_eq!(c.apex(), s.apex());
    }
}
