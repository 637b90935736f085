//! Nested application conditions, satisfaction, shift along monos and
//! transport backwards through rules.

use std::fmt;
use std::ops::ControlFlow;

use thiserror::Error;

use crate::colimits::{pushout, pushout_complement};
use crate::graph::{Edge, Graph, GraphRef, Id};
use crate::matching::{extension_search, HomSearch};
use crate::morphism::{same_graph, Morphism};
use crate::rule::Rule;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConditionError {
    #[error("condition is rooted at a different graph than the morphism's domain")]
    RootMismatch,
    #[error("existential leg is not injective")]
    LegNotMono,
    #[error("morphism is not injective")]
    NotMono,
}

/// A condition over its root graph.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Condition {
    root: GraphRef,
    body: Body,
}

/// Condition structure; everything except the inside of `Exists` shares the
/// root of the enclosing [`Condition`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Body {
    True,
    Exists { leg: Morphism, inner: Box<Condition> },
    Not(Box<Body>),
    And(Vec<Body>),
    Or(Vec<Body>),
}

impl Body {
    fn is_true(&self) -> bool {
        matches!(self, Body::True) || matches!(self, Body::And(v) if v.is_empty())
    }

    fn is_false(&self) -> bool {
        matches!(self, Body::Or(v) if v.is_empty())
    }

    fn depth(&self) -> usize {
        match self {
            Body::True => 0,
            Body::Exists { inner, .. } => 1 + inner.body.depth(),
            Body::Not(b) => b.depth(),
            Body::And(v) | Body::Or(v) => v.iter().map(Body::depth).max().unwrap_or(0),
        }
    }

    fn not(b: Body) -> Body {
        match b {
            Body::Not(inner) => *inner,
            b if b.is_true() => Body::Or(Vec::new()),
            b if b.is_false() => Body::True,
            b => Body::Not(Box::new(b)),
        }
    }

    fn and(items: Vec<Body>) -> Body {
        let mut out = Vec::new();
        for b in items {
            match b {
                b if b.is_true() => {}
                b if b.is_false() => return Body::Or(Vec::new()),
                Body::And(v) => out.extend(v),
                b => out.push(b),
            }
        }
        match out.len() {
            0 => Body::True,
            1 => out.pop().expect("one item"),
            _ => Body::And(out),
        }
    }

    fn or(items: Vec<Body>) -> Body {
        let mut out = Vec::new();
        for b in items {
            match b {
                b if b.is_false() => {}
                b if b.is_true() => return Body::True,
                Body::Or(v) => out.extend(v),
                b => out.push(b),
            }
        }
        if out.len() == 1 {
            out.pop().expect("one item")
        } else {
            Body::Or(out)
        }
    }
}

impl Condition {
    pub fn always(root: &GraphRef) -> Self {
        Condition { root: root.clone(), body: Body::True }
    }

    pub fn never(root: &GraphRef) -> Self {
        Condition { root: root.clone(), body: Body::Or(Vec::new()) }
    }

    /// `∃(leg, inner)`; `leg` must be mono with codomain the root of `inner`.
    pub fn exists(leg: Morphism, inner: Condition) -> Result<Self, ConditionError> {
        if !leg.is_mono() {
            return Err(ConditionError::LegNotMono);
        }
        if !same_graph(leg.cod(), &inner.root) {
            return Err(ConditionError::RootMismatch);
        }
        let leg = leg.with_cod(&inner.root);
        Ok(Condition { root: leg.dom().clone(), body: Body::Exists { leg, inner: Box::new(inner) } })
    }

    /// `¬∃(leg, true)`: the pattern `leg` must not be present.
    pub fn forbid(leg: Morphism) -> Result<Self, ConditionError> {
        let inner = Condition::always(leg.cod());
        Ok(Condition::exists(leg, inner)?.negate())
    }

    pub fn negate(self) -> Self {
        Condition { root: self.root, body: Body::not(self.body) }
    }

    pub fn and(root: &GraphRef, items: Vec<Condition>) -> Result<Self, ConditionError> {
        let bodies = Self::bodies(root, items)?;
        Ok(Condition { root: root.clone(), body: Body::and(bodies) })
    }

    pub fn or(root: &GraphRef, items: Vec<Condition>) -> Result<Self, ConditionError> {
        let bodies = Self::bodies(root, items)?;
        Ok(Condition { root: root.clone(), body: Body::or(bodies) })
    }

    fn bodies(root: &GraphRef, items: Vec<Condition>) -> Result<Vec<Body>, ConditionError> {
        items
            .into_iter()
            .map(|c| if same_graph(&c.root, root) { Ok(c.body) } else { Err(ConditionError::RootMismatch) })
            .collect()
    }

    pub fn root(&self) -> &GraphRef {
        &self.root
    }

    pub fn body(&self) -> &Body {
        &self.body
    }

    /// Rebuilds a condition from a root and a body, checking that every
    /// `Exists` leg starts at the root.
    pub fn from_body(root: &GraphRef, body: Body) -> Result<Self, ConditionError> {
        fn check(root: &GraphRef, b: &Body) -> Result<(), ConditionError> {
            match b {
                Body::True => Ok(()),
                Body::Exists { leg, inner } => {
                    if !same_graph(leg.dom(), root) || !same_graph(leg.cod(), &inner.root) {
                        Err(ConditionError::RootMismatch)
                    } else if !leg.is_mono() {
                        Err(ConditionError::LegNotMono)
                    } else {
                        check(&inner.root, &inner.body)
                    }
                }
                Body::Not(b) => check(root, b),
                Body::And(v) | Body::Or(v) => v.iter().try_for_each(|b| check(root, b)),
            }
        }
        check(root, &body)?;
        Ok(Condition { root: root.clone(), body })
    }

    pub fn is_true(&self) -> bool {
        self.body.is_true()
    }

    pub fn is_false(&self) -> bool {
        self.body.is_false()
    }

    /// Maximal number of nested `Exists`.
    pub fn depth(&self) -> usize {
        self.body.depth()
    }

    /// Whether `m` satisfies the condition. `m` must be mono with domain the root.
    pub fn satisfied_by(&self, m: &Morphism) -> Result<bool, ConditionError> {
        if !same_graph(m.dom(), &self.root) {
            return Err(ConditionError::RootMismatch);
        }
        if !m.is_mono() {
            return Err(ConditionError::NotMono);
        }
        Ok(sat_body(&self.body, m))
    }

    /// The same condition over `iso.cod()`, for an isomorphism `iso` out of the root.
    pub fn transport_iso(&self, iso: &Morphism) -> Condition {
        assert!(iso.is_iso() && same_graph(iso.dom(), &self.root), "transport_iso needs an iso out of the root");
        let inv = iso.inverse().expect("iso");
        fn go(b: &Body, inv: &Morphism) -> Body {
            match b {
                Body::True => Body::True,
                Body::Exists { leg, inner } => Body::Exists {
                    leg: inv.then(leg).expect("composable"),
                    inner: inner.clone(),
                },
                Body::Not(b) => Body::Not(Box::new(go(b, inv))),
                Body::And(v) => Body::And(v.iter().map(|b| go(b, inv)).collect()),
                Body::Or(v) => Body::Or(v.iter().map(|b| go(b, inv)).collect()),
            }
        }
        Condition { root: iso.cod().clone(), body: go(&self.body, &inv) }
    }
}

fn sat_body(b: &Body, m: &Morphism) -> bool {
    match b {
        Body::True => true,
        Body::Exists { leg, inner } => {
            let mut ok = false;
            let search = extension_search(leg, m, true);
            search.for_each(|vm, em| {
                let q = Morphism::new_unchecked(leg.cod().clone(), m.cod().clone(), vm.to_vec(), em.to_vec());
                if sat_body(&inner.body, &q) {
                    ok = true;
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            });
            ok
        }
        Body::Not(b) => !sat_body(b, m),
        Body::And(v) => v.iter().all(|b| sat_body(b, m)),
        Body::Or(v) => v.iter().any(|b| sat_body(b, m)),
    }
}

/// Subgraphs of `g` containing the given vertices and edges, smallest first.
pub(crate) fn subgraphs_containing(g: &Graph, must_v: &[Id], must_e: &[Id]) -> Vec<Graph> {
    let free_v: Vec<usize> = (0..g.vertex_count()).filter(|&i| !must_v.contains(&g.vertices()[i])).collect();
    let free_e: Vec<usize> = (0..g.edge_count()).filter(|&i| !must_e.contains(&g.edges()[i].id)).collect();
    assert!(free_v.len() < 20 && free_e.len() < 20, "subgraph enumeration too large");
    let mut out = Vec::new();
    for vmask in 0u32..(1 << free_v.len()) {
        let mut keep_v: Vec<bool> = g.vertices().iter().map(|v| must_v.contains(v)).collect();
        for (bit, &i) in free_v.iter().enumerate() {
            keep_v[i] = vmask & (1 << bit) != 0;
        }
        // Edges available given the chosen vertices.
        let avail: Vec<usize> = free_e
            .iter()
            .copied()
            .filter(|&i| {
                let e = g.edges()[i];
                keep_v[g.vertex_index(e.src).expect("valid")] && keep_v[g.vertex_index(e.tgt).expect("valid")]
            })
            .collect();
        for emask in 0u32..(1 << avail.len()) {
            let mut keep_e: Vec<bool> = g.edges().iter().map(|e| must_e.contains(&e.id)).collect();
            for (bit, &i) in avail.iter().enumerate() {
                keep_e[i] = emask & (1 << bit) != 0;
            }
            out.push(g.subgraph_by_mask(&keep_v, &keep_e));
        }
    }
    out.sort_by_key(|s| (s.size(), s.vertices().to_vec(), s.edges().iter().map(|e| e.id).collect::<Vec<_>>()));
    out
}

/// `Shift(a1, c)`: a condition over `cod(a1)` such that a mono `q`
/// satisfies it iff `q ∘ a1` satisfies `c`. `a1` must be mono.
pub fn shift(a1: &Morphism, c: &Condition) -> Result<Condition, ConditionError> {
    if !same_graph(a1.dom(), &c.root) {
        return Err(ConditionError::RootMismatch);
    }
    if !a1.is_mono() {
        return Err(ConditionError::NotMono);
    }
    if a1.is_iso() {
        return Ok(c.transport_iso(a1));
    }
    Ok(Condition { root: a1.cod().clone(), body: shift_body(a1, &c.body) })
}

fn shift_body(a1: &Morphism, b: &Body) -> Body {
    match b {
        Body::True => Body::True,
        Body::Not(b) => Body::not(shift_body(a1, b)),
        Body::And(v) => Body::and(v.iter().map(|b| shift_body(a1, b)).collect()),
        Body::Or(v) => Body::or(v.iter().map(|b| shift_body(a1, b)).collect()),
        Body::Exists { leg: a2, inner } => {
            let b2 = a2.cod();
            let mut alts = Vec::new();
            // Spans B1 <- P -> B2 with P a subgraph of B2 through a2's image
            // and the left leg restricting to a1; glued by pushout.
            for p in subgraphs_containing(b2, a2.vmap(), a2.emap()) {
                let p = p.into_ref();
                let into_b2 = Morphism::inclusion(&p, b2).expect("subgraph");
                let a2p = a2.factor_through(&into_b2).expect("image inside");
                for h in extension_search(&a2p, a1, true).collect(&p, a1.cod()) {
                    let po = pushout(&into_b2, &h).expect("shared apex");
                    let (e2, e1) = (po.left, po.right);
                    let sub = shift(&e2, inner).expect("mono leg");
                    alts.push(Body::Exists { leg: e1, inner: Box::new(sub) });
                }
            }
            Body::or(alts)
        }
    }
}

/// `Trans(r, c)`: moves a condition over the output of `r` to its input.
pub fn trans(r: &Rule, c: &Condition) -> Result<Condition, ConditionError> {
    if !same_graph(r.output(), &c.root) {
        return Err(ConditionError::RootMismatch);
    }
    Ok(Condition { root: r.input().clone(), body: trans_body(r, &c.body) })
}

fn trans_body(r: &Rule, b: &Body) -> Body {
    match b {
        Body::True => Body::True,
        Body::Not(b) => Body::not(trans_body(r, b)),
        Body::And(v) => Body::and(v.iter().map(|b| trans_body(r, b)).collect()),
        Body::Or(v) => Body::or(v.iter().map(|b| trans_body(r, b)).collect()),
        Body::Exists { leg: b, inner } => {
            // Reverse application of r at b: B <- B̄ -> B'.
            let Some((k_to_bbar, bbar_to_b)) = pushout_complement(r.o(), b) else {
                return Body::Or(Vec::new());
            };
            let po = pushout(r.i(), &k_to_bbar).expect("shared context");
            let (b_star, bbar_to_bprime) = (po.left, po.right);
            let rule = Rule::new(bbar_to_b, bbar_to_bprime).expect("mono legs");
            let sub = trans(&rule, inner).expect("root is B");
            Body::Exists { leg: b_star, inner: Box::new(sub) }
        }
    }
}

/// Size limit for model checking conditions: targets are the root plus up to
/// `extra_vertices` new vertices and up to `extra_edges` new edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Bound {
    pub extra_vertices: u32,
    pub extra_edges: u32,
}

impl Default for Bound {
    fn default() -> Self {
        Bound { extra_vertices: 3, extra_edges: 3 }
    }
}

impl Bound {
    pub fn new(extra_vertices: u32, extra_edges: u32) -> Self {
        Bound { extra_vertices, extra_edges }
    }
}

/// Calls `visit(q)` for inclusions `q: root -> G` of the root into graphs
/// obtained by adding vertices and edges within the bound, smallest first.
/// Every mono out of the root into a graph within the bound is isomorphic
/// (under the root) to one of these.
pub fn for_each_extension(root: &GraphRef, bound: Bound, mut visit: impl FnMut(&Morphism) -> ControlFlow<()>) {
    let base_v = root.next_vertex_id();
    let base_e = root.next_edge_id();
    for extra_v in 0..=bound.extra_vertices {
        let vertices: Vec<Id> = root.vertices().iter().copied().chain(base_v..base_v + extra_v).collect();
        let pairs: Vec<(Id, Id)> =
            vertices.iter().flat_map(|&s| vertices.iter().map(move |&t| (s, t))).collect();
        for n_edges in 0..=bound.extra_edges {
            if n_edges > 0 && pairs.is_empty() {
                break;
            }
            let mut idx = vec![0usize; n_edges as usize];
            loop {
                let edges = root.edges().iter().copied().chain(idx.iter().enumerate().map(|(k, &p)| Edge {
                    id: base_e + k as Id,
                    src: pairs[p].0,
                    tgt: pairs[p].1,
                }));
                let g = Graph::new(vertices.clone(), edges).expect("well formed").into_ref();
                let q = Morphism::inclusion(root, &g).expect("root included");
                if visit(&q).is_break() {
                    return;
                }
                if !next_multiset(&mut idx, pairs.len()) {
                    break;
                }
            }
        }
    }
}

/// Advances a non-decreasing index vector; false when exhausted.
fn next_multiset(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    if k == 0 || n == 0 {
        return false;
    }
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] + 1 < n {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[i];
            }
            return true;
        }
    }
    false
}

/// Whether the two conditions agree on every mono into graphs within the bound.
pub fn equivalent_bounded(c1: &Condition, c2: &Condition, bound: Bound) -> bool {
    if !same_graph(&c1.root, &c2.root) {
        return false;
    }
    if c1 == c2 {
        return true;
    }
    let mut agree = true;
    for_each_extension(&c1.root, bound, |q| {
        if sat_body(&c1.body, q) != sat_body(&c2.body, q) {
            agree = false;
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    agree
}

/// Whether some mono into a graph within the bound satisfies the condition.
pub fn not_false_bounded(c: &Condition, bound: Bound) -> bool {
    if c.is_true() {
        return true;
    }
    if c.is_false() {
        return false;
    }
    let mut witness = false;
    for_each_extension(&c.root, bound, |q| {
        if sat_body(&c.body, q) {
            witness = true;
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    witness
}

/// All monos from the root of `c` into `g` that satisfy it.
pub fn satisfying_monos(c: &Condition, g: &GraphRef) -> Vec<Morphism> {
    HomSearch::new(&c.root, g, true)
        .collect(&c.root, g)
        .into_iter()
        .filter(|m| sat_body(&c.body, m))
        .collect()
}

impl fmt::Debug for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.body)
    }
}

impl fmt::Debug for Body {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Body::True => write!(f, "true"),
            Body::Exists { leg, inner } => write!(f, "∃({:?}, {:?})", leg, inner.body),
            Body::Not(b) => write!(f, "¬{b:?}"),
            Body::And(v) if v.is_empty() => write!(f, "true"),
            Body::Or(v) if v.is_empty() => write!(f, "false"),
            Body::And(v) => {
                write!(f, "and")?;
                f.debug_list().entries(v).finish()
            }
            Body::Or(v) => {
                write!(f, "or")?;
                f.debug_list().entries(v).finish()
            }
        }
    }
}
