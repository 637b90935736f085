//! Graph morphisms: total vertex and edge maps commuting with source and target.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::graph::{Graph, GraphRef, Id};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error("vertex map has {got} entries, domain has {expected} vertices")]
    VertexArity { expected: usize, got: usize },
    #[error("edge map has {got} entries, domain has {expected} edges")]
    EdgeArity { expected: usize, got: usize },
    #[error("vertex {0} is not in the domain")]
    UnknownVertex(Id),
    #[error("edge {0} is not in the domain")]
    UnknownEdge(Id),
    #[error("vertex {from} is sent to {to}, which is not in the codomain")]
    VertexOutside { from: Id, to: Id },
    #[error("edge {from} is sent to {to}, which is not in the codomain")]
    EdgeOutside { from: Id, to: Id },
    #[error("image of edge {0} does not connect the images of its endpoints")]
    NotCommuting(Id),
    #[error("morphisms are not composable: codomain and domain differ")]
    NotComposable,
}

/// A morphism `dom -> cod`. `vmap[i]` is the image of `dom.vertices()[i]`,
/// `emap[i]` the image of `dom.edges()[i]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Morphism {
    dom: GraphRef,
    cod: GraphRef,
    vmap: Vec<Id>,
    emap: Vec<Id>,
}

impl Morphism {
    pub fn new(
        dom: GraphRef,
        cod: GraphRef,
        vmap: Vec<Id>,
        emap: Vec<Id>,
    ) -> Result<Self, MorphismError> {
        if vmap.len() != dom.vertex_count() {
            return Err(MorphismError::VertexArity { expected: dom.vertex_count(), got: vmap.len() });
        }
        if emap.len() != dom.edge_count() {
            return Err(MorphismError::EdgeArity { expected: dom.edge_count(), got: emap.len() });
        }
        for (&v, &w) in dom.vertices().iter().zip(&vmap) {
            if !cod.has_vertex(w) {
                return Err(MorphismError::VertexOutside { from: v, to: w });
            }
        }
        for (e, &f) in dom.edges().iter().zip(&emap) {
            let Some(fe) = cod.edge(f) else {
                return Err(MorphismError::EdgeOutside { from: e.id, to: f });
            };
            let src = vmap[dom.vertex_index(e.src).expect("valid graph")];
            let tgt = vmap[dom.vertex_index(e.tgt).expect("valid graph")];
            if fe.src != src || fe.tgt != tgt {
                return Err(MorphismError::NotCommuting(e.id));
            }
        }
        Ok(Morphism { dom, cod, vmap, emap })
    }

    /// Builds a morphism from explicit (source, image) pairs; every domain
    /// element must appear exactly once.
    pub fn from_pairs(
        dom: GraphRef,
        cod: GraphRef,
        vpairs: &[(Id, Id)],
        epairs: &[(Id, Id)],
    ) -> Result<Self, MorphismError> {
        let mut vmap = vec![None; dom.vertex_count()];
        for &(a, b) in vpairs {
            let i = dom.vertex_index(a).ok_or(MorphismError::UnknownVertex(a))?;
            vmap[i] = Some(b);
        }
        let mut emap = vec![None; dom.edge_count()];
        for &(a, b) in epairs {
            let i = dom.edge_index(a).ok_or(MorphismError::UnknownEdge(a))?;
            emap[i] = Some(b);
        }
        let vmap: Option<Vec<Id>> = vmap.into_iter().collect();
        let emap: Option<Vec<Id>> = emap.into_iter().collect();
        let vmap = vmap.ok_or(MorphismError::VertexArity {
            expected: dom.vertex_count(),
            got: vpairs.len(),
        })?;
        let emap = emap.ok_or(MorphismError::EdgeArity {
            expected: dom.edge_count(),
            got: epairs.len(),
        })?;
        Morphism::new(dom, cod, vmap, emap)
    }

    /// Skips validation; callers guarantee the maps are a morphism.
    pub(crate) fn new_unchecked(dom: GraphRef, cod: GraphRef, vmap: Vec<Id>, emap: Vec<Id>) -> Self {
        let m = Morphism { dom, cod, vmap, emap };
        debug_assert!(
            Morphism::new(m.dom.clone(), m.cod.clone(), m.vmap.clone(), m.emap.clone()).is_ok(),
            "invalid morphism {m:?}"
        );
        m
    }

    pub fn identity(g: &GraphRef) -> Self {
        let vmap = g.vertices().to_vec();
        let emap = g.edges().iter().map(|e| e.id).collect();
        Morphism { dom: g.clone(), cod: g.clone(), vmap, emap }
    }

    /// The inclusion of `sub` into `sup`, sending every id to itself.
    pub fn inclusion(sub: &GraphRef, sup: &GraphRef) -> Result<Self, MorphismError> {
        let vmap = sub.vertices().to_vec();
        let emap = sub.edges().iter().map(|e| e.id).collect();
        Morphism::new(sub.clone(), sup.clone(), vmap, emap)
    }

    /// The unique morphism out of the empty graph.
    pub fn from_empty(cod: &GraphRef) -> Self {
        Morphism {
            dom: Arc::new(Graph::empty()),
            cod: cod.clone(),
            vmap: Vec::new(),
            emap: Vec::new(),
        }
    }

    pub fn dom(&self) -> &GraphRef {
        &self.dom
    }

    pub fn cod(&self) -> &GraphRef {
        &self.cod
    }

    pub fn vmap(&self) -> &[Id] {
        &self.vmap
    }

    pub fn emap(&self) -> &[Id] {
        &self.emap
    }

    /// Image of a domain vertex. Panics if `v` is not in the domain.
    pub fn v(&self, v: Id) -> Id {
        self.vmap[self.dom.vertex_index(v).unwrap_or_else(|| panic!("vertex {v} not in domain"))]
    }

    /// Image of a domain edge. Panics if `e` is not in the domain.
    pub fn e(&self, e: Id) -> Id {
        self.emap[self.dom.edge_index(e).unwrap_or_else(|| panic!("edge {e} not in domain"))]
    }

    pub fn vertex_pairs(&self) -> impl Iterator<Item = (Id, Id)> + '_ {
        self.dom.vertices().iter().copied().zip(self.vmap.iter().copied())
    }

    pub fn edge_pairs(&self) -> impl Iterator<Item = (Id, Id)> + '_ {
        self.dom.edges().iter().map(|e| e.id).zip(self.emap.iter().copied())
    }

    /// `other ∘ self`: first `self`, then `other`.
    pub fn then(&self, other: &Morphism) -> Result<Morphism, MorphismError> {
        if !same_graph(&self.cod, &other.dom) {
            return Err(MorphismError::NotComposable);
        }
        let vmap = self.vmap.iter().map(|&v| other.v(v)).collect();
        let emap = self.emap.iter().map(|&e| other.e(e)).collect();
        Ok(Morphism { dom: self.dom.clone(), cod: other.cod.clone(), vmap, emap })
    }

    /// `self ∘ other`.
    pub fn after(&self, other: &Morphism) -> Result<Morphism, MorphismError> {
        other.then(self)
    }

    pub fn is_mono(&self) -> bool {
        all_distinct(&self.vmap) && all_distinct(&self.emap)
    }

    pub fn is_epi(&self) -> bool {
        covers(&self.vmap, self.cod.vertices().iter().copied())
            && covers(&self.emap, self.cod.edges().iter().map(|e| e.id))
    }

    pub fn is_iso(&self) -> bool {
        self.dom.vertex_count() == self.cod.vertex_count()
            && self.dom.edge_count() == self.cod.edge_count()
            && self.is_mono()
    }

    pub fn inverse(&self) -> Option<Morphism> {
        if !self.is_iso() {
            return None;
        }
        let vinv: HashMap<Id, Id> = self.vertex_pairs().map(|(a, b)| (b, a)).collect();
        let einv: HashMap<Id, Id> = self.edge_pairs().map(|(a, b)| (b, a)).collect();
        let vmap = self.cod.vertices().iter().map(|v| vinv[v]).collect();
        let emap = self.cod.edges().iter().map(|e| einv[&e.id]).collect();
        Some(Morphism { dom: self.cod.clone(), cod: self.dom.clone(), vmap, emap })
    }

    /// Whether every id is sent to itself.
    pub fn is_id_preserving(&self) -> bool {
        self.vertex_pairs().all(|(a, b)| a == b) && self.edge_pairs().all(|(a, b)| a == b)
    }

    /// The subgraph of the codomain hit by this morphism.
    pub fn image(&self) -> Graph {
        let vs: HashSet<Id> = self.vmap.iter().copied().collect();
        let es: HashSet<Id> = self.emap.iter().copied().collect();
        let keep_v: Vec<bool> = self.cod.vertices().iter().map(|v| vs.contains(v)).collect();
        let keep_e: Vec<bool> = self.cod.edges().iter().map(|e| es.contains(&e.id)).collect();
        self.cod.subgraph_by_mask(&keep_v, &keep_e)
    }

    /// Same maps, codomain replaced by a structurally equal graph.
    pub fn with_cod(&self, cod: &GraphRef) -> Morphism {
        assert!(same_graph(&self.cod, cod), "with_cod needs an equal codomain");
        Morphism { dom: self.dom.clone(), cod: cod.clone(), vmap: self.vmap.clone(), emap: self.emap.clone() }
    }

    /// Same maps, domain replaced by a structurally equal graph.
    pub fn with_dom(&self, dom: &GraphRef) -> Morphism {
        assert!(same_graph(&self.dom, dom), "with_dom needs an equal domain");
        Morphism { dom: dom.clone(), cod: self.cod.clone(), vmap: self.vmap.clone(), emap: self.emap.clone() }
    }

    /// Finds `h` with `mono ∘ h = self`, if the image of `self` lies in the
    /// image of `mono`. `mono` must be injective.
    pub fn factor_through(&self, mono: &Morphism) -> Option<Morphism> {
        debug_assert!(mono.is_mono());
        if !same_graph(&self.cod, &mono.cod) {
            return None;
        }
        let vinv: HashMap<Id, Id> = mono.vertex_pairs().map(|(a, b)| (b, a)).collect();
        let einv: HashMap<Id, Id> = mono.edge_pairs().map(|(a, b)| (b, a)).collect();
        let vmap: Option<Vec<Id>> = self.vmap.iter().map(|v| vinv.get(v).copied()).collect();
        let emap: Option<Vec<Id>> = self.emap.iter().map(|e| einv.get(e).copied()).collect();
        Some(Morphism::new_unchecked(self.dom.clone(), mono.dom.clone(), vmap?, emap?))
    }
}

/// Structural equality with a pointer fast path.
pub fn same_graph(a: &GraphRef, b: &GraphRef) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Given morphisms `covers[k]: A_k -> P` that are jointly surjective and
/// `targets[k]: A_k -> Q`, builds the unique `u: P -> Q` with
/// `u ∘ covers[k] = targets[k]`, if the assignments are consistent.
pub fn mediate(
    covers: &[&Morphism],
    targets: &[&Morphism],
) -> Option<Morphism> {
    assert_eq!(covers.len(), targets.len());
    let p = covers.first()?.cod().clone();
    let q = targets[0].cod().clone();
    let mut vm: HashMap<Id, Id> = HashMap::new();
    let mut em: HashMap<Id, Id> = HashMap::new();
    for (c, t) in covers.iter().zip(targets) {
        if !same_graph(c.dom(), t.dom()) || !same_graph(c.cod(), &p) || !same_graph(t.cod(), &q) {
            return None;
        }
        for ((_, x), (_, y)) in c.vertex_pairs().zip(t.vertex_pairs()) {
            if *vm.entry(x).or_insert(y) != y {
                return None;
            }
        }
        for ((_, x), (_, y)) in c.edge_pairs().zip(t.edge_pairs()) {
            if *em.entry(x).or_insert(y) != y {
                return None;
            }
        }
    }
    let vmap: Option<Vec<Id>> = p.vertices().iter().map(|v| vm.get(v).copied()).collect();
    let emap: Option<Vec<Id>> = p.edges().iter().map(|e| em.get(&e.id).copied()).collect();
    Morphism::new(p, q, vmap?, emap?).ok()
}

fn all_distinct(xs: &[Id]) -> bool {
    let mut seen = HashSet::with_capacity(xs.len());
    xs.iter().all(|x| seen.insert(*x))
}

fn covers(xs: &[Id], universe: impl Iterator<Item = Id>) -> bool {
    let hit: HashSet<Id> = xs.iter().copied().collect();
    universe.into_iter().all(|u| hit.contains(&u))
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Morphism{{v:")?;
        f.debug_map().entries(self.vertex_pairs()).finish()?;
        write!(f, ", e:")?;
        f.debug_map().entries(self.edge_pairs()).finish()?;
        write!(f, " : {:?} -> {:?}}}", self.dom, self.cod)
    }
}
