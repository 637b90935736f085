//! Finite directed multigraphs with stable integer identities.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Identifier of a vertex or an edge. Values carry no meaning beyond identity.
pub type Id = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {0} listed twice")]
    DuplicateVertex(Id),
    #[error("edge {0} listed twice")]
    DuplicateEdge(Id),
    #[error("edge {edge} refers to missing vertex {vertex}")]
    DanglingEdge { edge: Id, vertex: Id },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub id: Id,
    pub src: Id,
    pub tgt: Id,
}

/// A finite directed multigraph. Vertices and edges are kept sorted by id.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    vertices: Vec<Id>,
    edges: Vec<Edge>,
}

impl Graph {
    pub fn new(
        vertices: impl IntoIterator<Item = Id>,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Result<Self, GraphError> {
        let mut vertices: Vec<Id> = vertices.into_iter().collect();
        vertices.sort_unstable();
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateVertex(w[0]));
        }
        let mut edges: Vec<Edge> = edges.into_iter().collect();
        edges.sort_unstable_by_key(|e| e.id);
        if let Some(w) = edges.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(GraphError::DuplicateEdge(w[0].id));
        }
        for e in &edges {
            for v in [e.src, e.tgt] {
                if vertices.binary_search(&v).is_err() {
                    return Err(GraphError::DanglingEdge { edge: e.id, vertex: v });
                }
            }
        }
        Ok(Graph { vertices, edges })
    }

    /// The empty graph, the strict initial object.
    pub fn empty() -> Self {
        Graph::default()
    }

    /// Graph on vertices `0..n` with edges numbered in the order given.
    ///
    /// Panics if an endpoint is out of range; meant for fixtures.
    pub fn from_edges(n: u32, edges: &[(Id, Id)]) -> Self {
        let edges = edges
            .iter()
            .enumerate()
            .map(|(i, &(src, tgt))| Edge { id: i as Id, src, tgt });
        Graph::new(0..n, edges).expect("fixture graph is well formed")
    }

    /// Assembles a graph from parts already known to be valid and sorted.
    pub(crate) fn from_sorted_parts(vertices: Vec<Id>, edges: Vec<Edge>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(edges.windows(2).all(|w| w[0].id < w[1].id));
        Graph { vertices, edges }
    }

    pub fn vertices(&self) -> &[Id] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Total number of elements (vertices plus edges).
    pub fn size(&self) -> usize {
        self.vertices.len() + self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex_index(&self, v: Id) -> Option<usize> {
        self.vertices.binary_search(&v).ok()
    }

    pub fn edge_index(&self, e: Id) -> Option<usize> {
        self.edges.binary_search_by_key(&e, |x| x.id).ok()
    }

    pub fn has_vertex(&self, v: Id) -> bool {
        self.vertex_index(v).is_some()
    }

    pub fn edge(&self, e: Id) -> Option<Edge> {
        self.edge_index(e).map(|i| self.edges[i])
    }

    pub fn next_vertex_id(&self) -> Id {
        self.vertices.last().map_or(0, |v| v + 1)
    }

    pub fn next_edge_id(&self) -> Id {
        self.edges.last().map_or(0, |e| e.id + 1)
    }

    pub fn out_degree(&self, v: Id) -> usize {
        self.edges.iter().filter(|e| e.src == v).count()
    }

    pub fn in_degree(&self, v: Id) -> usize {
        self.edges.iter().filter(|e| e.tgt == v).count()
    }

    /// Subgraph induced by the given vertex and edge index masks.
    ///
    /// Edges whose endpoints are not kept are dropped.
    pub fn subgraph_by_mask(&self, keep_v: &[bool], keep_e: &[bool]) -> Graph {
        let vertices: Vec<Id> = self
            .vertices
            .iter()
            .zip(keep_v)
            .filter_map(|(&v, &k)| k.then_some(v))
            .collect();
        let edges = self
            .edges
            .iter()
            .zip(keep_e)
            .filter(|(e, &k)| {
                k && vertices.binary_search(&e.src).is_ok() && vertices.binary_search(&e.tgt).is_ok()
            })
            .map(|(e, _)| *e)
            .collect();
        Graph::from_sorted_parts(vertices, edges)
    }

    /// Sorted (out-degree, in-degree, loops) triples; an isomorphism invariant.
    pub fn degree_profile(&self) -> Vec<(usize, usize, usize)> {
        let mut deg: HashMap<Id, (usize, usize, usize)> =
            self.vertices.iter().map(|&v| (v, (0, 0, 0))).collect();
        for e in &self.edges {
            deg.get_mut(&e.src).expect("valid graph").0 += 1;
            deg.get_mut(&e.tgt).expect("valid graph").1 += 1;
            if e.src == e.tgt {
                deg.get_mut(&e.src).expect("valid graph").2 += 1;
            }
        }
        let mut out: Vec<_> = deg.into_values().collect();
        out.sort_unstable();
        out
    }

    pub fn into_ref(self) -> GraphRef {
        Arc::new(self)
    }
}

/// Shared handle to an immutable graph.
pub type GraphRef = Arc<Graph>;

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph{{V={:?}, E=[", self.vertices)?;
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}:{}->{}", e.id, e.src, e.tgt)?;
        }
        write!(f, "]}}")
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Lookup table from (src, tgt) to the sorted edge ids between them.
pub(crate) struct Adjacency {
    pub(crate) between: HashMap<(Id, Id), Vec<Id>>,
    pub(crate) out_deg: HashMap<Id, usize>,
    pub(crate) in_deg: HashMap<Id, usize>,
    pub(crate) loops: HashMap<Id, usize>,
}

impl Adjacency {
    pub(crate) fn of(g: &Graph) -> Self {
        let mut between: HashMap<(Id, Id), Vec<Id>> = HashMap::new();
        let mut out_deg = HashMap::new();
        let mut in_deg = HashMap::new();
        let mut loops = HashMap::new();
        for e in g.edges() {
            between.entry((e.src, e.tgt)).or_default().push(e.id);
            *out_deg.entry(e.src).or_insert(0) += 1;
            *in_deg.entry(e.tgt).or_insert(0) += 1;
            if e.src == e.tgt {
                *loops.entry(e.src).or_insert(0) += 1;
            }
        }
        Adjacency { between, out_deg, in_deg, loops }
    }

    pub(crate) fn edges_between(&self, s: Id, t: Id) -> &[Id] {
        self.between.get(&(s, t)).map_or(&[], |v| v.as_slice())
    }

    pub(crate) fn degrees(&self, v: Id) -> (usize, usize, usize) {
        (
            self.out_deg.get(&v).copied().unwrap_or(0),
            self.in_deg.get(&v).copied().unwrap_or(0),
            self.loops.get(&v).copied().unwrap_or(0),
        )
    }
}
