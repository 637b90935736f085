//! Seeded random graphs, rules and conditions for property corpora.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::condition::Condition;
use crate::graph::{Edge, Graph, GraphRef, Id};
use crate::morphism::Morphism;
use crate::rewriting::RuleWithConditions;
use crate::rule::Rule;

/// A graph with `vertices` vertices (ids `0..`) and up to `max_edges` random edges.
pub fn random_graph<R: Rng>(rng: &mut R, vertices: u32, max_edges: u32) -> Graph {
    let m = if vertices == 0 { 0 } else { rng.gen_range(0..=max_edges) };
    let edges: Vec<(Id, Id)> =
        (0..m).map(|_| (rng.gen_range(0..vertices), rng.gen_range(0..vertices))).collect();
    Graph::from_edges(vertices, &edges)
}

/// A random subgraph keeping each vertex and each surviving edge with probability one half.
pub fn random_subgraph<R: Rng>(rng: &mut R, g: &Graph) -> Graph {
    let keep_v: Vec<bool> = g.vertices().iter().map(|_| rng.gen_bool(0.5)).collect();
    let kept = |v: Id| keep_v[g.vertex_index(v).expect("vertex")];
    let keep_e: Vec<bool> = g.edges().iter().map(|e| kept(e.src) && kept(e.tgt) && rng.gen_bool(0.5)).collect();
    g.subgraph_by_mask(&keep_v, &keep_e)
}

/// Adds up to `max_new` fresh vertices and up to `max_new` fresh edges.
pub fn random_extension<R: Rng>(rng: &mut R, g: &Graph, max_new: u32) -> Graph {
    let mut vertices = g.vertices().to_vec();
    let mut next_v = g.next_vertex_id();
    for _ in 0..rng.gen_range(0..=max_new) {
        vertices.push(next_v);
        next_v += 1;
    }
    let mut edges = g.edges().to_vec();
    if !vertices.is_empty() {
        let mut next_e = g.next_edge_id();
        for _ in 0..rng.gen_range(0..=max_new) {
            let src = *vertices.choose(rng).expect("non-empty");
            let tgt = *vertices.choose(rng).expect("non-empty");
            edges.push(Edge { id: next_e, src, tgt });
            next_e += 1;
        }
    }
    Graph::new(vertices, edges).expect("fresh ids")
}

/// A rule whose input and output have at most `max_vertices` vertices; both
/// legs are inclusions.
pub fn random_rule<R: Rng>(rng: &mut R, max_vertices: u32) -> RuleWithConditions {
    loop {
        let n = rng.gen_range(0..=max_vertices);
        let input = random_graph(rng, n, 2);
        let context = random_subgraph(rng, &input);
        let room = max_vertices.saturating_sub(context.vertex_count() as u32);
        let output = random_extension(rng, &context, room.min(2));
        if output.vertex_count() as u32 > max_vertices || (input == context && output == context) {
            continue;
        }
        let (o, k, i) = (output.into_ref(), context.into_ref(), input.into_ref());
        let rule = Rule::new(Morphism::inclusion(&k, &o).expect("sub"), Morphism::inclusion(&k, &i).expect("sub"))
            .expect("mono");
        return rule.into();
    }
}

/// A condition over `root` with nesting depth at most `depth`; patterns add
/// at most one vertex and one edge per level.
pub fn random_condition<R: Rng>(rng: &mut R, root: &GraphRef, depth: usize) -> Condition {
    if depth == 0 {
        return if rng.gen_bool(0.8) { Condition::always(root) } else { Condition::never(root) };
    }
    match rng.gen_range(0..5) {
        0 => Condition::always(root),
        1 => random_condition(rng, root, depth).negate(),
        2 | 3 => {
            let ext = random_extension(rng, root, 1).into_ref();
            let leg = Morphism::inclusion(root, &ext).expect("extension");
            let inner = random_condition(rng, &ext, depth - 1);
            Condition::exists(leg, inner).expect("mono leg")
        }
        _ => {
            let parts = vec![random_condition(rng, root, depth - 1), random_condition(rng, root, depth - 1)];
            if rng.gen_bool(0.5) {
                Condition::and(root, parts).expect("same root")
            } else {
                Condition::or(root, parts).expect("same root")
            }
        }
    }
}
