//! Graphviz output for graphs, derivations and tracelets.

use std::fmt::Write;

use crate::graph::Graph;
use crate::morphism::Morphism;
use crate::rewriting::DirectDerivation;
use crate::tracelet::{tracelet_diagram, Tracelet};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn write_graph_body(out: &mut String, g: &Graph, prefix: &str, indent: &str) {
    for v in g.vertices() {
        writeln!(out, "{indent}{} [label=\"{v}\"];", quote(&format!("{prefix}v{v}"))).unwrap();
    }
    for e in g.edges() {
        writeln!(
            out,
            "{indent}{} -> {} [label=\"e{}\"];",
            quote(&format!("{prefix}v{}", e.src)),
            quote(&format!("{prefix}v{}", e.tgt)),
            e.id
        )
        .unwrap();
    }
}

pub fn graph_to_dot(g: &Graph, name: &str) -> String {
    let mut out = format!("digraph {} {{\n", quote(name));
    write_graph_body(&mut out, g, "", "  ");
    out.push_str("}\n");
    out
}

fn summary(m: &Morphism) -> String {
    let vs: Vec<String> = m.vertex_pairs().map(|(a, b)| format!("{a}>{b}")).collect();
    let es: Vec<String> = m.edge_pairs().map(|(a, b)| format!("e{a}>e{b}")).collect();
    [vs, es].concat().join(" ")
}

/// Objects as clusters, arrows as dashed edges between cluster anchors.
fn diagram_to_dot(name: &str, labels: &[String], d: &crate::diagram::Diagram, rows: &[Vec<usize>]) -> String {
    let mut out = format!("digraph {} {{\n  compound=true;\n  newrank=true;\n", quote(name));
    for (k, g) in d.objects.iter().enumerate() {
        writeln!(out, "  subgraph \"cluster_{k}\" {{\n    label={};", quote(&labels[k])).unwrap();
        writeln!(out, "    \"o{k}\" [shape=point, style=invis];").unwrap();
        write_graph_body(&mut out, g, &format!("o{k}_"), "    ");
        out.push_str("  }\n");
    }
    for row in rows {
        let anchors: Vec<String> = row.iter().map(|k| format!("\"o{k}\"")).collect();
        writeln!(out, "  {{ rank=same; {} }}", anchors.join("; ")).unwrap();
    }
    for (s, t, m) in &d.arrows {
        writeln!(
            out,
            "  \"o{s}\" -> \"o{t}\" [ltail=\"cluster_{s}\", lhead=\"cluster_{t}\", style=dashed, label={}];",
            quote(&summary(m))
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

/// One column per step: the rule on top, the interface row below.
pub fn tracelet_to_dot(t: &Tracelet, name: &str) -> String {
    let d = tracelet_diagram(t);
    let n = t.len();
    let mut labels: Vec<String> = (0..=n).map(|j| format!("Y{j}")).collect();
    let mut top = Vec::new();
    let mut bottom: Vec<usize> = (0..=n).collect();
    for j in 0..n {
        let base = n + 1 + 4 * j;
        labels.extend([format!("O{}", j + 1), format!("K{}", j + 1), format!("I{}", j + 1), format!("Kbar{}", j + 1)]);
        top.extend([base, base + 1, base + 2]);
        bottom.push(base + 3);
    }
    diagram_to_dot(name, &labels, &d, &[top, bottom])
}

pub fn derivation_to_dot(dd: &DirectDerivation, name: &str) -> String {
    let mut d = crate::diagram::Diagram::default();
    let o = d.add_object(dd.rule.output().clone());
    let k = d.add_object(dd.rule.context().clone());
    let i = d.add_object(dd.rule.input().clone());
    let y = d.add_object(dd.result().clone());
    let bar = d.add_object(dd.interior.cod().clone());
    let x = d.add_object(dd.start().clone());
    d.add_arrow(k, o, dd.rule.o().clone());
    d.add_arrow(k, i, dd.rule.i().clone());
    d.add_arrow(o, y, dd.comatch.clone());
    d.add_arrow(k, bar, dd.interior.clone());
    d.add_arrow(i, x, dd.matching.clone());
    d.add_arrow(bar, y, dd.into_output.clone());
    d.add_arrow(bar, x, dd.into_input.clone());
    let labels: Vec<String> = ["O", "K", "I", "Y", "Xbar", "X"].iter().map(|s| s.to_string()).collect();
    diagram_to_dot(name, &labels, &d, &[vec![o, k, i], vec![y, bar, x]])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_dot_lists_every_element() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]);
        let s = graph_to_dot(&g, "g");
        assert!(s.starts_with("digraph \"g\" {"));
        assert_eq!(s.matches("[label=\"e").count(), 2);
        assert!(s.contains("\"v2\" [label=\"2\"]"));
    }
}
