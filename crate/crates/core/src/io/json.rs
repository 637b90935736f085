//! Canonical JSON for graphs, morphisms, rules, conditions, derivations and
//! tracelets. Keys are emitted sorted and ids ascending, so equal values
//! serialize to identical bytes.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::condition::{Body, Condition, ConditionError};
use crate::graph::{Edge, Graph, GraphError, GraphRef, Id};
use crate::morphism::{Morphism, MorphismError};
use crate::rewriting::{DirectDerivation, RuleWithConditions};
use crate::rule::{Rule, RuleError};
use crate::tracelet::{tracelet_diagram, Tracelet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("{0}")]
    Graph(#[from] GraphError),
    #[error("{which}: {source}")]
    Morphism { which: &'static str, source: MorphismError },
    #[error("{0}")]
    Rule(#[from] RuleError),
    #[error("condition: {0}")]
    Condition(#[from] ConditionError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub id: Id,
    pub src: Id,
    pub tgt: Id,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    #[serde(default)]
    pub vertices: Vec<Id>,
    #[serde(default)]
    pub edges: Vec<EdgeDoc>,
}

/// Element pairs `(source, image)`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDoc {
    #[serde(default)]
    pub vertices: Vec<(Id, Id)>,
    #[serde(default)]
    pub edges: Vec<(Id, Id)>,
}

/// A node tagged by `op`: `true`, `false`, `exists`, `not`, `and`, `or`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum ConditionDoc {
    True,
    False,
    /// `graph` is the codomain of `leg`.
    Exists { graph: GraphDoc, leg: MorphismDoc, inner: Box<ConditionDoc> },
    Not { inner: Box<ConditionDoc> },
    And { args: Vec<ConditionDoc> },
    Or { args: Vec<ConditionDoc> },
}

/// A rule `output <- context -> input`. Legs that send every id to itself
/// may be omitted on input; `cond` is `null` for the trivial condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleDoc {
    pub output: GraphDoc,
    pub context: GraphDoc,
    pub input: GraphDoc,
    #[serde(default)]
    pub o: Option<MorphismDoc>,
    #[serde(default)]
    pub i: Option<MorphismDoc>,
    #[serde(default)]
    pub cond: Option<ConditionDoc>,
}

pub fn graph_doc(g: &Graph) -> GraphDoc {
    GraphDoc {
        vertices: g.vertices().to_vec(),
        edges: g.edges().iter().map(|e| EdgeDoc { id: e.id, src: e.src, tgt: e.tgt }).collect(),
    }
}

pub fn graph_from_doc(d: &GraphDoc) -> Result<Graph, GraphError> {
    Graph::new(d.vertices.iter().copied(), d.edges.iter().map(|e| Edge { id: e.id, src: e.src, tgt: e.tgt }))
}

pub fn morphism_doc(m: &Morphism) -> MorphismDoc {
    MorphismDoc { vertices: m.vertex_pairs().collect(), edges: m.edge_pairs().collect() }
}

pub fn morphism_from_doc(d: &MorphismDoc, dom: &GraphRef, cod: &GraphRef) -> Result<Morphism, MorphismError> {
    Morphism::from_pairs(dom.clone(), cod.clone(), &d.vertices, &d.edges)
}

pub fn condition_doc(c: &Condition) -> ConditionDoc {
    body_doc(c.body())
}

fn body_doc(b: &Body) -> ConditionDoc {
    match b {
        Body::True => ConditionDoc::True,
        Body::Or(v) if v.is_empty() => ConditionDoc::False,
        Body::Exists { leg, inner } => ConditionDoc::Exists {
            graph: graph_doc(leg.cod()),
            leg: morphism_doc(leg),
            inner: Box::new(condition_doc(inner)),
        },
        Body::Not(b) => ConditionDoc::Not { inner: Box::new(body_doc(b)) },
        Body::And(v) => ConditionDoc::And { args: v.iter().map(body_doc).collect() },
        Body::Or(v) => ConditionDoc::Or { args: v.iter().map(body_doc).collect() },
    }
}

pub fn condition_from_doc(d: &ConditionDoc, root: &GraphRef) -> Result<Condition, DecodeError> {
    let body = body_from_doc(d, root)?;
    Ok(Condition::from_body(root, body)?)
}

fn body_from_doc(d: &ConditionDoc, root: &GraphRef) -> Result<Body, DecodeError> {
    let all = |v: &[ConditionDoc]| v.iter().map(|b| body_from_doc(b, root)).collect::<Result<Vec<_>, _>>();
    Ok(match d {
        ConditionDoc::True => Body::True,
        ConditionDoc::False => Body::Or(Vec::new()),
        ConditionDoc::Exists { graph, leg, inner } => {
            let cod = graph_from_doc(graph)?.into_ref();
            let leg = morphism_from_doc(leg, root, &cod)
                .map_err(|source| DecodeError::Morphism { which: "condition leg", source })?;
            let inner = condition_from_doc(inner, &cod)?;
            Body::Exists { leg, inner: Box::new(inner) }
        }
        ConditionDoc::Not { inner } => Body::Not(Box::new(body_from_doc(inner, root)?)),
        ConditionDoc::And { args } => Body::And(all(args)?),
        ConditionDoc::Or { args } => Body::Or(all(args)?),
    })
}

pub fn rule_doc(r: &RuleWithConditions) -> RuleDoc {
    let rule = r.rule();
    RuleDoc {
        output: graph_doc(rule.output()),
        context: graph_doc(rule.context()),
        input: graph_doc(rule.input()),
        o: Some(morphism_doc(rule.o())),
        i: Some(morphism_doc(rule.i())),
        cond: (!r.cond().is_true()).then(|| condition_doc(r.cond())),
    }
}

pub fn rule_from_doc(d: &RuleDoc) -> Result<RuleWithConditions, DecodeError> {
    let output = graph_from_doc(&d.output)?.into_ref();
    let context = graph_from_doc(&d.context)?.into_ref();
    let input = graph_from_doc(&d.input)?.into_ref();
    let leg = |doc: &Option<MorphismDoc>, cod: &GraphRef, which: &'static str| match doc {
        Some(m) => morphism_from_doc(m, &context, cod),
        None => Morphism::inclusion(&context, cod),
    }
    .map_err(|source| DecodeError::Morphism { which, source });
    let o = leg(&d.o, &output, "leg o")?;
    let i = leg(&d.i, &input, "leg i")?;
    let rule = Rule::new(o, i)?;
    let cond = match &d.cond {
        Some(c) => condition_from_doc(c, rule.input())?,
        None => Condition::always(rule.input()),
    };
    Ok(RuleWithConditions::new(rule, cond)?)
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn to_canonical_string<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("serializable");
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}

pub fn derivation_value(d: &DirectDerivation) -> Value {
    json!({
        "kind": d.kind.to_string(),
        "start": graph_doc(d.start()),
        "match": morphism_doc(&d.matching),
        "interior": graph_doc(d.into_input.dom()),
        "result": graph_doc(d.result()),
        "comatch": morphism_doc(&d.comatch),
    })
}

/// The tracelet's full diagram as object and arrow tables, plus its rules
/// and composite condition.
pub fn tracelet_value(t: &Tracelet) -> Value {
    let d = tracelet_diagram(t);
    let objects: Vec<GraphDoc> = d.objects.iter().map(|g| graph_doc(g)).collect();
    let arrows: Vec<Value> = d
        .arrows
        .iter()
        .map(|(s, t, m)| json!({"src": s, "tgt": t, "map": morphism_doc(m)}))
        .collect();
    json!({
        "kind": t.kind().to_string(),
        "length": t.len(),
        "rules": t.rules().iter().map(rule_doc).collect::<Vec<_>>(),
        "objects": objects,
        "arrows": arrows,
        "composite": rule_doc(t.evaluate()),
    })
}

/// Compact canonical form used to pick class representatives.
pub fn tracelet_key(t: &Tracelet) -> String {
    serde_json::to_string(&tracelet_value(t)).expect("serializable")
}
