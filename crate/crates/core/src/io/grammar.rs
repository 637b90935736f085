//! Grammar files: named graphs, named rules and pathway queries.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::json::{graph_doc, graph_from_doc, rule_doc, rule_from_doc, to_canonical_string, GraphDoc, RuleDoc};
use crate::condition::Bound;
use crate::graph::GraphRef;
use crate::rewriting::{Kind, RuleWithConditions};

/// One problem found while loading a grammar, tied to the object it concerns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub object: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.object, self.message)
    }
}

#[derive(Debug, Error)]
pub enum GrammarError {
    #[error("malformed grammar file: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("invalid grammar:\n{}", .0.iter().map(|d| format!("  {d}")).collect::<Vec<_>>().join("\n"))]
    Invalid(Vec<Diagnostic>),
    #[error("no {what} named `{name}`")]
    Unresolved { what: &'static str, name: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindDoc {
    #[default]
    Dpo,
    Sqpo,
}

impl From<KindDoc> for Kind {
    fn from(k: KindDoc) -> Kind {
        match k {
            KindDoc::Dpo => Kind::Dpo,
            KindDoc::Sqpo => Kind::SqPo,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundDoc {
    pub vertices: u32,
    pub edges: u32,
}

impl From<BoundDoc> for Bound {
    fn from(b: BoundDoc) -> Bound {
        Bound::new(b.vertices, b.edges)
    }
}

/// A pathway query: which target, which transitions, how long.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QueryDoc {
    pub target: String,
    #[serde(default)]
    pub transitions: Vec<String>,
    pub nmax: usize,
    #[serde(rename = "type", default)]
    pub kind: KindDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<BoundDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GrammarDoc {
    #[serde(default)]
    graphs: BTreeMap<String, GraphDoc>,
    #[serde(default)]
    rules: BTreeMap<String, RuleDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    queries: BTreeMap<String, QueryDoc>,
}

#[derive(Debug, Clone, Default)]
pub struct Grammar {
    pub graphs: BTreeMap<String, GraphRef>,
    pub rules: BTreeMap<String, RuleWithConditions>,
    pub queries: BTreeMap<String, QueryDoc>,
}

impl Grammar {
    /// Parses and validates; any diagnostic makes the whole file invalid.
    pub fn parse(text: &str) -> Result<Grammar, GrammarError> {
        let (grammar, diagnostics) = Self::load(text)?;
        if diagnostics.is_empty() {
            Ok(grammar)
        } else {
            Err(GrammarError::Invalid(diagnostics))
        }
    }

    /// Every problem in the file. Empty means the file is well-formed.
    pub fn check(text: &str) -> Result<Vec<Diagnostic>, GrammarError> {
        Self::load(text).map(|(_, d)| d)
    }

    fn load(text: &str) -> Result<(Grammar, Vec<Diagnostic>), GrammarError> {
        let doc: GrammarDoc = serde_json::from_str(text)?;
        let mut diagnostics = Vec::new();
        let mut g = Grammar::default();
        for (name, gd) in &doc.graphs {
            match graph_from_doc(gd) {
                Ok(graph) => {
                    g.graphs.insert(name.clone(), graph.into_ref());
                }
                Err(e) => diagnostics.push(Diagnostic { object: format!("graph `{name}`"), message: e.to_string() }),
            }
        }
        for (name, rd) in &doc.rules {
            match rule_from_doc(rd) {
                Ok(r) => {
                    g.rules.insert(name.clone(), r);
                }
                Err(e) => diagnostics.push(Diagnostic { object: format!("rule `{name}`"), message: e.to_string() }),
            }
        }
        for (name, q) in &doc.queries {
            let object = format!("query `{name}`");
            for r in std::iter::once(&q.target).chain(&q.transitions) {
                if !doc.rules.contains_key(r) {
                    diagnostics.push(Diagnostic { object: object.clone(), message: format!("unknown rule `{r}`") });
                }
            }
            if q.nmax < 2 {
                diagnostics.push(Diagnostic { object: object.clone(), message: "nmax must be at least 2".into() });
            }
        }
        g.queries = doc.queries;
        Ok((g, diagnostics))
    }

    pub fn to_canonical_json(&self) -> String {
        let doc = GrammarDoc {
            graphs: self.graphs.iter().map(|(k, v)| (k.clone(), graph_doc(v))).collect(),
            rules: self.rules.iter().map(|(k, v)| (k.clone(), rule_doc(v))).collect(),
            queries: self.queries.clone(),
        };
        to_canonical_string(&doc)
    }

    pub fn graph(&self, name: &str) -> Result<&GraphRef, GrammarError> {
        self.graphs.get(name).ok_or_else(|| GrammarError::Unresolved { what: "graph", name: name.into() })
    }

    pub fn rule(&self, name: &str) -> Result<&RuleWithConditions, GrammarError> {
        self.rules.get(name).ok_or_else(|| GrammarError::Unresolved { what: "rule", name: name.into() })
    }

    pub fn query(&self, name: &str) -> Result<&QueryDoc, GrammarError> {
        self.queries.get(name).ok_or_else(|| GrammarError::Unresolved { what: "query", name: name.into() })
    }
}
