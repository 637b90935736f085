//! Commands behind the `tracelets` binary. Each returns the exact text to
//! print, so output can be compared byte for byte.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use tracelets::condition::Bound;
use tracelets::feta::{feta, pathway_report, PathwayQuery};
use tracelets::io::dot::{derivation_to_dot, tracelet_to_dot};
use tracelets::io::json::{derivation_value, graph_doc, morphism_doc, rule_doc, to_canonical_string};
use tracelets::io::{Diagnostic, Grammar, GrammarError};
use tracelets::matching::enumerate_monos;
use tracelets::rewriting::{apply, enumerate_compositions, Kind, RewriteError};
use tracelets::sample::{random_condition, random_graph, random_rule};
use tracelets::tracelet::EquivalenceConfig;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read `{path}`: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Grammar(GrammarError),
    #[error("no {what} named `{name}`")]
    Unresolved { what: &'static str, name: String },
    #[error("inadmissible match: {0}")]
    Inadmissible(String),
    #[error("{} problem(s) found", .0.len())]
    Invalid(Vec<Diagnostic>),
}

impl From<GrammarError> for CliError {
    fn from(e: GrammarError) -> Self {
        match e {
            GrammarError::Unresolved { what, name } => CliError::Unresolved { what, name },
            other => CliError::Grammar(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Unresolved { .. } => 2,
            CliError::Inadmissible(_) => 3,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Dot,
}

pub fn read_grammar(path: &str) -> Result<Grammar, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    Ok(Grammar::parse(&text)?)
}

/// `"ok\n"` for a well-formed grammar, otherwise every diagnostic.
pub fn cmd_check(text: &str) -> Result<String, CliError> {
    let diagnostics = Grammar::check(text)?;
    if diagnostics.is_empty() {
        Ok("ok\n".into())
    } else {
        Err(CliError::Invalid(diagnostics))
    }
}

/// The grammar in canonical form.
pub fn cmd_canonical(grammar: &Grammar) -> String {
    grammar.to_canonical_json()
}

/// Applies `rule` to `graph` at the `match_index`-th injective match in
/// canonical order.
pub fn cmd_apply(
    grammar: &Grammar,
    rule: &str,
    graph: &str,
    match_index: usize,
    kind: Kind,
    format: Format,
) -> Result<String, CliError> {
    let r = grammar.rule(rule)?;
    let x = grammar.graph(graph)?;
    let matches = enumerate_monos(r.input(), x);
    let m = matches.get(match_index).ok_or_else(|| {
        CliError::Inadmissible(format!("rule `{rule}` has {} match(es) into `{graph}`, none with index {match_index}", matches.len()))
    })?;
    let d = apply(r, m, kind).map_err(|e| match e {
        RewriteError::NoPushoutComplement => CliError::Inadmissible(format!(
            "no pushout-complement for rule `{rule}` at match {match_index}: an edge would be left dangling"
        )),
        RewriteError::ConditionViolated => {
            CliError::Inadmissible(format!("application condition of rule `{rule}` fails at match {match_index}"))
        }
        other => CliError::Inadmissible(other.to_string()),
    })?;
    Ok(match format {
        Format::Json => to_canonical_string(&json!({
            "rule": rule,
            "graph": graph,
            "match_index": match_index,
            "type": kind.to_string(),
            "derivation": derivation_value(&d),
        })),
        Format::Dot => derivation_to_dot(&d, &format!("{rule}@{graph}#{match_index}")),
    })
}

/// Every admissible composite of `later` after `earlier`, with the overlap
/// each one was built from.
pub fn cmd_compose(grammar: &Grammar, later: &str, earlier: &str, kind: Kind, bound: Bound) -> Result<String, CliError> {
    let r2 = grammar.rule(later)?;
    let r1 = grammar.rule(earlier)?;
    let mut entries: Vec<Value> = enumerate_compositions(r2, r1, kind, bound)
        .iter()
        .map(|c| {
            json!({
                "overlap": {
                    "apex": graph_doc(c.overlap.apex()),
                    "into_later_input": morphism_doc(&c.overlap.left),
                    "into_earlier_output": morphism_doc(&c.overlap.right),
                },
                "composite": rule_doc(&c.composite),
            })
        })
        .collect();
    entries.sort_by_cached_key(|v| v.to_string());
    Ok(to_canonical_string(&json!({
        "later": later,
        "earlier": earlier,
        "type": kind.to_string(),
        "bound": {"vertices": bound.extra_vertices, "edges": bound.extra_edges},
        "count": entries.len(),
        "composites": entries,
    })))
}

/// Settings given on the command line; each overrides the query's own.
#[derive(Debug, Clone, Copy, Default)]
pub struct FetaOverrides {
    pub nmax: Option<usize>,
    pub kind: Option<Kind>,
    pub bound: Option<Bound>,
}

pub fn build_query(grammar: &Grammar, name: &str, overrides: FetaOverrides) -> Result<PathwayQuery, CliError> {
    let q = grammar.query(name)?;
    let named = |n: &String| grammar.rule(n).map(|r| (n.clone(), r.clone()));
    let target = named(&q.target)?;
    let transitions = q.transitions.iter().map(named).collect::<Result<Vec<_>, _>>()?;
    let mut config = EquivalenceConfig::default();
    if let Some(b) = overrides.bound.or(q.bound.map(Bound::from)) {
        config.bound = b;
    }
    if let Some(w) = q.window {
        config.window_cap = w;
    }
    Ok(PathwayQuery {
        transitions,
        target,
        nmax: overrides.nmax.unwrap_or(q.nmax),
        kind: overrides.kind.unwrap_or(q.kind.into()),
        config,
    })
}

/// Runs the pathway search of query `name`.
pub fn cmd_feta(grammar: &Grammar, name: &str, overrides: FetaOverrides, format: Format) -> Result<String, CliError> {
    let q = build_query(grammar, name, overrides)?;
    let set = feta(&q);
    Ok(match format {
        Format::Json => to_canonical_string(&pathway_report(&q, &set)),
        Format::Dot => set
            .levels
            .iter()
            .enumerate()
            .flat_map(|(k, level)| {
                level.iter().enumerate().map(move |(j, p)| tracelet_to_dot(&p.tracelet, &format!("{name}_n{}_{j}", k + 1)))
            })
            .collect(),
    })
}

/// A random grammar for property-test corpora: one start graph and
/// `rules` random rules, some with conditions.
pub fn cmd_sample(seed: u64, rules: usize) -> Result<String, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = random_graph(&mut rng, 4, 4);
    let mut doc = json!({"graphs": {"start": graph_doc(&start)}, "rules": {}});
    for k in 0..rules {
        let r = random_rule(&mut rng, 3);
        let r = if k % 2 == 1 {
            let c = random_condition(&mut rng, r.input(), 1);
            tracelets::rewriting::RuleWithConditions::new(r.rule().clone(), c).expect("root is the input")
        } else {
            r
        };
        doc["rules"][format!("r{k}")] = serde_json::to_value(rule_doc(&r)).expect("serializable");
    }
    let grammar = Grammar::parse(&doc.to_string())?;
    Ok(grammar.to_canonical_json())
}
