//! Linear rules `O <- K -> I`, read right to left: `I` is rewritten into `O`.

use thiserror::Error;

use crate::colimits::{compose_spans, Span};
use crate::graph::GraphRef;
use crate::matching::isomorphic;
use crate::morphism::{same_graph, Morphism};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("rule legs do not share the context graph")]
    ContextMismatch,
    #[error("output leg K -> O is not injective")]
    OutputNotMono,
    #[error("input leg K -> I is not injective")]
    InputNotMono,
    #[error("output of the first rule is not the input of the second")]
    NotComposable,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    o: Morphism,
    i: Morphism,
}

impl Rule {
    /// `o: K -> O` and `i: K -> I`, both mono.
    pub fn new(o: Morphism, i: Morphism) -> Result<Self, RuleError> {
        if !same_graph(o.dom(), i.dom()) {
            return Err(RuleError::ContextMismatch);
        }
        if !o.is_mono() {
            return Err(RuleError::OutputNotMono);
        }
        if !i.is_mono() {
            return Err(RuleError::InputNotMono);
        }
        let i = i.with_dom(o.dom());
        Ok(Rule { o, i })
    }

    pub fn from_span(s: Span) -> Result<Self, RuleError> {
        Rule::new(s.left, s.right)
    }

    pub fn identity(g: &GraphRef) -> Self {
        Rule { o: Morphism::identity(g), i: Morphism::identity(g) }
    }

    pub fn output(&self) -> &GraphRef {
        self.o.cod()
    }

    pub fn context(&self) -> &GraphRef {
        self.o.dom()
    }

    pub fn input(&self) -> &GraphRef {
        self.i.cod()
    }

    pub fn o(&self) -> &Morphism {
        &self.o
    }

    pub fn i(&self) -> &Morphism {
        &self.i
    }

    pub fn as_span(&self) -> Span {
        Span { left: self.o.clone(), right: self.i.clone() }
    }

    /// The rule read in the opposite direction, `I <- K -> O`.
    pub fn reversed(&self) -> Rule {
        Rule { o: self.i.clone(), i: self.o.clone() }
    }

    /// Sequential composite `self ∘ first` by span composition; requires
    /// `first.output() == self.input()`.
    pub fn after(&self, first: &Rule) -> Result<Rule, RuleError> {
        let s = compose_spans(&self.as_span(), &first.as_span()).map_err(|_| RuleError::NotComposable)?;
        Rule::from_span(s)
    }

    /// Whether the rule neither deletes nor creates anything.
    pub fn is_identity_like(&self) -> bool {
        self.o.is_iso() && self.i.is_iso()
    }

    /// A rule isomorphism: isos on O, K, I commuting with both legs.
    pub fn isomorphic_to(&self, other: &Rule) -> bool {
        crate::diagram::rule_iso(self, other).is_some()
    }

    pub(crate) fn sizes(&self) -> [(usize, usize); 3] {
        let s = |g: &GraphRef| (g.vertex_count(), g.edge_count());
        [s(self.output()), s(self.context()), s(self.input())]
    }

    pub(crate) fn quick_iso_reject(&self, other: &Rule) -> bool {
        self.sizes() != other.sizes()
            || isomorphic(self.output(), other.output()).is_none()
            || isomorphic(self.input(), other.input()).is_none()
    }
}
