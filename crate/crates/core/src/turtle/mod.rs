//! Turtle subset codec: `@prefix`/`@base` directives, prefixed names and
//! IRI references, `a`, predicate lists (`;`), object lists (`,`), string
//! literals with `^^datatype` or `@lang`, boolean/integer/decimal shorthand
//! and `#` comments. Anything else is rejected with a positioned diagnostic.

pub(crate) mod lexer;
pub(crate) mod parser;
mod serializer;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::schema::vocab::{DEFAULT_INSTANCE_NS, STANDARD_PREFIXES};
use crate::store::{Graph, StoreError};
use crate::term::{Iri, Term, TermError, Triple};

pub use parser::{parse_iri, parse_term, parse_turtle};
pub use serializer::{serialize_graph, serialize_turtle};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TurtleError {
    #[error("{line}:{column}: expected {expected}, found {found}")]
    Syntax {
        line: usize,
        column: usize,
        expected: String,
        found: String,
    },
    #[error("{line}:{column}: unknown prefix '{prefix}:'")]
    UnknownPrefix {
        prefix: String,
        line: usize,
        column: usize,
    },
    #[error("{line}:{column}: {source}")]
    InvalidTerm {
        line: usize,
        column: usize,
        source: TermError,
    },
    #[error("namespace for prefix '{prefix}:' is not an absolute IRI: {namespace}")]
    RelativeNamespace { prefix: String, namespace: String },
    #[error("invalid prefix label '{0}'")]
    InvalidPrefixLabel(String),
}

pub(crate) fn is_absolute_iri(value: &str) -> bool {
    let Some((scheme, _)) = value.split_once(':') else {
        return false;
    };
    let mut chars = scheme.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
        && !value.chars().any(char::is_whitespace)
}

/// Prefix label to namespace bindings, plus an optional base IRI.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PrefixMap {
    entries: BTreeMap<String, Iri>,
    base: Option<Iri>,
}

impl PrefixMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// The standard vocabulary prefixes with the empty prefix bound to
    /// `instance_ns`.
    pub fn standard(instance_ns: &str) -> Result<Self, TurtleError> {
        let mut map = Self::new();
        for (label, ns) in STANDARD_PREFIXES {
            map.insert(label, ns)?;
        }
        map.insert("", instance_ns)?;
        Ok(map)
    }

    /// [`PrefixMap::standard`] with the default instance namespace.
    pub fn bundled() -> Self {
        Self::standard(DEFAULT_INSTANCE_NS).expect("bundled prefixes are valid")
    }

    /// Binds a prefix; re-declaring a label overwrites it.
    pub fn insert(&mut self, label: &str, namespace: &str) -> Result<(), TurtleError> {
        if !lexer::is_valid_prefix_label(label) {
            return Err(TurtleError::InvalidPrefixLabel(label.to_string()));
        }
        if !is_absolute_iri(namespace) {
            return Err(TurtleError::RelativeNamespace {
                prefix: label.to_string(),
                namespace: namespace.to_string(),
            });
        }
        let ns = Iri::new(namespace).map_err(|_| TurtleError::RelativeNamespace {
            prefix: label.to_string(),
            namespace: namespace.to_string(),
        })?;
        self.entries.insert(label.to_string(), ns);
        Ok(())
    }

    pub fn get(&self, label: &str) -> Option<&Iri> {
        self.entries.get(label)
    }

    pub fn base(&self) -> Option<&Iri> {
        self.base.as_ref()
    }

    pub fn set_base(&mut self, base: Option<Iri>) {
        self.base = base;
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Bindings sorted by label.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &Iri)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Adds every binding of `other`, overwriting shared labels.
    pub fn merge(&mut self, other: &PrefixMap) {
        for (label, ns) in &other.entries {
            self.entries.insert(label.clone(), ns.clone());
        }
        if other.base.is_some() {
            self.base = other.base.clone();
        }
    }

    pub fn expand(&self, prefix: &str, local: &str) -> Option<String> {
        self.entries
            .get(prefix)
            .map(|ns| format!("{}{local}", ns.as_str()))
    }

    /// Prefixed form of `iri` under the longest matching namespace whose
    /// local part re-lexes unchanged.
    pub fn compact(&self, iri: &str) -> Option<String> {
        self.entries
            .iter()
            .filter_map(|(label, ns)| {
                let local = iri.strip_prefix(ns.as_str())?;
                lexer::is_valid_local(local).then(|| (ns.as_str().len(), label, local))
            })
            .max_by(|a, b| a.0.cmp(&b.0).then_with(|| b.1.cmp(a.1)))
            .map(|(_, label, local)| format!("{label}:{local}"))
    }

    /// Renders an IRI compactly when possible, otherwise in angle brackets.
    pub fn render_iri(&self, iri: &Iri) -> String {
        self.compact(iri.as_str())
            .unwrap_or_else(|| format!("<{}>", iri.as_str()))
    }

    /// Renders any term in Turtle syntax.
    pub fn render_term(&self, term: &Term) -> String {
        serializer::render_term(self, term)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TurtleDocument {
    pub prefixes: PrefixMap,
    pub triples: Vec<Triple>,
}

impl TurtleDocument {
    pub fn new(prefixes: PrefixMap) -> Self {
        Self {
            prefixes,
            triples: Vec::new(),
        }
    }

    pub fn from_graph(prefixes: PrefixMap, graph: &Graph) -> Self {
        Self {
            prefixes,
            triples: graph.iter().collect(),
        }
    }

    pub fn to_graph(&self) -> Result<Graph, StoreError> {
        Graph::from_triples(self.triples.iter().cloned())
    }
}
