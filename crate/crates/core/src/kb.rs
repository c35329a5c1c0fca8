//! A loaded knowledge graph together with its prefixes, instance namespace
//! and query mode.

use crate::query::{evaluate, parse_query, BindingSet, Query, QueryError};
use crate::schema::{validate, ValidationReport, Vocabulary};
use crate::services::Services;
use crate::store::{Graph, Store};
use crate::term::Iri;
use crate::turtle::{parse_iri, parse_turtle, serialize_graph, PrefixMap, TurtleError};

#[derive(Debug, Clone)]
pub struct KnowledgeBase {
    store: Store,
    prefixes: PrefixMap,
    namespace: String,
    inference: bool,
}

impl KnowledgeBase {
    pub fn new(
        graph: Graph,
        prefixes: PrefixMap,
        namespace: impl Into<String>,
        inference: bool,
    ) -> Self {
        Self {
            store: Store::new(graph),
            prefixes,
            namespace: namespace.into(),
            inference,
        }
    }

    /// Loads Turtle. The standard prefixes, with `:` bound to `namespace`,
    /// are in scope; prefixes declared in the source override them.
    pub fn from_turtle(
        source: &str,
        namespace: &str,
        inference: bool,
    ) -> Result<Self, TurtleError> {
        let standard = PrefixMap::standard(namespace)?;
        let doc = parse_turtle(source, Some(&standard))?;
        // The parser only produces IRI or blank subjects and IRI predicates.
        let graph = doc.to_graph().expect("parsed triples are well-formed");
        Ok(Self::new(graph, doc.prefixes, namespace, inference))
    }

    pub fn store(&self) -> &Store {
        &self.store
    }

    pub fn prefixes(&self) -> &PrefixMap {
        &self.prefixes
    }

    pub fn namespace(&self) -> &str {
        &self.namespace
    }

    pub fn inference(&self) -> bool {
        self.inference
    }

    pub fn vocab(&self) -> &'static Vocabulary {
        Vocabulary::bundled()
    }

    pub fn services(&self) -> Services<'static> {
        Services::new(self.vocab(), self.namespace.clone())
    }

    /// The graph queries run against: closure-materialized unless
    /// inference is off.
    pub fn query_view(&self) -> Graph {
        let graph = self.store.snapshot();
        if self.inference {
            self.vocab().materialized(&graph)
        } else {
            graph
        }
    }

    pub fn query(&self, query: &Query) -> BindingSet {
        evaluate(&self.query_view(), query)
    }

    pub fn query_text(&self, text: &str) -> Result<BindingSet, QueryError> {
        let query = parse_query(text, &self.prefixes)?;
        Ok(self.query(&query))
    }

    pub fn validate(&self) -> ValidationReport {
        validate(&self.store.read(), self.vocab())
    }

    pub fn resolve_iri(&self, text: &str) -> Result<Iri, TurtleError> {
        parse_iri(text, &self.prefixes)
    }

    /// Turtle snapshot of the asserted graph.
    pub fn export(&self) -> String {
        serialize_graph(&self.store.read(), &self.prefixes)
    }
}
