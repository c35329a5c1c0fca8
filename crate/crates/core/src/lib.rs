//! Embedded knowledge graph for Internet-of-Everything deployments described
//! with the SemIoE ontology.
//!
//! Layers, bottom up:
//!
//! * [`store`]: indexed in-memory triple store.
//! * [`turtle`]: Turtle subset parser and serializer.
//! * [`schema`]: the SemIoE vocabulary, subclass inference, validation.
//! * [`query`]: basic graph pattern evaluation with `MINUS`, a query text
//!   front-end and the entity-level lookups built on top.
//! * [`services`]: access control, collaboration, delegation and
//!   environment setting.

pub mod kb;
pub mod query;
pub mod schema;
pub mod services;
pub mod store;
pub mod term;
pub mod time;
pub mod turtle;

pub use kb::KnowledgeBase;
pub use query::{evaluate, parse_query, BindingSet, Entities, Query, QueryError};
pub use schema::{vocab, Vocabulary};
pub use services::{ServiceDecision, ServiceError, ServiceFailure, Services};
pub use store::{Graph, Store, StoreError};
pub use term::{Iri, Literal, Term, TermError, Triple};
pub use time::{TimeWindow, Timestamp};
pub use turtle::{PrefixMap, TurtleDocument, TurtleError};
