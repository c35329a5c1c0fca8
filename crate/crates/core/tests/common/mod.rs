#![allow(dead_code)]

pub mod access;
pub mod bgp;
pub mod micro;
pub mod names;
pub mod queries;

use std::path::PathBuf;

use semioe_core::vocab::DEFAULT_INSTANCE_NS;
use semioe_core::{Graph, Iri, KnowledgeBase, Timestamp};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub fn load(name: &str) -> KnowledgeBase {
    let source = std::fs::read_to_string(fixture_path(name)).expect("fixture readable");
    KnowledgeBase::from_turtle(&source, DEFAULT_INSTANCE_NS, true).expect("fixture parses")
}

pub fn base_graph() -> Graph {
    load("listing1.ttl").store().snapshot()
}

pub fn extended_graph() -> Graph {
    load("scenario_extended.ttl").store().snapshot()
}

/// An IRI in the instance namespace.
pub fn d(local: &str) -> Iri {
    Iri::new(format!("{DEFAULT_INSTANCE_NS}{local}")).unwrap()
}

pub fn c(iri: &'static str) -> Iri {
    Iri::from_static(iri)
}

pub fn ts(text: &str) -> Timestamp {
    Timestamp::parse(text).unwrap()
}

pub fn ds(locals: &[&str]) -> Vec<Iri> {
    locals.iter().map(|l| d(l)).collect()
}
