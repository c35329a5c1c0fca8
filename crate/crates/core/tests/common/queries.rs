//! Query texts as printed with the ontology, with `<slot>` placeholders.

use semioe_core::Iri;

pub const INSTANCE_DESCRIPTION: &str = "SELECT ?p ?o
  WHERE {<ins> a <entity>;
               ?p ?o}";
pub const LOCATED_IN: &str = "SELECT ?site
  WHERE {<agent> a ioe:Agent;
                 ioe:locatedIn ?site}";
pub const GET_ROLE: &str = "SELECT ?role
  WHERE {?m a org:Membership;
            org:member <agent>;
            org:role ?role}";
pub const GET_RIGHTS: &str = "SELECT ?right
  WHERE {?right a ioe:Right;
                ioe:forRole <role>}";
pub const SYSTEMS_FROM_RIGHT: &str = "SELECT ?sys
  WHERE {<right> a ioe:RightOnSystem;
                   ioe:onSystem ?sys}";
pub const AVAILABLE_AGENTS_AS_PRINTED: &str = "SELECT ?agent
  WHERE {?agent a ioe:HAgent.
         MINUS {?agent ioe:engagedIn ?act.
                ?atc a ioe:Activity.}}";
pub const AVAILABLE_AGENTS: &str = "SELECT ?agent
  WHERE {?agent a ioe:HAgent.
         MINUS {?agent ioe:engagedIn ?act.
                ?act a ioe:Activity.}}";

pub fn fill(template: &str, slots: &[(&str, &Iri)]) -> String {
    slots
        .iter()
        .fold(template.to_string(), |text, (slot, iri)| {
            text.replace(&format!("<{slot}>"), &format!("<{}>", iri.as_str()))
        })
}
