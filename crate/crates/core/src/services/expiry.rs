use crate::query::Entities;
use crate::schema::vocab::{ioe, org};
use crate::store::Graph;
use crate::term::{Iri, Term, Triple};
use crate::time::Timestamp;

use super::audit::Audit;
use super::{DecisionKind, ServiceDecision, Services};

impl Services<'_> {
    /// Marks as retired every live membership whose role ended before `at`.
    /// A role ending exactly at `at` is still valid and is left alone.
    pub fn expire_roles(&self, graph: &mut Graph, at: Timestamp) -> ServiceDecision {
        let mut audit = Audit::new("expire-roles");
        let retired: Vec<Iri> = {
            let e = Entities::new(graph, self.vocab);
            e.instances(org::MEMBERSHIP)
                .into_iter()
                .filter(|m| {
                    e.graph()
                        .objects(&Term::Iri(m.clone()), &Iri::from_static(ioe::RETIRED_AT))
                        .is_empty()
                })
                .filter(|m| {
                    e.graph()
                        .objects(&Term::Iri(m.clone()), &Iri::from_static(org::ROLE_PROP))
                        .iter()
                        .filter_map(Term::as_iri)
                        .any(|role| e.role_candidate(role).end.is_some_and(|end| end < at))
                })
                .collect()
        };
        for membership in &retired {
            let triple = Triple {
                subject: Term::Iri(membership.clone()),
                predicate: Term::Iri(Iri::from_static(ioe::RETIRED_AT)),
                object: Term::Literal(at.to_literal()),
            };
            graph
                .insert(triple)
                .expect("retirement triple is well-formed");
            audit.record(
                "expired",
                [
                    ("membership", membership.as_str().to_owned()),
                    ("at", at.to_xsd()),
                ],
                "retired",
            );
        }
        if retired.is_empty() {
            audit.record("expired", [("at", at.to_xsd())], "none");
        }
        ServiceDecision {
            kind: DecisionKind::RoleExpiry { retired },
            audit: audit.finish(),
        }
    }
}
