use std::collections::BTreeSet;

use crate::query::Entities;
use crate::schema::vocab::ioe;
use crate::store::Graph;
use crate::term::{Iri, Term, Triple};

use super::audit::{list, opt, Audit};
use super::{Adjustment, DecisionKind, ServiceDecision, ServiceError, ServiceResult, Services};

impl Services<'_> {
    /// Applies `agent`'s preferences for `site` to the properties exposed by
    /// the systems of the smart objects located there. The agent must be in
    /// the site. A value last set by another agent is overwritten and the
    /// conflict is audited.
    pub fn environment_setting(&self, graph: &mut Graph, agent: &Iri, site: &Iri) -> ServiceResult {
        let mut audit = Audit::new("environment-setting");
        let adjustments = {
            let e = Entities::new(graph, self.vocab);
            let located = match e.located_in(agent) {
                Ok(located) => located,
                Err(err) => return Err(audit.fail("agent-location", err.into())),
            };
            audit.record(
                "in-site",
                [
                    ("agent", agent.as_str().to_owned()),
                    ("agentSite", opt(&located)),
                    ("site", site.as_str().to_owned()),
                ],
                if located.as_ref() == Some(site) {
                    "pass"
                } else {
                    "fail"
                },
            );
            if located.as_ref() != Some(site) {
                let error = ServiceError::NotInSite {
                    agent: agent.clone(),
                    site: site.clone(),
                };
                return Err(audit.fail("precondition", error));
            }

            let prefs: Vec<_> = e
                .env_preferences(agent)
                .into_iter()
                .filter(|p| &p.site == site)
                .collect();
            let objects = e.objects_located_in(site);
            let systems: Vec<Iri> = objects
                .iter()
                .flat_map(|o| e.included_systems(o))
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            let properties = e.systems_properties(&systems);
            audit.record(
                "scope",
                [
                    (
                        "preferences",
                        list(
                            &prefs
                                .iter()
                                .map(|p| p.preference.clone())
                                .collect::<Vec<_>>(),
                        ),
                    ),
                    ("objects", list(&objects)),
                    ("systems", list(&systems)),
                    ("properties", list(&properties)),
                ],
                "collected",
            );

            let mut adjustments = Vec::new();
            for property in &properties {
                let matching: Vec<_> = prefs.iter().filter(|p| &p.property == property).collect();
                // Several own preferences for one property: the last in term order wins.
                let Some(chosen) = matching.last() else {
                    continue;
                };
                if matching.len() > 1 {
                    audit.record(
                        "own-conflict",
                        [
                            ("property", property.as_str().to_owned()),
                            ("chosen", chosen.preference.as_str().to_owned()),
                        ],
                        "last-wins",
                    );
                }
                let old_value = e.current_values(property).into_iter().next();
                let setters = e.last_set_by(property);
                if setters.iter().any(|s| s != agent) && old_value.as_ref() != Some(&chosen.value) {
                    audit.record(
                        "preference-conflict",
                        [
                            ("property", property.as_str().to_owned()),
                            ("previousSetter", list(&setters)),
                        ],
                        "last-writer-wins",
                    );
                }
                audit.record(
                    "apply",
                    [
                        ("property", property.as_str().to_owned()),
                        (
                            "old",
                            old_value
                                .as_ref()
                                .map_or_else(|| "(none)".into(), Term::to_string),
                        ),
                        ("new", chosen.value.to_string()),
                    ],
                    "set",
                );
                adjustments.push(Adjustment {
                    property: property.clone(),
                    preference: chosen.preference.clone(),
                    old_value,
                    new_value: chosen.value.clone(),
                });
            }
            adjustments
        };

        let current = Term::Iri(Iri::from_static(ioe::HAS_CURRENT_VALUE));
        let setter = Term::Iri(Iri::from_static(ioe::LAST_SET_BY));
        for adj in &adjustments {
            let subject = Term::Iri(adj.property.clone());
            for p in [&current, &setter] {
                for stale in graph.match_pattern(Some(&subject), Some(p), None) {
                    graph.remove(&stale);
                }
            }
            let writes = [
                Triple {
                    subject: subject.clone(),
                    predicate: current.clone(),
                    object: adj.new_value.clone(),
                },
                Triple {
                    subject,
                    predicate: setter.clone(),
                    object: Term::Iri(agent.clone()),
                },
            ];
            graph
                .extend(writes)
                .expect("adjustment triples are well-formed");
        }
        if adjustments.is_empty() {
            audit.record(
                "apply",
                [("agent", agent.as_str().to_owned())],
                "no-adjustments",
            );
        }
        Ok(ServiceDecision {
            kind: DecisionKind::EnvironmentAdjustment { adjustments },
            audit: audit.finish(),
        })
    }
}
