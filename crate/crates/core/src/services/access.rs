use serde::Deserialize;

use crate::query::{Entities, RightScope};
use crate::store::Graph;
use crate::term::Iri;
use crate::time::Timestamp;

use super::audit::{list, opt, Audit};
use super::{DecisionKind, ServiceDecision, ServiceError, ServiceResult, Services};

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct AccessRequest {
    pub agent: Iri,
    pub system: Iri,
    /// Site the request is made from; defaults to the agent's location.
    pub site: Option<Iri>,
    pub right_type: Iri,
    pub at: Timestamp,
}

impl Services<'_> {
    /// Decides whether `agent` may exercise `right_type` on `system` at
    /// `at`. Every right of the agent's role is considered; the first match
    /// in IRI order is reported.
    pub fn access_control(&self, graph: &Graph, req: &AccessRequest) -> ServiceResult {
        let e = Entities::new(graph, self.vocab);
        let mut audit = Audit::new("access-control");

        if !e.is_agent(&req.agent) {
            return Err(audit.fail("agent", ServiceError::NotAnAgent(req.agent.clone())));
        }
        let system_site = match e.system_location(&req.system) {
            Ok(Some(site)) => site,
            Ok(None) => {
                return Err(audit.fail(
                    "system-location",
                    ServiceError::LocationUndefined(req.system.clone()),
                ))
            }
            Err(err) => return Err(audit.fail("system-location", err.into())),
        };
        let agent_site = match e.located_in(&req.agent) {
            Ok(site) => site,
            Err(err) => return Err(audit.fail("agent-location", err.into())),
        };
        let site = req.site.clone().or_else(|| agent_site.clone());
        let co_located = agent_site.as_ref() == Some(&system_site) && site == agent_site;
        audit.record(
            "co-location",
            [
                ("systemSite", system_site.as_str().to_owned()),
                ("agentSite", opt(&agent_site)),
                ("site", opt(&site)),
            ],
            if co_located { "pass" } else { "deny" },
        );
        let deny = |audit: Audit| ServiceDecision {
            kind: DecisionKind::AccessDecision {
                allowed: false,
                matched_right: None,
            },
            audit: audit.finish(),
        };
        if !co_located {
            return Ok(deny(audit));
        }
        let site = system_site;

        let Some(role) = e.get_role(&req.agent, req.at) else {
            audit.record(
                "role",
                [("agent", req.agent.as_str()), ("at", &req.at.to_xsd())],
                "no-role",
            );
            return Ok(deny(audit));
        };
        let rights = e.get_rights(&role);
        audit.record(
            "role",
            [("role", role.as_str()), ("rights", &list(&rights))],
            "resolved",
        );

        for right in &rights {
            let Some(view) = e.right_view(right) else {
                continue;
            };
            if view.right_type.as_ref() != Some(&req.right_type) {
                audit.record(
                    "right-type",
                    [("right", right.as_str()), ("type", &opt(&view.right_type))],
                    "mismatch",
                );
                continue;
            }
            let matched = view.scopes.iter().find_map(|scope| match scope {
                RightScope::OnSystem(systems) => {
                    systems.contains(&req.system).then_some("on-system")
                }
                RightScope::OnEnvironment(sites) => {
                    sites.contains(&site).then_some("on-environment")
                }
                RightScope::OnSmartObject(objects) => objects
                    .iter()
                    .any(|o| e.included_systems(o).contains(&req.system))
                    .then_some("on-smart-object"),
            });
            match matched {
                Some(rule) => {
                    audit.record(
                        rule,
                        [
                            ("right", right.as_str().to_owned()),
                            ("system", req.system.as_str().to_owned()),
                        ],
                        "allow",
                    );
                    return Ok(ServiceDecision {
                        kind: DecisionKind::AccessDecision {
                            allowed: true,
                            matched_right: Some(right.clone()),
                        },
                        audit: audit.finish(),
                    });
                }
                None => audit.record(
                    "right-scope",
                    [("right", right.as_str().to_owned())],
                    "mismatch",
                ),
            }
        }
        audit.record(
            "rights",
            [("role", role.as_str().to_owned())],
            "no-matching-right",
        );
        Ok(deny(audit))
    }
}
