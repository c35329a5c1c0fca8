use std::collections::BTreeSet;

use serde::Deserialize;

use crate::query::Entities;
use crate::schema::vocab::{ioe, org, rdf};
use crate::store::Graph;
use crate::term::{Iri, Literal, Term, Triple};
use crate::time::TimeWindow;

use super::audit::{list, opt, Audit};
use super::{DecisionKind, Grant, ServiceError, ServiceResult, Services};

/// A request to share (collaboration) or hand over (delegation) rights
/// from `from` to `to` for `activity` during `window`.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct TransferRequest {
    pub from: Iri,
    pub to: Iri,
    pub activity: Iri,
    pub window: TimeWindow,
}

#[derive(Clone, Copy)]
enum Mode {
    Collaboration,
    Delegation,
}

impl Mode {
    fn service(self) -> &'static str {
        match self {
            Mode::Collaboration => "collaborate",
            Mode::Delegation => "delegate",
        }
    }

    fn role_stem(self) -> &'static str {
        match self {
            Mode::Collaboration => "collaboration_role",
            Mode::Delegation => "delegation_role",
        }
    }

    fn relation_class(self) -> &'static str {
        match self {
            Mode::Collaboration => ioe::COLLABORATION,
            Mode::Delegation => ioe::DELEGATION,
        }
    }
}

fn t(s: &Iri, p: &'static str, o: impl Into<Term>) -> Triple {
    Triple {
        subject: Term::Iri(s.clone()),
        predicate: Term::Iri(Iri::from_static(p)),
        object: o.into(),
    }
}

impl Services<'_> {
    fn check_agents(
        &self,
        e: &Entities<'_>,
        req: &TransferRequest,
        audit: &mut Audit,
    ) -> Result<(), ServiceError> {
        if req.from == req.to {
            return Err(ServiceError::SameAgent);
        }
        for agent in [&req.from, &req.to] {
            if !e.is_agent(agent) {
                return Err(ServiceError::NotAnAgent(agent.clone()));
            }
        }
        audit.record(
            "agents",
            [
                ("from", req.from.as_str().to_owned()),
                ("to", req.to.as_str().to_owned()),
            ],
            "pass",
        );
        Ok(())
    }

    /// The requester's role at the window start, which must be transferable.
    fn transferable_role(
        &self,
        e: &Entities<'_>,
        req: &TransferRequest,
        audit: &mut Audit,
    ) -> Result<Iri, ServiceError> {
        let at = req.window.start();
        let role = e
            .get_role(&req.from, at)
            .ok_or_else(|| ServiceError::NoRole(req.from.clone()))?;
        let transferable = e.is_transferable(&role);
        audit.record(
            "transferable",
            [("role", role.as_str().to_owned()), ("at", at.to_xsd())],
            if transferable { "pass" } else { "fail" },
        );
        if !transferable {
            return Err(ServiceError::NotTransferable(role));
        }
        Ok(role)
    }

    /// Grants `to` the union of both agents' rights for the window.
    /// Both agents must be co-located and the requester engaged in the
    /// activity.
    pub fn collaborate(&self, graph: &mut Graph, req: &TransferRequest) -> ServiceResult {
        let mode = Mode::Collaboration;
        let mut audit = Audit::new(mode.service());
        let rights = match self.collaboration_rights(graph, req, &mut audit) {
            Ok(rights) => rights,
            Err(error) => return Err(audit.fail("precondition", error)),
        };
        self.write_grant(graph, req, mode, rights, audit)
    }

    fn collaboration_rights(
        &self,
        graph: &Graph,
        req: &TransferRequest,
        audit: &mut Audit,
    ) -> Result<Vec<Iri>, ServiceError> {
        let e = Entities::new(graph, self.vocab);
        self.check_agents(&e, req, audit)?;
        let engaged = e.engaged_activities(&req.from).contains(&req.activity);
        audit.record(
            "engaged",
            [
                ("agent", req.from.as_str().to_owned()),
                ("activity", req.activity.as_str().to_owned()),
            ],
            if engaged { "pass" } else { "fail" },
        );
        if !engaged {
            return Err(ServiceError::NotEngaged {
                agent: req.from.clone(),
                activity: req.activity.clone(),
            });
        }
        let r1 = self.transferable_role(&e, req, audit)?;
        let from_site = e.located_in(&req.from)?;
        let to_site = e.located_in(&req.to)?;
        let co_located = from_site.is_some() && from_site == to_site;
        audit.record(
            "co-location",
            [("fromSite", opt(&from_site)), ("toSite", opt(&to_site))],
            if co_located { "pass" } else { "fail" },
        );
        if !co_located {
            return Err(ServiceError::NotCoLocated {
                a1: req.from.clone(),
                a2: req.to.clone(),
            });
        }
        let r2 = e.get_role(&req.to, req.window.start());
        let mut rights: BTreeSet<Iri> = e.get_rights(&r1).into_iter().collect();
        if let Some(r2) = &r2 {
            rights.extend(e.get_rights(r2));
        }
        let rights: Vec<Iri> = rights.into_iter().collect();
        audit.record(
            "union",
            [
                ("fromRole", r1.as_str().to_owned()),
                ("toRole", opt(&r2)),
                ("rights", list(&rights)),
            ],
            "computed",
        );
        Ok(rights)
    }

    /// Hands `to` the requester's rights that bear on the objects engaged
    /// in the activity (and their systems). `to` must be idle.
    pub fn delegate(&self, graph: &mut Graph, req: &TransferRequest) -> ServiceResult {
        let mode = Mode::Delegation;
        let mut audit = Audit::new(mode.service());
        let rights = match self.delegation_rights(graph, req, &mut audit) {
            Ok(rights) => rights,
            Err(error) => return Err(audit.fail("precondition", error)),
        };
        self.write_grant(graph, req, mode, rights, audit)
    }

    fn delegation_rights(
        &self,
        graph: &Graph,
        req: &TransferRequest,
        audit: &mut Audit,
    ) -> Result<Vec<Iri>, ServiceError> {
        let e = Entities::new(graph, self.vocab);
        self.check_agents(&e, req, audit)?;
        let r1 = self.transferable_role(&e, req, audit)?;
        let busy = e.engaged_activities(&req.to);
        audit.record(
            "delegatee-idle",
            [
                ("agent", req.to.as_str().to_owned()),
                ("activities", list(&busy)),
            ],
            if busy.is_empty() { "pass" } else { "fail" },
        );
        if !busy.is_empty() {
            return Err(ServiceError::DelegateeBusy(req.to.clone()));
        }
        let objects = e.objects_engaged_in(&req.activity);
        if objects.is_empty() {
            audit.record(
                "engaged-objects",
                [("activity", req.activity.as_str().to_owned())],
                "warning: no engaged objects",
            );
        }
        let systems: Vec<Iri> = objects
            .iter()
            .flat_map(|o| e.included_systems(o))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let reachable: BTreeSet<Iri> = e
            .rights_on_systems(&systems)
            .into_iter()
            .chain(e.rights_on_objects(&objects))
            .collect();
        let held: BTreeSet<Iri> = e.get_rights(&r1).into_iter().collect();
        let rights: Vec<Iri> = reachable.intersection(&held).cloned().collect();
        audit.record(
            "intersection",
            [
                ("objects", list(&objects)),
                ("systems", list(&systems)),
                (
                    "reachable",
                    list(&reachable.into_iter().collect::<Vec<_>>()),
                ),
                ("held", list(&held.into_iter().collect::<Vec<_>>())),
                ("rights", list(&rights)),
            ],
            "computed",
        );
        Ok(rights)
    }

    fn write_grant(
        &self,
        graph: &mut Graph,
        req: &TransferRequest,
        mode: Mode,
        rights: Vec<Iri>,
        mut audit: Audit,
    ) -> ServiceResult {
        let minted = (|| {
            let role = self.mint(graph, mode.role_stem())?;
            let membership = self.mint(graph, "membership")?;
            let relation = self.mint(graph, "agent_relation")?;
            Ok::<_, ServiceError>((role, membership, relation))
        })();
        let (role, membership, relation) = match minted {
            Ok(ids) => ids,
            Err(error) => return Err(audit.fail("mint", error)),
        };
        let window = req.window;
        let mut triples = vec![
            t(&role, rdf::TYPE, Iri::from_static(ioe::CURRENT_ROLE)),
            t(&role, ioe::START_TIME, window.start().to_literal()),
            t(&role, ioe::END_TIME, window.end().to_literal()),
            t(&role, ioe::IS_TRANSFERABLE, Literal::boolean(false)),
            t(&membership, rdf::TYPE, Iri::from_static(org::MEMBERSHIP)),
            t(&membership, org::MEMBER, &req.to),
            t(&membership, org::ROLE_PROP, &role),
            t(
                &relation,
                rdf::TYPE,
                Iri::from_static(mode.relation_class()),
            ),
            t(&relation, ioe::FROM_AGENT, &req.from),
            t(&relation, ioe::TO_AGENT, &req.to),
            t(&relation, ioe::FOR_WORKFLOW_ELEMENT, &req.activity),
            t(&req.to, ioe::ENGAGED_IN, &req.activity),
        ];
        triples.extend(rights.iter().map(|right| t(right, ioe::FOR_ROLE, &role)));
        if let Err(error) = graph.extend(triples) {
            return Err(audit.fail("write", error.into()));
        }
        audit.record(
            "grant",
            [
                ("tempRole", role.as_str().to_owned()),
                ("membership", membership.as_str().to_owned()),
                ("relation", relation.as_str().to_owned()),
                ("window", format!("{} {}", window.start(), window.end())),
            ],
            "written",
        );
        let grant = Grant {
            temp_role: role,
            membership,
            relation,
            rights,
            window,
        };
        let kind = match mode {
            Mode::Collaboration => DecisionKind::CollaborationGrant(grant),
            Mode::Delegation => DecisionKind::DelegationGrant(grant),
        };
        Ok(super::ServiceDecision {
            kind,
            audit: audit.finish(),
        })
    }
}
