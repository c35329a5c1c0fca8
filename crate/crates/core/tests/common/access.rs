//! Brute-force access oracle: raw scans over asserted triples, sharing no
//! lookups with the services under test.

use std::collections::BTreeSet;

use semioe_core::services::AccessRequest;
use semioe_core::vocab::{ioe, org, rdf, ssn};
use semioe_core::{Entities, Graph, Iri, Services, Term, Timestamp, Vocabulary};

use super::{c, d};

pub fn objs(g: &Graph, s: &Iri, p: &'static str) -> BTreeSet<Iri> {
    g.match_pattern(Some(&Term::Iri(s.clone())), Some(&Term::Iri(c(p))), None)
        .into_iter()
        .filter_map(|t| t.object.as_iri().cloned())
        .collect()
}

pub fn subjs(g: &Graph, p: &'static str, o: &Iri) -> BTreeSet<Iri> {
    g.match_pattern(None, Some(&Term::Iri(c(p))), Some(&Term::Iri(o.clone())))
        .into_iter()
        .filter_map(|t| t.subject.as_iri().cloned())
        .collect()
}

pub fn typed(g: &Graph, s: &Iri, class: &'static str) -> bool {
    objs(g, s, rdf::TYPE).contains(&c(class))
}

pub fn time_of(g: &Graph, s: &Iri, p: &'static str) -> Option<Timestamp> {
    g.objects(&Term::Iri(s.clone()), &c(p))
        .iter()
        .find_map(Timestamp::from_term)
}

pub fn oracle_systems_of_object(g: &Graph, o: &Iri) -> BTreeSet<Iri> {
    let mut out = BTreeSet::new();
    let mut todo: Vec<Iri> = subjs(g, ioe::INCLUDED_IN, o).into_iter().collect();
    while let Some(s) = todo.pop() {
        if out.insert(s.clone()) {
            todo.extend(objs(g, &s, ssn::HAS_SUB_SYSTEM));
        }
    }
    out
}

pub fn oracle_role(g: &Graph, agent: &Iri, at: Timestamp) -> Option<Iri> {
    let roles: Vec<Iri> = subjs(g, org::MEMBER, agent)
        .iter()
        .filter(|m| {
            g.objects(&Term::Iri((*m).clone()), &c(ioe::RETIRED_AT))
                .is_empty()
        })
        .flat_map(|m| objs(g, m, org::ROLE_PROP))
        .collect();
    let valid: Vec<(bool, Option<Timestamp>, Iri)> = roles
        .into_iter()
        .filter_map(|r| {
            let (st, et) = (
                time_of(g, &r, ioe::START_TIME),
                time_of(g, &r, ioe::END_TIME),
            );
            let ok = st.is_none_or(|s| s <= at) && et.is_none_or(|e| at <= e);
            ok.then_some((st.is_some() || et.is_some(), st, r))
        })
        .collect();
    let best_temp = valid
        .iter()
        .filter(|v| v.0)
        .max_by(|a, b| a.1.cmp(&b.1).then(b.2.cmp(&a.2)));
    best_temp
        .or_else(|| valid.iter().filter(|v| !v.0).min_by(|a, b| a.2.cmp(&b.2)))
        .map(|v| v.2.clone())
}

pub fn oracle_site_of_system(g: &Graph, system: &Iri) -> BTreeSet<Iri> {
    let objects: Vec<Iri> = subjs(g, rdf::TYPE, &c(ioe::SMART_OBJECT))
        .into_iter()
        .filter(|o| oracle_systems_of_object(g, o).contains(system))
        .collect();
    objects
        .iter()
        .flat_map(|o| objs(g, o, ioe::LOCATED_IN))
        .collect()
}

pub fn oracle_access(
    g: &Graph,
    agent: &Iri,
    system: &Iri,
    right_type: &Iri,
    at: Timestamp,
) -> bool {
    let agent_site = objs(g, agent, ioe::LOCATED_IN);
    let system_site = oracle_site_of_system(g, system);
    if agent_site.len() != 1 || agent_site != system_site {
        return false;
    }
    let Some(role) = oracle_role(g, agent, at) else {
        return false;
    };
    let mut grants: BTreeSet<(Iri, Iri)> = BTreeSet::new();
    for right in subjs(g, ioe::FOR_ROLE, &role) {
        for ty in objs(g, &right, ioe::HAS_TYPE) {
            let mut systems = BTreeSet::new();
            if typed(g, &right, ioe::RIGHT_ON_SYSTEM) {
                systems.extend(objs(g, &right, ioe::ON_SYSTEM));
            }
            if typed(g, &right, ioe::RIGHT_ON_SMART_OBJECT) {
                for o in
                    objs(g, &right, ioe::ON_SMART_OBJECT).union(&objs(g, &right, ioe::ON_OBJECT))
                {
                    systems.extend(oracle_systems_of_object(g, o));
                }
            }
            if typed(g, &right, ioe::RIGHT_ON_ENVIRONMENT) {
                for site in objs(g, &right, ioe::ON_ENVIRONMENT) {
                    for o in subjs(g, ioe::LOCATED_IN, &site) {
                        systems.extend(oracle_systems_of_object(g, &o));
                    }
                }
            }
            grants.extend(systems.into_iter().map(|s| (s, ty.clone())));
        }
    }
    grants.contains(&(system.clone(), right_type.clone()))
}

pub struct Universe {
    pub agents: Vec<Iri>,
    pub systems: Vec<Iri>,
    pub types: Vec<Iri>,
}

pub fn universe(g: &Graph) -> Universe {
    let e = Entities::new(g, Vocabulary::bundled());
    let mut types = e.instances(ioe::RIGHT_TYPE);
    types.push(d("no_such_type"));
    Universe {
        agents: e.instances(ioe::AGENT),
        systems: e.instances(ssn::SYSTEM),
        types,
    }
}

/// Every access decision over the universe, in a fixed order.
pub fn decisions(g: &Graph, u: &Universe, at: Timestamp) -> Vec<bool> {
    let s = Services::default();
    let mut out = Vec::new();
    for agent in &u.agents {
        for system in &u.systems {
            for ty in &u.types {
                let req = AccessRequest {
                    agent: agent.clone(),
                    system: system.clone(),
                    site: None,
                    right_type: ty.clone(),
                    at,
                };
                out.push(s.access_control(g, &req).unwrap().allowed().unwrap());
            }
        }
    }
    out
}
