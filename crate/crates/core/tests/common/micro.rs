//! Random role/right micrographs with every transfer precondition met, and
//! independent expectations for the rights a grant may carry.

use std::collections::BTreeSet;

use rand::Rng;
use semioe_core::services::TransferRequest;
use semioe_core::vocab::{ioe, org, rdf, DEFAULT_INSTANCE_NS};
use semioe_core::{Graph, Iri, Literal, Term, TimeWindow, Triple};

use super::access::{objs, oracle_systems_of_object, subjs, typed};
use super::{c, ts};

pub const WINDOW_START: &str = "2024-01-01T09:00:00Z";
pub const WINDOW_END: &str = "2024-01-01T17:00:00Z";

pub fn iri(local: String) -> Iri {
    Iri::new(format!("{DEFAULT_INSTANCE_NS}{local}")).unwrap()
}

fn add(g: &mut Graph, s: &Iri, p: &'static str, o: impl Into<Term>) {
    g.insert(Triple::new(s.clone(), c(p), o).unwrap()).unwrap();
}

/// Agents a0 (requester, engaged, transferable role), a1 (co-located,
/// engaged elsewhere is avoided), a2 (idle). Objects o0..o2 with systems;
/// rights of random scope and type spread over roles r0..r2.
pub fn micrograph(rng: &mut impl Rng) -> Graph {
    let mut g = Graph::new();
    let site = iri("site".into());
    add(&mut g, &site, rdf::TYPE, c(ioe::SITE));
    let activity = iri("task".into());
    add(&mut g, &activity, rdf::TYPE, c(ioe::ACTIVITY));
    let types = [iri("read".into()), iri("configure".into())];
    for t in &types {
        add(&mut g, t, rdf::TYPE, c(ioe::RIGHT_TYPE));
    }
    let roles: Vec<Iri> = (0..3).map(|i| iri(format!("r{i}"))).collect();
    for (i, r) in roles.iter().enumerate() {
        add(&mut g, r, rdf::TYPE, c(ioe::CURRENT_ROLE));
        add(
            &mut g,
            r,
            ioe::IS_TRANSFERABLE,
            Literal::boolean(i == 0 || rng.random_bool(0.5)),
        );
    }
    let objects: Vec<Iri> = (0..3).map(|i| iri(format!("o{i}"))).collect();
    let mut systems = Vec::new();
    for (i, o) in objects.iter().enumerate() {
        add(&mut g, o, rdf::TYPE, c(ioe::SMART_OBJECT));
        add(&mut g, o, ioe::LOCATED_IN, &site);
        if rng.random_bool(0.6) {
            add(&mut g, o, ioe::ENGAGED_IN, &activity);
        }
        for j in 0..rng.random_range(1..3) {
            let s = iri(format!("s{i}_{j}"));
            add(&mut g, &s, rdf::TYPE, c(ioe::SYSTEM));
            add(&mut g, &s, ioe::INCLUDED_IN, o);
            systems.push(s);
        }
    }
    for k in 0..rng.random_range(3..10) {
        let right = iri(format!("right{k}"));
        add(
            &mut g,
            &right,
            ioe::HAS_TYPE,
            &types[rng.random_range(0..2)],
        );
        if rng.random_bool(0.5) {
            add(&mut g, &right, rdf::TYPE, c(ioe::RIGHT_ON_SYSTEM));
            add(
                &mut g,
                &right,
                ioe::ON_SYSTEM,
                &systems[rng.random_range(0..systems.len())],
            );
        } else {
            add(&mut g, &right, rdf::TYPE, c(ioe::RIGHT_ON_SMART_OBJECT));
            add(
                &mut g,
                &right,
                ioe::ON_OBJECT,
                &objects[rng.random_range(0..objects.len())],
            );
        }
        let mut holders = 0;
        for r in &roles {
            if rng.random_bool(0.5) {
                add(&mut g, &right, ioe::FOR_ROLE, r);
                holders += 1;
            }
        }
        if holders == 0 {
            add(
                &mut g,
                &right,
                ioe::FOR_ROLE,
                &roles[rng.random_range(0..3)],
            );
        }
    }
    for (i, role) in roles.iter().enumerate() {
        let agent = iri(format!("a{i}"));
        add(&mut g, &agent, rdf::TYPE, c(ioe::H_AGENT));
        add(&mut g, &agent, ioe::LOCATED_IN, &site);
        let m = iri(format!("m{i}"));
        add(&mut g, &m, rdf::TYPE, c(org::MEMBERSHIP));
        add(&mut g, &m, org::MEMBER, &agent);
        add(&mut g, &m, org::ROLE_PROP, role);
    }
    add(&mut g, &iri("a0".into()), ioe::ENGAGED_IN, &activity);
    g
}

pub fn rights_of(g: &Graph, role: &Iri) -> BTreeSet<Iri> {
    subjs(g, ioe::FOR_ROLE, role)
}

pub fn micro_transfer(to: &str) -> TransferRequest {
    TransferRequest {
        from: iri("a0".into()),
        to: iri(to.into()),
        activity: iri("task".into()),
        window: TimeWindow::new(ts(WINDOW_START), ts(WINDOW_END)).unwrap(),
    }
}

/// Rights a delegation over `activity` may carry: those on the systems of
/// the activity's engaged smart objects, plus those on the objects.
pub fn reachable_rights(g: &Graph, activity: &Iri) -> BTreeSet<Iri> {
    let engaged: BTreeSet<Iri> = subjs(g, ioe::ENGAGED_IN, activity)
        .into_iter()
        .filter(|o| typed(g, o, ioe::SMART_OBJECT))
        .collect();
    let systems: BTreeSet<Iri> = engaged
        .iter()
        .flat_map(|o| oracle_systems_of_object(g, o))
        .collect();
    let on_systems = subjs(g, rdf::TYPE, &c(ioe::RIGHT_ON_SYSTEM))
        .into_iter()
        .filter(|r| !objs(g, r, ioe::ON_SYSTEM).is_disjoint(&systems));
    let on_objects = subjs(g, rdf::TYPE, &c(ioe::RIGHT_ON_SMART_OBJECT))
        .into_iter()
        .filter(|r| {
            let targets = &objs(g, r, ioe::ON_OBJECT) | &objs(g, r, ioe::ON_SMART_OBJECT);
            !targets.is_disjoint(&engaged)
        });
    on_systems.chain(on_objects).collect()
}
