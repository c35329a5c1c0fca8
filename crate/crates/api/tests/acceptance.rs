//! One PASS/FAIL line per acceptance criterion. Exits non-zero if any fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::time::Instant;

use common::access::{decisions, oracle_access, oracle_role, universe};
use common::bgp::{oracle, random_graph, random_query};
use common::micro::{iri, micro_transfer, micrograph, reachable_rights, rights_of};
use common::names::{CLASSES, DATA_PROPERTIES, OBJECT_PROPERTIES};
use common::queries::*;
use common::{base_graph, c, d, ds, extended_graph, fixture_path, load, ts};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use semioe_api::scenario::walkthrough;
use semioe_api::Engine;
use semioe_core::query::listings;
use semioe_core::services::TransferRequest;
use semioe_core::turtle::{parse_turtle, serialize_graph};
use semioe_core::vocab::{ioe, DEFAULT_INSTANCE_NS};
use semioe_core::{
    evaluate, parse_query, Graph, Iri, PrefixMap, Services, Term, TimeWindow, Vocabulary,
};

/// Triple count of the base fixture, expanded by hand from its listing.
const BASE_FIXTURE_TRIPLES: usize = 33;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(message())
    }
}

fn fixture_fidelity() -> Outcome {
    let started = Instant::now();
    let source =
        std::fs::read_to_string(fixture_path("listing1.ttl")).map_err(|e| e.to_string())?;
    let doc = parse_turtle(
        &source,
        Some(&PrefixMap::standard(DEFAULT_INSTANCE_NS).unwrap()),
    )
    .map_err(|e| e.to_string())?;
    let graph = doc.to_graph().map_err(|e| e.to_string())?;
    ensure(graph.len() == BASE_FIXTURE_TRIPLES, || {
        format!("{} triples", graph.len())
    })?;
    let text = serialize_graph(&graph, &doc.prefixes);
    let again = parse_turtle(&text, None).map_err(|e| e.to_string())?;
    ensure(again.to_graph().unwrap() == graph, || {
        "round-trip changed the graph".into()
    })?;
    ensure(serialize_graph(&graph, &again.prefixes) == text, || {
        "second serialization differs".into()
    })?;
    let elapsed = started.elapsed();
    ensure(elapsed.as_secs_f64() < 1.0, || format!("{elapsed:?}"))?;
    Ok(format!(
        "{BASE_FIXTURE_TRIPLES} triples, bit-stable round-trip in {elapsed:.0?}"
    ))
}

fn vocabulary_coverage() -> Outcome {
    let v = Vocabulary::bundled();
    let named = |local: &str| Iri::new(format!("{}{local}", ioe::NS)).unwrap();
    for name in CLASSES {
        ensure(v.classes().contains(&named(name)), || {
            format!("class {name} missing")
        })?;
    }
    for name in OBJECT_PROPERTIES {
        ensure(v.object_properties().contains(&named(name)), || {
            format!("object property {name} missing")
        })?;
    }
    for name in DATA_PROPERTIES {
        ensure(v.data_properties().contains(&named(name)), || {
            format!("data property {name} missing")
        })?;
    }
    let (classes, properties) = (v.classes().len(), v.object_properties().len());
    ensure(classes >= 20 && properties >= 10, || {
        format!("{classes} classes, {properties} object properties")
    })?;
    Ok(format!(
        "{classes} classes, {properties} object properties, all named terms present"
    ))
}

fn query_conformance() -> Outcome {
    let p = PrefixMap::bundled();
    let john = d("john_doe");
    let hagent = c(ioe::H_AGENT);
    let level1 = d("CNC_machinist_level_1");
    let right = d("right_read_CNC_machine");
    let texts = [
        (
            fill(INSTANCE_DESCRIPTION, &[("ins", &john), ("entity", &hagent)]),
            listings::instance_description(&john, &hagent),
        ),
        (
            fill(LOCATED_IN, &[("agent", &john)]),
            listings::agent_location(&john),
        ),
        (
            fill(GET_ROLE, &[("agent", &john)]),
            listings::agent_roles(&john),
        ),
        (
            fill(GET_RIGHTS, &[("role", &level1)]),
            listings::role_rights(&level1),
        ),
        (
            fill(SYSTEMS_FROM_RIGHT, &[("right", &right)]),
            listings::right_systems(&right),
        ),
        (AVAILABLE_AGENTS.to_string(), listings::available_agents()),
    ];
    for (text, expected) in &texts {
        let parsed = parse_query(text, &p).map_err(|e| format!("{e}: {text}"))?;
        ensure(&parsed == expected, || {
            format!("text differs from programmatic query: {text}")
        })?;
    }
    parse_query(AVAILABLE_AGENTS_AS_PRINTED, &p).map_err(|e| e.to_string())?;

    let raw = base_graph();
    let closed = Vocabulary::bundled().materialized(&raw);
    let first = |g: &Graph, q| -> Vec<Term> {
        evaluate(g, &q)
            .rows()
            .iter()
            .map(|r| r[0].clone())
            .collect()
    };
    let iris = |locals: &[&str]| -> Vec<Term> { ds(locals).into_iter().map(Term::Iri).collect() };
    let description: Vec<Vec<Term>> =
        evaluate(&raw, &listings::instance_description(&john, &hagent))
            .rows()
            .to_vec();
    let expected = vec![
        vec![Term::Iri(c(ioe::ENGAGED_IN)), Term::Iri(d("calibration"))],
        vec![
            Term::Iri(c(ioe::LOCATED_IN)),
            Term::Iri(d("assembly_line_1")),
        ],
        vec![
            Term::Iri(c(semioe_core::vocab::rdf::TYPE)),
            Term::Iri(c(ioe::H_AGENT)),
        ],
    ];
    ensure(description == expected, || {
        format!("instance description: {description:?}")
    })?;
    let tables = [
        (
            "located in",
            first(&closed, listings::agent_location(&john)),
            iris(&["assembly_line_1"]),
        ),
        (
            "role",
            first(&raw, listings::agent_roles(&john)),
            iris(&["CNC_machinist_level_1"]),
        ),
        (
            "role",
            first(&raw, listings::agent_roles(&d("jane_smith"))),
            iris(&["CNC_machinist_level_2"]),
        ),
        (
            "rights",
            first(&closed, listings::role_rights(&level1)),
            iris(&["right_config_CNC_machine", "right_read_CNC_machine"]),
        ),
        (
            "rights",
            first(&closed, listings::role_rights(&d("CNC_machinist_level_2"))),
            iris(&["right_read_CNC_machine"]),
        ),
        (
            "systems from right",
            first(&closed, listings::right_systems(&right)),
            Vec::new(),
        ),
        (
            "available agents",
            first(&raw, listings::available_agents()),
            iris(&["jane_smith"]),
        ),
        (
            "available agents as printed",
            first(&raw, parse_query(AVAILABLE_AGENTS_AS_PRINTED, &p).unwrap()),
            iris(&["jane_smith"]),
        ),
    ];
    for (name, got, expected) in tables {
        ensure(got == expected, || format!("{name}: got {got:?}"))?;
    }
    Ok("6 query texts parse to their programmatic forms; golden tables match".into())
}

fn query_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce);
    let mut queries = 0;
    for round in 0..100 {
        let graph = random_graph(&mut rng);
        ensure(graph.len() <= 200, || format!("graph #{round} too large"))?;
        for _ in 0..6 {
            let query = random_query(&mut rng);
            let got = evaluate(&graph, &query);
            ensure(got.rows() == oracle(&graph, &query).as_slice(), || {
                format!("graph #{round}: {query:?}")
            })?;
            queries += 1;
        }
    }
    Ok(format!(
        "100 random graphs, {queries} queries, zero mismatches"
    ))
}

fn access_oracle() -> Outcome {
    let started = Instant::now();
    let g = extended_graph();
    let u = universe(&g);
    let at = ts("2024-01-01T09:00:00Z");
    let got = decisions(&g, &u, at);
    let mut i = 0;
    let mut mismatches = 0;
    for agent in &u.agents {
        for system in &u.systems {
            for ty in &u.types {
                mismatches += usize::from(got[i] != oracle_access(&g, agent, system, ty, at));
                i += 1;
            }
        }
    }
    let elapsed = started.elapsed();
    ensure(mismatches == 0, || {
        format!("{mismatches} of {i} decisions differ")
    })?;
    ensure(elapsed.as_secs_f64() < 5.0, || format!("{elapsed:?}"))?;
    Ok(format!(
        "{i} combinations, zero mismatches in {elapsed:.0?}"
    ))
}

fn granted(decision: &semioe_core::ServiceDecision) -> BTreeSet<Iri> {
    decision
        .grant()
        .map(|g| g.rights.iter().cloned().collect())
        .unwrap_or_default()
}

fn window() -> TimeWindow {
    TimeWindow::new(ts("2024-01-01T09:00:00Z"), ts("2024-01-01T17:00:00Z")).unwrap()
}

fn fixture_transfer(from: &str, to: &str, activity: &str) -> TransferRequest {
    TransferRequest {
        from: d(from),
        to: d(to),
        activity: d(activity),
        window: window(),
    }
}

fn service_algebra() -> Outcome {
    let s = Services::default();
    let base = extended_graph();
    let role = |g: &Graph, agent: &str| oracle_role(g, &d(agent), window().start()).unwrap();

    let collab = s
        .collaborate(
            &mut base.clone(),
            &fixture_transfer("john_doe", "jane_smith", "calibration"),
        )
        .map_err(|e| e.to_string())?;
    let (r1, r2) = (
        rights_of(&base, &role(&base, "john_doe")),
        rights_of(&base, &role(&base, "jane_smith")),
    );
    ensure(
        granted(&collab).is_superset(&r1) && granted(&collab).is_superset(&r2),
        || "fixture union".into(),
    )?;

    let deleg = s
        .delegate(
            &mut base.clone(),
            &fixture_transfer("air_purifier", "cobot", "anomaly_detection"),
        )
        .map_err(|e| e.to_string())?;
    let (held, reachable) = (
        rights_of(&base, &role(&base, "air_purifier")),
        reachable_rights(&base, &d("anomaly_detection")),
    );
    let got = granted(&deleg);
    ensure(
        got.is_subset(&held) && got.is_subset(&reachable) && got == &held & &reachable,
        || "fixture intersection".into(),
    )?;

    let mut rng = ChaCha8Rng::seed_from_u64(0xa19e);
    for round in 0..50 {
        let g = micrograph(&mut rng);
        let (r0, r1) = (
            rights_of(&g, &iri("r0".into())),
            rights_of(&g, &iri("r1".into())),
        );
        let collab = s
            .collaborate(&mut g.clone(), &micro_transfer("a1"))
            .map_err(|e| format!("round {round}: {e}"))?;
        ensure(granted(&collab) == &r0 | &r1, || {
            format!("round {round}: union")
        })?;
        let deleg = s
            .delegate(&mut g.clone(), &micro_transfer("a2"))
            .map_err(|e| format!("round {round}: {e}"))?;
        let reachable = reachable_rights(&g, &iri("task".into()));
        let got = granted(&deleg);
        ensure(
            got.is_subset(&r0) && got.is_subset(&reachable) && got == &r0 & &reachable,
            || format!("round {round}: intersection"),
        )?;
    }
    Ok("union and double containment hold on the extended fixture and 50 micrographs".into())
}

fn temporal_soundness() -> Outcome {
    let s = Services::default();
    let outside = [
        "2024-01-01T08:59:59Z",
        "2024-01-01T17:00:01Z",
        "2023-01-01T00:00:00Z",
        "2030-01-01T00:00:00Z",
    ]
    .map(ts);
    let mut grants = 0;
    let mut check =
        |base: &Graph, request: &TransferRequest, collaborate: bool| -> Result<(), String> {
            let u = universe(base);
            let mut g = base.clone();
            let decision = if collaborate {
                s.collaborate(&mut g, request)
            } else {
                s.delegate(&mut g, request)
            }
            .map_err(|e| e.to_string())?;
            let temp = decision.grant().unwrap().temp_role.clone();
            let e = semioe_core::Entities::new(&g, Vocabulary::bundled());
            for t in outside {
                ensure(e.get_role(&request.to, t).as_ref() != Some(&temp), || {
                    format!("temp role at {t}")
                })?;
                ensure(decisions(&g, &u, t) == decisions(base, &u, t), || {
                    format!("decisions differ at {t}")
                })?;
            }
            for t in [request.window.start(), request.window.end()] {
                ensure(e.get_role(&request.to, t).as_ref() == Some(&temp), || {
                    format!("no temp role at boundary {t}")
                })?;
            }
            grants += 1;
            Ok(())
        };
    let base = extended_graph();
    check(
        &base,
        &fixture_transfer("john_doe", "jane_smith", "calibration"),
        true,
    )?;
    check(
        &base,
        &fixture_transfer("air_purifier", "cobot", "anomaly_detection"),
        false,
    )?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e);
    for _ in 0..10 {
        let g = micrograph(&mut rng);
        check(&g, &micro_transfer("a1"), true)?;
        check(&g, &micro_transfer("a2"), false)?;
    }

    // Boundary access through the collaboration grant itself.
    let mut g = base.clone();
    s.collaborate(
        &mut g,
        &fixture_transfer("john_doe", "jane_smith", "calibration"),
    )
    .map_err(|e| e.to_string())?;
    let allowed = |at: &str| {
        let req = semioe_core::services::AccessRequest {
            agent: d("jane_smith"),
            system: d("spindle_sensor"),
            site: None,
            right_type: d("configure"),
            at: ts(at),
        };
        s.access_control(&g, &req).unwrap().allowed() == Some(true)
    };
    ensure(
        allowed("2024-01-01T09:00:00Z") && allowed("2024-01-01T17:00:00Z"),
        || "boundary denied".into(),
    )?;
    ensure(
        !allowed("2024-01-01T08:59:59Z") && !allowed("2024-01-01T17:00:01Z"),
        || "outside allowed".into(),
    )?;
    Ok(format!(
        "{grants} grants: outside-window decisions unchanged, inclusive boundaries"
    ))
}

fn scenario_walkthrough() -> Outcome {
    let kb = load("scenario_extended.ttl");
    let engine = Engine::new(kb, "2024-01-01T09:00:00Z".parse().unwrap());
    let transcript = walkthrough(&engine).map_err(|e| e.to_string())?;
    let report = engine.validate();
    let warnings: Vec<Term> = report.warnings().map(|v| v.focus.clone()).collect();
    ensure(report.valid && report.errors().count() == 0, || {
        "final graph invalid".into()
    })?;
    ensure(warnings == [Term::Iri(d("forklift"))], || {
        format!("warnings {warnings:?}")
    })?;
    Ok(format!(
        "{} steps as expected; final graph valid with one R1 warning",
        transcript.steps.len()
    ))
}

fn inference() -> Outcome {
    let v = Vocabulary::bundled();
    let mut checked = 0;
    for name in ["listing1.ttl", "scenario_extended.ttl"] {
        let kb = load(name);
        let graph = kb.store().snapshot();
        let sites: BTreeSet<Term> = v.instances_of(&graph, &c(ioe::SITE)).into_iter().collect();
        ensure(!sites.is_empty(), || format!("{name}: no sites"))?;
        for class in ["bot:Site", "org:Site"] {
            let rows = kb
                .query_text(&format!("SELECT ?x WHERE {{ ?x a {class} }}"))
                .map_err(|e| e.to_string())?;
            let found: BTreeSet<Term> = rows.rows().iter().map(|r| r[0].clone()).collect();
            ensure(sites.is_subset(&found), || {
                format!("{name}: {class} misses sites")
            })?;
        }
        let once = v.materialized(&graph);
        ensure(v.materialized(&once) == once, || {
            format!("{name}: closure not idempotent")
        })?;
        checked += sites.len();
    }
    Ok(format!(
        "{checked} site instances found as bot:Site and org:Site; closure idempotent"
    ))
}

fn main() {
    panic::set_hook(Box::new(|_| {}));
    let criteria: [Criterion; 9] = [
        ("fixture fidelity", fixture_fidelity),
        ("vocabulary coverage", vocabulary_coverage),
        ("query conformance", query_conformance),
        ("query oracle", query_oracle),
        ("access-control oracle", access_oracle),
        ("service algebra", service_algebra),
        ("temporal soundness", temporal_soundness),
        ("scenario walkthrough", scenario_walkthrough),
        ("inference", inference),
    ];
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|payload| {
            let message = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into());
            Err(message)
        });
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail}", n + 1),
            Err(reason) => {
                failed += 1;
                println!("FAIL {} {name}: {reason}", n + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
