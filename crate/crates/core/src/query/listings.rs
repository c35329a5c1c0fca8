//! Entity lookups expressed as queries. [`QueryPaths`] answers the same
//! questions as [`Entities`](super::Entities) through [`evaluate`] over a
//! closure-materialized graph, so the two paths can be checked against
//! each other.

use std::collections::BTreeSet;

use crate::schema::vocab::{ioe, org, rdf, ssn};
use crate::schema::Vocabulary;
use crate::store::Graph;
use crate::term::{Iri, Term};
use crate::time::Timestamp;

use super::{
    evaluate, select_role, BindingSet, PatternTerm, PreferenceView, Query, QueryError,
    RoleCandidate, TriplePattern, Variable,
};

fn v(name: &str) -> PatternTerm {
    PatternTerm::var(name)
}

fn c(iri: &'static str) -> PatternTerm {
    Iri::from_static(iri).into()
}

fn tp(s: impl Into<PatternTerm>, p: PatternTerm, o: impl Into<PatternTerm>) -> TriplePattern {
    TriplePattern::new(s, p, o)
}

fn select(
    vars: &[&str],
    where_group: Vec<TriplePattern>,
    minus: Option<Vec<TriplePattern>>,
) -> Query {
    Query::new(
        vars.iter().map(|n| Variable::new(*n)).collect(),
        where_group,
        minus,
    )
    .expect("built-in query is well-formed")
}

/// Properties and values of an instance of `class`.
pub fn instance_description(instance: &Iri, class: &Iri) -> Query {
    select(
        &["p", "o"],
        vec![
            tp(instance, c(rdf::TYPE), class),
            tp(instance, v("p"), v("o")),
        ],
        None,
    )
}

/// The site of an agent.
pub fn agent_location(agent: &Iri) -> Query {
    select(
        &["site"],
        vec![
            tp(agent, c(rdf::TYPE), c(ioe::AGENT)),
            tp(agent, c(ioe::LOCATED_IN), v("site")),
        ],
        None,
    )
}

/// Roles of an agent through memberships.
pub fn agent_roles(agent: &Iri) -> Query {
    select(
        &["role"],
        vec![
            tp(v("m"), c(rdf::TYPE), c(org::MEMBERSHIP)),
            tp(v("m"), c(org::MEMBER), agent),
            tp(v("m"), c(org::ROLE_PROP), v("role")),
        ],
        None,
    )
}

/// Roles of an agent through memberships that have not been retired.
pub fn live_agent_roles(agent: &Iri) -> Query {
    let mut q = agent_roles(agent);
    q.minus = Some(vec![tp(v("m"), c(ioe::RETIRED_AT), v("t"))]);
    q
}

/// Rights granted to a role.
pub fn role_rights(role: &Iri) -> Query {
    select(
        &["right"],
        vec![
            tp(v("right"), c(rdf::TYPE), c(ioe::RIGHT)),
            tp(v("right"), c(ioe::FOR_ROLE), role),
        ],
        None,
    )
}

/// Systems named by a system-scoped right.
pub fn right_systems(right: &Iri) -> Query {
    select(
        &["sys"],
        vec![
            tp(right, c(rdf::TYPE), c(ioe::RIGHT_ON_SYSTEM)),
            tp(right, c(ioe::ON_SYSTEM), v("sys")),
        ],
        None,
    )
}

/// Human agents not engaged in any activity.
pub fn available_agents() -> Query {
    select(
        &["agent"],
        vec![tp(v("agent"), c(rdf::TYPE), c(ioe::H_AGENT))],
        Some(vec![
            tp(v("agent"), c(ioe::ENGAGED_IN), v("act")),
            tp(v("act"), c(rdf::TYPE), c(ioe::ACTIVITY)),
        ]),
    )
}

/// Closure-backed query answers for the entity lookups.
pub struct QueryPaths {
    graph: Graph,
}

impl QueryPaths {
    pub fn new(graph: &Graph, vocab: &Vocabulary) -> Self {
        Self {
            graph: vocab.materialized(graph),
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn run(&self, query: &Query) -> BindingSet {
        evaluate(&self.graph, query)
    }

    fn column(&self, var: &str, where_group: Vec<TriplePattern>) -> Vec<Iri> {
        self.run(&select(&[var], where_group, None)).iris(var)
    }

    fn union(&self, items: impl IntoIterator<Item = Vec<Iri>>) -> Vec<Iri> {
        items
            .into_iter()
            .flatten()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    pub fn located_in(&self, agent: &Iri) -> Result<Option<Iri>, QueryError> {
        let sites = self.run(&agent_location(agent)).iris("site");
        match sites.len() {
            0 | 1 => Ok(sites.into_iter().next()),
            count => Err(QueryError::Ambiguous {
                node: agent.as_str().to_string(),
                property: ioe::LOCATED_IN.to_string(),
                count,
            }),
        }
    }

    pub fn get_role(&self, agent: &Iri, at: Timestamp) -> Option<Iri> {
        let candidates: Vec<RoleCandidate> = self
            .run(&live_agent_roles(agent))
            .iris("role")
            .into_iter()
            .map(|role| {
                let times = |p: &'static str| {
                    let q = select(&["t"], vec![tp(&role, c(p), v("t"))], None);
                    let raw = self.run(&q);
                    let parsed: Vec<Timestamp> = raw
                        .column("t")
                        .into_iter()
                        .filter_map(Timestamp::from_term)
                        .collect();
                    let ok = parsed.len() == raw.len();
                    (parsed, ok)
                };
                let (starts, starts_ok) = times(ioe::START_TIME);
                let (ends, ends_ok) = times(ioe::END_TIME);
                RoleCandidate {
                    role: role.clone(),
                    start: starts.into_iter().max(),
                    end: ends.into_iter().min(),
                    malformed: !(starts_ok && ends_ok),
                }
            })
            .collect();
        select_role(&candidates, at)
    }

    pub fn get_rights(&self, role: &Iri) -> Vec<Iri> {
        self.run(&role_rights(role)).iris("right")
    }

    pub fn included_systems(&self, object: &Iri) -> Vec<Iri> {
        let mut found: BTreeSet<Iri> = BTreeSet::new();
        let mut frontier = self.column(
            "s",
            vec![
                tp(v("s"), c(ioe::INCLUDED_IN), object),
                tp(v("s"), c(rdf::TYPE), c(ssn::SYSTEM)),
            ],
        );
        while let Some(system) = frontier.pop() {
            if found.insert(system.clone()) {
                frontier.extend(self.column(
                    "sub",
                    vec![
                        tp(&system, c(ssn::HAS_SUB_SYSTEM), v("sub")),
                        tp(v("sub"), c(rdf::TYPE), c(ssn::SYSTEM)),
                    ],
                ));
            }
        }
        found.into_iter().collect()
    }

    pub fn systems_from_right(&self, right: &Iri) -> Vec<Iri> {
        let direct = self.run(&right_systems(right)).iris("sys");
        let objects = self.column(
            "o",
            vec![
                tp(right, c(rdf::TYPE), c(ioe::RIGHT_ON_SMART_OBJECT)),
                tp(right, c(ioe::ON_OBJECT), v("o")),
            ],
        );
        let env_objects = self.column(
            "o",
            vec![
                tp(right, c(rdf::TYPE), c(ioe::RIGHT_ON_ENVIRONMENT)),
                tp(right, c(ioe::ON_ENVIRONMENT), v("site")),
                tp(v("o"), c(rdf::TYPE), c(ioe::SMART_OBJECT)),
                tp(v("o"), c(ioe::LOCATED_IN), v("site")),
            ],
        );
        let via_objects: Vec<Vec<Iri>> = objects
            .iter()
            .chain(&env_objects)
            .map(|o| self.included_systems(o))
            .collect();
        self.union(std::iter::once(direct).chain(via_objects))
    }

    pub fn objects_located_in(&self, site: &Iri) -> Vec<Iri> {
        self.column(
            "o",
            vec![
                tp(v("o"), c(rdf::TYPE), c(ioe::SMART_OBJECT)),
                tp(v("o"), c(ioe::LOCATED_IN), site),
            ],
        )
    }

    pub fn objects_engaged_in(&self, activity: &Iri) -> Vec<Iri> {
        self.column(
            "o",
            vec![
                tp(v("o"), c(rdf::TYPE), c(ioe::SMART_OBJECT)),
                tp(v("o"), c(ioe::ENGAGED_IN), activity),
            ],
        )
    }

    pub fn available_agents(&self) -> Vec<Iri> {
        self.run(&available_agents()).iris("agent")
    }

    pub fn systems_properties(&self, systems: &[Iri]) -> Vec<Iri> {
        self.union(
            systems
                .iter()
                .map(|s| self.column("p", vec![tp(s, c(ssn::HAS_PROPERTY), v("p"))])),
        )
    }

    pub fn env_preferences(&self, agent: &Iri) -> Vec<PreferenceView> {
        let q = select(
            &["pref", "prop", "site", "value"],
            vec![
                tp(agent, c(ioe::HAS_PREFERENCE), v("pref")),
                tp(v("pref"), c(rdf::TYPE), c(ioe::PREFERENCE)),
                tp(v("pref"), c(ioe::FOR_PROPERTY), v("prop")),
                tp(v("pref"), c(ioe::FOR_SITE), v("site")),
                tp(v("pref"), c(ioe::HAS_PREFERENCE_VALUE), v("value")),
            ],
            None,
        );
        self.run(&q)
            .rows()
            .iter()
            .filter_map(|row| match row.as_slice() {
                [Term::Iri(pref), Term::Iri(prop), Term::Iri(site), value] => {
                    Some(PreferenceView {
                        preference: pref.clone(),
                        property: prop.clone(),
                        site: site.clone(),
                        value: value.clone(),
                    })
                }
                _ => None,
            })
            .collect()
    }

    pub fn rights_on_systems(&self, systems: &[Iri]) -> Vec<Iri> {
        self.union(systems.iter().map(|s| {
            self.column(
                "r",
                vec![
                    tp(v("r"), c(rdf::TYPE), c(ioe::RIGHT_ON_SYSTEM)),
                    tp(v("r"), c(ioe::ON_SYSTEM), s),
                ],
            )
        }))
    }

    pub fn rights_on_objects(&self, objects: &[Iri]) -> Vec<Iri> {
        self.union(objects.iter().map(|o| {
            self.column(
                "r",
                vec![
                    tp(v("r"), c(rdf::TYPE), c(ioe::RIGHT_ON_SMART_OBJECT)),
                    tp(v("r"), c(ioe::ON_OBJECT), o),
                ],
            )
        }))
    }

    pub fn is_transferable(&self, role: &Iri) -> bool {
        let q = select(
            &["f"],
            vec![tp(role, c(ioe::IS_TRANSFERABLE), v("f"))],
            None,
        );
        self.run(&q)
            .column("f")
            .iter()
            .any(|t| t.as_literal().and_then(|l| l.as_bool()) == Some(true))
    }
}
