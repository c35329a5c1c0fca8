use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use crate::schema::vocab::{ioe, org, ssn};
use crate::schema::Vocabulary;
use crate::store::Graph;
use crate::term::{Iri, Term};
use crate::time::Timestamp;

use super::QueryError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MembershipView {
    pub membership: Iri,
    pub role: Iri,
    pub retired: bool,
}

/// A role an agent holds through a live membership, with its window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoleCandidate {
    pub role: Iri,
    pub start: Option<Timestamp>,
    pub end: Option<Timestamp>,
    /// A start or end value that is not a date-time; such a role is never valid.
    pub malformed: bool,
}

impl RoleCandidate {
    pub fn is_temporary(&self) -> bool {
        self.start.is_some() || self.end.is_some()
    }

    pub fn valid_at(&self, at: Timestamp) -> bool {
        !self.malformed && self.start.is_none_or(|s| s <= at) && self.end.is_none_or(|e| at <= e)
    }
}

/// Picks the role in force at `at`: temporary roles beat permanent ones,
/// then the latest start wins, then the smallest IRI.
pub fn select_role(candidates: &[RoleCandidate], at: Timestamp) -> Option<Iri> {
    candidates
        .iter()
        .filter(|c| c.valid_at(at))
        .min_by(|a, b| {
            b.is_temporary()
                .cmp(&a.is_temporary())
                .then(b.start.cmp(&a.start))
                .then(a.role.cmp(&b.role))
        })
        .map(|c| c.role.clone())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "scope", content = "targets", rename_all = "camelCase")]
pub enum RightScope {
    OnSystem(Vec<Iri>),
    OnSmartObject(Vec<Iri>),
    OnEnvironment(Vec<Iri>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RightView {
    pub id: Iri,
    pub right_type: Option<Iri>,
    pub roles: Vec<Iri>,
    pub scopes: Vec<RightScope>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct PreferenceView {
    pub preference: Iri,
    pub property: Iri,
    pub site: Iri,
    pub value: Term,
}

/// Entity-level lookups by direct traversal of a graph. Class membership
/// is decided through the vocabulary's subclass closure, so the graph does
/// not need to be materialized. Every list is sorted and duplicate-free.
#[derive(Clone, Copy)]
pub struct Entities<'g> {
    graph: &'g Graph,
    vocab: &'g Vocabulary,
}

fn iri(s: &'static str) -> Iri {
    Iri::from_static(s)
}

fn sorted(items: impl IntoIterator<Item = Iri>) -> Vec<Iri> {
    items
        .into_iter()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

impl<'g> Entities<'g> {
    pub fn new(graph: &'g Graph, vocab: &'g Vocabulary) -> Self {
        Self { graph, vocab }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn vocab(&self) -> &'g Vocabulary {
        self.vocab
    }

    fn objects(&self, node: &Iri, predicate: &'static str) -> Vec<Term> {
        self.graph
            .objects(&Term::Iri(node.clone()), &iri(predicate))
    }

    fn object_iris(&self, node: &Iri, predicate: &'static str) -> Vec<Iri> {
        sorted(
            self.objects(node, predicate)
                .iter()
                .filter_map(|t| t.as_iri().cloned()),
        )
    }

    fn subject_iris(&self, predicate: &'static str, object: &Iri) -> Vec<Iri> {
        sorted(
            self.graph
                .subjects(&iri(predicate), &Term::Iri(object.clone()))
                .iter()
                .filter_map(|t| t.as_iri().cloned()),
        )
    }

    pub fn is_a(&self, node: &Iri, class: &'static str) -> bool {
        self.vocab
            .has_type(self.graph, &Term::Iri(node.clone()), &iri(class))
    }

    pub fn is_agent(&self, node: &Iri) -> bool {
        self.is_a(node, ioe::AGENT)
    }

    pub fn instances(&self, class: &'static str) -> Vec<Iri> {
        sorted(
            self.vocab
                .instances_of(self.graph, &iri(class))
                .iter()
                .filter_map(|t| t.as_iri().cloned()),
        )
    }

    fn single(
        &self,
        node: &Iri,
        predicate: &'static str,
        values: Vec<Iri>,
    ) -> Result<Option<Iri>, QueryError> {
        match values.len() {
            0 | 1 => Ok(values.into_iter().next()),
            count => Err(QueryError::Ambiguous {
                node: node.as_str().to_string(),
                property: predicate.to_string(),
                count,
            }),
        }
    }

    /// The site an agent is located in. Non-agents have no location.
    pub fn located_in(&self, agent: &Iri) -> Result<Option<Iri>, QueryError> {
        if !self.is_agent(agent) {
            return Ok(None);
        }
        self.single(
            agent,
            ioe::LOCATED_IN,
            self.object_iris(agent, ioe::LOCATED_IN),
        )
    }

    pub fn memberships(&self, agent: &Iri) -> Vec<MembershipView> {
        let mut out = Vec::new();
        for membership in self.subject_iris(org::MEMBER, agent) {
            if !self.is_a(&membership, org::MEMBERSHIP) {
                continue;
            }
            let retired = !self.objects(&membership, ioe::RETIRED_AT).is_empty();
            for role in self.object_iris(&membership, org::ROLE_PROP) {
                out.push(MembershipView {
                    membership: membership.clone(),
                    role,
                    retired,
                });
            }
        }
        out
    }

    pub fn role_candidate(&self, role: &Iri) -> RoleCandidate {
        let read = |predicate| {
            let values = self.objects(role, predicate);
            let parsed: Vec<Timestamp> = values.iter().filter_map(Timestamp::from_term).collect();
            (parsed, values.len())
        };
        let (starts, n_start) = read(ioe::START_TIME);
        let (ends, n_end) = read(ioe::END_TIME);
        RoleCandidate {
            role: role.clone(),
            start: starts.iter().max().copied(),
            end: ends.iter().min().copied(),
            malformed: starts.len() != n_start || ends.len() != n_end,
        }
    }

    /// Roles held through memberships that have not been retired.
    pub fn role_candidates(&self, agent: &Iri) -> Vec<RoleCandidate> {
        let roles = sorted(
            self.memberships(agent)
                .into_iter()
                .filter(|m| !m.retired)
                .map(|m| m.role),
        );
        roles.iter().map(|r| self.role_candidate(r)).collect()
    }

    pub fn get_role(&self, agent: &Iri, at: Timestamp) -> Option<Iri> {
        select_role(&self.role_candidates(agent), at)
    }

    pub fn get_rights(&self, role: &Iri) -> Vec<Iri> {
        self.subject_iris(ioe::FOR_ROLE, role)
            .into_iter()
            .filter(|r| self.is_a(r, ioe::RIGHT))
            .collect()
    }

    pub fn right_type(&self, right: &Iri) -> Option<Iri> {
        self.object_iris(right, ioe::HAS_TYPE).into_iter().next()
    }

    pub fn right_view(&self, right: &Iri) -> Option<RightView> {
        if !self.is_a(right, ioe::RIGHT) {
            return None;
        }
        let mut scopes = Vec::new();
        if self.is_a(right, ioe::RIGHT_ON_SYSTEM) {
            scopes.push(RightScope::OnSystem(
                self.object_iris(right, ioe::ON_SYSTEM),
            ));
        }
        if self.is_a(right, ioe::RIGHT_ON_SMART_OBJECT) {
            let targets = self
                .object_iris(right, ioe::ON_OBJECT)
                .into_iter()
                .chain(self.object_iris(right, ioe::ON_SMART_OBJECT));
            scopes.push(RightScope::OnSmartObject(sorted(targets)));
        }
        if self.is_a(right, ioe::RIGHT_ON_ENVIRONMENT) {
            scopes.push(RightScope::OnEnvironment(
                self.object_iris(right, ioe::ON_ENVIRONMENT),
            ));
        }
        Some(RightView {
            id: right.clone(),
            right_type: self.right_type(right),
            roles: self.object_iris(right, ioe::FOR_ROLE),
            scopes,
        })
    }

    /// Systems a right applies to. Object-scoped rights cover the systems of
    /// the object, environment-scoped ones the systems of every object
    /// located in the site.
    pub fn systems_from_right(&self, right: &Iri) -> Vec<Iri> {
        let Some(view) = self.right_view(right) else {
            return Vec::new();
        };
        let mut out = BTreeSet::new();
        for scope in &view.scopes {
            match scope {
                RightScope::OnSystem(systems) => out.extend(systems.iter().cloned()),
                RightScope::OnSmartObject(objects) => {
                    out.extend(objects.iter().flat_map(|o| self.included_systems(o)));
                }
                RightScope::OnEnvironment(sites) => {
                    for site in sites {
                        out.extend(
                            self.objects_located_in(site)
                                .iter()
                                .flat_map(|o| self.included_systems(o)),
                        );
                    }
                }
            }
        }
        out.into_iter().collect()
    }

    pub fn environments_from_right(&self, right: &Iri) -> Vec<Iri> {
        if self.is_a(right, ioe::RIGHT_ON_ENVIRONMENT) {
            self.object_iris(right, ioe::ON_ENVIRONMENT)
        } else {
            Vec::new()
        }
    }

    fn is_system(&self, node: &Iri) -> bool {
        self.is_a(node, ssn::SYSTEM)
    }

    /// Systems included in `object`, followed down `ssn:hasSubSystem`.
    pub fn included_systems(&self, object: &Iri) -> Vec<Iri> {
        let mut seen: BTreeSet<Iri> = BTreeSet::new();
        let mut queue: VecDeque<Iri> = self
            .subject_iris(ioe::INCLUDED_IN, object)
            .into_iter()
            .filter(|s| self.is_system(s))
            .collect();
        while let Some(system) = queue.pop_front() {
            if seen.insert(system.clone()) {
                queue.extend(
                    self.object_iris(&system, ssn::HAS_SUB_SYSTEM)
                        .into_iter()
                        .filter(|s| self.is_system(s)),
                );
            }
        }
        seen.into_iter().collect()
    }

    /// Smart objects that include `system`, directly or through parents.
    pub fn containing_objects(&self, system: &Iri) -> Vec<Iri> {
        if !self.is_system(system) {
            return Vec::new();
        }
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([system.clone()]);
        let mut objects = BTreeSet::new();
        while let Some(node) = queue.pop_front() {
            if !seen.insert(node.clone()) {
                continue;
            }
            objects.extend(
                self.object_iris(&node, ioe::INCLUDED_IN)
                    .into_iter()
                    .filter(|o| self.is_a(o, ioe::SMART_OBJECT)),
            );
            queue.extend(
                self.subject_iris(ssn::HAS_SUB_SYSTEM, &node)
                    .into_iter()
                    .filter(|p| self.is_system(p)),
            );
        }
        objects.into_iter().collect()
    }

    /// Where a system is: the site of the smart objects that include it.
    pub fn system_location(&self, system: &Iri) -> Result<Option<Iri>, QueryError> {
        let mut sites = BTreeSet::new();
        for object in self.containing_objects(system) {
            sites.extend(self.located_in(&object)?);
        }
        self.single(system, ioe::LOCATED_IN, sites.into_iter().collect())
    }

    pub fn objects_located_in(&self, site: &Iri) -> Vec<Iri> {
        self.subject_iris(ioe::LOCATED_IN, site)
            .into_iter()
            .filter(|o| self.is_a(o, ioe::SMART_OBJECT))
            .collect()
    }

    pub fn objects_engaged_in(&self, activity: &Iri) -> Vec<Iri> {
        self.subject_iris(ioe::ENGAGED_IN, activity)
            .into_iter()
            .filter(|o| self.is_a(o, ioe::SMART_OBJECT))
            .collect()
    }

    pub fn engaged_activities(&self, agent: &Iri) -> Vec<Iri> {
        self.object_iris(agent, ioe::ENGAGED_IN)
            .into_iter()
            .filter(|a| self.is_a(a, ioe::ACTIVITY))
            .collect()
    }

    /// Human agents not engaged in any activity.
    pub fn available_agents(&self) -> Vec<Iri> {
        self.instances(ioe::H_AGENT)
            .into_iter()
            .filter(|a| self.engaged_activities(a).is_empty())
            .collect()
    }

    pub fn systems_properties(&self, systems: &[Iri]) -> Vec<Iri> {
        sorted(
            systems
                .iter()
                .flat_map(|s| self.object_iris(s, ssn::HAS_PROPERTY)),
        )
    }

    /// Complete preferences of an agent: one view per (property, site, value)
    /// combination of each preference node.
    pub fn env_preferences(&self, agent: &Iri) -> Vec<PreferenceView> {
        let mut out = BTreeSet::new();
        for pref in self.object_iris(agent, ioe::HAS_PREFERENCE) {
            if !self.is_a(&pref, ioe::PREFERENCE) {
                continue;
            }
            for property in self.object_iris(&pref, ioe::FOR_PROPERTY) {
                for site in self.object_iris(&pref, ioe::FOR_SITE) {
                    for value in self.objects(&pref, ioe::HAS_PREFERENCE_VALUE) {
                        out.insert(PreferenceView {
                            preference: pref.clone(),
                            property: property.clone(),
                            site: site.clone(),
                            value,
                        });
                    }
                }
            }
        }
        out.into_iter().collect()
    }

    pub fn rights_on_systems(&self, systems: &[Iri]) -> Vec<Iri> {
        sorted(
            systems
                .iter()
                .flat_map(|s| self.subject_iris(ioe::ON_SYSTEM, s))
                .filter(|r| self.is_a(r, ioe::RIGHT_ON_SYSTEM)),
        )
    }

    pub fn rights_on_objects(&self, objects: &[Iri]) -> Vec<Iri> {
        sorted(
            objects
                .iter()
                .flat_map(|o| {
                    self.subject_iris(ioe::ON_OBJECT, o)
                        .into_iter()
                        .chain(self.subject_iris(ioe::ON_SMART_OBJECT, o))
                })
                .filter(|r| self.is_a(r, ioe::RIGHT_ON_SMART_OBJECT)),
        )
    }

    pub fn is_transferable(&self, role: &Iri) -> bool {
        self.objects(role, ioe::IS_TRANSFERABLE)
            .iter()
            .any(|t| t.as_literal().and_then(|l| l.as_bool()) == Some(true))
    }

    pub fn current_values(&self, property: &Iri) -> Vec<Term> {
        self.objects(property, ioe::HAS_CURRENT_VALUE)
    }

    pub fn last_set_by(&self, property: &Iri) -> Vec<Iri> {
        self.object_iris(property, ioe::LAST_SET_BY)
    }

    /// Asserted (predicate, object) pairs of `instance` when it is an
    /// instance of `class`.
    pub fn describe(&self, instance: &Iri, class: &Iri) -> Vec<(Iri, Term)> {
        let node = Term::Iri(instance.clone());
        if !self.vocab.has_type(self.graph, &node, class) {
            return Vec::new();
        }
        self.graph
            .match_pattern(Some(&node), None, None)
            .into_iter()
            .filter_map(|t| Some((t.predicate.as_iri()?.clone(), t.object)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ts(s: &str) -> Timestamp {
        Timestamp::parse(s).unwrap()
    }

    fn cand(role: &str, start: Option<&str>, end: Option<&str>) -> RoleCandidate {
        RoleCandidate {
            role: Iri::new(format!("http://e/{role}")).unwrap(),
            start: start.map(ts),
            end: end.map(ts),
            malformed: false,
        }
    }

    #[test]
    fn temporary_role_beats_permanent_within_window() {
        let c = [
            cand("perm", None, None),
            cand(
                "temp",
                Some("2024-01-01T09:00:00Z"),
                Some("2024-01-01T17:00:00Z"),
            ),
        ];
        assert_eq!(
            select_role(&c, ts("2024-01-01T12:00:00Z"))
                .unwrap()
                .as_str(),
            "http://e/temp"
        );
        assert_eq!(
            select_role(&c, ts("2024-01-01T17:00:00Z"))
                .unwrap()
                .as_str(),
            "http://e/temp"
        );
        assert_eq!(
            select_role(&c, ts("2024-01-01T17:00:01Z"))
                .unwrap()
                .as_str(),
            "http://e/perm"
        );
    }

    #[test]
    fn latest_start_then_smallest_iri() {
        let c = [
            cand("b", Some("2024-01-01T08:00:00Z"), None),
            cand("c", Some("2024-01-01T09:00:00Z"), None),
            cand("a", Some("2024-01-01T09:00:00Z"), None),
        ];
        assert_eq!(
            select_role(&c, ts("2024-01-02T00:00:00Z"))
                .unwrap()
                .as_str(),
            "http://e/a"
        );
        let perms = [cand("z", None, None), cand("y", None, None)];
        assert_eq!(
            select_role(&perms, ts("2024-01-02T00:00:00Z"))
                .unwrap()
                .as_str(),
            "http://e/y"
        );
    }

    #[test]
    fn malformed_windows_never_hold() {
        let mut c = cand("m", None, None);
        c.malformed = true;
        assert_eq!(select_role(&[c], ts("2024-01-01T00:00:00Z")), None);
    }
}
