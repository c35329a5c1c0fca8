use std::fmt;

use serde::Serialize;

use super::vocab::{ioe, ssn, xsd};
use super::Vocabulary;
use crate::store::Graph;
use crate::term::{Iri, Term};
use crate::time::Timestamp;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum RuleId {
    /// Smart objects include at least one system.
    R1,
    /// Rights have exactly one type and at least one role.
    R2,
    /// Rights name a target matching their scope.
    R3,
    /// Agent relations have one source, one target, one or more workflow elements.
    R4,
    /// Role windows are ordered.
    R5,
    /// Transferability flags are booleans.
    R6,
    /// Preferences name one property, one site and one value.
    R7,
}

impl RuleId {
    pub fn severity(self) -> Severity {
        match self {
            RuleId::R1 => Severity::Warning,
            _ => Severity::Error,
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Violation {
    pub rule: RuleId,
    pub severity: Severity,
    pub focus: Term,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// No error-severity violations. Warnings do not invalidate a graph.
    pub valid: bool,
}

impl ValidationReport {
    pub fn errors(&self) -> impl Iterator<Item = &Violation> {
        self.violations
            .iter()
            .filter(|v| v.severity == Severity::Error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Violation> {
        self.violations
            .iter()
            .filter(|v| v.severity == Severity::Warning)
    }
}

struct Checker<'a> {
    graph: &'a Graph,
    vocab: &'a Vocabulary,
    out: Vec<Violation>,
}

impl Checker<'_> {
    fn count(&self, node: &Term, predicate: &'static str) -> usize {
        self.graph.objects(node, &Iri::from_static(predicate)).len()
    }

    fn report(&mut self, rule: RuleId, focus: &Term, message: String) {
        self.out.push(Violation {
            rule,
            severity: rule.severity(),
            focus: focus.clone(),
            message,
        });
    }

    fn instances(&self, class: &'static str) -> Vec<Term> {
        self.vocab
            .instances_of(self.graph, &Iri::from_static(class))
    }

    fn exactly(&mut self, rule: RuleId, node: &Term, predicate: &'static str, label: &str) {
        let n = self.count(node, predicate);
        if n != 1 {
            self.report(
                rule,
                node,
                format!("{label} must have exactly one <{predicate}>, found {n}"),
            );
        }
    }

    fn at_least_one(
        &mut self,
        rule: RuleId,
        node: &Term,
        predicates: &[&'static str],
        label: &str,
    ) {
        let n: usize = predicates.iter().map(|p| self.count(node, p)).sum();
        if n == 0 {
            let names: Vec<String> = predicates.iter().map(|p| format!("<{p}>")).collect();
            self.report(
                rule,
                node,
                format!("{label} must have at least one {}", names.join(" or ")),
            );
        }
    }

    fn smart_objects_include_systems(&mut self) {
        let system = Iri::from_static(ssn::SYSTEM);
        let included_in = Iri::from_static(ioe::INCLUDED_IN);
        for object in self.instances(ioe::SMART_OBJECT) {
            let has_system = self
                .graph
                .subjects(&included_in, &object)
                .iter()
                .any(|s| self.vocab.has_type(self.graph, s, &system));
            if !has_system {
                self.report(
                    RuleId::R1,
                    &object,
                    "smart object includes no system".into(),
                );
            }
        }
    }

    fn rights(&mut self) {
        for right in self.instances(ioe::RIGHT) {
            self.exactly(RuleId::R2, &right, ioe::HAS_TYPE, "right");
            self.at_least_one(RuleId::R2, &right, &[ioe::FOR_ROLE], "right");
        }
        for right in self.instances(ioe::RIGHT_ON_SYSTEM) {
            self.at_least_one(RuleId::R3, &right, &[ioe::ON_SYSTEM], "right on system");
        }
        for right in self.instances(ioe::RIGHT_ON_SMART_OBJECT) {
            self.at_least_one(
                RuleId::R3,
                &right,
                &[ioe::ON_OBJECT, ioe::ON_SMART_OBJECT],
                "right on smart object",
            );
        }
        for right in self.instances(ioe::RIGHT_ON_ENVIRONMENT) {
            self.at_least_one(
                RuleId::R3,
                &right,
                &[ioe::ON_ENVIRONMENT],
                "right on environment",
            );
        }
    }

    fn agent_relations(&mut self) {
        for relation in self.instances(ioe::AGENT_RELATION) {
            self.exactly(RuleId::R4, &relation, ioe::FROM_AGENT, "agent relation");
            self.exactly(RuleId::R4, &relation, ioe::TO_AGENT, "agent relation");
            self.at_least_one(
                RuleId::R4,
                &relation,
                &[ioe::FOR_WORKFLOW_ELEMENT],
                "agent relation",
            );
        }
    }

    fn role_windows(&mut self) {
        let start_p = Iri::from_static(ioe::START_TIME);
        let end_p = Iri::from_static(ioe::END_TIME);
        for role in self.instances(ioe::CURRENT_ROLE) {
            let starts = self.graph.objects(&role, &start_p);
            let ends = self.graph.objects(&role, &end_p);
            if starts.is_empty() || ends.is_empty() {
                continue;
            }
            let parsed: Option<Vec<Timestamp>> = starts
                .iter()
                .chain(&ends)
                .map(Timestamp::from_term)
                .collect();
            if parsed.is_none() {
                self.report(
                    RuleId::R5,
                    &role,
                    "role start/end time is not a valid xsd:dateTime".into(),
                );
                continue;
            }
            let latest_start = starts.iter().filter_map(Timestamp::from_term).max();
            let earliest_end = ends.iter().filter_map(Timestamp::from_term).min();
            if let (Some(start), Some(end)) = (latest_start, earliest_end) {
                if start > end {
                    self.report(
                        RuleId::R5,
                        &role,
                        format!("role starts at {start} after it ends at {end}"),
                    );
                }
            }
        }
    }

    fn transferability_flags(&mut self) {
        let predicate = Term::Iri(Iri::from_static(ioe::IS_TRANSFERABLE));
        for t in self.graph.match_pattern(None, Some(&predicate), None) {
            let ok = t
                .object
                .as_literal()
                .is_some_and(|lit| lit.datatype() == xsd::BOOLEAN && lit.as_bool().is_some());
            if !ok {
                self.report(
                    RuleId::R6,
                    &t.subject,
                    format!("isTransferable value {} is not an xsd:boolean", t.object),
                );
            }
        }
    }

    fn preferences(&mut self) {
        for pref in self.instances(ioe::PREFERENCE) {
            self.exactly(RuleId::R7, &pref, ioe::FOR_PROPERTY, "preference");
            self.exactly(RuleId::R7, &pref, ioe::FOR_SITE, "preference");
            self.exactly(RuleId::R7, &pref, ioe::HAS_PREFERENCE_VALUE, "preference");
        }
    }
}

/// Checks the structural rules R1 to R7. Violations are data: the report
/// lists them in (rule, focus node, message) order.
pub fn validate(graph: &Graph, vocab: &Vocabulary) -> ValidationReport {
    let mut checker = Checker {
        graph,
        vocab,
        out: Vec::new(),
    };
    checker.smart_objects_include_systems();
    checker.rights();
    checker.agent_relations();
    checker.role_windows();
    checker.transferability_flags();
    checker.preferences();
    let mut violations = checker.out;
    violations.sort();
    violations.dedup();
    let valid = violations.iter().all(|v| v.severity != Severity::Error);
    ValidationReport { violations, valid }
}
