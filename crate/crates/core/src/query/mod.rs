//! Conjunctive query evaluation: basic graph patterns, projection and
//! `MINUS`, plus the entity-level lookups the services are built on.

mod entities;
pub mod listings;
mod sparql;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::store::Graph;
use crate::term::{Iri, Term};
use crate::turtle::TurtleError;

pub use entities::{
    select_role, Entities, MembershipView, PreferenceView, RightScope, RightView, RoleCandidate,
};
pub use sparql::parse_query;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("query has an empty WHERE group")]
    EmptyWhere,
    #[error("MINUS group is empty")]
    EmptyMinus,
    #[error("projected variable ?{0} does not occur in the WHERE group")]
    UnboundProjection(String),
    #[error("pattern predicate must be an IRI or a variable, found {0}")]
    InvalidPredicate(String),
    #[error("query syntax: {0}")]
    Syntax(#[from] TurtleError),
    #[error("{node} has {count} values for <{property}> where one was expected")]
    Ambiguous {
        node: String,
        property: String,
        count: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Variable(String);

impl Variable {
    pub fn new(name: impl Into<String>) -> Self {
        Self(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PatternTerm {
    Term(Term),
    Var(Variable),
}

impl PatternTerm {
    pub fn var(name: &str) -> Self {
        PatternTerm::Var(Variable::new(name))
    }

    fn as_var(&self) -> Option<&Variable> {
        match self {
            PatternTerm::Var(v) => Some(v),
            PatternTerm::Term(_) => None,
        }
    }
}

impl From<Term> for PatternTerm {
    fn from(term: Term) -> Self {
        PatternTerm::Term(term)
    }
}

impl From<Iri> for PatternTerm {
    fn from(iri: Iri) -> Self {
        PatternTerm::Term(Term::Iri(iri))
    }
}

impl From<&Iri> for PatternTerm {
    fn from(iri: &Iri) -> Self {
        PatternTerm::Term(Term::Iri(iri.clone()))
    }
}

impl From<Variable> for PatternTerm {
    fn from(var: Variable) -> Self {
        PatternTerm::Var(var)
    }
}

impl fmt::Display for PatternTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternTerm::Term(t) => t.fmt(f),
            PatternTerm::Var(v) => v.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TriplePattern {
    pub subject: PatternTerm,
    pub predicate: PatternTerm,
    pub object: PatternTerm,
}

impl TriplePattern {
    pub fn new(
        subject: impl Into<PatternTerm>,
        predicate: impl Into<PatternTerm>,
        object: impl Into<PatternTerm>,
    ) -> Self {
        Self {
            subject: subject.into(),
            predicate: predicate.into(),
            object: object.into(),
        }
    }

    fn positions(&self) -> [&PatternTerm; 3] {
        [&self.subject, &self.predicate, &self.object]
    }

    pub fn variables(&self) -> impl Iterator<Item = &Variable> {
        self.positions().into_iter().filter_map(PatternTerm::as_var)
    }
}

impl fmt::Display for TriplePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

/// `SELECT projection WHERE { where MINUS { minus } }`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    projection: Vec<Variable>,
    where_group: Vec<TriplePattern>,
    minus: Option<Vec<TriplePattern>>,
}

fn variables_in(patterns: &[TriplePattern]) -> Vec<Variable> {
    let mut seen = BTreeSet::new();
    patterns
        .iter()
        .flat_map(TriplePattern::variables)
        .filter(|v| seen.insert((*v).clone()))
        .cloned()
        .collect()
}

fn check_predicates(patterns: &[TriplePattern]) -> Result<(), QueryError> {
    for p in patterns {
        if let PatternTerm::Term(t) = &p.predicate {
            if !matches!(t, Term::Iri(_)) {
                return Err(QueryError::InvalidPredicate(t.to_string()));
            }
        }
    }
    Ok(())
}

impl Query {
    pub fn new(
        projection: Vec<Variable>,
        where_group: Vec<TriplePattern>,
        minus: Option<Vec<TriplePattern>>,
    ) -> Result<Self, QueryError> {
        if where_group.is_empty() {
            return Err(QueryError::EmptyWhere);
        }
        if minus.as_ref().is_some_and(Vec::is_empty) {
            return Err(QueryError::EmptyMinus);
        }
        check_predicates(&where_group)?;
        check_predicates(minus.as_deref().unwrap_or_default())?;
        let bound: HashSet<Variable> = variables_in(&where_group).into_iter().collect();
        if let Some(v) = projection.iter().find(|v| !bound.contains(*v)) {
            return Err(QueryError::UnboundProjection(v.name().to_string()));
        }
        Ok(Self {
            projection,
            where_group,
            minus,
        })
    }

    /// Projects every WHERE variable, in order of first occurrence.
    pub fn select_all(
        where_group: Vec<TriplePattern>,
        minus: Option<Vec<TriplePattern>>,
    ) -> Result<Self, QueryError> {
        let projection = variables_in(&where_group);
        Self::new(projection, where_group, minus)
    }

    pub fn projection(&self) -> &[Variable] {
        &self.projection
    }

    pub fn where_group(&self) -> &[TriplePattern] {
        &self.where_group
    }

    pub fn minus(&self) -> Option<&[TriplePattern]> {
        self.minus.as_deref()
    }
}

/// Query results: one row per distinct projected solution, sorted by the
/// term order column by column.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BindingSet {
    variables: Vec<Variable>,
    rows: Vec<Vec<Term>>,
}

impl BindingSet {
    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn rows(&self) -> &[Vec<Term>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Values of one variable, row by row.
    pub fn column(&self, name: &str) -> Vec<&Term> {
        match self.variables.iter().position(|v| v.name() == name) {
            Some(idx) => self.rows.iter().map(|row| &row[idx]).collect(),
            None => Vec::new(),
        }
    }

    /// IRI values of one variable, skipping non-IRI bindings.
    pub fn iris(&self, name: &str) -> Vec<Iri> {
        self.column(name)
            .into_iter()
            .filter_map(|t| t.as_iri().cloned())
            .collect()
    }

    pub fn to_maps(&self) -> Vec<BTreeMap<String, Term>> {
        self.rows
            .iter()
            .map(|row| {
                self.variables
                    .iter()
                    .zip(row)
                    .map(|(v, t)| (v.name().to_string(), t.clone()))
                    .collect()
            })
            .collect()
    }
}

/// Solutions of a basic graph pattern as slot vectors over `vars`.
struct Solver<'g> {
    graph: &'g Graph,
    patterns: &'g [TriplePattern],
    slots: BTreeMap<&'g Variable, usize>,
}

type Row = Vec<Option<Term>>;

impl<'g> Solver<'g> {
    fn new(graph: &'g Graph, patterns: &'g [TriplePattern]) -> Self {
        let mut slots = BTreeMap::new();
        for v in patterns.iter().flat_map(TriplePattern::variables) {
            let next = slots.len();
            slots.entry(v).or_insert(next);
        }
        Self {
            graph,
            patterns,
            slots,
        }
    }

    fn resolve<'a>(&self, position: &'a PatternTerm, row: &'a Row) -> Option<&'a Term> {
        match position {
            PatternTerm::Term(t) => Some(t),
            PatternTerm::Var(v) => row[self.slots[v]].as_ref(),
        }
    }

    fn estimate(&self, pattern: &TriplePattern, row: &Row) -> usize {
        let [s, p, o] = pattern.positions().map(|pos| self.resolve(pos, row));
        self.graph.count_pattern(s, p, o)
    }

    fn solve(&self) -> Vec<Row> {
        let mut out = Vec::new();
        let remaining: Vec<usize> = (0..self.patterns.len()).collect();
        self.extend(vec![None; self.slots.len()], remaining, &mut out);
        out
    }

    fn extend(&self, row: Row, remaining: Vec<usize>, out: &mut Vec<Row>) {
        // Most selective pattern first under the current bindings.
        let Some((pick, _)) = remaining
            .iter()
            .enumerate()
            .min_by_key(|(_, &idx)| self.estimate(&self.patterns[idx], &row))
        else {
            out.push(row);
            return;
        };
        let pattern = &self.patterns[remaining[pick]];
        let mut rest = remaining.clone();
        rest.remove(pick);

        let [s, p, o] = pattern
            .positions()
            .map(|pos| self.resolve(pos, &row).cloned());
        for triple in self.graph.match_pattern(s.as_ref(), p.as_ref(), o.as_ref()) {
            let mut next = row.clone();
            let values = [&triple.subject, &triple.predicate, &triple.object];
            let consistent = pattern
                .positions()
                .into_iter()
                .zip(values)
                .all(|(pos, value)| match pos {
                    PatternTerm::Term(_) => true,
                    PatternTerm::Var(v) => {
                        let slot = &mut next[self.slots[v]];
                        match slot {
                            Some(bound) => bound == value,
                            None => {
                                *slot = Some(value.clone());
                                true
                            }
                        }
                    }
                });
            if consistent {
                self.extend(next, rest.clone(), out);
            }
        }
    }
}

/// Evaluates `query` over `graph` exactly as given: no inference is applied
/// here (see [`crate::KnowledgeBase`] for closure-backed evaluation).
pub fn evaluate(graph: &Graph, query: &Query) -> BindingSet {
    let main = Solver::new(graph, &query.where_group);
    let mut solutions = main.solve();

    if let Some(minus) = &query.minus {
        let excluded = Solver::new(graph, minus);
        let shared: Vec<(usize, usize)> = main
            .slots
            .iter()
            .filter_map(|(v, &slot)| excluded.slots.get(v).map(|&other| (slot, other)))
            .collect();
        if !shared.is_empty() {
            let keys: HashSet<Vec<Term>> = excluded
                .solve()
                .into_iter()
                .map(|row| {
                    shared
                        .iter()
                        .map(|&(_, other)| row[other].clone().expect("BGP binds all"))
                        .collect()
                })
                .collect();
            solutions.retain(|row| {
                let key: Vec<Term> = shared
                    .iter()
                    .map(|&(slot, _)| row[slot].clone().expect("BGP binds all"))
                    .collect();
                !keys.contains(&key)
            });
        }
    }

    let projected: BTreeSet<Vec<Term>> = solutions
        .into_iter()
        .map(|row| {
            query
                .projection
                .iter()
                .map(|v| {
                    row[main.slots[v]]
                        .clone()
                        .expect("projected variables are bound")
                })
                .collect()
        })
        .collect();
    BindingSet {
        variables: query.projection.clone(),
        rows: projected.into_iter().collect(),
    }
}
