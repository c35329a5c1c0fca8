//! Random graphs and queries, and an enumerate-and-filter evaluation oracle.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use semioe_core::query::{PatternTerm, TriplePattern, Variable};
use semioe_core::{Graph, Iri, Literal, Query, Term, Triple};

const NODES: usize = 8;
const PREDICATES: usize = 3;

pub fn node(i: usize) -> Term {
    Term::Iri(Iri::new(format!("http://example.org/n{i}")).unwrap())
}

pub fn predicate(i: usize) -> Term {
    Term::Iri(Iri::new(format!("http://example.org/p{i}")).unwrap())
}

pub fn literal(i: usize) -> Term {
    Term::Literal(Literal::simple(format!("l{i}")))
}

pub fn random_object(rng: &mut impl Rng) -> Term {
    if rng.random_bool(0.8) {
        node(rng.random_range(0..NODES))
    } else {
        literal(rng.random_range(0..2))
    }
}

pub fn random_graph(rng: &mut impl Rng) -> Graph {
    let size = rng.random_range(0..=200);
    let mut g = Graph::new();
    for _ in 0..size {
        let t = Triple::new(
            node(rng.random_range(0..NODES)),
            predicate(rng.random_range(0..PREDICATES)),
            random_object(rng),
        )
        .unwrap();
        g.insert(t).unwrap();
    }
    g
}

pub fn position<R: Rng>(
    rng: &mut R,
    vars: &[&str],
    constant: impl FnOnce(&mut R) -> Term,
) -> PatternTerm {
    if rng.random_bool(0.6) {
        PatternTerm::var(vars[rng.random_range(0..vars.len())])
    } else {
        PatternTerm::Term(constant(rng))
    }
}

pub fn random_patterns<R: Rng>(rng: &mut R, vars: &[&str], max: usize) -> Vec<TriplePattern> {
    let count = rng.random_range(1..=max);
    (0..count)
        .map(|_| {
            let s = position(rng, vars, |r| node(r.random_range(0..NODES)));
            let p = position(rng, vars, |r| predicate(r.random_range(0..PREDICATES)));
            let o = position(rng, vars, random_object);
            TriplePattern::new(s, p, o)
        })
        .collect()
}

pub fn vars_of(patterns: &[TriplePattern]) -> Vec<Variable> {
    let set: BTreeSet<Variable> = patterns
        .iter()
        .flat_map(|p| p.variables().cloned())
        .collect();
    set.into_iter().collect()
}

pub fn random_query(rng: &mut impl Rng) -> Query {
    let where_group = random_patterns(rng, &["a", "b", "c"], 3);
    let minus = rng
        .random_bool(0.4)
        .then(|| random_patterns(rng, &["a", "b", "d"], 2));
    let bound = vars_of(&where_group);
    let projection: Vec<Variable> = bound.into_iter().filter(|_| rng.random_bool(0.7)).collect();
    Query::new(projection, where_group, minus).unwrap()
}

pub type Solution = BTreeMap<Variable, Term>;

pub fn instantiate(pos: &PatternTerm, mu: &Solution) -> Term {
    match pos {
        PatternTerm::Term(t) => t.clone(),
        PatternTerm::Var(v) => mu[v].clone(),
    }
}

/// Every assignment of the group's variables to graph terms under which
/// every instantiated pattern is a graph triple.
pub fn brute_solutions(graph: &Graph, patterns: &[TriplePattern]) -> Vec<Solution> {
    let vars = vars_of(patterns);
    let domain: Vec<Term> = graph.terms().into_iter().collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; vars.len()];
    if !vars.is_empty() && domain.is_empty() {
        return out;
    }
    loop {
        let mu: Solution = vars
            .iter()
            .cloned()
            .zip(idx.iter().map(|&i| domain[i].clone()))
            .collect();
        let all = patterns.iter().all(|p| {
            let t = Triple {
                subject: instantiate(&p.subject, &mu),
                predicate: instantiate(&p.predicate, &mu),
                object: instantiate(&p.object, &mu),
            };
            graph.contains(&t)
        });
        if all {
            out.push(mu);
        }
        // Odometer increment.
        let mut k = 0;
        loop {
            if k == idx.len() {
                return out;
            }
            idx[k] += 1;
            if idx[k] < domain.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

pub fn oracle(graph: &Graph, query: &Query) -> Vec<Vec<Term>> {
    let mut solutions = brute_solutions(graph, query.where_group());
    if let Some(minus) = query.minus() {
        let excluded = brute_solutions(graph, minus);
        solutions.retain(|mu| {
            !excluded.iter().any(|nu| {
                let shared: Vec<&Variable> = mu.keys().filter(|v| nu.contains_key(*v)).collect();
                !shared.is_empty() && shared.iter().all(|v| mu[*v] == nu[*v])
            })
        });
    }
    let rows: BTreeSet<Vec<Term>> = solutions
        .iter()
        .map(|mu| query.projection().iter().map(|v| mu[v].clone()).collect())
        .collect();
    rows.into_iter().collect()
}
