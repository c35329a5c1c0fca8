//! In-memory triple store with SPO, POS and OSP indexes.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, RwLock, RwLockReadGuard, RwLockWriteGuard};

use thiserror::Error;

use crate::term::{Iri, Term, TermError, Triple};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StoreError {
    #[error("malformed triple: {0}")]
    Malformed(#[from] TermError),
}

type Index = BTreeMap<Term, BTreeMap<Term, BTreeSet<Term>>>;

fn index_insert(index: &mut Index, a: &Term, b: &Term, c: &Term) -> bool {
    index
        .entry(a.clone())
        .or_default()
        .entry(b.clone())
        .or_default()
        .insert(c.clone())
}

fn index_remove(index: &mut Index, a: &Term, b: &Term, c: &Term) -> bool {
    let Some(second) = index.get_mut(a) else {
        return false;
    };
    let Some(third) = second.get_mut(b) else {
        return false;
    };
    let removed = third.remove(c);
    if third.is_empty() {
        second.remove(b);
        if second.is_empty() {
            index.remove(a);
        }
    }
    removed
}

/// A set of triples indexed three ways. Pattern lookups always return
/// triples sorted by (subject, predicate, object) under the term order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    spo: Index,
    pos: Index,
    osp: Index,
    len: usize,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_triples(triples: impl IntoIterator<Item = Triple>) -> Result<Self, StoreError> {
        let mut graph = Self::new();
        graph.extend(triples)?;
        Ok(graph)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Inserts a triple, returning `true` when it was not present before.
    pub fn insert(&mut self, triple: Triple) -> Result<bool, StoreError> {
        triple.check()?;
        let Triple {
            subject: s,
            predicate: p,
            object: o,
        } = &triple;
        if !index_insert(&mut self.spo, s, p, o) {
            return Ok(false);
        }
        index_insert(&mut self.pos, p, o, s);
        index_insert(&mut self.osp, o, s, p);
        self.len += 1;
        Ok(true)
    }

    /// Inserts every triple; returns how many were new. Stops at the first
    /// malformed triple, leaving earlier insertions in place.
    pub fn extend(
        &mut self,
        triples: impl IntoIterator<Item = Triple>,
    ) -> Result<usize, StoreError> {
        let mut added = 0;
        for triple in triples {
            if self.insert(triple)? {
                added += 1;
            }
        }
        Ok(added)
    }

    /// Removes a triple, returning whether it was present.
    pub fn remove(&mut self, triple: &Triple) -> bool {
        let Triple {
            subject: s,
            predicate: p,
            object: o,
        } = triple;
        if !index_remove(&mut self.spo, s, p, o) {
            return false;
        }
        index_remove(&mut self.pos, p, o, s);
        index_remove(&mut self.osp, o, s, p);
        self.len -= 1;
        true
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.spo
            .get(&triple.subject)
            .and_then(|po| po.get(&triple.predicate))
            .is_some_and(|objects| objects.contains(&triple.object))
    }

    /// All triples in (subject, predicate, object) order.
    pub fn iter(&self) -> impl Iterator<Item = Triple> + '_ {
        self.spo.iter().flat_map(|(s, po)| {
            po.iter().flat_map(move |(p, objects)| {
                objects.iter().map(move |o| Triple {
                    subject: s.clone(),
                    predicate: p.clone(),
                    object: o.clone(),
                })
            })
        })
    }

    /// Triples agreeing with every bound position, sorted by (s, p, o).
    pub fn match_pattern(
        &self,
        subject: Option<&Term>,
        predicate: Option<&Term>,
        object: Option<&Term>,
    ) -> Vec<Triple> {
        let triple = |s: &Term, p: &Term, o: &Term| Triple {
            subject: s.clone(),
            predicate: p.clone(),
            object: o.clone(),
        };
        let mut out = Vec::new();
        match (subject, predicate, object) {
            (Some(s), Some(p), Some(o)) => {
                let t = triple(s, p, o);
                if self.contains(&t) {
                    out.push(t);
                }
            }
            (Some(s), Some(p), None) => {
                if let Some(objects) = self.spo.get(s).and_then(|po| po.get(p)) {
                    out.extend(objects.iter().map(|o| triple(s, p, o)));
                }
            }
            (Some(s), None, Some(o)) => {
                if let Some(predicates) = self.osp.get(o).and_then(|sp| sp.get(s)) {
                    out.extend(predicates.iter().map(|p| triple(s, p, o)));
                }
            }
            (Some(s), None, None) => {
                if let Some(po) = self.spo.get(s) {
                    for (p, objects) in po {
                        out.extend(objects.iter().map(|o| triple(s, p, o)));
                    }
                }
            }
            (None, Some(p), Some(o)) => {
                if let Some(subjects) = self.pos.get(p).and_then(|os| os.get(o)) {
                    out.extend(subjects.iter().map(|s| triple(s, p, o)));
                }
            }
            (None, Some(p), None) => {
                if let Some(os) = self.pos.get(p) {
                    for (o, subjects) in os {
                        out.extend(subjects.iter().map(|s| triple(s, p, o)));
                    }
                }
                out.sort_unstable();
            }
            (None, None, Some(o)) => {
                if let Some(sp) = self.osp.get(o) {
                    for (s, predicates) in sp {
                        out.extend(predicates.iter().map(|p| triple(s, p, o)));
                    }
                }
            }
            (None, None, None) => out.extend(self.iter()),
        }
        out
    }

    /// Number of triples matching a pattern, without materializing them
    /// when an index answers directly.
    pub fn count_pattern(
        &self,
        subject: Option<&Term>,
        predicate: Option<&Term>,
        object: Option<&Term>,
    ) -> usize {
        match (subject, predicate, object) {
            (None, None, None) => self.len,
            (Some(s), Some(p), None) => self
                .spo
                .get(s)
                .and_then(|po| po.get(p))
                .map_or(0, BTreeSet::len),
            (None, Some(p), Some(o)) => self
                .pos
                .get(p)
                .and_then(|os| os.get(o))
                .map_or(0, BTreeSet::len),
            (Some(s), None, Some(o)) => self
                .osp
                .get(o)
                .and_then(|sp| sp.get(s))
                .map_or(0, BTreeSet::len),
            (Some(s), None, None) => self
                .spo
                .get(s)
                .map_or(0, |po| po.values().map(BTreeSet::len).sum()),
            (None, Some(p), None) => self
                .pos
                .get(p)
                .map_or(0, |os| os.values().map(BTreeSet::len).sum()),
            (None, None, Some(o)) => self
                .osp
                .get(o)
                .map_or(0, |sp| sp.values().map(BTreeSet::len).sum()),
            (Some(_), Some(_), Some(_)) => self.match_pattern(subject, predicate, object).len(),
        }
    }

    /// Objects of `(subject, predicate, ?)`, in term order.
    pub fn objects(&self, subject: &Term, predicate: &Iri) -> Vec<Term> {
        let p = Term::Iri(predicate.clone());
        self.spo
            .get(subject)
            .and_then(|po| po.get(&p))
            .map(|objects| objects.iter().cloned().collect())
            .unwrap_or_default()
    }

    /// Subjects of `(?, predicate, object)`, in term order.
    pub fn subjects(&self, predicate: &Iri, object: &Term) -> Vec<Term> {
        let p = Term::Iri(predicate.clone());
        self.pos
            .get(&p)
            .and_then(|os| os.get(object))
            .map(|subjects| subjects.iter().cloned().collect())
            .unwrap_or_default()
    }

    /// Every distinct term appearing in any position.
    pub fn terms(&self) -> BTreeSet<Term> {
        let mut out: BTreeSet<Term> = self.spo.keys().cloned().collect();
        out.extend(self.pos.keys().cloned());
        out.extend(self.osp.keys().cloned());
        out
    }

    /// Whether the term occurs anywhere in the graph.
    pub fn mentions(&self, term: &Term) -> bool {
        self.spo.contains_key(term) || self.pos.contains_key(term) || self.osp.contains_key(term)
    }
}

impl<'a> IntoIterator for &'a Graph {
    type Item = Triple;
    type IntoIter = Box<dyn Iterator<Item = Triple> + 'a>;

    fn into_iter(self) -> Self::IntoIter {
        Box::new(self.iter())
    }
}

/// A graph shared between threads under a single-writer / multi-reader
/// discipline. Readers see the graph either before or after a write, never
/// during one.
#[derive(Debug, Clone, Default)]
pub struct Store {
    inner: Arc<RwLock<Graph>>,
}

impl Store {
    pub fn new(graph: Graph) -> Self {
        Self {
            inner: Arc::new(RwLock::new(graph)),
        }
    }

    pub fn read(&self) -> RwLockReadGuard<'_, Graph> {
        self.inner
            .read()
            .unwrap_or_else(|poisoned| poisoned.into_inner())
    }

    pub fn write(&self) -> RwLockWriteGuard<'_, Graph> {
        self.inner
            .write()
            .unwrap_or_else(|poisoned| poisoned.into_inner())
    }

    /// Runs `f` with exclusive access; other readers and writers wait.
    pub fn transact<T>(&self, f: impl FnOnce(&mut Graph) -> T) -> T {
        f(&mut self.write())
    }

    /// A point-in-time copy of the graph.
    pub fn snapshot(&self) -> Graph {
        self.read().clone()
    }
}
