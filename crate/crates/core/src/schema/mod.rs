//! The SemIoE vocabulary, RDFS-lite inference over it and structural
//! validation of instance data.

mod validation;
pub mod vocab;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::OnceLock;

use crate::store::Graph;
use crate::term::{Iri, Term, Triple};
use crate::turtle::{parse_turtle, PrefixMap};

pub use validation::{validate, RuleId, Severity, ValidationReport, Violation};
use vocab::{owl, rdf, rdfs};

/// Turtle source of the bundled vocabulary.
pub const ONTOLOGY_TTL: &str = include_str!("../../ontology/semioe.ttl");

/// Named classes and properties plus the subclass/subproperty axioms used
/// for inference. Immutable once built.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Vocabulary {
    classes: BTreeSet<Iri>,
    object_properties: BTreeSet<Iri>,
    data_properties: BTreeSet<Iri>,
    subclass_axioms: BTreeSet<(Iri, Iri)>,
    subproperty_axioms: BTreeSet<(Iri, Iri)>,
    superclasses: BTreeMap<Iri, BTreeSet<Iri>>,
    subclasses: BTreeMap<Iri, BTreeSet<Iri>>,
    superproperties: BTreeMap<Iri, BTreeSet<Iri>>,
}

fn iris_typed(graph: &Graph, class: &'static str) -> BTreeSet<Iri> {
    graph
        .subjects(
            &Iri::from_static(rdf::TYPE),
            &Term::Iri(Iri::from_static(class)),
        )
        .into_iter()
        .filter_map(|t| t.as_iri().cloned())
        .collect()
}

fn iri_pairs(graph: &Graph, predicate: &'static str) -> BTreeSet<(Iri, Iri)> {
    graph
        .match_pattern(None, Some(&Term::Iri(Iri::from_static(predicate))), None)
        .into_iter()
        .filter_map(|t| Some((t.subject.as_iri()?.clone(), t.object.as_iri()?.clone())))
        .collect()
}

/// Reflexive-transitive closure of `pairs`, keyed by every node mentioned.
fn closure(pairs: &BTreeSet<(Iri, Iri)>) -> BTreeMap<Iri, BTreeSet<Iri>> {
    let mut direct: BTreeMap<&Iri, Vec<&Iri>> = BTreeMap::new();
    for (sub, sup) in pairs {
        direct.entry(sub).or_default().push(sup);
        direct.entry(sup).or_default();
    }
    direct
        .keys()
        .map(|&start| {
            let mut seen = BTreeSet::from([start.clone()]);
            let mut queue = VecDeque::from([start]);
            while let Some(node) = queue.pop_front() {
                for &next in direct.get(node).into_iter().flatten() {
                    if seen.insert(next.clone()) {
                        queue.push_back(next);
                    }
                }
            }
            (start.clone(), seen)
        })
        .collect()
}

fn invert(map: &BTreeMap<Iri, BTreeSet<Iri>>) -> BTreeMap<Iri, BTreeSet<Iri>> {
    let mut out: BTreeMap<Iri, BTreeSet<Iri>> = BTreeMap::new();
    for (sub, sups) in map {
        for sup in sups {
            out.entry(sup.clone()).or_default().insert(sub.clone());
        }
    }
    out
}

impl Vocabulary {
    /// The bundled SemIoE vocabulary, parsed once.
    pub fn bundled() -> &'static Vocabulary {
        static BUNDLED: OnceLock<Vocabulary> = OnceLock::new();
        BUNDLED.get_or_init(|| {
            let doc = parse_turtle(ONTOLOGY_TTL, Some(&PrefixMap::bundled()))
                .expect("bundled ontology parses");
            let graph = doc.to_graph().expect("bundled ontology is well-formed");
            Vocabulary::from_graph(&graph)
        })
    }

    /// Reads declarations (`owl:Class`, `owl:ObjectProperty`,
    /// `owl:DatatypeProperty`) and `rdfs:subClassOf`/`rdfs:subPropertyOf`
    /// axioms from an ontology graph.
    pub fn from_graph(graph: &Graph) -> Self {
        let subclass_axioms = iri_pairs(graph, rdfs::SUB_CLASS_OF);
        let subproperty_axioms = iri_pairs(graph, rdfs::SUB_PROPERTY_OF);
        let superclasses = closure(&subclass_axioms);
        let subclasses = invert(&superclasses);
        let superproperties = closure(&subproperty_axioms);
        Self {
            classes: iris_typed(graph, owl::CLASS),
            object_properties: iris_typed(graph, owl::OBJECT_PROPERTY),
            data_properties: iris_typed(graph, owl::DATATYPE_PROPERTY),
            subclass_axioms,
            subproperty_axioms,
            superclasses,
            subclasses,
            superproperties,
        }
    }

    pub fn classes(&self) -> &BTreeSet<Iri> {
        &self.classes
    }

    pub fn object_properties(&self) -> &BTreeSet<Iri> {
        &self.object_properties
    }

    pub fn data_properties(&self) -> &BTreeSet<Iri> {
        &self.data_properties
    }

    pub fn subclass_axioms(&self) -> &BTreeSet<(Iri, Iri)> {
        &self.subclass_axioms
    }

    pub fn subproperty_axioms(&self) -> &BTreeSet<(Iri, Iri)> {
        &self.subproperty_axioms
    }

    /// `class` and all its superclasses.
    pub fn superclasses_of(&self, class: &Iri) -> BTreeSet<Iri> {
        self.superclasses
            .get(class)
            .cloned()
            .unwrap_or_else(|| BTreeSet::from([class.clone()]))
    }

    /// `class` and all its subclasses.
    pub fn subclasses_of(&self, class: &Iri) -> BTreeSet<Iri> {
        self.subclasses
            .get(class)
            .cloned()
            .unwrap_or_else(|| BTreeSet::from([class.clone()]))
    }

    pub fn is_subclass_of(&self, sub: &Iri, sup: &Iri) -> bool {
        sub == sup || self.superclasses.get(sub).is_some_and(|s| s.contains(sup))
    }

    /// `property` and every property it specializes.
    pub fn superproperties_of(&self, property: &Iri) -> BTreeSet<Iri> {
        self.superproperties
            .get(property)
            .cloned()
            .unwrap_or_else(|| BTreeSet::from([property.clone()]))
    }

    /// Asserted classes of `node` plus all their superclasses.
    pub fn inferred_types(&self, graph: &Graph, node: &Term) -> BTreeSet<Iri> {
        graph
            .objects(node, &Iri::from_static(rdf::TYPE))
            .iter()
            .filter_map(Term::as_iri)
            .flat_map(|class| self.superclasses_of(class))
            .collect()
    }

    pub fn has_type(&self, graph: &Graph, node: &Term, class: &Iri) -> bool {
        graph
            .objects(node, &Iri::from_static(rdf::TYPE))
            .iter()
            .filter_map(Term::as_iri)
            .any(|asserted| self.is_subclass_of(asserted, class))
    }

    /// Nodes whose inferred types include `class`, in term order.
    pub fn instances_of(&self, graph: &Graph, class: &Iri) -> Vec<Term> {
        let rdf_type = Iri::from_static(rdf::TYPE);
        let found: BTreeSet<Term> = self
            .subclasses_of(class)
            .into_iter()
            .flat_map(|sub| graph.subjects(&rdf_type, &Term::Iri(sub)))
            .collect();
        found.into_iter().collect()
    }

    /// Adds every `rdf:type` triple implied by the subclass closure and every
    /// triple implied by the subproperty closure. Returns the number of
    /// triples added; a second application adds none.
    pub fn materialize(&self, graph: &mut Graph) -> usize {
        let mut derived = Vec::new();
        for (sub, sups) in &self.superproperties {
            let sub_term = Term::Iri(sub.clone());
            for t in graph.match_pattern(None, Some(&sub_term), None) {
                for sup in sups.iter().filter(|s| *s != sub) {
                    derived.push(Triple {
                        subject: t.subject.clone(),
                        predicate: Term::Iri(sup.clone()),
                        object: t.object.clone(),
                    });
                }
            }
        }
        let mut added = graph
            .extend(derived)
            .expect("derived triples are well-formed");

        let rdf_type = Term::Iri(Iri::from_static(rdf::TYPE));
        let mut derived = Vec::new();
        for t in graph.match_pattern(None, Some(&rdf_type), None) {
            let Some(class) = t.object.as_iri() else {
                continue;
            };
            for sup in self.superclasses_of(class) {
                if &sup != class {
                    derived.push(Triple {
                        subject: t.subject.clone(),
                        predicate: rdf_type.clone(),
                        object: Term::Iri(sup),
                    });
                }
            }
        }
        added += graph
            .extend(derived)
            .expect("derived triples are well-formed");
        added
    }

    /// A closure-materialized copy of `graph`.
    pub fn materialized(&self, graph: &Graph) -> Graph {
        let mut out = graph.clone();
        self.materialize(&mut out);
        out
    }
}
