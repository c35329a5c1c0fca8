use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::schema::vocab::xsd;
use crate::store::Graph;
use crate::term::{Term, Triple};

use super::{PrefixMap, TurtleDocument};

const INDENT: &str = "    ";

pub(crate) fn render_term(prefixes: &PrefixMap, term: &Term) -> String {
    match term {
        Term::Iri(iri) => prefixes.render_iri(iri),
        Term::BlankNode(label) => format!("_:{label}"),
        Term::Literal(lit) => {
            let mut out = String::with_capacity(lit.lexical().len() + 2);
            out.push('"');
            for c in lit.lexical().chars() {
                match c {
                    '"' => out.push_str("\\\""),
                    '\\' => out.push_str("\\\\"),
                    '\n' => out.push_str("\\n"),
                    '\t' => out.push_str("\\t"),
                    c => out.push(c),
                }
            }
            out.push('"');
            if let Some(lang) = lit.language() {
                out.push('@');
                out.push_str(lang);
            } else if lit.datatype() != xsd::STRING {
                out.push_str("^^");
                out.push_str(&prefixes.render_iri(lit.datatype()));
            }
            out
        }
    }
}

/// Serializes a document: prefix directives sorted by label, then one block
/// per subject in term order with `;`-grouped predicates and `,`-grouped
/// objects. Duplicate triples collapse.
pub fn serialize_turtle(doc: &TurtleDocument) -> String {
    let triples: BTreeSet<&Triple> = doc.triples.iter().collect();
    write_document(&doc.prefixes, triples.into_iter())
}

/// Serializes a graph under the given prefixes.
pub fn serialize_graph(graph: &Graph, prefixes: &PrefixMap) -> String {
    let triples: Vec<Triple> = graph.iter().collect();
    write_document(prefixes, triples.iter())
}

fn write_document<'a>(prefixes: &PrefixMap, sorted: impl Iterator<Item = &'a Triple>) -> String {
    let mut out = String::new();
    if let Some(base) = prefixes.base() {
        let _ = writeln!(out, "@base <{}> .", base.as_str());
    }
    for (label, ns) in prefixes.iter() {
        let _ = writeln!(out, "@prefix {label}: <{}> .", ns.as_str());
    }

    let render = |t: &Term| render_term(prefixes, t);

    let mut current: Option<(&Term, &Term)> = None;
    for triple in sorted {
        match current {
            Some((s, p)) if s == &triple.subject && p == &triple.predicate => {
                out.push_str(" ,\n");
                out.push_str(INDENT);
                out.push_str(INDENT);
            }
            Some((s, _)) if s == &triple.subject => {
                out.push_str(" ;\n");
                out.push_str(INDENT);
                out.push_str(&render(&triple.predicate));
                out.push(' ');
            }
            prev => {
                if prev.is_some() {
                    out.push_str(" .\n");
                }
                out.push('\n');
                out.push_str(&render(&triple.subject));
                out.push(' ');
                out.push_str(&render(&triple.predicate));
                out.push(' ');
            }
        }
        out.push_str(&render(&triple.object));
        current = Some((&triple.subject, &triple.predicate));
    }
    if current.is_some() {
        out.push_str(" .\n");
    }
    out
}
