use crate::schema::vocab::{rdf, xsd};
use crate::term::{Iri, Literal, Term, Triple};

use super::lexer::{Lexer, Tok, Token};
use super::{is_absolute_iri, PrefixMap, TurtleDocument, TurtleError};

/// Cursor over a token vector, shared with the query front-end.
pub(crate) struct Tokens {
    tokens: Vec<Token>,
    pos: usize,
}

impl Tokens {
    pub(crate) fn lex(source: &str) -> Result<Self, TurtleError> {
        Ok(Self {
            tokens: Lexer::new(source).tokenize()?,
            pos: 0,
        })
    }

    pub(crate) fn peek(&self) -> &Token {
        &self.tokens[self.pos.min(self.tokens.len() - 1)]
    }

    pub(crate) fn peek_tok(&self) -> &Tok {
        &self.peek().tok
    }

    pub(crate) fn next(&mut self) -> Token {
        let token = self.peek().clone();
        if self.pos < self.tokens.len() {
            self.pos += 1;
        }
        token
    }

    pub(crate) fn error_at(token: &Token, expected: &str) -> TurtleError {
        TurtleError::Syntax {
            line: token.line,
            column: token.column,
            expected: expected.to_string(),
            found: token.tok.to_string(),
        }
    }

    pub(crate) fn unexpected(&self, expected: &str) -> TurtleError {
        Self::error_at(self.peek(), expected)
    }

    pub(crate) fn expect(&mut self, tok: Tok) -> Result<Token, TurtleError> {
        if *self.peek_tok() == tok {
            Ok(self.next())
        } else {
            Err(self.unexpected(&tok.to_string()))
        }
    }

    pub(crate) fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek_tok() == tok {
            self.next();
            true
        } else {
            false
        }
    }

    /// Case-insensitive keyword match on a bare word.
    pub(crate) fn eat_keyword(&mut self, keyword: &str) -> bool {
        if matches!(self.peek_tok(), Tok::Word(w) if w.eq_ignore_ascii_case(keyword)) {
            self.next();
            true
        } else {
            false
        }
    }
}

fn make_iri(token: &Token, value: String) -> Result<Iri, TurtleError> {
    Iri::new(value).map_err(|source| TurtleError::InvalidTerm {
        line: token.line,
        column: token.column,
        source,
    })
}

fn resolve(prefixes: &PrefixMap, reference: &str) -> String {
    match prefixes.base() {
        Some(base) if !is_absolute_iri(reference) => {
            let base = base.as_str();
            if reference.is_empty() {
                base.to_string()
            } else if reference.starts_with('#') {
                let stem = base.split('#').next().unwrap_or(base);
                format!("{stem}{reference}")
            } else {
                let stem = match base.rfind('/') {
                    Some(idx) => &base[..=idx],
                    None => base,
                };
                format!("{stem}{reference}")
            }
        }
        _ => reference.to_string(),
    }
}

/// Reads an IRI-valued token: `<...>` or a prefixed name.
pub(crate) fn read_iri(
    tokens: &mut Tokens,
    prefixes: &PrefixMap,
) -> Result<Option<Iri>, TurtleError> {
    let token = tokens.peek().clone();
    let value = match &token.tok {
        Tok::IriRef(reference) => resolve(prefixes, reference),
        Tok::PName { prefix, local } => {
            prefixes
                .expand(prefix, local)
                .ok_or_else(|| TurtleError::UnknownPrefix {
                    prefix: prefix.clone(),
                    line: token.line,
                    column: token.column,
                })?
        }
        _ => return Ok(None),
    };
    tokens.next();
    make_iri(&token, value).map(Some)
}

/// Reads a literal: string (with optional language or datatype), number or
/// boolean keyword.
pub(crate) fn read_literal(
    tokens: &mut Tokens,
    prefixes: &PrefixMap,
) -> Result<Option<Literal>, TurtleError> {
    let literal = match tokens.peek_tok().clone() {
        Tok::Str(lexical) => {
            tokens.next();
            match tokens.peek_tok().clone() {
                Tok::At(lang) => {
                    tokens.next();
                    Literal::lang_tagged(lexical, lang)
                }
                Tok::Caret2 => {
                    tokens.next();
                    let datatype = read_iri(tokens, prefixes)?
                        .ok_or_else(|| tokens.unexpected("datatype IRI"))?;
                    Literal::typed(lexical, datatype)
                }
                _ => Literal::simple(lexical),
            }
        }
        Tok::Integer(text) => {
            tokens.next();
            Literal::typed(text, Iri::from_static(xsd::INTEGER))
        }
        Tok::Decimal(text) => {
            tokens.next();
            Literal::typed(text, Iri::from_static(xsd::DECIMAL))
        }
        Tok::Word(w) if w == "true" || w == "false" => {
            tokens.next();
            Literal::typed(w, Iri::from_static(xsd::BOOLEAN))
        }
        _ => return Ok(None),
    };
    Ok(Some(literal))
}

pub(crate) fn read_blank(tokens: &mut Tokens) -> Option<Term> {
    if let Tok::Blank(label) = tokens.peek_tok().clone() {
        tokens.next();
        Some(Term::BlankNode(label))
    } else {
        None
    }
}

struct TurtleParser {
    tokens: Tokens,
    prefixes: PrefixMap,
    triples: Vec<Triple>,
}

impl TurtleParser {
    fn document(mut self) -> Result<TurtleDocument, TurtleError> {
        loop {
            match self.tokens.peek_tok().clone() {
                Tok::Eof => break,
                Tok::At(directive) => self.directive(&directive)?,
                _ => self.triples_statement()?,
            }
        }
        Ok(TurtleDocument {
            prefixes: self.prefixes,
            triples: self.triples,
        })
    }

    fn directive(&mut self, directive: &str) -> Result<(), TurtleError> {
        let at = self.tokens.next();
        match directive {
            "prefix" => {
                let label_token = self.tokens.next();
                let label = match &label_token.tok {
                    Tok::PName { prefix, local } if local.is_empty() => prefix.clone(),
                    _ => return Err(Tokens::error_at(&label_token, "prefix label ending in ':'")),
                };
                let ns_token = self.tokens.next();
                let Tok::IriRef(reference) = &ns_token.tok else {
                    return Err(Tokens::error_at(
                        &ns_token,
                        "namespace IRI in angle brackets",
                    ));
                };
                let namespace = resolve(&self.prefixes, reference);
                self.prefixes.insert(&label, &namespace)?;
            }
            "base" => {
                let token = self.tokens.next();
                let Tok::IriRef(reference) = &token.tok else {
                    return Err(Tokens::error_at(&token, "base IRI in angle brackets"));
                };
                let base = resolve(&self.prefixes, reference);
                self.prefixes.set_base(Some(make_iri(&token, base)?));
            }
            _ => return Err(Tokens::error_at(&at, "'@prefix' or '@base'")),
        }
        self.tokens.expect(Tok::Dot)?;
        Ok(())
    }

    fn subject(&mut self) -> Result<Term, TurtleError> {
        if let Some(iri) = read_iri(&mut self.tokens, &self.prefixes)? {
            return Ok(Term::Iri(iri));
        }
        read_blank(&mut self.tokens)
            .ok_or_else(|| self.tokens.unexpected("subject (IRI or blank node)"))
    }

    fn verb(&mut self) -> Result<Term, TurtleError> {
        if matches!(self.tokens.peek_tok(), Tok::Word(w) if w == "a") {
            self.tokens.next();
            return Ok(Term::Iri(Iri::from_static(rdf::TYPE)));
        }
        read_iri(&mut self.tokens, &self.prefixes)?
            .map(Term::Iri)
            .ok_or_else(|| self.tokens.unexpected("predicate (IRI or 'a')"))
    }

    fn object(&mut self) -> Result<Term, TurtleError> {
        if let Some(iri) = read_iri(&mut self.tokens, &self.prefixes)? {
            return Ok(Term::Iri(iri));
        }
        if let Some(blank) = read_blank(&mut self.tokens) {
            return Ok(blank);
        }
        read_literal(&mut self.tokens, &self.prefixes)?
            .map(Term::Literal)
            .ok_or_else(|| {
                self.tokens
                    .unexpected("object (IRI, blank node or literal)")
            })
    }

    fn triples_statement(&mut self) -> Result<(), TurtleError> {
        let subject = self.subject()?;
        loop {
            let predicate = self.verb()?;
            loop {
                let object = self.object()?;
                self.triples.push(Triple {
                    subject: subject.clone(),
                    predicate: predicate.clone(),
                    object,
                });
                if !self.tokens.eat(&Tok::Comma) {
                    break;
                }
            }
            if !self.tokens.eat(&Tok::Semi) {
                break;
            }
            // Trailing ';' before the terminator is allowed.
            while self.tokens.eat(&Tok::Semi) {}
            if *self.tokens.peek_tok() == Tok::Dot {
                break;
            }
        }
        self.tokens.expect(Tok::Dot).map(|_| ())
    }
}

/// Parses a Turtle document. `external` prefixes are visible to the source
/// and carried into the resulting document; in-source declarations win.
pub fn parse_turtle(
    source: &str,
    external: Option<&PrefixMap>,
) -> Result<TurtleDocument, TurtleError> {
    let parser = TurtleParser {
        tokens: Tokens::lex(source)?,
        prefixes: external.cloned().unwrap_or_default(),
        triples: Vec::new(),
    };
    parser.document()
}

/// Parses a single term written in Turtle syntax, e.g. `:john_doe`,
/// `<http://example.org/x>` or `"21.0"^^xsd:decimal`.
pub fn parse_term(text: &str, prefixes: &PrefixMap) -> Result<Term, TurtleError> {
    let mut tokens = Tokens::lex(text)?;
    let term = if let Some(iri) = read_iri(&mut tokens, prefixes)? {
        Term::Iri(iri)
    } else if let Some(blank) = read_blank(&mut tokens) {
        blank
    } else if let Some(lit) = read_literal(&mut tokens, prefixes)? {
        Term::Literal(lit)
    } else {
        return Err(tokens.unexpected("a term"));
    };
    tokens.expect(Tok::Eof)?;
    Ok(term)
}

/// Parses an IRI given as a prefixed name, as `<...>`, or as a bare
/// absolute IRI whose scheme is not a bound prefix.
pub fn parse_iri(text: &str, prefixes: &PrefixMap) -> Result<Iri, TurtleError> {
    let text = text.trim();
    if let Some((scheme, _)) = text.split_once(':') {
        if prefixes.get(scheme).is_none() && !text.starts_with('<') && is_absolute_iri(text) {
            return Iri::new(text).map_err(|source| TurtleError::InvalidTerm {
                line: 1,
                column: 1,
                source,
            });
        }
    }
    let mut tokens = Tokens::lex(text)?;
    let iri = read_iri(&mut tokens, prefixes)?.ok_or_else(|| tokens.unexpected("an IRI"))?;
    tokens.expect(Tok::Eof)?;
    Ok(iri)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::vocab::ioe;

    fn parse(src: &str) -> Result<TurtleDocument, TurtleError> {
        parse_turtle(src, Some(&PrefixMap::bundled()))
    }

    #[test]
    fn object_list_expands_to_two_triples() {
        let doc = parse(":a :p :b , :c .").unwrap();
        assert_eq!(doc.triples.len(), 2);
        assert_eq!(doc.triples[0].subject, doc.triples[1].subject);
        assert_eq!(doc.triples[0].predicate, doc.triples[1].predicate);
    }

    #[test]
    fn a_keyword_is_rdf_type() {
        let doc = parse(":x a ioe:Site .").unwrap();
        assert_eq!(doc.triples[0].predicate, Term::iri(rdf::TYPE).unwrap());
        assert_eq!(doc.triples[0].object, Term::iri(ioe::SITE).unwrap());
    }

    #[test]
    fn literal_shorthand_datatypes() {
        let doc = parse(":x :p true , 42 , -1.5 , \"s\" , \"t\"@EN , \"u\"^^xsd:token .").unwrap();
        let dts: Vec<String> = doc
            .triples
            .iter()
            .map(|t| {
                t.object
                    .as_literal()
                    .unwrap()
                    .datatype()
                    .as_str()
                    .to_string()
            })
            .collect();
        assert_eq!(
            dts,
            vec![
                xsd::BOOLEAN.to_string(),
                xsd::INTEGER.to_string(),
                xsd::DECIMAL.to_string(),
                xsd::STRING.to_string(),
                rdf::LANG_STRING.to_string(),
                format!("{}token", xsd::NS),
            ]
        );
        assert_eq!(
            doc.triples[4].object.as_literal().unwrap().language(),
            Some("en")
        );
    }

    #[test]
    fn unknown_prefix_is_named() {
        let err = parse(":x nope:p :y .").unwrap_err();
        assert_eq!(
            err,
            TurtleError::UnknownPrefix {
                prefix: "nope".into(),
                line: 1,
                column: 4
            }
        );
    }

    #[test]
    fn unterminated_statement_is_a_syntax_error() {
        let err = parse(":x :p :y").unwrap_err();
        match err {
            TurtleError::Syntax {
                expected, found, ..
            } => {
                assert_eq!(expected, "'.'");
                assert_eq!(found, "end of input");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse(":x :p\n  ( :y ) .").unwrap_err();
        assert!(
            matches!(
                err,
                TurtleError::Syntax {
                    line: 2,
                    column: 3,
                    ..
                }
            ),
            "{err:?}"
        );
    }

    #[test]
    fn out_of_subset_constructs_are_rejected() {
        for src in [
            ":x :p [ :q :r ] .",
            ":x :p ( :a :b ) .",
            ":x :p \"\"\"long\"\"\" .",
            "PREFIX ex: <http://e/>\n:x :p :y .",
            ":x :p 1e3 .",
        ] {
            assert!(parse(src).is_err(), "accepted {src}");
        }
    }

    #[test]
    fn prefix_redeclaration_last_wins() {
        let doc = parse_turtle(
            "@prefix e: <http://one/> . @prefix e: <http://two/> . e:a e:b e:c .",
            None,
        )
        .unwrap();
        assert_eq!(doc.triples[0].subject, Term::iri("http://two/a").unwrap());
        assert_eq!(doc.prefixes.get("e").unwrap().as_str(), "http://two/");
    }

    #[test]
    fn base_resolution() {
        let doc = parse_turtle(
            "@base <http://e.org/dir/doc> . <x> <#p> <http://abs/y> .",
            None,
        )
        .unwrap();
        assert_eq!(
            doc.triples[0].subject,
            Term::iri("http://e.org/dir/x").unwrap()
        );
        assert_eq!(
            doc.triples[0].predicate,
            Term::iri("http://e.org/dir/doc#p").unwrap()
        );
    }

    #[test]
    fn relative_prefix_namespace_rejected() {
        assert!(matches!(
            parse_turtle("@prefix e: <rel/> .", None),
            Err(TurtleError::RelativeNamespace { .. })
        ));
    }

    #[test]
    fn term_and_iri_helpers() {
        let p = PrefixMap::bundled();
        assert_eq!(
            parse_term("\"21.0\"^^xsd:decimal", &p).unwrap(),
            Term::Literal(Literal::typed("21.0", Iri::from_static(xsd::DECIMAL)))
        );
        assert_eq!(parse_iri("ioe:Site", &p).unwrap().as_str(), ioe::SITE);
        assert_eq!(
            parse_iri("http://x.org/a", &p).unwrap().as_str(),
            "http://x.org/a"
        );
        assert_eq!(parse_iri("<urn:x>", &p).unwrap().as_str(), "urn:x");
        assert!(parse_iri("\"lit\"", &p).is_err());
        assert!(parse_iri(":a :b", &p).is_err());
    }
}
