//! Text front-end for the query subset:
//! `PREFIX* SELECT [DISTINCT] (?var+ | *) [WHERE] { triples [MINUS { triples }] }`.

use crate::schema::vocab::rdf;
use crate::term::{Iri, Term};
use crate::turtle::lexer::Tok;
use crate::turtle::parser::{read_iri, read_literal, Tokens};
use crate::turtle::PrefixMap;

use super::{PatternTerm, Query, QueryError, TriplePattern, Variable};

struct QueryParser {
    tokens: Tokens,
    prefixes: PrefixMap,
}

impl QueryParser {
    fn prologue(&mut self) -> Result<(), QueryError> {
        while self.tokens.eat_keyword("PREFIX") {
            let token = self.tokens.next();
            let label = match &token.tok {
                Tok::PName { prefix, local } if local.is_empty() => prefix.clone(),
                _ => return Err(Tokens::error_at(&token, "prefix label ending in ':'").into()),
            };
            let token = self.tokens.next();
            let Tok::IriRef(namespace) = &token.tok else {
                return Err(Tokens::error_at(&token, "namespace IRI").into());
            };
            self.prefixes.insert(&label, namespace)?;
        }
        Ok(())
    }

    fn projection(&mut self) -> Result<Option<Vec<Variable>>, QueryError> {
        if !self.tokens.eat_keyword("SELECT") {
            return Err(self.tokens.unexpected("SELECT").into());
        }
        self.tokens.eat_keyword("DISTINCT");
        if self.tokens.eat(&Tok::Star) {
            return Ok(None);
        }
        let mut vars = Vec::new();
        while let Tok::Var(name) = self.tokens.peek_tok().clone() {
            self.tokens.next();
            vars.push(Variable::new(name));
        }
        if vars.is_empty() {
            return Err(self.tokens.unexpected("projected variable or '*'").into());
        }
        Ok(Some(vars))
    }

    fn variable(&mut self) -> Option<PatternTerm> {
        if let Tok::Var(name) = self.tokens.peek_tok().clone() {
            self.tokens.next();
            Some(PatternTerm::Var(Variable::new(name)))
        } else {
            None
        }
    }

    fn node(&mut self, what: &str) -> Result<PatternTerm, QueryError> {
        if let Some(var) = self.variable() {
            return Ok(var);
        }
        if let Some(iri) = read_iri(&mut self.tokens, &self.prefixes)? {
            return Ok(PatternTerm::Term(Term::Iri(iri)));
        }
        Err(self.tokens.unexpected(what).into())
    }

    fn verb(&mut self) -> Result<PatternTerm, QueryError> {
        if self.tokens.eat(&Tok::Word("a".into())) {
            return Ok(Iri::from_static(rdf::TYPE).into());
        }
        self.node("predicate (variable, IRI or 'a')")
    }

    fn object(&mut self) -> Result<PatternTerm, QueryError> {
        if let Some(lit) = read_literal(&mut self.tokens, &self.prefixes)? {
            return Ok(PatternTerm::Term(Term::Literal(lit)));
        }
        self.node("object (variable, IRI or literal)")
    }

    fn same_subject(&mut self, out: &mut Vec<TriplePattern>) -> Result<(), QueryError> {
        let subject = self.node("subject (variable or IRI)")?;
        loop {
            let predicate = self.verb()?;
            loop {
                let object = self.object()?;
                out.push(TriplePattern::new(
                    subject.clone(),
                    predicate.clone(),
                    object,
                ));
                if !self.tokens.eat(&Tok::Comma) {
                    break;
                }
            }
            if !self.tokens.eat(&Tok::Semi) {
                return Ok(());
            }
            while self.tokens.eat(&Tok::Semi) {}
            if matches!(self.tokens.peek_tok(), Tok::Dot | Tok::RBrace) {
                return Ok(());
            }
        }
    }

    fn at_block_end(&self) -> bool {
        match self.tokens.peek_tok() {
            Tok::RBrace | Tok::Eof => true,
            Tok::Word(w) => w.eq_ignore_ascii_case("MINUS"),
            _ => false,
        }
    }

    fn triples_block(&mut self) -> Result<Vec<TriplePattern>, QueryError> {
        let mut out = Vec::new();
        while !self.at_block_end() {
            self.same_subject(&mut out)?;
            if !self.tokens.eat(&Tok::Dot) {
                break;
            }
        }
        Ok(out)
    }

    fn query(mut self) -> Result<Query, QueryError> {
        self.prologue()?;
        let projection = self.projection()?;
        self.tokens.eat_keyword("WHERE");
        self.tokens.expect(Tok::LBrace)?;
        let where_group = self.triples_block()?;
        let minus = if self.tokens.eat_keyword("MINUS") {
            self.tokens.expect(Tok::LBrace)?;
            let group = self.triples_block()?;
            self.tokens.expect(Tok::RBrace)?;
            self.tokens.eat(&Tok::Dot);
            Some(group)
        } else {
            None
        };
        self.tokens.expect(Tok::RBrace)?;
        self.tokens.expect(Tok::Eof)?;
        match projection {
            Some(vars) => Query::new(vars, where_group, minus),
            None => Query::select_all(where_group, minus),
        }
    }
}

/// Parses query text. `prefixes` are in scope in addition to any `PREFIX`
/// declarations in the text, which take precedence.
pub fn parse_query(text: &str, prefixes: &PrefixMap) -> Result<Query, QueryError> {
    QueryParser {
        tokens: Tokens::lex(text)?,
        prefixes: prefixes.clone(),
    }
    .query()
}
