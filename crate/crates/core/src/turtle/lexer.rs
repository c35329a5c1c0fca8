//! Tokenizer shared by the Turtle parser and the query text front-end.

use std::fmt;

use super::TurtleError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    IriRef(String),
    PName {
        prefix: String,
        local: String,
    },
    Blank(String),
    Str(String),
    /// `@word`: a language tag after a string, otherwise a directive.
    At(String),
    Caret2,
    Integer(String),
    Decimal(String),
    /// Bare word: `a`, `true`, `false` and query keywords.
    Word(String),
    Var(String),
    Dot,
    Semi,
    Comma,
    LBrace,
    RBrace,
    Star,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::IriRef(iri) => write!(f, "<{iri}>"),
            Tok::PName { prefix, local } => write!(f, "'{prefix}:{local}'"),
            Tok::Blank(label) => write!(f, "'_:{label}'"),
            Tok::Str(_) => f.write_str("string literal"),
            Tok::At(word) => write!(f, "'@{word}'"),
            Tok::Caret2 => f.write_str("'^^'"),
            Tok::Integer(v) | Tok::Decimal(v) => write!(f, "number {v}"),
            Tok::Word(w) => write!(f, "'{w}'"),
            Tok::Var(v) => write!(f, "'?{v}'"),
            Tok::Dot => f.write_str("'.'"),
            Tok::Semi => f.write_str("';'"),
            Tok::Comma => f.write_str("','"),
            Tok::LBrace => f.write_str("'{'"),
            Tok::RBrace => f.write_str("'}'"),
            Tok::Star => f.write_str("'*'"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

pub(crate) fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-'
}

/// Whether `local` survives a lex as the local part of a prefixed name.
pub(crate) fn is_valid_local(local: &str) -> bool {
    let chars: Vec<char> = local.chars().collect();
    if chars.first() == Some(&'.') || chars.last() == Some(&'.') {
        return false;
    }
    chars.iter().enumerate().all(|(i, &c)| {
        is_name_char(c) || (c == '.' && chars.get(i + 1).copied().is_some_and(is_name_char))
    })
}

pub(crate) fn is_valid_prefix_label(label: &str) -> bool {
    label.is_empty()
        || (label.chars().next().is_some_and(char::is_alphabetic) && is_valid_local(label))
}

fn is_forbidden_in_iri(c: char) -> bool {
    c.is_whitespace() || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\')
}

pub struct Lexer {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
}

impl Lexer {
    pub fn new(source: &str) -> Self {
        Self {
            chars: source.chars().collect(),
            pos: 0,
            line: 1,
            column: 1,
        }
    }

    pub fn tokenize(mut self) -> Result<Vec<Token>, TurtleError> {
        let mut out = Vec::new();
        loop {
            let token = self.next_token()?;
            let done = token.tok == Tok::Eof;
            out.push(token);
            if done {
                return Ok(out);
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.pos + offset).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.pos).copied()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn error(&self, expected: &str, found: impl Into<String>) -> TurtleError {
        TurtleError::Syntax {
            line: self.line,
            column: self.column,
            expected: expected.to_string(),
            found: found.into(),
        }
    }

    fn found_here(&self) -> String {
        match self.peek() {
            Some(c) => format!("{c:?}"),
            None => "end of input".to_string(),
        }
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    /// Name characters, with `.` allowed only when another name character follows.
    fn read_name(&mut self) -> String {
        let mut out = String::new();
        while let Some(c) = self.peek() {
            if is_name_char(c) || (c == '.' && self.peek_at(1).is_some_and(is_name_char)) {
                out.push(c);
                self.bump();
            } else {
                break;
            }
        }
        out
    }

    fn next_token(&mut self) -> Result<Token, TurtleError> {
        self.skip_trivia();
        let (line, column) = (self.line, self.column);
        let tok = match self.peek() {
            None => Tok::Eof,
            Some(c) => match c {
                '<' => self.iri_ref()?,
                '"' => self.string()?,
                '@' => {
                    self.bump();
                    let mut word = String::new();
                    while let Some(c) = self.peek() {
                        if c.is_ascii_alphanumeric() || c == '-' {
                            word.push(c);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    if word.is_empty() {
                        return Err(
                            self.error("language tag or directive after '@'", self.found_here())
                        );
                    }
                    Tok::At(word)
                }
                '^' => {
                    self.bump();
                    if self.peek() != Some('^') {
                        return Err(self.error("'^^'", self.found_here()));
                    }
                    self.bump();
                    Tok::Caret2
                }
                '?' | '$' => {
                    self.bump();
                    let mut name = String::new();
                    while let Some(c) = self.peek() {
                        if c.is_alphanumeric() || c == '_' {
                            name.push(c);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    if name.is_empty() {
                        return Err(self.error("variable name", self.found_here()));
                    }
                    Tok::Var(name)
                }
                '.' => {
                    self.bump();
                    Tok::Dot
                }
                ';' => {
                    self.bump();
                    Tok::Semi
                }
                ',' => {
                    self.bump();
                    Tok::Comma
                }
                '{' => {
                    self.bump();
                    Tok::LBrace
                }
                '}' => {
                    self.bump();
                    Tok::RBrace
                }
                '*' => {
                    self.bump();
                    Tok::Star
                }
                '_' if self.peek_at(1) == Some(':') => {
                    self.bump();
                    self.bump();
                    let label = self.read_name();
                    if label.is_empty() {
                        return Err(self.error("blank node label", self.found_here()));
                    }
                    Tok::Blank(label)
                }
                ':' => {
                    self.bump();
                    Tok::PName {
                        prefix: String::new(),
                        local: self.read_name(),
                    }
                }
                c if c.is_ascii_digit() || c == '+' || c == '-' => self.number()?,
                c if c.is_alphabetic() => {
                    let name = self.read_name();
                    if self.peek() == Some(':') {
                        self.bump();
                        Tok::PName {
                            prefix: name,
                            local: self.read_name(),
                        }
                    } else {
                        Tok::Word(name)
                    }
                }
                other => return Err(self.error("a token", format!("{other:?}"))),
            },
        };
        Ok(Token { tok, line, column })
    }

    fn iri_ref(&mut self) -> Result<Tok, TurtleError> {
        self.bump();
        let mut iri = String::new();
        loop {
            match self.peek() {
                Some('>') => {
                    self.bump();
                    return Ok(Tok::IriRef(iri));
                }
                Some(c) if !is_forbidden_in_iri(c) => {
                    iri.push(c);
                    self.bump();
                }
                _ => return Err(self.error("'>' closing the IRI", self.found_here())),
            }
        }
    }

    fn string(&mut self) -> Result<Tok, TurtleError> {
        self.bump();
        let mut value = String::new();
        loop {
            match self.peek() {
                Some('"') => {
                    self.bump();
                    return Ok(Tok::Str(value));
                }
                Some('\\') => {
                    self.bump();
                    let escaped = match self.peek() {
                        Some('"') => '"',
                        Some('\\') => '\\',
                        Some('n') => '\n',
                        Some('t') => '\t',
                        _ => {
                            return Err(self
                                .error("one of the escapes \\\" \\\\ \\n \\t", self.found_here()))
                        }
                    };
                    self.bump();
                    value.push(escaped);
                }
                Some('\n') | None => {
                    return Err(self.error("'\"' closing the string", self.found_here()))
                }
                Some(c) => {
                    value.push(c);
                    self.bump();
                }
            }
        }
    }

    fn number(&mut self) -> Result<Tok, TurtleError> {
        let mut text = String::new();
        if let Some(sign @ ('+' | '-')) = self.peek() {
            text.push(sign);
            self.bump();
        }
        if !self.peek().is_some_and(|c| c.is_ascii_digit()) {
            return Err(self.error("digit", self.found_here()));
        }
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            text.push(c);
            self.bump();
        }
        if self.peek() == Some('.') && self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
            text.push('.');
            self.bump();
            while let Some(c) = self.peek().filter(char::is_ascii_digit) {
                text.push(c);
                self.bump();
            }
            if matches!(self.peek(), Some('e' | 'E')) {
                return Err(self.error("decimal without exponent", self.found_here()));
            }
            return Ok(Tok::Decimal(text));
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            return Err(self.error("integer without exponent", self.found_here()));
        }
        Ok(Tok::Integer(text))
    }
}
