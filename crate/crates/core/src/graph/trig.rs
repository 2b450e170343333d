//! Parser for the TriG subset used throughout the toolkit.
//!
//! Supported: `@prefix` / `PREFIX` declarations, default-graph triples,
//! `{ ... }`, `name { ... }` and `GRAPH name { ... }` blocks, predicate
//! lists (`;`), object lists (`,`), the `a` keyword, IRIs, prefixed names,
//! string literals (all four quoting styles) with `^^datatype` or `@lang`,
//! and labelled blank nodes. Collections, anonymous blank nodes, quoted
//! triples, numeric and boolean shorthand, and `@base` are rejected with a
//! positioned error.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use super::dataset::Dataset;
use super::term::{
    forbidden_in_iri, is_blank_label, is_pn_chars, is_pn_chars_base, is_pn_chars_u, BlankNode, GraphName, Iri, Literal,
    Node, Quad, Term, RDF_TYPE,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    /// 1-based.
    pub line: usize,
    /// 1-based, counted in characters.
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax { expected: String, found: String },
    UndefinedPrefix(String),
    RelativeIri(String),
    InvalidIri(String),
    InvalidEscape,
    UnterminatedString,
    InvalidLanguageTag(String),
    InvalidBlankLabel(String),
    Unsupported(&'static str),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax { expected, found } => {
                write!(f, "expected {expected}, found {found}")
            }
            ParseErrorKind::UndefinedPrefix(p) => write!(f, "undefined prefix '{p}:'"),
            ParseErrorKind::RelativeIri(iri) => {
                write!(f, "relative IRI <{iri}> where an absolute IRI is required")
            }
            ParseErrorKind::InvalidIri(iri) => write!(f, "invalid IRI <{iri}>"),
            ParseErrorKind::InvalidEscape => f.write_str("invalid escape sequence"),
            ParseErrorKind::UnterminatedString => f.write_str("unterminated string literal"),
            ParseErrorKind::InvalidLanguageTag(t) => write!(f, "invalid language tag '@{t}'"),
            ParseErrorKind::InvalidBlankLabel(l) => write!(f, "invalid blank node label '_:{l}'"),
            ParseErrorKind::Unsupported(what) => write!(f, "{what} are not supported"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    IriRef(String),
    PName(String, String),
    Blank(String),
    Str(String),
    LangTag(String),
    Carets,
    Dot,
    Semi,
    Comma,
    LBrace,
    RBrace,
    A,
    AtPrefix,
    Prefix,
    Graph,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::IriRef(i) => format!("IRI <{i}>"),
            Tok::PName(p, l) => format!("prefixed name '{p}:{l}'"),
            Tok::Blank(l) => format!("blank node '_:{l}'"),
            Tok::Str(_) => "string literal".into(),
            Tok::LangTag(t) => format!("language tag '@{t}'"),
            Tok::Carets => "'^^'".into(),
            Tok::Dot => "'.'".into(),
            Tok::Semi => "';'".into(),
            Tok::Comma => "','".into(),
            Tok::LBrace => "'{'".into(),
            Tok::RBrace => "'}'".into(),
            Tok::A => "'a'".into(),
            Tok::AtPrefix => "'@prefix'".into(),
            Tok::Prefix => "'PREFIX'".into(),
            Tok::Graph => "'GRAPH'".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Pos {
    line: usize,
    column: usize,
}

struct Lexer {
    chars: Vec<char>,
    idx: usize,
    line: usize,
    column: usize,
}

const LOCAL_ESCAPABLE: &str = "_~.-!$&'()*+,;=/?#@%";

impl Lexer {
    fn new(text: &str) -> Self {
        Lexer {
            chars: text.chars().collect(),
            idx: 0,
            line: 1,
            column: 1,
        }
    }

    fn pos(&self) -> Pos {
        Pos {
            line: self.line,
            column: self.column,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.idx).copied()
    }

    fn peek_at(&self, off: usize) -> Option<char> {
        self.chars.get(self.idx + off).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.idx).copied()?;
        self.idx += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn err(&self, pos: Pos, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: pos.line,
            column: pos.column,
            kind,
        }
    }

    fn found_here(&self) -> String {
        match self.peek() {
            Some(c) => format!("{c:?}"),
            None => "end of input".into(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c == '#' {
                while let Some(c) = self.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn next_token(&mut self) -> Result<(Tok, Pos), ParseError> {
        self.skip_ws();
        let pos = self.pos();
        let Some(c) = self.peek() else {
            return Ok((Tok::Eof, pos));
        };
        let tok = match c {
            '<' => {
                if self.peek_at(1) == Some('<') {
                    return Err(self.err(pos, ParseErrorKind::Unsupported("quoted triples")));
                }
                self.bump();
                Tok::IriRef(self.iri_body(pos)?)
            }
            '"' | '\'' => Tok::Str(self.string(pos)?),
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
                match word.as_str() {
                    "prefix" => Tok::AtPrefix,
                    "base" => return Err(self.err(pos, ParseErrorKind::Unsupported("base IRI declarations"))),
                    _ => Tok::LangTag(word),
                }
            }
            '^' => {
                self.bump();
                if self.peek() != Some('^') {
                    let found = self.found_here();
                    return Err(self.err(
                        self.pos(),
                        ParseErrorKind::Syntax {
                            expected: "'^^'".into(),
                            found,
                        },
                    ));
                }
                self.bump();
                Tok::Carets
            }
            '.' => {
                if self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
                    return Err(self.err(pos, ParseErrorKind::Unsupported("numeric literals")));
                }
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
            '[' | ']' => return Err(self.err(pos, ParseErrorKind::Unsupported("anonymous blank node property lists"))),
            '(' | ')' => return Err(self.err(pos, ParseErrorKind::Unsupported("collections"))),
            '0'..='9' | '+' | '-' => return Err(self.err(pos, ParseErrorKind::Unsupported("numeric literals"))),
            '_' if self.peek_at(1) == Some(':') => {
                self.bump();
                self.bump();
                Tok::Blank(self.blank_label(pos)?)
            }
            c if c == ':' || is_pn_chars_base(c) => self.name(pos)?,
            _ => {
                return Err(self.err(
                    pos,
                    ParseErrorKind::Syntax {
                        expected: "a term, directive or punctuation".into(),
                        found: format!("{c:?}"),
                    },
                ))
            }
        };
        Ok((tok, pos))
    }

    fn hex_escape(&mut self, digits: usize, pos: Pos) -> Result<char, ParseError> {
        let mut value = 0u32;
        for _ in 0..digits {
            let d = self
                .peek()
                .and_then(|c| c.to_digit(16))
                .ok_or_else(|| self.err(pos, ParseErrorKind::InvalidEscape))?;
            self.bump();
            value = value * 16 + d;
        }
        char::from_u32(value).ok_or_else(|| self.err(pos, ParseErrorKind::InvalidEscape))
    }

    fn iri_body(&mut self, start: Pos) -> Result<String, ParseError> {
        let mut out = String::new();
        loop {
            let here = self.pos();
            match self.bump() {
                None => {
                    return Err(self.err(
                        here,
                        ParseErrorKind::Syntax {
                            expected: "'>'".into(),
                            found: "end of input".into(),
                        },
                    ))
                }
                Some('>') => break,
                Some('\\') => {
                    let c = match self.bump() {
                        Some('u') => self.hex_escape(4, here)?,
                        Some('U') => self.hex_escape(8, here)?,
                        _ => return Err(self.err(here, ParseErrorKind::InvalidEscape)),
                    };
                    out.push(c);
                }
                Some(c) if forbidden_in_iri(c) => {
                    return Err(self.err(
                        here,
                        ParseErrorKind::Syntax {
                            expected: "IRI character or '>'".into(),
                            found: format!("{c:?}"),
                        },
                    ))
                }
                Some(c) => out.push(c),
            }
        }
        // escapes must not smuggle in characters the raw form forbids
        if out.chars().any(forbidden_in_iri) {
            return Err(self.err(start, ParseErrorKind::InvalidIri(out)));
        }
        Ok(out)
    }

    fn string(&mut self, start: Pos) -> Result<String, ParseError> {
        let quote = self.bump().expect("caller peeked a quote");
        let long = self.peek() == Some(quote) && self.peek_at(1) == Some(quote);
        if long {
            self.bump();
            self.bump();
        }
        let mut out = String::new();
        loop {
            let here = self.pos();
            let Some(c) = self.bump() else {
                return Err(self.err(start, ParseErrorKind::UnterminatedString));
            };
            match c {
                '\\' => {
                    let e = match self.bump() {
                        Some('t') => '\t',
                        Some('b') => '\u{08}',
                        Some('n') => '\n',
                        Some('r') => '\r',
                        Some('f') => '\u{0C}',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        Some('u') => self.hex_escape(4, here)?,
                        Some('U') => self.hex_escape(8, here)?,
                        _ => return Err(self.err(here, ParseErrorKind::InvalidEscape)),
                    };
                    out.push(e);
                }
                c if c == quote => {
                    if !long {
                        break;
                    }
                    if self.peek() == Some(quote) && self.peek_at(1) == Some(quote) {
                        self.bump();
                        self.bump();
                        break;
                    }
                    out.push(c);
                }
                '\n' | '\r' if !long => {
                    return Err(self.err(start, ParseErrorKind::UnterminatedString));
                }
                c => out.push(c),
            }
        }
        Ok(out)
    }

    fn blank_label(&mut self, start: Pos) -> Result<String, ParseError> {
        let mut label = String::new();
        while let Some(c) = self.peek() {
            let ok = if label.is_empty() {
                is_pn_chars_u(c) || c.is_ascii_digit()
            } else {
                is_pn_chars(c) || c == '.'
            };
            if !ok {
                break;
            }
            label.push(c);
            self.bump();
        }
        self.give_back_trailing_dots(&mut label);
        if !is_blank_label(&label) {
            return Err(self.err(start, ParseErrorKind::InvalidBlankLabel(label)));
        }
        Ok(label)
    }

    /// Un-consumes trailing '.' characters, which terminate a statement
    /// rather than belonging to the name.
    fn give_back_trailing_dots(&mut self, s: &mut String) {
        while s.ends_with('.') {
            s.pop();
            self.idx -= 1;
            self.column -= 1;
        }
    }

    fn name(&mut self, start: Pos) -> Result<Tok, ParseError> {
        let mut prefix = String::new();
        while let Some(c) = self.peek() {
            let ok = if prefix.is_empty() {
                is_pn_chars_base(c)
            } else {
                is_pn_chars(c) || c == '.'
            };
            if !ok {
                break;
            }
            prefix.push(c);
            self.bump();
        }
        if self.peek() != Some(':') {
            self.give_back_trailing_dots(&mut prefix);
            return match prefix.as_str() {
                "a" => Ok(Tok::A),
                "true" | "false" => Err(self.err(start, ParseErrorKind::Unsupported("boolean literals"))),
                p if p.eq_ignore_ascii_case("prefix") => Ok(Tok::Prefix),
                p if p.eq_ignore_ascii_case("graph") => Ok(Tok::Graph),
                p if p.eq_ignore_ascii_case("base") => {
                    Err(self.err(start, ParseErrorKind::Unsupported("base IRI declarations")))
                }
                _ => {
                    let found = self.found_here();
                    Err(self.err(
                        self.pos(),
                        ParseErrorKind::Syntax {
                            expected: "':' in prefixed name".into(),
                            found,
                        },
                    ))
                }
            };
        }
        if prefix.ends_with('.') {
            return Err(self.err(
                start,
                ParseErrorKind::Syntax {
                    expected: "prefix label not ending in '.'".into(),
                    found: format!("'{prefix}'"),
                },
            ));
        }
        self.bump();
        let local = self.local_name()?;
        Ok(Tok::PName(prefix, local))
    }

    fn local_name(&mut self) -> Result<String, ParseError> {
        let mut local = String::new();
        // Number of trailing raw '.' characters in `local` that could still be
        // given back; escaped dots are never given back.
        let mut raw_dots = 0usize;
        while let Some(c) = self.peek() {
            let first = local.is_empty() && raw_dots == 0;
            if c == '%' {
                let here = self.pos();
                let h1 = self.peek_at(1).filter(|c| c.is_ascii_hexdigit());
                let h2 = self.peek_at(2).filter(|c| c.is_ascii_hexdigit());
                let (Some(h1), Some(h2)) = (h1, h2) else {
                    return Err(self.err(here, ParseErrorKind::InvalidEscape));
                };
                self.bump();
                self.bump();
                self.bump();
                local.push('%');
                local.push(h1);
                local.push(h2);
                raw_dots = 0;
            } else if c == '\\' {
                let here = self.pos();
                match self.peek_at(1) {
                    Some(e) if LOCAL_ESCAPABLE.contains(e) => {
                        self.bump();
                        self.bump();
                        local.push(e);
                        raw_dots = 0;
                    }
                    _ => return Err(self.err(here, ParseErrorKind::InvalidEscape)),
                }
            } else if c == '.' && !first {
                self.bump();
                local.push('.');
                raw_dots += 1;
            } else if is_pn_chars_u(c) || c == ':' || c.is_ascii_digit() || (!first && is_pn_chars(c)) {
                self.bump();
                local.push(c);
                raw_dots = 0;
            } else {
                break;
            }
        }
        for _ in 0..raw_dots {
            local.pop();
            self.idx -= 1;
            self.column -= 1;
        }
        Ok(local)
    }
}

struct Parser {
    lexer: Lexer,
    peeked: Option<(Tok, Pos)>,
    prefixes: HashMap<String, Iri>,
    dataset: Dataset,
}

impl Parser {
    fn peek(&mut self) -> Result<&(Tok, Pos), ParseError> {
        if self.peeked.is_none() {
            self.peeked = Some(self.lexer.next_token()?);
        }
        Ok(self.peeked.as_ref().expect("just filled"))
    }

    fn next(&mut self) -> Result<(Tok, Pos), ParseError> {
        match self.peeked.take() {
            Some(t) => Ok(t),
            None => self.lexer.next_token(),
        }
    }

    fn unexpected(expected: &str, tok: &Tok, pos: Pos) -> ParseError {
        ParseError {
            line: pos.line,
            column: pos.column,
            kind: ParseErrorKind::Syntax {
                expected: expected.into(),
                found: tok.describe(),
            },
        }
    }

    fn expect(&mut self, want: Tok, expected: &str) -> Result<(), ParseError> {
        let (tok, pos) = self.next()?;
        if tok == want {
            Ok(())
        } else {
            Err(Self::unexpected(expected, &tok, pos))
        }
    }

    fn absolute(iri: String, pos: Pos) -> Result<Iri, ParseError> {
        Iri::new(iri.clone()).map_err(|_| ParseError {
            line: pos.line,
            column: pos.column,
            kind: ParseErrorKind::RelativeIri(iri),
        })
    }

    fn expand(&self, prefix: &str, local: &str, pos: Pos) -> Result<Iri, ParseError> {
        let ns = self.prefixes.get(prefix).ok_or_else(|| ParseError {
            line: pos.line,
            column: pos.column,
            kind: ParseErrorKind::UndefinedPrefix(prefix.to_owned()),
        })?;
        let full = format!("{ns}{local}");
        Iri::new(full.clone()).map_err(|_| ParseError {
            line: pos.line,
            column: pos.column,
            kind: ParseErrorKind::InvalidIri(full),
        })
    }

    fn iri_token(&self, tok: Tok, pos: Pos, expected: &str) -> Result<Iri, ParseError> {
        match tok {
            Tok::IriRef(iri) => Self::absolute(iri, pos),
            Tok::PName(p, l) => self.expand(&p, &l, pos),
            other => Err(Self::unexpected(expected, &other, pos)),
        }
    }

    fn document(mut self) -> Result<Dataset, ParseError> {
        loop {
            let (tok, pos) = self.next()?;
            match tok {
                Tok::Eof => break,
                Tok::AtPrefix => {
                    self.prefix_decl()?;
                    self.expect(Tok::Dot, "'.' after @prefix declaration")?;
                }
                Tok::Prefix => self.prefix_decl()?,
                Tok::Graph => {
                    let (tok, pos) = self.next()?;
                    let name = self.node_token(tok, pos, "graph name")?;
                    self.expect(Tok::LBrace, "'{'")?;
                    self.block(GraphName::Named(name))?;
                }
                Tok::LBrace => self.block(GraphName::Default)?,
                tok => {
                    let node = self.subject_or_label(tok, pos)?;
                    if matches!(self.peek()?.0, Tok::LBrace) {
                        self.next()?;
                        self.block(GraphName::Named(node))?;
                    } else {
                        self.predicate_object_list(&node, &GraphName::Default)?;
                        self.expect(Tok::Dot, "'.' to end the statement")?;
                    }
                }
            }
        }
        Ok(self.dataset)
    }

    fn prefix_decl(&mut self) -> Result<(), ParseError> {
        let (tok, pos) = self.next()?;
        let label = match tok {
            Tok::PName(p, l) if l.is_empty() => p,
            other => return Err(Self::unexpected("prefix label ending in ':'", &other, pos)),
        };
        let (tok, pos) = self.next()?;
        let ns = match tok {
            Tok::IriRef(iri) => Self::absolute(iri, pos)?,
            other => return Err(Self::unexpected("namespace IRI", &other, pos)),
        };
        self.prefixes.insert(label.clone(), ns.clone());
        self.dataset.set_prefix(label, ns);
        Ok(())
    }

    fn node_token(&self, tok: Tok, pos: Pos, expected: &str) -> Result<Node, ParseError> {
        match tok {
            Tok::Blank(label) => Ok(Node::Blank(
                BlankNode::new(label).expect("lexer validates blank labels"),
            )),
            other => self.iri_token(other, pos, expected).map(Node::Iri),
        }
    }

    fn subject_or_label(&self, tok: Tok, pos: Pos) -> Result<Node, ParseError> {
        match tok {
            Tok::Str(_) => Err(Self::unexpected("subject (a literal cannot be a subject)", &tok, pos)),
            tok => self.node_token(tok, pos, "subject, graph name, directive or '{'"),
        }
    }

    fn block(&mut self, graph: GraphName) -> Result<(), ParseError> {
        loop {
            let (tok, pos) = self.next()?;
            if tok == Tok::RBrace {
                return Ok(());
            }
            let subject = match tok {
                Tok::Str(_) => return Err(Self::unexpected("subject (a literal cannot be a subject)", &tok, pos)),
                tok => self.node_token(tok, pos, "subject or '}'")?,
            };
            self.predicate_object_list(&subject, &graph)?;
            let (tok, pos) = self.next()?;
            match tok {
                Tok::Dot => {}
                Tok::RBrace => return Ok(()),
                other => return Err(Self::unexpected("'.' or '}'", &other, pos)),
            }
        }
    }

    fn verb(&mut self) -> Result<Iri, ParseError> {
        let (tok, pos) = self.next()?;
        match tok {
            Tok::A => Ok(Iri::new(RDF_TYPE).expect("constant")),
            other => self.iri_token(other, pos, "predicate"),
        }
    }

    fn predicate_object_list(&mut self, subject: &Node, graph: &GraphName) -> Result<(), ParseError> {
        loop {
            let predicate = self.verb()?;
            self.object_list(subject, &predicate, graph)?;
            if self.peek()?.0 != Tok::Semi {
                return Ok(());
            }
            while self.peek()?.0 == Tok::Semi {
                self.next()?;
            }
            if !matches!(self.peek()?.0, Tok::A | Tok::IriRef(_) | Tok::PName(..)) {
                return Ok(());
            }
        }
    }

    fn object_list(&mut self, subject: &Node, predicate: &Iri, graph: &GraphName) -> Result<(), ParseError> {
        loop {
            let object = self.object()?;
            self.dataset.insert(Quad {
                subject: subject.clone(),
                predicate: predicate.clone(),
                object,
                graph: graph.clone(),
            });
            if self.peek()?.0 != Tok::Comma {
                return Ok(());
            }
            self.next()?;
        }
    }

    fn object(&mut self) -> Result<Term, ParseError> {
        let (tok, pos) = self.next()?;
        match tok {
            Tok::Str(lexical) => match self.peek()?.0 {
                Tok::Carets => {
                    self.next()?;
                    let (tok, pos) = self.next()?;
                    let dt = self.iri_token(tok, pos, "datatype IRI")?;
                    Ok(Term::Literal(Literal::typed(lexical, dt)))
                }
                Tok::LangTag(_) => {
                    let (Tok::LangTag(tag), pos) = self.next()? else {
                        unreachable!()
                    };
                    Literal::lang(lexical, &tag).map(Term::Literal).map_err(|_| ParseError {
                        line: pos.line,
                        column: pos.column,
                        kind: ParseErrorKind::InvalidLanguageTag(tag),
                    })
                }
                _ => Ok(Term::Literal(Literal::string(lexical))),
            },
            tok => self.node_token(tok, pos, "object").map(Term::from),
        }
    }
}

/// Parses a TriG-subset document.
pub fn parse_trig(text: &str) -> Result<Dataset, ParseError> {
    Parser {
        lexer: Lexer::new(text),
        peeked: None,
        prefixes: HashMap::new(),
        dataset: Dataset::new(),
    }
    .document()
}

#[cfg(test)]
mod tests {
    use super::*;

    const PRE: &str = "@prefix : <http://ex.org/> .\n@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .\n";

    fn parse(body: &str) -> Result<Dataset, ParseError> {
        parse_trig(&format!("{PRE}{body}"))
    }

    fn iri(s: &str) -> Iri {
        Iri::new(format!("http://ex.org/{s}")).unwrap()
    }

    #[test]
    fn prefixes_only() {
        let ds = parse("").unwrap();
        assert!(ds.is_empty());
        assert_eq!(ds.prefixes().len(), 2);
        assert!(parse_trig("").unwrap().is_empty());
    }

    #[test]
    fn predicate_and_object_lists() {
        let ds = parse(":s :p :o1, :o2 ; a :C ; ; :q \"x\"@EN .").unwrap();
        assert_eq!(ds.len(), 4);
        let lit = ds.iter().find(|q| q.predicate == iri("q")).unwrap();
        assert_eq!(lit.object.as_literal().unwrap().language(), Some("en"));
        assert!(ds.iter().any(|q| q.predicate.as_str() == RDF_TYPE));
    }

    #[test]
    fn graph_blocks() {
        let ds =
            parse("{ :a :p :b }\n:g { :a :p :c . :a :p :d . }\nGRAPH _:h { :x :p \"y\"^^xsd:date }\n:g {}").unwrap();
        assert_eq!(ds.len(), 4);
        let g = Node::Iri(iri("g"));
        assert_eq!(ds.graph_slice(&g).len(), 2);
        assert_eq!(ds.default_graph().len(), 1);
        let h = Node::Blank(BlankNode::new("h").unwrap());
        let date = ds.graph_slice(&h).iter().next().unwrap().object.clone();
        assert_eq!(
            date.as_literal().unwrap().datatype().as_str(),
            "http://www.w3.org/2001/XMLSchema#date"
        );
    }

    #[test]
    fn duplicates_are_merged() {
        let ds = parse(":a :p :b . :a :p :b . :a :p :b, :b .").unwrap();
        assert_eq!(ds.len(), 1);
    }

    #[test]
    fn strings_and_escapes() {
        let ds = parse(
            r#":a :p 'single', """long "quoted"
line""", '''x''', "esc\té\U0001F600\"" ."#,
        )
        .unwrap();
        let values: Vec<_> = ds
            .iter()
            .map(|q| q.object.as_literal().unwrap().lexical().to_owned())
            .collect();
        assert_eq!(
            values,
            vec!["single", "long \"quoted\"\nline", "x", "esc\té\u{1F600}\""]
        );
    }

    #[test]
    fn local_names_with_dots_and_escapes() {
        let ds = parse(":a.b :p :c\\-d.\n:e :p :f%20g .").unwrap();
        let q: Vec<_> = ds.iter().collect();
        assert_eq!(q[0].subject, Node::Iri(iri("a.b")));
        assert_eq!(q[0].object, Term::Iri(iri("c-d")));
        assert_eq!(q[1].object, Term::Iri(iri("f%20g")));
    }

    #[test]
    fn blank_label_before_dot() {
        let ds = parse("_:b1 :p _:b2.").unwrap();
        let q = ds.iter().next().unwrap();
        assert_eq!(q.object, Term::Blank(BlankNode::new("b2").unwrap()));
    }

    #[test]
    fn undefined_prefix_is_positioned() {
        let err = parse_trig(":a :p :b .").unwrap_err();
        assert_eq!((err.line, err.column), (1, 1));
        assert_eq!(err.kind, ParseErrorKind::UndefinedPrefix(String::new()));
        let err = parse("\n:a foo:p :b .").unwrap_err();
        assert_eq!((err.line, err.column), (4, 4));
    }

    #[test]
    fn relative_iri_rejected() {
        let err = parse("<foo/bar> :p :o .").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::RelativeIri("foo/bar".into()));
        assert_eq!((err.line, err.column), (3, 1));
    }

    #[test]
    fn syntax_errors_describe_expectation() {
        let err = parse(":a :p .").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Syntax { ref expected, .. } if expected == "object"));
        let err = parse(":a :p :b").unwrap_err();
        assert!(err.to_string().contains("end of input"), "{err}");
        let err = parse(":a :p :b }").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Syntax { .. }));
        let err = parse("\"lit\" :p :b .").unwrap_err();
        assert!(err.to_string().contains("literal cannot be a subject"));
    }

    #[test]
    fn excluded_constructs() {
        for (body, what) in [
            (":a :p ( :b ) .", "collections"),
            (":a :p [ :q :r ] .", "anonymous blank node property lists"),
            (":a :p 42 .", "numeric literals"),
            (":a :p true .", "boolean literals"),
            ("<< :a :p :b >> :q :r .", "quoted triples"),
            ("@base <http://ex.org/> .", "base IRI declarations"),
        ] {
            let err = parse(body).unwrap_err();
            assert_eq!(err.kind, ParseErrorKind::Unsupported(what), "{body}");
            assert_eq!(err.line, 3);
        }
    }

    #[test]
    fn unterminated_inputs() {
        assert_eq!(
            parse(":a :p \"abc").unwrap_err().kind,
            ParseErrorKind::UnterminatedString
        );
        assert!(parse(":a :p <http://x").is_err());
        assert!(parse(":g { :a :p :b").is_err());
        assert!(parse(":a :p \"x\"@ .").is_err());
    }

    #[test]
    fn sparql_style_prefix() {
        let ds = parse_trig("PREFIX ex: <http://ex.org/>\nex:a ex:p ex:b .").unwrap();
        assert_eq!(ds.len(), 1);
    }
}
