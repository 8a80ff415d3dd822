//! A Turtle reader covering what mapping documents use: `@prefix`/`@base`
//! (and the SPARQL-style forms), `a`, prefixed names, labeled and anonymous
//! blank nodes, collections, typed and language-tagged literals, long
//! strings and numeric/boolean shorthand.

use std::collections::HashMap;

use oxiri::Iri;

use super::graph::Graph;
use super::term::{Literal, Term};
use super::vocab::{
    RDF_FIRST, RDF_NIL, RDF_REST, RDF_TYPE, XSD_BOOLEAN, XSD_DECIMAL, XSD_DOUBLE, XSD_INTEGER,
};
use crate::error::{Error, Result};

/// Parses `text` into a graph, resolving relative IRIs against `base`.
pub fn parse_turtle(text: &str, base: &str) -> Result<Graph> {
    TurtleParser::new(base).parse(text)
}

/// Configurable Turtle reader.
///
/// Every blank node in the input, labeled or not, is replaced by a fresh
/// label `<prefix><n>` where `n` counts up from zero within one parse.
#[derive(Debug, Clone)]
pub struct TurtleParser {
    base: String,
    blank_prefix: String,
}

impl TurtleParser {
    pub fn new(base: &str) -> Self {
        TurtleParser {
            base: base.to_owned(),
            blank_prefix: "b".to_owned(),
        }
    }

    pub fn with_blank_prefix(mut self, prefix: impl Into<String>) -> Self {
        self.blank_prefix = prefix.into();
        self
    }

    pub fn parse(&self, text: &str) -> Result<Graph> {
        let base = if self.base.is_empty() {
            None
        } else {
            Some(Iri::parse(self.base.clone()).map_err(|_| Error::BadIri(self.base.clone()))?)
        };
        let mut state = State {
            src: text,
            pos: 0,
            base,
            prefixes: HashMap::new(),
            labels: HashMap::new(),
            counter: 0,
            blank_prefix: &self.blank_prefix,
            graph: Graph::new(),
        };
        state.document()?;
        Ok(state.graph)
    }
}

struct State<'a> {
    src: &'a str,
    pos: usize,
    base: Option<Iri<String>>,
    prefixes: HashMap<String, String>,
    labels: HashMap<String, Term>,
    counter: usize,
    blank_prefix: &'a str,
    graph: Graph,
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-' || c == '\u{b7}'
}

fn is_delimiter(c: Option<char>) -> bool {
    match c {
        None => true,
        Some(c) => c.is_whitespace() || "<[(\"'#;,.)]".contains(c),
    }
}

impl<'a> State<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn peek_nth(&self, n: usize) -> Option<char> {
        self.rest().chars().nth(n)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn error_at(&self, pos: usize, message: impl Into<String>) -> Error {
        let (line, column) = line_col(self.src, pos);
        Error::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        self.error_at(self.pos, message)
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        match self.peek() {
            Some(found) if found == c => {
                self.bump();
                Ok(())
            }
            Some(found) => Err(self.error(format!("expected '{c}', found '{found}'"))),
            None => Err(self.error(format!("expected '{c}', found end of input"))),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn starts_with_keyword(&self, kw: &str) -> bool {
        let rest = self.rest();
        rest.len() >= kw.len()
            && rest.is_char_boundary(kw.len())
            && rest[..kw.len()].eq_ignore_ascii_case(kw)
            && rest[kw.len()..].chars().next().is_some_and(char::is_whitespace)
    }

    fn fresh(&mut self) -> Term {
        let t = Term::blank(format!("{}{}", self.blank_prefix, self.counter));
        self.counter += 1;
        t
    }

    fn add(&mut self, s: Term, p: Term, o: Term) {
        self.graph.add(s, p, o);
    }

    fn document(&mut self) -> Result<()> {
        loop {
            self.skip_ws();
            if self.peek().is_none() {
                return Ok(());
            }
            if self.peek() == Some('@') {
                self.at_directive()?;
            } else if self.starts_with_keyword("prefix") {
                self.pos += "prefix".len();
                self.prefix_body()?;
            } else if self.starts_with_keyword("base") {
                self.pos += "base".len();
                self.base_body()?;
            } else {
                self.triples()?;
                self.expect('.')?;
            }
        }
    }

    fn at_directive(&mut self) -> Result<()> {
        let start = self.pos;
        self.bump();
        let word: String = self.take_while(|c| c.is_ascii_alphabetic());
        match word.as_str() {
            "prefix" => {
                self.prefix_body()?;
                self.expect('.')
            }
            "base" => {
                self.base_body()?;
                self.expect('.')
            }
            _ => Err(self.error_at(start, format!("unknown directive '@{word}'"))),
        }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> String {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if !f(c) {
                break;
            }
            self.bump();
        }
        self.src[start..self.pos].to_owned()
    }

    fn prefix_body(&mut self) -> Result<()> {
        self.skip_ws();
        let name = self.take_while(|c| is_name_char(c) || c == '.');
        if self.peek() != Some(':') {
            return Err(self.error("expected ':' after prefix name"));
        }
        self.bump();
        self.skip_ws();
        if self.peek() != Some('<') {
            return Err(self.error("expected IRI after prefix declaration"));
        }
        let iri = self.iri_ref()?;
        self.prefixes.insert(name, iri);
        Ok(())
    }

    fn base_body(&mut self) -> Result<()> {
        self.skip_ws();
        if self.peek() != Some('<') {
            return Err(self.error("expected IRI after base declaration"));
        }
        let start = self.pos;
        let iri = self.iri_ref()?;
        self.base = Some(Iri::parse(iri).map_err(|e| self.error_at(start, e.to_string()))?);
        Ok(())
    }

    fn triples(&mut self) -> Result<()> {
        self.skip_ws();
        match self.peek() {
            Some('[') => {
                let subject = self.blank_property_list()?;
                self.skip_ws();
                if self.peek() != Some('.') {
                    self.predicate_object_list(&subject)?;
                }
                Ok(())
            }
            _ => {
                let subject = self.subject()?;
                self.predicate_object_list(&subject)
            }
        }
    }

    fn subject(&mut self) -> Result<Term> {
        self.skip_ws();
        match self.peek() {
            Some('<') => Ok(Term::Iri(self.iri_ref()?)),
            Some('_') => self.blank_label(),
            Some('(') => self.collection(),
            Some(_) => Ok(Term::Iri(self.prefixed_name()?)),
            None => Err(self.error("expected subject, found end of input")),
        }
    }

    fn predicate_object_list(&mut self, subject: &Term) -> Result<()> {
        loop {
            let verb = self.verb()?;
            self.object_list(subject, &verb)?;
            self.skip_ws();
            if self.peek() != Some(';') {
                return Ok(());
            }
            while self.peek() == Some(';') {
                self.bump();
                self.skip_ws();
            }
            if matches!(self.peek(), None | Some('.') | Some(']')) {
                return Ok(());
            }
        }
    }

    fn verb(&mut self) -> Result<Term> {
        self.skip_ws();
        if self.peek() == Some('a') && is_delimiter(self.peek_nth(1)) {
            self.bump();
            return Ok(Term::iri(RDF_TYPE));
        }
        match self.peek() {
            Some('<') => Ok(Term::Iri(self.iri_ref()?)),
            Some(c) if c.is_alphabetic() || c == ':' => Ok(Term::Iri(self.prefixed_name()?)),
            Some(c) => Err(self.error(format!("expected predicate, found '{c}'"))),
            None => Err(self.error("expected predicate, found end of input")),
        }
    }

    fn object_list(&mut self, subject: &Term, predicate: &Term) -> Result<()> {
        loop {
            let object = self.object()?;
            self.add(subject.clone(), predicate.clone(), object);
            self.skip_ws();
            if self.peek() == Some(',') {
                self.bump();
            } else {
                return Ok(());
            }
        }
    }

    fn object(&mut self) -> Result<Term> {
        self.skip_ws();
        let c = match self.peek() {
            Some(c) => c,
            None => return Err(self.error("expected object, found end of input")),
        };
        match c {
            '<' => Ok(Term::Iri(self.iri_ref()?)),
            '_' if self.peek_nth(1) == Some(':') => self.blank_label(),
            '[' => self.blank_property_list(),
            '(' => self.collection(),
            '"' | '\'' => self.literal(),
            c if c.is_ascii_digit() || c == '+' || c == '-' || c == '.' => self.numeric(),
            _ => {
                for (kw, value) in [("true", "true"), ("false", "false")] {
                    if self.rest().starts_with(kw) && is_delimiter(self.rest()[kw.len()..].chars().next())
                    {
                        self.pos += kw.len();
                        return Ok(Term::Literal(Literal::typed(value, XSD_BOOLEAN)));
                    }
                }
                if c.is_alphabetic() || c == ':' {
                    Ok(Term::Iri(self.prefixed_name()?))
                } else {
                    Err(self.error(format!("unexpected character '{c}'")))
                }
            }
        }
    }

    fn iri_ref(&mut self) -> Result<String> {
        let start = self.pos;
        self.bump(); // '<'
        let mut raw = String::new();
        loop {
            match self.bump() {
                None => return Err(self.error_at(start, "unterminated IRI")),
                Some('>') => break,
                Some('\\') => raw.push(self.unicode_escape()?),
                Some(c) if c.is_whitespace() || "<\"{}|^`".contains(c) => {
                    return Err(self.error(format!("illegal character '{}' in IRI", c.escape_debug())))
                }
                Some(c) => raw.push(c),
            }
        }
        self.resolve(&raw, start)
    }

    fn resolve(&self, raw: &str, at: usize) -> Result<String> {
        match &self.base {
            Some(base) => base
                .resolve(raw)
                .map(|iri| iri.into_inner())
                .map_err(|e| self.error_at(at, format!("invalid IRI <{raw}>: {e}"))),
            None => Iri::parse(raw.to_owned())
                .map(|iri| iri.into_inner())
                .map_err(|e| self.error_at(at, format!("invalid IRI <{raw}>: {e}"))),
        }
    }

    fn unicode_escape(&mut self) -> Result<char> {
        let len = match self.bump() {
            Some('u') => 4,
            Some('U') => 8,
            _ => return Err(self.error("invalid escape in IRI")),
        };
        self.hex_char(len)
    }

    fn hex_char(&mut self, len: usize) -> Result<char> {
        let start = self.pos;
        for _ in 0..len {
            match self.bump() {
                Some(c) if c.is_ascii_hexdigit() => {}
                _ => return Err(self.error_at(start, "invalid unicode escape")),
            }
        }
        u32::from_str_radix(&self.src[start..self.pos], 16)
            .ok()
            .and_then(char::from_u32)
            .ok_or_else(|| self.error_at(start, "invalid unicode code point"))
    }

    fn prefixed_name(&mut self) -> Result<String> {
        let start = self.pos;
        let prefix = self.take_while(|c| is_name_char(c) || c == '.');
        if prefix.ends_with('.') || self.peek() != Some(':') {
            return Err(self.error_at(start, format!("expected prefixed name, found '{prefix}'")));
        }
        self.bump();
        let namespace = match self.prefixes.get(&prefix) {
            Some(ns) => ns.clone(),
            None => {
                let (line, column) = line_col(self.src, start);
                return Err(Error::UndefinedPrefix {
                    prefix,
                    line,
                    column,
                });
            }
        };
        let local = self.local_name()?;
        let iri = format!("{namespace}{local}");
        Iri::parse(iri.clone()).map_err(|e| self.error_at(start, format!("invalid IRI {iri}: {e}")))?;
        Ok(iri)
    }

    fn local_name(&mut self) -> Result<String> {
        let mut out = String::new();
        let mut trailing_dots = 0;
        loop {
            match self.peek() {
                Some(c) if is_name_char(c) || c == ':' => {
                    self.bump();
                    out.push(c);
                    trailing_dots = 0;
                }
                Some('.') if !out.is_empty() => {
                    self.bump();
                    out.push('.');
                    trailing_dots += 1;
                }
                Some('%') => {
                    let start = self.pos;
                    self.bump();
                    for _ in 0..2 {
                        match self.bump() {
                            Some(h) if h.is_ascii_hexdigit() => {}
                            _ => return Err(self.error_at(start, "invalid percent escape in local name")),
                        }
                    }
                    out.push_str(&self.src[start..self.pos]);
                    trailing_dots = 0;
                }
                Some('\\') => {
                    self.bump();
                    match self.bump() {
                        Some(c) if "_~.-!$&'()*+,;=/?#@%".contains(c) => out.push(c),
                        _ => return Err(self.error("invalid escape in local name")),
                    }
                    trailing_dots = 0;
                }
                _ => break,
            }
        }
        // a trailing '.' terminates the statement instead
        out.truncate(out.len() - trailing_dots);
        self.pos -= trailing_dots;
        Ok(out)
    }

    fn blank_label(&mut self) -> Result<Term> {
        let start = self.pos;
        self.bump();
        if self.bump() != Some(':') {
            return Err(self.error_at(start, "expected '_:'"));
        }
        let mut label = self.take_while(|c| is_name_char(c) || c == '.');
        while label.ends_with('.') {
            label.pop();
            self.pos -= 1;
        }
        if label.is_empty() {
            return Err(self.error_at(start, "empty blank node label"));
        }
        if let Some(t) = self.labels.get(&label) {
            return Ok(t.clone());
        }
        let t = self.fresh();
        self.labels.insert(label, t.clone());
        Ok(t)
    }

    fn blank_property_list(&mut self) -> Result<Term> {
        self.bump(); // '['
        self.skip_ws();
        let node = self.fresh();
        if self.peek() == Some(']') {
            self.bump();
            return Ok(node);
        }
        self.predicate_object_list(&node)?;
        self.expect(']')?;
        Ok(node)
    }

    fn collection(&mut self) -> Result<Term> {
        self.bump(); // '('
        let mut items = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(')') => {
                    self.bump();
                    break;
                }
                None => return Err(self.error("unterminated collection")),
                _ => items.push(self.object()?),
            }
        }
        if items.is_empty() {
            return Ok(Term::iri(RDF_NIL));
        }
        let nodes: Vec<Term> = items.iter().map(|_| self.fresh()).collect();
        for (i, item) in items.into_iter().enumerate() {
            self.add(nodes[i].clone(), Term::iri(RDF_FIRST), item);
            let rest = nodes.get(i + 1).cloned().unwrap_or_else(|| Term::iri(RDF_NIL));
            self.add(nodes[i].clone(), Term::iri(RDF_REST), rest);
        }
        Ok(nodes[0].clone())
    }

    fn literal(&mut self) -> Result<Term> {
        let start = self.pos;
        let quote = self.bump().expect("quote");
        let long = self.peek() == Some(quote) && self.peek_nth(1) == Some(quote);
        if long {
            self.bump();
            self.bump();
        }
        let mut lexical = String::new();
        loop {
            match self.bump() {
                None => return Err(self.error_at(start, "unterminated string")),
                Some(c) if c == quote => {
                    if !long {
                        break;
                    }
                    if self.peek() == Some(quote) && self.peek_nth(1) == Some(quote) {
                        // allow up to two quotes right before the closing triple
                        let mut extra = 0;
                        while self.peek_nth(2 + extra) == Some(quote) && extra < 2 {
                            extra += 1;
                        }
                        for _ in 0..extra {
                            lexical.push(quote);
                            self.bump();
                        }
                        self.bump();
                        self.bump();
                        break;
                    }
                    lexical.push(c);
                }
                Some('\\') => lexical.push(self.string_escape()?),
                Some(c @ ('\n' | '\r')) if !long => {
                    return Err(self.error(format!("line break {:?} in short string", c)))
                }
                Some(c) => lexical.push(c),
            }
        }
        match self.peek() {
            Some('@') => {
                self.bump();
                let tag = self.take_while(|c| c.is_ascii_alphanumeric() || c == '-');
                if tag.is_empty() || !tag.starts_with(|c: char| c.is_ascii_alphabetic()) {
                    return Err(self.error("invalid language tag"));
                }
                Ok(Term::Literal(Literal::lang(lexical, &tag)))
            }
            Some('^') if self.peek_nth(1) == Some('^') => {
                self.bump();
                self.bump();
                let datatype = match self.peek() {
                    Some('<') => self.iri_ref()?,
                    _ => self.prefixed_name()?,
                };
                Ok(Term::Literal(Literal::typed(lexical, datatype)))
            }
            _ => Ok(Term::Literal(Literal::string(lexical))),
        }
    }

    fn string_escape(&mut self) -> Result<char> {
        match self.bump() {
            Some('t') => Ok('\t'),
            Some('b') => Ok('\u{8}'),
            Some('n') => Ok('\n'),
            Some('r') => Ok('\r'),
            Some('f') => Ok('\u{c}'),
            Some('"') => Ok('"'),
            Some('\'') => Ok('\''),
            Some('\\') => Ok('\\'),
            Some('u') => self.hex_char(4),
            Some('U') => self.hex_char(8),
            _ => Err(self.error("invalid string escape")),
        }
    }

    fn numeric(&mut self) -> Result<Term> {
        let start = self.pos;
        if matches!(self.peek(), Some('+' | '-')) {
            self.bump();
        }
        let int_digits = self.take_while(|c| c.is_ascii_digit()).len();
        let mut frac_digits = 0;
        if self.peek() == Some('.') && self.peek_nth(1).is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
            frac_digits = self.take_while(|c| c.is_ascii_digit()).len();
        }
        let mut exponent = false;
        if matches!(self.peek(), Some('e' | 'E')) && (int_digits + frac_digits) > 0 {
            let save = self.pos;
            self.bump();
            if matches!(self.peek(), Some('+' | '-')) {
                self.bump();
            }
            if self.take_while(|c| c.is_ascii_digit()).is_empty() {
                self.pos = save;
            } else {
                exponent = true;
            }
        }
        if int_digits + frac_digits == 0 {
            return Err(self.error_at(start, "invalid numeric literal"));
        }
        let lexical = &self.src[start..self.pos];
        let datatype = if exponent {
            XSD_DOUBLE
        } else if frac_digits > 0 {
            XSD_DECIMAL
        } else {
            XSD_INTEGER
        };
        Ok(Term::Literal(Literal::typed(lexical, datatype)))
    }
}

fn line_col(src: &str, pos: usize) -> (usize, usize) {
    let before = &src[..pos.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let column = match before.rfind('\n') {
        Some(i) => before[i + 1..].chars().count() + 1,
        None => before.chars().count() + 1,
    };
    (line, column)
}
