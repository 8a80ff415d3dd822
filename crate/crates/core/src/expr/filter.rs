use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use regex::{Regex, RegexBuilder};

use super::reference::{eval_ref, RefExpr, VariableName};
use super::value::{render_number, ScalarValue};
use super::EvalContext;
use crate::error::{Error, Result};

const MAX_DEPTH: usize = 128;
const MAX_NODES: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Or,
    And,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Add,
    Sub,
    Mul,
    Div,
}

impl BinaryOp {
    pub fn as_str(self) -> &'static str {
        match self {
            BinaryOp::Or => "||",
            BinaryOp::And => "&&",
            BinaryOp::Eq => "==",
            BinaryOp::Ne => "!=",
            BinaryOp::Lt => "<",
            BinaryOp::Le => "<=",
            BinaryOp::Gt => ">",
            BinaryOp::Ge => ">=",
            BinaryOp::Add => "+",
            BinaryOp::Sub => "-",
            BinaryOp::Mul => "*",
            BinaryOp::Div => "/",
        }
    }
}

/// A compiled `/pattern/flags` literal. Equality compares the source text.
#[derive(Debug, Clone)]
pub struct FilterRegex {
    source: String,
    flags: String,
    compiled: Regex,
}

impl FilterRegex {
    /// `source` is the text between the slashes, where `\/` stands for `/`.
    pub fn new(source: &str, flags: &str) -> std::result::Result<Self, String> {
        if let Some(f) = flags.chars().find(|&f| f != 'i') {
            return Err(format!("unsupported regex flag '{f}'"));
        }
        let compiled = RegexBuilder::new(&unescape_slashes(source))
            .case_insensitive(flags.contains('i'))
            .size_limit(1 << 20)
            .build()
            .map_err(|e| e.to_string())?;
        Ok(FilterRegex {
            source: source.to_owned(),
            flags: flags.to_owned(),
            compiled,
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn flags(&self) -> &str {
        &self.flags
    }

    /// Unanchored search, like JavaScript's `RegExp.prototype.test`.
    pub fn test(&self, text: &str) -> bool {
        self.compiled.is_match(text)
    }
}

impl PartialEq for FilterRegex {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source && self.flags == other.flags
    }
}

fn unescape_slashes(source: &str) -> String {
    let mut out = String::with_capacity(source.len());
    let mut chars = source.chars();
    while let Some(c) = chars.next() {
        if c == '\\' {
            match chars.next() {
                Some('/') => out.push('/'),
                Some(n) => {
                    out.push('\\');
                    out.push(n);
                }
                None => out.push('\\'),
            }
        } else {
            out.push(c);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub enum FilterExpr {
    Bool(bool),
    Number(f64),
    Str(String),
    Var(VariableName),
    Not(Box<FilterExpr>),
    Neg(Box<FilterExpr>),
    Binary(BinaryOp, Box<FilterExpr>, Box<FilterExpr>),
    Test(FilterRegex, Box<FilterExpr>),
}

impl FilterExpr {
    pub fn binary(op: BinaryOp, l: FilterExpr, r: FilterExpr) -> Self {
        FilterExpr::Binary(op, Box::new(l), Box::new(r))
    }

    pub fn is_constant_false(&self) -> bool {
        matches!(self, FilterExpr::Bool(false))
    }
}

/// Renders fully parenthesized; parsing the output yields an equal tree.
impl fmt::Display for FilterExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FilterExpr::Bool(b) => write!(f, "{b}"),
            FilterExpr::Number(n) => f.write_str(&render_number(*n)),
            FilterExpr::Str(s) => {
                f.write_str("\"")?;
                for c in s.chars() {
                    match c {
                        '"' => f.write_str("\\\"")?,
                        '\\' => f.write_str("\\\\")?,
                        '\n' => f.write_str("\\n")?,
                        '\r' => f.write_str("\\r")?,
                        '\t' => f.write_str("\\t")?,
                        c => write!(f, "{c}")?,
                    }
                }
                f.write_str("\"")
            }
            FilterExpr::Var(v) => f.write_str(v.as_str()),
            FilterExpr::Not(e) => write!(f, "(!{e})"),
            FilterExpr::Neg(e) => write!(f, "(-{e})"),
            FilterExpr::Binary(op, l, r) => write!(f, "({l} {} {r})", op.as_str()),
            FilterExpr::Test(re, e) => write!(f, "/{}/{}.test({e})", re.source, re.flags),
        }
    }
}

impl FromStr for FilterExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_filter(s)
    }
}

pub fn parse_filter(text: &str) -> Result<FilterExpr> {
    let mut p = Parser {
        text,
        pos: 0,
        depth: 0,
        nodes: 0,
    };
    let e = p.or()?;
    p.ws();
    if p.pos < text.len() {
        return Err(p.err(p.pos, "unexpected input"));
    }
    Ok(e)
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
    depth: usize,
    nodes: usize,
}

impl Parser<'_> {
    fn err(&self, position: usize, message: impl Into<String>) -> Error {
        Error::FilterSyntax {
            text: self.text.to_owned(),
            position,
            message: message.into(),
        }
    }

    fn rest(&self) -> &str {
        &self.text[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn ws(&mut self) {
        let skipped = self.rest().len() - self.rest().trim_start().len();
        self.pos += skipped;
    }

    fn eat(&mut self, token: &str) -> bool {
        self.ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn node(&mut self, e: FilterExpr) -> Result<FilterExpr> {
        self.nodes += 1;
        if self.nodes > MAX_NODES {
            return Err(self.err(self.pos, "expression too large"));
        }
        Ok(e)
    }

    fn or(&mut self) -> Result<FilterExpr> {
        let mut l = self.and()?;
        while self.eat("||") {
            let r = self.and()?;
            l = self.node(FilterExpr::binary(BinaryOp::Or, l, r))?;
        }
        Ok(l)
    }

    fn and(&mut self) -> Result<FilterExpr> {
        let mut l = self.comparison()?;
        while self.eat("&&") {
            let r = self.comparison()?;
            l = self.node(FilterExpr::binary(BinaryOp::And, l, r))?;
        }
        Ok(l)
    }

    fn comparison(&mut self) -> Result<FilterExpr> {
        let mut l = self.additive()?;
        loop {
            let op = [
                ("==", BinaryOp::Eq),
                ("!=", BinaryOp::Ne),
                ("<=", BinaryOp::Le),
                (">=", BinaryOp::Ge),
                ("<", BinaryOp::Lt),
                (">", BinaryOp::Gt),
            ]
            .into_iter()
            .find(|(t, _)| self.eat(t));
            let Some((_, op)) = op else { return Ok(l) };
            let r = self.additive()?;
            l = self.node(FilterExpr::binary(op, l, r))?;
        }
    }

    fn additive(&mut self) -> Result<FilterExpr> {
        let mut l = self.multiplicative()?;
        loop {
            let op = if self.eat("+") {
                BinaryOp::Add
            } else if self.eat("-") {
                BinaryOp::Sub
            } else {
                return Ok(l);
            };
            let r = self.multiplicative()?;
            l = self.node(FilterExpr::binary(op, l, r))?;
        }
    }

    fn multiplicative(&mut self) -> Result<FilterExpr> {
        let mut l = self.unary()?;
        loop {
            let op = if self.eat("*") {
                BinaryOp::Mul
            } else if self.eat("/") {
                BinaryOp::Div
            } else {
                return Ok(l);
            };
            let r = self.unary()?;
            l = self.node(FilterExpr::binary(op, l, r))?;
        }
    }

    fn unary(&mut self) -> Result<FilterExpr> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.err(self.pos, "expression nested too deeply"));
        }
        let e = if self.eat("!") {
            let inner = self.unary()?;
            self.node(FilterExpr::Not(Box::new(inner)))?
        } else if self.eat("-") {
            let inner = self.unary()?;
            self.node(FilterExpr::Neg(Box::new(inner)))?
        } else {
            self.primary()?
        };
        self.depth -= 1;
        Ok(e)
    }

    fn primary(&mut self) -> Result<FilterExpr> {
        self.ws();
        let start = self.pos;
        let Some(c) = self.peek() else {
            return Err(self.err(start, "unexpected end of filter"));
        };
        let e = match c {
            '(' => {
                self.pos += 1;
                let e = self.or()?;
                if !self.eat(")") {
                    return Err(self.err(self.pos, "expected ')'"));
                }
                return Ok(e);
            }
            '0'..='9' => {
                let len = self
                    .rest()
                    .find(|c: char| !c.is_ascii_digit())
                    .unwrap_or(self.rest().len());
                self.pos += len;
                if self.rest().starts_with('.') {
                    let frac = self.rest()[1..]
                        .find(|c: char| !c.is_ascii_digit())
                        .unwrap_or(self.rest().len() - 1);
                    if frac == 0 {
                        return Err(self.err(self.pos + 1, "expected digits after '.'"));
                    }
                    self.pos += 1 + frac;
                }
                let n: f64 = self.text[start..self.pos]
                    .parse()
                    .map_err(|_| self.err(start, "bad number"))?;
                if !n.is_finite() {
                    return Err(self.err(start, "number out of range"));
                }
                FilterExpr::Number(n)
            }
            '"' | '\'' => FilterExpr::Str(self.string(c)?),
            '/' => self.regex_test()?,
            c if c.is_ascii_alphabetic() || c == '_' => {
                let len = self
                    .rest()
                    .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
                    .unwrap_or(self.rest().len());
                let word = &self.text[start..start + len];
                self.pos += len;
                match word {
                    "true" => FilterExpr::Bool(true),
                    "false" => FilterExpr::Bool(false),
                    _ => FilterExpr::Var(
                        word.parse()
                            .map_err(|_| self.err(start, format!("unknown variable '{word}'")))?,
                    ),
                }
            }
            c => return Err(self.err(start, format!("unexpected '{c}'"))),
        };
        self.node(e)
    }

    fn string(&mut self, quote: char) -> Result<String> {
        let start = self.pos;
        self.pos += 1;
        let mut out = String::new();
        let mut chars = self.rest().char_indices();
        while let Some((i, c)) = chars.next() {
            match c {
                c if c == quote => {
                    self.pos += i + 1;
                    return Ok(out);
                }
                '\\' => match chars.next() {
                    Some((_, 'n')) => out.push('\n'),
                    Some((_, 't')) => out.push('\t'),
                    Some((_, 'r')) => out.push('\r'),
                    Some((_, e)) => out.push(e),
                    None => break,
                },
                c => out.push(c),
            }
        }
        Err(self.err(start, "unterminated string"))
    }

    /// `/pattern/flags.test(expr)`
    fn regex_test(&mut self) -> Result<FilterExpr> {
        let start = self.pos;
        self.pos += 1;
        let body_start = self.pos;
        let mut in_class = false;
        let mut chars = self.rest().char_indices();
        let body_len = loop {
            match chars.next() {
                Some((_, '\\')) => {
                    if chars.next().is_none() {
                        return Err(self.err(start, "unterminated regex"));
                    }
                }
                Some((_, '[')) => in_class = true,
                Some((_, ']')) => in_class = false,
                Some((i, '/')) if !in_class => break i,
                Some((_, '\n')) | None => return Err(self.err(start, "unterminated regex")),
                Some(_) => {}
            }
        };
        if body_len == 0 {
            return Err(self.err(start, "empty regex"));
        }
        let source = &self.text[body_start..body_start + body_len];
        self.pos = body_start + body_len + 1;
        let flags_len = self
            .rest()
            .find(|c: char| !c.is_ascii_alphabetic())
            .unwrap_or(self.rest().len());
        let flags = &self.text[self.pos..self.pos + flags_len];
        self.pos += flags_len;
        let re = FilterRegex::new(source, flags).map_err(|m| self.err(start, m))?;
        let after = self.pos;
        if !(self.eat(".") && self.eat("test") && self.eat("(")) {
            return Err(self.err(after, "expected '.test(' after regex"));
        }
        let arg = self.or()?;
        if !self.eat(")") {
            return Err(self.err(self.pos, "expected ')'"));
        }
        Ok(FilterExpr::Test(re, Box::new(arg)))
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Val {
    Null,
    Bool(bool),
    Num(f64),
    Str(String),
}

impl Val {
    fn kind(&self) -> &'static str {
        match self {
            Val::Null => "null",
            Val::Bool(_) => "boolean",
            Val::Num(_) => "number",
            Val::Str(_) => "string",
        }
    }

    fn render(&self) -> String {
        match self {
            Val::Null => "null".into(),
            Val::Bool(b) => b.to_string(),
            Val::Num(n) => render_number(*n),
            Val::Str(s) => s.clone(),
        }
    }
}

/// Evaluates against the current cell. Missing values are null; null
/// propagates through comparisons, arithmetic and regex tests, logic is
/// three-valued, and a null result counts as `false`.
pub fn eval_filter(f: &FilterExpr, ctx: &EvalContext<'_>) -> Result<bool> {
    match eval(f, ctx)? {
        Val::Bool(b) => Ok(b),
        Val::Null => Ok(false),
        other => Err(Error::FilterType(format!(
            "filter '{f}' yields a {} instead of a boolean",
            other.kind()
        ))),
    }
}

fn logic(v: Val, op: &str) -> Result<Option<bool>> {
    match v {
        Val::Bool(b) => Ok(Some(b)),
        Val::Null => Ok(None),
        other => Err(Error::FilterType(format!(
            "operand of '{op}' is a {}",
            other.kind()
        ))),
    }
}

fn eval(f: &FilterExpr, ctx: &EvalContext<'_>) -> Result<Val> {
    Ok(match f {
        FilterExpr::Bool(b) => Val::Bool(*b),
        FilterExpr::Number(n) => Val::Num(*n),
        FilterExpr::Str(s) => Val::Str(s.clone()),
        FilterExpr::Var(v) => match eval_ref(&RefExpr::current(*v), ctx)? {
            None => Val::Null,
            Some(ScalarValue::Text(s)) => Val::Str(s),
            Some(ScalarValue::Number(n)) => Val::Num(n),
            Some(ScalarValue::Integer(i)) => Val::Num(i as f64),
            Some(ScalarValue::Boolean(b)) => Val::Bool(b),
        },
        FilterExpr::Not(e) => match logic(eval(e, ctx)?, "!")? {
            Some(b) => Val::Bool(!b),
            None => Val::Null,
        },
        FilterExpr::Neg(e) => match eval(e, ctx)? {
            Val::Num(n) => Val::Num(-n),
            Val::Null => Val::Null,
            other => {
                return Err(Error::FilterType(format!("cannot negate a {}", other.kind())))
            }
        },
        FilterExpr::Test(re, e) => match eval(e, ctx)? {
            Val::Null => Val::Null,
            v => Val::Bool(re.test(&v.render())),
        },
        FilterExpr::Binary(op @ (BinaryOp::And | BinaryOp::Or), l, r) => {
            let short = *op == BinaryOp::Or;
            let l = logic(eval(l, ctx)?, op.as_str())?;
            if l == Some(short) {
                return Ok(Val::Bool(short));
            }
            let r = logic(eval(r, ctx)?, op.as_str())?;
            match (l, r) {
                (_, Some(b)) if b == short => Val::Bool(short),
                (Some(_), Some(_)) => Val::Bool(!short),
                _ => Val::Null,
            }
        }
        FilterExpr::Binary(op, l, r) => {
            let (l, r) = (eval(l, ctx)?, eval(r, ctx)?);
            if l == Val::Null || r == Val::Null {
                return Ok(Val::Null);
            }
            match op {
                BinaryOp::Eq | BinaryOp::Ne | BinaryOp::Lt | BinaryOp::Le | BinaryOp::Gt
                | BinaryOp::Ge => Val::Bool(compare(*op, &l, &r)),
                _ => arithmetic(*op, l, r)?,
            }
        }
    })
}

fn compare(op: BinaryOp, l: &Val, r: &Val) -> bool {
    let ord = match (l, r) {
        (Val::Num(a), Val::Num(b)) => a.partial_cmp(b),
        (Val::Str(a), Val::Str(b)) => Some(a.cmp(b)),
        (Val::Bool(a), Val::Bool(b)) => Some(a.cmp(b)),
        _ => None,
    };
    match (op, ord) {
        (BinaryOp::Ne, ord) => ord != Some(Ordering::Equal),
        (_, None) => false,
        (BinaryOp::Eq, Some(o)) => o == Ordering::Equal,
        (BinaryOp::Lt, Some(o)) => o == Ordering::Less,
        (BinaryOp::Le, Some(o)) => o != Ordering::Greater,
        (BinaryOp::Gt, Some(o)) => o == Ordering::Greater,
        (BinaryOp::Ge, Some(o)) => o != Ordering::Less,
        _ => unreachable!("not a comparison"),
    }
}

fn arithmetic(op: BinaryOp, l: Val, r: Val) -> Result<Val> {
    match (op, &l, &r) {
        (BinaryOp::Add, Val::Str(_), _) | (BinaryOp::Add, _, Val::Str(_)) => {
            Ok(Val::Str(l.render() + &r.render()))
        }
        (_, Val::Num(a), Val::Num(b)) => Ok(Val::Num(match op {
            BinaryOp::Add => a + b,
            BinaryOp::Sub => a - b,
            BinaryOp::Mul => a * b,
            BinaryOp::Div => a / b,
            _ => unreachable!("not arithmetic"),
        })),
        _ => Err(Error::FilterType(format!(
            "'{}' applied to {} and {}",
            op.as_str(),
            l.kind(),
            r.kind()
        ))),
    }
}
