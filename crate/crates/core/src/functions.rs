//! Functions callable from object maps through `fnml:functionValue`.
//!
//! Built-ins live under `https://w3id.org/gridrml/fn#`:
//!
//! * `fn:split` (`fn:value`, `fn:separator`) returns the trimmed, non-empty
//!   pieces of a text.
//! * `fn:personsToGraph` (`fn:value`, `fn:baseIri`) returns a Turtle graph
//!   describing the persons named in a text, plus `ss:SelectedObjects`
//!   selections for the `ss:Graph` term type.

use std::collections::BTreeMap;
use std::fmt::Write;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expr::{eval_ref, iri_safe_encode, EvalContext, ScalarValue};
use crate::mapping::vocab::{RR_OBJECT, SS_SELECTED_OBJECTS};
use crate::mapping::{FunctionInvocation, TermMap, TermMapKind};
use crate::rdf::vocab::RDFS_LABEL;
use crate::rdf::{Literal, Term};

pub const FN: &str = "https://w3id.org/gridrml/fn#";
pub const FN_SPLIT: &str = "https://w3id.org/gridrml/fn#split";
pub const FN_PERSONS_TO_GRAPH: &str = "https://w3id.org/gridrml/fn#personsToGraph";
pub const FN_VALUE: &str = "https://w3id.org/gridrml/fn#value";
pub const FN_SEPARATOR: &str = "https://w3id.org/gridrml/fn#separator";
pub const FN_BASE_IRI: &str = "https://w3id.org/gridrml/fn#baseIri";

pub const FOAF_FIRST_NAME: &str = "http://xmlns.com/foaf/0.1/firstName";
pub const FOAF_LAST_NAME: &str = "http://xmlns.com/foaf/0.1/lastName";

#[derive(Debug, Clone, PartialEq)]
pub enum FunctionResult {
    Values(Vec<ScalarValue>),
    /// A serialized graph in Turtle.
    Graph(String),
}

/// Evaluated arguments keyed by parameter IRI. `None` is a missing value.
pub type Arguments = BTreeMap<String, Option<ScalarValue>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FunctionError {
    /// A bad argument, reported as `E_FN_PARAM`.
    Param(String),
    /// Anything else, reported as `E_FN_RUNTIME`.
    Runtime(String),
}

pub type FunctionBody =
    Arc<dyn Fn(&Arguments) -> std::result::Result<FunctionResult, FunctionError> + Send + Sync>;

#[derive(Clone)]
struct Registered {
    required: Vec<String>,
    body: FunctionBody,
}

/// Function IRIs bound to implementations. [`Default`] has the built-ins.
#[derive(Clone)]
pub struct FunctionRegistry {
    functions: BTreeMap<String, Registered>,
}

impl std::fmt::Debug for FunctionRegistry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.functions.keys()).finish()
    }
}

impl Default for FunctionRegistry {
    fn default() -> Self {
        let mut reg = FunctionRegistry::empty();
        reg.register(FN_SPLIT, &[FN_VALUE, FN_SEPARATOR], Arc::new(split_body));
        reg.register(FN_PERSONS_TO_GRAPH, &[FN_VALUE, FN_BASE_IRI], Arc::new(persons_body));
        reg
    }
}

impl FunctionRegistry {
    pub fn empty() -> Self {
        FunctionRegistry {
            functions: BTreeMap::new(),
        }
    }

    /// Returns `false`, leaving the registry unchanged, if `iri` is taken.
    pub fn register(&mut self, iri: &str, required: &[&str], body: FunctionBody) -> bool {
        if self.functions.contains_key(iri) {
            return false;
        }
        self.functions.insert(
            iri.to_owned(),
            Registered {
                required: required.iter().map(|s| s.to_string()).collect(),
                body,
            },
        );
        true
    }

    pub fn contains(&self, iri: &str) -> bool {
        self.functions.contains_key(iri)
    }

    pub fn iris(&self) -> impl Iterator<Item = &str> {
        self.functions.keys().map(String::as_str)
    }

    /// Calls a function on already evaluated arguments.
    pub fn call(&self, iri: &str, args: &Arguments) -> Result<FunctionResult> {
        let f = self
            .functions
            .get(iri)
            .ok_or_else(|| Error::FnUnregistered(iri.to_owned()))?;
        if let Some(missing) = f.required.iter().find(|p| !args.contains_key(*p)) {
            return Err(Error::FnParam {
                function: iri.to_owned(),
                message: format!("missing required parameter <{missing}>"),
            });
        }
        (f.body)(args).map_err(|e| match e {
            FunctionError::Param(message) => Error::FnParam {
                function: iri.to_owned(),
                message,
            },
            FunctionError::Runtime(message) => Error::FnRuntime {
                function: iri.to_owned(),
                message,
            },
        })
    }
}

/// Evaluates the parameter term maps against `ctx`, then calls the function.
pub fn invoke(
    reg: &FunctionRegistry,
    inv: &FunctionInvocation,
    ctx: &EvalContext<'_>,
) -> Result<FunctionResult> {
    if !reg.contains(&inv.function) {
        return Err(Error::FnUnregistered(inv.function.clone()));
    }
    let mut args = Arguments::new();
    for (iri, tm) in &inv.parameters {
        args.insert(iri.clone(), argument(reg, tm, ctx)?);
    }
    reg.call(&inv.function, &args)
}

fn argument(
    reg: &FunctionRegistry,
    tm: &TermMap,
    ctx: &EvalContext<'_>,
) -> Result<Option<ScalarValue>> {
    Ok(match &tm.kind {
        TermMapKind::Constant(Term::Literal(l)) => Some(ScalarValue::Text(l.lexical().to_owned())),
        TermMapKind::Constant(Term::Iri(i)) => Some(ScalarValue::Text(i.clone())),
        TermMapKind::Constant(Term::BlankNode(b)) => Some(ScalarValue::Text(format!("_:{b}"))),
        TermMapKind::Template(t) => t.expand(ctx, false)?.map(ScalarValue::Text),
        TermMapKind::Reference(r) => eval_ref(r, ctx)?,
        TermMapKind::Unresolved { .. } => None,
        TermMapKind::Function(inner) => match invoke(reg, inner, ctx)? {
            FunctionResult::Values(mut v) if v.len() <= 1 => v.pop(),
            _ => {
                return Err(Error::FnParam {
                    function: inner.function.clone(),
                    message: "a nested call must return at most one value".into(),
                })
            }
        },
    })
}

fn text_arg(args: &Arguments, iri: &str) -> Option<String> {
    args.get(iri).cloned().flatten().map(|v| v.to_string())
}

fn split_body(args: &Arguments) -> std::result::Result<FunctionResult, FunctionError> {
    let separator = text_arg(args, FN_SEPARATOR)
        .filter(|s| !s.is_empty())
        .ok_or_else(|| FunctionError::Param("separator must be a non-empty string".into()))?;
    let value = text_arg(args, FN_VALUE).unwrap_or_default();
    Ok(FunctionResult::Values(
        builtin_split(&value, &separator)
            .into_iter()
            .map(ScalarValue::Text)
            .collect(),
    ))
}

/// Splits on `separator`, trims every piece and drops empty ones.
pub fn builtin_split(value: &str, separator: &str) -> Vec<String> {
    if separator.is_empty() {
        return vec![value.trim().to_owned()].into_iter().filter(|s| !s.is_empty()).collect();
    }
    value
        .split(separator)
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_owned)
        .collect()
}

fn persons_body(args: &Arguments) -> std::result::Result<FunctionResult, FunctionError> {
    let base = text_arg(args, FN_BASE_IRI)
        .ok_or_else(|| FunctionError::Param("baseIri has no value".into()))?;
    let value = text_arg(args, FN_VALUE).unwrap_or_default();
    builtin_persons_to_graph(&value, &base)
        .map(FunctionResult::Graph)
        .map_err(FunctionError::Runtime)
}

/// A person named in a cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PersonName {
    Split { first: String, last: String },
    /// Could not be split; kept as a label.
    Label(String),
}

/// Splits a cell into names: pieces are separated by `;` or the word
/// `and`; a piece with a comma reads "last, first", otherwise the last
/// word is the last name.
pub fn parse_person_names(value: &str) -> Vec<PersonName> {
    let mut out = Vec::new();
    for chunk in value.split(';') {
        let mut words: Vec<&str> = Vec::new();
        let mut flush = |words: &mut Vec<&str>| {
            if !words.is_empty() {
                out.push(person(&words.join(" ")));
                words.clear();
            }
        };
        for w in chunk.split_whitespace() {
            if w == "and" {
                flush(&mut words);
            } else {
                words.push(w);
            }
        }
        flush(&mut words);
    }
    out
}

fn person(piece: &str) -> PersonName {
    let (first, last) = if let Some((last, first)) = piece.rsplit_once(',') {
        (first.trim(), last.trim())
    } else if let Some((first, last)) = piece.rsplit_once(' ') {
        (first.trim(), last.trim())
    } else {
        ("", "")
    };
    if first.is_empty() || last.is_empty() {
        PersonName::Label(piece.to_owned())
    } else {
        PersonName::Split {
            first: first.to_owned(),
            last: last.to_owned(),
        }
    }
}

fn slug(text: &str) -> String {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|w| !w.is_empty())
        .map(|w| iri_safe_encode(&w.to_lowercase()))
        .collect::<Vec<_>>()
        .join("-")
}

/// Turtle for the persons in `value`: one resource `<base><slug>` each,
/// followed by the `ss:SelectedObjects rr:object` selections in input order.
pub fn builtin_persons_to_graph(value: &str, base: &str) -> std::result::Result<String, String> {
    let mut body = String::new();
    let mut selected: Vec<Term> = Vec::new();
    for name in parse_person_names(value) {
        let (key, statements) = match &name {
            PersonName::Split { first, last } => (
                format!("{first} {last}"),
                vec![
                    (FOAF_FIRST_NAME, Literal::string(first.as_str())),
                    (FOAF_LAST_NAME, Literal::string(last.as_str())),
                ],
            ),
            PersonName::Label(l) => (l.clone(), vec![(RDFS_LABEL, Literal::string(l.as_str()))]),
        };
        let iri = Term::checked_iri(format!("{base}{}", slug(&key))).map_err(|e| e.to_string())?;
        if selected.contains(&iri) {
            continue;
        }
        for (p, o) in statements {
            let _ = writeln!(body, "{iri} <{p}> {} .", Term::Literal(o));
        }
        selected.push(iri);
    }
    for iri in &selected {
        let _ = writeln!(body, "<{SS_SELECTED_OBJECTS}> <{RR_OBJECT}> {iri} .");
    }
    Ok(body)
}
