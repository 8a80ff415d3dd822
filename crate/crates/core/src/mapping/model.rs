use std::collections::BTreeMap;

use crate::expr::{FilterExpr, RefExpr, Template};
use crate::rdf::Term;
use crate::workbook::CellRange;

/// Where a triples map reads its cells from.
#[derive(Debug, Clone, PartialEq)]
pub struct SpreadsheetSource {
    pub url: String,
    pub sheet_name: String,
    pub range: CellRange,
    pub filter: Option<FilterExpr>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TermType {
    Iri,
    BlankNode,
    Literal,
    /// `ss:Graph`: the object is a serialized graph returned by a function.
    Graph,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExprKind {
    Template,
    Reference,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TermMapKind {
    Constant(Term),
    Template(Template),
    Reference(RefExpr),
    Function(FunctionInvocation),
    /// A template or reference naming a variable outside the catalog. Kept
    /// so validation can warn about it; it never produces a term.
    Unresolved {
        kind: ExprKind,
        text: String,
        variable: String,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TermMap {
    pub kind: TermMapKind,
    pub term_type: Option<TermType>,
    pub datatype: Option<String>,
    pub language: Option<String>,
}

impl TermMap {
    pub fn new(kind: TermMapKind) -> Self {
        TermMap {
            kind,
            term_type: None,
            datatype: None,
            language: None,
        }
    }

    pub fn constant(term: Term) -> Self {
        TermMap::new(TermMapKind::Constant(term))
    }

    pub fn function(&self) -> Option<&FunctionInvocation> {
        match &self.kind {
            TermMapKind::Function(f) => Some(f),
            _ => None,
        }
    }

    /// The term type this map produces when none is given explicitly.
    /// References and functions yield literals in object position, every
    /// other kind follows R2RML's defaults.
    pub fn effective_term_type(&self, object_position: bool) -> TermType {
        if let Some(t) = self.term_type {
            return t;
        }
        if self.datatype.is_some() || self.language.is_some() {
            return TermType::Literal;
        }
        match &self.kind {
            TermMapKind::Constant(Term::Literal(_)) => TermType::Literal,
            TermMapKind::Constant(Term::BlankNode(_)) => TermType::BlankNode,
            TermMapKind::Constant(Term::Iri(_)) | TermMapKind::Template(_) => TermType::Iri,
            TermMapKind::Reference(_)
            | TermMapKind::Function(_)
            | TermMapKind::Unresolved { .. } => {
                if object_position {
                    TermType::Literal
                } else {
                    TermType::Iri
                }
            }
        }
    }
}

/// A call of a registered function. Parameters are keyed by IRI.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionInvocation {
    pub function: String,
    pub parameters: BTreeMap<String, TermMap>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PredicateObjectMap {
    /// Predicate maps producing one predicate each.
    pub predicates: Vec<TermMap>,
    /// Predicates given as RDF collections, in list order.
    pub predicate_lists: Vec<Vec<Term>>,
    pub objects: Vec<TermMap>,
    pub zip: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TriplesMap {
    pub id: Term,
    pub source: SpreadsheetSource,
    pub subject: TermMap,
    pub classes: Vec<String>,
    pub predicate_object_maps: Vec<PredicateObjectMap>,
}

impl TriplesMap {
    /// Every term map of this triples map, including function parameters.
    pub fn term_maps(&self) -> Vec<&TermMap> {
        fn walk<'a>(tm: &'a TermMap, out: &mut Vec<&'a TermMap>) {
            out.push(tm);
            if let TermMapKind::Function(f) = &tm.kind {
                for p in f.parameters.values() {
                    walk(p, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.subject, &mut out);
        for pom in &self.predicate_object_maps {
            for tm in pom.predicates.iter().chain(&pom.objects) {
                walk(tm, &mut out);
            }
        }
        out
    }
}
