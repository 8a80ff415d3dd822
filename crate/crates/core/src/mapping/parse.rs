use std::collections::BTreeMap;

use super::model::{
    ExprKind, FunctionInvocation, PredicateObjectMap, SpreadsheetSource, TermMap, TermMapKind,
    TermType, TriplesMap,
};
use super::vocab::*;
use crate::diagnostic::Diagnostic;
use crate::error::{Error, Result};
use crate::expr::{parse_filter, parse_ref_expr, parse_template};
use crate::rdf::vocab::{RDF_FIRST, RDF_NIL, RDF_TYPE};
use crate::rdf::{parse_turtle, rdf_list, Graph, Term};
use crate::workbook::parse_range;

const KIND_PROPERTIES: [&str; 4] = [RR_CONSTANT, RR_TEMPLATE, RML_REFERENCE, FNML_FUNCTION_VALUE];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Position {
    Subject,
    Predicate,
    Object,
    Parameter,
}

/// Parses Turtle text and then the mapping it describes. Turtle syntax
/// errors come back as a single diagnostic.
pub fn parse_mapping_text(text: &str, base: &str) -> (Vec<TriplesMap>, Vec<Diagnostic>) {
    match parse_turtle(text, base) {
        Ok(g) => parse_mapping_document(&g),
        Err(e) => (Vec::new(), vec![Diagnostic::from(e)]),
    }
}

/// Turns every resource with a spreadsheet logical source into a
/// [`TriplesMap`]. A map with an error is dropped and reported; parsing
/// carries on with the rest.
pub fn parse_mapping_document(g: &Graph) -> (Vec<TriplesMap>, Vec<Diagnostic>) {
    let reader = Reader { g };
    let mut maps = Vec::new();
    let mut diags = Vec::new();

    let mut candidates: Vec<&Term> = g.subjects_with(RML_LOGICAL_SOURCE);
    for t in g.iter() {
        if t.predicate.as_iri() == Some(RDF_TYPE)
            && t.object.as_iri() == Some(RR_TRIPLES_MAP)
            && !candidates.contains(&&t.subject)
        {
            candidates.push(&t.subject);
        }
    }

    for id in candidates {
        let mut local = Vec::new();
        match reader.triples_map(id, &mut local) {
            Ok(Some(m)) => maps.push(m),
            Ok(None) => {}
            Err(e) => local.push(Diagnostic::from(e)),
        }
        diags.extend(local.into_iter().map(|d| {
            if d.triples_map.is_some() {
                d
            } else {
                d.with_triples_map(id)
            }
        }));
    }
    (maps, diags)
}

struct Reader<'g> {
    g: &'g Graph,
}

fn bad(message: impl Into<String>) -> Error {
    Error::BadTermMap(message.into())
}

impl<'g> Reader<'g> {
    fn all(&self, s: &'g Term, p: &'g str) -> Vec<&'g Term> {
        self.g.objects(s, p).collect()
    }

    fn one(&self, s: &'g Term, p: &'g str) -> Result<Option<&'g Term>> {
        let mut it = self.g.objects(s, p);
        let first = it.next();
        if it.next().is_some() {
            return Err(bad(format!("{s} has more than one <{p}>")));
        }
        Ok(first)
    }

    fn text(&self, s: &'g Term, p: &'static str) -> Result<Option<String>> {
        Ok(self.one(s, p)?.map(|o| match o {
            Term::Literal(l) => l.lexical().to_owned(),
            Term::Iri(i) => i.clone(),
            Term::BlankNode(b) => format!("_:{b}"),
        }))
    }

    fn is_list(&self, node: &Term) -> bool {
        node.as_iri() == Some(RDF_NIL) || self.g.object(node, RDF_FIRST).is_some()
    }

    fn has_kind(&self, node: &Term) -> bool {
        !node.is_literal() && KIND_PROPERTIES.iter().any(|p| self.g.object(node, p).is_some())
    }

    fn triples_map(&self, id: &'g Term, diags: &mut Vec<Diagnostic>) -> Result<Option<TriplesMap>> {
        let missing = |field: &'static str| Error::MissingSourceField {
            node: id.to_string(),
            field,
        };
        let Some(ls) = self.one(id, RML_LOGICAL_SOURCE)? else {
            return Err(missing("rml:logicalSource"));
        };
        let src = self.one(ls, RML_SOURCE)?;
        let spreadsheet = match self.one(ls, RML_REFERENCE_FORMULATION)? {
            Some(rf) => rf.as_iri() == Some(QL_SPREADSHEET),
            None => src.is_some_and(|s| {
                self.g.objects(s, RDF_TYPE).any(|t| t.as_iri() == Some(SS_WORKBOOK))
            }),
        };
        if !spreadsheet {
            diags.push(
                Diagnostic::warning(
                    "W_UNSUPPORTED_FORMULATION",
                    "skipped: unsupported reference formulation",
                )
                .with_focus(ls),
            );
            return Ok(None);
        }
        let src = match src {
            Some(s) if !s.is_literal() => s,
            _ => return Err(missing("rml:source")),
        };
        let url = self.text(src, SS_URL)?.ok_or_else(|| missing("ss:url"))?;
        let sheet_name = self.text(src, SS_SHEET_NAME)?.ok_or_else(|| missing("ss:sheetName"))?;
        let range = parse_range(&self.text(src, SS_RANGE)?.ok_or_else(|| missing("ss:range"))?)?;
        let filter = self
            .text(src, SS_JAVASCRIPT_FILTER)?
            .map(|f| parse_filter(&f))
            .transpose()?;
        let source = SpreadsheetSource {
            url,
            sheet_name,
            range,
            filter,
        };

        let mut classes = Vec::new();
        let subject_maps = self.all(id, RR_SUBJECT_MAP);
        let subject_constants = self.all(id, RR_SUBJECT);
        let subject = match (subject_maps.as_slice(), subject_constants.as_slice()) {
            (&[node], []) => {
                for c in self.all(node, RR_CLASS) {
                    let iri = c.as_iri().ok_or_else(|| bad(format!("rr:class {c} is not an IRI")))?;
                    classes.push(iri.to_owned());
                }
                self.term_map(node, Position::Subject)?
            }
            ([], &[constant]) => self.shortcut(constant, Position::Subject)?,
            ([], []) => return Err(bad(format!("triples map {id} has no subject map"))),
            _ => return Err(bad(format!("triples map {id} has more than one subject map"))),
        };

        let mut poms = Vec::new();
        for node in self.all(id, RR_PREDICATE_OBJECT_MAP) {
            if let Some(pom) = self.predicate_object_map(node, diags)? {
                poms.push(pom);
            }
        }
        Ok(Some(TriplesMap {
            id: id.clone(),
            source,
            subject,
            classes,
            predicate_object_maps: poms,
        }))
    }

    fn predicate_object_map(
        &self,
        node: &'g Term,
        diags: &mut Vec<Diagnostic>,
    ) -> Result<Option<PredicateObjectMap>> {
        let mut predicates = Vec::new();
        let mut predicate_lists = Vec::new();
        for (prop, shortcut) in [(RR_PREDICATE, true), (RR_PREDICATE_MAP, false)] {
            for p in self.all(node, prop) {
                if self.is_list(p) {
                    let items = rdf_list(self.g, p)?;
                    if let Some(bad_item) = items.iter().find(|t| !t.is_iri()) {
                        return Err(bad(format!("predicate list item {bad_item} is not an IRI")));
                    }
                    predicate_lists.push(items);
                } else if shortcut {
                    predicates.push(self.shortcut(p, Position::Predicate)?);
                } else {
                    predicates.push(self.term_map(p, Position::Predicate)?);
                }
            }
        }

        let mut objects = Vec::new();
        let mut joins = 0;
        for o in self.all(node, RR_OBJECT) {
            objects.push(self.shortcut(o, Position::Object)?);
        }
        for o in self.all(node, RR_OBJECT_MAP) {
            if !o.is_literal() && self.g.object(o, RR_PARENT_TRIPLES_MAP).is_some() {
                diags.push(
                    Diagnostic::warning("W_UNSUPPORTED_JOIN", "skipped: referencing object maps are not supported")
                        .with_focus(o),
                );
                joins += 1;
                continue;
            }
            objects.push(self.term_map(o, Position::Object)?);
        }
        if self.g.object(node, RR_GRAPH_MAP).is_some() {
            diags.push(
                Diagnostic::warning("W_UNSUPPORTED_GRAPH_MAP", "ignored: graph maps are not supported")
                    .with_focus(node),
            );
        }

        let zip = match self.one(node, SS_ZIP)? {
            None => false,
            Some(Term::Literal(l)) if matches!(l.lexical(), "true" | "1") => true,
            Some(Term::Literal(l)) if matches!(l.lexical(), "false" | "0") => false,
            Some(other) => return Err(bad(format!("ss:zip value {other} is not a boolean"))),
        };

        if predicates.is_empty() && predicate_lists.is_empty() {
            return Err(bad(format!("predicate-object map {node} has no predicate")));
        }
        if objects.is_empty() {
            if joins > 0 {
                return Ok(None);
            }
            return Err(bad(format!("predicate-object map {node} has no object")));
        }
        if zip {
            if !predicates.is_empty() || predicate_lists.is_empty() {
                return Err(Error::ZipShape(
                    "ss:zip needs its predicates given as an RDF list".into(),
                ));
            }
            if objects.iter().any(|o| o.term_type == Some(TermType::Graph)) {
                return Err(Error::ZipShape("ss:zip cannot pair ss:Graph objects".into()));
            }
        }
        Ok(Some(PredicateObjectMap {
            predicates,
            predicate_lists,
            objects,
            zip,
        }))
    }

    /// `rr:subject` / `rr:predicate` / `rr:object` constants.
    fn shortcut(&self, value: &'g Term, position: Position) -> Result<TermMap> {
        if self.is_list(value) {
            return Err(bad(format!("RDF collection {value} is only allowed as a predicate list")));
        }
        if position == Position::Predicate && !value.is_iri() {
            return Err(bad(format!("predicate {value} is not an IRI")));
        }
        Ok(TermMap::constant(value.clone()))
    }

    fn term_map(&self, node: &'g Term, position: Position) -> Result<TermMap> {
        if node.is_literal() {
            return Err(bad(format!("term map {node} must be a resource")));
        }
        let present: Vec<(&str, &'g Term)> = KIND_PROPERTIES
            .iter()
            .map(|p| self.one(node, p).map(|v| v.map(|v| (*p, v))))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        let (prop, value) = match present[..] {
            [one] => one,
            [] => {
                return Err(bad(format!(
                    "term map {node} has none of rr:constant, rr:template, rml:reference, fnml:functionValue"
                )))
            }
            _ => return Err(bad(format!("term map {node} mixes several kinds"))),
        };
        let kind = match prop {
            RR_CONSTANT => {
                if self.is_list(value) {
                    return Err(bad(format!(
                        "RDF collection {value} is only allowed as a predicate list"
                    )));
                }
                TermMapKind::Constant(value.clone())
            }
            RR_TEMPLATE => {
                let text = literal_text(value, "rr:template")?;
                match parse_template(&text) {
                    Ok(t) => TermMapKind::Template(t),
                    Err(Error::UnknownVariable(variable)) => TermMapKind::Unresolved {
                        kind: ExprKind::Template,
                        text,
                        variable,
                    },
                    Err(e) => return Err(e),
                }
            }
            RML_REFERENCE => {
                let text = literal_text(value, "rml:reference")?;
                match parse_ref_expr(&text) {
                    Ok(r) => TermMapKind::Reference(r),
                    Err(Error::UnknownVariable(variable)) => TermMapKind::Unresolved {
                        kind: ExprKind::Reference,
                        text,
                        variable,
                    },
                    Err(e) => return Err(e),
                }
            }
            _ => TermMapKind::Function(self.function(value)?),
        };

        let term_type = match self.one(node, RR_TERM_TYPE)? {
            None => None,
            Some(t) => Some(match t.as_iri() {
                Some(RR_IRI) => TermType::Iri,
                Some(RR_BLANK_NODE) => TermType::BlankNode,
                Some(RR_LITERAL) => TermType::Literal,
                Some(SS_GRAPH) => TermType::Graph,
                _ => return Err(bad(format!("unknown rr:termType {t}"))),
            }),
        };
        let datatype = match self.one(node, RR_DATATYPE)? {
            None => None,
            Some(Term::Iri(i)) => Some(i.clone()),
            Some(other) => return Err(bad(format!("rr:datatype {other} is not an IRI"))),
        };
        let language = self
            .one(node, RR_LANGUAGE)?
            .map(|l| literal_text(l, "rr:language"))
            .transpose()?;
        if datatype.is_some() && language.is_some() {
            return Err(bad(format!("term map {node} has both rr:datatype and rr:language")));
        }
        let tm = TermMap {
            kind,
            term_type,
            datatype,
            language,
        };
        if tm.term_type == Some(TermType::Graph) {
            if position != Position::Object || tm.function().is_none() {
                return Err(bad(format!(
                    "ss:Graph is only allowed on object maps with a function value ({node})"
                )));
            }
            if tm.datatype.is_some() || tm.language.is_some() {
                return Err(bad(format!("ss:Graph term map {node} cannot carry a datatype or language")));
            }
        }
        if position == Position::Predicate && tm.effective_term_type(false) != TermType::Iri {
            return Err(bad(format!("predicate map {node} must produce IRIs")));
        }
        Ok(tm)
    }

    fn function(&self, node: &'g Term) -> Result<FunctionInvocation> {
        if node.is_literal() {
            return Err(bad(format!("function value {node} must be a resource")));
        }
        let function = match self.one(node, FNO_EXECUTES)? {
            Some(Term::Iri(i)) => i.clone(),
            Some(other) => return Err(bad(format!("fno:executes {other} is not an IRI"))),
            None => return Err(bad(format!("function value {node} lacks fno:executes"))),
        };
        let mut parameters = BTreeMap::new();
        for t in self.g.iter().filter(|t| &t.subject == node) {
            let p = t.predicate.as_iri().expect("predicates are IRIs");
            if p == FNO_EXECUTES || p == RDF_TYPE {
                continue;
            }
            let value = if self.has_kind(&t.object) {
                self.term_map(&t.object, Position::Parameter)?
            } else if t.object.is_blank() {
                return Err(bad(format!("parameter <{p}> of {node} is an empty node")));
            } else {
                self.shortcut(&t.object, Position::Parameter)?
            };
            if parameters.insert(p.to_owned(), value).is_some() {
                return Err(bad(format!("parameter <{p}> bound twice on {node}")));
            }
        }
        Ok(FunctionInvocation {
            function,
            parameters,
        })
    }
}

fn literal_text(t: &Term, what: &str) -> Result<String> {
    t.as_literal()
        .map(|l| l.lexical().to_owned())
        .ok_or_else(|| bad(format!("{what} value {t} is not a literal")))
}
