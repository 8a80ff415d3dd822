use super::model::{ExprKind, TermMap, TermMapKind, TermType, TriplesMap};
use super::vocab::*;
use crate::rdf::vocab::{RDF_FIRST, RDF_NIL, RDF_REST, XSD_BOOLEAN};
use crate::rdf::{Graph, Literal, Term};

/// Writes maps back to the mapping vocabulary in normalized form: explicit
/// term maps instead of constant shortcuts, filters fully parenthesized.
/// Parsing the result yields the same maps (up to blank-node identity).
pub fn model_to_graph(maps: &[TriplesMap]) -> Graph {
    let mut w = Writer {
        g: Graph::new(),
        next: 0,
    };
    for m in maps {
        w.triples_map(m);
    }
    w.g
}

struct Writer {
    g: Graph,
    next: usize,
}

fn iri(s: &str) -> Term {
    Term::iri(s)
}

fn lit(s: impl Into<String>) -> Term {
    Term::literal(Literal::string(s))
}

impl Writer {
    fn fresh(&mut self) -> Term {
        self.next += 1;
        Term::blank(format!("w{}", self.next))
    }

    fn add(&mut self, s: &Term, p: &str, o: Term) {
        self.g.add(s.clone(), iri(p), o);
    }

    fn triples_map(&mut self, m: &TriplesMap) {
        let id = m.id.clone();
        let ls = self.fresh();
        let src = self.fresh();
        self.add(&id, RML_LOGICAL_SOURCE, ls.clone());
        self.add(&ls, RML_REFERENCE_FORMULATION, iri(QL_SPREADSHEET));
        self.add(&ls, RML_SOURCE, src.clone());
        self.add(&src, SS_URL, lit(&m.source.url));
        self.add(&src, SS_SHEET_NAME, lit(&m.source.sheet_name));
        self.add(&src, SS_RANGE, lit(m.source.range.to_string()));
        if let Some(f) = &m.source.filter {
            self.add(&src, SS_JAVASCRIPT_FILTER, lit(f.to_string()));
        }
        let sm = self.term_map(&m.subject);
        self.add(&id, RR_SUBJECT_MAP, sm.clone());
        for c in &m.classes {
            self.add(&sm, RR_CLASS, iri(c));
        }
        for pom in &m.predicate_object_maps {
            let node = self.fresh();
            self.add(&id, RR_PREDICATE_OBJECT_MAP, node.clone());
            for p in &pom.predicates {
                let pm = self.term_map(p);
                self.add(&node, RR_PREDICATE_MAP, pm);
            }
            for list in &pom.predicate_lists {
                let head = self.list(list);
                self.add(&node, RR_PREDICATE_MAP, head);
            }
            for o in &pom.objects {
                let om = self.term_map(o);
                self.add(&node, RR_OBJECT_MAP, om);
            }
            if pom.zip {
                self.add(&node, SS_ZIP, Term::literal(Literal::typed("true", XSD_BOOLEAN)));
            }
        }
    }

    fn list(&mut self, items: &[Term]) -> Term {
        let mut head = iri(RDF_NIL);
        for item in items.iter().rev() {
            let node = self.fresh();
            self.add(&node, RDF_FIRST, item.clone());
            self.add(&node, RDF_REST, head);
            head = node;
        }
        head
    }

    fn term_map(&mut self, tm: &TermMap) -> Term {
        let node = self.fresh();
        match &tm.kind {
            TermMapKind::Constant(t) => self.add(&node, RR_CONSTANT, t.clone()),
            TermMapKind::Template(t) => self.add(&node, RR_TEMPLATE, lit(t.to_string())),
            TermMapKind::Reference(r) => self.add(&node, RML_REFERENCE, lit(r.to_string())),
            TermMapKind::Unresolved { kind, text, .. } => {
                let p = match kind {
                    ExprKind::Template => RR_TEMPLATE,
                    ExprKind::Reference => RML_REFERENCE,
                };
                self.add(&node, p, lit(text.as_str()));
            }
            TermMapKind::Function(f) => {
                let fnode = self.fresh();
                self.add(&node, FNML_FUNCTION_VALUE, fnode.clone());
                self.add(&fnode, FNO_EXECUTES, iri(&f.function));
                for (p, arg) in &f.parameters {
                    let a = self.term_map(arg);
                    self.add(&fnode, p, a);
                }
            }
        }
        if let Some(t) = tm.term_type {
            let t = match t {
                TermType::Iri => RR_IRI,
                TermType::BlankNode => RR_BLANK_NODE,
                TermType::Literal => RR_LITERAL,
                TermType::Graph => SS_GRAPH,
            };
            self.add(&node, RR_TERM_TYPE, iri(t));
        }
        if let Some(d) = &tm.datatype {
            self.add(&node, RR_DATATYPE, iri(d));
        }
        if let Some(l) = &tm.language {
            self.add(&node, RR_LANGUAGE, lit(l.as_str()));
        }
        node
    }
}
