//! Executes triples maps against workbooks.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::diagnostic::{Diagnostic, Severity};
use crate::error::{Error, Result};
use crate::expr::{double_lexical, eval_filter, eval_ref, EvalContext, ScalarValue};
use crate::functions::{invoke, FunctionRegistry, FunctionResult};
use crate::mapping::vocab::{RR_OBJECT, SS_SELECTED_OBJECTS};
use crate::mapping::{
    parse_mapping_text, validate_model, PredicateObjectMap, TermMap, TermMapKind, TermType,
    TriplesMap,
};
use crate::rdf::vocab::{RDF_TYPE, XSD_BOOLEAN, XSD_DOUBLE, XSD_INTEGER};
use crate::rdf::{Graph, Literal, Term, Triple, TurtleParser};
use crate::workbook::Workbook;

pub const DEFAULT_BASE_IRI: &str = "http://example.org/";

/// Finds the workbook an `ss:url` names.
pub trait WorkbookResolver: Send + Sync {
    fn resolve(&self, url: &str) -> Result<Arc<Workbook>>;
}

/// Resolves `ss:url` against a root directory, caching by canonical path.
#[derive(Debug)]
pub struct FsResolver {
    root: PathBuf,
    cache: Mutex<HashMap<PathBuf, Arc<Workbook>>>,
}

impl FsResolver {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        FsResolver {
            root: root.into(),
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }
}

impl WorkbookResolver for FsResolver {
    fn resolve(&self, url: &str) -> Result<Arc<Workbook>> {
        let joined = self.root.join(url);
        let path = joined
            .canonicalize()
            .map_err(|e| Error::Io(format!("{}: {e}", joined.display())))?;
        let mut cache = self.cache.lock().unwrap_or_else(|p| p.into_inner());
        if let Some(wb) = cache.get(&path) {
            return Ok(wb.clone());
        }
        let wb = Arc::new(Workbook::open(&path)?);
        cache.insert(path, wb.clone());
        Ok(wb)
    }
}

/// Serves workbooks held in memory by name. A URL matches a name exactly,
/// or by its last path segment. Never touches the filesystem.
#[derive(Debug, Default, Clone)]
pub struct MemoryResolver {
    workbooks: Vec<(String, Arc<Workbook>)>,
}

impl MemoryResolver {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: impl Into<String>, workbook: Workbook) {
        self.workbooks.push((name.into(), Arc::new(workbook)));
    }
}

fn basename(s: &str) -> &str {
    s.rsplit(['/', '\\']).next().unwrap_or(s)
}

impl WorkbookResolver for MemoryResolver {
    fn resolve(&self, url: &str) -> Result<Arc<Workbook>> {
        self.workbooks
            .iter()
            .find(|(n, _)| n == url)
            .or_else(|| {
                self.workbooks
                    .iter()
                    .find(|(n, _)| basename(n) == basename(url))
            })
            .map(|(_, wb)| wb.clone())
            .ok_or_else(|| Error::Io(format!("no workbook named '{url}' was provided")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExecutionOptions {
    /// Relative IRIs produced by term maps are resolved against this.
    pub base_iri: String,
    /// Stop at the first error and return an empty graph.
    pub strict: bool,
    /// Also iterate cells that exist only for their style.
    pub include_blank_cells: bool,
}

impl Default for ExecutionOptions {
    fn default() -> Self {
        ExecutionOptions {
            base_iri: DEFAULT_BASE_IRI.to_owned(),
            strict: false,
            include_blank_cells: false,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Stats {
    /// Cells present in the iterated ranges.
    pub cells_visited: usize,
    /// Cells that passed the blank check and the filter.
    pub cells_matched: usize,
    pub triples_emitted: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Execution {
    pub graph: Graph,
    pub diagnostics: Vec<Diagnostic>,
    pub stats: Stats,
}

impl Execution {
    pub fn has_errors(&self) -> bool {
        self.diagnostics.iter().any(Diagnostic::is_error)
    }
}

/// Pairs predicates with objects: every combination, predicate-major, or
/// with `zip` the j-th predicate with the j-th object.
pub fn combine(predicates: &[Term], objects: &[Term], zip: bool) -> Result<Vec<(Term, Term)>> {
    if zip {
        if predicates.len() != objects.len() {
            return Err(Error::ZipLength {
                predicates: predicates.len(),
                objects: objects.len(),
            });
        }
        return Ok(predicates.iter().cloned().zip(objects.iter().cloned()).collect());
    }
    Ok(predicates
        .iter()
        .flat_map(|p| objects.iter().map(move |o| (p.clone(), o.clone())))
        .collect())
}

/// Merges a function's graph into `out` and links `subject` to its
/// selected objects under every predicate. Blank nodes are relabeled with
/// `prefix` so separate invocations never share labels.
pub fn apply_graph_term_type(
    graph_text: &str,
    prefix: &str,
    subject: &Term,
    predicates: &[Term],
    out: &mut Graph,
) -> Result<Vec<Diagnostic>> {
    let parsed = TurtleParser::new("")
        .with_blank_prefix(prefix)
        .parse(graph_text)
        .map_err(|e| Error::GraphParse(e.to_string()))?;
    let mut selected = Vec::new();
    for t in parsed {
        if t.subject.as_iri() == Some(SS_SELECTED_OBJECTS) && t.predicate.as_iri() == Some(RR_OBJECT)
        {
            selected.push(t.object);
        } else {
            out.insert(t);
        }
    }
    if selected.is_empty() {
        return Ok(vec![Diagnostic::warning(
            "W_NO_SELECTION",
            "graph result selects no objects; merged without links",
        )]);
    }
    for p in predicates {
        for o in &selected {
            out.add(subject.clone(), p.clone(), o.clone());
        }
    }
    Ok(Vec::new())
}

/// Blank-node label for a generated value: ASCII letters and digits are
/// kept, every other byte becomes `_XX`.
fn blank_label(value: &str) -> String {
    let mut s = String::from("t");
    for b in value.bytes() {
        if b.is_ascii_alphanumeric() {
            s.push(b as char);
        } else {
            s.push_str(&format!("_{b:02X}"));
        }
    }
    s
}

struct Abort;

enum ObjectValue {
    Terms(Vec<Term>),
    Graph(String),
}

pub struct Engine {
    options: ExecutionOptions,
    registry: FunctionRegistry,
}

impl Engine {
    pub fn new(options: ExecutionOptions) -> Self {
        Self::with_registry(options, FunctionRegistry::default())
    }

    pub fn with_registry(options: ExecutionOptions, registry: FunctionRegistry) -> Self {
        Engine { options, registry }
    }

    pub fn options(&self) -> &ExecutionOptions {
        &self.options
    }

    pub fn registry(&self) -> &FunctionRegistry {
        &self.registry
    }

    /// Parses, validates and executes a Turtle mapping document.
    pub fn run_text(&self, mapping: &str, resolver: &dyn WorkbookResolver) -> Execution {
        let (maps, mut diagnostics) = parse_mapping_text(mapping, &self.options.base_iri);
        diagnostics.extend(validate_model(&maps, &self.registry));
        if self.options.strict && diagnostics.iter().any(Diagnostic::is_error) {
            return Execution {
                diagnostics,
                ..Default::default()
            };
        }
        let mut exec = self.execute(&maps, resolver);
        diagnostics.append(&mut exec.diagnostics);
        exec.diagnostics = diagnostics;
        exec
    }

    pub fn execute(&self, maps: &[TriplesMap], resolver: &dyn WorkbookResolver) -> Execution {
        let mut run = Run {
            engine: self,
            graph: Graph::new(),
            diagnostics: Vec::new(),
            stats: Stats::default(),
            graph_calls: 0,
        };
        let aborted = maps.iter().try_for_each(|m| run.triples_map(m, resolver)).is_err();
        let mut graph = run.graph;
        if aborted {
            graph = Graph::new();
        }
        run.stats.triples_emitted = graph.len();
        Execution {
            graph,
            diagnostics: run.diagnostics,
            stats: run.stats,
        }
    }
}

struct Run<'e> {
    engine: &'e Engine,
    graph: Graph,
    diagnostics: Vec<Diagnostic>,
    stats: Stats,
    graph_calls: usize,
}

impl Run<'_> {
    fn report(&mut self, d: Diagnostic) -> std::result::Result<(), Abort> {
        let fatal = self.engine.options.strict && d.is_error();
        self.diagnostics.push(d);
        if fatal {
            Err(Abort)
        } else {
            Ok(())
        }
    }

    fn triples_map(
        &mut self,
        m: &TriplesMap,
        resolver: &dyn WorkbookResolver,
    ) -> std::result::Result<(), Abort> {
        let src = &m.source;
        let workbook = match resolver.resolve(&src.url) {
            Ok(wb) => wb,
            Err(e) => return self.report(Diagnostic::from(e).with_triples_map(&m.id)),
        };
        let sheet = match workbook.sheet(&src.sheet_name) {
            Ok(s) => s,
            Err(e) => return self.report(Diagnostic::from(e).with_triples_map(&m.id)),
        };
        if m.subject.effective_term_type(false) == TermType::Literal
            || matches!(m.subject.kind, TermMapKind::Constant(Term::Literal(_)))
        {
            // already reported by validation
            return Ok(());
        }
        for cell in sheet.cells_in(src.range) {
            self.stats.cells_visited += 1;
            if cell.is_blank() && !self.engine.options.include_blank_cells {
                continue;
            }
            let ctx = EvalContext::new(&workbook, &src.sheet_name, cell.address);
            let located = |d: Diagnostic| d.with_triples_map(&m.id).with_cell(cell.address);
            if let Some(f) = &src.filter {
                match eval_filter(f, &ctx) {
                    Ok(true) => {}
                    Ok(false) => continue,
                    Err(e) => {
                        self.report(located(e.into()))?;
                        continue;
                    }
                }
            }
            self.stats.cells_matched += 1;
            let subject = match self.single_term(&m.subject, &ctx, false) {
                Ok(Some(s)) => s,
                Ok(None) => {
                    self.report(located(Diagnostic::warning(
                        "W_NO_SUBJECT",
                        "subject map produced no term; cell skipped",
                    )))?;
                    continue;
                }
                Err(e) => {
                    self.report(located(e.into()))?;
                    continue;
                }
            };
            for class in &m.classes {
                self.graph
                    .add(subject.clone(), Term::iri(RDF_TYPE), Term::iri(class.as_str()));
            }
            for pom in &m.predicate_object_maps {
                let diags = self.predicate_object_map(pom, &subject, &ctx);
                for d in diags {
                    self.report(located(d))?;
                }
            }
        }
        Ok(())
    }

    /// Emits one predicate-object map for one cell. Problems come back as
    /// diagnostics; emission for this map and cell stops at the first one.
    fn predicate_object_map(
        &mut self,
        pom: &PredicateObjectMap,
        subject: &Term,
        ctx: &EvalContext<'_>,
    ) -> Vec<Diagnostic> {
        let mut diags = Vec::new();
        let mut predicates = Vec::new();
        for p in &pom.predicates {
            match self.single_term(p, ctx, false) {
                Ok(Some(t)) => predicates.push(t),
                Ok(None) => {}
                Err(e) => return vec![e.into()],
            }
        }
        for list in &pom.predicate_lists {
            predicates.extend(list.iter().cloned());
        }

        let mut objects = Vec::new();
        let mut graphs = Vec::new();
        for o in &pom.objects {
            match self.object_value(o, ctx) {
                Ok(ObjectValue::Terms(ts)) => objects.extend(ts),
                Ok(ObjectValue::Graph(text)) => graphs.push(text),
                Err(e) => return vec![e.into()],
            }
        }

        match combine(&predicates, &objects, pom.zip) {
            Ok(pairs) => {
                for (p, o) in pairs {
                    self.graph.insert(Triple::new(subject.clone(), p, o));
                }
            }
            Err(e) => {
                let mut d = Diagnostic::from(&e);
                if !self.engine.options.strict {
                    d.severity = Severity::Warning;
                    d.message.push_str("; predicate-object map skipped for this cell");
                }
                return vec![d];
            }
        }

        for text in graphs {
            let prefix = format!("g{}_", self.graph_calls);
            self.graph_calls += 1;
            match apply_graph_term_type(&text, &prefix, subject, &predicates, &mut self.graph) {
                Ok(ds) => diags.extend(ds),
                Err(e) => diags.push(e.into()),
            }
        }
        diags
    }

    fn object_value(&self, tm: &TermMap, ctx: &EvalContext<'_>) -> Result<ObjectValue> {
        if let TermMapKind::Function(inv) = &tm.kind {
            let result = invoke(&self.engine.registry, inv, ctx)?;
            return match (tm.term_type, result) {
                (Some(TermType::Graph), FunctionResult::Graph(text)) => Ok(ObjectValue::Graph(text)),
                (Some(TermType::Graph), FunctionResult::Values(_)) => Err(Error::FnRuntime {
                    function: inv.function.clone(),
                    message: "ss:Graph needs a function that returns a graph".into(),
                }),
                (_, FunctionResult::Graph(_)) => Err(Error::FnRuntime {
                    function: inv.function.clone(),
                    message: "function returned a graph; use rr:termType ss:Graph".into(),
                }),
                (_, FunctionResult::Values(values)) => {
                    let tt = tm.effective_term_type(true);
                    let mut terms = Vec::with_capacity(values.len());
                    for v in values {
                        terms.push(self.value_term(v, tm, tt)?);
                    }
                    Ok(ObjectValue::Terms(terms))
                }
            };
        }
        Ok(ObjectValue::Terms(
            self.single_term(tm, ctx, true)?.into_iter().collect(),
        ))
    }

    /// A term from a non-function term map, or `None` when a referenced
    /// value is missing.
    fn single_term(&self, tm: &TermMap, ctx: &EvalContext<'_>, object: bool) -> Result<Option<Term>> {
        let tt = tm.effective_term_type(object);
        match &tm.kind {
            TermMapKind::Constant(t) => Ok(Some(t.clone())),
            TermMapKind::Unresolved { .. } => Ok(None),
            TermMapKind::Template(t) => {
                let Some(s) = t.expand(ctx, tt == TermType::Iri)? else {
                    return Ok(None);
                };
                self.value_term(ScalarValue::Text(s), tm, tt).map(Some)
            }
            TermMapKind::Reference(r) => match eval_ref(r, ctx)? {
                Some(v) => self.value_term(v, tm, tt).map(Some),
                None => Ok(None),
            },
            TermMapKind::Function(inv) => match invoke(&self.engine.registry, inv, ctx)? {
                FunctionResult::Values(mut vs) if vs.len() <= 1 => match vs.pop() {
                    Some(v) => self.value_term(v, tm, tt).map(Some),
                    None => Ok(None),
                },
                _ => Err(Error::FnRuntime {
                    function: inv.function.clone(),
                    message: "only object maps accept lists or graphs".into(),
                }),
            },
        }
    }

    fn value_term(&self, v: ScalarValue, tm: &TermMap, tt: TermType) -> Result<Term> {
        match tt {
            TermType::Iri => self.resolve_iri(&v.to_string()),
            TermType::BlankNode => Ok(Term::blank(blank_label(&v.to_string()))),
            TermType::Literal | TermType::Graph => Ok(Term::literal(literal(v, tm))),
        }
    }

    fn resolve_iri(&self, s: &str) -> Result<Term> {
        Term::checked_iri(s).or_else(|_| Term::checked_iri(format!("{}{s}", self.engine.options.base_iri)))
    }
}

fn literal(v: ScalarValue, tm: &TermMap) -> Literal {
    if let Some(lang) = &tm.language {
        return Literal::lang(v.to_string(), lang);
    }
    if let Some(dt) = &tm.datatype {
        return Literal::typed(v.to_string(), dt.as_str());
    }
    match v {
        ScalarValue::Text(s) => Literal::string(s),
        ScalarValue::Number(n) => Literal::typed(double_lexical(n), XSD_DOUBLE),
        ScalarValue::Integer(i) => Literal::typed(i.to_string(), XSD_INTEGER),
        ScalarValue::Boolean(b) => Literal::typed(b.to_string(), XSD_BOOLEAN),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iris(names: &[&str]) -> Vec<Term> {
        names.iter().map(|n| Term::iri(format!("http://ex/{n}"))).collect()
    }

    #[test]
    fn combine_examples() {
        let (p, o) = (iris(&["p1", "p2"]), iris(&["o1", "o2"]));
        assert_eq!(combine(&p, &o, false).unwrap().len(), 4);
        assert_eq!(
            combine(&p, &o, true).unwrap(),
            vec![(p[0].clone(), o[0].clone()), (p[1].clone(), o[1].clone())]
        );
        assert_eq!(combine(&p[..1], &[], false).unwrap(), vec![]);
        assert_eq!(combine(&p[..1], &[], true).unwrap_err().code(), "E_ZIP_LENGTH");
        let cart = combine(&p, &o, false).unwrap();
        assert_eq!(cart[1], (p[0].clone(), o[1].clone()));
    }

    #[test]
    fn graph_term_type_links_selected_objects() {
        let mut out = Graph::new();
        let s = Term::iri("http://ex/book");
        let text = "_:x <http://ex/name> \"n\" . <http://www.dfki.uni-kl.de/~mschroeder/ld/ss#SelectedObjects> <http://www.w3.org/ns/r2rml#object> _:x .";
        let d = apply_graph_term_type(text, "g0_", &s, &iris(&["author"]), &mut out).unwrap();
        assert!(d.is_empty());
        assert_eq!(out.len(), 2);
        assert!(out.contains(&Triple::new(s.clone(), iris(&["author"])[0].clone(), Term::blank("g0_0"))));

        let mut empty = Graph::new();
        let d = apply_graph_term_type("", "g1_", &s, &iris(&["author"]), &mut empty).unwrap();
        assert_eq!(d[0].code, "W_NO_SELECTION");
        assert!(empty.is_empty());
        let err = apply_graph_term_type("<a> <b>", "g2_", &s, &[], &mut empty).unwrap_err();
        assert_eq!(err.code(), "E_GRAPH_PARSE");
    }

    #[test]
    fn blank_labels_are_injective_on_samples() {
        assert_eq!(blank_label("a b"), "ta_20b");
        assert_ne!(blank_label("a_20b"), blank_label("a b"));
    }

    #[test]
    fn memory_resolver_matches_basenames() {
        let mut r = MemoryResolver::new();
        r.insert("workbook.xlsx", Workbook::new());
        assert!(r.resolve("workbook.xlsx").is_ok());
        assert!(r.resolve("../../data/workbook.xlsx").is_ok());
        assert_eq!(r.resolve("../../etc/passwd").unwrap_err().code(), "E_IO");
    }
}
