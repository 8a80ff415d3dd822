use gridrml::expr::{parse_ref_expr, parse_template};
use gridrml::functions::{FunctionRegistry, FN_SPLIT};
use gridrml::mapping::{
    model_to_graph, parse_mapping_document, parse_mapping_text, validate_model, TermMap,
    TermMapKind, TermType, TriplesMap,
};
use gridrml::rdf::{parse_turtle, serialize_graph, RdfFormat, Term};
use gridrml::workbook::parse_range;
use gridrml::Severity;
use proptest::prelude::*;

const BASE: &str = "http://example.org/";

const PREFIXES: &str = "\
@prefix rr:  <http://www.w3.org/ns/r2rml#> .
@prefix rml: <http://semweb.mmlab.be/ns/rml#> .
@prefix ql:  <http://semweb.mmlab.be/ns/ql#> .
@prefix ss:  <http://www.dfki.uni-kl.de/~mschroeder/ld/ss#> .
@prefix fnml: <http://semweb.mmlab.be/ns/fnml#> .
@prefix fno: <https://w3id.org/function/ontology#> .
@prefix fn:  <https://w3id.org/gridrml/fn#> .
@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .
@prefix ex:  <http://example.org/> .
";

const LISTING_1: &str = r#"
ex:Map rml:logicalSource [ a rml:LogicalSource ;
  rml:referenceFormulation ql:Spreadsheet ;
  rml:source [
    a ss:Workbook;
    ss:url "workbook.xlsx" ;
    ss:sheetName "Papers" ;
    ss:range "A2:A5" ;
    ss:javaScriptFilter "/Know\\w*/.test(valueString)" # optional
  ]
] ;
"#;

const LISTING_2: &str = r#"
rr:subjectMap [
  rr:template "http://example.org/{address}"
] ;
rr:predicateObjectMap [
  rr:predicateMap  [
    rr:template "http://example.org/{[2,0].valueString}"
  ] ;
  rr:objectMap [
    rml:reference "(2,0).valueNumeric"
  ]
] .
"#;

fn listing() -> String {
    format!("{PREFIXES}{LISTING_1}{LISTING_2}")
}

fn parse(text: &str) -> (Vec<TriplesMap>, Vec<gridrml::Diagnostic>) {
    parse_mapping_text(text, BASE)
}

fn codes(diags: &[gridrml::Diagnostic]) -> Vec<&str> {
    diags.iter().map(|d| d.code.as_str()).collect()
}

#[test]
fn listing_1_logical_source() {
    let (maps, diags) = parse(&listing());
    assert!(diags.is_empty(), "{diags:?}");
    assert_eq!(maps.len(), 1);
    let src = &maps[0].source;
    assert_eq!(src.url, "workbook.xlsx");
    assert_eq!(src.sheet_name, "Papers");
    assert_eq!(src.range, parse_range("A2:A5").unwrap());
    assert_eq!(
        src.filter.as_ref().unwrap().to_string(),
        "/Know\\w*/.test(valueString)"
    );
}

#[test]
fn listing_2_term_maps() {
    let (maps, _) = parse(&listing());
    let m = &maps[0];
    assert_eq!(
        m.subject.kind,
        TermMapKind::Template(parse_template("http://example.org/{address}").unwrap())
    );
    let pom = &m.predicate_object_maps[0];
    assert_eq!(
        pom.predicates[0].kind,
        TermMapKind::Template(parse_template("http://example.org/{[2,0].valueString}").unwrap())
    );
    assert_eq!(
        pom.objects[0].kind,
        TermMapKind::Reference(parse_ref_expr("(2,0).valueNumeric").unwrap())
    );
    assert_eq!(pom.objects[0].effective_term_type(true), TermType::Literal);
    assert!(!pom.zip);
}

#[test]
fn listing_model_validates_clean() {
    let (maps, _) = parse(&listing());
    let diags = validate_model(&maps, &FunctionRegistry::default());
    assert!(diags.is_empty(), "{diags:?}");
}

#[test]
fn missing_source_fields() {
    for field in ["ss:url \"workbook.xlsx\" ;", "ss:sheetName \"Papers\" ;", "ss:range \"A2:A5\" ;"] {
        let text = listing().replace(field, "");
        let (maps, diags) = parse(&text);
        assert!(maps.is_empty(), "{field}");
        assert_eq!(codes(&diags), ["E_MISSING_SOURCE_FIELD"], "{field}");
        assert_eq!(diags[0].severity, Severity::Error);
    }
}

#[test]
fn filter_syntax_error_surfaces_at_parse() {
    let text = listing().replace(r"/Know\\w*/.test(valueString)", "valueString ==");
    let (_, diags) = parse(&text);
    assert_eq!(codes(&diags), ["E_FILTER_SYNTAX"]);
}

#[test]
fn literal_subject_is_one_error() {
    let text = listing().replace(
        "rr:template \"http://example.org/{address}\"",
        "rr:template \"http://example.org/{address}\" ; rr:termType rr:Literal",
    );
    let (maps, diags) = parse(&text);
    assert!(diags.is_empty(), "{diags:?}");
    let v = validate_model(&maps, &FunctionRegistry::default());
    assert_eq!(codes(&v), ["E_LITERAL_SUBJECT"]);
    assert_eq!(v[0].severity, Severity::Error);
}

#[test]
fn misspelled_variable_is_one_warning() {
    let text = listing().replace("(2,0).valueNumeric", "(2,0).valueStrng");
    let (maps, diags) = parse(&text);
    assert!(diags.iter().all(|d| d.severity == Severity::Warning), "{diags:?}");
    let v = validate_model(&maps, &FunctionRegistry::default());
    assert_eq!(codes(&v), ["W_UNKNOWN_VARIABLE"]);
    assert!(v[0].message.contains("valueStrng"));
}

#[test]
fn two_kinds_on_one_term_map() {
    let text = listing().replace(
        "rml:reference \"(2,0).valueNumeric\"",
        "rml:reference \"(2,0).valueNumeric\" ; rr:constant \"x\"",
    );
    let (_, diags) = parse(&text);
    assert!(codes(&diags).contains(&"E_BAD_TERMMAP"), "{diags:?}");
}

#[test]
fn constant_shortcuts_normalize() {
    let text = format!(
        "{PREFIXES}{LISTING_1} rr:subject ex:s ; rr:predicateObjectMap [ rr:predicate ex:p ; rr:object \"o\" ] ."
    );
    let (maps, diags) = parse(&text);
    assert!(diags.is_empty(), "{diags:?}");
    let m = &maps[0];
    assert_eq!(m.subject, TermMap::constant(Term::iri("http://example.org/s")));
    let pom = &m.predicate_object_maps[0];
    assert_eq!(pom.predicates, [TermMap::constant(Term::iri("http://example.org/p"))]);
    assert_eq!(
        pom.objects,
        [TermMap::constant(Term::literal(gridrml::rdf::Literal::string("o")))]
    );
}

#[test]
fn zip_without_list_is_a_shape_error() {
    let text = listing().replace(
        "rml:reference \"(2,0).valueNumeric\"\n  ]",
        "rml:reference \"(2,0).valueNumeric\"\n  ] ; ss:zip true",
    );
    let (_, diags) = parse(&text);
    assert!(codes(&diags).contains(&"E_ZIP_SHAPE"), "{diags:?}");
}

#[test]
fn predicate_list_is_captured_in_order() {
    let text = std::fs::read_to_string(fixture("zip.ttl")).unwrap();
    let (maps, diags) = parse(&text);
    assert!(diags.is_empty(), "{diags:?}");
    let pom = &maps[0].predicate_object_maps[0];
    assert!(pom.zip);
    let names: Vec<&str> = pom.predicate_lists[0].iter().map(|t| t.as_iri().unwrap()).collect();
    assert_eq!(
        names,
        [
            "http://example.org/primaryColor",
            "http://example.org/secondaryColor",
            "http://example.org/accentColor"
        ]
    );
    let f = pom.objects[0].function().unwrap();
    assert_eq!(f.function, FN_SPLIT);
}

#[test]
fn non_spreadsheet_sources_are_skipped_with_a_warning() {
    let text = listing().replace("ql:Spreadsheet", "ql:CSV");
    let (maps, diags) = parse(&text);
    assert!(maps.is_empty());
    assert_eq!(codes(&diags), ["W_UNSUPPORTED_FORMULATION"]);
}

fn fixture(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn assert_idempotent(maps: &[TriplesMap]) {
    let g1 = model_to_graph(maps);
    let (again, diags) = parse_mapping_document(&g1);
    assert!(diags.is_empty(), "{diags:?}");
    assert_eq!(again, maps);
    let g2 = model_to_graph(&again);
    assert_eq!(
        serialize_graph(&g1, RdfFormat::NTriples),
        serialize_graph(&g2, RdfFormat::NTriples)
    );
}

#[test]
fn fixture_documents_normalize_idempotently() {
    for name in ["listing.ttl", "catalog.ttl", "zip.ttl", "graph.ttl"] {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        let (maps, diags) = parse(&text);
        assert!(diags.is_empty(), "{name}: {diags:?}");
        assert_idempotent(&maps);
    }
}

// Random documents from a small generator over the supported vocabulary.

#[derive(Debug, Clone)]
enum Kind {
    Constant,
    Template,
    Reference,
    Function,
}

fn kind() -> impl Strategy<Value = Kind> {
    prop_oneof![
        Just(Kind::Constant),
        Just(Kind::Template),
        Just(Kind::Reference),
        Just(Kind::Function)
    ]
}

const REFS: [&str; 5] = ["valueString", "(1,0).valueString", "[2,0].address", "row", "(0,-1).valueInt"];

fn object_text(k: &Kind, i: usize) -> String {
    let r = REFS[i % REFS.len()];
    match k {
        Kind::Constant => format!("[ rr:constant \"c{i}\" ]"),
        Kind::Template => format!("[ rr:template \"http://example.org/{{{r}}}/x{i}\" ]"),
        Kind::Reference => format!("[ rml:reference \"{r}\" ; rr:datatype xsd:string ]"),
        Kind::Function => format!(
            "[ fnml:functionValue [ fno:executes fn:split ; fn:value [ rml:reference \"{r}\" ] ; fn:separator \",\" ] ]"
        ),
    }
}

fn matches(k: &Kind, tm: &TermMap) -> bool {
    matches!(
        (k, &tm.kind),
        (Kind::Constant, TermMapKind::Constant(_))
            | (Kind::Template, TermMapKind::Template(_))
            | (Kind::Reference, TermMapKind::Reference(_))
            | (Kind::Function, TermMapKind::Function(_))
    )
}

#[derive(Debug, Clone)]
struct Pom {
    list: Option<usize>,
    objects: Vec<Kind>,
    zip: bool,
}

fn pom() -> impl Strategy<Value = Pom> {
    (proptest::option::of(1usize..4), proptest::collection::vec(kind(), 1..3), any::<bool>())
        .prop_map(|(list, objects, zip)| Pom {
            zip: zip && list.is_some(),
            list,
            objects,
        })
}

fn document(poms: &[Pom], subject: &Kind, classes: usize, filter: bool) -> String {
    let mut s = String::from(PREFIXES);
    s.push_str("ex:M rml:logicalSource [ rml:referenceFormulation ql:Spreadsheet ; rml:source [ ss:url \"w.xlsx\" ; ss:sheetName \"S\" ; ss:range \"A1:C9\"");
    if filter {
        s.push_str(" ; ss:javaScriptFilter \"row > 1 && !(valueString == 'x')\"");
    }
    s.push_str(" ] ] ;\n");
    let subject = match subject {
        Kind::Constant => "rr:constant ex:fixed",
        Kind::Function | Kind::Template => "rr:template \"http://example.org/{address}\"",
        Kind::Reference => "rml:reference \"valueString\" ; rr:termType rr:IRI",
    };
    let classes: String = (0..classes).map(|c| format!(" ; rr:class ex:C{c}")).collect();
    s.push_str(&format!("  rr:subjectMap [ {subject}{classes} ] ;\n"));
    for (i, p) in poms.iter().enumerate() {
        let pred = match p.list {
            Some(n) => format!(
                "rr:predicateMap ( {} )",
                (0..n).map(|j| format!("ex:p{i}_{j}")).collect::<Vec<_>>().join(" ")
            ),
            None => format!("rr:predicate ex:p{i}"),
        };
        let objects: Vec<String> = p.objects.iter().enumerate().map(|(j, k)| object_text(k, i + j)).collect();
        s.push_str(&format!(
            "  rr:predicateObjectMap [ {pred} ; rr:objectMap {}{} ] ;\n",
            objects.join(", "),
            if p.zip { " ; ss:zip true" } else { "" }
        ));
    }
    s.push_str("  a rr:TriplesMap .\n");
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn generated_documents_parse_with_one_kind_per_term_map(
        poms in proptest::collection::vec(pom(), 0..4),
        subject in kind(),
        classes in 0usize..3,
        filter in any::<bool>(),
    ) {
        let text = document(&poms, &subject, classes, filter);
        let (maps, diags) = parse(&text);
        prop_assert!(diags.is_empty(), "{diags:?}\n{text}");
        prop_assert_eq!(maps.len(), 1);
        let m = &maps[0];
        prop_assert_eq!(m.classes.len(), classes);
        prop_assert_eq!(m.predicate_object_maps.len(), poms.len());
        for (p, got) in poms.iter().zip(&m.predicate_object_maps) {
            prop_assert_eq!(got.zip, p.zip);
            prop_assert_eq!(got.objects.len(), p.objects.len());
            for (k, tm) in p.objects.iter().zip(&got.objects) {
                prop_assert!(matches(k, tm), "{k:?} vs {tm:?}");
            }
            match p.list {
                Some(n) => prop_assert_eq!(got.predicate_lists[0].len(), n),
                None => prop_assert!(matches!(got.predicates[0].kind, TermMapKind::Constant(_))),
            }
        }
        for tm in m.term_maps() {
            let unresolved = matches!(tm.kind, TermMapKind::Unresolved { .. });
            prop_assert!(!unresolved);
        }
        assert_idempotent(&maps);
    }

    #[test]
    fn arbitrary_triples_never_crash_the_mapping_parser(
        triples in proptest::collection::vec((0usize..6, 0usize..12, 0usize..8), 0..30)
    ) {
        // Random graphs over the mapping vocabulary: subjects and objects
        // from a small node pool, predicates from the mapping properties.
        let preds = [
            "rml:logicalSource", "rml:source", "rml:referenceFormulation", "ss:url", "ss:sheetName",
            "ss:range", "rr:subjectMap", "rr:predicateObjectMap", "rr:predicateMap", "rr:objectMap",
            "rr:template", "ss:zip",
        ];
        let nodes = ["_:a", "_:b", "_:c", "ex:d", "\"A1:B2\"", "ql:Spreadsheet", "\"x{y}\"", "( ex:p ex:q )"];
        let mut text = String::from(PREFIXES);
        for (s, p, o) in triples {
            let s = ["_:a", "_:b", "_:c", "ex:d", "ex:e", "_:f"][s];
            text.push_str(&format!("{s} {} {} .\n", preds[p], nodes[o]));
        }
        let g = parse_turtle(&text, BASE).unwrap();
        let (maps, diags) = parse_mapping_document(&g);
        let _ = validate_model(&maps, &FunctionRegistry::default());
        for d in &diags {
            prop_assert!(!d.code.is_empty());
        }
    }
}
