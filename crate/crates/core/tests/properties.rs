mod common;

use std::collections::{BTreeMap, BTreeSet};

use gridrml::expr::{
    eval_filter, eval_ref, iri_safe_encode, parse_filter, parse_ref_expr, parse_template,
    EvalContext, FilterExpr, RefExpr, Selector, Template, TemplatePart, VariableName,
};
use gridrml::functions::{
    builtin_persons_to_graph, builtin_split, invoke, FunctionRegistry, FN_SEPARATOR, FN_SPLIT,
    FN_VALUE,
};
use gridrml::mapping::{FunctionInvocation, TermMap, TermMapKind};
use gridrml::rdf::{parse_turtle, rdf_list, serialize_graph, Graph, Literal, RdfFormat, Term, Triple};
use gridrml::workbook::{
    cell_to_json, render_rich_text, Cell, CellAddress, CellStyle, CellValue, RichRun, Workbook,
};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

// rdf

fn iri() -> impl Strategy<Value = Term> {
    prop_oneof![
        "[a-c]{1,2}".prop_map(|s| Term::iri(format!("http://example.org/{s}"))),
        Just(Term::iri("urn:x:ä%20")),
    ]
}

fn literal() -> impl Strategy<Value = Term> {
    let text = prop_oneof![
        "[a-z ]{0,6}",
        Just("quote \" backslash \\ newline \n tab \t".to_owned()),
        Just("ünï€😀".to_owned()),
    ];
    (text, 0..4u8).prop_map(|(s, kind)| {
        Term::literal(match kind {
            0 => Literal::string(s),
            1 => Literal::lang(s, "en-GB"),
            2 => Literal::typed(s, "http://www.w3.org/2001/XMLSchema#integer"),
            _ => Literal::typed(s, "http://example.org/dt"),
        })
    })
}

fn blank() -> impl Strategy<Value = Term> {
    (0..4u8).prop_map(|i| Term::blank(format!("n{i}")))
}

fn graph() -> impl Strategy<Value = Graph> {
    let subject = prop_oneof![iri(), blank()];
    let object = prop_oneof![iri(), blank(), literal()];
    proptest::collection::vec((subject, iri(), object), 0..12)
        .prop_map(|ts| ts.into_iter().map(|(s, p, o)| Triple::new(s, p, o)).collect())
}

fn blank_labels(g: &Graph) -> Vec<String> {
    let set: BTreeSet<String> = g
        .iter()
        .flat_map(|t| [&t.subject, &t.object])
        .filter(|t| t.is_blank())
        .map(|t| t.to_string()[2..].to_owned())
        .collect();
    set.into_iter().collect()
}

fn relabel(g: &Graph, map: &BTreeMap<String, String>) -> Graph {
    let f = |t: &Term| match t {
        Term::BlankNode(l) => Term::blank(map[l].as_str()),
        other => other.clone(),
    };
    g.iter()
        .map(|t| Triple::new(f(&t.subject), t.predicate.clone(), f(&t.object)))
        .collect()
}

fn permutations(items: &[String]) -> Vec<Vec<String>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, head.clone());
            out.push(p);
        }
    }
    out
}

/// Brute force over all label bijections; fine for a handful of labels.
fn isomorphic(a: &Graph, b: &Graph) -> bool {
    let (la, lb) = (blank_labels(a), blank_labels(b));
    if la.len() != lb.len() || a.len() != b.len() {
        return false;
    }
    permutations(&lb).into_iter().any(|perm| {
        let map = la.iter().cloned().zip(perm).collect();
        relabel(a, &map) == *b
    })
}

proptest! {
    #[test]
    fn ntriples_round_trip_is_isomorphic(g in graph()) {
        let text = serialize_graph(&g, RdfFormat::NTriples);
        let back = parse_turtle(&text, "http://example.org/").unwrap();
        prop_assert!(isomorphic(&g, &back), "{text}");
        prop_assert_eq!(serialize_graph(&g, RdfFormat::NTriples), text);
    }

    #[test]
    fn turtle_round_trip_is_isomorphic(g in graph()) {
        let text = serialize_graph(&g, RdfFormat::Turtle);
        let back = parse_turtle(&text, "http://example.org/").unwrap();
        prop_assert!(isomorphic(&g, &back), "{text}");
    }

    #[test]
    fn serialization_ignores_insertion_order(g in graph()) {
        let mut reversed: Vec<Triple> = g.iter().cloned().collect();
        reversed.reverse();
        let r: Graph = reversed.into_iter().collect();
        prop_assert_eq!(serialize_graph(&g, RdfFormat::NTriples), serialize_graph(&r, RdfFormat::NTriples));
    }
}

#[test]
fn collections_of_every_length_up_to_twenty() {
    for n in 0..20 {
        let items: Vec<String> = (0..n).map(|i| format!("<http://example.org/i{i}>")).collect();
        let text = format!("<http://example.org/s> <http://example.org/p> ( {} ) .", items.join(" "));
        let g = parse_turtle(&text, "").unwrap();
        let head = g
            .object(&Term::iri("http://example.org/s"), "http://example.org/p")
            .unwrap()
            .clone();
        let list = rdf_list(&g, &head).unwrap();
        assert_eq!(list.len(), n);
        for (i, t) in list.iter().enumerate() {
            assert_eq!(t, &Term::iri(format!("http://example.org/i{i}")));
        }
    }
}

// references and templates

fn variable() -> impl Strategy<Value = VariableName> {
    proptest::sample::select(VariableName::ALL.to_vec())
}

fn ref_expr() -> impl Strategy<Value = RefExpr> {
    let selector = prop_oneof![
        Just(Selector::Current),
        (-50i64..50, -50i64..50).prop_map(|(c, r)| Selector::Relative(c, r)),
        (0u32..100, 0u32..100).prop_map(|(c, r)| Selector::Absolute(c, r)),
    ];
    (selector, variable()).prop_map(|(selector, variable)| RefExpr { selector, variable })
}

fn template() -> impl Strategy<Value = Template> {
    let part = prop_oneof![
        "[a-z:/{}\\\\ .#é]{1,6}".prop_map(TemplatePart::Literal),
        ref_expr().prop_map(TemplatePart::Placeholder),
    ];
    proptest::collection::vec(part, 0..6).prop_map(|parts| {
        // adjacent literals print as one, so merge them up front
        let mut merged: Vec<TemplatePart> = Vec::new();
        for p in parts {
            match (merged.last_mut(), p) {
                (Some(TemplatePart::Literal(a)), TemplatePart::Literal(b)) => a.push_str(&b),
                (_, p) => merged.push(p),
            }
        }
        Template { parts: merged }
    })
}

fn fixture_workbook() -> Workbook {
    Workbook::open(common::fixture("catalog.xlsx")).unwrap()
}

proptest! {
    #[test]
    fn ref_expr_prints_and_parses_back(r in ref_expr()) {
        prop_assert_eq!(parse_ref_expr(&r.to_string()).unwrap(), r);
    }

    #[test]
    fn template_prints_and_parses_back(t in template()) {
        let text = t.to_string();
        prop_assert_eq!(parse_template(&text).unwrap(), t, "{}", text);
    }

    #[test]
    fn literal_only_templates_expand_to_themselves(s in "[^{}\\\\]{0,20}", col in 0u32..3, row in 0u32..20) {
        let wb = fixture_workbook();
        let ctx = EvalContext::new(&wb, "Catalog", CellAddress::new(col, row));
        let t = parse_template(&s).unwrap();
        prop_assert_eq!(t.expand(&ctx, true).unwrap(), Some(s.clone()));
        prop_assert_eq!(t.expand(&ctx, false).unwrap(), Some(s));
    }

    #[test]
    fn iri_safe_output_is_unreserved_or_escaped(s in "\\PC{0,24}") {
        let out = iri_safe_encode(&s);
        let bytes = out.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let b = bytes[i];
            if b == b'%' {
                prop_assert!(i + 2 < bytes.len());
                prop_assert!(bytes[i + 1].is_ascii_hexdigit() && bytes[i + 2].is_ascii_hexdigit());
                i += 3;
            } else {
                prop_assert!(b.is_ascii_alphanumeric() || b"-._~".contains(&b), "{out}");
                i += 1;
            }
        }
        let decoded = percent_decode(&out);
        prop_assert_eq!(decoded, s);
    }
}

fn percent_decode(s: &str) -> String {
    let mut bytes = Vec::new();
    let raw = s.as_bytes();
    let mut i = 0;
    while i < raw.len() {
        if raw[i] == b'%' {
            bytes.push(u8::from_str_radix(&s[i + 1..i + 3], 16).unwrap());
            i += 3;
        } else {
            bytes.push(raw[i]);
            i += 1;
        }
    }
    String::from_utf8(bytes).unwrap()
}

#[test]
fn relative_zero_equals_current_everywhere() {
    let wb = fixture_workbook();
    let sheet = wb.sheet("Catalog").unwrap();
    let mut addresses: Vec<CellAddress> = sheet.cells().map(|c| c.address).collect();
    addresses.push(CellAddress::new(9, 9));
    for addr in addresses {
        let ctx = EvalContext::new(&wb, "Catalog", addr);
        for &v in VariableName::ALL {
            let here = eval_ref(&RefExpr::current(v), &ctx).unwrap();
            let rel = eval_ref(
                &RefExpr {
                    selector: Selector::Relative(0, 0),
                    variable: v,
                },
                &ctx,
            )
            .unwrap();
            let abs = eval_ref(
                &RefExpr {
                    selector: Selector::Absolute(addr.column, addr.row),
                    variable: v,
                },
                &ctx,
            )
            .unwrap();
            assert_eq!(here, rel, "{addr} {v}");
            assert_eq!(here, abs, "{addr} {v}");
        }
    }
}

// filters

#[test]
fn filters_print_and_parse_back() {
    let mut rng = StdRng::seed_from_u64(3);
    for _ in 0..2000 {
        let f = common::random_filter(&mut rng, 4);
        let text = f.to_string();
        assert_eq!(parse_filter(&text).unwrap(), f, "{text}");
    }
}

#[test]
fn filters_over_blank_cells_are_false_or_type_errors() {
    let mut wb = Workbook::new();
    let styled = CellStyle {
        foreground_color: Some("#ffff00".into()),
        ..Default::default()
    };
    wb.sheet_mut("S")
        .insert(Cell::new(CellAddress::new(0, 0), CellValue::Blank).with_style(styled));
    let mut rng = StdRng::seed_from_u64(5);
    for addr in [CellAddress::new(0, 0), CellAddress::new(3, 3)] {
        let ctx = EvalContext::new(&wb, "S", addr);
        for _ in 0..3000 {
            let f = common::random_filter(&mut rng, 4);
            match eval_filter(&f, &ctx) {
                Ok(_) => {}
                Err(e) => assert_eq!(e.code(), "E_FILTER_TYPE", "{f}"),
            }
        }
        // a filter reading only value variables never selects a blank cell
        for &v in VariableName::ALL {
            let f = FilterExpr::binary(
                gridrml::expr::BinaryOp::Eq,
                FilterExpr::Var(v),
                FilterExpr::Var(v),
            );
            let value_var = v.as_str().starts_with("value") || v == VariableName::Value;
            if value_var {
                assert!(!eval_filter(&f, &ctx).unwrap(), "{v}");
            }
        }
    }
}

// functions

proptest! {
    #[test]
    fn split_is_idempotent(value in "[a-z ;,]{0,30}", sep in prop_oneof![Just(";"), Just(","), Just(" ; ")]) {
        let once = builtin_split(&value, sep);
        let again = builtin_split(&once.join(sep), sep);
        prop_assert_eq!(&again, &once);
        for piece in &once {
            prop_assert!(!piece.is_empty());
            prop_assert_eq!(piece.trim(), piece.as_str());
        }
    }

    #[test]
    fn persons_graph_selects_every_person_once(
        names in proptest::collection::vec("[A-Z][a-z]{0,5}( [A-Z][a-z]{1,5}){0,2}|[A-Z][a-z]{1,5}, [A-Z][a-z]{1,5}", 0..5),
        joiner in prop_oneof![Just("; "), Just(" and ")],
    ) {
        let value = names.join(joiner);
        let text = builtin_persons_to_graph(&value, "http://example.org/p/").unwrap();
        let g = parse_turtle(&text, "").unwrap();
        let selected = g
            .iter()
            .filter(|t| t.subject.as_iri().is_some_and(|s| s.ends_with("#SelectedObjects")))
            .count();
        let persons: BTreeSet<&Term> = g
            .iter()
            .filter(|t| !t.subject.as_iri().is_some_and(|s| s.ends_with("#SelectedObjects")))
            .map(|t| &t.subject)
            .collect();
        prop_assert_eq!(selected, persons.len());
        prop_assert_eq!(builtin_persons_to_graph(&value, "http://example.org/p/").unwrap(), text);
    }
}

#[test]
fn cell_json_parses_and_keeps_values() {
    let mut rng = StdRng::seed_from_u64(9);
    for _ in 0..50 {
        let wb = common::random_workbook(&mut rng);
        for cell in wb.sheet("S").unwrap().cells() {
            let json: serde_json::Value = serde_json::from_str(&cell_to_json(cell, "S")).unwrap();
            assert_eq!(json["address"], cell.address.to_string());
            assert_eq!(json["cellType"], cell.cell_type().as_str());
            if let Some(n) = cell.numeric_value() {
                assert_eq!(json["valueNumeric"].as_f64(), Some(n));
            }
            if let Some(s) = cell.text_value() {
                assert_eq!(json["valueString"].as_str(), Some(s));
            }
        }
    }
}

#[test]
fn unformatted_runs_render_as_escaped_text() {
    for text in ["plain", "a < b & c > d", "quote ' and \"", ""] {
        let runs = vec![RichRun::plain(text)];
        let cell = Cell::new(CellAddress::new(0, 0), CellValue::Blank).with_runs(runs);
        let expected = text
            .replace('&', "&amp;")
            .replace('<', "&lt;")
            .replace('>', "&gt;");
        assert_eq!(render_rich_text(&cell).unwrap(), expected);
        let plain = Cell::new(CellAddress::new(0, 0), CellValue::Text(text.into()));
        assert_eq!(render_rich_text(&plain).unwrap(), expected);
    }
}

#[test]
fn invocation_is_referentially_transparent() {
    let wb = Workbook::open(common::fixture("colors.xlsx")).unwrap();
    let reg = FunctionRegistry::default();
    let mut parameters = BTreeMap::new();
    parameters.insert(
        FN_VALUE.to_owned(),
        TermMap::new(TermMapKind::Reference(parse_ref_expr("(1,0).valueString").unwrap())),
    );
    parameters.insert(
        FN_SEPARATOR.to_owned(),
        TermMap::constant(Term::literal(Literal::string(";"))),
    );
    let inv = FunctionInvocation {
        function: FN_SPLIT.to_owned(),
        parameters,
    };
    for row in 1..4 {
        let ctx = EvalContext::new(&wb, "Products", CellAddress::new(0, row));
        assert_eq!(invoke(&reg, &inv, &ctx).unwrap(), invoke(&reg, &inv, &ctx).unwrap());
    }
}
