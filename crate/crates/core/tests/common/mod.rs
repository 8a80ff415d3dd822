//! Fixtures and random generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use gridrml::engine::{Engine, ExecutionOptions, MemoryResolver};
use gridrml::expr::{eval_filter, BinaryOp, EvalContext, FilterExpr, FilterRegex, VariableName};
use gridrml::workbook::{CachedValue, Cell, CellAddress, CellRange, CellStyle, CellValue, Workbook};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

pub const PREFIXES: &str = "\
@prefix rr:  <http://www.w3.org/ns/r2rml#> .
@prefix rml: <http://semweb.mmlab.be/ns/rml#> .
@prefix ql:  <http://semweb.mmlab.be/ns/ql#> .
@prefix ss:  <http://www.dfki.uni-kl.de/~mschroeder/ld/ss#> .
@prefix fnml: <http://semweb.mmlab.be/ns/fnml#> .
@prefix fno: <https://w3id.org/function/ontology#> .
@prefix fn:  <https://w3id.org/gridrml/fn#> .
@prefix ex:  <http://example.org/> .
";

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap()
}

/// Escapes `s` as a Turtle string literal body.
pub fn turtle_string(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"").replace('\n', "\\n")
}

const TEXTS: [&str; 8] = [
    "Knowledge Graphs",
    "Ontology",
    "Know-how",
    "alpha",
    "Beta 42",
    "x",
    "",
    "know",
];

pub const GRID_COLUMNS: u32 = 5;
pub const GRID_ROWS: u32 = 8;

fn random_style(rng: &mut StdRng) -> CellStyle {
    let colors = ["#ffff00", "#ff0000", "#00ff00"];
    CellStyle {
        background_color: rng.gen_bool(0.2).then(|| colors.choose(rng).unwrap().to_string()),
        foreground_color: rng.gen_bool(0.3).then(|| colors.choose(rng).unwrap().to_string()),
        font_color: rng.gen_bool(0.3).then(|| colors.choose(rng).unwrap().to_string()),
        font_name: rng.gen_bool(0.5).then(|| "Calibri".to_owned()),
        font_size: rng.gen_bool(0.5).then_some(11.0),
    }
}

fn random_number(rng: &mut StdRng) -> f64 {
    f64::from(rng.gen_range(-6..=20)) / 2.0
}

/// A sheet named "S" over A1:E8 mixing absent, styled-blank, text,
/// numeric, boolean, error and formula cells.
pub fn random_workbook(rng: &mut StdRng) -> Workbook {
    let mut wb = Workbook::new();
    let sheet = wb.sheet_mut("S");
    for row in 0..GRID_ROWS {
        for column in 0..GRID_COLUMNS {
            let address = CellAddress::new(column, row);
            let value = match rng.gen_range(0..100) {
                0..=24 => continue,
                25..=34 => CellValue::Blank,
                35..=64 => CellValue::Text(TEXTS.choose(rng).unwrap().to_string()),
                65..=84 => CellValue::Numeric(random_number(rng)),
                85..=91 => CellValue::Boolean(rng.gen()),
                92..=93 => CellValue::Error("#N/A".into()),
                _ => CellValue::Formula {
                    formula: "A1+1".into(),
                    cached: match rng.gen_range(0..4) {
                        0 => None,
                        1 => Some(CachedValue::Numeric(random_number(rng))),
                        2 => Some(CachedValue::Text(TEXTS.choose(rng).unwrap().to_string())),
                        _ => Some(CachedValue::Boolean(rng.gen())),
                    },
                },
            };
            sheet.insert(Cell::new(address, value).with_style(random_style(rng)));
        }
    }
    wb
}

/// A range inside (occasionally overhanging) the random grid.
pub fn random_range(rng: &mut StdRng) -> CellRange {
    let a = CellAddress::new(rng.gen_range(0..GRID_COLUMNS + 1), rng.gen_range(0..GRID_ROWS + 1));
    let b = CellAddress::new(rng.gen_range(0..GRID_COLUMNS + 1), rng.gen_range(0..GRID_ROWS + 1));
    CellRange::new(a, b)
}

const REGEXES: [(&str, &str); 8] = [
    ("Know\\w*", ""),
    ("know", "i"),
    ("^[A-Z]", ""),
    ("[0-9]+", ""),
    ("a|x", ""),
    ("^$", ""),
    ("\\.5$", ""),
    ("true", ""),
];

fn random_var(rng: &mut StdRng) -> VariableName {
    *VariableName::ALL.choose(rng).unwrap()
}

/// A value-typed expression (number, string or variable based).
pub fn random_value_expr(rng: &mut StdRng, depth: u32) -> FilterExpr {
    let leaf = depth == 0 || rng.gen_bool(0.45);
    if leaf {
        return match rng.gen_range(0..10) {
            0..=2 => FilterExpr::Number(f64::from(rng.gen_range(0..12)) / 2.0),
            3..=4 => FilterExpr::Str(TEXTS.choose(rng).unwrap().to_string()),
            5 => FilterExpr::Bool(rng.gen()),
            _ => FilterExpr::Var(random_var(rng)),
        };
    }
    match rng.gen_range(0..6) {
        0 => FilterExpr::Neg(Box::new(random_value_expr(rng, depth - 1))),
        _ => {
            let op = *[BinaryOp::Add, BinaryOp::Sub, BinaryOp::Mul, BinaryOp::Div]
                .choose(rng)
                .unwrap();
            FilterExpr::binary(
                op,
                random_value_expr(rng, depth - 1),
                random_value_expr(rng, depth - 1),
            )
        }
    }
}

/// A mostly boolean-typed expression; a small share is deliberately
/// ill-typed so the type-error path is exercised too.
pub fn random_filter(rng: &mut StdRng, depth: u32) -> FilterExpr {
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..10) {
            0 => FilterExpr::Bool(rng.gen()),
            1 => random_value_expr(rng, 1),
            2..=5 => {
                let (src, flags) = REGEXES.choose(rng).unwrap();
                FilterExpr::Test(
                    FilterRegex::new(src, flags).unwrap(),
                    Box::new(random_value_expr(rng, 1)),
                )
            }
            _ => comparison(rng, 1),
        };
    }
    match rng.gen_range(0..7) {
        0 => FilterExpr::Not(Box::new(random_filter(rng, depth - 1))),
        1 | 2 => FilterExpr::binary(
            BinaryOp::And,
            random_filter(rng, depth - 1),
            random_filter(rng, depth - 1),
        ),
        3 | 4 => FilterExpr::binary(
            BinaryOp::Or,
            random_filter(rng, depth - 1),
            random_filter(rng, depth - 1),
        ),
        _ => comparison(rng, depth - 1),
    }
}

fn comparison(rng: &mut StdRng, depth: u32) -> FilterExpr {
    let op = *[
        BinaryOp::Eq,
        BinaryOp::Ne,
        BinaryOp::Lt,
        BinaryOp::Le,
        BinaryOp::Gt,
        BinaryOp::Ge,
    ]
    .choose(rng)
    .unwrap();
    FilterExpr::binary(op, random_value_expr(rng, depth), random_value_expr(rng, depth))
}

/// A mapping over sheet "S" of `w.xlsx` that types every selected cell as
/// `ex:Hit`, so the subjects in the output are exactly the selected cells.
pub fn selection_mapping(range: CellRange, filter: Option<&FilterExpr>) -> String {
    let filter = filter
        .map(|f| format!(" ; ss:javaScriptFilter \"{}\"", turtle_string(&f.to_string())))
        .unwrap_or_default();
    format!(
        "{PREFIXES}ex:SelectMap rml:logicalSource [ rml:referenceFormulation ql:Spreadsheet ;\n\
         rml:source [ ss:url \"w.xlsx\" ; ss:sheetName \"S\" ; ss:range \"{range}\"{filter} ] ] ;\n\
         rr:subjectMap [ rr:template \"http://example.org/cell/{{address}}\" ; rr:class ex:Hit ] .\n"
    )
}

/// Cells the engine selected, read back from the emitted subjects.
pub fn engine_selection(wb: &Workbook, mapping: &str) -> (BTreeSet<String>, usize) {
    let mut resolver = MemoryResolver::new();
    resolver.insert("w.xlsx", wb.clone());
    let exec = Engine::new(ExecutionOptions::default()).run_text(mapping, &resolver);
    let cells = exec
        .graph
        .iter()
        .map(|t| {
            t.subject
                .as_iri()
                .unwrap()
                .trim_start_matches("http://example.org/cell/")
                .to_owned()
        })
        .collect();
    (cells, exec.stats.cells_matched)
}

/// Brute-force enumeration: every address of the range, present and
/// non-blank, on which the filter evaluates to true.
pub fn oracle_selection(wb: &Workbook, range: CellRange, filter: Option<&FilterExpr>) -> BTreeSet<String> {
    let sheet = wb.sheet("S").unwrap();
    range
        .addresses()
        .filter(|a| sheet.get(*a).is_some_and(|c| !c.is_blank()))
        .filter(|a| match filter {
            None => true,
            Some(f) => eval_filter(f, &EvalContext::new(wb, "S", *a)).unwrap_or(false),
        })
        .map(|a| a.to_string())
        .collect()
}
