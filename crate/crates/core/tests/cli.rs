mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::{fixture, read_fixture};

fn gridrml(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gridrml"))
        .args(args)
        .env_remove("GRIDRML_WORKBOOK_ROOT")
        .output()
        .unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stderr_lines(out: &Output) -> Vec<serde_json::Value> {
    String::from_utf8_lossy(&out.stderr)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn help_and_usage_errors() {
    let out = gridrml(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("--mapping"));

    assert_eq!(gridrml(&[]).status.code(), Some(2));
    assert_eq!(gridrml(&["-m", "/nonexistent/map.ttl"]).status.code(), Some(2));
    let out = gridrml(&["-m", path(&fixture("listing.ttl")), "--format", "rdfxml"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn listing_to_stdout() {
    let out = gridrml(&["-m", path(&fixture("listing.ttl"))]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stderr.is_empty());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), read_fixture("listing.nt"));
}

#[test]
fn diagnostics_go_to_stderr_as_json_lines() {
    let out = gridrml(&["-m", path(&fixture("zip-mismatch.ttl"))]);
    assert_eq!(out.status.code(), Some(0));
    let diags = stderr_lines(&out);
    assert_eq!(diags.len(), 1);
    assert_eq!(diags[0]["code"], "E_ZIP_LENGTH");
    assert_eq!(diags[0]["severity"], "warning");
    assert_eq!(diags[0]["cell"], "A4");
    // stdout stays parseable RDF
    let text = String::from_utf8(out.stdout).unwrap();
    gridrml::rdf::parse_turtle(&text, "http://example.org/").unwrap();
}

#[test]
fn strict_exits_one_without_rdf() {
    let out = gridrml(&["-m", path(&fixture("zip-mismatch.ttl")), "--strict"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    assert_eq!(stderr_lines(&out)[0]["severity"], "error");
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("out.nt");
    let out = gridrml(&["-m", path(&fixture("listing.ttl")), "-o", path(&target)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(target).unwrap(), read_fixture("listing.nt"));
}

#[test]
fn workbook_root_flag_and_env() {
    let dir = tempfile::tempdir().unwrap();
    let mapping = dir.path().join("m.ttl");
    std::fs::copy(fixture("listing.ttl"), &mapping).unwrap();
    let fixtures = fixture("");

    // next to the mapping there is no workbook
    let out = gridrml(&["-m", path(&mapping)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_lines(&out)[0]["code"], "E_IO");

    let out = gridrml(&["-m", path(&mapping), "--workbook-root", path(&fixtures)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), read_fixture("listing.nt"));

    let out = Command::new(env!("CARGO_BIN_EXE_gridrml"))
        .args(["-m", path(&mapping)])
        .env("GRIDRML_WORKBOOK_ROOT", &fixtures)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));

    // the flag wins over the environment
    let out = Command::new(env!("CARGO_BIN_EXE_gridrml"))
        .args(["-m", path(&mapping), "--workbook-root", path(dir.path())])
        .env("GRIDRML_WORKBOOK_ROOT", &fixtures)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bad_base_is_a_usage_error() {
    let out = gridrml(&["-m", path(&fixture("listing.ttl")), "--base", "not an iri"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn turtle_output_matches_ntriples() {
    let nt = gridrml(&["-m", path(&fixture("graph.ttl"))]);
    let ttl = gridrml(&["-m", path(&fixture("graph.ttl")), "--format", "turtle"]);
    assert_eq!(ttl.status.code(), Some(0));
    let ttl_text = String::from_utf8(ttl.stdout).unwrap();
    assert!(ttl_text.starts_with("@prefix") || ttl_text.starts_with('<'));
    let a = gridrml::rdf::parse_turtle(&String::from_utf8(nt.stdout).unwrap(), "http://example.org/").unwrap();
    let b = gridrml::rdf::parse_turtle(&ttl_text, "http://example.org/").unwrap();
    assert_eq!(a, b);
}
