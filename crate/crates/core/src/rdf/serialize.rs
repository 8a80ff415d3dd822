use std::collections::BTreeMap;
use std::fmt::Write;
use std::str::FromStr;

use super::graph::Graph;
use super::term::Term;
use super::vocab::RDF_TYPE;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RdfFormat {
    #[default]
    NTriples,
    Turtle,
}

impl FromStr for RdfFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ntriples" | "nt" | "n-triples" => Ok(RdfFormat::NTriples),
            "turtle" | "ttl" => Ok(RdfFormat::Turtle),
            other => Err(format!("unknown RDF format '{other}'")),
        }
    }
}

/// Writes `graph` deterministically: N-Triples lines are sorted, Turtle
/// groups sorted subjects, predicates and objects.
pub fn serialize_graph(graph: &Graph, format: RdfFormat) -> String {
    match format {
        RdfFormat::NTriples => ntriples(graph),
        RdfFormat::Turtle => turtle(graph),
    }
}

fn ntriples(graph: &Graph) -> String {
    let mut lines: Vec<String> = graph
        .iter()
        .map(|t| format!("{} {} {} .\n", t.subject, t.predicate, t.object))
        .collect();
    lines.sort();
    lines.concat()
}

fn turtle(graph: &Graph) -> String {
    let mut by_subject: BTreeMap<String, BTreeMap<String, Vec<String>>> = BTreeMap::new();
    for t in graph {
        let predicate = match &t.predicate {
            Term::Iri(iri) if iri == RDF_TYPE => "a".to_owned(),
            p => p.to_string(),
        };
        by_subject
            .entry(t.subject.to_string())
            .or_default()
            .entry(predicate)
            .or_default()
            .push(t.object.to_string());
    }
    let mut out = String::new();
    for (subject, predicates) in by_subject {
        out.push_str(&subject);
        let count = predicates.len();
        for (i, (predicate, mut objects)) in predicates.into_iter().enumerate() {
            objects.sort();
            let sep = if i == 0 { " " } else { "    " };
            let _ = write!(out, "{sep}{predicate} {}", objects.join(", "));
            out.push_str(if i + 1 == count { " .\n" } else { " ;\n" });
        }
    }
    out
}
