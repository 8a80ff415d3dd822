use std::collections::HashSet;

use super::graph::Graph;
use super::term::Term;
use super::vocab::{RDF_FIRST, RDF_NIL, RDF_REST};
use crate::error::{Error, Result};

/// Items of the well-formed RDF collection starting at `head`.
pub fn rdf_list(graph: &Graph, head: &Term) -> Result<Vec<Term>> {
    let mut items = Vec::new();
    let mut seen = HashSet::new();
    let mut node = head.clone();
    while node.as_iri() != Some(RDF_NIL) {
        if !seen.insert(node.clone()) {
            return Err(Error::MalformedList(format!("{node} (cycle)")));
        }
        let firsts: Vec<&Term> = graph.objects(&node, RDF_FIRST).collect();
        let rests: Vec<&Term> = graph.objects(&node, RDF_REST).collect();
        if firsts.len() != 1 || rests.len() != 1 {
            return Err(Error::MalformedList(format!(
                "{node} has {} rdf:first and {} rdf:rest",
                firsts.len(),
                rests.len()
            )));
        }
        items.push(firsts[0].clone());
        node = rests[0].clone();
    }
    Ok(items)
}
