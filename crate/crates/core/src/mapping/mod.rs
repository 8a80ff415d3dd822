//! Mapping documents: the rule model, its parser from an RDF graph, static
//! validation, and a writer back to the vocabulary.

mod model;
mod parse;
mod validate;
pub mod vocab;
mod write;

pub use model::{
    ExprKind, FunctionInvocation, PredicateObjectMap, SpreadsheetSource, TermMap, TermMapKind,
    TermType, TriplesMap,
};
pub use parse::{parse_mapping_document, parse_mapping_text};
pub use validate::validate_model;
pub use write::model_to_graph;
