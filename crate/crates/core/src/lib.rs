pub mod cli;
pub mod diagnostic;
pub mod engine;
pub mod error;
pub mod expr;
pub mod functions;
pub mod mapping;
pub mod rdf;
pub mod workbook;

pub use diagnostic::{Diagnostic, Severity};
pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/logical-sources.md")]
    mod logical_sources {}
    #[doc = include_str!("../../../book/src/references.md")]
    mod references {}
    #[doc = include_str!("../../../book/src/templates.md")]
    mod templates {}
    #[doc = include_str!("../../../book/src/filters.md")]
    mod filters {}
    #[doc = include_str!("../../../book/src/predicate-lists.md")]
    mod predicate_lists {}
    #[doc = include_str!("../../../book/src/functions.md")]
    mod functions {}
    #[doc = include_str!("../../../book/src/diagnostics.md")]
    mod diagnostics {}
    #[doc = include_str!("../../../book/src/cli-and-service.md")]
    mod cli_and_service {}
}
