//! RDF terms and graphs, plus the Turtle reader and the N-Triples / Turtle
//! writers used for mapping documents and engine output.

mod graph;
mod list;
mod serialize;
mod term;
mod turtle;
pub mod vocab;

pub use graph::{Graph, Triple};
pub use list::rdf_list;
pub use serialize::{serialize_graph, RdfFormat};
pub use term::{Literal, Term};
pub use turtle::{parse_turtle, TurtleParser};
