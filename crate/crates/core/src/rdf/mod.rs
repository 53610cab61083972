//! RDF substrate: terms, N-Triples I/O and the interned graph used for
//! distance queries and random walks.

mod graph;
mod ntriples;
mod term;

pub use graph::{build_graph, Edge, Graph, NodeId};
pub use ntriples::{parse_ntriples, TripleSet};
pub use term::{Literal, Term, Triple};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RdfError {
    #[error("line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error("unknown node id {0}")]
    UnknownNode(u32),
}

pub const RDFS_SUBCLASS_OF: &str = "http://www.w3.org/2000/01/rdf-schema#subClassOf";
pub const RDFS_LABEL: &str = "http://www.w3.org/2000/01/rdf-schema#label";
