//! Exact geometry of compact metric graphs.

mod automorphism;
mod canon;
mod cost;
mod cycles;
mod geodesic;
mod io;
mod model;
mod relation;
mod subdivide;

pub use automorphism::{automorphism_count, suppress_valence_two, AUTOMORPHISM_VERTEX_LIMIT};
pub use canon::canonical_tree_code;
pub use cost::{correspondence_cost, coupling_cost_jinf, Correspondence, DiscreteCoupling};
pub use cycles::{injectivity_radius, is_circle, systole, topological_self_loops, SelfLoop};
pub use geodesic::{distance_matrix, DistanceField};
pub use io::{parse_graph, read_graph_file, write_distance_csv};
pub use model::{Edge, Germ, GraphBuilder, GraphPoint, MetricGraph, ValidationReport};
pub use relation::{has_small_integer_relation, RELATION_SEARCH_LIMIT};
pub use subdivide::Subdivision;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GraphError {
    #[error("edge {edge}: nonpositive length {length}")]
    NonPositiveLength { edge: String, length: Rational },
    #[error("disconnected: {components} components")]
    Disconnected { components: usize },
    #[error("graph has no vertices")]
    Empty,
    #[error("duplicate vertex id {0}")]
    DuplicateVertex(String),
    #[error("duplicate edge id {0}")]
    DuplicateEdge(String),
    #[error("edge {edge}: unknown vertex {vertex}")]
    UnknownVertex { edge: String, vertex: String },
    #[error("unknown edge {0}")]
    UnknownEdge(String),
    #[error("offset {offset} outside edge {edge} of length {length}")]
    OffsetOutOfRange {
        edge: String,
        offset: Rational,
        length: Rational,
    },
    #[error("cannot parse point `{0}`")]
    BadPoint(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("graph is not a tree")]
    NotATree,
    #[error("search space too large: {0}")]
    TooLarge(String),
    #[error("coupling marginals do not match the supplied measures: {0}")]
    MarginalMismatch(String),
    #[error("empty correspondence")]
    EmptyCorrespondence,
    #[error("invalid graph: {}", .0.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<GraphError>),
}

impl GraphError {
    /// Every individual violation, flattening [`GraphError::Invalid`].
    pub fn violations(&self) -> Vec<&GraphError> {
        match self {
            GraphError::Invalid(all) => all.iter().collect(),
            other => vec![other],
        }
    }
}
