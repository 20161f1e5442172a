//! Generators and verifiers for standard graphs, cactus approximations,
//! non-injectivity counterexamples, generic random graphs and tree checks.

mod cactus;
mod counterexample;
mod random;
mod search;
mod standard;
mod trees;

pub use cactus::{
    cactus, cactus_certificate, cactus_hypotheses, compliant_cactus_spec, Cactus, CactusCertificate, CactusHypotheses,
    CactusSpec,
};
pub use counterexample::{
    attach_at, counterexample_pair, embedded_counterexample, golden_counterexample, verify_counterexample,
    CounterexampleParams, CounterexampleReport, ResolutionCheck,
};
pub use random::{
    random_metric_graph, random_tree, LengthRange, RandomGraphSpec, RANDOM_EDGE_LIMIT, RANDOM_VERTEX_LIMIT,
};
pub use search::{
    caterpillar, search_noninjective_trivial_auto, verify_witness, CaterpillarSearch, NonInjectiveWitness,
};
pub use standard::{make_standard, standard, StandardGraph};
pub use trees::{
    geodesic_point, minimax_point, rips_cech_graph_check, rips_cech_tree_check, tree_helly_check, tripod_center, Ball,
    CechRipsReport, CechRipsViolation, HellyReport, CECH_RIPS_MAX_SUBSET,
};

use crate::graph::GraphError;
use crate::transform::TransformError;

#[derive(Debug, thiserror::Error)]
pub enum ConstructionError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("inconsistent construction: {0}")]
    Spec(String),
    #[error("degenerate parameters: {0}")]
    Degenerate(String),
    #[error("guard exceeded: {0}")]
    Guard(String),
    #[error("graph is not a tree")]
    NotATree,
    #[error(transparent)]
    Graph(Box<GraphError>),
    #[error(transparent)]
    Transform(#[from] TransformError),
}

impl From<GraphError> for ConstructionError {
    fn from(e: GraphError) -> Self {
        ConstructionError::Graph(Box::new(e))
    }
}
