//! Barcode transforms of compact metric graphs.

pub mod constructions;
pub mod graph;
pub mod metric;
pub mod par;
pub mod persistence;
pub mod rational;
pub mod transform;
pub mod verify;

pub use graph::{GraphError, GraphPoint, MetricGraph};
pub use persistence::Diagram;
pub use rational::Rational;
