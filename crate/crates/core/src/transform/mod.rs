//! The barcode transform sampled on δ-nets, and what it is used for:
//! persistence distortion, local isometry probes, injectivity checks,
//! intrinsic-metric reconstruction and self-loop detection.

mod distortion;
mod export;
mod injectivity;
mod measured;
mod probe;
mod reconstruct;
mod sample;

pub use distortion::{
    distortion_between, distortion_between_with, measured_persistence_distortion_estimate,
    measured_persistence_distortion_estimate_with, persistence_distortion_estimate,
    persistence_distortion_estimate_with, DistortionEstimate, MeasuredDistortionEstimate,
};
pub use export::{exact_number, export_transform, sha256_hex, MANIFEST_FILE};
pub use injectivity::{sampled_injectivity_check, sampled_injectivity_check_with, Collision, InjectivityReport};
pub use measured::{measured_transform, measured_transform_with, voronoi_weights, Density, MeasuredBarcodeSample};
pub use probe::{local_isometry_probe, IsometryProbe, ProbeRow, PROBE_HALVINGS};
pub use reconstruct::{
    classify_tip, default_connect_radius, estimate_intrinsic_metric, estimate_intrinsic_metric_with, IntrinsicMetric,
    TipClass,
};
pub use sample::{
    barcode_sample_at, barcode_transform, barcode_transform_with, covering_radius, sample_basepoints, BarcodeSample,
};

pub use crate::graph::is_circle;

use crate::metric::MetricError;
use crate::rational::Rational;

#[derive(Debug, thiserror::Error)]
pub enum TransformError {
    #[error("delta must be positive, got {0}")]
    NonPositiveDelta(Rational),
    #[error("connect radius must be positive, got {0}")]
    NonPositiveRadius(Rational),
    #[error("circle input: the barcode transform of a circle is constant")]
    CircleInput,
    #[error("invalid density: {0}")]
    Density(String),
    #[error("surrogate graph is disconnected at connect radius {0}")]
    SurrogateDisconnected(Rational),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
