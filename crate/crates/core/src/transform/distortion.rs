use serde::Serialize;

use crate::graph::MetricGraph;
use crate::metric::{hausdorff_sets_with, wasserstein_infinity_with};
use crate::par::Execution;
use crate::rational::Rational;
use crate::transform::{barcode_transform_with, BarcodeSample, MeasuredBarcodeSample, TransformError};

/// Sampled persistence distortion with the interval that must contain the
/// true value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistortionEstimate {
    pub estimate: Rational,
    /// `max(0, estimate − δ̂_G − δ̂_H)`.
    pub lower: Rational,
    pub upper: Rational,
    pub delta_hat_g: Rational,
    pub delta_hat_h: Rational,
}

impl DistortionEstimate {
    pub fn slack(&self) -> Rational {
        &self.delta_hat_g + &self.delta_hat_h
    }
}

pub fn persistence_distortion_estimate(
    g: &MetricGraph,
    h: &MetricGraph,
    delta: &Rational,
) -> Result<DistortionEstimate, TransformError> {
    persistence_distortion_estimate_with(Execution::default(), g, h, delta)
}

pub fn persistence_distortion_estimate_with(
    exec: Execution,
    g: &MetricGraph,
    h: &MetricGraph,
    delta: &Rational,
) -> Result<DistortionEstimate, TransformError> {
    let sg = barcode_transform_with(exec, g, delta)?;
    let sh = barcode_transform_with(exec, h, delta)?;
    distortion_between_with(exec, &sg, &sh)
}

/// Hausdorff distance between two samples' diagram sets, bracketed by their
/// covering radii.
pub fn distortion_between(a: &BarcodeSample, b: &BarcodeSample) -> Result<DistortionEstimate, TransformError> {
    distortion_between_with(Execution::default(), a, b)
}

pub fn distortion_between_with(
    exec: Execution,
    a: &BarcodeSample,
    b: &BarcodeSample,
) -> Result<DistortionEstimate, TransformError> {
    let estimate = hausdorff_sets_with(exec, a.diagrams(), b.diagrams())?;
    let delta_hat_g = a.covering_radius().clone();
    let delta_hat_h = b.covering_radius().clone();
    let slack = &delta_hat_g + &delta_hat_h;
    let lower = (&estimate - &slack).max(Rational::zero());
    let upper = &estimate + &slack;
    Ok(DistortionEstimate {
        estimate,
        lower,
        upper,
        delta_hat_g,
        delta_hat_h,
    })
}

/// Sampled measured persistence distortion and its Lipschitz error bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MeasuredDistortionEstimate {
    pub estimate: Rational,
    pub error_bound: Rational,
}

pub fn measured_persistence_distortion_estimate(
    g: &MeasuredBarcodeSample,
    h: &MeasuredBarcodeSample,
) -> Result<MeasuredDistortionEstimate, TransformError> {
    measured_persistence_distortion_estimate_with(Execution::default(), g, h)
}

pub fn measured_persistence_distortion_estimate_with(
    exec: Execution,
    g: &MeasuredBarcodeSample,
    h: &MeasuredBarcodeSample,
) -> Result<MeasuredDistortionEstimate, TransformError> {
    let estimate = wasserstein_infinity_with(exec, &g.weighted_diagrams(), &h.weighted_diagrams())?;
    Ok(MeasuredDistortionEstimate {
        estimate,
        error_bound: g.covering_radius() + h.covering_radius(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;
    use crate::rational::q;
    use crate::transform::{measured_transform, Density};

    fn circle(c: &str) -> MetricGraph {
        let mut b = GraphBuilder::new();
        b.vertex("o").edge("l", "o", "o", q(c));
        b.build().unwrap()
    }

    fn path(a: &str, b: &str) -> MetricGraph {
        let mut g = GraphBuilder::new();
        g.vertex("x").vertex("y").vertex("z");
        g.edge("e1", "x", "y", q(a)).edge("e2", "y", "z", q(b));
        g.build().unwrap()
    }

    #[test]
    fn identical_graphs() {
        let g = path("1", "2");
        let e = persistence_distortion_estimate(&g, &g, &q("1/2")).unwrap();
        assert_eq!(e.estimate, q("0"));
        assert_eq!(e.lower, q("0"));
        assert_eq!(e.upper, e.slack());
    }

    #[test]
    fn circles() {
        let e = persistence_distortion_estimate(&circle("2"), &circle("4"), &q("1/2")).unwrap();
        assert_eq!(e.estimate, q("1"));
        assert!(e.lower <= q("1") && q("1") <= e.upper);
    }

    #[test]
    fn measured_circles() {
        let a = measured_transform(&circle("2"), &q("1/2"), &Density::Uniform).unwrap();
        let b = measured_transform(&circle("4"), &q("1/2"), &Density::Uniform).unwrap();
        assert_eq!(
            measured_persistence_distortion_estimate(&a, &b).unwrap().estimate,
            q("1")
        );
        assert_eq!(
            measured_persistence_distortion_estimate(&a, &a).unwrap().estimate,
            q("0")
        );
    }

    #[test]
    fn measured_density_change_moves_mass() {
        let g = path("1", "2");
        let a = measured_transform(&g, &q("1"), &Density::Uniform).unwrap();
        let b = measured_transform(&g, &q("1"), &"e1=1".parse().unwrap()).unwrap();
        let e = measured_persistence_distortion_estimate(&a, &b).unwrap();
        assert!(e.estimate.is_positive());
        assert_eq!(e.error_bound, a.covering_radius() + b.covering_radius());
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let g = path("1", "2");
        let h = path("1", "5/2");
        let a = persistence_distortion_estimate_with(Execution::Sequential, &g, &h, &q("1/3")).unwrap();
        let b = persistence_distortion_estimate_with(Execution::Parallel, &g, &h, &q("1/3")).unwrap();
        assert_eq!(a, b);
    }
}
