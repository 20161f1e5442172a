use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::metric::{bottleneck, bottleneck_lower_bound, distinct};
use crate::par::{self, Execution};
use crate::persistence::{valence_from_diagram, Diagram};
use crate::rational::Rational;
use crate::transform::{BarcodeSample, TransformError};

/// Shortest-path distances on the graph whose nodes are the sampled
/// diagrams and whose edges join diagrams at bottleneck distance at most
/// `connect_radius`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntrinsicMetric {
    pub connect_radius: Rational,
    pub labels: Vec<String>,
    pub distances: Vec<Vec<Rational>>,
}

/// Default connect radius: three times the covering radius.
pub fn default_connect_radius(sample: &BarcodeSample) -> Rational {
    sample.covering_radius() * &Rational::from_integer(3)
}

pub fn estimate_intrinsic_metric(
    sample: &BarcodeSample,
    connect_radius: Option<&Rational>,
) -> Result<IntrinsicMetric, TransformError> {
    estimate_intrinsic_metric_with(Execution::default(), sample, connect_radius)
}

pub fn estimate_intrinsic_metric_with(
    exec: Execution,
    sample: &BarcodeSample,
    connect_radius: Option<&Rational>,
) -> Result<IntrinsicMetric, TransformError> {
    let radius = match connect_radius {
        Some(r) if !r.is_positive() => return Err(TransformError::NonPositiveRadius(r.clone())),
        Some(r) => r.clone(),
        None => default_connect_radius(sample),
    };
    let (classes, class_of) = distinct(sample.diagrams());
    let k = classes.len();
    // adjacency between classes; members of one class are at distance 0
    let rows: Vec<Vec<(usize, Rational)>> = par::map_range_with(exec, k, |i| {
        (0..k)
            .filter(|&j| j != i)
            .filter(|&j| bottleneck_lower_bound(classes[i], classes[j]) <= radius)
            .filter_map(|j| {
                let d = bottleneck(classes[i], classes[j]);
                (d <= radius).then_some((j, d))
            })
            .collect()
    });
    let table: Vec<Vec<Option<Rational>>> = par::map_range_with(exec, k, |s| dijkstra(&rows, s));
    let n = sample.len();
    let mut distances = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            distances[i][j] = table[class_of[i]][class_of[j]]
                .clone()
                .ok_or_else(|| TransformError::SurrogateDisconnected(radius.clone()))?;
        }
    }
    Ok(IntrinsicMetric {
        connect_radius: radius,
        labels: sample.labels(),
        distances,
    })
}

fn dijkstra(adj: &[Vec<(usize, Rational)>], source: usize) -> Vec<Option<Rational>> {
    let mut dist: Vec<Option<Rational>> = vec![None; adj.len()];
    dist[source] = Some(Rational::zero());
    let mut heap = BinaryHeap::from([Reverse((Rational::zero(), source))]);
    while let Some(Reverse((d, x))) = heap.pop() {
        if dist[x].as_ref().is_some_and(|best| d > *best) {
            continue;
        }
        for (y, w) in &adj[x] {
            let nd = &d + w;
            if dist[*y].as_ref().is_none_or(|best| nd < *best) {
                dist[*y] = Some(nd.clone());
                heap.push(Reverse((nd, *y)));
            }
        }
    }
    dist
}

/// What a tip of the barcode transform came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "kebab-case")]
pub enum TipClass {
    GenuineLeaf,
    SelfLoopAntipode { half_circumference: Rational },
    Other,
}

/// Tells a leaf vertex of the graph (no death-zero 1-dimensional point)
/// from the antipode of a topological self-loop (exactly one such point,
/// born at half the loop's circumference).
pub fn classify_tip(d: &Diagram) -> TipClass {
    match valence_from_diagram(d) {
        1 => TipClass::GenuineLeaf,
        2 => {
            let p = d
                .in_dim(1)
                .find(|p| p.death.is_zero())
                .expect("valence 2 implies a death-zero point");
            TipClass::SelfLoopAntipode {
                half_circumference: p.birth.clone(),
            }
        }
        _ => TipClass::Other,
    }
}
