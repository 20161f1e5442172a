use crate::graph::{GraphPoint, MetricGraph};
use crate::par::{self, Execution};
use crate::persistence::{diagram_at, Diagram};
use crate::rational::Rational;
use crate::transform::TransformError;

/// Number of equal segments each edge is cut into for spacing `delta`:
/// `floor(L / delta) + 1`, so every gap is strictly below `delta`.
fn segments(length: &Rational, delta: &Rational) -> usize {
    let k = (length / delta).floor_integer();
    usize::try_from(k).expect("segment count fits in usize") + 1
}

/// Basepoints of a δ-net: every vertex, then for each edge the interior
/// points that cut it into equal pieces shorter than `delta`.
pub fn sample_basepoints(graph: &MetricGraph, delta: &Rational) -> Result<Vec<GraphPoint>, TransformError> {
    check_delta(delta)?;
    let mut points: Vec<GraphPoint> = (0..graph.vertex_count()).map(GraphPoint::Vertex).collect();
    for (i, e) in graph.edges().iter().enumerate() {
        let k = segments(&e.length, delta);
        let step = &e.length / &Rational::from_integer(k as i64);
        for j in 1..k {
            let offset = &step * &Rational::from_integer(j as i64);
            points.push(GraphPoint::Interior { edge: i, offset });
        }
    }
    Ok(points)
}

/// Covering radius of [`sample_basepoints`]: half the largest gap between
/// consecutive samples along any edge.
pub fn covering_radius(graph: &MetricGraph, delta: &Rational) -> Result<Rational, TransformError> {
    check_delta(delta)?;
    Ok(graph
        .edges()
        .iter()
        .map(|e| (&e.length / &Rational::from_integer(segments(&e.length, delta) as i64)).half())
        .max()
        .unwrap_or_else(Rational::zero))
}

fn check_delta(delta: &Rational) -> Result<(), TransformError> {
    if delta.is_positive() {
        Ok(())
    } else {
        Err(TransformError::NonPositiveDelta(delta.clone()))
    }
}

/// A finite sample of the barcode transform: diagrams at the points of a
/// δ-net, with the covering radius δ̂ that bounds the error of every
/// statement made about the full transform.
#[derive(Clone, Debug)]
pub struct BarcodeSample {
    graph: MetricGraph,
    points: Vec<GraphPoint>,
    diagrams: Vec<Diagram>,
    delta: Rational,
    covering_radius: Rational,
}

impl BarcodeSample {
    pub fn graph(&self) -> &MetricGraph {
        &self.graph
    }

    pub fn points(&self) -> &[GraphPoint] {
        &self.points
    }

    pub fn diagrams(&self) -> &[Diagram] {
        &self.diagrams
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn delta(&self) -> &Rational {
        &self.delta
    }

    /// δ̂: every point of the graph lies within this distance of a sample.
    pub fn covering_radius(&self) -> &Rational {
        &self.covering_radius
    }

    /// Number of pairwise distinct diagrams in the sample.
    pub fn distinct_diagram_count(&self) -> usize {
        crate::metric::distinct(&self.diagrams).0.len()
    }

    /// Labels in the `edgeID:offset` / `vertex:id` syntax.
    pub fn labels(&self) -> Vec<String> {
        self.points.iter().map(|p| self.graph.point_label(p)).collect()
    }

    /// Re-checks the covering claim from the stored points: all vertices
    /// are present and consecutive offsets along every edge are at most
    /// 2δ̂ apart.
    pub fn verify_covering(&self) -> bool {
        let g = &self.graph;
        let vertices = (0..g.vertex_count()).all(|v| self.points.contains(&GraphPoint::Vertex(v)));
        let mut offsets: Vec<Vec<Rational>> = g
            .edges()
            .iter()
            .map(|e| vec![Rational::zero(), e.length.clone()])
            .collect();
        for p in &self.points {
            if let GraphPoint::Interior { edge, offset } = p {
                offsets[*edge].push(offset.clone());
            }
        }
        let bound = self.covering_radius.clone() + self.covering_radius.clone();
        vertices
            && offsets.iter_mut().all(|o| {
                o.sort();
                o.windows(2).all(|w| &w[1] - &w[0] <= bound)
            })
    }
}

/// Diagrams at every point of the δ-net of `graph`.
pub fn barcode_transform(graph: &MetricGraph, delta: &Rational) -> Result<BarcodeSample, TransformError> {
    barcode_transform_with(Execution::default(), graph, delta)
}

pub fn barcode_transform_with(
    exec: Execution,
    graph: &MetricGraph,
    delta: &Rational,
) -> Result<BarcodeSample, TransformError> {
    let points = sample_basepoints(graph, delta)?;
    let diagrams = par::map_with(exec, &points, |p| diagram_at(graph, p));
    Ok(BarcodeSample {
        graph: graph.clone(),
        points,
        diagrams,
        delta: delta.clone(),
        covering_radius: covering_radius(graph, delta)?,
    })
}

/// Diagrams at caller-chosen basepoints. The covering radius is left at the
/// supplied value and not re-derived.
pub fn barcode_sample_at(graph: &MetricGraph, points: Vec<GraphPoint>, covering_radius: Rational) -> BarcodeSample {
    let diagrams = par::map(&points, |p| diagram_at(graph, p));
    BarcodeSample {
        graph: graph.clone(),
        points,
        diagrams,
        delta: covering_radius.clone() + covering_radius.clone(),
        covering_radius,
    }
}
