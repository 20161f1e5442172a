use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::graph::{GraphPoint, MetricGraph};
use crate::rational::Rational;

/// Shortest-path distances from a fixed source point.
///
/// Dijkstra runs over the vertex set; distances to interior points are
/// composed from the two endpoint distances plus, when source and target
/// share an edge, the direct sub-segment.
#[derive(Clone, Debug)]
pub struct DistanceField {
    source: GraphPoint,
    vertex: Vec<Rational>,
}

impl DistanceField {
    pub fn new(graph: &MetricGraph, source: &GraphPoint) -> DistanceField {
        let n = graph.vertex_count();
        let mut dist: Vec<Option<Rational>> = vec![None; n];
        let mut heap = BinaryHeap::new();
        let relax = |dist: &mut Vec<Option<Rational>>,
                     heap: &mut BinaryHeap<Reverse<(Rational, usize)>>,
                     w: usize,
                     d: Rational| {
            if dist[w].as_ref().is_none_or(|cur| d < *cur) {
                dist[w] = Some(d.clone());
                heap.push(Reverse((d, w)));
            }
        };
        match source {
            GraphPoint::Vertex(v) => relax(&mut dist, &mut heap, *v, Rational::zero()),
            GraphPoint::Interior { edge, offset } => {
                let e = graph.edge(*edge);
                relax(&mut dist, &mut heap, e.u, offset.clone());
                relax(&mut dist, &mut heap, e.v, &e.length - offset);
            }
        }
        while let Some(Reverse((d, w))) = heap.pop() {
            if dist[w].as_ref().is_some_and(|cur| *cur < d) {
                continue;
            }
            for g in graph.germs(w) {
                let e = graph.edge(g.edge);
                if e.is_loop() {
                    continue;
                }
                let next = &d + &e.length;
                relax(&mut dist, &mut heap, e.other(w), next);
            }
        }
        DistanceField {
            source: source.clone(),
            vertex: dist
                .into_iter()
                .map(|d| d.expect("metric graphs are connected"))
                .collect(),
        }
    }

    pub fn source(&self) -> &GraphPoint {
        &self.source
    }

    pub fn to_vertex(&self, v: usize) -> &Rational {
        &self.vertex[v]
    }

    pub fn vertex_distances(&self) -> &[Rational] {
        &self.vertex
    }

    pub fn to(&self, graph: &MetricGraph, target: &GraphPoint) -> Rational {
        match target {
            GraphPoint::Vertex(v) => self.vertex[*v].clone(),
            GraphPoint::Interior { edge, offset } => {
                let e = graph.edge(*edge);
                let via_u = &self.vertex[e.u] + offset;
                let via_v = &self.vertex[e.v] + &(&e.length - offset);
                let mut best = via_u.min(via_v);
                if let GraphPoint::Interior { edge: se, offset: so } = &self.source {
                    if se == edge {
                        best = best.min((so - offset).abs());
                    }
                }
                best
            }
        }
    }

    /// Largest distance from the source to any point of the graph,
    /// edge interiors included.
    pub fn eccentricity(&self, graph: &MetricGraph) -> Rational {
        let mut best = Rational::zero();
        for v in &self.vertex {
            if *v > best {
                best = v.clone();
            }
        }
        for (i, e) in graph.edges().iter().enumerate() {
            // On a segment whose ends sit at distances a and b the maximum is
            // (a + b + length) / 2.
            let candidates = match &self.source {
                GraphPoint::Interior { edge, offset } if *edge == i => vec![
                    (&self.vertex[e.u] + offset).half(),
                    (&self.vertex[e.v] + &(&e.length - offset)).half(),
                ],
                _ => vec![(&(&self.vertex[e.u] + &self.vertex[e.v]) + &e.length).half()],
            };
            for c in candidates {
                if c > best {
                    best = c;
                }
            }
        }
        best
    }
}

impl MetricGraph {
    pub fn distance(&self, a: &GraphPoint, b: &GraphPoint) -> Rational {
        DistanceField::new(self, a).to(self, b)
    }

    pub fn eccentricity(&self, p: &GraphPoint) -> Rational {
        DistanceField::new(self, p).eccentricity(self)
    }
}

/// All pairwise distances among `points`.
pub fn distance_matrix(graph: &MetricGraph, points: &[GraphPoint]) -> Vec<Vec<Rational>> {
    crate::par::map(points, |p| {
        let field = DistanceField::new(graph, p);
        points.iter().map(|x| field.to(graph, x)).collect()
    })
}
