use std::collections::{BTreeSet, HashMap};

use crate::graph::{Edge, GraphPoint, MetricGraph};
use crate::rational::Rational;

/// Result of inserting valence-2 vertices at interior points.
///
/// Original vertices keep their indices; new vertices are appended in edge
/// order, then offset order. Each original edge maps to a run of pieces.
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub graph: MetricGraph,
    /// For each original edge: `(start offset, new edge index)` per piece,
    /// ordered along the edge.
    pieces: Vec<Vec<(Rational, usize)>>,
    inserted: HashMap<GraphPoint, usize>,
}

impl Subdivision {
    /// Location of an original point in the subdivided graph.
    pub fn map_point(&self, p: &GraphPoint) -> GraphPoint {
        match p {
            GraphPoint::Vertex(v) => GraphPoint::Vertex(*v),
            GraphPoint::Interior { edge, offset } => {
                if let Some(&v) = self.inserted.get(p) {
                    return GraphPoint::Vertex(v);
                }
                let run = &self.pieces[*edge];
                let idx = run.partition_point(|(start, _)| start < offset) - 1;
                let (start, new_edge) = &run[idx];
                GraphPoint::Interior {
                    edge: *new_edge,
                    offset: offset - start,
                }
            }
        }
    }

    /// New vertex created for an inserted point.
    pub fn vertex_for(&self, p: &GraphPoint) -> Option<usize> {
        match p {
            GraphPoint::Vertex(v) => Some(*v),
            GraphPoint::Interior { .. } => self.inserted.get(p).copied(),
        }
    }

    pub fn pieces_of(&self, edge: usize) -> &[(Rational, usize)] {
        &self.pieces[edge]
    }
}

impl MetricGraph {
    /// Makes every listed interior point a valence-2 vertex. Vertex points
    /// are ignored; distances are preserved exactly.
    pub fn subdivide_at<'a>(&self, points: impl IntoIterator<Item = &'a GraphPoint>) -> Subdivision {
        let mut cuts: Vec<BTreeSet<Rational>> = vec![BTreeSet::new(); self.edge_count()];
        for p in points {
            if let GraphPoint::Interior { edge, offset } = p {
                cuts[*edge].insert(offset.clone());
            }
        }
        let mut labels: Vec<String> = self.vertex_labels().to_vec();
        let mut edges = Vec::new();
        let mut pieces = Vec::with_capacity(self.edge_count());
        let mut inserted = HashMap::new();
        for (i, e) in self.edges().iter().enumerate() {
            if cuts[i].is_empty() {
                pieces.push(vec![(Rational::zero(), edges.len())]);
                edges.push(e.clone());
                continue;
            }
            let mut run = Vec::new();
            let mut prev_vertex = e.u;
            let mut prev_offset = Rational::zero();
            for (k, cut) in cuts[i].iter().enumerate() {
                let w = labels.len();
                labels.push(fresh_label(self, &e.label, cut));
                inserted.insert(
                    GraphPoint::Interior {
                        edge: i,
                        offset: cut.clone(),
                    },
                    w,
                );
                run.push((prev_offset.clone(), edges.len()));
                edges.push(Edge {
                    label: format!("{}.{}", e.label, k),
                    u: prev_vertex,
                    v: w,
                    length: cut - &prev_offset,
                });
                prev_vertex = w;
                prev_offset = cut.clone();
            }
            run.push((prev_offset.clone(), edges.len()));
            edges.push(Edge {
                label: format!("{}.{}", e.label, cuts[i].len()),
                u: prev_vertex,
                v: e.v,
                length: &e.length - &prev_offset,
            });
            pieces.push(run);
        }
        Subdivision {
            graph: MetricGraph::from_parts(labels, edges),
            pieces,
            inserted,
        }
    }
}

fn fresh_label(graph: &MetricGraph, edge_label: &str, offset: &Rational) -> String {
    let base = format!("{edge_label}@{offset}");
    if graph.vertex_by_label(&base).is_none() {
        return base;
    }
    (1..)
        .map(|k| format!("{base}~{k}"))
        .find(|l| graph.vertex_by_label(l).is_none())
        .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{distance_matrix, GraphBuilder};
    use crate::rational::q;

    #[test]
    fn loop_split_at_antipode() {
        let mut b = GraphBuilder::new();
        b.vertex("o").edge("l", "o", "o", q("2"));
        let g = b.build().unwrap();
        let s = g.subdivide_at(&[g.midpoint(0)]);
        assert_eq!(s.graph.edge_count(), 2);
        assert_eq!(s.graph.vertex_count(), 2);
        for e in s.graph.edges() {
            assert_eq!(e.length, q("1"));
            assert_ne!(e.u, e.v);
        }
    }

    #[test]
    fn vertex_points_are_a_no_op() {
        let mut b = GraphBuilder::new();
        b.vertex("a").vertex("b").edge("e", "a", "b", q("1"));
        let g = b.build().unwrap();
        let s = g.subdivide_at(&[GraphPoint::Vertex(1)]);
        assert_eq!(s.graph.to_string(), g.to_string());
    }

    #[test]
    fn interval_split_preserves_distances() {
        let mut b = GraphBuilder::new();
        b.vertex("a").vertex("b").edge("e", "a", "b", q("2"));
        let g = b.build().unwrap();
        let cut = g.point_on_edge(0, q("0.5")).unwrap();
        let s = g.subdivide_at(std::slice::from_ref(&cut));
        let lengths: Vec<_> = s.graph.edges().iter().map(|e| e.length.clone()).collect();
        assert_eq!(lengths, vec![q("0.5"), q("1.5")]);
        // old sample, compared before and after
        let old: Vec<GraphPoint> = vec![
            GraphPoint::Vertex(0),
            GraphPoint::Vertex(1),
            cut,
            g.point_on_edge(0, q("0.2")).unwrap(),
            g.point_on_edge(0, q("1.9")).unwrap(),
        ];
        let new: Vec<GraphPoint> = old.iter().map(|p| s.map_point(p)).collect();
        assert_eq!(distance_matrix(&g, &old), distance_matrix(&s.graph, &new));
        assert_eq!(new[2], GraphPoint::Vertex(2));
    }
}
