use crate::graph::{DistanceField, GraphPoint, MetricGraph};
use crate::persistence::PersistenceError;
use crate::rational::Rational;

/// A graph on which a height function is linear with slope ±1 along every
/// edge, together with the vertex heights.
#[derive(Clone, Debug)]
pub struct HeightField {
    graph: MetricGraph,
    height: Vec<Rational>,
    base: Option<usize>,
    downforks: Vec<usize>,
}

impl HeightField {
    /// The distance function from `p`, on `graph` subdivided at `p` and at
    /// every interior point where the two ways around an edge balance.
    pub fn distance_from(graph: &MetricGraph, p: &GraphPoint) -> HeightField {
        let at_p = graph.subdivide_at([p]);
        let base = at_p
            .vertex_for(&at_p.map_point(p))
            .expect("p is a vertex after subdividing");
        let g = at_p.graph;
        let field = DistanceField::new(&g, &GraphPoint::Vertex(base));
        let d = field.vertex_distances();
        let mut cuts = Vec::new();
        for (i, e) in g.edges().iter().enumerate() {
            let t = (&(&e.length + &d[e.v]) - &d[e.u]).half();
            if t.is_positive() && t < e.length {
                cuts.push(GraphPoint::Interior { edge: i, offset: t });
            }
        }
        let split = g.subdivide_at(&cuts);
        let downforks: Vec<usize> = cuts.iter().map(|c| split.vertex_for(c).expect("inserted")).collect();
        let graph = split.graph;
        let height = DistanceField::new(&graph, &GraphPoint::Vertex(base))
            .vertex_distances()
            .to_vec();
        HeightField {
            graph,
            height,
            base: Some(base),
            downforks,
        }
    }

    /// Wraps explicit heights after checking that every edge rises or falls
    /// by exactly its length.
    pub fn from_heights(graph: MetricGraph, height: Vec<Rational>) -> Result<HeightField, PersistenceError> {
        if height.len() != graph.vertex_count() {
            return Err(PersistenceError::Field(format!(
                "{} heights for {} vertices",
                height.len(),
                graph.vertex_count()
            )));
        }
        for e in graph.edges() {
            if (&height[e.u] - &height[e.v]).abs() != e.length {
                return Err(PersistenceError::Field(format!(
                    "edge {} is not monotone with unit slope",
                    e.label
                )));
            }
        }
        let zeros: Vec<usize> = (0..height.len()).filter(|&v| height[v].is_zero()).collect();
        let base = (zeros.len() == 1).then(|| zeros[0]);
        Ok(HeightField {
            graph,
            height,
            base,
            downforks: Vec::new(),
        })
    }

    pub fn graph(&self) -> &MetricGraph {
        &self.graph
    }

    pub fn height(&self, v: usize) -> &Rational {
        &self.height[v]
    }

    pub fn heights(&self) -> &[Rational] {
        &self.height
    }

    /// Vertex at height zero when the field is a distance function.
    pub fn base(&self) -> Option<usize> {
        self.base
    }

    /// Vertices inserted at interior local maxima.
    pub fn downforks(&self) -> &[usize] {
        &self.downforks
    }

    /// Endpoints of edge `i` as (low, high).
    pub fn orientation(&self, i: usize) -> (usize, usize) {
        let e = self.graph.edge(i);
        if self.height[e.u] <= self.height[e.v] {
            (e.u, e.v)
        } else {
            (e.v, e.u)
        }
    }

    pub fn max_height(&self) -> Rational {
        self.height.iter().max().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn min_height(&self) -> Rational {
        self.height.iter().min().cloned().unwrap_or_else(Rational::zero)
    }
}

/// Rebuilds a metric graph from a field alone: each edge gets length equal
/// to the height change along it.
pub fn recover_graph_from_field(field: &HeightField) -> MetricGraph {
    let g = field.graph();
    let edges = g
        .edges()
        .iter()
        .map(|e| crate::graph::Edge {
            label: e.label.clone(),
            u: e.u,
            v: e.v,
            length: (field.height(e.u) - field.height(e.v)).abs(),
        })
        .collect();
    MetricGraph::from_edges(g.vertex_labels().to_vec(), edges).expect("field edges have positive height change")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{distance_matrix, GraphBuilder};
    use crate::rational::q;

    fn circle(c: &str) -> MetricGraph {
        let mut b = GraphBuilder::new();
        b.vertex("o").edge("l", "o", "o", q(c));
        b.build().unwrap()
    }

    fn theta() -> MetricGraph {
        let mut b = GraphBuilder::new();
        b.vertex("u").vertex("v");
        b.edge("a", "u", "v", q("1"))
            .edge("b", "u", "v", q("1"))
            .edge("c", "u", "v", q("2"));
        b.build().unwrap()
    }

    fn check_invariants(f: &HeightField) {
        let truth = DistanceField::new(f.graph(), &GraphPoint::Vertex(f.base().unwrap()));
        for v in 0..f.graph().vertex_count() {
            assert_eq!(f.height(v), truth.to_vertex(v));
        }
        for e in f.graph().edges() {
            assert_eq!((f.height(e.u) - f.height(e.v)).abs(), e.length);
        }
        let zeros = f.heights().iter().filter(|h| h.is_zero()).count();
        assert_eq!(zeros, 1);
    }

    #[test]
    fn circle_has_two_arcs() {
        let g = circle("3");
        let off_vertex = HeightField::distance_from(&g, &g.point_on_edge(0, q("1")).unwrap());
        check_invariants(&off_vertex);
        assert_eq!(off_vertex.max_height(), q("3/2"));
        assert_eq!(off_vertex.downforks().len(), 1);
        let f = HeightField::distance_from(&g, &GraphPoint::Vertex(0));
        check_invariants(&f);
        assert_eq!(f.graph().edge_count(), 2);
        assert_eq!(f.downforks().len(), 1);
        assert_eq!(f.height(f.downforks()[0]), &q("3/2"));
        for e in f.graph().edges() {
            assert_eq!(e.length, q("3/2"));
        }
    }

    #[test]
    fn theta_downfork_on_long_edge() {
        let g = theta();
        let f = HeightField::distance_from(&g, &GraphPoint::Vertex(0));
        check_invariants(&f);
        assert_eq!(f.downforks().len(), 1);
        assert_eq!(f.height(f.downforks()[0]), &q("1.5"));
    }

    #[test]
    fn interval_from_leaf_is_one_edge() {
        let mut b = GraphBuilder::new();
        b.vertex("a").vertex("b").edge("e", "a", "b", q("2"));
        let g = b.build().unwrap();
        let f = HeightField::distance_from(&g, &GraphPoint::Vertex(0));
        check_invariants(&f);
        assert_eq!(f.graph().edge_count(), 1);
        assert!(f.downforks().is_empty());
    }

    #[test]
    fn recovery_round_trips() {
        for (g, p) in [
            (circle("3"), GraphPoint::Vertex(0)),
            (theta(), GraphPoint::Vertex(0)),
            (theta(), theta().midpoint(2)),
        ] {
            let f = HeightField::distance_from(&g, &p);
            let r = recover_graph_from_field(&f);
            let pts: Vec<GraphPoint> = (0..r.vertex_count()).map(GraphPoint::Vertex).collect();
            assert_eq!(distance_matrix(&r, &pts), distance_matrix(f.graph(), &pts));
            assert_eq!(r.total_length(), g.total_length());
        }
    }

    #[test]
    fn explicit_heights_are_checked() {
        let mut b = GraphBuilder::new();
        b.vertex("a").vertex("b").edge("e", "a", "b", q("2"));
        let g = b.build().unwrap();
        assert!(HeightField::from_heights(g.clone(), vec![q("0"), q("1")]).is_err());
        let f = HeightField::from_heights(g, vec![q("3"), q("1")]).unwrap();
        assert_eq!(f.orientation(0), (1, 0));
        assert_eq!(f.base(), None);
    }
}
