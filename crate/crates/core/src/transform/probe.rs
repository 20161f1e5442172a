use serde::Serialize;

use crate::graph::{is_circle, Germ, GraphPoint, MetricGraph};
use crate::metric::bottleneck;
use crate::persistence::diagram_at;
use crate::rational::Rational;
use crate::transform::TransformError;

/// Number of times the probe radius is halved before giving up.
pub const PROBE_HALVINGS: u32 = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeRow {
    pub radius: Rational,
    pub q: String,
    pub distance: Rational,
    pub bottleneck: Rational,
    pub equal: bool,
}

/// Outcome of [`local_isometry_probe`]: the first radius at which every
/// direction satisfied `d_B(Ψ(p), Ψ(q)) = d_G(p, q)`, and every comparison
/// made on the way.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsometryProbe {
    pub point: String,
    pub radius: Option<Rational>,
    pub rows: Vec<ProbeRow>,
}

impl IsometryProbe {
    pub fn succeeded(&self) -> bool {
        self.radius.is_some()
    }
}

enum Direction {
    Germ(Germ),
    Along {
        edge: usize,
        offset: Rational,
        forward: bool,
    },
}

impl Direction {
    fn at(&self, graph: &MetricGraph, r: &Rational) -> GraphPoint {
        match self {
            Direction::Germ(g) => graph.step_along(*g, r),
            Direction::Along {
                edge,
                offset,
                forward: true,
            } => graph.point_on_edge(*edge, offset + r),
            Direction::Along {
                edge,
                offset,
                forward: false,
            } => graph.point_on_edge(*edge, offset - r),
        }
        .expect("probe radius stays inside the edge")
    }
}

/// The directions leaving `p` and the distance that can be travelled along
/// all of them without meeting a vertex or a loop's far half.
fn directions(graph: &MetricGraph, p: &GraphPoint) -> (Vec<Direction>, Option<Rational>) {
    match p {
        GraphPoint::Vertex(v) => {
            let germs = graph.germs(*v);
            let reach = germs
                .iter()
                .map(|g| {
                    let e = graph.edge(g.edge);
                    if e.is_loop() {
                        e.length.half()
                    } else {
                        e.length.clone()
                    }
                })
                .min();
            (germs.iter().copied().map(Direction::Germ).collect(), reach)
        }
        GraphPoint::Interior { edge, offset } => {
            let len = &graph.edge(*edge).length;
            let reach = offset.clone().min(len - offset);
            let along = |forward| Direction::Along {
                edge: *edge,
                offset: offset.clone(),
                forward,
            };
            (vec![along(false), along(true)], Some(reach))
        }
    }
}

/// Searches for a radius at which Ψ is an isometry on the star of `p`:
/// starting from half the distance to the nearest vertex (or loop
/// midpoint), the radius is halved up to [`PROBE_HALVINGS`] times.
pub fn local_isometry_probe(graph: &MetricGraph, p: &GraphPoint) -> Result<IsometryProbe, TransformError> {
    if is_circle(graph) {
        return Err(TransformError::CircleInput);
    }
    let point = graph.point_label(p);
    let (dirs, reach) = directions(graph, p);
    let Some(reach) = reach else {
        return Ok(IsometryProbe {
            point,
            radius: Some(Rational::zero()),
            rows: Vec::new(),
        });
    };
    let base = diagram_at(graph, p);
    let mut rows = Vec::new();
    let mut r = reach.half();
    for _ in 0..=PROBE_HALVINGS {
        let mut all = true;
        for dir in &dirs {
            let q = dir.at(graph, &r);
            let distance = graph.distance(p, &q);
            let b = bottleneck(&base, &diagram_at(graph, &q));
            let equal = b == distance;
            all &= equal;
            rows.push(ProbeRow {
                radius: r.clone(),
                q: graph.point_label(&q),
                distance,
                bottleneck: b,
                equal,
            });
        }
        if all {
            return Ok(IsometryProbe {
                point,
                radius: Some(r),
                rows,
            });
        }
        r = r.half();
    }
    Ok(IsometryProbe {
        point,
        radius: None,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;
    use crate::rational::q;

    #[test]
    fn interval_pair() {
        let mut b = GraphBuilder::new();
        b.vertex("a").vertex("b").edge("e", "a", "b", q("2"));
        let g = b.build().unwrap();
        let p = g.point_on_edge(0, q("0.5")).unwrap();
        let x = g.point_on_edge(0, q("0.6")).unwrap();
        assert_eq!(bottleneck(&diagram_at(&g, &p), &diagram_at(&g, &x)), q("0.1"));
        assert_eq!(bottleneck(&diagram_at(&g, &p), &diagram_at(&g, &p)), q("0"));
        let probe = local_isometry_probe(&g, &p).unwrap();
        assert_eq!(probe.radius, Some(q("1/4")));
        assert_eq!(probe.rows.len(), 2);
    }

    #[test]
    fn path_leaf_first_radius() {
        let mut b = GraphBuilder::new();
        b.vertex("v1").vertex("v2").vertex("v3");
        b.edge("a", "v1", "v2", q("1")).edge("b", "v2", "v3", q("1"));
        let g = b.build().unwrap();
        let probe = local_isometry_probe(&g, &GraphPoint::Vertex(0)).unwrap();
        assert_eq!(probe.radius, Some(q("1/2")));
        assert_eq!(probe.rows.len(), 1);
    }

    #[test]
    fn theta_vertex_and_loop_points() {
        let mut b = GraphBuilder::new();
        b.vertex("u").vertex("v");
        b.edge("a", "u", "v", q("1"))
            .edge("b", "u", "v", q("1"))
            .edge("c", "u", "v", q("2"));
        let g = b.build().unwrap();
        assert!(local_isometry_probe(&g, &GraphPoint::Vertex(0)).unwrap().succeeded());
        let mut d = GraphBuilder::new();
        d.vertex("p").vertex("x");
        d.edge("l1", "p", "p", q("2"))
            .edge("bar", "p", "x", q("1"))
            .edge("l2", "x", "x", q("3"));
        let g = d.build().unwrap();
        for p in [GraphPoint::Vertex(0), g.midpoint(0), g.midpoint(1), g.midpoint(2)] {
            assert!(local_isometry_probe(&g, &p).unwrap().succeeded(), "{p:?}");
        }
    }

    #[test]
    fn circle_is_rejected() {
        let mut b = GraphBuilder::new();
        b.vertex("o").edge("l", "o", "o", q("2"));
        let g = b.build().unwrap();
        assert!(matches!(
            local_isometry_probe(&g, &GraphPoint::Vertex(0)),
            Err(TransformError::CircleInput)
        ));
    }
}
