use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use serde::Serialize;

use crate::graph::MetricGraph;
use crate::rational::Rational;

/// A cycle whose points other than `base` all have valence two.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelfLoop {
    pub base: usize,
    /// Edge indices in traversal order starting from `base`.
    pub edges: Vec<usize>,
    pub circumference: Rational,
}

/// Shortest `u`-`v` distance avoiding edge `skip`.
fn distance_avoiding(graph: &MetricGraph, u: usize, v: usize, skip: usize) -> Option<Rational> {
    let mut dist: Vec<Option<Rational>> = vec![None; graph.vertex_count()];
    let mut heap = BinaryHeap::new();
    dist[u] = Some(Rational::zero());
    heap.push(Reverse((Rational::zero(), u)));
    while let Some(Reverse((d, w))) = heap.pop() {
        if w == v {
            return Some(d);
        }
        if dist[w].as_ref().is_some_and(|cur| *cur < d) {
            continue;
        }
        for g in graph.germs(w) {
            let e = graph.edge(g.edge);
            if g.edge == skip || e.is_loop() {
                continue;
            }
            let x = e.other(w);
            let next = &d + &e.length;
            if dist[x].as_ref().is_none_or(|cur| next < *cur) {
                dist[x] = Some(next.clone());
                heap.push(Reverse((next, x)));
            }
        }
    }
    None
}

/// Length of the shortest closed curve, or `None` for a tree.
pub fn systole(graph: &MetricGraph) -> Option<Rational> {
    let mut best: Option<Rational> = None;
    for (i, e) in graph.edges().iter().enumerate() {
        let cycle = if e.is_loop() {
            Some(e.length.clone())
        } else {
            distance_avoiding(graph, e.u, e.v, i).map(|d| &d + &e.length)
        };
        if let Some(c) = cycle {
            if best.as_ref().is_none_or(|b| c < *b) {
                best = Some(c);
            }
        }
    }
    best
}

/// Half the systole; `None` stands for an infinite radius (trees).
pub fn injectivity_radius(graph: &MetricGraph) -> Option<Rational> {
    systole(graph).map(|s| s.half())
}

/// True iff the graph is a single cycle with every vertex of valence two.
pub fn is_circle(graph: &MetricGraph) -> bool {
    graph.edge_count() == graph.vertex_count() && (0..graph.vertex_count()).all(|v| graph.valence(v) == 2)
}

/// All topological self-loops. A circle is reported as a single loop based
/// at vertex 0.
pub fn topological_self_loops(graph: &MetricGraph) -> Vec<SelfLoop> {
    if graph.edge_count() == 0 {
        return Vec::new();
    }
    if is_circle(graph) {
        let (edges, _) = walk_chain(graph, 0, graph.germs(0)[0].edge);
        return vec![SelfLoop {
            base: 0,
            circumference: edges.iter().map(|&i| &graph.edge(i).length).sum(),
            edges,
        }];
    }
    let mut found = Vec::new();
    let mut seen: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    for base in 0..graph.vertex_count() {
        if graph.valence(base) == 2 {
            continue;
        }
        for g in graph.germs(base) {
            let (edges, end) = walk_chain(graph, base, g.edge);
            if end != base {
                continue;
            }
            let key: BTreeSet<usize> = edges.iter().copied().collect();
            if seen.insert(key) {
                found.push(SelfLoop {
                    base,
                    circumference: edges.iter().map(|&i| &graph.edge(i).length).sum(),
                    edges,
                });
            }
        }
    }
    found
}

/// Follows edges from `start` through valence-2 vertices until reaching a
/// vertex of other valence or returning to `start`.
fn walk_chain(graph: &MetricGraph, start: usize, first_edge: usize) -> (Vec<usize>, usize) {
    let mut edges = vec![first_edge];
    let mut at = graph.edge(first_edge).other(start);
    let mut via = first_edge;
    while at != start && graph.valence(at) == 2 {
        let next = graph
            .germs(at)
            .iter()
            .map(|g| g.edge)
            .find(|&e| e != via)
            .expect("valence two");
        edges.push(next);
        at = graph.edge(next).other(at);
        via = next;
    }
    (edges, at)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;
    use crate::rational::q;

    fn build(vertices: &[&str], edges: &[(&str, &str, &str, &str)]) -> MetricGraph {
        let mut b = GraphBuilder::new();
        for v in vertices {
            b.vertex(*v);
        }
        for (l, u, v, len) in edges {
            b.edge(*l, *u, *v, q(len));
        }
        b.build().unwrap()
    }

    #[test]
    fn circle_radius() {
        let g = build(&["o"], &[("l", "o", "o", "5")]);
        assert_eq!(injectivity_radius(&g), Some(q("5/2")));
        assert!(is_circle(&g));
    }

    #[test]
    fn theta_radius() {
        let g = build(
            &["u", "v"],
            &[("a", "u", "v", "1"), ("b", "u", "v", "1"), ("c", "u", "v", "2")],
        );
        assert_eq!(injectivity_radius(&g), Some(q("1")));
        assert!(!is_circle(&g));
        assert!(topological_self_loops(&g).is_empty());
    }

    #[test]
    fn trees_have_infinite_radius() {
        let g = build(&["a", "b", "c"], &[("x", "a", "b", "1"), ("y", "b", "c", "3")]);
        assert_eq!(injectivity_radius(&g), None);
        assert!(!is_circle(&g));
    }

    #[test]
    fn single_loop_edge() {
        let g = build(&["u", "w"], &[("bar", "u", "w", "1"), ("l", "u", "u", "2")]);
        let loops = topological_self_loops(&g);
        assert_eq!(loops.len(), 1);
        assert_eq!(loops[0].base, 0);
        assert_eq!(loops[0].circumference, q("2"));
    }

    #[test]
    fn subdivided_loop_is_found_once() {
        let g = build(
            &["u", "w", "m1", "m2"],
            &[
                ("bar", "u", "w", "1"),
                ("a", "u", "m1", "1"),
                ("b", "m1", "m2", "1/2"),
                ("c", "m2", "u", "1"),
            ],
        );
        let loops = topological_self_loops(&g);
        assert_eq!(loops.len(), 1);
        assert_eq!(loops[0].circumference, q("5/2"));
        assert_eq!(loops[0].edges.len(), 3);
    }

    #[test]
    fn subdivided_circle_is_one_loop() {
        let g = build(&["a", "b"], &[("x", "a", "b", "1"), ("y", "b", "a", "2")]);
        assert!(is_circle(&g));
        let loops = topological_self_loops(&g);
        assert_eq!(loops.len(), 1);
        assert_eq!(loops[0].circumference, q("3"));
        assert_eq!(systole(&g), Some(q("3")));
    }
}
