use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::graph::GraphError;
use crate::rational::Rational;

/// An edge record. A self-loop has `u == v`; its offsets run along the
/// stored orientation starting at `u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub label: String,
    pub u: usize,
    pub v: usize,
    pub length: Rational,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    /// The endpoint opposite `w` (for a loop, `w` itself).
    pub fn other(&self, w: usize) -> usize {
        if self.u == w {
            self.v
        } else {
            self.u
        }
    }
}

/// One end of an edge as seen from its vertex. A self-loop contributes two
/// germs at its vertex, one per end.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Germ {
    pub edge: usize,
    /// `true` for the end at offset 0 (the `u` end).
    pub at_start: bool,
}

/// A location on a metric graph, in canonical form: points at offset 0 or
/// at the full edge length are always stored as vertex references.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum GraphPoint {
    Vertex(usize),
    Interior { edge: usize, offset: Rational },
}

impl GraphPoint {
    pub fn vertex(&self) -> Option<usize> {
        match self {
            GraphPoint::Vertex(v) => Some(*v),
            GraphPoint::Interior { .. } => None,
        }
    }
}

/// A compact connected metric graph with exact rational edge lengths.
///
/// Instances are only produced through validation, so every edge length is
/// positive and the graph is connected. Parallel edges and self-loops are
/// kept as given.
#[derive(Clone, Debug)]
pub struct MetricGraph {
    vertex_labels: Vec<String>,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<Germ>>,
    vertex_index: HashMap<String, usize>,
    edge_index: HashMap<String, usize>,
}

/// What [`MetricGraph::validate`] observed about a valid graph.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub valence_two: Vec<usize>,
    pub self_loops: Vec<usize>,
    /// Groups of edge indices joining the same pair of distinct vertices.
    pub parallel_edges: Vec<Vec<usize>>,
}

/// Accumulates vertices and edges by label; `build` checks every invariant
/// and reports all violations at once.
#[derive(Clone, Debug, Default)]
pub struct GraphBuilder {
    vertices: Vec<String>,
    edges: Vec<(String, String, String, Rational)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(&mut self, label: impl Into<String>) -> &mut Self {
        self.vertices.push(label.into());
        self
    }

    pub fn edge(
        &mut self,
        label: impl Into<String>,
        u: impl Into<String>,
        v: impl Into<String>,
        length: Rational,
    ) -> &mut Self {
        self.edges.push((label.into(), u.into(), v.into(), length));
        self
    }

    pub fn build(&self) -> Result<MetricGraph, GraphError> {
        let mut problems = Vec::new();
        let mut vertex_index = HashMap::new();
        for (i, label) in self.vertices.iter().enumerate() {
            if vertex_index.insert(label.clone(), i).is_some() {
                problems.push(GraphError::DuplicateVertex(label.clone()));
            }
        }
        if self.vertices.is_empty() {
            problems.push(GraphError::Empty);
        }
        let mut edges = Vec::with_capacity(self.edges.len());
        let mut seen_edges = HashMap::new();
        for (label, u, v, length) in &self.edges {
            if seen_edges.insert(label.clone(), ()).is_some() {
                problems.push(GraphError::DuplicateEdge(label.clone()));
            }
            if !length.is_positive() {
                problems.push(GraphError::NonPositiveLength {
                    edge: label.clone(),
                    length: length.clone(),
                });
            }
            let (Some(&ui), Some(&vi)) = (vertex_index.get(u), vertex_index.get(v)) else {
                for w in [u, v] {
                    if !vertex_index.contains_key(w) {
                        problems.push(GraphError::UnknownVertex {
                            edge: label.clone(),
                            vertex: w.clone(),
                        });
                    }
                }
                continue;
            };
            edges.push(Edge {
                label: label.clone(),
                u: ui,
                v: vi,
                length: length.clone(),
            });
        }
        if problems.is_empty() {
            let graph = MetricGraph::from_parts(self.vertices.clone(), edges);
            let components = graph.component_count();
            if components > 1 {
                problems.push(GraphError::Disconnected { components });
            } else {
                return Ok(graph);
            }
        }
        if problems.len() == 1 {
            Err(problems.pop().unwrap())
        } else {
            Err(GraphError::Invalid(problems))
        }
    }
}

impl MetricGraph {
    /// Assembles a graph from already-checked parts. Callers guarantee
    /// positivity and connectivity.
    pub(crate) fn from_parts(vertex_labels: Vec<String>, edges: Vec<Edge>) -> Self {
        let mut adjacency = vec![Vec::new(); vertex_labels.len()];
        for (i, e) in edges.iter().enumerate() {
            adjacency[e.u].push(Germ {
                edge: i,
                at_start: true,
            });
            adjacency[e.v].push(Germ {
                edge: i,
                at_start: false,
            });
        }
        let vertex_index = vertex_labels.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
        let edge_index = edges.iter().enumerate().map(|(i, e)| (e.label.clone(), i)).collect();
        MetricGraph {
            vertex_labels,
            edges,
            adjacency,
            vertex_index,
            edge_index,
        }
    }

    /// Re-validates arbitrary parts (used by generators that assemble
    /// graphs programmatically).
    pub fn from_edges(vertex_labels: Vec<String>, edges: Vec<Edge>) -> Result<MetricGraph, GraphError> {
        let mut b = GraphBuilder::new();
        for l in &vertex_labels {
            b.vertex(l.clone());
        }
        for e in &edges {
            let (Some(u), Some(v)) = (vertex_labels.get(e.u), vertex_labels.get(e.v)) else {
                return Err(GraphError::UnknownVertex {
                    edge: e.label.clone(),
                    vertex: format!("#{}", e.u.max(e.v)),
                });
            };
            b.edge(e.label.clone(), u.clone(), v.clone(), e.length.clone());
        }
        b.build()
    }

    /// The graph consisting of a single point.
    pub fn point() -> MetricGraph {
        MetricGraph::from_parts(vec!["p".to_string()], Vec::new())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> &Edge {
        &self.edges[i]
    }

    pub fn vertex_label(&self, v: usize) -> &str {
        &self.vertex_labels[v]
    }

    pub fn vertex_labels(&self) -> &[String] {
        &self.vertex_labels
    }

    pub fn vertex_by_label(&self, label: &str) -> Option<usize> {
        self.vertex_index.get(label).copied()
    }

    pub fn edge_by_label(&self, label: &str) -> Option<usize> {
        self.edge_index.get(label).copied()
    }

    pub fn germs(&self, v: usize) -> &[Germ] {
        &self.adjacency[v]
    }

    pub fn valence(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    /// Valence of an arbitrary point; interior points have valence 2.
    pub fn point_valence(&self, p: &GraphPoint) -> usize {
        match p {
            GraphPoint::Vertex(v) => self.valence(*v),
            GraphPoint::Interior { .. } => 2,
        }
    }

    /// First Betti number `|E| - |V| + 1`.
    pub fn betti_one(&self) -> usize {
        self.edges.len() + 1 - self.vertex_labels.len()
    }

    pub fn total_length(&self) -> Rational {
        self.edges.iter().map(|e| &e.length).sum()
    }

    pub fn is_tree(&self) -> bool {
        self.edges.len() + 1 == self.vertex_labels.len()
    }

    /// Leaves are vertices of valence one.
    pub fn leaves(&self) -> Vec<usize> {
        (0..self.vertex_count()).filter(|&v| self.valence(v) == 1).collect()
    }

    /// Canonical point at `offset` along edge `edge` (measured from its
    /// `u` end).
    pub fn point_on_edge(&self, edge: usize, offset: Rational) -> Result<GraphPoint, GraphError> {
        let e = self
            .edges
            .get(edge)
            .ok_or_else(|| GraphError::UnknownEdge(format!("#{edge}")))?;
        if offset.is_negative() || offset > e.length {
            return Err(GraphError::OffsetOutOfRange {
                edge: e.label.clone(),
                offset,
                length: e.length.clone(),
            });
        }
        Ok(if offset.is_zero() {
            GraphPoint::Vertex(e.u)
        } else if offset == e.length {
            GraphPoint::Vertex(e.v)
        } else {
            GraphPoint::Interior { edge, offset }
        })
    }

    pub fn midpoint(&self, edge: usize) -> GraphPoint {
        let half = self.edges[edge].length.half();
        GraphPoint::Interior { edge, offset: half }
    }

    /// Parses `vertex:<id>` or `<edge id>:<offset>`.
    pub fn parse_point(&self, spec: &str) -> Result<GraphPoint, GraphError> {
        let bad = || GraphError::BadPoint(spec.to_string());
        let (head, tail) = spec.rsplit_once(':').ok_or_else(bad)?;
        if head == "vertex" {
            return self
                .vertex_by_label(tail)
                .map(GraphPoint::Vertex)
                .ok_or_else(|| GraphError::UnknownVertex {
                    edge: String::new(),
                    vertex: tail.to_string(),
                });
        }
        let edge = self
            .edge_by_label(head)
            .ok_or_else(|| GraphError::UnknownEdge(head.to_string()))?;
        let offset: Rational = tail.parse().map_err(|_| bad())?;
        self.point_on_edge(edge, offset)
    }

    /// Label in the `vertex:<id>` / `<edge id>:<offset>` syntax accepted by
    /// [`MetricGraph::parse_point`].
    pub fn point_label(&self, p: &GraphPoint) -> String {
        match p {
            GraphPoint::Vertex(v) => format!("vertex:{}", self.vertex_labels[*v]),
            GraphPoint::Interior { edge, offset } => {
                format!("{}:{}", self.edges[*edge].label, offset)
            }
        }
    }

    /// The point reached by moving `distance` from `p` along `germ`'s
    /// edge; `distance` must stay inside the edge.
    pub fn step_along(&self, germ: Germ, distance: &Rational) -> Result<GraphPoint, GraphError> {
        let e = &self.edges[germ.edge];
        let offset = if germ.at_start {
            distance.clone()
        } else {
            &e.length - distance
        };
        self.point_on_edge(germ.edge, offset)
    }

    pub(crate) fn component_count(&self) -> usize {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut components = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            components += 1;
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(w) = stack.pop() {
                for g in &self.adjacency[w] {
                    let x = self.edges[g.edge].other(w);
                    if !seen[x] {
                        seen[x] = true;
                        stack.push(x);
                    }
                }
            }
        }
        components
    }

    /// Structural report for a valid graph.
    pub fn validate(&self) -> ValidationReport {
        let valence_two = (0..self.vertex_count()).filter(|&v| self.valence(v) == 2).collect();
        let self_loops = (0..self.edge_count()).filter(|&i| self.edges[i].is_loop()).collect();
        let mut groups: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (i, e) in self.edges.iter().enumerate() {
            if !e.is_loop() {
                groups.entry((e.u.min(e.v), e.u.max(e.v))).or_default().push(i);
            }
        }
        let mut parallel_edges: Vec<Vec<usize>> = groups.into_values().filter(|g| g.len() > 1).collect();
        parallel_edges.sort();
        ValidationReport {
            vertex_count: self.vertex_count(),
            edge_count: self.edge_count(),
            valence_two,
            self_loops,
            parallel_edges,
        }
    }
}

impl fmt::Display for MetricGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.vertex_labels {
            writeln!(f, "v {l}")?;
        }
        for e in &self.edges {
            writeln!(
                f,
                "e {} {} {} {}",
                e.label, self.vertex_labels[e.u], self.vertex_labels[e.v], e.length
            )?;
        }
        Ok(())
    }
}
