use std::collections::HashMap;

use crate::persistence::{Diagram, DiagramPoint, HeightField, PointKind};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Cell {
    Vertex(usize),
    Edge(usize),
    ConeVertex(usize),
    ConeEdge(usize),
}

impl Cell {
    fn dim(self) -> u8 {
        match self {
            Cell::Vertex(_) => 0,
            Cell::Edge(_) | Cell::ConeVertex(_) => 1,
            Cell::ConeEdge(_) => 2,
        }
    }
}

/// Extended persistence by GF(2) column reduction.
///
/// The filtration lists the ordinary cells by ascending value, then the
/// cone over every cell (apex quotiented out) by descending value. Ties are
/// broken by (dimension, index). Pairs are read as:
/// vertex/edge → ordinary 0-dim, vertex/cone-vertex → extended 0-dim,
/// edge/cone-edge → extended 1-dim, cone-vertex/cone-edge → relative 1-dim.
pub fn extended_persistence_reduction(field: &HeightField) -> Diagram {
    let g = field.graph();
    let h = field.heights();
    let edge_max = |i: usize| {
        let e = g.edge(i);
        (&h[e.u]).max(&h[e.v]).clone()
    };
    let edge_min = |i: usize| {
        let e = g.edge(i);
        (&h[e.u]).min(&h[e.v]).clone()
    };

    let mut ordinary: Vec<(Rational, Cell)> = (0..g.vertex_count())
        .map(|v| (h[v].clone(), Cell::Vertex(v)))
        .chain((0..g.edge_count()).map(|i| (edge_max(i), Cell::Edge(i))))
        .collect();
    ordinary.sort_by(|(va, a), (vb, b)| va.cmp(vb).then(a.dim().cmp(&b.dim())).then(index(*a).cmp(&index(*b))));
    let mut cone: Vec<(Rational, Cell)> = (0..g.vertex_count())
        .map(|v| (h[v].clone(), Cell::ConeVertex(v)))
        .chain((0..g.edge_count()).map(|i| (edge_min(i), Cell::ConeEdge(i))))
        .collect();
    cone.sort_by(|(va, a), (vb, b)| vb.cmp(va).then(a.dim().cmp(&b.dim())).then(index(*a).cmp(&index(*b))));
    let order: Vec<(Rational, Cell)> = ordinary.into_iter().chain(cone).collect();
    let position: HashMap<CellKey, usize> = order.iter().enumerate().map(|(i, (_, c))| (key(*c), i)).collect();
    let pos = |c: Cell| position[&key(c)];

    let mut columns: Vec<Vec<usize>> = order
        .iter()
        .map(|(_, c)| {
            let mut col = match *c {
                Cell::Vertex(_) => vec![],
                Cell::Edge(i) => {
                    let e = g.edge(i);
                    vec![pos(Cell::Vertex(e.u)), pos(Cell::Vertex(e.v))]
                }
                Cell::ConeVertex(v) => vec![pos(Cell::Vertex(v))],
                Cell::ConeEdge(i) => {
                    let e = g.edge(i);
                    vec![
                        pos(Cell::Edge(i)),
                        pos(Cell::ConeVertex(e.u)),
                        pos(Cell::ConeVertex(e.v)),
                    ]
                }
            };
            col.sort_unstable();
            col
        })
        .collect();

    let mut pivot_of: HashMap<usize, usize> = HashMap::new();
    let mut points = Vec::new();
    for j in 0..columns.len() {
        while let Some(&low) = columns[j].last() {
            match pivot_of.get(&low) {
                Some(&k) => {
                    let other = columns[k].clone();
                    columns[j] = symmetric_difference(&columns[j], &other);
                }
                None => break,
            }
        }
        let Some(&low) = columns[j].last() else { continue };
        pivot_of.insert(low, j);
        let (birth, born) = &order[low];
        let (death, dies) = &order[j];
        let point = match (born, dies) {
            (Cell::Vertex(_), Cell::Edge(_)) => (0, PointKind::Ordinary),
            (Cell::Vertex(_), Cell::ConeVertex(_)) => (0, PointKind::ExtendedPlus),
            (Cell::Edge(_), Cell::ConeEdge(_)) => (1, PointKind::ExtendedMinus),
            (Cell::ConeVertex(_), Cell::ConeEdge(_)) => (1, PointKind::Relative),
            other => unreachable!("impossible pair {other:?}"),
        };
        let essential = matches!(point.1, PointKind::ExtendedPlus | PointKind::ExtendedMinus);
        if essential || birth != death {
            points.push(DiagramPoint::new(point.0, birth.clone(), death.clone(), point.1));
        }
    }
    Diagram::new(points)
}

type CellKey = (u8, bool, usize);

fn key(c: Cell) -> CellKey {
    match c {
        Cell::Vertex(i) => (0, false, i),
        Cell::Edge(i) => (1, false, i),
        Cell::ConeVertex(i) => (1, true, i),
        Cell::ConeEdge(i) => (2, true, i),
    }
}

fn index(c: Cell) -> usize {
    key(c).2
}

fn symmetric_difference(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}
