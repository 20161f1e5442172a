//! Extended persistence of distance functions on metric graphs.

mod csv;
mod field;
mod reduction;
mod sweep;

pub use self::csv::{parse_diagram_csv, write_diagram_csv};
pub use field::{recover_graph_from_field, HeightField};
pub use reduction::extended_persistence_reduction;
pub use sweep::extended_persistence_sweep;

use std::fmt;
use std::hash::{Hash, Hasher};

use serde::Serialize;

use crate::graph::{GraphPoint, MetricGraph};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PersistenceError {
    #[error("invalid height field: {0}")]
    Field(String),
    #[error("diagram line {line}: {message}")]
    Csv { line: usize, message: String },
}

/// Which part of the extended filtration produced a point. Never consulted
/// by comparisons or metrics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PointKind {
    Ordinary,
    Relative,
    ExtendedPlus,
    ExtendedMinus,
}

impl PointKind {
    pub fn tag(self) -> &'static str {
        match self {
            PointKind::Ordinary => "ordinary",
            PointKind::Relative => "relative",
            PointKind::ExtendedPlus => "extended+",
            PointKind::ExtendedMinus => "extended-",
        }
    }

    pub fn from_tag(tag: &str) -> Option<PointKind> {
        Some(match tag {
            "ordinary" => PointKind::Ordinary,
            "relative" => PointKind::Relative,
            "extended+" => PointKind::ExtendedPlus,
            "extended-" => PointKind::ExtendedMinus,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagramPoint {
    pub dim: u8,
    pub birth: Rational,
    pub death: Rational,
    pub kind: PointKind,
}

impl DiagramPoint {
    pub fn new(dim: u8, birth: Rational, death: Rational, kind: PointKind) -> Self {
        DiagramPoint {
            dim,
            birth,
            death,
            kind,
        }
    }

    fn key(&self) -> (u8, &Rational, &Rational) {
        (self.dim, &self.birth, &self.death)
    }

    /// L∞ distance to the diagonal.
    pub fn persistence(&self) -> Rational {
        (&self.death - &self.birth).abs().half()
    }
}

impl PartialEq for DiagramPoint {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for DiagramPoint {}

/// A multiset of labelled points, kept sorted by (dim, birth, death).
/// Equality and hashing look at dimensions and coordinates only.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Diagram {
    points: Vec<DiagramPoint>,
}

impl Diagram {
    pub fn new(mut points: Vec<DiagramPoint>) -> Diagram {
        points.sort_by(|a, b| a.key().cmp(&b.key()).then(a.kind.cmp(&b.kind)));
        Diagram { points }
    }

    pub fn points(&self) -> &[DiagramPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn in_dim(&self, dim: u8) -> impl Iterator<Item = &DiagramPoint> {
        self.points.iter().filter(move |p| p.dim == dim)
    }
}

impl PartialEq for Diagram {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points
    }
}

impl Eq for Diagram {}

impl Hash for Diagram {
    fn hash<H: Hasher>(&self, state: &mut H) {
        for p in &self.points {
            p.key().hash(state);
        }
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .points
            .iter()
            .map(|p| format!("{}:({}, {})", p.dim, p.birth, p.death))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Ψ_G(p): the diagram of the distance function from `p`.
pub fn diagram_at(graph: &MetricGraph, p: &GraphPoint) -> Diagram {
    extended_persistence_sweep(&HeightField::distance_from(graph, p))
}

/// Number of 1-dimensional points with death zero, plus one.
pub fn valence_from_diagram(d: &Diagram) -> usize {
    d.in_dim(1).filter(|p| p.death.is_zero()).count() + 1
}

/// Smallest strictly positive death among 1-dimensional points.
pub fn first_nonzero_death(d: &Diagram) -> Option<Rational> {
    d.in_dim(1).map(|p| &p.death).filter(|x| x.is_positive()).min().cloned()
}
