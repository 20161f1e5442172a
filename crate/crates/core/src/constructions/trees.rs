use itertools::Itertools;
use serde::Serialize;

use crate::constructions::ConstructionError;
use crate::graph::{DistanceField, GraphPoint, MetricGraph};
use crate::par;
use crate::rational::Rational;

/// Closed ball `{x : d(x, center) ≤ radius}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Ball {
    pub center: GraphPoint,
    pub radius: Rational,
}

impl Ball {
    pub fn new(center: GraphPoint, radius: Rational) -> Self {
        Ball { center, radius }
    }

    pub fn contains(&self, graph: &MetricGraph, x: &GraphPoint) -> bool {
        graph.distance(&self.center, x) <= self.radius
    }
}

/// A point `x` with `d(a, x) = t` and `d(x, b) = d(a, b) − t`; on a tree
/// this is the unique point of the geodesic from `a` to `b` at distance
/// `t` from `a`. Requires `0 ≤ t ≤ d(a, b)`.
pub fn geodesic_point(graph: &MetricGraph, a: &GraphPoint, b: &GraphPoint, t: &Rational) -> GraphPoint {
    let fa = DistanceField::new(graph, a);
    let fb = DistanceField::new(graph, b);
    let total = fa.to(graph, b);
    assert!(!t.is_negative() && *t <= total, "t = {t} outside [0, {total}]");
    if t.is_zero() {
        return a.clone();
    }
    if *t == total {
        return b.clone();
    }
    let rest = &total - t;
    for (i, e) in graph.edges().iter().enumerate() {
        let mut offsets = vec![t - fa.to_vertex(e.u), &e.length - &(t - fa.to_vertex(e.v))];
        if let GraphPoint::Interior { edge, offset } = a {
            if *edge == i {
                offsets.push(offset + t);
                offsets.push(offset - t);
            }
        }
        for s in offsets {
            if s.is_negative() || s > e.length {
                continue;
            }
            let x = graph.point_on_edge(i, s).expect("offset checked");
            if fa.to(graph, &x) == *t && fb.to(graph, &x) == rest {
                return x;
            }
        }
    }
    unreachable!("a geodesic from a to b passes every intermediate distance")
}

/// The median of three points of a tree: the common point of the three
/// geodesics between them.
pub fn tripod_center(graph: &MetricGraph, a: &GraphPoint, b: &GraphPoint, c: &GraphPoint) -> GraphPoint {
    let ab = graph.distance(a, b);
    let ac = graph.distance(a, c);
    let bc = graph.distance(b, c);
    let t = (&(&ab + &ac) - &bc).half();
    geodesic_point(graph, a, b, &t)
}

/// Exact minimum over all points `x` of `max_i d(x, c_i) − r_i`, with a
/// point attaining it. Valid on any graph: along an edge each distance
/// function is a minimum of lines of slope ±1, so the minimum of the upper
/// envelope sits at an edge end, a kink, or a crossing of two such lines.
pub fn minimax_point(graph: &MetricGraph, balls: &[Ball]) -> Option<(Rational, GraphPoint)> {
    if balls.is_empty() {
        return None;
    }
    let fields: Vec<DistanceField> = balls.iter().map(|b| DistanceField::new(graph, &b.center)).collect();
    let value = |x: &GraphPoint| {
        fields
            .iter()
            .zip(balls)
            .map(|(f, b)| &f.to(graph, x) - &b.radius)
            .max()
            .expect("balls nonempty")
    };
    let mut best: Option<(Rational, GraphPoint)> = None;
    let mut consider = |x: GraphPoint| {
        let v = value(&x);
        if best.as_ref().is_none_or(|(b, _)| v < *b) {
            best = Some((v, x));
        }
    };
    for v in 0..graph.vertex_count() {
        consider(GraphPoint::Vertex(v));
    }
    for (i, e) in graph.edges().iter().enumerate() {
        let mut rising = Vec::new();
        let mut falling = Vec::new();
        let mut kinks = Vec::new();
        for (f, b) in fields.iter().zip(balls) {
            rising.push(f.to_vertex(e.u) - &b.radius);
            falling.push(&(f.to_vertex(e.v) + &e.length) - &b.radius);
            if let GraphPoint::Interior { edge, offset } = &b.center {
                if *edge == i {
                    rising.push(-(offset + &b.radius));
                    falling.push(offset - &b.radius);
                    kinks.push(offset.clone());
                }
            }
        }
        let crossings = rising.iter().cartesian_product(&falling).map(|(a, b)| (b - a).half());
        for s in kinks.into_iter().chain(crossings) {
            if s.is_positive() && s < e.length {
                consider(GraphPoint::Interior { edge: i, offset: s });
            }
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HellyReport {
    /// Every two balls meet.
    pub pairwise: bool,
    /// A point found in all balls by iterated projection.
    pub witness: Option<GraphPoint>,
    /// Pairwise intersection implied common intersection (vacuous when
    /// some pair is disjoint).
    pub holds: bool,
}

fn require_tree(graph: &MetricGraph) -> Result<(), ConstructionError> {
    if graph.is_tree() {
        Ok(())
    } else {
        Err(ConstructionError::NotATree)
    }
}

/// Helly property for balls in a tree.
///
/// When every pair of balls meets, a common point is built by starting at
/// the first center and projecting onto each further ball in turn. The
/// projection of `x` onto a ball `B` is the tripod center of `x`, the
/// center of `B`, and any point of `B`, so it stays inside every earlier
/// ball that meets `B`.
pub fn tree_helly_check(tree: &MetricGraph, balls: &[Ball]) -> Result<HellyReport, ConstructionError> {
    require_tree(tree)?;
    let pairwise = balls
        .iter()
        .tuple_combinations()
        .all(|(a, b)| tree.distance(&a.center, &b.center) <= &a.radius + &b.radius);
    if !pairwise || balls.is_empty() {
        return Ok(HellyReport {
            pairwise,
            witness: None,
            holds: true,
        });
    }
    let mut x = balls[0].center.clone();
    for b in &balls[1..] {
        let d = tree.distance(&x, &b.center);
        if d > b.radius {
            x = geodesic_point(tree, &x, &b.center, &(&d - &b.radius));
        }
    }
    let holds = balls.iter().all(|b| b.contains(tree, &x));
    Ok(HellyReport {
        pairwise,
        witness: Some(x),
        holds,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CechRipsViolation {
    pub scale: Rational,
    pub subset: Vec<usize>,
    pub cech: bool,
    pub rips: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CechRipsReport {
    pub checked: usize,
    pub violations: Vec<CechRipsViolation>,
}

impl CechRipsReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Largest subset size examined by the Čech/Rips comparison.
pub const CECH_RIPS_MAX_SUBSET: usize = 4;

/// For every scale `t` and every subset of at most four sample points:
/// the balls of radius `t` share a point (Čech) iff all pairwise distances
/// are at most `2t` (Rips). Common points are found with
/// [`tree_helly_check`].
pub fn rips_cech_tree_check(
    tree: &MetricGraph,
    points: &[GraphPoint],
    scales: &[Rational],
) -> Result<CechRipsReport, ConstructionError> {
    require_tree(tree)?;
    Ok(compare_cech_rips(tree, points, scales, |balls| {
        tree_helly_check(tree, balls)
            .map(|r| r.witness.is_some() && r.holds)
            .unwrap_or(false)
    }))
}

/// The same comparison on an arbitrary graph, deciding the Čech condition
/// with the exact [`minimax_point`] search. On graphs with cycles
/// violations are expected.
pub fn rips_cech_graph_check(graph: &MetricGraph, points: &[GraphPoint], scales: &[Rational]) -> CechRipsReport {
    compare_cech_rips(graph, points, scales, |balls| {
        minimax_point(graph, balls).is_some_and(|(v, _)| !v.is_positive())
    })
}

fn compare_cech_rips(
    graph: &MetricGraph,
    points: &[GraphPoint],
    scales: &[Rational],
    cech: impl Fn(&[Ball]) -> bool + Sync,
) -> CechRipsReport {
    let n = points.len();
    let dist: Vec<Vec<Rational>> = par::map(points, |p| {
        let f = DistanceField::new(graph, p);
        points.iter().map(|x| f.to(graph, x)).collect()
    });
    let subsets: Vec<Vec<usize>> = (2..=CECH_RIPS_MAX_SUBSET.min(n))
        .flat_map(|k| (0..n).combinations(k))
        .collect();
    let jobs: Vec<(&Rational, &Vec<usize>)> = scales.iter().cartesian_product(&subsets).collect();
    let outcomes = par::map(&jobs, |(t, subset)| {
        let twice = *t + *t;
        let rips = subset.iter().tuple_combinations().all(|(&i, &j)| dist[i][j] <= twice);
        let balls: Vec<Ball> = subset
            .iter()
            .map(|&i| Ball::new(points[i].clone(), (*t).clone()))
            .collect();
        let cech = cech(&balls);
        (cech != rips).then(|| CechRipsViolation {
            scale: (*t).clone(),
            subset: (*subset).clone(),
            cech,
            rips,
        })
    });
    CechRipsReport {
        checked: jobs.len(),
        violations: outcomes.into_iter().flatten().collect(),
    }
}
