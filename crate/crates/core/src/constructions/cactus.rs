use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::constructions::ConstructionError;
use crate::graph::{
    correspondence_cost, injectivity_radius, Correspondence, DistanceField, Edge, GraphPoint, MetricGraph, Subdivision,
};
use crate::rational::Rational;
use crate::transform::sample_basepoints;

/// A base graph, a finite point set `S` containing every vertex, and a
/// thorn length for each point of `S`.
#[derive(Clone, Debug)]
pub struct CactusSpec {
    pub base: MetricGraph,
    pub points: Vec<GraphPoint>,
    /// Thorn length per entry of `points`.
    pub alpha: Vec<Rational>,
    /// Require thorn lengths to be nonzero and pairwise distinct away from
    /// the leaves.
    pub injective: bool,
}

impl CactusSpec {
    pub fn validate(&self) -> Result<(), ConstructionError> {
        let bad = |m: String| Err(ConstructionError::Spec(m));
        if self.points.len() != self.alpha.len() {
            return bad(format!(
                "{} points but {} thorn lengths",
                self.points.len(),
                self.alpha.len()
            ));
        }
        let set: BTreeSet<&GraphPoint> = self.points.iter().collect();
        if set.len() != self.points.len() {
            return bad("repeated point in S".into());
        }
        for v in 0..self.base.vertex_count() {
            if !set.contains(&GraphPoint::Vertex(v)) {
                return bad(format!("vertex {} missing from S", self.base.vertex_label(v)));
            }
        }
        let mut seen = BTreeSet::new();
        for (p, a) in self.points.iter().zip(&self.alpha) {
            let label = self.base.point_label(p);
            if a.is_negative() {
                return bad(format!("negative thorn length at {label}"));
            }
            if self.is_leaf(p) {
                if !a.is_zero() {
                    return bad(format!("leaf {label} has a thorn"));
                }
            } else if self.injective && (a.is_zero() || !seen.insert(a.clone())) {
                return bad(format!("thorn length {a} at {label} is zero or repeated"));
            }
        }
        Ok(())
    }

    fn is_leaf(&self, p: &GraphPoint) -> bool {
        self.base.point_valence(p) == 1
    }
}

/// A built cactus: the graph plus where the points of `S` and the thorns
/// ended up.
#[derive(Clone, Debug)]
pub struct Cactus {
    pub graph: MetricGraph,
    /// Position of each point of `S` in `graph`.
    pub bases: Vec<GraphPoint>,
    /// Thorn edge per point of `S`, absent for zero length.
    pub thorns: Vec<Option<usize>>,
    subdivision: Subdivision,
}

impl Cactus {
    /// Position of a base graph point in the cactus.
    pub fn map_point(&self, p: &GraphPoint) -> GraphPoint {
        self.subdivision.map_point(p)
    }
}

/// Attaches an interval of length `α(p)` at each `p ∈ S`. The thorn at the
/// `i`-th point is edge `thorn{i}` ending at vertex `tip{i}`.
pub fn cactus(spec: &CactusSpec) -> Result<Cactus, ConstructionError> {
    spec.validate()?;
    let subdivision = spec.base.subdivide_at(&spec.points);
    let sub = &subdivision.graph;
    let mut labels = sub.vertex_labels().to_vec();
    let mut edges = sub.edges().to_vec();
    let mut bases = Vec::with_capacity(spec.points.len());
    let mut thorns = Vec::with_capacity(spec.points.len());
    for (i, (p, a)) in spec.points.iter().zip(&spec.alpha).enumerate() {
        let root = subdivision.vertex_for(p).expect("every point of S became a vertex");
        bases.push(GraphPoint::Vertex(root));
        if a.is_zero() {
            thorns.push(None);
            continue;
        }
        let tip = format!("tip{i}");
        if sub.vertex_by_label(&tip).is_some() {
            return Err(ConstructionError::Spec(format!(
                "base already has a vertex named {tip}"
            )));
        }
        labels.push(tip);
        thorns.push(Some(edges.len()));
        edges.push(Edge {
            label: format!("thorn{i}"),
            u: root,
            v: labels.len() - 1,
            length: a.clone(),
        });
    }
    let graph = MetricGraph::from_edges(labels, edges)?;
    Ok(Cactus {
        graph,
        bases,
        thorns,
        subdivision,
    })
}

/// Cost of the correspondence sending each thorn point to its base and
/// every other point to itself, evaluated on a `delta`-net of both graphs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CactusCertificate {
    pub epsilon: Rational,
    pub pairs: usize,
    pub cost: Rational,
    /// `cost ≤ 2ε`.
    pub holds: bool,
}

pub fn cactus_certificate(
    spec: &CactusSpec,
    built: &Cactus,
    delta: &Rational,
) -> Result<CactusCertificate, ConstructionError> {
    let epsilon = spec.alpha.iter().max().cloned().unwrap_or_else(Rational::zero);
    let mut pairs: Vec<(GraphPoint, GraphPoint)> = sample_basepoints(&spec.base, delta)?
        .into_iter()
        .chain(spec.points.iter().cloned())
        .map(|x| (built.map_point(&x), x))
        .collect();
    for ((p, thorn), a) in spec.points.iter().zip(&built.thorns).zip(&spec.alpha) {
        let Some(edge) = thorn else { continue };
        let k = (a / delta).floor_integer() + 1;
        let k = Rational::from_bigint(k);
        let mut j = Rational::one();
        while j <= k {
            let offset = a * &(&j / &k);
            pairs.push((built.graph.point_on_edge(*edge, offset)?, p.clone()));
            j += Rational::one();
        }
    }
    let cost = correspondence_cost(&built.graph, &spec.base, &Correspondence::new(pairs.clone()))?;
    let holds = cost <= &epsilon + &epsilon;
    Ok(CactusCertificate {
        epsilon,
        pairs: pairs.len(),
        cost,
        holds,
    })
}

/// The quantities entering the injectivity hypotheses for a cactus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CactusHypotheses {
    /// Largest gap between consecutive points of `S` along an edge.
    pub omega: Rational,
    /// Smallest distance between two points of `S`.
    pub delta_s: Rational,
    /// Smallest distance between two vertices; absent for one vertex.
    pub delta_v: Option<Rational>,
    /// Absent for trees.
    pub injectivity_radius: Option<Rational>,
    pub alpha_max: Rational,
    pub alpha_below_half_delta_s: bool,
    pub two_omega_plus_alpha_below_inj: bool,
    pub omega_below_delta_v: bool,
    pub alpha_valid: bool,
}

impl CactusHypotheses {
    pub fn hold(&self) -> bool {
        self.alpha_below_half_delta_s
            && self.two_omega_plus_alpha_below_inj
            && self.omega_below_delta_v
            && self.alpha_valid
    }
}

fn min_pairwise(graph: &MetricGraph, points: &[GraphPoint]) -> Option<Rational> {
    let rows = crate::par::map_range(points.len(), |i| {
        let f = DistanceField::new(graph, &points[i]);
        points[i + 1..].iter().map(|x| f.to(graph, x)).min()
    });
    rows.into_iter().flatten().min()
}

fn omega(base: &MetricGraph, points: &[GraphPoint]) -> Rational {
    let mut cuts: Vec<BTreeSet<Rational>> = base
        .edges()
        .iter()
        .map(|e| BTreeSet::from([Rational::zero(), e.length.clone()]))
        .collect();
    for p in points {
        if let GraphPoint::Interior { edge, offset } = p {
            cuts[*edge].insert(offset.clone());
        }
    }
    cuts.iter()
        .flat_map(|c| c.iter().zip(c.iter().skip(1)).map(|(a, b)| b - a))
        .max()
        .unwrap_or_else(Rational::zero)
}

pub fn cactus_hypotheses(spec: &CactusSpec) -> CactusHypotheses {
    let base = &spec.base;
    let omega = omega(base, &spec.points);
    let delta_s = min_pairwise(base, &spec.points).unwrap_or_else(Rational::zero);
    let vertices: Vec<GraphPoint> = (0..base.vertex_count()).map(GraphPoint::Vertex).collect();
    let delta_v = min_pairwise(base, &vertices);
    let inj = injectivity_radius(base);
    let alpha_max = spec.alpha.iter().max().cloned().unwrap_or_else(Rational::zero);
    let two_omega_alpha = &(&omega + &omega) + &alpha_max;
    CactusHypotheses {
        alpha_below_half_delta_s: alpha_max.is_positive() && alpha_max < delta_s.half(),
        two_omega_plus_alpha_below_inj: inj.as_ref().is_none_or(|r| two_omega_alpha < *r),
        omega_below_delta_v: delta_v.as_ref().is_none_or(|d| omega < *d),
        alpha_valid: spec.injective && spec.validate().is_ok(),
        omega,
        delta_s,
        delta_v,
        injectivity_radius: inj,
        alpha_max,
    }
}

/// Thorn data meeting every injectivity hypothesis: edges are cut evenly with
/// gaps below a third of `min(δ(V), inj(G))`, and the non-leaf points get
/// distinct thorn lengths below the remaining room, shuffled by `seed`.
pub fn compliant_cactus_spec(base: &MetricGraph, seed: u64) -> Result<CactusSpec, ConstructionError> {
    if base.edge_count() == 0 {
        return Err(ConstructionError::InvalidParameter("base graph has no edges".into()));
    }
    let vertices: Vec<GraphPoint> = (0..base.vertex_count()).map(GraphPoint::Vertex).collect();
    let inj = injectivity_radius(base);
    let target = [min_pairwise(base, &vertices), inj.clone()]
        .into_iter()
        .flatten()
        .min()
        .expect("a graph with edges has two vertices or a cycle")
        * Rational::new(1, 3);
    let mut points = vertices;
    for (i, e) in base.edges().iter().enumerate() {
        let k = (&e.length / &target).floor_integer() + 1;
        let k = Rational::from_bigint(k);
        let mut j = Rational::one();
        while j < k {
            points.push(base.point_on_edge(i, &e.length * &(&j / &k))?);
            j += Rational::one();
        }
    }
    let omega = omega(base, &points);
    let delta_s = min_pairwise(base, &points).expect("at least two points");
    let room = match inj {
        Some(r) => delta_s.half().min(&r - &(&omega + &omega)),
        None => delta_s.half(),
    };
    let interior: Vec<usize> = (0..points.len())
        .filter(|&i| base.point_valence(&points[i]) != 1)
        .collect();
    let n = interior.len() as i64;
    let mut steps: Vec<i64> = (1..=n).collect();
    steps.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut alpha = vec![Rational::zero(); points.len()];
    for (&i, s) in interior.iter().zip(steps) {
        alpha[i] = &room * &Rational::new(s, n + 1);
    }
    let spec = CactusSpec {
        base: base.clone(),
        points,
        alpha,
        injective: true,
    };
    spec.validate()?;
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::standard;
    use crate::rational::q;
    use crate::transform::{barcode_transform, sampled_injectivity_check};

    #[test]
    fn single_thorn_on_a_path() {
        let base = standard("path(1,1)");
        let spec = CactusSpec {
            base: base.clone(),
            points: (0..3).map(GraphPoint::Vertex).collect(),
            alpha: vec![q("0"), q("0.3"), q("0")],
            injective: false,
        };
        let c = cactus(&spec).unwrap();
        assert_eq!(c.graph.edge_count(), 3);
        assert_eq!(c.graph.total_length(), q("2.3"));
        assert_eq!(c.thorns, vec![None, Some(2), None]);
        let cert = cactus_certificate(&spec, &c, &q("1/4")).unwrap();
        assert!(cert.holds, "{cert:?}");
        assert_eq!(cert.cost, q("0.3"));
    }

    #[test]
    fn zero_thorns_leave_the_graph_unchanged() {
        let base = standard("theta(1,1,2)");
        let spec = CactusSpec {
            base: base.clone(),
            points: vec![GraphPoint::Vertex(0), GraphPoint::Vertex(1), base.midpoint(2)],
            alpha: vec![q("0"); 3],
            injective: false,
        };
        let c = cactus(&spec).unwrap();
        assert_eq!(c.graph.total_length(), base.total_length());
        assert_eq!(cactus_certificate(&spec, &c, &q("1/2")).unwrap().cost, q("0"));
    }

    #[test]
    fn violations_are_rejected() {
        let base = standard("path(1,1)");
        let mut spec = CactusSpec {
            base,
            points: (0..3).map(GraphPoint::Vertex).collect(),
            alpha: vec![q("1/10"), q("1/5"), q("0")],
            injective: false,
        };
        assert!(matches!(cactus(&spec), Err(ConstructionError::Spec(_))));
        spec.alpha[0] = q("0");
        spec.points.pop();
        spec.alpha.pop();
        assert!(matches!(cactus(&spec), Err(ConstructionError::Spec(_))));
    }

    #[test]
    fn repeated_lengths_break_the_injective_flag() {
        let base = standard("theta(1,1,2)");
        let spec = CactusSpec {
            base,
            points: vec![GraphPoint::Vertex(0), GraphPoint::Vertex(1)],
            alpha: vec![q("1/10"), q("1/10")],
            injective: true,
        };
        assert!(spec.validate().is_err());
    }

    #[test]
    fn compliant_theta_is_injective() {
        let base = standard("theta(1,1,2)");
        let spec = compliant_cactus_spec(&base, 3).unwrap();
        let h = cactus_hypotheses(&spec);
        assert!(h.hold(), "{h:?}");
        let c = cactus(&spec).unwrap();
        let delta = h.delta_s * Rational::new(1, 4);
        let s = barcode_transform(&c.graph, &delta).unwrap();
        let r = sampled_injectivity_check(&s, &q("0"));
        assert!(
            r.injective_on_sample(),
            "{:?}",
            &r.collisions[..r.collisions.len().min(3)]
        );
        let cert = cactus_certificate(&spec, &c, &q("1/4")).unwrap();
        assert!(cert.holds);
    }

    #[test]
    fn hypotheses_fail_for_coarse_sets() {
        let base = standard("theta(1,1,2)");
        let spec = CactusSpec {
            base: base.clone(),
            points: vec![GraphPoint::Vertex(0), GraphPoint::Vertex(1)],
            alpha: vec![q("1/10"), q("1/5")],
            injective: true,
        };
        let h = cactus_hypotheses(&spec);
        assert_eq!(h.omega, q("2"));
        assert!(!h.hold());
    }
}
