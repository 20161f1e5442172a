use std::collections::BTreeMap;

use serde::Serialize;

use crate::graph::{DistanceField, GraphError, GraphPoint, MetricGraph};
use crate::rational::Rational;

/// Pairs of points relating a sample of G to a sample of H.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Correspondence {
    pub pairs: Vec<(GraphPoint, GraphPoint)>,
}

impl Correspondence {
    pub fn new(pairs: Vec<(GraphPoint, GraphPoint)>) -> Self {
        Correspondence { pairs }
    }

    pub fn flipped(&self) -> Correspondence {
        Correspondence {
            pairs: self.pairs.iter().map(|(a, b)| (b.clone(), a.clone())).collect(),
        }
    }

    /// True when every listed point of each side appears in some pair.
    pub fn covers(&self, left: &[GraphPoint], right: &[GraphPoint]) -> bool {
        left.iter().all(|x| self.pairs.iter().any(|(a, _)| a == x))
            && right.iter().all(|y| self.pairs.iter().any(|(_, b)| b == y))
    }
}

/// A finitely supported coupling of two discrete measures.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DiscreteCoupling {
    pub triples: Vec<(GraphPoint, GraphPoint, Rational)>,
}

/// Maximum of |d_G(x,x') - d_H(y,y')| over the listed pairs.
pub fn correspondence_cost(g: &MetricGraph, h: &MetricGraph, m: &Correspondence) -> Result<Rational, GraphError> {
    if m.pairs.is_empty() {
        return Err(GraphError::EmptyCorrespondence);
    }
    Ok(distortion(g, h, &m.pairs))
}

fn distortion(g: &MetricGraph, h: &MetricGraph, pairs: &[(GraphPoint, GraphPoint)]) -> Rational {
    let rows = crate::par::map(pairs, |(x, y)| {
        let fx = DistanceField::new(g, x);
        let fy = DistanceField::new(h, y);
        pairs
            .iter()
            .map(|(x2, y2)| (&fx.to(g, x2) - &fy.to(h, y2)).abs())
            .max()
            .unwrap_or_else(Rational::zero)
    });
    rows.into_iter().max().unwrap_or_else(Rational::zero)
}

/// Half the distortion over the support of `pi`, after checking that its
/// marginals are exactly `mu_g` and `mu_h`.
pub fn coupling_cost_jinf(
    g: &MetricGraph,
    h: &MetricGraph,
    pi: &DiscreteCoupling,
    mu_g: &[(GraphPoint, Rational)],
    mu_h: &[(GraphPoint, Rational)],
) -> Result<Rational, GraphError> {
    if pi.triples.iter().any(|(_, _, m)| m.is_negative()) {
        return Err(GraphError::MarginalMismatch("negative mass".into()));
    }
    let total: Rational = pi.triples.iter().map(|(_, _, m)| m).sum();
    if total != Rational::one() {
        return Err(GraphError::MarginalMismatch(format!("total mass {total}")));
    }
    check_marginal(pi.triples.iter().map(|(x, _, m)| (x, m)), mu_g, "G")?;
    check_marginal(pi.triples.iter().map(|(_, y, m)| (y, m)), mu_h, "H")?;
    let support: Vec<(GraphPoint, GraphPoint)> = pi
        .triples
        .iter()
        .filter(|(_, _, m)| m.is_positive())
        .map(|(x, y, _)| (x.clone(), y.clone()))
        .collect();
    Ok(distortion(g, h, &support).half())
}

fn check_marginal<'a>(
    masses: impl Iterator<Item = (&'a GraphPoint, &'a Rational)>,
    mu: &[(GraphPoint, Rational)],
    side: &str,
) -> Result<(), GraphError> {
    let mut got: BTreeMap<&GraphPoint, Rational> = BTreeMap::new();
    for (p, m) in masses {
        *got.entry(p).or_insert_with(Rational::zero) += m.clone();
    }
    let mut want: BTreeMap<&GraphPoint, Rational> = BTreeMap::new();
    for (p, m) in mu {
        *want.entry(p).or_insert_with(Rational::zero) += m.clone();
    }
    got.retain(|_, m| !m.is_zero());
    want.retain(|_, m| !m.is_zero());
    if got != want {
        return Err(GraphError::MarginalMismatch(format!("{side} marginal differs")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;
    use crate::rational::q;

    fn path(a: &str, b: &str) -> MetricGraph {
        let mut bld = GraphBuilder::new();
        bld.vertex("x").vertex("y").vertex("z");
        bld.edge("e", "x", "y", q(a)).edge("f", "y", "z", q(b));
        bld.build().unwrap()
    }

    fn net(g: &MetricGraph) -> Vec<GraphPoint> {
        let mut pts: Vec<GraphPoint> = (0..g.vertex_count()).map(GraphPoint::Vertex).collect();
        for i in 0..g.edge_count() {
            for k in 1..4 {
                let off = &g.edge(i).length * &Rational::new(k, 4);
                pts.push(g.point_on_edge(i, off).unwrap());
            }
        }
        pts
    }

    fn identity(g: &MetricGraph, h: &MetricGraph) -> Correspondence {
        Correspondence::new(net(g).into_iter().zip(net(h)).collect())
    }

    #[test]
    fn identity_costs_nothing() {
        let g = path("1", "2");
        assert_eq!(correspondence_cost(&g, &g, &identity(&g, &g)).unwrap(), q("0"));
    }

    #[test]
    fn one_point_graphs() {
        let p = MetricGraph::point();
        let m = Correspondence::new(vec![(GraphPoint::Vertex(0), GraphPoint::Vertex(0))]);
        assert_eq!(correspondence_cost(&p, &p, &m).unwrap(), q("0"));
        assert_eq!(
            correspondence_cost(&p, &p, &Correspondence::default()),
            Err(GraphError::EmptyCorrespondence)
        );
    }

    #[test]
    fn perturbed_length_bounded_by_epsilon() {
        let g = path("1", "2");
        let h = path("1", "2.1");
        let m = identity(&g, &h);
        let cost = correspondence_cost(&g, &h, &m).unwrap();
        // brute force over every pair of pairs
        let mut brute = Rational::zero();
        for (x, y) in &m.pairs {
            for (x2, y2) in &m.pairs {
                brute = brute.max((&g.distance(x, x2) - &h.distance(y, y2)).abs());
            }
        }
        assert_eq!(cost, brute);
        assert!(cost <= q("0.1"));
        assert_eq!(correspondence_cost(&h, &g, &m.flipped()).unwrap(), cost);
    }

    fn uniform(pts: &[GraphPoint]) -> Vec<(GraphPoint, Rational)> {
        let w = Rational::new(1, pts.len() as i64);
        pts.iter().map(|p| (p.clone(), w.clone())).collect()
    }

    #[test]
    fn identity_coupling_costs_half_the_perturbation() {
        let g = path("1", "2");
        let h = path("1", "2.1");
        let (ng, nh) = (net(&g), net(&h));
        let w = Rational::new(1, ng.len() as i64);
        let pi = DiscreteCoupling {
            triples: ng
                .iter()
                .zip(&nh)
                .map(|(a, b)| (a.clone(), b.clone(), w.clone()))
                .collect(),
        };
        let cost = coupling_cost_jinf(&g, &h, &pi, &uniform(&ng), &uniform(&nh)).unwrap();
        assert!(cost <= q("0.05"));
        assert!(cost.is_positive());
        let same = coupling_cost_jinf(
            &g,
            &g,
            &DiscreteCoupling {
                triples: ng.iter().map(|a| (a.clone(), a.clone(), w.clone())).collect(),
            },
            &uniform(&ng),
            &uniform(&ng),
        )
        .unwrap();
        assert_eq!(same, q("0"));
    }

    #[test]
    fn point_masses() {
        let p = MetricGraph::point();
        let v = GraphPoint::Vertex(0);
        let pi = DiscreteCoupling {
            triples: vec![(v.clone(), v.clone(), q("1"))],
        };
        let mu = vec![(v, q("1"))];
        assert_eq!(coupling_cost_jinf(&p, &p, &pi, &mu, &mu).unwrap(), q("0"));
    }

    #[test]
    fn marginal_mismatch_is_rejected() {
        let g = path("1", "1");
        let (a, b) = (GraphPoint::Vertex(0), GraphPoint::Vertex(2));
        let pi = DiscreteCoupling {
            triples: vec![(a.clone(), a.clone(), q("1"))],
        };
        let mu_g = vec![(a.clone(), q("1/2")), (b.clone(), q("1/2"))];
        let mu_h = vec![(a.clone(), q("1"))];
        assert!(matches!(
            coupling_cost_jinf(&g, &g, &pi, &mu_g, &mu_h),
            Err(GraphError::MarginalMismatch(_))
        ));
    }
}
