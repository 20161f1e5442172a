use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::graph::{GraphPoint, MetricGraph};
use crate::par::Execution;
use crate::rational::Rational;
use crate::transform::{barcode_transform_with, BarcodeSample, TransformError};

/// A piecewise-constant density on the edges of a graph.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum Density {
    /// Normalised length measure.
    #[default]
    Uniform,
    /// Density per edge label; edges not listed carry no mass.
    PerEdge(BTreeMap<String, Rational>),
}

impl FromStr for Density {
    type Err = TransformError;

    /// `uniform`, or a comma-separated list `edge=weight`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("uniform") {
            return Ok(Density::Uniform);
        }
        let mut map = BTreeMap::new();
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (label, value) = item
                .split_once('=')
                .ok_or_else(|| TransformError::Density(format!("expected `edge=weight`, found `{item}`")))?;
            let value: Rational = value
                .trim()
                .parse()
                .map_err(|_| TransformError::Density(format!("bad weight `{value}`")))?;
            map.insert(label.trim().to_string(), value);
        }
        if map.is_empty() {
            return Err(TransformError::Density("empty density".into()));
        }
        Ok(Density::PerEdge(map))
    }
}

impl fmt::Display for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Density::Uniform => f.write_str("uniform"),
            Density::PerEdge(map) => {
                let parts: Vec<String> = map.iter().map(|(k, v)| format!("{k}={v}")).collect();
                f.write_str(&parts.join(","))
            }
        }
    }
}

impl Density {
    fn per_edge(&self, graph: &MetricGraph) -> Result<Vec<Rational>, TransformError> {
        match self {
            Density::Uniform => Ok(vec![Rational::one(); graph.edge_count()]),
            Density::PerEdge(map) => {
                if let Some(unknown) = map.keys().find(|k| graph.edge_by_label(k).is_none()) {
                    return Err(TransformError::Density(format!("unknown edge `{unknown}`")));
                }
                if let Some((k, _)) = map.iter().find(|(_, v)| v.is_negative()) {
                    return Err(TransformError::Density(format!("negative weight on `{k}`")));
                }
                Ok(graph
                    .edges()
                    .iter()
                    .map(|e| map.get(&e.label).cloned().unwrap_or_else(Rational::zero))
                    .collect())
            }
        }
    }
}

/// A barcode sample with a probability weight on each basepoint: the
/// discrete pushforward of a density on the graph.
#[derive(Clone, Debug)]
pub struct MeasuredBarcodeSample {
    sample: BarcodeSample,
    weights: Vec<Rational>,
}

impl MeasuredBarcodeSample {
    pub fn sample(&self) -> &BarcodeSample {
        &self.sample
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn covering_radius(&self) -> &Rational {
        self.sample.covering_radius()
    }

    /// (diagram, weight) pairs, ready for ∞-Wasserstein comparison.
    pub fn weighted_diagrams(&self) -> Vec<(crate::persistence::Diagram, Rational)> {
        self.sample
            .diagrams()
            .iter()
            .cloned()
            .zip(self.weights.iter().cloned())
            .collect()
    }
}

/// Each sample receives the mass of its cell along the edges: every gap
/// between consecutive samples on an edge is split evenly between its two
/// ends. Exact for piecewise-constant densities.
pub fn voronoi_weights(sample: &BarcodeSample, density: &Density) -> Result<Vec<Rational>, TransformError> {
    let g = sample.graph();
    let rho = density.per_edge(g)?;
    let index = |p: &GraphPoint| sample.points().iter().position(|x| x == p);
    let mut on_edge: Vec<Vec<(Rational, usize)>> = vec![Vec::new(); g.edge_count()];
    for (i, p) in sample.points().iter().enumerate() {
        if let GraphPoint::Interior { edge, offset } = p {
            on_edge[*edge].push((offset.clone(), i));
        }
    }
    let mut weights = vec![Rational::zero(); sample.len()];
    let mut total = Rational::zero();
    for (i, e) in g.edges().iter().enumerate() {
        let missing = || TransformError::Density(format!("edge `{}` has an unsampled endpoint", e.label));
        let mut stops = vec![(Rational::zero(), index(&GraphPoint::Vertex(e.u)).ok_or_else(missing)?)];
        let mut inner = std::mem::take(&mut on_edge[i]);
        inner.sort();
        stops.extend(inner);
        stops.push((e.length.clone(), index(&GraphPoint::Vertex(e.v)).ok_or_else(missing)?));
        for w in stops.windows(2) {
            let half = (&(&w[1].0 - &w[0].0) * &rho[i]).half();
            weights[w[0].1] += half.clone();
            weights[w[1].1] += half.clone();
            total += half.clone() + half;
        }
    }
    if g.edge_count() == 0 {
        weights[0] = Rational::one();
        return Ok(weights);
    }
    if !total.is_positive() {
        return Err(TransformError::Density("total mass is zero".into()));
    }
    Ok(weights.into_iter().map(|w| &w / &total).collect())
}

pub fn measured_transform(
    graph: &MetricGraph,
    delta: &Rational,
    density: &Density,
) -> Result<MeasuredBarcodeSample, TransformError> {
    measured_transform_with(Execution::default(), graph, delta, density)
}

pub fn measured_transform_with(
    exec: Execution,
    graph: &MetricGraph,
    delta: &Rational,
    density: &Density,
) -> Result<MeasuredBarcodeSample, TransformError> {
    let sample = barcode_transform_with(exec, graph, delta)?;
    let weights = voronoi_weights(&sample, density)?;
    Ok(MeasuredBarcodeSample { sample, weights })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;
    use crate::rational::q;

    fn path() -> MetricGraph {
        let mut b = GraphBuilder::new();
        b.vertex("a").vertex("b").vertex("c");
        b.edge("e1", "a", "b", q("1")).edge("e2", "b", "c", q("1"));
        b.build().unwrap()
    }

    #[test]
    fn parse_density() {
        assert_eq!("uniform".parse::<Density>().unwrap(), Density::Uniform);
        let d: Density = "e1=2, e2=1/2".parse().unwrap();
        assert_eq!(d.to_string(), "e1=2,e2=0.5");
        assert!("e1".parse::<Density>().is_err());
        assert!("e1=x".parse::<Density>().is_err());
    }

    #[test]
    fn uniform_interval_weights() {
        let mut b = GraphBuilder::new();
        b.vertex("a").vertex("b").edge("e", "a", "b", q("2"));
        let g = b.build().unwrap();
        let m = measured_transform(&g, &q("1/2"), &Density::Uniform).unwrap();
        // vertices first, then interior points 2/5, 4/5, ...
        let w = m.weights();
        assert_eq!(w.len(), 6);
        assert_eq!(w[0], q("1/10"));
        assert_eq!(w[1], q("1/10"));
        assert!(w[2..].iter().all(|x| *x == q("1/5")));
        assert_eq!(w.iter().sum::<Rational>(), q("1"));
    }

    #[test]
    fn circle_weights_are_equal() {
        let mut b = GraphBuilder::new();
        b.vertex("o").edge("l", "o", "o", q("3"));
        let g = b.build().unwrap();
        let m = measured_transform(&g, &q("1"), &Density::Uniform).unwrap();
        assert!(m.weights().iter().all(|x| *x == q("1/4")));
    }

    #[test]
    fn mass_on_one_edge() {
        let g = path();
        let m = measured_transform(&g, &q("1/2"), &"e2=1".parse().unwrap()).unwrap();
        for (p, w) in m.sample().points().iter().zip(m.weights()) {
            let on_e2 = match p {
                GraphPoint::Vertex(v) => *v != 0,
                GraphPoint::Interior { edge, .. } => *edge == 1,
            };
            assert_eq!(on_e2, w.is_positive(), "{p:?}");
        }
        assert!(matches!(
            measured_transform(&g, &q("1"), &"e2=0".parse().unwrap()),
            Err(TransformError::Density(_))
        ));
        assert!(matches!(
            measured_transform(&g, &q("1"), &"zz=1".parse().unwrap()),
            Err(TransformError::Density(_))
        ));
        assert!(matches!(
            measured_transform(&g, &q("1"), &"e1=-1".parse().unwrap()),
            Err(TransformError::Density(_))
        ));
    }

    #[test]
    fn one_point_graph_is_a_point_mass() {
        let m = measured_transform(&MetricGraph::point(), &q("1"), &Density::Uniform).unwrap();
        assert_eq!(m.weights(), &[q("1")]);
    }
}
