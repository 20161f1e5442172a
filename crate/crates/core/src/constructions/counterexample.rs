use serde::Serialize;

use crate::constructions::ConstructionError;
use crate::graph::{canonical_tree_code, Edge, GraphBuilder, GraphPoint, MetricGraph};
use crate::rational::Rational;
use crate::transform::persistence_distortion_estimate;

/// Two trees built around a central edge. At each end of the central edge
/// hang middle branches of a common length; the far end of each middle
/// branch carries some number of small branches of a common length. `g`
/// and `h` list the small-branch counts per middle branch at the two ends.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CounterexampleParams {
    pub central: Rational,
    pub middle: Rational,
    pub small: Rational,
    pub g: [Vec<usize>; 2],
    pub h: [Vec<usize>; 2],
}

fn sorted(v: &[usize]) -> Vec<usize> {
    let mut v = v.to_vec();
    v.sort_unstable();
    v
}

impl CounterexampleParams {
    pub fn validate(&self) -> Result<(), ConstructionError> {
        let bad = |m: &str| Err(ConstructionError::InvalidParameter(m.into()));
        if !(self.central.is_positive() && self.middle.is_positive() && self.small.is_positive()) {
            return bad("lengths must be positive");
        }
        let ends = self.g.iter().chain(&self.h);
        if ends.clone().any(|e| e.is_empty()) || ends.flatten().any(|&k| k == 0) {
            return bad("every end needs middle branches and every middle branch a small branch");
        }
        let union = |s: &[Vec<usize>; 2]| sorted(&[s[0].clone(), s[1].clone()].concat());
        if union(&self.g) != union(&self.h) {
            return bad("the two graphs must use the same branch profiles");
        }
        let (g0, g1, h0, h1) = (
            sorted(&self.g[0]),
            sorted(&self.g[1]),
            sorted(&self.h[0]),
            sorted(&self.h[1]),
        );
        if (g0 == h0 && g1 == h1) || (g0 == h1 && g1 == h0) {
            return Err(ConstructionError::Degenerate(
                "assignments agree up to swapping the ends".into(),
            ));
        }
        Ok(())
    }

    fn tree(&self, ends: &[Vec<usize>; 2]) -> MetricGraph {
        let mut b = GraphBuilder::new();
        b.vertex("a").vertex("b").edge("c", "a", "b", self.central.clone());
        for (end, counts) in ["a", "b"].iter().zip(ends) {
            for (i, &k) in counts.iter().enumerate() {
                let m = format!("{end}{i}");
                b.vertex(m.clone())
                    .edge(format!("{m}m"), *end, m.clone(), self.middle.clone());
                for j in 0..k {
                    let leaf = format!("{m}.{j}");
                    b.vertex(leaf.clone())
                        .edge(format!("{m}s{j}"), m.clone(), leaf, self.small.clone());
                }
            }
        }
        b.build().expect("counterexample trees are valid")
    }
}

/// The two trees `(G, H)`. Edge 0 of each is the central edge `c`.
pub fn counterexample_pair(params: &CounterexampleParams) -> Result<(MetricGraph, MetricGraph), ConstructionError> {
    params.validate()?;
    Ok((params.tree(&params.g), params.tree(&params.h)))
}

/// The frozen instance: central and middle edges of length 1, small
/// branches of length 1/4; `G` splits the profiles as `{1,1,3,3}` and
/// `{2,2,2,2}`, `H` as `{1,2,2,3}` at both ends.
pub fn golden_counterexample() -> CounterexampleParams {
    CounterexampleParams {
        central: Rational::one(),
        middle: Rational::one(),
        small: Rational::new(1, 4),
        g: [vec![1, 1, 3, 3], vec![2, 2, 2, 2]],
        h: [vec![1, 2, 2, 3], vec![1, 2, 2, 3]],
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResolutionCheck {
    pub delta: Rational,
    pub estimate: Rational,
    pub slack: Rational,
    /// `estimate ≤ slack`.
    pub within: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CounterexampleReport {
    pub code_g: String,
    pub code_h: String,
    pub codes_differ: bool,
    pub resolutions: Vec<ResolutionCheck>,
    /// The estimate at `δ/2` is at most half the estimate at `δ`.
    pub shrinks: bool,
}

impl CounterexampleReport {
    pub fn passed(&self) -> bool {
        self.codes_differ && self.shrinks && self.resolutions.iter().all(|r| r.within)
    }
}

/// Checks that two trees are not isometric yet have barcode transforms
/// within sampling error, at spacing `delta` and `delta / 2`.
pub fn verify_counterexample(
    g: &MetricGraph,
    h: &MetricGraph,
    delta: &Rational,
) -> Result<CounterexampleReport, ConstructionError> {
    let code_g = canonical_tree_code(g)?;
    let code_h = canonical_tree_code(h)?;
    let mut resolutions = Vec::new();
    for d in [delta.clone(), delta.half()] {
        let e = persistence_distortion_estimate(g, h, &d)?;
        let slack = e.slack();
        resolutions.push(ResolutionCheck {
            within: e.estimate <= slack,
            delta: d,
            estimate: e.estimate,
            slack,
        });
    }
    Ok(CounterexampleReport {
        codes_differ: code_g != code_h,
        shrinks: resolutions[1].estimate <= resolutions[0].estimate.half(),
        code_g,
        code_h,
        resolutions,
    })
}

/// Glues `tree`, scaled by `scale`, onto `host` by identifying `root` with
/// the point at `offset` along the host edge labelled `edge`. Glued
/// vertices and edges are prefixed with `t.`.
pub fn attach_at(
    host: &MetricGraph,
    edge: &str,
    offset: &Rational,
    tree: &MetricGraph,
    root: &GraphPoint,
    scale: &Rational,
) -> Result<MetricGraph, ConstructionError> {
    let e = host
        .edge_by_label(edge)
        .ok_or_else(|| ConstructionError::InvalidParameter(format!("unknown host edge {edge}")))?;
    if !offset.is_positive() || *offset >= host.edge(e).length {
        return Err(ConstructionError::InvalidParameter(format!(
            "offset {offset} is not interior to {edge}"
        )));
    }
    if !scale.is_positive() {
        return Err(ConstructionError::InvalidParameter(format!(
            "scale {scale} must be positive"
        )));
    }
    let at = host.point_on_edge(e, offset.clone())?;
    let host_sub = host.subdivide_at([&at]).graph;
    let glue = host_sub.vertex_count() - 1;
    let tree_sub = tree.subdivide_at([root]);
    let r = tree_sub.vertex_for(root).expect("root is a vertex after subdivision");
    let tree_sub = tree_sub.graph;

    let mut labels = host_sub.vertex_labels().to_vec();
    let mut index = vec![glue; tree_sub.vertex_count()];
    for (v, l) in tree_sub.vertex_labels().iter().enumerate() {
        if v != r {
            index[v] = labels.len();
            labels.push(format!("t.{l}"));
        }
    }
    let mut edges = host_sub.edges().to_vec();
    edges.extend(tree_sub.edges().iter().map(|t| Edge {
        label: format!("t.{}", t.label),
        u: index[t.u],
        v: index[t.v],
        length: &t.length * scale,
    }));
    Ok(MetricGraph::from_edges(labels, edges)?)
}

/// Both counterexample trees, scaled and glued by the midpoint of their
/// central edge at the same host location.
pub fn embedded_counterexample(
    params: &CounterexampleParams,
    host: &MetricGraph,
    edge: &str,
    offset: &Rational,
    scale: &Rational,
) -> Result<(MetricGraph, MetricGraph), ConstructionError> {
    let (g, h) = counterexample_pair(params)?;
    let glue = |t: &MetricGraph| attach_at(host, edge, offset, t, &t.midpoint(0), scale);
    Ok((glue(&g)?, glue(&h)?))
}
