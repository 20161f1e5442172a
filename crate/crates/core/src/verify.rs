//! Property suites over generated corpora. Every suite is deterministic in
//! its seed and returns a machine-readable report with per-case details.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::constructions::{
    cactus, cactus_certificate, cactus_hypotheses, compliant_cactus_spec, counterexample_pair, embedded_counterexample,
    golden_counterexample, random_metric_graph, random_tree, rips_cech_graph_check, rips_cech_tree_check, standard,
    tree_helly_check, verify_counterexample, Ball, ConstructionError, RandomGraphSpec,
};
use crate::graph::{
    correspondence_cost, coupling_cost_jinf, is_circle, topological_self_loops, Correspondence, DiscreteCoupling, Edge,
    GraphBuilder, GraphPoint, MetricGraph, SelfLoop,
};
use crate::metric::{bottleneck, bottleneck_lower_bound};
use crate::par;
use crate::persistence::{
    diagram_at, extended_persistence_reduction, extended_persistence_sweep, HeightField, PointKind,
};
use crate::rational::Rational;
use crate::transform::{
    barcode_transform, classify_tip, default_connect_radius, estimate_intrinsic_metric, local_isometry_probe,
    measured_transform, persistence_distortion_estimate, sample_basepoints, sampled_injectivity_check, BarcodeSample,
    Density, TipClass,
};

/// Constant in the stability inequalities.
pub const STABILITY_CONSTANT: i64 = 18;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Oracle,
    Stability,
    LocalIsometry,
    Injectivity,
    Cactus,
    Trees,
    Counterexample,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Oracle,
        Suite::Stability,
        Suite::LocalIsometry,
        Suite::Injectivity,
        Suite::Cactus,
        Suite::Trees,
        Suite::Counterexample,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Oracle => "oracle",
            Suite::Stability => "stability",
            Suite::LocalIsometry => "local-isometry",
            Suite::Injectivity => "injectivity",
            Suite::Cactus => "cactus",
            Suite::Trees => "trees",
            Suite::Counterexample => "counterexample",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, thiserror::Error)]
#[error("unknown suite `{0}`; expected one of oracle, stability, local-isometry, injectivity, cactus, trees, counterexample")]
pub struct UnknownSuite(pub String);

impl FromStr for Suite {
    type Err = UnknownSuite;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| UnknownSuite(s.to_string()))
    }
}

/// One unit of a suite: a graph, a trial or a construction.
#[derive(Clone, Debug, Serialize)]
pub struct CaseReport {
    pub name: String,
    pub passed: bool,
    /// Individual comparisons made by this case.
    pub checks: usize,
    pub detail: Value,
}

impl CaseReport {
    fn new(name: impl Into<String>, checks: usize, failures: Vec<String>, detail: Value) -> Self {
        let mut detail = detail;
        if !failures.is_empty() {
            detail["failures"] = json!(failures);
        }
        CaseReport {
            name: name.into(),
            passed: failures.is_empty(),
            checks,
            detail,
        }
    }

    fn error(name: impl Into<String>, err: impl fmt::Display) -> Self {
        CaseReport::new(name, 1, vec![err.to_string()], json!({}))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub passed: bool,
    pub cases: usize,
    pub checks: usize,
    pub failed_cases: usize,
    pub details: Vec<CaseReport>,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>, seed: u64, details: Vec<CaseReport>) -> Self {
        let failed_cases = details.iter().filter(|c| !c.passed).count();
        SuiteReport {
            suite: suite.into(),
            seed,
            passed: failed_cases == 0,
            cases: details.len(),
            checks: details.iter().map(|c| c.checks).sum(),
            failed_cases,
            details,
        }
    }

    /// Keeps only the failing cases in `details`.
    pub fn failures_only(mut self) -> Self {
        self.details.retain(|c| !c.passed);
        self
    }
}

/// Suite sizes used when a suite is run by name.
pub fn run_suite(suite: Suite, seed: u64) -> SuiteReport {
    match suite {
        Suite::Oracle => oracle_suite(seed, 200),
        Suite::Stability => stability_suite(seed, 1000),
        Suite::LocalIsometry => local_isometry_suite(seed, 200),
        Suite::Injectivity => injectivity_suite(seed, 10, 20),
        Suite::Cactus => cactus_suite(seed, 20),
        Suite::Trees => trees_suite(seed, 50),
        Suite::Counterexample => counterexample_suite(),
    }
}

fn case_seed(seed: u64, i: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(i as u64)
}

/// Random connected multigraphs with at most 8 vertices and 12 edges and
/// generic rational lengths.
pub fn random_corpus(seed: u64, count: usize) -> Vec<MetricGraph> {
    (0..count)
        .map(|i| {
            let s = case_seed(seed, i);
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let vertices = rng.gen_range(1..=8usize);
            let room = 12 - (vertices - 1);
            let extra = rng.gen_range(if vertices == 1 { 1 } else { 0 }..=room.min(4));
            random_metric_graph(s, &RandomGraphSpec::new(vertices, extra)).expect("corpus sizes are within guards")
        })
        .collect()
}

/// Every vertex and every edge midpoint.
pub fn vertices_and_midpoints(g: &MetricGraph) -> Vec<GraphPoint> {
    (0..g.vertex_count())
        .map(GraphPoint::Vertex)
        .chain((0..g.edge_count()).map(|e| g.midpoint(e)))
        .collect()
}

/// Sweep and matrix reduction agree at every vertex and edge midpoint.
pub fn oracle_case(name: &str, g: &MetricGraph) -> CaseReport {
    let points = vertices_and_midpoints(g);
    let failures: Vec<String> = par::map(&points, |p| {
        let f = HeightField::distance_from(g, p);
        let (a, b) = (extended_persistence_sweep(&f), extended_persistence_reduction(&f));
        (a != b).then(|| format!("{}: sweep {a} reduction {b}", g.point_label(p)))
    })
    .into_iter()
    .flatten()
    .collect();
    CaseReport::new(
        name,
        points.len(),
        failures,
        json!({ "basepoints": points.len(), "edges": g.edge_count() }),
    )
}

/// At every vertex and edge midpoint: as many extended 1-dimensional points
/// as independent cycles, valence minus one 1-dimensional points with death
/// zero, and every positive death at the distance of a vertex of valence at
/// least three.
pub fn structure_case(name: &str, g: &MetricGraph) -> CaseReport {
    let points = vertices_and_midpoints(g);
    let beta = g.betti_one();
    let forks: Vec<usize> = (0..g.vertex_count()).filter(|&v| g.valence(v) >= 3).collect();
    let failures: Vec<String> = par::map(&points, |p| {
        let d = diagram_at(g, p);
        let label = g.point_label(p);
        let mut out = Vec::new();
        let extended = d.in_dim(1).filter(|x| x.kind == PointKind::ExtendedMinus).count();
        if extended != beta {
            out.push(format!("{label}: {extended} extended points, betti {beta}"));
        }
        let zero = d.in_dim(1).filter(|x| x.death.is_zero()).count();
        let want = g.point_valence(p).saturating_sub(1);
        if zero != want {
            out.push(format!(
                "{label}: {zero} death-zero points, valence {}",
                g.point_valence(p)
            ));
        }
        let field = crate::graph::DistanceField::new(g, p);
        for x in d.in_dim(1).filter(|x| x.death.is_positive()) {
            if !forks.iter().any(|&v| *field.to_vertex(v) == x.death) {
                out.push(format!("{label}: death {} is not a fork distance", x.death));
            }
        }
        out
    })
    .into_iter()
    .flatten()
    .collect();
    CaseReport::new(
        name,
        points.len() * 3,
        failures,
        json!({ "basepoints": points.len(), "betti_one": beta }),
    )
}

/// Values quoted for the triangle, the interval and the circle.
pub fn quoted_values_case() -> CaseReport {
    let mut failures = Vec::new();
    let mut check = |ok: bool, what: &str| {
        if !ok {
            failures.push(what.to_string());
        }
    };
    let mut b = GraphBuilder::new();
    b.vertex("v1").vertex("v2").vertex("v3");
    let one = Rational::one();
    b.edge("a", "v1", "v2", one.clone())
        .edge("b", "v2", "v3", one.clone())
        .edge("c", "v3", "v1", one.clone());
    let triangle = b.build().expect("triangle");
    let d = diagram_at(&triangle, &GraphPoint::Vertex(0));
    let births: Vec<Rational> = d.in_dim(1).map(|x| x.birth.clone()).collect();
    check(
        births == vec![Rational::new(3, 2)],
        "triangle v1: one 1-dim point born at 1.5",
    );

    let interval = standard("interval(2)");
    let pts = sample_basepoints(&interval, &Rational::new(1, 8)).expect("positive delta");
    for p in &pts {
        let a = interval.distance(&GraphPoint::Vertex(0), p);
        let nearest = a.clone().min(&Rational::from_integer(2) - &a);
        let dim1: Vec<(Rational, Rational)> = diagram_at(&interval, p)
            .in_dim(1)
            .map(|x| (x.birth.clone(), x.death.clone()))
            .collect();
        let want = if nearest.is_zero() {
            vec![]
        } else {
            vec![(nearest, Rational::zero())]
        };
        check(
            dim1 == want,
            &format!("interval {}: 1-dim points {dim1:?}", interval.point_label(p)),
        );
    }

    let circle = standard("circle(2)");
    let s = barcode_transform(&circle, &Rational::new(1, 8)).expect("positive delta");
    check(s.distinct_diagram_count() == 1, "circle: one distinct diagram");
    CaseReport::new(
        "quoted-values",
        2 + pts.len(),
        failures,
        json!({ "interval_basepoints": pts.len() }),
    )
}

pub fn oracle_suite(seed: u64, graphs: usize) -> SuiteReport {
    let corpus = random_corpus(seed, graphs);
    let mut cases: Vec<CaseReport> = corpus
        .iter()
        .enumerate()
        .map(|(i, g)| oracle_case(&format!("oracle-{i}"), g))
        .collect();
    cases.extend(
        corpus
            .iter()
            .enumerate()
            .map(|(i, g)| structure_case(&format!("structure-{i}"), g)),
    );
    cases.push(quoted_values_case());
    SuiteReport::new(Suite::Oracle.name(), seed, cases)
}

/// The same combinatorial graph with every edge length multiplied by the
/// matching factor.
pub fn rescale_edges(g: &MetricGraph, factors: &[Rational]) -> MetricGraph {
    let edges: Vec<Edge> = g
        .edges()
        .iter()
        .zip(factors)
        .map(|(e, f)| Edge {
            length: &e.length * f,
            ..e.clone()
        })
        .collect();
    MetricGraph::from_edges(g.vertex_labels().to_vec(), edges).expect("positive factors keep the graph valid")
}

/// The homeomorphism between `g` and `rescale_edges(g, ..)` that is affine
/// on each edge.
pub fn map_rescaled(g: &MetricGraph, h: &MetricGraph, p: &GraphPoint) -> GraphPoint {
    match p {
        GraphPoint::Vertex(v) => GraphPoint::Vertex(*v),
        GraphPoint::Interior { edge, offset } => GraphPoint::Interior {
            edge: *edge,
            offset: offset * &(&h.edge(*edge).length / &g.edge(*edge).length),
        },
    }
}

fn random_point(rng: &mut ChaCha8Rng, g: &MetricGraph) -> GraphPoint {
    if g.edge_count() == 0 {
        return GraphPoint::Vertex(0);
    }
    let e = rng.gen_range(0..g.edge_count());
    let k = rng.gen_range(0..=16i64);
    g.point_on_edge(e, &g.edge(e).length * &Rational::new(k, 16))
        .expect("offset within the edge")
}

fn perturbation(rng: &mut ChaCha8Rng, edges: usize) -> Vec<Rational> {
    (0..edges).map(|_| Rational::new(rng.gen_range(16..=24), 20)).collect()
}

fn lipschitz_trial(name: String, seed: u64) -> CaseReport {
    let g = &random_corpus(seed, 1)[0];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (p, q) = (random_point(&mut rng, g), random_point(&mut rng, g));
    let db = bottleneck(&diagram_at(g, &p), &diagram_at(g, &q));
    let dg = g.distance(&p, &q);
    let failures = if db <= dg {
        vec![]
    } else {
        vec![format!("d_B {db} > d_G {dg}")]
    };
    CaseReport::new(
        name,
        1,
        failures,
        json!({ "p": g.point_label(&p), "q": g.point_label(&q), "bottleneck": db, "distance": dg }),
    )
}

fn trial_delta(g: &MetricGraph) -> Rational {
    let total = g.total_length();
    if total.is_zero() {
        Rational::one()
    } else {
        &total / &Rational::from_integer(12)
    }
}

fn distortion_trial(name: String, seed: u64) -> CaseReport {
    let g = &random_corpus(seed, 1)[0];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = rescale_edges(g, &perturbation(&mut rng, g.edge_count()));
    let delta = trial_delta(g);
    let run = || -> Result<(Rational, Rational, Rational), ConstructionError> {
        let est = persistence_distortion_estimate(g, &h, &delta)?;
        let mut pairs: Vec<(GraphPoint, GraphPoint)> = sample_basepoints(g, &delta)?
            .into_iter()
            .map(|x| {
                let y = map_rescaled(g, &h, &x);
                (x, y)
            })
            .collect();
        pairs.extend(
            sample_basepoints(&h, &delta)?
                .into_iter()
                .map(|y| (map_rescaled(&h, g, &y), y)),
        );
        let cost = correspondence_cost(g, &h, &Correspondence::new(pairs))?;
        Ok((est.estimate.clone(), est.lower, cost))
    };
    match run() {
        Err(e) => CaseReport::error(name, e),
        Ok((estimate, lower, cost)) => {
            let bound = &cost * &Rational::from_integer(STABILITY_CONSTANT);
            let failures = if lower <= bound {
                vec![]
            } else {
                vec![format!("lower {lower} > 18 * cost {cost}")]
            };
            CaseReport::new(
                name,
                1,
                failures,
                json!({ "estimate": estimate, "lower": lower, "correspondence_cost": cost }),
            )
        }
    }
}

fn measured_trial(name: String, seed: u64) -> CaseReport {
    let g = &random_corpus(seed, 1)[0];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = rescale_edges(g, &perturbation(&mut rng, g.edge_count()));
    let delta = trial_delta(g);
    let run = || -> Result<(Rational, Rational, Rational), ConstructionError> {
        let mg = measured_transform(g, &delta, &Density::Uniform)?;
        let images: Vec<GraphPoint> = mg.sample().points().iter().map(|x| map_rescaled(g, &h, x)).collect();
        let pushed: Vec<(crate::persistence::Diagram, Rational)> = images
            .iter()
            .zip(mg.weights())
            .map(|(y, w)| (diagram_at(&h, y), w.clone()))
            .collect();
        let estimate = crate::metric::wasserstein_infinity(&mg.weighted_diagrams(), &pushed)
            .map_err(crate::transform::TransformError::from)?;
        let mu_g: Vec<(GraphPoint, Rational)> = mg
            .sample()
            .points()
            .iter()
            .cloned()
            .zip(mg.weights().iter().cloned())
            .collect();
        let mu_h: Vec<(GraphPoint, Rational)> = images.iter().cloned().zip(mg.weights().iter().cloned()).collect();
        let coupling = DiscreteCoupling {
            triples: mu_g
                .iter()
                .zip(&images)
                .map(|((x, w), y)| (x.clone(), y.clone(), w.clone()))
                .collect(),
        };
        let jinf = coupling_cost_jinf(g, &h, &coupling, &mu_g, &mu_h)?;
        let slack = mg.covering_radius() + &crate::transform::covering_radius(&h, &delta)?;
        Ok((estimate, slack, jinf))
    };
    match run() {
        Err(e) => CaseReport::error(name, e),
        Ok((estimate, slack, jinf)) => {
            let bound = &jinf * &Rational::from_integer(STABILITY_CONSTANT);
            let failures = if &estimate - &slack <= bound {
                vec![]
            } else {
                vec![format!("estimate {estimate} - slack {slack} > 18 * J {jinf}")]
            };
            CaseReport::new(
                name,
                1,
                failures,
                json!({ "estimate": estimate, "slack": slack, "coupling_cost": jinf }),
            )
        }
    }
}

/// Half the trials compare bottleneck and graph distance between random
/// points; a quarter compare sampled persistence distortion with a
/// correspondence cost, and a quarter the measured analogue with a
/// coupling cost. The second graph rescales each edge by a factor in
/// `[4/5, 6/5]`.
pub fn stability_suite(seed: u64, trials: usize) -> SuiteReport {
    let lip = trials - trials / 2;
    let pd = trials / 4;
    let measured = trials / 2 - pd;
    let mut jobs: Vec<(u8, usize)> = Vec::new();
    jobs.extend((0..lip).map(|i| (0, i)));
    jobs.extend((0..pd).map(|i| (1, i)));
    jobs.extend((0..measured).map(|i| (2, i)));
    let cases = par::map(&jobs, |&(kind, i)| {
        let s = case_seed(seed ^ (kind as u64 + 1) << 32, i);
        match kind {
            0 => lipschitz_trial(format!("lipschitz-{i}"), s),
            1 => distortion_trial(format!("distortion-{i}"), s),
            _ => measured_trial(format!("measured-{i}"), s),
        }
    });
    SuiteReport::new(Suite::Stability.name(), seed, cases)
}

/// The probe succeeds at every vertex and edge midpoint.
pub fn local_isometry_case(name: &str, g: &MetricGraph) -> CaseReport {
    let points = vertices_and_midpoints(g);
    let outcomes = par::map(&points, |p| match local_isometry_probe(g, p) {
        Ok(r) if r.succeeded() => None,
        Ok(_) => Some(format!("{}: no radius found", g.point_label(p))),
        Err(e) => Some(format!("{}: {e}", g.point_label(p))),
    });
    let failures: Vec<String> = outcomes.into_iter().flatten().collect();
    CaseReport::new(name, points.len(), failures, json!({ "basepoints": points.len() }))
}

pub fn local_isometry_suite(seed: u64, graphs: usize) -> SuiteReport {
    let cases = random_corpus(seed, graphs)
        .iter()
        .enumerate()
        .filter(|(_, g)| !is_circle(g))
        .map(|(i, g)| local_isometry_case(&format!("graph-{i}"), g))
        .collect();
    SuiteReport::new(Suite::LocalIsometry.name(), seed, cases)
}

/// Generic graphs with no topological self-loop and at least three
/// vertices of valence other than two, whose edge lengths are separated.
pub fn injective_corpus(seed: u64, count: usize) -> Vec<MetricGraph> {
    let mut out = Vec::new();
    let mut i = 0;
    while out.len() < count {
        let s = case_seed(seed, i);
        i += 1;
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let vertices = rng.gen_range(3..=5usize);
        let mut spec = RandomGraphSpec::new(vertices, rng.gen_range(0..=2));
        spec.allow_loops = false;
        let g = random_metric_graph(s, &spec).expect("within guards");
        let branching = (0..g.vertex_count()).filter(|&v| g.valence(v) != 2).count();
        if topological_self_loops(&g).is_empty() && branching >= 3 && lengths_separated(&g) {
            out.push(g);
        }
    }
    out
}

/// Every signed combination of two or three edge lengths is at least an
/// eighth of the shortest edge away from zero. A near-tie of size ε in such
/// a combination makes two points ε apart in diagram space however far
/// apart they are in the graph.
pub fn lengths_separated(g: &MetricGraph) -> bool {
    let lengths: Vec<&Rational> = g.edges().iter().map(|e| &e.length).collect();
    let Some(shortest) = lengths.iter().min() else {
        return true;
    };
    let gap = *shortest * &Rational::new(1, 8);
    let far = |x: Rational| x.abs() >= gap;
    let n = lengths.len();
    (0..n).all(|i| {
        (i + 1..n).all(|j| {
            far(lengths[i] - lengths[j])
                && (j + 1..n).all(|k| {
                    let (a, b, c) = (lengths[i], lengths[j], lengths[k]);
                    far(a + b - c) && far(a - b + c) && far(b + c - a)
                })
        })
    })
}

/// Number of halvings tried by [`reconstruction_sample`].
pub const RECONSTRUCTION_REFINEMENTS: u32 = 4;

/// True when every pair of sampled diagrams within `radius` of each other
/// sits at exactly that graph distance, so each edge of the surrogate
/// graph is an isometric step.
pub fn surrogate_edges_exact(sample: &BarcodeSample, radius: &Rational) -> bool {
    let g = sample.graph();
    let (pts, ds) = (sample.points(), sample.diagrams());
    par::map_range(pts.len(), |i| {
        let field = crate::graph::DistanceField::new(g, &pts[i]);
        (i + 1..pts.len()).all(|j| {
            if bottleneck_lower_bound(&ds[i], &ds[j]) > *radius {
                return true;
            }
            let b = bottleneck(&ds[i], &ds[j]);
            b > *radius || b == field.to(g, &pts[j])
        })
    })
    .into_iter()
    .all(|ok| ok)
}

/// Sample for reconstruction: starting at an eighth of the shortest edge,
/// spacing is halved until the surrogate edges at the default connect
/// radius are exact, at most [`RECONSTRUCTION_REFINEMENTS`] times. The
/// second value tells whether that condition was reached.
pub fn reconstruction_sample(g: &MetricGraph) -> Result<(BarcodeSample, bool), ConstructionError> {
    let shortest = g
        .edges()
        .iter()
        .map(|e| e.length.clone())
        .min()
        .unwrap_or_else(Rational::one);
    let mut delta = shortest * Rational::new(1, 8);
    let mut k = 0;
    loop {
        let s = barcode_transform(g, &delta)?;
        let exact = surrogate_edges_exact(&s, &default_connect_radius(&s));
        if exact || k == RECONSTRUCTION_REFINEMENTS {
            return Ok((s, exact));
        }
        delta = delta.half();
        k += 1;
    }
}

/// Exact injectivity on the sample, then intrinsic-metric recovery within
/// four covering radii.
pub fn reconstruction_case(name: &str, g: &MetricGraph) -> CaseReport {
    let run = || -> Result<CaseReport, ConstructionError> {
        let (s, exact) = reconstruction_sample(g)?;
        let inj = sampled_injectivity_check(&s, &Rational::zero());
        let mut failures = Vec::new();
        if !inj.injective_on_sample() {
            failures.push(format!("{} exact collisions", inj.collisions.len()));
        }
        let m = estimate_intrinsic_metric(&s, None)?;
        let slack = s.covering_radius() * &Rational::from_integer(4);
        let rows = par::map_range(s.len(), |i| {
            let field = crate::graph::DistanceField::new(g, &s.points()[i]);
            s.points()
                .iter()
                .enumerate()
                .map(|(j, x)| (&m.distances[i][j] - &field.to(g, x)).abs())
                .max()
                .unwrap_or_else(Rational::zero)
        });
        let worst = rows.into_iter().max().unwrap_or_else(Rational::zero);
        if worst > slack {
            failures.push(format!("error {worst} exceeds 4 delta-hat {slack}"));
        }
        Ok(CaseReport::new(
            name,
            1 + s.len() * s.len(),
            failures,
            json!({
                "delta": s.delta(),
                "points": s.len(),
                "surrogate_edges_exact": exact,
                "min_separation": inj.min_separation,
                "max_error": worst,
                "allowed": slack,
            }),
        ))
    };
    run().unwrap_or_else(|e| CaseReport::error(name, e))
}

/// The antipode of a topological self-loop: the point halfway around it.
pub fn loop_antipode(g: &MetricGraph, l: &SelfLoop) -> GraphPoint {
    let half = l.circumference.half();
    let mut at = l.base;
    let mut walked = Rational::zero();
    for &i in &l.edges {
        let e = g.edge(i);
        let next = &walked + &e.length;
        if next >= half {
            let along = &half - &walked;
            let offset = if e.u == at { along } else { &e.length - &along };
            return g.point_on_edge(i, offset).expect("offset within the edge");
        }
        walked = next;
        at = e.other(at);
    }
    unreachable!("half the circumference lies on the loop")
}

/// A random tree with self-loops hung at some of its vertices, one of
/// them split by a valence-two vertex.
pub fn tip_instance(seed: u64) -> MetricGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tree = random_tree(seed, rng.gen_range(3..=6)).expect("within guards");
    let mut labels = tree.vertex_labels().to_vec();
    let mut edges = tree.edges().to_vec();
    let loops = rng.gen_range(1..=2usize);
    for k in 0..loops {
        let base = rng.gen_range(0..tree.vertex_count());
        let a = Rational::new(rng.gen_range(5..=20), 4);
        if k == 0 {
            edges.push(Edge {
                label: format!("loop{k}"),
                u: base,
                v: base,
                length: a,
            });
        } else {
            let w = labels.len();
            labels.push(format!("mid{k}"));
            let b = Rational::new(rng.gen_range(5..=20), 4);
            edges.push(Edge {
                label: format!("loop{k}a"),
                u: base,
                v: w,
                length: a,
            });
            edges.push(Edge {
                label: format!("loop{k}b"),
                u: w,
                v: base,
                length: b,
            });
        }
    }
    MetricGraph::from_edges(labels, edges).expect("valid")
}

/// Every leaf reads as a leaf and every self-loop antipode as a loop of
/// the right circumference.
pub fn tip_case(name: &str, g: &MetricGraph) -> CaseReport {
    let mut failures = Vec::new();
    let leaves = g.leaves();
    for &v in &leaves {
        let got = classify_tip(&diagram_at(g, &GraphPoint::Vertex(v)));
        if got != TipClass::GenuineLeaf {
            failures.push(format!("leaf {}: {got:?}", g.vertex_label(v)));
        }
    }
    let loops = topological_self_loops(g);
    for l in &loops {
        let p = loop_antipode(g, l);
        let got = classify_tip(&diagram_at(g, &p));
        let want = TipClass::SelfLoopAntipode {
            half_circumference: l.circumference.half(),
        };
        if got != want {
            failures.push(format!("antipode {}: {got:?}", g.point_label(&p)));
        }
    }
    CaseReport::new(
        name,
        leaves.len() + loops.len(),
        failures,
        json!({ "leaves": leaves.len(), "loops": loops.len() }),
    )
}

/// Reconstruction on injective graphs, then tip classification.
pub fn injectivity_suite(seed: u64, graphs: usize, tips: usize) -> SuiteReport {
    let corpus = injective_corpus(seed, graphs);
    let mut cases: Vec<CaseReport> = corpus
        .iter()
        .enumerate()
        .map(|(i, g)| reconstruction_case(&format!("reconstruct-{i}"), g))
        .collect();
    cases.extend((0..tips).map(|i| tip_case(&format!("tips-{i}"), &tip_instance(case_seed(seed, i)))));
    SuiteReport::new(Suite::Injectivity.name(), seed, cases)
}

/// Base graphs for cactus constructions: a few standard shapes, then
/// random small graphs.
pub fn cactus_bases(seed: u64, count: usize) -> Vec<MetricGraph> {
    let mut out: Vec<MetricGraph> = [
        "theta(1,1,2)",
        "path(1,2)",
        "star(1,3/2,2)",
        "dumbbell(2,1,3)",
        "circle(3)",
    ]
    .iter()
    .map(|n| standard(n))
    .take(count)
    .collect();
    let mut i = 0;
    while out.len() < count {
        let s = case_seed(seed, i);
        i += 1;
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        out.push(
            random_metric_graph(s, &RandomGraphSpec::new(rng.gen_range(2..=4), rng.gen_range(0..=1)))
                .expect("within guards"),
        );
    }
    out
}

/// A compliant cactus passes the hypotheses, the closeness certificate,
/// and the exact injectivity check at a quarter of the point spacing.
pub fn cactus_case(name: &str, base: &MetricGraph, seed: u64) -> CaseReport {
    let run = || -> Result<CaseReport, ConstructionError> {
        let spec = compliant_cactus_spec(base, seed)?;
        let hyp = cactus_hypotheses(&spec);
        let built = cactus(&spec)?;
        let cert = cactus_certificate(&spec, &built, &hyp.delta_s)?;
        let delta = hyp.delta_s.clone() * Rational::new(1, 4);
        let s = barcode_transform(&built.graph, &delta)?;
        let inj = sampled_injectivity_check(&s, &Rational::zero());
        let mut failures = Vec::new();
        if !hyp.hold() {
            failures.push("hypotheses fail".to_string());
        }
        if !cert.holds {
            failures.push(format!(
                "correspondence cost {} above twice {}",
                cert.cost, cert.epsilon
            ));
        }
        for c in inj.collisions.iter().take(5) {
            failures.push(format!("collision {} ~ {}", c.a, c.b));
        }
        Ok(CaseReport::new(
            name,
            3,
            failures,
            json!({
                "hypotheses": hyp,
                "certificate": cert,
                "delta": delta,
                "points": s.len(),
                "collisions": inj.collisions.len(),
                "min_separation": inj.min_separation,
            }),
        ))
    };
    run().unwrap_or_else(|e| CaseReport::error(name, e))
}

pub fn cactus_suite(seed: u64, count: usize) -> SuiteReport {
    let cases = cactus_bases(seed, count)
        .iter()
        .enumerate()
        .map(|(i, g)| cactus_case(&format!("cactus-{i}"), g, case_seed(seed, i)))
        .collect();
    SuiteReport::new(Suite::Cactus.name(), seed, cases)
}

/// Random points, scales and balls on one random tree: the Čech/Rips
/// comparison plus Helly witnesses checked against the exact minimax.
pub fn tree_case(name: &str, seed: u64) -> CaseReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tree = random_tree(seed, rng.gen_range(2..=8)).expect("within guards");
    let count = rng.gen_range(3..=10usize);
    let points: Vec<GraphPoint> = (0..count).map(|_| random_point(&mut rng, &tree)).collect();
    let mut pair_halves: Vec<Rational> = Vec::new();
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            pair_halves.push(tree.distance(a, b).half());
        }
    }
    // half of a pairwise distance is exactly a threshold; the rest are
    // random multiples of the largest
    let largest = pair_halves
        .iter()
        .max()
        .cloned()
        .unwrap_or_else(Rational::one)
        .max(Rational::new(1, 8));
    let mut scales: Vec<Rational> = (0..3)
        .map(|_| &largest * &Rational::new(rng.gen_range(1..=16), 16))
        .collect();
    // at least three points, so there is at least one pair
    scales.extend((0..2).map(|_| pair_halves[rng.gen_range(0..pair_halves.len())].clone()));
    let mut failures = Vec::new();
    let report = match rips_cech_tree_check(&tree, &points, &scales) {
        Ok(r) => r,
        Err(e) => return CaseReport::error(name, e),
    };
    for v in report.violations.iter().take(5) {
        failures.push(format!(
            "scale {} subset {:?}: cech {} rips {}",
            v.scale, v.subset, v.cech, v.rips
        ));
    }
    let mut helly_checks = 0;
    for _ in 0..10 {
        let k = rng.gen_range(2..=4usize);
        let balls: Vec<Ball> = (0..k)
            .map(|_| {
                Ball::new(
                    random_point(&mut rng, &tree),
                    &largest * &Rational::new(rng.gen_range(1..=16), 8),
                )
            })
            .collect();
        let helly = tree_helly_check(&tree, &balls).expect("tree input");
        let (value, _) = crate::constructions::minimax_point(&tree, &balls).expect("balls nonempty");
        helly_checks += 1;
        let common = !value.is_positive();
        if !helly.holds || (helly.pairwise && helly.witness.is_none()) || helly.witness.is_some() != common {
            failures.push(format!(
                "helly mismatch: pairwise {} witness {:?} minimax {value}",
                helly.pairwise, helly.witness
            ));
        }
    }
    CaseReport::new(
        name,
        report.checked + helly_checks,
        failures,
        json!({ "points": count, "scales": scales, "subsets_checked": report.checked }),
    )
}

/// On a circle of length 3 with points at 0, 1 and 2, radius 1/2 balls
/// meet pairwise without a common point.
pub fn cycle_negative_control() -> CaseReport {
    let g = standard("circle(3)");
    let pts: Vec<GraphPoint> = (0..3)
        .map(|k| g.point_on_edge(0, Rational::from_integer(k)).expect("on the loop"))
        .collect();
    let r = rips_cech_graph_check(&g, &pts, &[Rational::new(1, 2)]);
    let failures = if r.passed() {
        vec!["no violation found on a cycle".to_string()]
    } else {
        vec![]
    };
    CaseReport::new(
        "cycle-negative-control",
        r.checked,
        failures,
        json!({ "violations": r.violations }),
    )
}

pub fn trees_suite(seed: u64, trees: usize) -> SuiteReport {
    let ids: Vec<usize> = (0..trees).collect();
    let mut cases = par::map(&ids, |&i| tree_case(&format!("tree-{i}"), case_seed(seed, i)));
    cases.push(cycle_negative_control());
    SuiteReport::new(Suite::Trees.name(), seed, cases)
}

/// The frozen pair at spacing 1/4 and 1/8, the degenerate rejection, and
/// the pair glued onto a host path.
pub fn counterexample_suite() -> SuiteReport {
    let params = golden_counterexample();
    let mut cases = Vec::new();
    cases.push(
        match counterexample_pair(&params).and_then(|(g, h)| verify_counterexample(&g, &h, &Rational::new(1, 4))) {
            Ok(r) => {
                let failures = if r.passed() {
                    vec![]
                } else {
                    vec!["golden pair failed".to_string()]
                };
                CaseReport::new("golden-pair", 4, failures, json!(r))
            }
            Err(e) => CaseReport::error("golden-pair", e),
        },
    );
    let mut swapped = params.clone();
    swapped.h = [params.g[1].clone(), params.g[0].clone()];
    let degenerate = matches!(counterexample_pair(&swapped), Err(ConstructionError::Degenerate(_)));
    cases.push(CaseReport::new(
        "degenerate-rejected",
        1,
        if degenerate {
            vec![]
        } else {
            vec!["end swap accepted".to_string()]
        },
        json!({}),
    ));
    let host = standard("path(3,2)");
    let embedded = embedded_counterexample(&params, &host, "e1", &Rational::one(), &Rational::new(1, 4))
        .and_then(|(g, h)| verify_counterexample(&g, &h, &Rational::new(1, 8)));
    cases.push(match embedded {
        Ok(r) => {
            let failures = if r.passed() {
                vec![]
            } else {
                vec!["embedded pair failed".to_string()]
            };
            CaseReport::new("embedded-pair", 4, failures, json!(r))
        }
        Err(e) => CaseReport::error("embedded-pair", e),
    });
    SuiteReport::new(Suite::Counterexample.name(), 0, cases)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn corpus_is_deterministic_and_bounded() {
        let a = random_corpus(5, 20);
        let b = random_corpus(5, 20);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.to_string(), y.to_string());
            assert!(x.vertex_count() <= 8 && x.edge_count() <= 12);
        }
    }

    #[test]
    fn small_suites_pass() {
        for r in [
            oracle_suite(1, 5),
            stability_suite(1, 8),
            local_isometry_suite(1, 5),
            injectivity_suite(1, 1, 3),
            cactus_suite(1, 2),
            trees_suite(1, 3),
        ] {
            assert!(
                r.passed,
                "{}",
                serde_json::to_string_pretty(&r.failures_only()).unwrap()
            );
        }
    }

    #[test]
    fn quoted_values() {
        assert!(quoted_values_case().passed);
    }

    #[test]
    fn negative_control_finds_a_violation() {
        assert!(cycle_negative_control().passed);
    }

    #[test]
    fn antipodes_of_split_loops() {
        let g = tip_instance(3);
        let case = tip_case("t", &g);
        assert!(case.passed, "{:?}", case.detail);
    }

    #[test]
    fn rescaling_maps_vertices_and_offsets() {
        let g = standard("path(1,2)");
        let h = rescale_edges(&g, &[Rational::new(1, 2), Rational::from_integer(2)]);
        assert_eq!(h.total_length(), Rational::new(9, 2));
        let p = g.point_on_edge(1, Rational::one()).unwrap();
        assert_eq!(
            map_rescaled(&g, &h, &p),
            h.point_on_edge(1, Rational::from_integer(2)).unwrap()
        );
    }
}
