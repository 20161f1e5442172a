use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constructions::ConstructionError;
use crate::graph::{GraphBuilder, MetricGraph};
use crate::rational::Rational;

pub const RANDOM_VERTEX_LIMIT: usize = 64;
pub const RANDOM_EDGE_LIMIT: usize = 40;

/// Integer parts of the generated lengths are drawn uniformly from
/// `min..=max`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LengthRange {
    pub min: u32,
    pub max: u32,
}

impl Default for LengthRange {
    fn default() -> Self {
        LengthRange { min: 1, max: 3 }
    }
}

/// Options for [`random_metric_graph`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomGraphSpec {
    pub vertices: usize,
    pub extra_edges: usize,
    pub lengths: LengthRange,
    pub allow_loops: bool,
}

impl RandomGraphSpec {
    pub fn new(vertices: usize, extra_edges: usize) -> Self {
        RandomGraphSpec {
            vertices,
            extra_edges,
            lengths: LengthRange::default(),
            allow_loops: true,
        }
    }
}

/// A connected random multigraph with `vertices − 1 + extra_edges` edges.
///
/// Edge `i` gets length `a_i / D + 6^σ(i) / M` where `a_i / D` is uniform
/// on a grid of spacing `D = 2^24` in the length range, `σ` is a random
/// permutation of the edges and `M > 6^(edge count)` is a random odd
/// integer. A relation `Σ c_i L_i = 0` with `|c_i| ≤ 5` gives
/// `M Σ c_i a_i = −D Σ c_i 6^σ(i)`; as `M` is coprime to `D` it divides
/// `Σ c_i 6^σ(i)`, which is smaller than `M` in absolute value, so that sum
/// is a vanishing base-6 expansion with digits in `[−5, 5]` and every `c_i`
/// is zero. The spread-out grid part keeps accidental near-ties between
/// path lengths far above the scale of the genericity term.
pub fn random_metric_graph(seed: u64, spec: &RandomGraphSpec) -> Result<MetricGraph, ConstructionError> {
    let n = spec.vertices;
    let edge_count = (n.max(1) - 1) + spec.extra_edges;
    if n == 0 || n > RANDOM_VERTEX_LIMIT || edge_count > RANDOM_EDGE_LIMIT {
        return Err(ConstructionError::Guard(format!(
            "{n} vertices and {edge_count} edges (limits {RANDOM_VERTEX_LIMIT} and {RANDOM_EDGE_LIMIT})"
        )));
    }
    if spec.lengths.min == 0 && spec.lengths.max == 0 || spec.lengths.min > spec.lengths.max {
        return Err(ConstructionError::InvalidParameter("empty length range".into()));
    }
    if n == 1 && spec.extra_edges > 0 && !spec.allow_loops {
        return Err(ConstructionError::InvalidParameter(
            "a single vertex needs loops".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ends: Vec<(usize, usize)> = (1..n).map(|i| (rng.gen_range(0..i), i)).collect();
    while ends.len() < edge_count {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v || spec.allow_loops {
            ends.push((u, v));
        }
    }
    let six = BigInt::from(6);
    let base = num_traits::pow(six.clone(), edge_count);
    let odd = 2 * rng.gen_range(0u64..1 << 20) + 1;
    let modulus = &base + BigInt::from(odd);
    let grid = BigInt::from(1u64 << 24);
    let mut order: Vec<usize> = (0..edge_count).collect();
    order.shuffle(&mut rng);

    let mut b = GraphBuilder::new();
    for v in 0..n {
        b.vertex(format!("v{v}"));
    }
    for (i, (u, v)) in ends.into_iter().enumerate() {
        let lo = u64::from(spec.lengths.min) << 24;
        let hi = u64::from(spec.lengths.max) << 24;
        let a = BigInt::from(rng.gen_range(lo..=hi).max(1));
        let digit = num_traits::pow(six.clone(), order[i]);
        let numer = a * &modulus + digit * &grid;
        let length = Rational::from_big(num_rational::BigRational::new(numer, &modulus * &grid));
        b.edge(format!("e{i}"), format!("v{u}"), format!("v{v}"), length);
    }
    Ok(b.build()?)
}

/// A random tree on `vertices` vertices with generic lengths.
pub fn random_tree(seed: u64, vertices: usize) -> Result<MetricGraph, ConstructionError> {
    random_metric_graph(seed, &RandomGraphSpec::new(vertices, 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::has_small_integer_relation;

    #[test]
    fn counts_and_determinism() {
        let spec = RandomGraphSpec::new(5, 2);
        let g = random_metric_graph(1, &spec).unwrap();
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(g.betti_one(), 2);
        let again = random_metric_graph(1, &spec).unwrap();
        assert_eq!(g.to_string(), again.to_string());
        assert_ne!(g.to_string(), random_metric_graph(2, &spec).unwrap().to_string());
    }

    #[test]
    fn lengths_have_no_small_relation() {
        for seed in 0..5 {
            let g = random_metric_graph(seed, &RandomGraphSpec::new(4, 2)).unwrap();
            let lengths: Vec<Rational> = g.edges().iter().map(|e| e.length.clone()).collect();
            assert_eq!(
                has_small_integer_relation(&lengths, 5, &Rational::zero()).unwrap(),
                None
            );
        }
    }

    #[test]
    fn trees_and_guards() {
        assert!(random_tree(3, 7).unwrap().is_tree());
        assert!(matches!(
            random_metric_graph(0, &RandomGraphSpec::new(100, 0)),
            Err(ConstructionError::Guard(_))
        ));
        assert_eq!(
            random_metric_graph(0, &RandomGraphSpec::new(1, 0))
                .unwrap()
                .edge_count(),
            0
        );
    }
}
