use serde::Serialize;

use crate::constructions::ConstructionError;
use crate::graph::{automorphism_count, GraphBuilder, GraphPoint, MetricGraph};
use crate::metric::distinct;
use crate::par;
use crate::persistence::{diagram_at, Diagram};
use crate::rational::Rational;

/// Caterpillar trees: a spine path whose two ends are leaves and whose
/// interior vertices each carry at least one leg.
#[derive(Clone, Debug)]
pub struct CaterpillarSearch {
    pub max_leaves: usize,
    pub spine_lengths: Vec<Rational>,
    pub leg_lengths: Vec<Rational>,
    /// Grid spacing along each edge for the basepoints compared.
    pub delta: Rational,
    /// Largest number of candidate trees to enumerate.
    pub limit: usize,
}

/// A tree without nontrivial isometries on which two distinct points have
/// the same diagram.
#[derive(Clone, Debug, Serialize)]
pub struct NonInjectiveWitness {
    #[serde(skip)]
    pub graph: MetricGraph,
    pub spine: Vec<Rational>,
    pub legs: Vec<Vec<Rational>>,
    pub p: String,
    pub q: String,
    #[serde(skip)]
    pub points: (GraphPoint, GraphPoint),
    pub diagram: Diagram,
    pub distance: Rational,
    pub automorphisms: u128,
}

/// Spine vertices `s0..`, legs `s{i}.{j}`; `legs[i]` hangs at interior
/// spine vertex `i + 1`.
pub fn caterpillar(spine: &[Rational], legs: &[Vec<Rational>]) -> Result<MetricGraph, ConstructionError> {
    if spine.len() != legs.len() + 1 {
        return Err(ConstructionError::InvalidParameter(format!(
            "{} spine edges need {} leg lists",
            spine.len(),
            spine.len().saturating_sub(1)
        )));
    }
    let mut b = GraphBuilder::new();
    b.vertex("s0");
    for (i, len) in spine.iter().enumerate() {
        b.vertex(format!("s{}", i + 1));
        b.edge(format!("p{i}"), format!("s{i}"), format!("s{}", i + 1), len.clone());
    }
    for (i, ls) in legs.iter().enumerate() {
        for (j, len) in ls.iter().enumerate() {
            let leaf = format!("s{}.{j}", i + 1);
            b.vertex(leaf.clone());
            b.edge(format!("l{}.{j}", i + 1), format!("s{}", i + 1), leaf, len.clone());
        }
    }
    Ok(b.build()?)
}

/// Sorted multisets of size `1..=max` drawn from `items` (by index).
fn multisets(n: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    while let Some(m) = stack.pop() {
        if m.len() < max {
            for i in *m.last().unwrap()..n {
                let mut next = m.clone();
                next.push(i);
                stack.push(next);
            }
        }
        out.push(m);
    }
    out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    out
}

type Candidate = (Vec<usize>, Vec<Vec<usize>>);

fn candidates(search: &CaterpillarSearch) -> Result<Vec<Candidate>, ConstructionError> {
    let (ns, nl) = (search.spine_lengths.len(), search.leg_lengths.len());
    let max_legs = search.max_leaves.saturating_sub(2);
    if ns == 0 || nl == 0 || max_legs == 0 {
        return Ok(Vec::new());
    }
    let leg_sets = multisets(nl, max_legs);
    let mut out: Vec<Candidate> = Vec::new();
    for interior in 1..=max_legs {
        // leg lists per interior vertex with total size at most max_legs
        let mut partial: Vec<(Vec<Vec<usize>>, usize)> = vec![(Vec::new(), 0)];
        for _ in 0..interior {
            let mut next = Vec::new();
            for (lists, used) in &partial {
                for s in &leg_sets {
                    if used + s.len() + (interior - lists.len() - 1) <= max_legs {
                        let mut l = lists.clone();
                        l.push(s.clone());
                        next.push((l, used + s.len()));
                    }
                }
            }
            partial = next;
        }
        let spine_count = ns.checked_pow(interior as u32 + 1).unwrap_or(usize::MAX);
        if spine_count.saturating_mul(partial.len()).saturating_add(out.len()) > search.limit {
            return Err(ConstructionError::Guard(format!(
                "more than {} caterpillars with {interior} interior spine vertices",
                search.limit
            )));
        }
        for code in 0..spine_count {
            let spine: Vec<usize> = (0..=interior).map(|k| code / ns.pow(k as u32) % ns).collect();
            for (legs, _) in &partial {
                // a caterpillar and its reversal are isometric
                let rev_spine: Vec<usize> = spine.iter().rev().copied().collect();
                let rev_legs: Vec<Vec<usize>> = legs.iter().rev().cloned().collect();
                if (&rev_spine, &rev_legs) < (&spine, legs) {
                    continue;
                }
                out.push((spine.clone(), legs.clone()));
            }
        }
    }
    Ok(out)
}

/// Vertices plus every point at an integer multiple of `delta` along each
/// edge. Unlike the evenly spread transform sample, this grid keeps the
/// commensurate offsets where collisions of integer-length trees sit.
fn grid_points(graph: &MetricGraph, delta: &Rational) -> Vec<GraphPoint> {
    let mut points: Vec<GraphPoint> = (0..graph.vertex_count()).map(GraphPoint::Vertex).collect();
    for (i, e) in graph.edges().iter().enumerate() {
        let mut offset = delta.clone();
        while offset < e.length {
            points.push(graph.point_on_edge(i, offset.clone()).expect("interior offset"));
            offset += delta;
        }
    }
    points
}

fn examine(search: &CaterpillarSearch, (spine, legs): &Candidate) -> Option<NonInjectiveWitness> {
    let spine: Vec<Rational> = spine.iter().map(|&i| search.spine_lengths[i].clone()).collect();
    let legs: Vec<Vec<Rational>> = legs
        .iter()
        .map(|l| l.iter().map(|&i| search.leg_lengths[i].clone()).collect())
        .collect();
    let graph = caterpillar(&spine, &legs).ok()?;
    if automorphism_count(&graph).ok()? != 1 {
        return None;
    }
    let points = grid_points(&graph, &search.delta);
    let diagrams: Vec<Diagram> = points.iter().map(|p| diagram_at(&graph, p)).collect();
    let (_, class_of) = distinct(&diagrams);
    let mut first = vec![None; class_of.len()];
    let (i, j) = class_of.iter().enumerate().find_map(|(j, &c)| match first[c] {
        Some(i) => Some((i, j)),
        None => {
            first[c] = Some(j);
            None
        }
    })?;
    let (p, q) = (points[i].clone(), points[j].clone());
    let diagram = diagram_at(&graph, &p);
    let distance = graph.distance(&p, &q);
    if diagram != diagram_at(&graph, &q) || distance.is_zero() {
        return None;
    }
    Some(NonInjectiveWitness {
        p: graph.point_label(&p),
        q: graph.point_label(&q),
        points: (p, q),
        diagram,
        distance,
        automorphisms: 1,
        spine,
        legs,
        graph,
    })
}

/// Enumerates caterpillars in order of size and returns the first one with
/// a trivial isometry group and an exact diagram collision between two
/// sampled basepoints. Candidates are examined in parallel batches; the
/// result is the earliest witness in enumeration order.
pub fn search_noninjective_trivial_auto(
    search: &CaterpillarSearch,
) -> Result<Option<NonInjectiveWitness>, ConstructionError> {
    if !search.delta.is_positive() {
        return Err(ConstructionError::InvalidParameter(format!(
            "delta {} must be positive",
            search.delta
        )));
    }
    const BATCH: usize = 512;
    let all = candidates(search)?;
    for chunk in all.chunks(BATCH) {
        if let Some(w) = par::map(chunk, |c| examine(search, c)).into_iter().flatten().next() {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Confirms a witness from scratch.
pub fn verify_witness(w: &NonInjectiveWitness) -> bool {
    let (p, q) = &w.points;
    automorphism_count(&w.graph).is_ok_and(|n| n == 1)
        && w.graph.distance(p, q).is_positive()
        && diagram_at(&w.graph, p) == diagram_at(&w.graph, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn space(max_leaves: usize, lengths: &[&str]) -> CaterpillarSearch {
        let l: Vec<Rational> = lengths.iter().map(|s| q(s)).collect();
        CaterpillarSearch {
            max_leaves,
            spine_lengths: l.clone(),
            leg_lengths: l,
            delta: q("1/2"),
            limit: 200_000,
        }
    }

    #[test]
    fn multiset_enumeration() {
        assert_eq!(
            multisets(2, 2),
            vec![vec![0], vec![1], vec![0, 0], vec![0, 1], vec![1, 1]]
        );
    }

    #[test]
    fn empty_space_finds_nothing() {
        assert!(search_noninjective_trivial_auto(&space(2, &["1"])).unwrap().is_none());
        assert!(search_noninjective_trivial_auto(&space(7, &[])).unwrap().is_none());
    }

    #[test]
    fn guard() {
        let mut s = space(7, &["1", "2", "3"]);
        s.limit = 10;
        assert!(matches!(
            search_noninjective_trivial_auto(&s),
            Err(ConstructionError::Guard(_))
        ));
    }

    #[test]
    fn finds_a_witness() {
        let mut s = space(6, &["2", "3", "4"]);
        s.spine_lengths = vec![q("1")];
        let w = search_noninjective_trivial_auto(&s).unwrap().unwrap();
        assert!(verify_witness(&w));
        assert_eq!(w.graph.leaves().len(), 6);
        assert_eq!((w.p.as_str(), w.q.as_str()), ("vertex:s2", "vertex:s3"));
    }

    #[test]
    fn hand_built_witness() {
        // views from the two marked points agree branch by branch in their
        // merge heights while the legs differ
        let g = caterpillar(
            &[q("1"), q("1"), q("3"), q("1"), q("1")],
            &[vec![q("2")], vec![q("4")], vec![q("3")], vec![q("3")]],
        )
        .unwrap();
        assert_eq!(automorphism_count(&g).unwrap(), 1);
        let p = g.point_on_edge(2, q("1")).unwrap();
        let x = g.point_on_edge(2, q("2")).unwrap();
        assert_eq!(diagram_at(&g, &p), diagram_at(&g, &x));
    }

    #[test]
    fn caterpillar_shape() {
        let g = caterpillar(&[q("1"), q("2")], &[vec![q("3"), q("1")]]).unwrap();
        assert_eq!(g.leaves().len(), 4);
        assert!(caterpillar(&[q("1")], &[vec![q("1")]]).is_err());
    }
}
