use std::collections::VecDeque;

use serde::Serialize;

use crate::metric::MetricError;
use crate::persistence::{Diagram, DiagramPoint};
use crate::rational::Rational;

/// A partial matching between two diagrams. Indices refer to
/// `Diagram::points()`; unmatched points go to the diagonal.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Matching {
    pub pairs: Vec<(usize, usize)>,
    pub diagonal_left: Vec<usize>,
    pub diagonal_right: Vec<usize>,
}

impl Matching {
    /// Largest cost of any pairing or diagonal assignment.
    pub fn cost(&self, d1: &Diagram, d2: &Diagram) -> Result<Rational, MetricError> {
        let (a, b) = (d1.points(), d2.points());
        let mut worst = Rational::zero();
        for &(i, j) in &self.pairs {
            worst = worst.max(point_cost(&a[i], Some(&b[j]))?);
        }
        for &i in &self.diagonal_left {
            worst = worst.max(a[i].persistence());
        }
        for &j in &self.diagonal_right {
            worst = worst.max(b[j].persistence());
        }
        Ok(worst)
    }
}

/// L∞ distance between two points of the same dimension, or from `a` to
/// the diagonal when `b` is `None`.
pub fn point_cost(a: &DiagramPoint, b: Option<&DiagramPoint>) -> Result<Rational, MetricError> {
    match b {
        None => Ok(a.persistence()),
        Some(b) if a.dim != b.dim => Err(MetricError::DimensionMismatch(a.dim, b.dim)),
        Some(b) => Ok((&a.birth - &b.birth).abs().max((&a.death - &b.death).abs())),
    }
}

/// Exact bottleneck distance; dimensions are matched separately.
pub fn bottleneck(d1: &Diagram, d2: &Diagram) -> Rational {
    if d1 == d2 {
        return Rational::zero();
    }
    bottleneck_matching(d1, d2).0
}

/// Bottleneck distance together with a matching that attains it.
pub fn bottleneck_matching(d1: &Diagram, d2: &Diagram) -> (Rational, Matching) {
    let mut value = Rational::zero();
    let mut matching = Matching::default();
    for dim in [0u8, 1] {
        let left: Vec<usize> = (0..d1.len()).filter(|&i| d1.points()[i].dim == dim).collect();
        let right: Vec<usize> = (0..d2.len()).filter(|&j| d2.points()[j].dim == dim).collect();
        let a: Vec<&DiagramPoint> = left.iter().map(|&i| &d1.points()[i]).collect();
        let b: Vec<&DiagramPoint> = right.iter().map(|&j| &d2.points()[j]).collect();
        let (t, m) = solve_dimension(&a, &b);
        value = value.max(t);
        matching.pairs.extend(m.pairs.iter().map(|&(i, j)| (left[i], right[j])));
        matching.diagonal_left.extend(m.diagonal_left.iter().map(|&i| left[i]));
        matching
            .diagonal_right
            .extend(m.diagonal_right.iter().map(|&j| right[j]));
    }
    (value, matching)
}

fn linf(a: &DiagramPoint, b: &DiagramPoint) -> Rational {
    (&a.birth - &b.birth).abs().max((&a.death - &b.death).abs())
}

fn solve_dimension(a: &[&DiagramPoint], b: &[&DiagramPoint]) -> (Rational, Matching) {
    let pair_cost: Vec<Vec<Rational>> = a.iter().map(|x| b.iter().map(|y| linf(x, y)).collect()).collect();
    let diag_a: Vec<Rational> = a.iter().map(|x| x.persistence()).collect();
    let diag_b: Vec<Rational> = b.iter().map(|y| y.persistence()).collect();
    let mut candidates: Vec<Rational> = pair_cost
        .iter()
        .flatten()
        .chain(&diag_a)
        .chain(&diag_b)
        .cloned()
        .chain(std::iter::once(Rational::zero()))
        .collect();
    candidates.sort();
    candidates.dedup();
    let feasible = |t: &Rational| augmented_matching(&pair_cost, &diag_a, &diag_b, t);
    // the largest candidate is always feasible
    let (mut lo, mut hi) = (0usize, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(&candidates[mid]).is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let t = candidates[lo].clone();
    let m = feasible(&t).expect("feasible at the optimum");
    (t, m)
}

/// Perfect matching in the diagonal-augmented bipartite graph with every
/// edge of cost at most `t`, if one exists.
///
/// Left vertices: the n points of A, then m diagonal copies of B's points.
/// Right vertices: the m points of B, then n diagonal copies of A's points.
fn augmented_matching(
    pair_cost: &[Vec<Rational>],
    diag_a: &[Rational],
    diag_b: &[Rational],
    t: &Rational,
) -> Option<Matching> {
    let (n, m) = (diag_a.len(), diag_b.len());
    let size = n + m;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); size];
    for i in 0..n {
        for (j, c) in pair_cost[i].iter().enumerate() {
            if c <= t {
                adj[i].push(j);
            }
        }
        if diag_a[i] <= *t {
            adj[i].push(m + i);
        }
    }
    for j in 0..m {
        if diag_b[j] <= *t {
            adj[n + j].push(j);
        }
        // diagonal to diagonal is free
        adj[n + j].extend((0..n).map(|i| m + i));
    }
    let mate = hopcroft_karp(&adj, size)?;
    let mut out = Matching::default();
    for (l, &r) in mate.iter().enumerate() {
        match (l < n, r < m) {
            (true, true) => out.pairs.push((l, r)),
            (true, false) => out.diagonal_left.push(l),
            (false, true) => out.diagonal_right.push(r),
            (false, false) => {}
        }
    }
    Some(out)
}

/// Maximum bipartite matching; returns the right partner of every left
/// vertex when the matching is perfect.
fn hopcroft_karp(adj: &[Vec<usize>], right_count: usize) -> Option<Vec<usize>> {
    const NIL: usize = usize::MAX;
    let n = adj.len();
    let mut mate_l = vec![NIL; n];
    let mut mate_r = vec![NIL; right_count];
    let mut dist = vec![0usize; n];
    let mut matched = 0;
    loop {
        // layered BFS from free left vertices
        let mut queue = VecDeque::new();
        for l in 0..n {
            if mate_l[l] == NIL {
                dist[l] = 0;
                queue.push_back(l);
            } else {
                dist[l] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(l) = queue.pop_front() {
            for &r in &adj[l] {
                let next = mate_r[r];
                if next == NIL {
                    found = true;
                } else if dist[next] == usize::MAX {
                    dist[next] = dist[l] + 1;
                    queue.push_back(next);
                }
            }
        }
        if !found {
            break;
        }
        let mut iter = vec![0usize; n];
        for l in 0..n {
            if mate_l[l] == NIL && augment(l, adj, &mut mate_l, &mut mate_r, &mut dist, &mut iter) {
                matched += 1;
            }
        }
    }
    (matched == n).then_some(mate_l)
}

fn augment(
    l: usize,
    adj: &[Vec<usize>],
    mate_l: &mut [usize],
    mate_r: &mut [usize],
    dist: &mut [usize],
    iter: &mut [usize],
) -> bool {
    while iter[l] < adj[l].len() {
        let r = adj[l][iter[l]];
        iter[l] += 1;
        let next = mate_r[r];
        let ok = next == usize::MAX || (dist[next] == dist[l] + 1 && augment(next, adj, mate_l, mate_r, dist, iter));
        if ok {
            mate_l[l] = r;
            mate_r[r] = l;
            return true;
        }
    }
    dist[l] = usize::MAX;
    false
}
