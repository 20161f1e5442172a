//! Distances between diagrams and between finite (weighted) sets of them.

mod bottleneck;
mod flow;

pub use bottleneck::{bottleneck, bottleneck_matching, point_cost, Matching};

use std::collections::HashMap;

use crate::par::{self, Execution};
use crate::persistence::Diagram;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricError {
    #[error("cannot pair a {0}-dimensional point with a {1}-dimensional point")]
    DimensionMismatch(u8, u8),
    #[error("diagram set is empty")]
    EmptySet,
    #[error("invalid weights: {0}")]
    Weights(String),
}

/// Distinct diagrams of `set` and, for each entry, the index of its class.
pub fn distinct(set: &[Diagram]) -> (Vec<&Diagram>, Vec<usize>) {
    let mut classes: Vec<&Diagram> = Vec::new();
    let mut index: HashMap<&Diagram, usize> = HashMap::new();
    let labels = set
        .iter()
        .map(|d| {
            *index.entry(d).or_insert_with(|| {
                classes.push(d);
                classes.len() - 1
            })
        })
        .collect();
    (classes, labels)
}

/// Cheap lower bound on [`bottleneck`] read off the 0-dimensional points
/// when each diagram has exactly one; zero otherwise.
pub fn bottleneck_lower_bound(a: &Diagram, b: &Diagram) -> Rational {
    let single = |d: &Diagram| {
        let mut it = d.in_dim(0);
        match (it.next(), it.next()) {
            (Some(p), None) => Some(p.clone()),
            _ => None,
        }
    };
    match (single(a), single(b)) {
        (Some(x), Some(y)) => {
            let matched = (&x.birth - &y.birth).abs().max((&x.death - &y.death).abs());
            let diagonal = x.persistence().max(y.persistence());
            matched.min(diagonal)
        }
        _ => Rational::zero(),
    }
}

/// Bottleneck distances between every element of `a` and every element of
/// `b`, evaluated once per pair of distinct diagrams.
pub fn bottleneck_matrix(exec: Execution, a: &[Diagram], b: &[Diagram]) -> Vec<Vec<Rational>> {
    let (ca, la) = distinct(a);
    let (cb, lb) = distinct(b);
    let table = par::map_with(exec, &ca, |x| cb.iter().map(|y| bottleneck(x, y)).collect::<Vec<_>>());
    la.iter()
        .map(|&i| lb.iter().map(|&j| table[i][j].clone()).collect())
        .collect()
}

/// Hausdorff distance between two finite diagram sets under the bottleneck
/// distance.
pub fn hausdorff_sets(s1: &[Diagram], s2: &[Diagram]) -> Result<Rational, MetricError> {
    hausdorff_sets_with(Execution::default(), s1, s2)
}

pub fn hausdorff_sets_with(exec: Execution, s1: &[Diagram], s2: &[Diagram]) -> Result<Rational, MetricError> {
    if s1.is_empty() || s2.is_empty() {
        return Err(MetricError::EmptySet);
    }
    let (c1, _) = distinct(s1);
    let (c2, _) = distinct(s2);
    let table = par::map_with(exec, &c1, |x| c2.iter().map(|y| bottleneck(x, y)).collect::<Vec<_>>());
    let forward = table.iter().map(|row| row.iter().min().unwrap().clone()).max().unwrap();
    let backward = (0..c2.len())
        .map(|j| table.iter().map(|row| &row[j]).min().unwrap().clone())
        .max()
        .unwrap();
    Ok(forward.max(backward))
}

fn check_weights(m: &[(Diagram, Rational)]) -> Result<(), MetricError> {
    if m.is_empty() {
        return Err(MetricError::EmptySet);
    }
    if m.iter().any(|(_, w)| w.is_negative()) {
        return Err(MetricError::Weights("negative weight".into()));
    }
    let total: Rational = m.iter().map(|(_, w)| w).sum();
    if total != Rational::one() {
        return Err(MetricError::Weights(format!("weights sum to {total}, not 1")));
    }
    Ok(())
}

/// Merges equal diagrams, adding their weights; zero weights are dropped.
fn collapse(m: &[(Diagram, Rational)]) -> Vec<(Diagram, Rational)> {
    let mut out: Vec<(Diagram, Rational)> = Vec::new();
    let mut index: HashMap<&Diagram, usize> = HashMap::new();
    for (d, w) in m {
        if w.is_zero() {
            continue;
        }
        match index.get(d) {
            Some(&i) => out[i].1 += w.clone(),
            None => {
                index.insert(d, out.len());
                out.push((d.clone(), w.clone()));
            }
        }
    }
    out
}

/// ∞-Wasserstein distance between two finitely supported measures on
/// diagram space: the least t admitting a coupling supported on pairs at
/// bottleneck distance at most t.
pub fn wasserstein_infinity(m1: &[(Diagram, Rational)], m2: &[(Diagram, Rational)]) -> Result<Rational, MetricError> {
    wasserstein_infinity_with(Execution::default(), m1, m2)
}

pub fn wasserstein_infinity_with(
    exec: Execution,
    m1: &[(Diagram, Rational)],
    m2: &[(Diagram, Rational)],
) -> Result<Rational, MetricError> {
    check_weights(m1)?;
    check_weights(m2)?;
    let (a, b) = (collapse(m1), collapse(m2));
    let cost = par::map_with(exec, &a, |(x, _)| {
        b.iter().map(|(y, _)| bottleneck(x, y)).collect::<Vec<_>>()
    });
    let mut candidates: Vec<Rational> = cost.iter().flatten().cloned().collect();
    candidates.sort();
    candidates.dedup();
    let wa: Vec<Rational> = a.iter().map(|(_, w)| w.clone()).collect();
    let wb: Vec<Rational> = b.iter().map(|(_, w)| w.clone()).collect();
    let feasible = |t: &Rational| flow::transport_feasible(&wa, &wb, |i, j| cost[i][j] <= *t);
    let (mut lo, mut hi) = (0usize, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(&candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(candidates[lo].clone())
}
