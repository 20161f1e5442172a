use serde::Serialize;

use crate::metric::{bottleneck, bottleneck_lower_bound, distinct};
use crate::par::{self, Execution};
use crate::rational::Rational;
use crate::transform::BarcodeSample;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Collision {
    pub a: String,
    pub b: String,
    pub distance: Rational,
}

/// Pairwise separation of the sampled diagrams. A collision at distance 0
/// is an exact proof that Ψ is not injective on the sample.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InjectivityReport {
    pub points: usize,
    pub distinct_diagrams: usize,
    pub tolerance: Rational,
    /// Smallest bottleneck distance between diagrams at distinct basepoints;
    /// absent when fewer than two basepoints were sampled.
    pub min_separation: Option<Rational>,
    pub collisions: Vec<Collision>,
}

impl InjectivityReport {
    pub fn injective_on_sample(&self) -> bool {
        self.collisions.is_empty()
    }
}

/// Candidate pairs are examined in order of their lower bound, in parallel
/// batches, until no remaining pair can beat the current minimum or fall
/// within the tolerance.
pub fn sampled_injectivity_check(sample: &BarcodeSample, tolerance: &Rational) -> InjectivityReport {
    sampled_injectivity_check_with(Execution::default(), sample, tolerance)
}

pub fn sampled_injectivity_check_with(
    exec: Execution,
    sample: &BarcodeSample,
    tolerance: &Rational,
) -> InjectivityReport {
    const BATCH: usize = 256;
    let labels = sample.labels();
    let (classes, class_of) = distinct(sample.diagrams());
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); classes.len()];
    for (i, &c) in class_of.iter().enumerate() {
        members[c].push(i);
    }

    let mut best: Option<Rational> = members.iter().any(|m| m.len() > 1).then(Rational::zero);
    let mut close: Vec<(usize, usize, Rational)> = Vec::new();
    for c in 0..classes.len() {
        close.push((c, c, Rational::zero()));
    }

    let mut pairs: Vec<(Rational, usize, usize)> = Vec::new();
    for i in 0..classes.len() {
        for j in i + 1..classes.len() {
            pairs.push((bottleneck_lower_bound(classes[i], classes[j]), i, j));
        }
    }
    pairs.sort();
    let mut start = 0;
    while start < pairs.len() {
        let threshold = match &best {
            Some(b) => b.clone().max(tolerance.clone()),
            None => pairs[start].0.clone(),
        };
        if pairs[start].0 > threshold {
            break;
        }
        let end = (start + BATCH).min(pairs.len());
        let batch = &pairs[start..end];
        let values = par::map_with(exec, batch, |(_, i, j)| bottleneck(classes[*i], classes[*j]));
        for ((_, i, j), d) in batch.iter().zip(values) {
            if d <= *tolerance {
                close.push((*i, *j, d.clone()));
            }
            if best.as_ref().is_none_or(|b| d < *b) {
                best = Some(d);
            }
        }
        start = end;
    }

    let mut collisions = Vec::new();
    for (ci, cj, d) in close {
        for (x, &a) in members[ci].iter().enumerate() {
            let others: &[usize] = if ci == cj { &members[cj][x + 1..] } else { &members[cj] };
            for &b in others {
                let (a, b) = (a.min(b), a.max(b));
                collisions.push(Collision {
                    a: labels[a].clone(),
                    b: labels[b].clone(),
                    distance: d.clone(),
                });
            }
        }
    }
    collisions.sort_by(|x, y| (&x.distance, &x.a, &x.b).cmp(&(&y.distance, &y.a, &y.b)));
    InjectivityReport {
        points: sample.len(),
        distinct_diagrams: classes.len(),
        tolerance: tolerance.clone(),
        min_separation: if sample.len() < 2 { None } else { best },
        collisions,
    }
}
