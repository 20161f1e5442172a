use std::collections::BTreeMap;

use crate::persistence::{Diagram, DiagramPoint, HeightField, PointKind};
use crate::rational::Rational;

struct UnionFind {
    parent: Vec<usize>,
    /// Extreme value seen by the component, valid at roots.
    extreme: Vec<Rational>,
}

impl UnionFind {
    fn new(values: &[Rational]) -> Self {
        UnionFind {
            parent: (0..values.len()).collect(),
            extreme: values.to_vec(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }
}

/// Elder-rule sweep over vertices in the given order. `earlier(a, b)` is
/// true when extreme `a` was born before `b`. Returns the persistence pairs
/// (younger extreme, merge value) and the values at which cycles close.
fn sweep(
    field: &HeightField,
    order: &[usize],
    ahead: impl Fn(&Rational, &Rational) -> bool,
    earlier: impl Fn(&Rational, &Rational) -> bool,
) -> (Vec<(Rational, Rational)>, Vec<Rational>) {
    let g = field.graph();
    let h = field.heights();
    let mut uf = UnionFind::new(h);
    let mut pairs = Vec::new();
    let mut closings = Vec::new();
    for &w in order {
        for germ in g.germs(w) {
            let x = g.edge(germ.edge).other(w);
            if !ahead(&h[x], &h[w]) {
                continue;
            }
            let (rw, rx) = (uf.find(w), uf.find(x));
            if rw == rx {
                closings.push(h[w].clone());
                continue;
            }
            let (old, young) = if earlier(&uf.extreme[rx], &uf.extreme[rw]) {
                (rx, rw)
            } else {
                (rw, rx)
            };
            pairs.push((uf.extreme[young].clone(), h[w].clone()));
            uf.parent[young] = old;
        }
    }
    (pairs, closings)
}

/// β₁ of the subgraph made of the edges accepted by `keep`.
fn betti_one(field: &HeightField, keep: impl Fn(&Rational, &Rational) -> bool) -> usize {
    let g = field.graph();
    let h = field.heights();
    let mut parent: Vec<usize> = (0..g.vertex_count()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut cycles = 0;
    for e in g.edges() {
        let (lo, hi) = if h[e.u] <= h[e.v] {
            (&h[e.u], &h[e.v])
        } else {
            (&h[e.v], &h[e.u])
        };
        if !keep(lo, hi) {
            continue;
        }
        let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
        if a == b {
            cycles += 1;
        } else {
            parent[a] = b;
        }
    }
    cycles
}

/// Extended persistence from union-find sweeps.
///
/// The ascending sweep yields ordinary 0-dim pairs and the birth values of
/// the extended 1-dim points; the descending sweep yields relative 1-dim
/// pairs and their death values. Births are matched to deaths through the
/// rank function
/// `R(b, d) = β₁(sublevel b) − β₁(edges with values in (d, b])`,
/// which counts extended points with birth ≤ b and death ≤ d.
pub fn extended_persistence_sweep(field: &HeightField) -> Diagram {
    let h = field.heights();
    let mut ascending: Vec<usize> = (0..h.len()).collect();
    ascending.sort_by(|&a, &b| h[a].cmp(&h[b]).then(a.cmp(&b)));
    let descending: Vec<usize> = ascending.iter().rev().copied().collect();

    let mut points = Vec::new();
    if !h.is_empty() {
        points.push(DiagramPoint::new(
            0,
            field.min_height(),
            field.max_height(),
            PointKind::ExtendedPlus,
        ));
    }
    let (ordinary, births) = sweep(field, &ascending, |x, w| x < w, |a, b| a <= b);
    for (b, d) in ordinary {
        if b != d {
            points.push(DiagramPoint::new(0, b, d, PointKind::Ordinary));
        }
    }
    let (relative, deaths) = sweep(field, &descending, |x, w| x > w, |a, b| a >= b);
    for (b, d) in relative {
        if b != d {
            points.push(DiagramPoint::new(1, b, d, PointKind::Relative));
        }
    }
    for (b, d, count) in pair_extended(field, &births, &deaths) {
        for _ in 0..count {
            points.push(DiagramPoint::new(1, b.clone(), d.clone(), PointKind::ExtendedMinus));
        }
    }
    Diagram::new(points)
}

fn pair_extended(field: &HeightField, births: &[Rational], deaths: &[Rational]) -> Vec<(Rational, Rational, usize)> {
    if births.is_empty() {
        return Vec::new();
    }
    let mut levels: Vec<Rational> = field.heights().to_vec();
    levels.sort();
    levels.dedup();
    let below = |x: &Rational| -> Option<Rational> {
        let i = levels.partition_point(|l| l < x);
        (i > 0).then(|| levels[i - 1].clone())
    };
    let mut cache: BTreeMap<(Rational, Rational), usize> = BTreeMap::new();
    let mut rank = |b: &Option<Rational>, d: &Option<Rational>| -> usize {
        let (Some(b), Some(d)) = (b, d) else { return 0 };
        *cache.entry((b.clone(), d.clone())).or_insert_with(|| {
            let sub = betti_one(field, |_, hi| hi <= b);
            let band = betti_one(field, |lo, hi| hi <= b && lo > d);
            sub - band
        })
    };
    let mut distinct_births = births.to_vec();
    distinct_births.sort();
    distinct_births.dedup();
    let mut distinct_deaths = deaths.to_vec();
    distinct_deaths.sort();
    distinct_deaths.dedup();
    let mut out = Vec::new();
    for b in &distinct_births {
        let (b_now, b_prev) = (Some(b.clone()), below(b));
        for d in &distinct_deaths {
            let (d_now, d_prev) = (Some(d.clone()), below(d));
            let count = rank(&b_now, &d_now) + rank(&b_prev, &d_prev) - rank(&b_prev, &d_now) - rank(&b_now, &d_prev);
            if count > 0 {
                out.push((b.clone(), d.clone(), count));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{GraphBuilder, GraphPoint, MetricGraph};
    use crate::persistence::extended_persistence_reduction;
    use crate::rational::q;

    fn build(vertices: &[&str], edges: &[(&str, &str, &str, &str)]) -> MetricGraph {
        let mut b = GraphBuilder::new();
        for v in vertices {
            b.vertex(*v);
        }
        for (l, u, v, len) in edges {
            b.edge(*l, *u, *v, q(len));
        }
        b.build().unwrap()
    }

    fn dim1(d: &Diagram) -> Vec<(Rational, Rational)> {
        d.in_dim(1).map(|p| (p.birth.clone(), p.death.clone())).collect()
    }

    #[test]
    fn dumbbell_extended_points() {
        let g = build(
            &["p", "x"],
            &[("l1", "p", "p", "2"), ("bar", "p", "x", "1"), ("l2", "x", "x", "2")],
        );
        let f = HeightField::distance_from(&g, &GraphPoint::Vertex(0));
        let d = extended_persistence_sweep(&f);
        let ext: Vec<_> = d
            .in_dim(1)
            .filter(|p| p.kind == PointKind::ExtendedMinus)
            .map(|p| (p.birth.clone(), p.death.clone()))
            .collect();
        assert_eq!(ext, vec![(q("1"), q("0")), (q("2"), q("1"))]);
        assert_eq!(d, extended_persistence_reduction(&f));
    }

    #[test]
    fn circle() {
        let g = build(&["o"], &[("l", "o", "o", "5")]);
        let d = extended_persistence_sweep(&HeightField::distance_from(&g, &g.midpoint(0)));
        assert_eq!(dim1(&d), vec![(q("5/2"), q("0"))]);
    }

    #[test]
    fn trees_have_no_extended_one_dim_points() {
        let g = build(
            &["c", "a", "b", "d"],
            &[("x", "c", "a", "1"), ("y", "c", "b", "2"), ("z", "c", "d", "3")],
        );
        let p = g.point_on_edge(2, q("1")).unwrap();
        let f = HeightField::distance_from(&g, &p);
        let d = extended_persistence_sweep(&f);
        assert!(d.points().iter().all(|x| x.kind != PointKind::ExtendedMinus));
        // leaf a merges into b's branch at the center, then leaf d's branch
        // merges at the basepoint
        assert_eq!(dim1(&d), vec![(q("2"), q("0")), (q("2"), q("1"))]);
        assert_eq!(d, extended_persistence_reduction(&f));
    }

    #[test]
    fn general_heights_match_oracle() {
        let g = build(
            &["a", "b", "c", "t"],
            &[("x", "a", "b", "2"), ("y", "b", "c", "1"), ("z", "b", "t", "3")],
        );
        let f = HeightField::from_heights(g, vec![q("1"), q("3"), q("2"), q("6")]).unwrap();
        assert_eq!(extended_persistence_sweep(&f), extended_persistence_reduction(&f));
    }
}
