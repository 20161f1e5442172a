use std::collections::{BTreeSet, HashMap};

use crate::graph::{Edge, GraphError, MetricGraph};
use crate::rational::Rational;

/// Largest vertex count, after suppressing valence-2 vertices, accepted by
/// [`automorphism_count`].
pub const AUTOMORPHISM_VERTEX_LIMIT: usize = 12;

const RAW_VERTEX_LIMIT: usize = 256;

/// Merges every chain through valence-2 vertices into a single edge. A
/// circle becomes one vertex carrying one loop.
pub fn suppress_valence_two(graph: &MetricGraph) -> MetricGraph {
    let n = graph.vertex_count();
    let mut keep: Vec<bool> = (0..n).map(|v| graph.valence(v) != 2).collect();
    if n > 0 && !keep.iter().any(|&k| k) {
        keep[0] = true;
    }
    let mut new_index = vec![usize::MAX; n];
    let mut labels = Vec::new();
    for v in 0..n {
        if keep[v] {
            new_index[v] = labels.len();
            labels.push(graph.vertex_label(v).to_string());
        }
    }
    let mut edges = Vec::new();
    let mut used: BTreeSet<usize> = BTreeSet::new();
    for start in 0..n {
        if !keep[start] {
            continue;
        }
        for g in graph.germs(start) {
            if used.contains(&g.edge) {
                continue;
            }
            let mut at = graph.edge(g.edge).other(start);
            let mut via = g.edge;
            let mut length = graph.edge(g.edge).length.clone();
            used.insert(via);
            while !keep[at] {
                let next = graph
                    .germs(at)
                    .iter()
                    .map(|h| h.edge)
                    .find(|&e| e != via)
                    .expect("valence two");
                used.insert(next);
                length += graph.edge(next).length.clone();
                at = graph.edge(next).other(at);
                via = next;
            }
            edges.push(Edge {
                label: graph.edge(g.edge).label.clone(),
                u: new_index[start],
                v: new_index[at],
                length,
            });
        }
    }
    MetricGraph::from_parts(labels, edges)
}

type PairLengths = HashMap<(usize, usize), Vec<Rational>>;

fn pair_lengths(graph: &MetricGraph) -> PairLengths {
    let mut m: PairLengths = HashMap::new();
    for e in graph.edges() {
        m.entry((e.u.min(e.v), e.u.max(e.v)))
            .or_default()
            .push(e.length.clone());
    }
    for v in m.values_mut() {
        v.sort();
    }
    m
}

fn lengths_between(m: &PairLengths, a: usize, b: usize) -> &[Rational] {
    m.get(&(a.min(b), a.max(b))).map(Vec::as_slice).unwrap_or(&[])
}

/// Number of length-preserving automorphisms, counting permutations of
/// parallel edges of equal length and reversals of self-loops.
pub fn automorphism_count(graph: &MetricGraph) -> Result<u128, GraphError> {
    let reduced = suppress_valence_two(graph).vertex_count();
    if reduced > AUTOMORPHISM_VERTEX_LIMIT || graph.vertex_count() > RAW_VERTEX_LIMIT {
        return Err(GraphError::TooLarge(format!(
            "{reduced} vertices after suppression (limit {AUTOMORPHISM_VERTEX_LIMIT})"
        )));
    }
    let overflow = || GraphError::TooLarge("automorphism count overflows".into());
    let m = pair_lengths(graph);
    let n = graph.vertex_count();

    // Vertices whose transposition is itself an automorphism.
    let swappable = |a: usize, b: usize| -> bool {
        if lengths_between(&m, a, a) != lengths_between(&m, b, b) {
            return false;
        }
        (0..n)
            .filter(|&c| c != a && c != b)
            .all(|c| lengths_between(&m, a, c) == lengths_between(&m, b, c))
    };
    let mut twin_class: Vec<usize> = (0..n).collect();
    for a in 0..n {
        if twin_class[a] != a {
            continue;
        }
        for (b, class) in twin_class.iter_mut().enumerate().skip(a + 1) {
            if *class == b && swappable(a, b) {
                *class = a;
            }
        }
    }

    let order = bfs_order(graph);
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let vertex_maps = extend(graph, &m, &order, 0, &mut image, &mut used, &twin_class).ok_or_else(overflow)?;

    let mut factor: u128 = 1;
    for ((a, b), lengths) in &m {
        let mut i = 0;
        while i < lengths.len() {
            let j = lengths[i..].iter().take_while(|l| **l == lengths[i]).count();
            factor = factor
                .checked_mul(factorial(j).ok_or_else(overflow)?)
                .ok_or_else(overflow)?;
            i += j;
        }
        if a == b {
            let flips = 1u128.checked_shl(lengths.len() as u32).ok_or_else(overflow)?;
            factor = factor.checked_mul(flips).ok_or_else(overflow)?;
        }
    }
    vertex_maps.checked_mul(factor).ok_or_else(overflow)
}

fn factorial(k: usize) -> Option<u128> {
    (1..=k as u128).try_fold(1u128, |acc, x| acc.checked_mul(x))
}

fn bfs_order(graph: &MetricGraph) -> Vec<usize> {
    let n = graph.vertex_count();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        order.push(s);
        let mut head = order.len() - 1;
        while head < order.len() {
            let w = order[head];
            head += 1;
            for g in graph.germs(w) {
                let x = graph.edge(g.edge).other(w);
                if !seen[x] {
                    seen[x] = true;
                    order.push(x);
                }
            }
        }
    }
    order
}

/// Counts vertex permutations extending the partial map in `image`.
/// Candidates in the same twin class lead to equally many extensions, so
/// only one per class is explored.
fn extend(
    graph: &MetricGraph,
    m: &PairLengths,
    order: &[usize],
    depth: usize,
    image: &mut [usize],
    used: &mut [bool],
    twin_class: &[usize],
) -> Option<u128> {
    if depth == order.len() {
        return Some(1);
    }
    let v = order[depth];
    let mut per_class: Vec<(usize, u128)> = Vec::new();
    for w in 0..image.len() {
        if used[w] || graph.valence(w) != graph.valence(v) {
            continue;
        }
        if lengths_between(m, v, v) != lengths_between(m, w, w) {
            continue;
        }
        let consistent = order[..depth]
            .iter()
            .all(|&u| lengths_between(m, v, u) == lengths_between(m, w, image[u]));
        if !consistent {
            continue;
        }
        match per_class.iter_mut().find(|(c, _)| *c == twin_class[w]) {
            Some((_, k)) => *k += 1,
            None => per_class.push((twin_class[w], 1)),
        }
    }
    let mut total: u128 = 0;
    for (class, size) in per_class {
        let w = (0..image.len())
            .find(|&w| !used[w] && twin_class[w] == class && graph.valence(w) == graph.valence(v))
            .expect("class member");
        image[v] = w;
        used[w] = true;
        let sub = extend(graph, m, order, depth + 1, image, used, twin_class);
        used[w] = false;
        image[v] = usize::MAX;
        total = total.checked_add(sub?.checked_mul(size)?)?;
    }
    Some(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;
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

    #[test]
    fn loop_flip() {
        let g = build(&["o"], &[("l", "o", "o", "2")]);
        assert_eq!(automorphism_count(&g).unwrap(), 2);
    }

    #[test]
    fn triangle_is_s3() {
        let g = build(
            &["a", "b", "c"],
            &[("x", "a", "b", "1"), ("y", "b", "c", "1"), ("z", "c", "a", "1")],
        );
        assert_eq!(automorphism_count(&g).unwrap(), 6);
    }

    #[test]
    fn asymmetric_path() {
        let g = build(&["a", "b", "c"], &[("x", "a", "b", "1"), ("y", "b", "c", "2")]);
        assert_eq!(automorphism_count(&g).unwrap(), 1);
    }

    #[test]
    fn symmetric_path_and_theta() {
        let g = build(&["a", "b", "c"], &[("x", "a", "b", "1"), ("y", "b", "c", "1")]);
        assert_eq!(automorphism_count(&g).unwrap(), 2);
        // swap u,v; swap the two unit edges
        let t = build(
            &["u", "v"],
            &[("a", "u", "v", "1"), ("b", "u", "v", "1"), ("c", "u", "v", "2")],
        );
        assert_eq!(automorphism_count(&t).unwrap(), 4);
    }

    #[test]
    fn large_star_uses_twin_classes() {
        let mut b = GraphBuilder::new();
        b.vertex("c");
        for i in 0..11 {
            b.vertex(format!("l{i}"))
                .edge(format!("e{i}"), "c", format!("l{i}"), q("1"));
        }
        assert_eq!(automorphism_count(&b.build().unwrap()).unwrap(), 39_916_800);
    }

    #[test]
    fn guard() {
        let mut b = GraphBuilder::new();
        b.vertex("c");
        for i in 0..13 {
            b.vertex(format!("l{i}"))
                .edge(format!("e{i}"), "c", format!("l{i}"), q("1"));
        }
        assert!(matches!(
            automorphism_count(&b.build().unwrap()),
            Err(GraphError::TooLarge(_))
        ));
    }

    #[test]
    fn suppression_merges_chains() {
        let g = build(
            &["a", "m", "b", "c"],
            &[
                ("x", "a", "m", "1"),
                ("y", "m", "b", "2"),
                ("z", "b", "c", "1"),
                ("w", "b", "a", "1"),
            ],
        );
        let s = suppress_valence_two(&g);
        // a and m both have valence two, so the cycle a-m-b becomes a loop at b
        assert_eq!(s.vertex_count(), 2);
        let mut lengths: Vec<_> = s.edges().iter().map(|e| e.length.clone()).collect();
        lengths.sort();
        assert_eq!(lengths, vec![q("1"), q("4")]);

        let circle = build(&["a", "b"], &[("x", "a", "b", "1"), ("y", "b", "a", "2")]);
        let s = suppress_valence_two(&circle);
        assert_eq!(s.vertex_count(), 1);
        assert_eq!(s.edge(0).length, q("3"));
        assert!(s.edge(0).is_loop());
    }
}
