use crate::graph::{suppress_valence_two, DistanceField, GraphError, GraphPoint, MetricGraph};
use crate::rational::Rational;

/// A string that two trees share exactly when they are isometric.
///
/// Valence-2 vertices are suppressed, the tree is rooted at its metric
/// center, and subtrees are encoded recursively as sorted lists of
/// `length:code` entries.
pub fn canonical_tree_code(graph: &MetricGraph) -> Result<String, GraphError> {
    if !graph.is_tree() {
        return Err(GraphError::NotATree);
    }
    let tree = suppress_valence_two(graph);
    if tree.edge_count() == 0 {
        return Ok("()".to_string());
    }
    let (tree, root) = root_at_center(&tree);
    Ok(encode(&tree, root, usize::MAX))
}

fn farthest_vertex(tree: &MetricGraph, from: usize) -> (usize, DistanceField) {
    let field = DistanceField::new(tree, &GraphPoint::Vertex(from));
    let far = (0..tree.vertex_count())
        .max_by(|&a, &b| field.to_vertex(a).cmp(field.to_vertex(b)).then(b.cmp(&a)))
        .unwrap();
    (far, field)
}

/// Returns the tree, subdivided if needed, and the vertex at its center.
fn root_at_center(tree: &MetricGraph) -> (MetricGraph, usize) {
    let (a, _) = farthest_vertex(tree, 0);
    let (b, from_a) = farthest_vertex(tree, a);
    let half = from_a.to_vertex(b).half();
    // walk back from b towards a until passing the midpoint
    let mut at = b;
    loop {
        if *from_a.to_vertex(at) == half {
            return (tree.clone(), at);
        }
        let step = tree
            .germs(at)
            .iter()
            .find(|g| {
                let e = tree.edge(g.edge);
                let x = e.other(at);
                &(from_a.to_vertex(x) + &e.length) == from_a.to_vertex(at)
            })
            .copied()
            .expect("geodesic predecessor");
        let e = tree.edge(step.edge);
        let prev = e.other(at);
        if *from_a.to_vertex(prev) < half {
            // the center lies strictly inside this edge
            let from_prev = &half - from_a.to_vertex(prev);
            let offset = if e.u == prev { from_prev } else { &e.length - &from_prev };
            let center = GraphPoint::Interior {
                edge: step.edge,
                offset,
            };
            let sub = tree.subdivide_at(std::slice::from_ref(&center));
            let root = sub.vertex_for(&center).expect("inserted");
            return (sub.graph, root);
        }
        at = prev;
    }
}

fn encode(tree: &MetricGraph, v: usize, parent_edge: usize) -> String {
    let mut children: Vec<String> = tree
        .germs(v)
        .iter()
        .filter(|g| g.edge != parent_edge)
        .map(|g| {
            let e = tree.edge(g.edge);
            format!("{}:{}", length_key(&e.length), encode(tree, e.other(v), g.edge))
        })
        .collect();
    children.sort();
    format!("({})", children.join(","))
}

fn length_key(l: &Rational) -> String {
    l.to_string()
}
