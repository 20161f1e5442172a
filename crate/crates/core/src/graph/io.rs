//! Plain-text graph files and distance-matrix CSV export.
//!
//! ```text
//! # unit triangle
//! v v1
//! v v2
//! v v3
//! e a v1 v2 1
//! e b v2 v3 1
//! e c v3 v1 1
//! ```

use std::fmt::Write as _;
use std::path::Path;

use crate::graph::{DistanceField, GraphBuilder, GraphError, GraphPoint, MetricGraph};
use crate::rational::Rational;

pub fn parse_graph(text: &str) -> Result<MetricGraph, GraphError> {
    let mut builder = GraphBuilder::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parse_err = |message: String| GraphError::Parse { line: i + 1, message };
        match fields.as_slice() {
            ["v", id] => {
                builder.vertex(*id);
            }
            ["e", id, u, v, length] => {
                let length: Rational = length
                    .parse()
                    .map_err(|e: crate::rational::ParseRationalError| parse_err(e.to_string()))?;
                builder.edge(*id, *u, *v, length);
            }
            _ => return Err(parse_err(format!("unrecognised record `{line}`"))),
        }
    }
    builder.build()
}

pub fn read_graph_file(path: impl AsRef<Path>) -> std::io::Result<Result<MetricGraph, GraphError>> {
    let text = std::fs::read_to_string(path)?;
    Ok(parse_graph(&text))
}

/// CSV with a header row of point labels and one row per point.
pub fn write_distance_csv(graph: &MetricGraph, points: &[GraphPoint]) -> String {
    let labels: Vec<String> = points.iter().map(|p| graph.point_label(p)).collect();
    let mut out = String::from("point");
    for l in &labels {
        out.push(',');
        out.push_str(l);
    }
    out.push('\n');
    for (p, label) in points.iter().zip(&labels) {
        let field = DistanceField::new(graph, p);
        out.push_str(label);
        for other in points {
            let _ = write!(out, ",{}", field.to(graph, other));
        }
        out.push('\n');
    }
    out
}
