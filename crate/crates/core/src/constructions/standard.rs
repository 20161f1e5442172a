use std::fmt;
use std::str::FromStr;

use crate::constructions::ConstructionError;
use crate::graph::{GraphBuilder, MetricGraph};
use crate::rational::Rational;

/// The named families produced by [`make_standard`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StandardGraph {
    Circle(Rational),
    Interval(Rational),
    /// Two vertices joined by three edges.
    Theta(Rational, Rational, Rational),
    /// Self-loop, bar, self-loop.
    Dumbbell(Rational, Rational, Rational),
    /// A center joined to one leaf per length.
    Star(Vec<Rational>),
    /// A path with the given edge lengths.
    Path(Vec<Rational>),
}

impl FromStr for StandardGraph {
    type Err = ConstructionError;

    /// `circle(2)`, `interval(1)`, `theta(1,1,2)`, `dumbbell(2,1,2)`,
    /// `star(1,1,1)`, `path(1,2)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ConstructionError::InvalidParameter(format!("cannot parse `{s}`"));
        let s = s.trim();
        let (name, rest) = s.split_once('(').ok_or_else(bad)?;
        let args = rest.strip_suffix(')').ok_or_else(bad)?;
        let values: Vec<Rational> = args
            .split(',')
            .map(|a| a.trim().parse::<Rational>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad())?;
        let exact = |n: usize| {
            if values.len() == n {
                Ok(())
            } else {
                Err(ConstructionError::InvalidParameter(format!(
                    "{name} takes {n} parameters, got {}",
                    values.len()
                )))
            }
        };
        Ok(match name.trim() {
            "circle" => {
                exact(1)?;
                StandardGraph::Circle(values[0].clone())
            }
            "interval" => {
                exact(1)?;
                StandardGraph::Interval(values[0].clone())
            }
            "theta" => {
                exact(3)?;
                StandardGraph::Theta(values[0].clone(), values[1].clone(), values[2].clone())
            }
            "dumbbell" => {
                exact(3)?;
                StandardGraph::Dumbbell(values[0].clone(), values[1].clone(), values[2].clone())
            }
            "star" => StandardGraph::Star(values),
            "path" => StandardGraph::Path(values),
            other => return Err(ConstructionError::InvalidParameter(format!("unknown family `{other}`"))),
        })
    }
}

impl fmt::Display for StandardGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[Rational]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        match self {
            StandardGraph::Circle(c) => write!(f, "circle({c})"),
            StandardGraph::Interval(l) => write!(f, "interval({l})"),
            StandardGraph::Theta(a, b, c) => write!(f, "theta({a},{b},{c})"),
            StandardGraph::Dumbbell(a, b, c) => write!(f, "dumbbell({a},{b},{c})"),
            StandardGraph::Star(v) => write!(f, "star({})", join(v)),
            StandardGraph::Path(v) => write!(f, "path({})", join(v)),
        }
    }
}

pub fn make_standard(spec: &StandardGraph) -> Result<MetricGraph, ConstructionError> {
    let params: Vec<&Rational> = match spec {
        StandardGraph::Circle(c) | StandardGraph::Interval(c) => vec![c],
        StandardGraph::Theta(a, b, c) | StandardGraph::Dumbbell(a, b, c) => vec![a, b, c],
        StandardGraph::Star(v) | StandardGraph::Path(v) => v.iter().collect(),
    };
    if params.is_empty() {
        return Err(ConstructionError::InvalidParameter(format!("{spec}: no lengths")));
    }
    if let Some(bad) = params.iter().find(|x| !x.is_positive()) {
        return Err(ConstructionError::InvalidParameter(format!(
            "{spec}: nonpositive length {bad}"
        )));
    }
    let mut b = GraphBuilder::new();
    match spec {
        StandardGraph::Circle(c) => {
            b.vertex("o").edge("loop", "o", "o", c.clone());
        }
        StandardGraph::Interval(l) => {
            b.vertex("a").vertex("b").edge("e", "a", "b", l.clone());
        }
        StandardGraph::Theta(x, y, z) => {
            b.vertex("u").vertex("v");
            b.edge("a", "u", "v", x.clone())
                .edge("b", "u", "v", y.clone())
                .edge("c", "u", "v", z.clone());
        }
        StandardGraph::Dumbbell(l1, bar, l2) => {
            b.vertex("p").vertex("x");
            b.edge("l1", "p", "p", l1.clone())
                .edge("bar", "p", "x", bar.clone())
                .edge("l2", "x", "x", l2.clone());
        }
        StandardGraph::Star(lengths) => {
            b.vertex("c");
            for (i, l) in lengths.iter().enumerate() {
                let leaf = format!("l{}", i + 1);
                b.vertex(leaf.clone()).edge(format!("e{}", i + 1), "c", leaf, l.clone());
            }
        }
        StandardGraph::Path(lengths) => {
            b.vertex("v0");
            for (i, l) in lengths.iter().enumerate() {
                b.vertex(format!("v{}", i + 1)).edge(
                    format!("e{}", i + 1),
                    format!("v{i}"),
                    format!("v{}", i + 1),
                    l.clone(),
                );
            }
        }
    }
    Ok(b.build()?)
}

/// Shorthand for tests and examples: panics on a malformed name.
pub fn standard(name: &str) -> MetricGraph {
    let spec: StandardGraph = name.parse().unwrap_or_else(|e| panic!("{e}"));
    make_standard(&spec).unwrap_or_else(|e| panic!("{e}"))
}
