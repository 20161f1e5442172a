use std::fmt::Write as _;

use graph_barcode::{Diagram, Rational};

const SIZE: f64 = 320.0;
const MARGIN: f64 = 40.0;

/// Scatter plot of a diagram with the diagonal and three ticks per axis.
/// Dimension 0 is drawn in blue, dimension 1 in red.
pub fn diagram_svg(d: &Diagram, title: &str) -> String {
    let top = d
        .points()
        .iter()
        .flat_map(|p| [p.birth.clone(), p.death.clone()])
        .max()
        .filter(Rational::is_positive)
        .map(|r| r.to_f64())
        .unwrap_or(1.0);
    let span = SIZE - 2.0 * MARGIN;
    let x = |v: f64| MARGIN + v / top * span;
    let y = |v: f64| SIZE - MARGIN - v / top * span;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, "<title>{}</title>", escape(title));
    let (lo, hi) = (x(0.0), x(top));
    let _ = writeln!(
        out,
        r#"<line x1="{lo}" y1="{}" x2="{hi}" y2="{}" stroke="black"/>"#,
        y(0.0),
        y(0.0)
    );
    let _ = writeln!(
        out,
        r#"<line x1="{lo}" y1="{}" x2="{lo}" y2="{}" stroke="black"/>"#,
        y(0.0),
        y(top)
    );
    let _ = writeln!(
        out,
        r#"<line x1="{lo}" y1="{}" x2="{hi}" y2="{}" stroke="gray" stroke-dasharray="4 3"/>"#,
        y(0.0),
        y(top)
    );
    for t in [0.0, top / 2.0, top] {
        let label = format!("{t:.3}");
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="10" text-anchor="middle">{label}</text>"#,
            x(t),
            y(0.0) + 14.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="10" text-anchor="end">{label}</text>"#,
            lo - 4.0,
            y(t) + 3.0
        );
    }
    for p in d.points() {
        let colour = if p.dim == 0 { "#1f77b4" } else { "#d62728" };
        let _ = writeln!(
            out,
            r#"<circle cx="{:.3}" cy="{:.3}" r="3" fill="{colour}"/>"#,
            x(p.birth.to_f64()),
            y(p.death.to_f64())
        );
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use graph_barcode::persistence::{DiagramPoint, PointKind};

    #[test]
    fn one_circle_per_point() {
        let d = Diagram::new(vec![
            DiagramPoint::new(0, Rational::zero(), Rational::new(3, 2), PointKind::ExtendedPlus),
            DiagramPoint::new(1, Rational::new(3, 2), Rational::zero(), PointKind::ExtendedMinus),
        ]);
        let svg = diagram_svg(&d, "a<b");
        assert_eq!(svg.matches("<circle").count(), 2);
        assert!(svg.contains("a&lt;b"));
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn empty_diagram_still_draws_axes() {
        let svg = diagram_svg(&Diagram::default(), "empty");
        assert_eq!(svg.matches("<circle").count(), 0);
        assert_eq!(svg.matches("<line").count(), 3);
    }
}
