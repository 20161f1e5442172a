use std::fmt::Write as _;

use crate::persistence::{Diagram, DiagramPoint, PersistenceError, PointKind};
use crate::rational::Rational;

pub const DIAGRAM_HEADER: &str = "dim,birth,death,subtype";

/// Rows `dim,birth,death,subtype` with exact coordinates, after a header.
pub fn write_diagram_csv(d: &Diagram) -> String {
    let mut out = format!("{DIAGRAM_HEADER}\n");
    for p in d.points() {
        let _ = writeln!(out, "{},{},{},{}", p.dim, p.birth, p.death, p.kind.tag());
    }
    out
}

/// Reads diagram rows. The header and the subtype column are optional; an
/// absent or unrecognised subtype is read as ordinary.
pub fn parse_diagram_csv(text: &str) -> Result<Diagram, PersistenceError> {
    let mut points = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with("dim") {
            continue;
        }
        let err = |message: String| PersistenceError::Csv { line: i + 1, message };
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if !(3..=4).contains(&fields.len()) {
            return Err(err(format!("expected 3 or 4 fields, found {}", fields.len())));
        }
        let dim: u8 = fields[0]
            .parse()
            .map_err(|_| err(format!("bad dimension `{}`", fields[0])))?;
        if dim > 1 {
            return Err(err(format!("dimension {dim} not supported")));
        }
        let coord = |s: &str| -> Result<Rational, PersistenceError> {
            let r: Rational = s.parse().map_err(|_| err(format!("bad coordinate `{s}`")))?;
            if r.is_negative() {
                return Err(err(format!("negative coordinate {r}")));
            }
            Ok(r)
        };
        let kind = fields
            .get(3)
            .and_then(|t| PointKind::from_tag(t))
            .unwrap_or(PointKind::Ordinary);
        points.push(DiagramPoint::new(dim, coord(fields[1])?, coord(fields[2])?, kind));
    }
    Ok(Diagram::new(points))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn round_trip() {
        let d = Diagram::new(vec![
            DiagramPoint::new(0, q("0"), q("3/2"), PointKind::ExtendedPlus),
            DiagramPoint::new(1, q("1/3"), q("0"), PointKind::ExtendedMinus),
        ]);
        let text = write_diagram_csv(&d);
        assert!(text.starts_with("dim,birth,death,subtype\n0,0,1.5,extended+\n"));
        let back = parse_diagram_csv(&text).unwrap();
        assert_eq!(back, d);
        assert_eq!(back.points()[1].kind, PointKind::ExtendedMinus);
    }

    #[test]
    fn subtype_is_optional() {
        let d = parse_diagram_csv("0,0,2\n1,1.5,0\n").unwrap();
        assert_eq!(d.len(), 2);
    }

    #[test]
    fn errors_carry_lines() {
        let e = parse_diagram_csv("dim,birth,death\n0,0,x\n").unwrap_err();
        assert_eq!(
            e,
            PersistenceError::Csv {
                line: 2,
                message: "bad coordinate `x`".into()
            }
        );
        assert!(parse_diagram_csv("2,0,1\n").is_err());
        assert!(parse_diagram_csv("0,0\n").is_err());
    }
}
