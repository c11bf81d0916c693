//! Reading and writing point sets.
//!
//! The file format is plain text: one point per line, coordinates as
//! comma-separated decimal floats. Blank lines and lines starting with `#`
//! are ignored. Coordinates are written with the shortest representation
//! that round-trips, so write followed by read reproduces the exact floats.

use std::io::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::{Point, PointSet};

/// Parses a point set from text. `dim_hint` fixes the expected dimension;
/// without it the first data line decides. An input with no data lines
/// yields an empty set of the hinted dimension (or 1).
pub fn parse_points(text: &str, dim_hint: Option<usize>) -> Result<PointSet> {
    let mut dim = dim_hint;
    let mut points = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut coords = Vec::new();
        for tok in line.split(',') {
            let tok = tok.trim();
            let x: f64 = tok.parse().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("invalid coordinate {tok:?}"),
            })?;
            if !x.is_finite() || !(0.0..=1.0).contains(&x) {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("coordinate {x} outside [0,1]"),
                });
            }
            coords.push(x);
        }
        match dim {
            None => dim = Some(coords.len()),
            Some(d) if d != coords.len() => {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("expected {d} coordinates, found {}", coords.len()),
                });
            }
            Some(_) => {}
        }
        points.push(Point::new(coords));
    }
    Ok(PointSet::new(dim.unwrap_or(1), points))
}

pub fn read_points(path: &Path, dim_hint: Option<usize>) -> Result<PointSet> {
    let text = std::fs::read_to_string(path)?;
    parse_points(&text, dim_hint)
}

/// Renders a point set in the shared text format, with a short comment
/// header. Output is byte-deterministic for a given set.
pub fn format_points(ps: &PointSet) -> String {
    let mut out = String::new();
    out.push_str(&format!("# d={} n={}\n", ps.dim(), ps.len()));
    for p in ps.iter() {
        let row: Vec<String> = p.coords().iter().map(|x| format!("{x}")).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn write_points(path: &Path, ps: &PointSet) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(format_points(ps).as_bytes())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_comments_and_blanks() {
        let text = "# header\n\n0.5,0.25\n  # indented comment\n0,1\n";
        let ps = parse_points(text, None).unwrap();
        assert_eq!(ps.dim(), 2);
        assert_eq!(ps.len(), 2);
        assert_eq!(ps.points()[1].coords(), &[0.0, 1.0]);
    }

    #[test]
    fn empty_input_uses_hint() {
        assert_eq!(parse_points("", None).unwrap().dim(), 1);
        let ps = parse_points("# only comments\n", Some(3)).unwrap();
        assert_eq!(ps.dim(), 3);
        assert!(ps.is_empty());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_points("0.5\nbogus\n", None).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
        let err = parse_points("0.5,0.5\n0.25\n", None).unwrap_err();
        match err {
            Error::Parse { line, message } => {
                assert_eq!(line, 2);
                assert!(message.contains("expected 2"));
            }
            other => panic!("unexpected error {other:?}"),
        }
        let err = parse_points("1.5\n", None).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 1),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn hint_conflicts_are_parse_errors() {
        let err = parse_points("0.5,0.5\n", Some(3)).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn nan_rejected() {
        assert!(parse_points("NaN\n", None).is_err());
    }

    proptest! {
        // Shortest round-trip formatting: write then read is the identity.
        #[test]
        fn roundtrip_exact(flat in proptest::collection::vec(0.0f64..=1.0, 2..40)) {
            let dim = 2;
            let flat = &flat[..flat.len() - flat.len() % dim];
            let ps = PointSet::from_flat(dim, flat);
            let back = parse_points(&format_points(&ps), None).unwrap();
            prop_assert_eq!(back, ps);
        }
    }
}
