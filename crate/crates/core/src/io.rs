//! Polygon files.
//!
//! JSON: an object with exactly one of `"vertices": [[x, y], ...]` or
//! `"thetas": [t0, ...]`; other keys are ignored. CSV: one `x,y` vertex per
//! line, with blank lines, `#` comments and an optional `x,y` header skipped.
//! Numbers are written with 17 significant digits, so a write followed by a
//! read reproduces every coordinate bit for bit.

use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;

use crate::angles::Vertex;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum PolygonInput {
    Vertices(Vec<Vertex>),
    Thetas(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    /// Guess from the file extension, falling back to the first non-blank
    /// character of the contents.
    pub fn detect(path: Option<&Path>, text: &str) -> Format {
        match path.and_then(|p| p.extension()).and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => Format::Json,
            Some(ext) if ext.eq_ignore_ascii_case("csv") => Format::Csv,
            _ if text.trim_start().starts_with('{') => Format::Json,
            _ => Format::Csv,
        }
    }
}

#[derive(Deserialize)]
struct PolygonFile {
    vertices: Option<Vec<Vertex>>,
    thetas: Option<Vec<f64>>,
}

pub fn parse(text: &str, format: Format) -> Result<PolygonInput> {
    match format {
        Format::Json => parse_json(text),
        Format::Csv => parse_csv(text).map(PolygonInput::Vertices),
    }
}

pub fn parse_json(text: &str) -> Result<PolygonInput> {
    let file: PolygonFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    match (file.vertices, file.thetas) {
        (Some(v), None) => Ok(PolygonInput::Vertices(v)),
        (None, Some(t)) => Ok(PolygonInput::Thetas(t)),
        (Some(_), Some(_)) => Err(Error::Parse(
            "\"vertices\" and \"thetas\" are mutually exclusive".into(),
        )),
        (None, None) => Err(Error::Parse("expected a \"vertices\" or \"thetas\" key".into())),
    }
}

pub fn parse_csv(text: &str) -> Result<Vec<Vertex>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if out.is_empty() && fields.len() == 2 && fields[0].eq_ignore_ascii_case("x") {
            continue;
        }
        let bad = || Error::Parse(format!("line {}: expected `x,y`, got {line:?}", lineno + 1));
        let [x, y] = fields[..] else { return Err(bad()) };
        let x: f64 = x.parse().map_err(|_| bad())?;
        let y: f64 = y.parse().map_err(|_| bad())?;
        out.push(Vertex::new(x, y)?);
    }
    Ok(out)
}

/// 17 significant digits.
pub fn format_number(value: f64) -> String {
    format!("{value:.16e}")
}

/// JSON array `[[x, y], ...]`, one vertex per line at the given indent.
pub fn json_vertex_list(vertices: &[Vertex], indent: &str) -> String {
    let mut out = String::from("[");
    for (i, v) in vertices.iter().enumerate() {
        let sep = if i == 0 { "" } else { "," };
        let _ = write!(
            out,
            "{sep}\n{indent}  [{}, {}]",
            format_number(v.x()),
            format_number(v.y())
        );
    }
    let _ = write!(out, "\n{indent}]");
    out
}

pub fn write_json(input: &PolygonInput) -> String {
    match input {
        PolygonInput::Vertices(vs) => format!("{{\n  \"vertices\": {}\n}}\n", json_vertex_list(vs, "  ")),
        PolygonInput::Thetas(ts) => {
            let mut out = String::from("{\n  \"thetas\": [");
            for (i, t) in ts.iter().enumerate() {
                let sep = if i == 0 { "" } else { "," };
                let _ = write!(out, "{sep}\n    {}", format_number(*t));
            }
            out.push_str("\n  ]\n}\n");
            out
        }
    }
}

pub fn write_csv(vertices: &[Vertex]) -> String {
    let mut out = String::from("x,y\n");
    for v in vertices {
        let _ = writeln!(out, "{},{}", format_number(v.x()), format_number(v.y()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn json_forms() {
        let v = parse_json(r#"{"vertices": [[0, 0], [1, 0], [1, 1]]}"#).unwrap();
        assert_eq!(
            v,
            PolygonInput::Vertices(vec![
                Vertex::new(0.0, 0.0).unwrap(),
                Vertex::new(1.0, 0.0).unwrap(),
                Vertex::new(1.0, 1.0).unwrap(),
            ])
        );
        let t = parse_json(r#"{"thetas": [0.5, 0.5, -1.0], "note": "ignored"}"#).unwrap();
        assert_eq!(t, PolygonInput::Thetas(vec![0.5, 0.5, -1.0]));
        assert!(parse_json(r#"{"thetas": [1], "vertices": [[0, 0]]}"#).is_err());
        assert!(parse_json(r#"{}"#).is_err());
        assert!(parse_json(r#"{"vertices": [[0, 0, 1]]}"#).is_err());
    }

    #[test]
    fn csv_form() {
        let text = "# square\nx,y\n0,0\n1, 0\n\n1,1\n0,1\n";
        assert_eq!(parse_csv(text).unwrap().len(), 4);
        assert!(parse_csv("0,0\n1\n").is_err());
        assert!(parse_csv("0,nan\n").is_err());
    }

    #[test]
    fn format_detection() {
        assert_eq!(Format::detect(Some(Path::new("a.JSON")), ""), Format::Json);
        assert_eq!(Format::detect(Some(Path::new("a.csv")), "{"), Format::Csv);
        assert_eq!(Format::detect(None, "  {\"thetas\": []}"), Format::Json);
        assert_eq!(Format::detect(None, "0,1"), Format::Csv);
    }

    fn finite() -> impl Strategy<Value = f64> {
        prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO
    }

    proptest! {
        #[test]
        fn json_round_trip_is_bit_exact(coords in proptest::collection::vec((finite(), finite()), 1..8)) {
            let vs: Vec<Vertex> = coords.iter().map(|&(x, y)| Vertex::new(x, y).unwrap()).collect();
            let back = parse_json(&write_json(&PolygonInput::Vertices(vs.clone()))).unwrap();
            let PolygonInput::Vertices(back) = back else { panic!("wrong form") };
            for (a, b) in vs.iter().zip(&back) {
                prop_assert_eq!(a.x().to_bits(), b.x().to_bits());
                prop_assert_eq!(a.y().to_bits(), b.y().to_bits());
            }
            let csv = parse_csv(&write_csv(&vs)).unwrap();
            for (a, b) in vs.iter().zip(&csv) {
                prop_assert_eq!(a.x().to_bits(), b.x().to_bits());
                prop_assert_eq!(a.y().to_bits(), b.y().to_bits());
            }
        }

        #[test]
        fn theta_round_trip_is_bit_exact(ts in proptest::collection::vec(finite(), 1..8)) {
            let back = parse_json(&write_json(&PolygonInput::Thetas(ts.clone()))).unwrap();
            let PolygonInput::Thetas(back) = back else { panic!("wrong form") };
            let bits: Vec<u64> = back.iter().map(|t| t.to_bits()).collect();
            prop_assert_eq!(bits, ts.iter().map(|t| t.to_bits()).collect::<Vec<_>>());
        }
    }
}
