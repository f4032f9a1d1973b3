//! Polygon text format: one vertex per line, two whitespace-separated
//! fields, each an integer or `p/q` with `q > 0`. Lines starting with `#`
//! are comments. Vertex order in the file is polygon order. Writing is
//! canonical, so write-read-write round-trips are byte-identical.

use std::str::FromStr;

use crate::error::Error;
use crate::polygon::{MomentPolygon, Point};
use crate::rational::Rational;

/// Parses the polygon text format.
pub fn read_polygon(text: &str) -> Result<MomentPolygon, Error> {
    let mut vertices = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let (x, y) = match (fields.next(), fields.next(), fields.next()) {
            (Some(x), Some(y), None) => (x, y),
            _ => {
                return Err(Error::ParsePolygon {
                    line: idx + 1,
                    message: format!("expected two fields, got `{line}`"),
                })
            }
        };
        let parse = |s: &str| {
            Rational::from_str(s).map_err(|e| Error::ParsePolygon {
                line: idx + 1,
                message: e.to_string(),
            })
        };
        vertices.push(Point::new(parse(x)?, parse(y)?));
    }
    if vertices.is_empty() {
        return Err(Error::ParsePolygon { line: 0, message: "no vertices found".into() });
    }
    MomentPolygon::new(vertices)
}

/// Canonical writer for the polygon text format.
pub fn write_polygon(p: &MomentPolygon) -> String {
    let mut out = String::new();
    for v in p.vertices() {
        out.push_str(&format!("{} {}\n", v.x, v.y));
    }
    out
}
