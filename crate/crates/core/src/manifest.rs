//! Jet manifests: a small RON document naming the shape and the quadratic
//! terms of each ambient coordinate.
//!
//! ```ron
//! (
//!     source_dim: 3,
//!     ambient_dim: 5,
//!     corank: 1,
//!     quadratic: [
//!         (3, "x^2", 1),
//!         (3, "y*z", -2),
//!         (4, "z^2", "1/2"),
//!     ],
//! )
//! ```
//!
//! Coordinates are 1-based. Coefficients are numbers or strings holding a
//! decimal or a rational `p/q`. `vars` and `coords` optionally rename the
//! source variables and ambient coordinates.

use std::fmt;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::GeometryError;
use crate::jet::{parse_monomial, JetShape, MongeJet};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coefficient {
    Number(f64),
    Text(String),
}

impl Coefficient {
    pub fn value(&self) -> Result<f64, String> {
        match self {
            Coefficient::Number(v) => Ok(*v),
            Coefficient::Text(t) => parse_rational(t),
        }
    }
}

/// Parse `3`, `-0.25`, `1e-3` or `p/q` (nearest double to the quotient).
pub fn parse_rational(text: &str) -> Result<f64, String> {
    let t = text.trim();
    let number = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| format!("invalid number `{s}` in `{text}`"))
    };
    let value = match t.split_once('/') {
        Some((p, q)) => {
            let (p, q) = (number(p)?, number(q)?);
            if q == 0.0 {
                return Err(format!("zero denominator in `{text}`"));
            }
            p / q
        }
        None => number(t)?,
    };
    if !value.is_finite() {
        return Err(format!("non-finite coefficient `{text}`"));
    }
    Ok(value)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub source_dim: usize,
    pub ambient_dim: usize,
    pub corank: usize,
    #[serde(default)]
    pub vars: Option<Vec<String>>,
    #[serde(default)]
    pub coords: Option<Vec<String>>,
    #[serde(default)]
    pub quadratic: Vec<(usize, String, Coefficient)>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ManifestError {
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    Geometry(GeometryError),
}

impl fmt::Display for ManifestError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ManifestError::Parse {
                line,
                column,
                message,
            } => write!(f, "parse error at line {line}, column {column}: {message}"),
            ManifestError::Geometry(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ManifestError {}

impl From<GeometryError> for ManifestError {
    fn from(e: GeometryError) -> Self {
        ManifestError::Geometry(e)
    }
}

/// Line and column (1-based) of the `nth` occurrence of `needle`, falling
/// back to the start of the document.
fn locate(text: &str, needle: &str, nth: usize) -> (usize, usize) {
    let Some((offset, _)) = text.match_indices(needle).nth(nth) else {
        return (1, 1);
    };
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, column)
}

pub fn parse_manifest(text: &str) -> Result<Manifest, ManifestError> {
    ron::from_str::<Manifest>(text).map_err(|e| ManifestError::Parse {
        line: e.span.start.line,
        column: e.span.start.col,
        message: e.code.to_string(),
    })
}

/// Parse a manifest and build its jet. Term-level problems (unknown
/// variables, bad rationals, linear terms off the identity) are reported at
/// the position of the offending term.
pub fn jet_from_str(text: &str) -> Result<MongeJet, ManifestError> {
    let manifest = parse_manifest(text)?;
    manifest_to_jet(&manifest, text)
}

fn manifest_to_jet(manifest: &Manifest, text: &str) -> Result<MongeJet, ManifestError> {
    let shape = JetShape::new(manifest.source_dim, manifest.ambient_dim, manifest.corank)?;
    let vars = manifest
        .vars
        .clone()
        .unwrap_or_else(|| shape.default_var_names());
    if vars.len() != shape.source_dim {
        let (line, column) = locate(text, "vars", 0);
        return Err(ManifestError::Parse {
            line,
            column,
            message: format!(
                "{} variable names for source dimension {}",
                vars.len(),
                shape.source_dim
            ),
        });
    }
    let mut seen: Vec<(String, usize)> = Vec::new();
    let mut terms = Vec::with_capacity(manifest.quadratic.len());
    for (coord, monomial, coefficient) in &manifest.quadratic {
        let quoted = format!("\"{monomial}\"");
        let nth = match seen.iter_mut().find(|(m, _)| *m == quoted) {
            Some((_, k)) => {
                *k += 1;
                *k
            }
            None => {
                seen.push((quoted.clone(), 0));
                0
            }
        };
        let fail = |message: String| {
            let (line, column) = locate(text, &quoted, nth);
            ManifestError::Parse {
                line,
                column,
                message,
            }
        };
        parse_monomial(monomial, &vars).map_err(fail)?;
        let value = coefficient.value().map_err(fail)?;
        if *coord == 0 || *coord > shape.ambient_dim {
            return Err(fail(format!(
                "coordinate {coord} outside 1..={}",
                shape.ambient_dim
            )));
        }
        terms.push((*coord, monomial.clone(), value));
    }
    let jet = MongeJet::from_terms_with_vars(shape, &terms, &vars)?;
    match &manifest.coords {
        Some(coords) => {
            let vars = jet.var_names().to_vec();
            Ok(jet.with_names(vars, coords.clone())?)
        }
        None => Ok(jet),
    }
}

/// Serialize a jet as a manifest. Coefficients are written with Rust's
/// shortest round-trip formatting, so reading the result back gives the same
/// jet bit for bit.
pub fn write_manifest(jet: &MongeJet) -> String {
    let shape = jet.shape();
    let quote = |names: &[String]| {
        names
            .iter()
            .map(|n| format!("\"{n}\""))
            .collect::<Vec<_>>()
            .join(", ")
    };
    let mut out = String::new();
    let _ = writeln!(out, "(");
    let _ = writeln!(out, "    source_dim: {},", shape.source_dim);
    let _ = writeln!(out, "    ambient_dim: {},", shape.ambient_dim);
    let _ = writeln!(out, "    corank: {},", shape.corank);
    let _ = writeln!(out, "    vars: Some([{}]),", quote(jet.var_names()));
    let _ = writeln!(out, "    coords: Some([{}]),", quote(jet.coord_names()));
    let _ = writeln!(out, "    quadratic: [");
    for (coord, monomial, value) in jet.terms() {
        let _ = writeln!(out, "        ({coord}, \"{monomial}\", {value:?}),");
    }
    let _ = writeln!(out, "    ],");
    let _ = writeln!(out, ")");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const CYCLIC: &str = r#"(
    source_dim: 3,
    ambient_dim: 5,
    corank: 1,
    quadratic: [
        (3, "x^2", 1),
        (3, "y*z", -2),
        (4, "y^2", 1),
        (4, "x*z", -2),
        (5, "z^2", 1),
        (5, "x*y", -2.0),
    ],
)"#;

    #[test]
    fn parses_and_displays() {
        let jet = jet_from_str(CYCLIC).unwrap();
        assert_eq!(jet.to_string(), "(x, y, x^2 - 2*y*z, -2*x*z + y^2, -2*x*y + z^2)");
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("1/3").unwrap(), 1.0 / 3.0);
        assert_eq!(parse_rational(" -7 / 2 ").unwrap(), -3.5);
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn round_trip_is_exact() {
        let text = r#"(source_dim: 3, ambient_dim: 6, corank: 0,
            quadratic: [(4, "x*y", 0.70710678118654757), (5, "x*z", "1/3"), (6, "z^2", -1e-300)])"#;
        let jet = jet_from_str(text).unwrap();
        let again = jet_from_str(&write_manifest(&jet)).unwrap();
        assert_eq!(again, jet);
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = jet_from_str("(\n  source_dim: 3,\n  ambient_dim: ,\n)").unwrap_err();
        match err {
            ManifestError::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_variable_is_located() {
        let text = "(\n source_dim: 2,\n ambient_dim: 4,\n corank: 1,\n quadratic: [\n  (2, \"w^2\", 1),\n ],\n)";
        match jet_from_str(text).unwrap_err() {
            ManifestError::Parse { line, column, .. } => assert_eq!((line, column), (6, 7)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn empty_quadratic_is_the_zero_jet() {
        let jet = jet_from_str("(source_dim: 3, ambient_dim: 5, corank: 1)").unwrap();
        assert!(jet.is_zero());
    }

    #[test]
    fn geometry_errors_pass_through() {
        let err = jet_from_str("(source_dim: 3, ambient_dim: 5, corank: 1, quadratic: [(1, \"x^2\", 1)])")
            .unwrap_err();
        assert!(matches!(
            err,
            ManifestError::Geometry(GeometryError::QuadraticOnTangentCoordinate { .. })
        ));
    }
}
