//! CSV and OBJ writers for sampled loci.

use std::io::{self, Write};

use crate::error::GeometryError;
use crate::locus::LocusSample;

/// One row per sample: `theta,phi_or_c,n1,...,nk`.
pub fn write_csv<W: Write>(sample: &LocusSample, out: &mut W) -> io::Result<()> {
    let mut header = String::from("theta,phi_or_c");
    for k in 1..=sample.normal_dim {
        header.push_str(&format!(",n{k}"));
    }
    writeln!(out, "{header}")?;
    for ((t, s), p) in sample.params.iter().zip(&sample.points) {
        write!(out, "{t:?},{s:?}")?;
        for v in p.iter() {
            write!(out, ",{v:?}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

#[derive(Debug)]
pub enum ExportError {
    Geometry(GeometryError),
    Io(io::Error),
}

impl std::fmt::Display for ExportError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExportError::Geometry(e) => write!(f, "{e}"),
            ExportError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ExportError {}

impl From<io::Error> for ExportError {
    fn from(e: io::Error) -> Self {
        ExportError::Io(e)
    }
}

/// Wavefront OBJ: one `v` line per sample (normal coordinates padded to
/// three with zeros) and quad faces over two-parameter grids, wrapping
/// around in theta. Loci in more than three normal dimensions are refused.
pub fn write_obj<W: Write>(sample: &LocusSample, out: &mut W) -> Result<(), ExportError> {
    if sample.normal_dim > 3 {
        return Err(ExportError::Geometry(GeometryError::Unsupported(format!(
            "OBJ export of a locus in {} normal dimensions",
            sample.normal_dim
        ))));
    }
    for p in &sample.points {
        let mut c = [0.0; 3];
        for (k, v) in p.iter().enumerate() {
            c[k] = *v;
        }
        writeln!(out, "v {:?} {:?} {:?}", c[0], c[1], c[2])?;
    }
    let (rows, cols) = sample.grid_shape;
    if rows >= 2 && cols >= 2 {
        let wrap = sample.periodic_theta() && cols >= 3;
        let last_col = if wrap { cols } else { cols - 1 };
        let index = |r: usize, c: usize| r * cols + (c % cols) + 1;
        for r in 0..rows - 1 {
            for c in 0..last_col {
                writeln!(
                    out,
                    "f {} {} {} {}",
                    index(r, c),
                    index(r, c + 1),
                    index(r + 1, c + 1),
                    index(r + 1, c)
                )?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::{JetShape, MongeJet};
    use crate::locus::{sample_locus, GridSpec};

    #[test]
    fn csv_header_and_rows() {
        let jet = MongeJet::from_terms(JetShape::new(2, 4, 1).unwrap(), &[(2, "y^2", 1.0)]).unwrap();
        let sample = sample_locus(&jet, &GridSpec::new(3, 1, 1.0)).unwrap();
        let mut buf = Vec::new();
        write_csv(&sample, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "theta,phi_or_c,n1,n2,n3");
        assert_eq!(lines[1], "0.0,-1.0,2.0,0.0,0.0");
        assert_eq!(lines.len(), 4);
    }

    #[test]
    fn obj_faces_wrap() {
        let jet = MongeJet::from_terms(JetShape::new(3, 5, 1).unwrap(), &[(3, "z^2", 1.0), (4, "x*z", 1.0)]).unwrap();
        let sample = sample_locus(&jet, &GridSpec::new(4, 3, 1.0)).unwrap();
        let mut buf = Vec::new();
        write_obj(&sample, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 12);
        assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 8);
        assert!(text.contains("f 4 1 5 8"));
    }

    #[test]
    fn obj_refuses_high_codimension() {
        let jet = MongeJet::zero(JetShape::new(2, 6, 0).unwrap());
        let sample = sample_locus(&jet, &GridSpec::new(4, 1, 1.0)).unwrap();
        assert!(matches!(
            write_obj(&sample, &mut Vec::new()),
            Err(ExportError::Geometry(GeometryError::Unsupported(_)))
        ));
    }
}
