//! A^2-orbits of corank-1 2-jets.
//!
//! For a jet `(x, y, f1, f2, f3)` let `p, q, r` be the columns of `z^2`,
//! `xz` and `yz` coefficients and `alpha = [p q r]`. Target row operations
//! act on `alpha` by left multiplication, `z -> lambda z + a x + b y` sends
//! `p -> lambda^2 p` and `(q, r) -> lambda (q, r) + 2 lambda p (a, b)`, and
//! linear changes of `(x, y)` mix `q` and `r`. The orbit is therefore
//! decided by `rank(alpha)` and whether `p` vanishes.

use std::fmt;

use nalgebra::DMatrix;

use crate::error::{GeometryError, Result};
use crate::jet::{ManifoldClass, MongeJet};
use crate::linalg::{rank_with_tolerance, DEFAULT_TOL};
use crate::locus::{classify_locus_with_tolerance, LocusType};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orbit {
    /// `(x, y, xz, yz, z^2)`
    Best,
    /// `(x, y, z^2, xz, 0)`
    SquareMixed,
    /// `(x, y, xz, yz, 0)`
    Mixed,
    /// `(x, y, z^2, 0, 0)`
    Square,
    /// `(x, y, xz, 0, 0)`
    SingleMixed,
    /// `(x, y, 0, 0, 0)`
    Zero,
}

impl Orbit {
    pub const ALL: [Orbit; 6] = [
        Orbit::Best,
        Orbit::SquareMixed,
        Orbit::Mixed,
        Orbit::Square,
        Orbit::SingleMixed,
        Orbit::Zero,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Orbit::Best => "(x,y,xz,yz,z^2)",
            Orbit::SquareMixed => "(x,y,z^2,xz,0)",
            Orbit::Mixed => "(x,y,xz,yz,0)",
            Orbit::Square => "(x,y,z^2,0,0)",
            Orbit::SingleMixed => "(x,y,xz,0,0)",
            Orbit::Zero => "(x,y,0,0,0)",
        }
    }

    /// Normal-form terms `(coordinate, monomial)` of the representative.
    pub fn normal_form_terms(self) -> &'static [(usize, &'static str)] {
        match self {
            Orbit::Best => &[(3, "x*z"), (4, "y*z"), (5, "z^2")],
            Orbit::SquareMixed => &[(3, "z^2"), (4, "x*z")],
            Orbit::Mixed => &[(3, "x*z"), (4, "y*z")],
            Orbit::Square => &[(3, "z^2")],
            Orbit::SingleMixed => &[(3, "x*z")],
            Orbit::Zero => &[],
        }
    }

    /// The representative jet `(x, y, ...)` in `R^5`.
    pub fn normal_form(self) -> MongeJet {
        let terms: Vec<(usize, &str, f64)> = self
            .normal_form_terms()
            .iter()
            .map(|&(c, m)| (c, m, 1.0))
            .collect();
        MongeJet::from_terms(
            crate::jet::JetShape::new(3, 5, 1).expect("valid shape"),
            &terms,
        )
        .expect("normal forms are well formed")
    }
}

impl fmt::Display for Orbit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Orbit of a corank-1 `(3, 5)` jet with the data that decided it.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitLabel {
    pub orbit: Orbit,
    pub rank_alpha: usize,
    pub p_zero: bool,
    /// Columns `(z^2, xz, yz)` of polynomial coefficients.
    pub alpha: DMatrix<f64>,
}

impl OrbitLabel {
    pub fn det_alpha(&self) -> f64 {
        crate::linalg::det3(&self.alpha)
    }
}

pub fn alpha_matrix(jet: &MongeJet) -> DMatrix<f64> {
    // Polynomial coefficients: z^2 -> Q[2][2], xz -> 2 Q[0][2], yz -> 2 Q[1][2].
    DMatrix::from_fn(jet.normal_dim(), 3, |i, c| {
        let q = jet.quad(i);
        match c {
            0 => q[(2, 2)],
            1 => 2.0 * q[(0, 2)],
            _ => 2.0 * q[(1, 2)],
        }
    })
}

pub fn classify_orbit(jet: &MongeJet) -> Result<OrbitLabel> {
    classify_orbit_with_tolerance(jet, DEFAULT_TOL)
}

pub fn classify_orbit_with_tolerance(jet: &MongeJet, tol: f64) -> Result<OrbitLabel> {
    if jet.class() != ManifoldClass::Sing3Manifold || jet.ambient_dim() != 5 {
        return Err(GeometryError::WrongManifoldClass {
            operation: "classify_orbit",
            found: format!("{} in R^{}", jet.class(), jet.ambient_dim()),
        });
    }
    let alpha = alpha_matrix(jet);
    let rank = rank_with_tolerance(&alpha, tol)?;
    let largest = crate::linalg::singular_values(&alpha)
        .first()
        .copied()
        .unwrap_or(0.0);
    let p_norm = alpha.column(0).norm();
    let p_zero = p_norm <= tol * largest || p_norm == 0.0;
    let orbit = match (rank, p_zero) {
        (3, _) => Orbit::Best,
        (2, false) => Orbit::SquareMixed,
        (2, true) => Orbit::Mixed,
        (1, false) => Orbit::Square,
        (1, true) => Orbit::SingleMixed,
        _ => Orbit::Zero,
    };
    Ok(OrbitLabel {
        orbit,
        rank_alpha: rank,
        p_zero,
        alpha,
    })
}

/// Orbit of a corank-1 surface jet, read off its curvature parabola.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceOrbit {
    pub locus_type: LocusType,
    pub label: &'static str,
}

pub fn classify_surface_jet(jet: &MongeJet) -> Result<SurfaceOrbit> {
    classify_surface_jet_with_tolerance(jet, DEFAULT_TOL)
}

pub fn classify_surface_jet_with_tolerance(jet: &MongeJet, tol: f64) -> Result<SurfaceOrbit> {
    if jet.class() != ManifoldClass::SingSurface {
        return Err(GeometryError::WrongManifoldClass {
            operation: "classify_surface_jet",
            found: jet.class().to_string(),
        });
    }
    let locus_type = classify_locus_with_tolerance(jet, tol).degenerate_type;
    let in_r4 = jet.ambient_dim() == 4;
    let label = match (locus_type, in_r4) {
        (LocusType::NondegenerateParabola, true) => "(x,xy,y^2,0)",
        (LocusType::HalfLine, true) => "(x,y^2,0,0)",
        (LocusType::Line, true) => "(x,xy,0,0)",
        (_, true) => "(x,0,0,0)",
        (LocusType::NondegenerateParabola, false) => "(x,y^2,xy)",
        (LocusType::HalfLine, false) => "(x,y^2,0)",
        (LocusType::Line, false) => "(x,xy,0)",
        (_, false) => "(x,0,0)",
    };
    Ok(SurfaceOrbit { locus_type, label })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::JetShape;

    fn jet(n: usize, m: usize, c: usize, terms: &[(usize, &str, f64)]) -> MongeJet {
        MongeJet::from_terms(JetShape::new(n, m, c).unwrap(), terms).unwrap()
    }

    #[test]
    fn normal_forms_map_to_themselves() {
        for orbit in Orbit::ALL {
            assert_eq!(classify_orbit(&orbit.normal_form()).unwrap().orbit, orbit);
        }
    }

    #[test]
    fn perturbed_best_orbit() {
        let j = jet(3, 5, 1, &[(3, "x*z", 1.0), (3, "y^2", 1.0), (4, "y*z", 1.0), (5, "z^2", 1.0)]);
        let label = classify_orbit(&j).unwrap();
        assert_eq!(label.orbit, Orbit::Best);
        assert!(label.det_alpha().abs() > 0.5);
    }

    #[test]
    fn projection_of_the_asymptotic_example() {
        let j = jet(3, 5, 1, &[(3, "x^2", 1.0), (3, "z^2", 1.0), (4, "x*y", 1.0), (4, "x*z", 1.0), (5, "y^2", 1.0)]);
        assert_eq!(classify_orbit(&j).unwrap().orbit, Orbit::SquareMixed);
    }

    #[test]
    fn wrong_class() {
        let j = MongeJet::zero(JetShape::new(3, 6, 0).unwrap());
        assert!(matches!(
            classify_orbit(&j),
            Err(GeometryError::WrongManifoldClass { .. })
        ));
        assert!(classify_surface_jet(&j).is_err());
    }

    #[test]
    fn surface_labels() {
        let nondeg = jet(2, 4, 1, &[(2, "x*y", -2.0), (3, "x^2", 1.0), (4, "y^2", 1.0)]);
        assert_eq!(classify_surface_jet(&nondeg).unwrap().label, "(x,xy,y^2,0)");
        let half = jet(2, 4, 1, &[(2, "y^2", 1.0)]);
        assert_eq!(classify_surface_jet(&half).unwrap().locus_type, LocusType::HalfLine);
        let zero = MongeJet::zero(JetShape::new(2, 4, 1).unwrap());
        assert_eq!(classify_surface_jet(&zero).unwrap().locus_type, LocusType::Point);
    }
}
