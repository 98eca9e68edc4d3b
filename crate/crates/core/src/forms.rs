//! First and second fundamental forms at the origin of a Monge-form jet.

use nalgebra::{DMatrix, DVector};

use crate::error::{GeometryError, Result};
use crate::jet::{ManifoldClass, MongeJet, ProjectiveDirection};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Signature {
    Riemannian,
    DegeneratePseudo,
}

/// Coefficients `E[a][b] = <df(e_a), df(e_b)>` of the first fundamental form.
#[derive(Debug, Clone, PartialEq)]
pub struct FirstForm {
    pub matrix: DMatrix<f64>,
    pub signature: Signature,
}

impl FirstForm {
    pub fn eval(&self, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
        (u.transpose() * &self.matrix * v)[0]
    }
}

pub fn first_form(jet: &MongeJet) -> FirstForm {
    let l = jet.linear_part();
    let matrix = l.transpose() * l;
    let signature = if jet.corank() == 0 {
        Signature::Riemannian
    } else {
        Signature::DegeneratePseudo
    };
    FirstForm { matrix, signature }
}

/// Column layout of the second-form matrix: pairs of source indices whose
/// mixed second derivative fills the column. Surfaces use `(l, m, n)`,
/// 3-manifolds `(l, m, n, p, q, r)` = `(xx, xy, yy, zz, xz, yz)`.
pub fn monomial_columns(source_dim: usize) -> &'static [(usize, usize)] {
    match source_dim {
        2 => &[(0, 0), (0, 1), (1, 1)],
        _ => &[(0, 0), (0, 1), (1, 1), (2, 2), (0, 2), (1, 2)],
    }
}

pub fn column_names(source_dim: usize) -> &'static [&'static str] {
    match source_dim {
        2 => &["l", "m", "n"],
        _ => &["l", "m", "n", "p", "q", "r"],
    }
}

/// Second fundamental form against the ambient normal axes: one row per
/// normal coordinate, one column per second derivative.
#[derive(Debug, Clone, PartialEq)]
pub struct SecondForm {
    pub matrix: DMatrix<f64>,
    pub source_dim: usize,
}

impl SecondForm {
    /// Coefficient vector (over the normal frame) of a named column.
    pub fn column(&self, name: &str) -> Option<DVector<f64>> {
        let idx = column_names(self.source_dim).iter().position(|c| *c == name)?;
        Some(self.matrix.column(idx).into_owned())
    }

    /// `II(u, v)` read off the coefficient matrix.
    pub fn eval(&self, u: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
        let weights = DVector::from_iterator(
            self.matrix.ncols(),
            monomial_columns(self.source_dim).iter().map(|&(a, b)| {
                if a == b {
                    u[a] * v[a]
                } else {
                    u[a] * v[b] + u[b] * v[a]
                }
            }),
        );
        &self.matrix * weights
    }

    pub fn rank(&self, tol: f64) -> usize {
        crate::linalg::rank_with_tolerance(&self.matrix, tol).unwrap_or(0)
    }
}

pub fn second_form(jet: &MongeJet) -> SecondForm {
    let cols = monomial_columns(jet.source_dim());
    let matrix = DMatrix::from_fn(jet.normal_dim(), cols.len(), |i, c| {
        let (a, b) = cols[c];
        2.0 * jet.quad(i)[(a, b)]
    });
    SecondForm {
        matrix,
        source_dim: jet.source_dim(),
    }
}

/// `II(u, v)` by direct contraction with the second derivative matrices.
pub fn second_form_value(jet: &MongeJet, u: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
    DVector::from_iterator(
        jet.normal_dim(),
        jet.quads().iter().map(|q| 2.0 * (u.transpose() * q * v)[0]),
    )
}

/// The curvature map `eta(u) = II(u, u)`.
pub fn eta(jet: &MongeJet, u: &DVector<f64>) -> DVector<f64> {
    second_form_value(jet, u, u)
}

/// `II(u, v)` for two tangent directions given by their representatives.
#[allow(non_snake_case)]
pub fn evaluate_II(
    jet: &MongeJet,
    u: &ProjectiveDirection,
    v: &ProjectiveDirection,
) -> Result<DVector<f64>> {
    let n = jet.source_dim();
    if u.len() != n || v.len() != n {
        return Err(GeometryError::DimensionMismatch(format!(
            "directions of length {} and {} for source dimension {n}",
            u.len(),
            v.len()
        )));
    }
    Ok(second_form_value(jet, u.components(), v.components()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitTangentKind {
    Circle,
    Sphere,
    LinePair,
    Cylinder,
}

/// The set `C_q` of unit tangent vectors, `I(u, u) = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitTangentSet {
    pub kind: UnitTangentKind,
}

impl UnitTangentSet {
    pub fn of(jet: &MongeJet) -> Self {
        let kind = match jet.class() {
            ManifoldClass::RegSurface => UnitTangentKind::Circle,
            ManifoldClass::Reg3Manifold => UnitTangentKind::Sphere,
            ManifoldClass::SingSurface => UnitTangentKind::LinePair,
            ManifoldClass::Sing3Manifold => UnitTangentKind::Cylinder,
        };
        Self { kind }
    }

    /// Human-readable parametrization.
    pub fn describe(&self) -> &'static str {
        match self.kind {
            UnitTangentKind::Circle => "(cos t, sin t), t in [0, 2pi)",
            UnitTangentKind::Sphere => {
                "(sin phi cos theta, sin phi sin theta, cos phi), theta in [0, 2pi), phi in [0, pi]"
            }
            UnitTangentKind::LinePair => "(+-1, t), t in R",
            UnitTangentKind::Cylinder => "(cos theta, sin theta, c), theta in [0, 2pi), c in R",
        }
    }

    /// Point of the set at parameters `(s, t)`; one-parameter sets ignore `t`
    /// except the line pair, which uses `t` as the height.
    pub fn point(&self, s: f64, t: f64) -> DVector<f64> {
        match self.kind {
            UnitTangentKind::Circle => DVector::from_vec(vec![s.cos(), s.sin()]),
            UnitTangentKind::Sphere => DVector::from_vec(vec![
                t.sin() * s.cos(),
                t.sin() * s.sin(),
                t.cos(),
            ]),
            UnitTangentKind::LinePair => DVector::from_vec(vec![1.0, t]),
            UnitTangentKind::Cylinder => DVector::from_vec(vec![s.cos(), s.sin(), t]),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::JetShape;

    fn jet(n: usize, m: usize, c: usize, terms: &[(usize, &str, f64)]) -> MongeJet {
        MongeJet::from_terms(JetShape::new(n, m, c).unwrap(), terms).unwrap()
    }

    #[test]
    fn first_form_of_monge_and_normal_forms() {
        let reg = jet(3, 6, 0, &[(4, "x*y", 1.0)]);
        assert_eq!(first_form(&reg).matrix, DMatrix::identity(3, 3));
        let sing = jet(3, 5, 1, &[(3, "x*z", 1.0)]);
        let e = first_form(&sing);
        assert_eq!(e.matrix, DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 1.0, 0.0])));
        assert_eq!(e.signature, Signature::DegeneratePseudo);
        let dz = DVector::from_vec(vec![0.0, 0.0, 1.0]);
        assert_eq!(e.eval(&dz, &dz), 0.0);
    }

    #[test]
    fn second_form_rows_of_the_cyclic_jet() {
        let j = jet(
            3,
            5,
            1,
            &[
                (3, "x^2", 1.0),
                (3, "y*z", -2.0),
                (4, "y^2", 1.0),
                (4, "x*z", -2.0),
                (5, "z^2", 1.0),
                (5, "x*y", -2.0),
            ],
        );
        let ii = second_form(&j);
        let expected = DMatrix::from_row_slice(
            3,
            6,
            &[
                2.0, 0.0, 0.0, 0.0, 0.0, -2.0, //
                0.0, 0.0, 2.0, 0.0, -2.0, 0.0, //
                0.0, -2.0, 0.0, 2.0, 0.0, 0.0,
            ],
        );
        assert_eq!(ii.matrix, expected);
    }

    #[test]
    fn roman_steiner_value_at_quarter_turn() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let j = jet(3, 6, 0, &[(4, "x*y", h), (5, "x*z", h), (6, "y*z", h)]);
        let t = std::f64::consts::FRAC_PI_4;
        let u = ProjectiveDirection::new(vec![t.cos(), t.sin(), 0.0]).unwrap();
        let v = evaluate_II(&j, &u, &u).unwrap();
        assert!((v - DVector::from_vec(vec![h, 0.0, 0.0])).amax() < 1e-15);
    }

    #[test]
    fn kernel_direction_of_planar_orbit() {
        let j = jet(3, 5, 1, &[(3, "z^2", 1.0), (4, "x*z", 1.0)]);
        let dz = ProjectiveDirection::new(vec![0.0, 0.0, 1.0]).unwrap();
        let v = evaluate_II(&j, &dz, &dz).unwrap();
        assert_eq!(v, DVector::from_vec(vec![2.0, 0.0, 0.0]));
    }

    #[test]
    fn matrix_and_contraction_agree() {
        let j = jet(3, 6, 0, &[(4, "x^2", 0.3), (4, "y*z", -1.1), (5, "x*z", 2.0), (6, "z^2", 0.7)]);
        let ii = second_form(&j);
        let u = DVector::from_vec(vec![0.2, -0.9, 0.4]);
        let v = DVector::from_vec(vec![1.3, 0.5, -0.2]);
        let diff = ii.eval(&u, &v) - second_form_value(&j, &u, &v);
        assert!(diff.amax() < 1e-14);
    }

    #[test]
    fn zero_jet_has_zero_second_form() {
        let j = MongeJet::zero(JetShape::new(2, 4, 1).unwrap());
        assert_eq!(second_form(&j).matrix, DMatrix::zeros(3, 3));
        assert_eq!(UnitTangentSet::of(&j).kind, UnitTangentKind::LinePair);
    }
}
