//! Normal sections, projections along tangent directions, and the diagram
//! relating them.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{GeometryError, Result};
use crate::forms::eta;
use crate::jet::{JetShape, ManifoldClass, MongeJet, ProjectiveDirection};
use crate::linalg::householder_to_last_axis;
use crate::locus::{classify_locus, LocusType, ParabolaCoefficients};

/// Orthonormal basis of the hyperplane `{u . x = 0}`, built by solving for
/// the variable with the largest `|u_k|` and Gram-Schmidt on the remaining
/// coordinate directions in order.
fn hyperplane_basis(u: &DVector<f64>) -> DMatrix<f64> {
    let n = u.len();
    let k = u
        .iter()
        .enumerate()
        .fold(0, |best, (i, x)| if x.abs() > u[best].abs() { i } else { best });
    let mut cols: Vec<DVector<f64>> = Vec::with_capacity(n - 1);
    for j in (0..n).filter(|&j| j != k) {
        let mut t = DVector::zeros(n);
        t[j] = 1.0;
        t[k] = -u[j] / u[k];
        for c in &cols {
            let proj = c.dot(&t);
            t -= c * proj;
        }
        cols.push(t.normalize());
    }
    crate::linalg::columns_matrix(&cols, n)
}

/// Source basis of the normal section of `jet` along `u`, as columns.
/// Corank-1 sections keep the kernel direction as the last column.
pub fn section_basis(jet: &MongeJet, u: &ProjectiveDirection) -> Result<DMatrix<f64>> {
    let n = jet.source_dim();
    if n != 3 {
        return Err(GeometryError::WrongManifoldClass {
            operation: "normal_section",
            found: jet.class().to_string(),
        });
    }
    if u.len() != n {
        return Err(GeometryError::DimensionMismatch(format!(
            "direction has {} components, source dimension is {n}",
            u.len()
        )));
    }
    let dir = u.components();
    if jet.corank() == 0 {
        return Ok(hyperplane_basis(dir));
    }
    // The hyperplane {a X + b Y = 0} pulls back to a plane containing the
    // kernel, so only the image (a, b) matters.
    let image = DVector::from_vec(vec![dir[0], dir[1]]);
    let scale = dir.amax();
    if image.amax() <= 1e-14 * scale {
        return Err(GeometryError::KernelDirection);
    }
    let e = hyperplane_basis(&image);
    Ok(DMatrix::from_row_slice(
        3,
        2,
        &[e[(0, 0)], 0.0, e[(1, 0)], 0.0, 0.0, 1.0],
    ))
}

/// The normal section `M ∩ {u = 0}` of a 3-manifold jet, as a surface jet in
/// one lower ambient dimension.
pub fn normal_section(jet: &MongeJet, u: &ProjectiveDirection) -> Result<MongeJet> {
    let basis = section_basis(jet, u)?;
    let shape = JetShape::new(2, jet.ambient_dim() - 1, jet.corank())?;
    let quad = jet
        .quads()
        .iter()
        .map(|q| basis.transpose() * q * &basis)
        .collect();
    let section = MongeJet::new(shape, quad)?;
    let vars = match jet.corank() {
        0 => vec!["s".to_string(), "t".to_string()],
        _ => vec!["s".to_string(), jet.var_names()[2].clone()],
    };
    Ok(section.with_var_names(vars))
}

/// Directions `{Y + a X = 0}` for each `a`, optionally with `{X = 0}` and
/// `{Y = 0}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilySpec {
    pub a_values: Vec<f64>,
    pub include_axes: bool,
}

impl FamilySpec {
    /// `count` midpoints of equal cells of `[lo, hi]`, plus the two axes.
    pub fn midpoints(count: usize, lo: f64, hi: f64) -> Self {
        let width = (hi - lo) / count as f64;
        Self {
            a_values: (0..count).map(|i| lo + (i as f64 + 0.5) * width).collect(),
            include_axes: true,
        }
    }

    pub fn directions(&self) -> Vec<(String, DVector<f64>)> {
        let mut out = Vec::new();
        if self.include_axes {
            out.push(("X=0".to_string(), DVector::from_vec(vec![1.0, 0.0, 0.0])));
            out.push(("Y=0".to_string(), DVector::from_vec(vec![0.0, 1.0, 0.0])));
        }
        for &a in &self.a_values {
            out.push((format!("Y+{a}X=0"), DVector::from_vec(vec![a, 1.0, 0.0])));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SectionEntry {
    pub label: String,
    pub direction: DVector<f64>,
    pub locus_type: LocusType,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyReport {
    pub entries: Vec<SectionEntry>,
}

impl FamilyReport {
    /// Multiset of section types.
    pub fn counts(&self) -> BTreeMap<LocusType, usize> {
        let mut counts = BTreeMap::new();
        for e in &self.entries {
            *counts.entry(e.locus_type).or_insert(0) += 1;
        }
        counts
    }

    pub fn type_of(&self, label: &str) -> Option<LocusType> {
        self.entries.iter().find(|e| e.label == label).map(|e| e.locus_type)
    }
}

/// Parabola type of every section in the family.
pub fn section_family_classifier(jet: &MongeJet, family: &FamilySpec) -> Result<FamilyReport> {
    if jet.class() != ManifoldClass::Sing3Manifold {
        return Err(GeometryError::WrongManifoldClass {
            operation: "section_family_classifier",
            found: jet.class().to_string(),
        });
    }
    let entries = family
        .directions()
        .into_par_iter()
        .map(|(label, dir)| {
            let u = ProjectiveDirection::from_vector(dir.clone())?;
            let section = normal_section(jet, &u)?;
            Ok(SectionEntry {
                label,
                direction: dir,
                locus_type: classify_locus(&section).degenerate_type,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FamilyReport { entries })
}

/// Projection of a regular jet along a tangent direction.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    /// Corank-1 jet in one lower ambient dimension.
    pub jet: MongeJet,
    /// Orthogonal source change `x = R x'` with `R e_n = u`.
    pub rotation: DMatrix<f64>,
}

/// Resolve `u` to a tangent vector: either `n` source components, or `m`
/// ambient components whose normal part must vanish.
fn tangent_components(jet: &MongeJet, u: &DVector<f64>, tol: f64) -> Result<DVector<f64>> {
    let n = jet.source_dim();
    if u.len() == n {
        return Ok(u.clone());
    }
    if u.len() == jet.ambient_dim() {
        let normal = u.rows(n, u.len() - n).amax();
        if normal > tol * u.amax() {
            return Err(GeometryError::NonTangentDirection(normal / u.norm()));
        }
        return Ok(u.rows(0, n).into_owned());
    }
    Err(GeometryError::DimensionMismatch(format!(
        "direction has {} components; expected {n} (tangent) or {} (ambient)",
        u.len(),
        jet.ambient_dim()
    )))
}

/// Project a regular jet along the tangent direction `u`; the projected jet
/// is in normal form after the source rotation carrying `e_n` to `u`.
pub fn project_along(jet: &MongeJet, u: &DVector<f64>) -> Result<Projection> {
    if jet.corank() != 0 {
        return Err(GeometryError::WrongManifoldClass {
            operation: "project_along",
            found: jet.class().to_string(),
        });
    }
    let u = tangent_components(jet, u, 1e-12)?;
    if u.iter().any(|x| !x.is_finite()) {
        return Err(GeometryError::NonFiniteEntry { row: 0, col: 0 });
    }
    if u.amax() == 0.0 {
        return Err(GeometryError::ZeroDirection);
    }
    let r = householder_to_last_axis(&u);
    let shape = JetShape::new(jet.source_dim(), jet.ambient_dim() - 1, 1)?;
    let quad = jet.quads().iter().map(|q| r.transpose() * q * &r).collect();
    let projected = MongeJet::new(shape, quad)?.with_var_names(jet.var_names().to_vec());
    Ok(Projection {
        jet: projected,
        rotation: r,
    })
}

/// First fundamental form of the projection of a Monge-form regular jet
/// along unit `u`, from `E^P_ij = E_ij - <f_i, u><f_j, u>`.
pub fn projected_first_form(jet: &MongeJet, u: &DVector<f64>) -> DMatrix<f64> {
    let n = jet.source_dim();
    let unit = u / u.norm();
    let l = jet.linear_part();
    let e = l.transpose() * &l;
    // f_i at the origin is the i-th column of the linear part; u as an
    // ambient vector is its image.
    let u_amb = &l * &unit;
    let proj: Vec<f64> = (0..n).map(|i| l.column(i).dot(&u_amb)).collect();
    DMatrix::from_fn(n, n, |i, j| e[(i, j)] - proj[i] * proj[j])
}

/// Grid of the blow-up check: `theta` in `[0, 2pi)`, `phi` in
/// `[phi_min, phi_max]`; poles are skipped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagramGrid {
    pub theta: usize,
    pub phi: usize,
    pub phi_min: f64,
    pub phi_max: f64,
}

impl Default for DiagramGrid {
    fn default() -> Self {
        Self {
            theta: 36,
            phi: 17,
            phi_min: 0.1,
            phi_max: PI - 0.1,
        }
    }
}

impl DiagramGrid {
    fn phis(&self) -> Vec<f64> {
        if self.phi == 1 {
            return vec![self.phi_min];
        }
        (0..self.phi)
            .map(|j| self.phi_min + (self.phi_max - self.phi_min) * j as f64 / (self.phi - 1) as f64)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagramReport {
    /// Section-then-project vs project-then-section, coefficientwise.
    pub path_deviation: f64,
    /// `eta_p(theta, cot phi) sin^2 phi - eta_e(theta, phi)`.
    pub blowup_deviation: f64,
    /// Section loci against the restriction of the parent loci.
    pub restriction_deviation: f64,
    /// Section then project.
    pub path1: MongeJet,
    /// Project then section.
    pub path2: MongeJet,
    pub samples: usize,
    /// Whether the configuration was rotated to `u = e3`, section `{Y = 0}`.
    pub rotated: bool,
}

impl DiagramReport {
    pub fn max_deviation(&self) -> f64 {
        self.path_deviation
            .max(self.blowup_deviation)
            .max(self.restriction_deviation)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_deviation() < tol
    }

    pub fn to_key_values(&self) -> Vec<(String, String)> {
        vec![
            ("path_deviation".into(), format!("{:e}", self.path_deviation)),
            ("blowup_deviation".into(), format!("{:e}", self.blowup_deviation)),
            ("restriction_deviation".into(), format!("{:e}", self.restriction_deviation)),
            ("max_deviation".into(), format!("{:e}", self.max_deviation())),
            ("samples".into(), self.samples.to_string()),
            ("rotated".into(), self.rotated.to_string()),
            ("section_parabola_path1".into(), self.path1.to_string()),
            ("section_parabola_path2".into(), self.path2.to_string()),
        ]
    }
}

fn cross(a: &DVector<f64>, b: &DVector<f64>) -> DVector<f64> {
    DVector::from_vec(vec![
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ])
}

/// Orthonormal `R` with `R e3 = u`, `R e2 = w`, `R e1 = w x u`.
pub fn diagram_frame(u: &DVector<f64>, w: &DVector<f64>) -> Result<DMatrix<f64>> {
    if u.amax() == 0.0 || w.amax() == 0.0 {
        return Err(GeometryError::ZeroDirection);
    }
    let u = u.normalize();
    let w = w.normalize();
    let cosine = u.dot(&w);
    if cosine.abs() > 1e-9 {
        return Err(GeometryError::NonOrthogonalConfiguration(cosine));
    }
    let e1 = cross(&w, &u);
    let mut r = DMatrix::zeros(3, 3);
    r.set_column(0, &e1);
    r.set_column(1, &w);
    r.set_column(2, &u);
    Ok(r)
}

/// Check the commutative diagram of projection along `u` and the normal
/// section orthogonal to `w` for a regular `(3, 6)` jet.
pub fn verify_diagram(
    jet: &MongeJet,
    u: &DVector<f64>,
    w: &DVector<f64>,
    grid: &DiagramGrid,
) -> Result<DiagramReport> {
    if jet.class() != ManifoldClass::Reg3Manifold || jet.ambient_dim() != 6 {
        return Err(GeometryError::WrongManifoldClass {
            operation: "verify_diagram",
            found: format!("{} in R^{}", jet.class(), jet.ambient_dim()),
        });
    }
    if u.len() != 3 || w.len() != 3 {
        return Err(GeometryError::DimensionMismatch(
            "projection and section directions need 3 components".into(),
        ));
    }
    if grid.theta == 0 || grid.phi == 0 {
        return Err(GeometryError::EmptyGrid);
    }
    let phis: Vec<f64> = grid
        .phis()
        .into_iter()
        .filter(|p| p.sin().abs() > 1e-12)
        .collect();
    if phis.is_empty() {
        return Err(GeometryError::PoleOnlyGrid);
    }
    let r = diagram_frame(u, w)?;
    let rotated = (&r - DMatrix::identity(3, 3)).amax() > 0.0;
    let canonical = if rotated { jet.substitute_source(&r) } else { jet.clone() };

    let e2 = ProjectiveDirection::new(vec![0.0, 1.0, 0.0])?;
    let e3 = DVector::from_vec(vec![0.0, 0.0, 1.0]);

    // Path 1: section {Y = 0}, then project along the image of e3.
    let section = normal_section(&canonical, &e2)?;
    let path1 = project_along(&section, &DVector::from_vec(vec![0.0, 1.0]))?.jet;
    // Path 2: project along e3, then section {Y = 0}.
    let projected = project_along(&canonical, &e3)?.jet;
    let path2 = normal_section(&projected, &e2)?;
    let path_deviation = path1.max_abs_diff(&path2);

    let thetas: Vec<f64> = (0..grid.theta)
        .map(|i| TAU * i as f64 / grid.theta as f64)
        .collect();
    let mut blowup_deviation: f64 = 0.0;
    let mut samples = 0;
    for &phi in &phis {
        let (s, c) = phi.sin_cos();
        for &theta in &thetas {
            let sphere = DVector::from_vec(vec![s * theta.cos(), s * theta.sin(), c]);
            let cylinder = DVector::from_vec(vec![theta.cos(), theta.sin(), c / s]);
            let eta_e = eta(&canonical, &sphere);
            let eta_p = eta(&projected, &cylinder);
            blowup_deviation = blowup_deviation.max((eta_p * (s * s) - eta_e).amax());
            samples += 1;
        }
    }

    // Restrictions: the section loci are the parent loci at theta = 0.
    let parabola = ParabolaCoefficients::of(&path2)?;
    let mut restriction_deviation: f64 = 0.0;
    for &phi in &phis {
        let (s, c) = phi.sin_cos();
        let t = c / s;
        let parent_p = eta(&projected, &DVector::from_vec(vec![1.0, 0.0, t]));
        restriction_deviation = restriction_deviation.max((parabola.eval(t) - parent_p).amax());
        let parent_e = eta(&canonical, &DVector::from_vec(vec![s, 0.0, c]));
        let ellipse = eta(&section, &DVector::from_vec(vec![s, c]));
        restriction_deviation = restriction_deviation.max((ellipse - parent_e).amax());
    }

    Ok(DiagramReport {
        path_deviation,
        blowup_deviation,
        restriction_deviation,
        path1,
        path2,
        samples,
        rotated,
    })
}

/// Default section normal for a projection direction: the part of `e2`
/// orthogonal to `u` (or of `e1` when `u` is along `e2`).
pub fn default_section_normal(u: &DVector<f64>) -> DVector<f64> {
    let unit = u.normalize();
    for axis in [1, 0, 2] {
        let mut w = DVector::zeros(3);
        w[axis] = 1.0;
        let proj = w.dot(&unit);
        w -= &unit * proj;
        if w.norm() > 1e-6 {
            return w.normalize();
        }
    }
    unreachable!("some axis is not parallel to u")
}

/// Remove trailing normal coordinates that vanish identically, e.g. to see a
/// section of a jet in `R^6` inside `R^4`.
pub fn drop_zero_normals(jet: &MongeJet) -> MongeJet {
    jet.drop_trailing_zero_normals()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::second_form;

    fn jet(n: usize, m: usize, c: usize, terms: &[(usize, &str, f64)]) -> MongeJet {
        MongeJet::from_terms(JetShape::new(n, m, c).unwrap(), terms).unwrap()
    }

    fn dir(xs: &[f64]) -> ProjectiveDirection {
        ProjectiveDirection::new(xs.to_vec()).unwrap()
    }

    fn cyclic() -> MongeJet {
        jet(
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
        )
    }

    #[test]
    fn axis_sections_of_the_cyclic_jet() {
        let bar = normal_section(&cyclic(), &dir(&[1.0, 0.0, 0.0])).unwrap();
        let expected = jet(2, 4, 1, &[(2, "x*y", -2.0), (3, "x^2", 1.0), (4, "y^2", 1.0)]);
        assert_eq!(bar.max_abs_diff(&expected), 0.0);
        assert_eq!(bar.var_names(), ["s", "z"]);
        let p = ParabolaCoefficients::of(&bar).unwrap();
        // (-4z, 2, 2z^2)
        assert_eq!(p.eval(1.5), DVector::from_vec(vec![-6.0, 2.0, 4.5]));
        let tilde = normal_section(&cyclic(), &dir(&[0.0, 1.0, 0.0])).unwrap();
        let p = ParabolaCoefficients::of(&tilde).unwrap();
        assert_eq!(p.eval(1.5), DVector::from_vec(vec![2.0, -6.0, 4.5]));
    }

    #[test]
    fn kernel_direction_has_no_section() {
        assert_eq!(
            normal_section(&cyclic(), &dir(&[0.0, 0.0, 1.0])),
            Err(GeometryError::KernelDirection)
        );
    }

    #[test]
    fn circle_section_of_elliptic_region() {
        let region = jet(3, 5, 0, &[(4, "x^2", 1.0), (4, "z^2", 1.0), (5, "x*y", 1.0)]);
        let s = normal_section(&region, &dir(&[0.0, 0.0, 1.0])).unwrap();
        assert_eq!(classify_locus(&s).degenerate_type, LocusType::Circle);
    }

    #[test]
    fn projections_of_example_jets() {
        let j = jet(3, 6, 0, &[(4, "x^2", 1.0), (4, "z^2", 0.5), (5, "x*z", 1.0), (6, "y*z", 1.0)]);
        let p = project_along(&j, &DVector::from_vec(vec![0.0, 0.0, 1.0])).unwrap();
        let expected = jet(3, 5, 1, &[(3, "x^2", 1.0), (3, "z^2", 0.5), (4, "x*z", 1.0), (5, "y*z", 1.0)]);
        assert_eq!(p.jet, expected);
        assert_eq!(second_form(&p.jet).matrix, second_form(&j).matrix);
    }

    #[test]
    fn ambient_direction_must_be_tangent() {
        let j = jet(3, 6, 0, &[(4, "x^2", 1.0)]);
        let ok = DVector::from_vec(vec![0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
        assert!(project_along(&j, &ok).is_ok());
        let bad = DVector::from_vec(vec![0.0, 0.0, 1.0, 0.1, 0.0, 0.0]);
        assert!(matches!(
            project_along(&j, &bad),
            Err(GeometryError::NonTangentDirection(_))
        ));
    }

    #[test]
    fn projected_direction_is_null() {
        let j = jet(3, 6, 0, &[(4, "x*y", 1.0)]);
        let u = DVector::from_vec(vec![0.3, -0.5, 0.8]);
        let unit = u.normalize();
        let e = projected_first_form(&j, &u);
        assert!((unit.transpose() * e * &unit)[0].abs() < 1e-15);
        let p = project_along(&j, &u).unwrap();
        let image = p.rotation.transpose() * &unit;
        let first = crate::forms::first_form(&p.jet);
        assert!(first.eval(&image, &image).abs() < 1e-15);
    }

    #[test]
    fn diagram_of_the_blowup_fixture() {
        let j = jet(3, 6, 0, &[(4, "x^2", 1.0), (4, "z^2", 0.5), (5, "x*z", 1.0), (6, "y*z", 1.0)]);
        let e3 = DVector::from_vec(vec![0.0, 0.0, 1.0]);
        let e2 = DVector::from_vec(vec![0.0, 1.0, 0.0]);
        let report = verify_diagram(&j, &e3, &e2, &DiagramGrid::default()).unwrap();
        assert!(report.passes(1e-9), "{report:?}");
        assert!(!report.rotated);
        let p = ParabolaCoefficients::of(&report.path1).unwrap();
        // (2 + c^2, 2c, 0)
        for c in [-1.0, 0.0, 0.5, 2.0] {
            let expected = DVector::from_vec(vec![2.0 + c * c, 2.0 * c, 0.0]);
            assert!((p.eval(c) - expected).amax() < 1e-14);
        }
    }

    #[test]
    fn pole_only_grid_is_rejected() {
        let j = MongeJet::zero(JetShape::new(3, 6, 0).unwrap());
        let grid = DiagramGrid {
            theta: 4,
            phi: 2,
            phi_min: 0.0,
            phi_max: PI,
        };
        let e3 = DVector::from_vec(vec![0.0, 0.0, 1.0]);
        let e2 = DVector::from_vec(vec![0.0, 1.0, 0.0]);
        assert_eq!(verify_diagram(&j, &e3, &e2, &grid), Err(GeometryError::PoleOnlyGrid));
    }

    #[test]
    fn non_orthogonal_configuration_is_rejected() {
        let u = DVector::from_vec(vec![0.0, 0.0, 1.0]);
        let w = DVector::from_vec(vec![0.0, 1.0, 1.0]);
        assert!(matches!(
            diagram_frame(&u, &w),
            Err(GeometryError::NonOrthogonalConfiguration(_))
        ));
    }

    #[test]
    fn family_of_the_zero_jet_is_all_points() {
        let j = MongeJet::zero(JetShape::new(3, 5, 1).unwrap());
        let report = section_family_classifier(&j, &FamilySpec::midpoints(5, -5.0, 5.0)).unwrap();
        assert_eq!(report.entries.len(), 7);
        assert!(report.entries.iter().all(|e| e.locus_type == LocusType::Point));
    }

    #[test]
    fn dropping_zero_normals() {
        let j = jet(3, 6, 0, &[(4, "x^2", 1.0), (4, "z^2", 0.5), (5, "x*z", 1.0), (6, "y*z", 1.0)]);
        let s = normal_section(&j, &dir(&[0.0, 1.0, 0.0])).unwrap();
        let dropped = drop_zero_normals(&s);
        assert_eq!(dropped.ambient_dim(), 4);
    }
}
