//! Curvature loci: sampling over the unit tangent set and exact,
//! rank-based classification.

use std::f64::consts::{PI, TAU};
use std::fmt;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{GeometryError, Result};
use crate::forms::{eta, second_form, UnitTangentSet};
use crate::jet::{ManifoldClass, MongeJet};
use crate::linalg::{in_span, rank_of_columns, span_basis, DEFAULT_TOL};

/// Grid over the unit tangent set.
///
/// * regular surface: `theta` angles in `[0, 2pi)`;
/// * regular 3-manifold: `theta` azimuths in `[0, 2pi)` and `second` polar
///   angles in `[0, pi]`;
/// * singular surface: `theta` heights `t` in `[-height, height]`;
/// * singular 3-manifold: `theta` angles and `second` heights in
///   `[-height, height]`.
///
/// A count of 1 puts the single sample at `theta = 0`, height 0 or
/// `phi = pi/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub theta: usize,
    pub second: usize,
    pub height: f64,
}

impl GridSpec {
    pub fn new(theta: usize, second: usize, height: f64) -> Self {
        Self {
            theta,
            second,
            height,
        }
    }

    fn check(&self, class: ManifoldClass) -> Result<()> {
        let second_used = matches!(
            class,
            ManifoldClass::Reg3Manifold | ManifoldClass::Sing3Manifold
        );
        if self.theta == 0 || (second_used && self.second == 0) {
            return Err(GeometryError::EmptyGrid);
        }
        if !self.height.is_finite() || self.height < 0.0 {
            return Err(GeometryError::EmptyGrid);
        }
        Ok(())
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        Self::new(64, 33, 2.0)
    }
}

fn periodic(count: usize) -> Vec<f64> {
    (0..count).map(|i| TAU * i as f64 / count as f64).collect()
}

fn closed(count: usize, lo: f64, hi: f64, single: f64) -> Vec<f64> {
    if count == 1 {
        return vec![single];
    }
    (0..count)
        .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
        .collect()
}

/// Sampled curvature locus. `params[k]` is `(theta, phi_or_c)`; for
/// singular surfaces `theta` is 0 and the second entry is the height `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocusSample {
    pub class: ManifoldClass,
    pub params: Vec<(f64, f64)>,
    pub points: Vec<DVector<f64>>,
    /// `(rows, cols)` of the parameter grid: rows run over the second
    /// parameter, columns over theta (periodic). One-parameter loci have a
    /// single row.
    pub grid_shape: (usize, usize),
    pub normal_dim: usize,
}

impl LocusSample {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Whether the columns wrap around (theta is periodic).
    pub fn periodic_theta(&self) -> bool {
        !matches!(self.class, ManifoldClass::SingSurface)
    }
}

/// Tangent vector at grid parameters.
pub fn tangent_at(class: ManifoldClass, theta: f64, second: f64) -> DVector<f64> {
    let set = UnitTangentSet {
        kind: match class {
            ManifoldClass::RegSurface => crate::forms::UnitTangentKind::Circle,
            ManifoldClass::Reg3Manifold => crate::forms::UnitTangentKind::Sphere,
            ManifoldClass::SingSurface => crate::forms::UnitTangentKind::LinePair,
            ManifoldClass::Sing3Manifold => crate::forms::UnitTangentKind::Cylinder,
        },
    };
    set.point(theta, second)
}

pub fn sample_locus(jet: &MongeJet, grid: &GridSpec) -> Result<LocusSample> {
    let class = jet.class();
    grid.check(class)?;
    let z = grid.height;
    let (params, grid_shape): (Vec<(f64, f64)>, (usize, usize)) = match class {
        ManifoldClass::RegSurface => {
            let th = periodic(grid.theta);
            (th.iter().map(|&t| (t, 0.0)).collect(), (1, grid.theta))
        }
        ManifoldClass::SingSurface => {
            let ts = closed(grid.theta, -z, z, 0.0);
            (ts.iter().map(|&t| (0.0, t)).collect(), (1, grid.theta))
        }
        ManifoldClass::Reg3Manifold | ManifoldClass::Sing3Manifold => {
            let th = periodic(grid.theta);
            let second = if class == ManifoldClass::Reg3Manifold {
                closed(grid.second, 0.0, PI, PI / 2.0)
            } else {
                closed(grid.second, -z, z, 0.0)
            };
            let params = second
                .iter()
                .flat_map(|&s| th.iter().map(move |&t| (t, s)))
                .collect();
            (params, (grid.second, grid.theta))
        }
    };
    let points = params
        .par_iter()
        .map(|&(t, s)| eta(jet, &tangent_at(class, t, s)))
        .collect();
    Ok(LocusSample {
        class,
        params,
        points,
        grid_shape,
        normal_dim: jet.normal_dim(),
    })
}

fn require_reg3(jet: &MongeJet, operation: &'static str) -> Result<()> {
    if jet.class() != ManifoldClass::Reg3Manifold {
        return Err(GeometryError::WrongManifoldClass {
            operation,
            found: jet.class().to_string(),
        });
    }
    Ok(())
}

/// Second derivative `f_ab` of every normal coordinate.
fn second_derivative(jet: &MongeJet, a: usize, b: usize) -> DVector<f64> {
    DVector::from_iterator(jet.normal_dim(), jet.quads().iter().map(|q| 2.0 * q[(a, b)]))
}

/// Mean curvature `H = (f_xx + f_yy + f_zz) / 3` of a regular 3-manifold.
pub fn mean_curvature(jet: &MongeJet) -> Result<DVector<f64>> {
    require_reg3(jet, "mean_curvature")?;
    Ok((second_derivative(jet, 0, 0) + second_derivative(jet, 1, 1) + second_derivative(jet, 2, 2))
        / 3.0)
}

/// The vectors `H, B1, ..., B5` with
/// `eta(theta, phi) = H + (1 + 3 cos 2phi) B1 + cos 2theta sin^2 phi B2
///   + sin 2theta sin^2 phi B3 + cos theta sin 2phi B4 + sin theta sin 2phi B5`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocusFrame {
    pub h: DVector<f64>,
    pub b: [DVector<f64>; 5],
}

impl LocusFrame {
    pub fn eval(&self, theta: f64, phi: f64) -> DVector<f64> {
        let weights = [
            1.0 + 3.0 * (2.0 * phi).cos(),
            (2.0 * theta).cos() * phi.sin().powi(2),
            (2.0 * theta).sin() * phi.sin().powi(2),
            theta.cos() * (2.0 * phi).sin(),
            theta.sin() * (2.0 * phi).sin(),
        ];
        let mut out = self.h.clone();
        for (w, b) in weights.iter().zip(&self.b) {
            out += b * *w;
        }
        out
    }
}

pub fn locus_frame(jet: &MongeJet) -> Result<LocusFrame> {
    require_reg3(jet, "locus_frame")?;
    let fxx = second_derivative(jet, 0, 0);
    let fyy = second_derivative(jet, 1, 1);
    let fzz = second_derivative(jet, 2, 2);
    let h = (&fxx + &fyy + &fzz) / 3.0;
    let b1 = (&fzz * 2.0 - &fxx - &fyy) / 12.0;
    let b2 = (&fxx - &fyy) / 2.0;
    Ok(LocusFrame {
        h,
        b: [
            b1,
            b2,
            second_derivative(jet, 0, 1),
            second_derivative(jet, 0, 2),
            second_derivative(jet, 1, 2),
        ],
    })
}

/// Topological type of a curvature locus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LocusType {
    NondegenerateParabola,
    HalfLine,
    Line,
    Point,
    Ellipse,
    Circle,
    Segment,
    NonplanarSurface,
    PlanarRegion,
    Curve,
}

impl LocusType {
    pub fn as_str(self) -> &'static str {
        match self {
            LocusType::NondegenerateParabola => "nondegenerate-parabola",
            LocusType::HalfLine => "half-line",
            LocusType::Line => "line",
            LocusType::Point => "point",
            LocusType::Ellipse => "ellipse",
            LocusType::Circle => "circle",
            LocusType::Segment => "segment",
            LocusType::NonplanarSurface => "nonplanar-surface",
            LocusType::PlanarRegion => "planar-region",
            LocusType::Curve => "curve",
        }
    }
}

impl fmt::Display for LocusType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Invariants of the curvature locus computable from the 2-jet.
#[derive(Debug, Clone, PartialEq)]
pub struct LocusInvariants {
    pub class: ManifoldClass,
    pub dim_first_normal: usize,
    pub dim_affine_hull: usize,
    /// Centre of the locus: `H` for regular 3-manifolds, the ellipse centre
    /// for regular surfaces, `eta` at the origin of the parameter otherwise.
    pub mean_curvature: DVector<f64>,
    /// Only for regular manifolds.
    pub h_in_ep: Option<bool>,
    pub degenerate_type: LocusType,
    /// Free-text sub-type, when one is known.
    pub tag: Option<String>,
    /// A point of `Aff_p`.
    pub affine_point: DVector<f64>,
    /// Orthonormal columns spanning the direction space of `Aff_p`.
    pub affine_directions: DMatrix<f64>,
    /// Orthonormal columns spanning `E_p`.
    pub ep_basis: DMatrix<f64>,
    /// Singular surfaces: whether the degenerate locus lies on a line
    /// through the origin.
    pub radial: Option<bool>,
}

/// Coefficients of the curvature parabola `eta(t) = l + 2 m t + n t^2` of a
/// singular surface.
#[derive(Debug, Clone, PartialEq)]
pub struct ParabolaCoefficients {
    pub l: DVector<f64>,
    pub m: DVector<f64>,
    pub n: DVector<f64>,
}

impl ParabolaCoefficients {
    pub fn of(jet: &MongeJet) -> Result<Self> {
        if jet.class() != ManifoldClass::SingSurface {
            return Err(GeometryError::WrongManifoldClass {
                operation: "parabola",
                found: jet.class().to_string(),
            });
        }
        Ok(Self {
            l: second_derivative(jet, 0, 0),
            m: second_derivative(jet, 0, 1),
            n: second_derivative(jet, 1, 1),
        })
    }

    pub fn eval(&self, t: f64) -> DVector<f64> {
        &self.l + &self.m * (2.0 * t) + &self.n * (t * t)
    }

    /// Same parabola up to the reparametrization `t -> -t`.
    pub fn max_diff_up_to_reflection(&self, other: &ParabolaCoefficients) -> f64 {
        let base = (&self.l - &other.l).amax().max((&self.n - &other.n).amax());
        let plus = (&self.m - &other.m).amax();
        let minus = (&self.m + &other.m).amax();
        base.max(plus.min(minus))
    }
}

fn scale_of(vectors: &[&DVector<f64>]) -> f64 {
    vectors.iter().map(|v| v.amax()).fold(0.0, f64::max)
}

fn is_zero(v: &DVector<f64>, scale: f64, tol: f64) -> bool {
    v.amax() <= tol * scale.max(f64::MIN_POSITIVE) || v.amax() == 0.0
}

/// Parabola type from exact rank conditions on `n` and `[n m]`.
pub fn parabola_type(p: &ParabolaCoefficients, tol: f64) -> LocusType {
    let scale = scale_of(&[&p.l, &p.m, &p.n]);
    let d = p.l.len();
    let n_zero = is_zero(&p.n, scale, tol);
    let m_zero = is_zero(&p.m, scale, tol);
    if n_zero && m_zero {
        return LocusType::Point;
    }
    if n_zero {
        return LocusType::Line;
    }
    if rank_of_columns(&[p.n.clone(), p.m.clone()], d, tol) >= 2 {
        LocusType::NondegenerateParabola
    } else {
        LocusType::HalfLine
    }
}

fn orthonormal_columns(vectors: &[DVector<f64>], dim: usize, tol: f64) -> DMatrix<f64> {
    span_basis(vectors, dim, tol)
}

/// Extend the span of `base` to a plane, preferring the normal axes in
/// order: the plane containing `base` closest to the first axis.
fn complete_to_plane(base: &DMatrix<f64>, dim: usize) -> DMatrix<f64> {
    let target = 2.min(dim);
    let mut cols: Vec<DVector<f64>> = base.column_iter().map(|c| c.into_owned()).collect();
    let mut axis = 0;
    while cols.len() < target && axis < dim {
        let mut v = DVector::zeros(dim);
        v[axis] = 1.0;
        for c in &cols {
            let proj = c.dot(&v);
            v -= c * proj;
        }
        if v.norm() > 1e-8 {
            cols.push(v.normalize());
        }
        axis += 1;
    }
    crate::linalg::columns_matrix(&cols, dim)
}

pub fn classify_locus(jet: &MongeJet) -> LocusInvariants {
    classify_locus_with_tolerance(jet, DEFAULT_TOL)
}

pub fn classify_locus_with_tolerance(jet: &MongeJet, tol: f64) -> LocusInvariants {
    let class = jet.class();
    let d = jet.normal_dim();
    let dim_first_normal = second_form(jet).rank(tol);
    let ii = |a: usize, b: usize| second_derivative(jet, a, b);
    match class {
        ManifoldClass::RegSurface => {
            let (l, m, n) = (ii(0, 0), ii(0, 1), ii(1, 1));
            let center = (&l + &n) / 2.0;
            let b = (&l - &n) / 2.0;
            let dirs = vec![b.clone(), m.clone()];
            let basis = orthonormal_columns(&dirs, d, tol);
            let dim = basis.ncols();
            let scale = scale_of(&[&l, &m, &n]);
            let degenerate_type = match dim {
                0 => LocusType::Point,
                1 => LocusType::Segment,
                _ => {
                    let (nb, nc) = (b.norm(), m.norm());
                    let circle = (nb - nc).abs() <= tol.sqrt() * scale
                        && b.dot(&m).abs() <= tol.sqrt() * scale * scale;
                    if circle {
                        LocusType::Circle
                    } else {
                        LocusType::Ellipse
                    }
                }
            };
            let h_in_ep = in_span(&basis, &center, scale, tol);
            LocusInvariants {
                class,
                dim_first_normal,
                dim_affine_hull: dim,
                mean_curvature: center.clone(),
                h_in_ep: Some(h_in_ep),
                degenerate_type,
                tag: None,
                affine_point: center,
                affine_directions: basis.clone(),
                ep_basis: basis,
                radial: None,
            }
        }
        ManifoldClass::Reg3Manifold => {
            let frame = locus_frame(jet).expect("class checked");
            let basis = orthonormal_columns(&frame.b, d, tol);
            let dim = basis.ncols();
            let scale = scale_of(&frame.b.iter().chain([&frame.h]).collect::<Vec<_>>());
            let h_in_ep = in_span(&basis, &frame.h, scale, tol);
            LocusInvariants {
                class,
                dim_first_normal,
                dim_affine_hull: dim,
                mean_curvature: frame.h.clone(),
                h_in_ep: Some(h_in_ep),
                degenerate_type: volume_type(dim),
                tag: None,
                affine_point: frame.h,
                affine_directions: basis.clone(),
                ep_basis: basis,
                radial: None,
            }
        }
        ManifoldClass::SingSurface => {
            let p = ParabolaCoefficients::of(jet).expect("class checked");
            let kind = parabola_type(&p, tol);
            let scale = scale_of(&[&p.l, &p.m, &p.n]);
            let (affine_directions, ep, radial) = match kind {
                LocusType::NondegenerateParabola => {
                    let b = orthonormal_columns(&[p.m.clone(), p.n.clone()], d, tol);
                    (b.clone(), b, None)
                }
                LocusType::Point => {
                    let through = orthonormal_columns(std::slice::from_ref(&p.l), d, tol);
                    (DMatrix::zeros(d, 0), complete_to_plane(&through, d), Some(true))
                }
                _ => {
                    let dir = if kind == LocusType::Line { &p.m } else { &p.n };
                    let line = orthonormal_columns(std::slice::from_ref(dir), d, tol);
                    let radial = in_span(&line, &p.l, scale, tol);
                    let ep = if radial {
                        complete_to_plane(&line, d)
                    } else {
                        orthonormal_columns(&[p.l.clone(), dir.clone()], d, tol)
                    };
                    (line, ep, Some(radial))
                }
            };
            LocusInvariants {
                class,
                dim_first_normal,
                dim_affine_hull: affine_directions.ncols(),
                mean_curvature: p.l.clone(),
                h_in_ep: None,
                degenerate_type: kind,
                tag: None,
                affine_point: p.l,
                affine_directions,
                ep_basis: ep,
                radial,
            }
        }
        ManifoldClass::Sing3Manifold => {
            let (l, m, n) = (ii(0, 0), ii(0, 1), ii(1, 1));
            let (p, q, r) = (ii(2, 2), ii(0, 2), ii(1, 2));
            let center = (&l + &n) / 2.0;
            let half_diff = (&l - &n) / 2.0;
            let dirs = vec![half_diff.clone(), m.clone(), p.clone(), q.clone(), r.clone()];
            let basis = orthonormal_columns(&dirs, d, tol);
            let dim = basis.ncols();
            let scale = scale_of(&[&l, &m, &n, &p, &q, &r]);
            let mut degenerate_type = volume_type(dim);
            let tag = if dim == 1 {
                Some(curve_kind(&dirs, &basis, scale, tol).to_string())
            } else if dim >= 3 {
                let origin_terms = [&l, &m, &n].iter().all(|v| is_zero(v, scale, tol));
                let full = rank_of_columns(&[q.clone(), r.clone(), p.clone()], d, tol) == 3;
                Some(if origin_terms && full {
                    "paraboloid".to_string()
                } else {
                    "unclassified-nondegenerate".to_string()
                })
            } else {
                None
            };
            if dim == 0 {
                degenerate_type = LocusType::Point;
            }
            LocusInvariants {
                class,
                dim_first_normal,
                dim_affine_hull: dim,
                mean_curvature: center.clone(),
                h_in_ep: None,
                degenerate_type,
                tag,
                affine_point: center,
                affine_directions: basis.clone(),
                ep_basis: basis,
                radial: None,
            }
        }
    }
}

fn volume_type(dim: usize) -> LocusType {
    match dim {
        0 => LocusType::Point,
        1 => LocusType::Curve,
        2 => LocusType::PlanarRegion,
        _ => LocusType::NonplanarSurface,
    }
}

/// Shape of a one-dimensional singular 3-manifold locus
/// `center + d (a cos 2theta + b sin 2theta + g c^2 + 2c(x cos theta + y sin theta))`.
fn curve_kind(dirs: &[DVector<f64>], basis: &DMatrix<f64>, scale: f64, tol: f64) -> &'static str {
    let d = basis.column(0).into_owned();
    let coeff = |v: &DVector<f64>| v.dot(&d);
    let g = coeff(&dirs[2]);
    let cross = coeff(&dirs[3]).abs().max(coeff(&dirs[4]).abs());
    let eps = tol * scale.max(f64::MIN_POSITIVE);
    if g.abs() > eps {
        "half-line"
    } else if cross > eps {
        "line"
    } else {
        "segment"
    }
}

/// Whether the mean curvature lies in `E_p`.
pub fn h_in_ep(jet: &MongeJet) -> Result<bool> {
    match jet.class() {
        ManifoldClass::RegSurface | ManifoldClass::Reg3Manifold => {
            Ok(classify_locus(jet).h_in_ep.expect("regular manifolds report it"))
        }
        other => Err(GeometryError::WrongManifoldClass {
            operation: "H_in_Ep",
            found: other.to_string(),
        }),
    }
}

/// Dimension of the affine hull of a point cloud, from the singular values of
/// the centered cloud.
pub fn point_cloud_affine_dim(points: &[DVector<f64>], tol: f64) -> usize {
    let Some(first) = points.first() else {
        return 0;
    };
    let dim = first.len();
    let mean = points.iter().fold(DVector::zeros(dim), |acc, p| acc + p) / points.len() as f64;
    let centered: Vec<DVector<f64>> = points.iter().map(|p| p - &mean).collect();
    let m = crate::linalg::columns_matrix(&centered, dim);
    // Gram of the (dim x N) cloud keeps the decomposition small.
    let gram = &m * m.transpose();
    let values = gram.symmetric_eigenvalues();
    let largest = values.iter().copied().fold(0.0, f64::max);
    if largest <= 0.0 {
        return 0;
    }
    values.iter().filter(|&&v| v > tol * largest).count()
}
