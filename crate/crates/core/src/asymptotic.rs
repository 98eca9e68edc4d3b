//! Asymptotic and binormal directions.
//!
//! For a 3-manifold with three normal coordinates, `A(u)` is the 3x3 matrix
//! with rows `Hess f_i . u`; a tangent direction `u` is asymptotic when some
//! normal `nu` satisfies `nu^T A(u) = 0`, i.e. when the cubic
//! `D(u) = det A(u)` vanishes. Roots are found by scanning the unit
//! hemisphere for sign changes and refining along great-circle arcs.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{GeometryError, Result};
use crate::forms::{eta, second_form};
use crate::jet::{ManifoldClass, MongeJet};
use crate::linalg::{
    canonical_sign, in_span, left_null_space, left_singular_pairs, line_angle, singular_values,
};
use crate::locus::{classify_locus, LocusType, ParabolaCoefficients};
use crate::orbit::{classify_orbit, Orbit, OrbitLabel};
use crate::sections::{normal_section, project_along, section_basis};
use crate::jet::ProjectiveDirection;

/// Relative size of the smallest singular value below which `A(u)` counts as
/// singular.
pub const ASYMPTOTIC_TOL: f64 = 1e-8;

/// Exponents `(a, b, c)` of `x^a y^b z^c`, in the order used for the cubic
/// coefficients.
pub const CUBIC_EXPONENTS: [[usize; 3]; 10] = [
    [3, 0, 0],
    [2, 1, 0],
    [2, 0, 1],
    [1, 2, 0],
    [1, 1, 1],
    [1, 0, 2],
    [0, 3, 0],
    [0, 2, 1],
    [0, 1, 2],
    [0, 0, 3],
];

type V3 = [f64; 3];

fn dot(a: &V3, b: &V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn normalize(p: V3) -> V3 {
    let n = dot(&p, &p).sqrt();
    [p[0] / n, p[1] / n, p[2] / n]
}

fn canonical_v3(p: V3) -> V3 {
    let scale = p.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    match p.iter().find(|x| x.abs() > 1e-12 * scale) {
        Some(&x) if x < 0.0 => [-p[0], -p[1], -p[2]],
        _ => p,
    }
}

fn to_dvector(p: &V3) -> DVector<f64> {
    DVector::from_row_slice(p)
}

fn det3_rows(r0: V3, r1: V3, r2: V3) -> f64 {
    r0[0] * (r1[1] * r2[2] - r1[2] * r2[1]) - r0[1] * (r1[0] * r2[2] - r1[2] * r2[0])
        + r0[2] * (r1[0] * r2[1] - r1[1] * r2[0])
}

fn require_cubic_shape(jet: &MongeJet, operation: &'static str) -> Result<()> {
    if jet.source_dim() != 3 || jet.normal_dim() != 3 {
        return Err(GeometryError::WrongManifoldClass {
            operation,
            found: format!("{} in R^{}", jet.class(), jet.ambient_dim()),
        });
    }
    Ok(())
}

/// `A(u)` with `A(u)_ij = (Hess f_i . u)_j`.
pub fn a_matrix(jet: &MongeJet, u: &DVector<f64>) -> DMatrix<f64> {
    let n = jet.source_dim();
    DMatrix::from_fn(jet.normal_dim(), n, |i, j| {
        let q = jet.quad(i);
        2.0 * (0..n).map(|k| q[(j, k)] * u[k]).sum::<f64>()
    })
}

/// Coefficients of `D(u) = det A(u)` in the order of [`CUBIC_EXPONENTS`].
pub fn cubic_coefficients(jet: &MongeJet) -> Result<[f64; 10]> {
    require_cubic_shape(jet, "asymptotic_cubic")?;
    let h: Vec<DMatrix<f64>> = (0..3).map(|i| jet.hessian(i)).collect();
    let slice = |i: usize, k: usize| -> V3 { [h[i][(0, k)], h[i][(1, k)], h[i][(2, k)]] };
    let mut coefficients = [0.0; 10];
    for k1 in 0..3 {
        for k2 in 0..3 {
            for k3 in 0..3 {
                let d = det3_rows(slice(0, k1), slice(1, k2), slice(2, k3));
                let mut e = [0usize; 3];
                e[k1] += 1;
                e[k2] += 1;
                e[k3] += 1;
                let idx = CUBIC_EXPONENTS
                    .iter()
                    .position(|x| *x == e)
                    .expect("every degree-3 exponent is listed");
                coefficients[idx] += d;
            }
        }
    }
    Ok(coefficients)
}

fn cubic_eval(c: &[f64; 10], u: &V3) -> f64 {
    CUBIC_EXPONENTS
        .iter()
        .zip(c)
        .map(|(e, c)| c * u[0].powi(e[0] as i32) * u[1].powi(e[1] as i32) * u[2].powi(e[2] as i32))
        .sum()
}

fn cubic_gradient(c: &[f64; 10], u: &V3) -> V3 {
    let mut g = [0.0; 3];
    for (e, c) in CUBIC_EXPONENTS.iter().zip(c) {
        for axis in 0..3 {
            if e[axis] == 0 {
                continue;
            }
            let mut term = c * e[axis] as f64;
            for (k, &ek) in e.iter().enumerate() {
                let power = if k == axis { ek - 1 } else { ek };
                term *= u[k].powi(power as i32);
            }
            g[axis] += term;
        }
    }
    g
}

/// A root of `D` with its binormal directions.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticRoot {
    /// Unit, sign-normalized representative.
    pub direction: DVector<f64>,
    /// Unit normals `nu` with `nu^T A(u) ~ 0`. Holds the smallest left
    /// singular vector even if it misses the tolerance.
    pub binormals: Vec<DVector<f64>>,
    /// `sigma_min / sigma_max` of `A(u)`.
    pub sigma_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticCubic {
    pub coefficients: [f64; 10],
    /// `D` vanishes for every direction.
    pub identically_zero: bool,
    pub roots: Vec<AsymptoticRoot>,
}

impl AsymptoticCubic {
    pub fn eval(&self, u: &DVector<f64>) -> f64 {
        cubic_eval(&self.coefficients, &[u[0], u[1], u[2]])
    }

    pub fn scale(&self) -> f64 {
        self.coefficients.iter().map(|c| c.abs()).sum()
    }

    /// Whether `u` is projectively within `angle_tol` of a reported root.
    pub fn has_root_near(&self, u: &DVector<f64>, angle_tol: f64) -> bool {
        self.identically_zero
            || self.roots.iter().any(|r| line_angle(&r.direction, u) <= angle_tol)
    }
}

/// Resolution of the hemisphere scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    pub theta: usize,
    pub phi: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self { theta: 720, phi: 360 }
    }
}

pub fn asymptotic_cubic(jet: &MongeJet) -> Result<AsymptoticCubic> {
    asymptotic_cubic_with(jet, ScanOptions::default())
}

pub fn asymptotic_cubic_with(jet: &MongeJet, options: ScanOptions) -> Result<AsymptoticCubic> {
    let coefficients = cubic_coefficients(jet)?;
    let h_max = jet
        .quads()
        .iter()
        .map(|q| 2.0 * q.amax())
        .fold(0.0f64, f64::max);
    let scale: f64 = coefficients.iter().map(|c| c.abs()).sum();
    let identically_zero = h_max == 0.0 || scale <= 1e-12 * h_max.powi(3);
    if identically_zero {
        return Ok(AsymptoticCubic {
            coefficients,
            identically_zero,
            roots: Vec::new(),
        });
    }
    let raw = scan_roots(&coefficients, options);
    let roots = raw
        .par_iter()
        .map(|p| {
            let u = to_dvector(p);
            let test = asymptotic_test(jet, &u);
            AsymptoticRoot {
                direction: u,
                binormals: test.binormals,
                sigma_ratio: test.sigma_ratio,
            }
        })
        .collect();
    Ok(AsymptoticCubic {
        coefficients,
        identically_zero,
        roots,
    })
}

fn bisect_arc(c: &[f64; 10], a: V3, b: V3) -> V3 {
    let fa = cubic_eval(c, &a);
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let at = |s: f64| normalize([
        a[0] + s * (b[0] - a[0]),
        a[1] + s * (b[1] - a[1]),
        a[2] + s * (b[2] - a[2]),
    ]);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let fm = cubic_eval(c, &at(mid));
        if fm == 0.0 {
            return at(mid);
        }
        if (fm > 0.0) == (fa > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    at(0.5 * (lo + hi))
}

fn newton_on_sphere(c: &[f64; 10], start: V3, scale: f64) -> Option<V3> {
    let mut p = start;
    for _ in 0..200 {
        let d = cubic_eval(c, &p);
        if d.abs() <= 1e-13 * scale {
            return Some(p);
        }
        let g = cubic_gradient(c, &p);
        let gp = dot(&g, &p);
        let gt = [g[0] - gp * p[0], g[1] - gp * p[1], g[2] - gp * p[2]];
        let gg = dot(&gt, &gt);
        if gg == 0.0 {
            break;
        }
        let step = d / gg;
        p = normalize([p[0] - step * gt[0], p[1] - step * gt[1], p[2] - step * gt[2]]);
    }
    (cubic_eval(c, &p).abs() <= 1e-11 * scale).then_some(p)
}

/// Roots of `D` on the half circle `cos t a + sin t b`, `t in [0, pi]`.
fn scan_circle(c: &[f64; 10], a: V3, b: V3, samples: usize, scale: f64) -> Vec<V3> {
    let zero_eps = 1e-13 * scale;
    let point = |k: usize| {
        let t = PI * k as f64 / samples as f64;
        let (s, co) = t.sin_cos();
        [co * a[0] + s * b[0], co * a[1] + s * b[1], co * a[2] + s * b[2]]
    };
    let values: Vec<f64> = (0..=samples).map(|k| cubic_eval(c, &point(k))).collect();
    let mut roots = Vec::new();
    for (k, value) in values.iter().enumerate() {
        if value.abs() <= zero_eps {
            roots.push(point(k));
        }
    }
    for k in 0..samples {
        let (fa, fb) = (values[k], values[k + 1]);
        if fa.abs() > zero_eps && fb.abs() > zero_eps && (fa > 0.0) != (fb > 0.0) {
            roots.push(bisect_arc(c, point(k), point(k + 1)));
        }
    }
    for k in 1..samples {
        let v = values[k];
        if v.abs() > zero_eps
            && v.abs() <= values[k - 1].abs()
            && v.abs() <= values[k + 1].abs()
            && (values[k - 1] > 0.0) == (v > 0.0)
            && (values[k + 1] > 0.0) == (v > 0.0)
        {
            if let Some(p) = newton_on_sphere(c, point(k), scale) {
                roots.push(p);
            }
        }
    }
    roots
}

fn scan_roots(c: &[f64; 10], options: ScanOptions) -> Vec<V3> {
    let scale: f64 = c.iter().map(|x| x.abs()).sum();
    let zero_eps = 1e-13 * scale;
    let nth = options.theta.max(4);
    let half = (options.phi / 2).max(1);
    let rows = half + 1;
    let eq = half;
    let point = |r: usize, i: usize| -> V3 {
        let phi = if r == eq {
            PI / 2.0
        } else {
            (r as f64 + 0.5) * PI / (2 * half) as f64
        };
        let theta = 2.0 * PI * i as f64 / nth as f64;
        let (sp, cp) = phi.sin_cos();
        let (st, ct) = theta.sin_cos();
        [sp * ct, sp * st, cp]
    };
    let values: Vec<Vec<f64>> = (0..rows)
        .into_par_iter()
        .map(|r| (0..nth).map(|i| cubic_eval(c, &point(r, i))).collect())
        .collect();
    let is_zero = |r: usize, i: usize| values[r][i].abs() <= zero_eps;

    let mut edges: Vec<((usize, usize), (usize, usize))> = Vec::new();
    let mut found: Vec<V3> = Vec::new();
    for r in 0..rows {
        let limit = if r == eq { nth / 2 } else { nth };
        for i in 0..nth {
            if is_zero(r, i) && (r != eq || i <= nth / 2) {
                found.push(point(r, i));
            }
            if i < limit {
                edges.push(((r, i), (r, (i + 1) % nth)));
            }
            if r < eq {
                edges.push(((r, i), (r + 1, i)));
            }
        }
    }
    let crossings: Vec<V3> = edges
        .par_iter()
        .filter_map(|&((ra, ia), (rb, ib))| {
            let (fa, fb) = (values[ra][ia], values[rb][ib]);
            if fa.abs() <= zero_eps || fb.abs() <= zero_eps || (fa > 0.0) == (fb > 0.0) {
                return None;
            }
            Some(bisect_arc(c, point(ra, ia), point(rb, ib)))
        })
        .collect();
    found.extend(crossings);

    // Zeros without a sign change (tangencies, isolated real points).
    let minima: Vec<V3> = (1..eq.saturating_sub(1))
        .into_par_iter()
        .flat_map_iter(|r| {
            let values = &values;
            (0..nth).filter_map(move |i| {
                let v = values[r][i];
                if v.abs() <= zero_eps || v.abs() > 1e-2 * scale {
                    return None;
                }
                let neighbours = [
                    values[r - 1][i],
                    values[r + 1][i],
                    values[r][(i + 1) % nth],
                    values[r][(i + nth - 1) % nth],
                ];
                let local_min = neighbours
                    .iter()
                    .all(|w| v.abs() <= w.abs() && (*w > 0.0) == (v > 0.0));
                local_min.then(|| newton_on_sphere(c, point(r, i), scale)).flatten()
            })
        })
        .collect();
    found.extend(minima);

    let circles: [(V3, V3); 3] = [
        ([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]),
        ([0.0, 1.0, 0.0], [0.0, 0.0, 1.0]),
        ([0.0, 0.0, 1.0], [1.0, 0.0, 0.0]),
    ];
    for (a, b) in circles {
        found.extend(scan_circle(c, a, b, nth, scale));
    }
    dedupe_directions(found, 1e-9)
}

/// Sign-normalize, sort lexicographically and drop near-duplicates.
fn dedupe_directions(points: Vec<V3>, angle_tol: f64) -> Vec<V3> {
    let mut points: Vec<V3> = points.into_iter().map(|p| canonical_v3(normalize(p))).collect();
    points.sort_by(|a, b| {
        a[0].total_cmp(&b[0])
            .then(a[1].total_cmp(&b[1]))
            .then(a[2].total_cmp(&b[2]))
    });
    let mut kept: Vec<V3> = Vec::with_capacity(points.len());
    for p in points {
        let duplicate = kept.iter().rev().take_while(|q| p[0] - q[0] <= angle_tol).any(|q| {
            let d = dot(&p, q).abs().min(1.0);
            let chord = ((1.0 - d) * 2.0).max(0.0).sqrt();
            chord <= angle_tol
        });
        if !duplicate {
            kept.push(p);
        }
    }
    kept
}

/// Outcome of testing one direction.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticTest {
    pub asymptotic: bool,
    /// `sigma_min / sigma_max` of `A(u)`, zero when `A(u)` vanishes.
    pub sigma_ratio: f64,
    /// Left null vectors of `A(u)`; the smallest left singular vector when
    /// none passes the tolerance.
    pub binormals: Vec<DVector<f64>>,
}

impl AsymptoticTest {
    pub fn witness(&self) -> Option<&DVector<f64>> {
        if self.asymptotic {
            self.binormals.first()
        } else {
            None
        }
    }
}

fn asymptotic_test(jet: &MongeJet, u: &DVector<f64>) -> AsymptoticTest {
    let a = a_matrix(jet, &(u / u.norm()));
    let values = singular_values(&a);
    let largest = values.first().copied().unwrap_or(0.0);
    let smallest = if values.len() < a.nrows() {
        0.0
    } else {
        values.last().copied().unwrap_or(0.0)
    };
    let sigma_ratio = if largest == 0.0 { 0.0 } else { smallest / largest };
    let mut binormals = left_null_space(&a, ASYMPTOTIC_TOL);
    if binormals.is_empty() {
        if let Some((_, v)) = left_singular_pairs(&a).into_iter().next() {
            binormals.push(canonical_sign(v));
        }
    }
    AsymptoticTest {
        asymptotic: sigma_ratio <= ASYMPTOTIC_TOL,
        sigma_ratio,
        binormals,
    }
}

/// Whether `u` is asymptotic, with the binormal witness.
pub fn is_asymptotic(jet: &MongeJet, u: &DVector<f64>) -> Result<AsymptoticTest> {
    require_cubic_shape(jet, "is_asymptotic")?;
    if u.len() != jet.source_dim() {
        return Err(GeometryError::DimensionMismatch(format!(
            "direction has {} components for source dimension {}",
            u.len(),
            jet.source_dim()
        )));
    }
    if u.iter().any(|x| !x.is_finite()) {
        return Err(GeometryError::NonFiniteEntry { row: 0, col: 0 });
    }
    if u.amax() == 0.0 {
        return Err(GeometryError::ZeroDirection);
    }
    Ok(asymptotic_test(jet, u))
}

/// Thresholds for the four-way agreement test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquivalenceOptions {
    /// A measure below this says "asymptotic".
    pub tol: f64,
    /// A measure above this says "not asymptotic".
    pub tol_hi: f64,
    pub theta: usize,
    pub phi: usize,
}

impl Default for EquivalenceOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            tol_hi: 1e-2,
            theta: 24,
            phi: 12,
        }
    }
}

pub const MEASURE_NAMES: [&str; 4] = ["definition", "cubic", "hessian-kernel", "tangency"];

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceSample {
    pub direction: DVector<f64>,
    /// Scale-free measures that vanish exactly at asymptotic directions, in
    /// the order of [`MEASURE_NAMES`]; the tangency test is skipped for the
    /// null direction.
    pub measures: [Option<f64>; 4],
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub samples: Vec<EquivalenceSample>,
    pub disagreements: Vec<usize>,
    pub options: EquivalenceOptions,
}

impl EquivalenceReport {
    pub fn passes(&self) -> bool {
        self.disagreements.is_empty()
    }

    pub fn asymptotic_samples(&self) -> usize {
        self.samples
            .iter()
            .filter(|s| s.measures[2].is_some_and(|m| m < self.options.tol))
            .count()
    }
}

fn definition_measure(jet: &MongeJet, u: &DVector<f64>) -> f64 {
    let ii = second_form(jet);
    let n = jet.source_dim();
    let columns: Vec<DVector<f64>> = (0..n)
        .map(|j| ii.eval(u, &DVector::from_fn(n, |k, _| if k == j { 1.0 } else { 0.0 })))
        .collect();
    let m = crate::linalg::columns_matrix(&columns, jet.normal_dim());
    let gram = &m * m.transpose();
    let eig = gram.symmetric_eigenvalues();
    let max = eig.iter().copied().fold(0.0f64, f64::max);
    if max == 0.0 {
        return 0.0;
    }
    let min = eig.iter().copied().fold(f64::INFINITY, f64::min).max(0.0);
    (min / max).sqrt()
}

fn cubic_measure(jet: &MongeJet, coefficients: &[f64; 10], u: &DVector<f64>) -> f64 {
    let a = a_matrix(jet, u);
    let frob = a.norm() / 3f64.sqrt();
    if frob == 0.0 {
        return 0.0;
    }
    cubic_eval(coefficients, &[u[0], u[1], u[2]]).abs() / frob.powi(3)
}

fn kernel_measure(jet: &MongeJet, u: &DVector<f64>) -> f64 {
    asymptotic_test(jet, u).sigma_ratio
}

/// Sine of the angle between `eta(u)` and the tangent plane of the sampled
/// locus at `u`, or the conditioning of that plane when it degenerates.
fn tangency_measure(jet: &MongeJet, u: &DVector<f64>) -> Option<f64> {
    let h = 1e-5;
    let (point, d1, d2): (DVector<f64>, DVector<f64>, DVector<f64>) = if jet.corank() == 0 {
        let p = u / u.norm();
        let k = (0..3)
            .min_by(|&a, &b| p[a].abs().total_cmp(&p[b].abs()))
            .expect("three components");
        let mut e = DVector::zeros(3);
        e[k] = 1.0;
        let t1 = e.cross(&p).normalize();
        let t2 = p.cross(&t1);
        let at = |s1: f64, s2: f64| {
            let q = (&p + &t1 * s1 + &t2 * s2).normalize();
            eta(jet, &q)
        };
        (
            eta(jet, &p),
            (at(h, 0.0) - at(-h, 0.0)) / (2.0 * h),
            (at(0.0, h) - at(0.0, -h)) / (2.0 * h),
        )
    } else {
        let r = (u[0] * u[0] + u[1] * u[1]).sqrt();
        if r <= 1e-6 * u.norm() {
            return None;
        }
        let theta = u[1].atan2(u[0]);
        let c = u[2] / r;
        let at = |t: f64, c: f64| eta(jet, &DVector::from_vec(vec![t.cos(), t.sin(), c]));
        (
            at(theta, c),
            (at(theta + h, c) - at(theta - h, c)) / (2.0 * h),
            (at(theta, c + h) - at(theta, c - h)) / (2.0 * h),
        )
    };
    let (n0, n1, n2) = (point.norm(), d1.norm(), d2.norm());
    if n0 == 0.0 || n1 == 0.0 || n2 == 0.0 {
        return Some(0.0);
    }
    let cross = d1.cross(&d2);
    let conditioning = cross.norm() / (n1 * n2);
    if conditioning == 0.0 {
        return Some(0.0);
    }
    let sine = point.dot(&cross).abs() / (n0 * cross.norm());
    Some(sine.min(conditioning))
}

/// Check that four independent asymptoticity tests agree on a grid of
/// directions plus the roots of the cubic.
pub fn equivalence_check(jet: &MongeJet) -> Result<EquivalenceReport> {
    equivalence_check_with(jet, EquivalenceOptions::default())
}

pub fn equivalence_check_with(
    jet: &MongeJet,
    options: EquivalenceOptions,
) -> Result<EquivalenceReport> {
    require_cubic_shape(jet, "equivalence_check")?;
    let cubic = asymptotic_cubic(jet)?;
    let mut directions: Vec<DVector<f64>> = Vec::new();
    for j in 0..options.phi {
        let phi = (j as f64 + 0.5) * PI / options.phi as f64;
        for i in 0..options.theta {
            let theta = 2.0 * PI * i as f64 / options.theta as f64;
            let v = if jet.corank() == 0 {
                vec![phi.sin() * theta.cos(), phi.sin() * theta.sin(), phi.cos()]
            } else {
                // Heights spread over the cylinder.
                vec![theta.cos(), theta.sin(), 2.0 * phi.cos() / phi.sin().max(0.2)]
            };
            directions.push(DVector::from_vec(v));
        }
    }
    let step = (cubic.roots.len() / 64).max(1);
    directions.extend(cubic.roots.iter().step_by(step).map(|r| r.direction.clone()));
    if jet.corank() == 1 {
        directions.push(DVector::from_vec(vec![0.0, 0.0, 1.0]));
    }
    let coefficients = cubic.coefficients;
    let samples: Vec<EquivalenceSample> = directions
        .into_par_iter()
        .map(|u| {
            let measures = [
                Some(definition_measure(jet, &u)),
                Some(cubic_measure(jet, &coefficients, &u)),
                Some(kernel_measure(jet, &u)),
                tangency_measure(jet, &u),
            ];
            EquivalenceSample {
                direction: u,
                measures,
            }
        })
        .collect();
    let disagreements = samples
        .iter()
        .enumerate()
        .filter(|(_, s)| {
            let yes = s.measures.iter().flatten().any(|&m| m < options.tol);
            let no = s.measures.iter().flatten().any(|&m| m > options.tol_hi);
            yes && no
        })
        .map(|(i, _)| i)
        .collect();
    Ok(EquivalenceReport {
        samples,
        disagreements,
        options,
    })
}

/// Comparison of asymptotic data of a regular jet and its projection.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrespondenceReport {
    pub u_asymptotic: bool,
    pub u_binormal: Option<DVector<f64>>,
    pub orbit: OrbitLabel,
    pub det_alpha: f64,
    /// `u` asymptotic exactly when the projection misses the best orbit.
    pub orbit_consistent: bool,
    pub identically_zero: (bool, bool),
    pub roots: (usize, usize),
    /// Largest angle from a root of one cubic to the zero set of the other.
    pub root_distance: f64,
    /// Largest distance between binormal spaces at corresponding roots.
    pub binormal_distance: f64,
}

impl CorrespondenceReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.orbit_consistent && self.root_distance <= tol && self.binormal_distance <= tol
    }
}

fn distance_to_zero_set(c: &[f64; 10], p: V3) -> f64 {
    let scale: f64 = c.iter().map(|x| x.abs()).sum();
    let start = normalize(p);
    let mut q = start;
    for _ in 0..60 {
        let d = cubic_eval(c, &q);
        if d == 0.0 {
            break;
        }
        let g = cubic_gradient(c, &q);
        let gq = dot(&g, &q);
        let gt = [g[0] - gq * q[0], g[1] - gq * q[1], g[2] - gq * q[2]];
        let gg = dot(&gt, &gt);
        if gg == 0.0 || d.abs() <= 1e-15 * scale {
            break;
        }
        let s = d / gg;
        q = normalize([q[0] - s * gt[0], q[1] - s * gt[1], q[2] - s * gt[2]]);
    }
    if cubic_eval(c, &q).abs() > 1e-9 * scale {
        return f64::INFINITY;
    }
    line_angle(&to_dvector(&start), &to_dvector(&q))
}

fn subspace_distance(a: &[DVector<f64>], b: &[DVector<f64>]) -> f64 {
    if a.len() != b.len() {
        return 1.0;
    }
    if a.is_empty() {
        return 0.0;
    }
    let dim = a[0].len();
    let proj = |vs: &[DVector<f64>]| {
        vs.iter()
            .fold(DMatrix::zeros(dim, dim), |acc, v| acc + v * v.transpose())
    };
    singular_values(&(proj(a) - proj(b)))
        .first()
        .copied()
        .unwrap_or(0.0)
}

/// Compare the asymptotic cubic of a regular `(3, 6)` jet with that of its
/// projection along the tangent direction `u`.
pub fn projection_asymptotic_correspondence(
    jet: &MongeJet,
    u: &DVector<f64>,
) -> Result<CorrespondenceReport> {
    if jet.class() != ManifoldClass::Reg3Manifold || jet.ambient_dim() != 6 {
        return Err(GeometryError::WrongManifoldClass {
            operation: "projection_asymptotic_correspondence",
            found: format!("{} in R^{}", jet.class(), jet.ambient_dim()),
        });
    }
    let projection = project_along(jet, u)?;
    let r = &projection.rotation;
    let tangent = r.column(2).into_owned();
    let test = is_asymptotic(jet, &tangent)?;
    let orbit = classify_orbit(&projection.jet)?;
    let det_alpha = orbit.det_alpha();
    let orbit_consistent = test.asymptotic == (orbit.orbit != Orbit::Best);

    let original = asymptotic_cubic(jet)?;
    let projected = asymptotic_cubic(&projection.jet)?;
    let rotate = |m: &DMatrix<f64>, v: &DVector<f64>| -> V3 {
        let w = m * v;
        [w[0], w[1], w[2]]
    };
    let rt = r.transpose();
    let (root_distance, binormal_distance) = match (original.identically_zero, projected.identically_zero) {
        (true, true) => (0.0, 0.0),
        (false, false) => {
            let forward = original
                .roots
                .par_iter()
                .map(|root| distance_to_zero_set(&projected.coefficients, rotate(&rt, &root.direction)))
                .reduce(|| 0.0, f64::max);
            let backward = projected
                .roots
                .par_iter()
                .map(|root| distance_to_zero_set(&original.coefficients, rotate(r, &root.direction)))
                .reduce(|| 0.0, f64::max);
            let binormals = original
                .roots
                .par_iter()
                .map(|root| {
                    let image = &rt * &root.direction;
                    let other = asymptotic_test(&projection.jet, &image);
                    subspace_distance(&root.binormals, &other.binormals)
                })
                .reduce(|| 0.0, f64::max);
            (forward.max(backward), binormals)
        }
        _ => (f64::INFINITY, f64::INFINITY),
    };
    Ok(CorrespondenceReport {
        u_asymptotic: test.asymptotic,
        u_binormal: test.witness().cloned(),
        orbit,
        det_alpha,
        orbit_consistent,
        identically_zero: (original.identically_zero, projected.identically_zero),
        roots: (original.roots.len(), projected.roots.len()),
        root_distance,
        binormal_distance,
    })
}

/// Asymptotic data of a corank-1 surface at one tangent direction.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceAsymptotic {
    pub asymptotic: bool,
    /// Annihilating normals inside `E_p`.
    pub binormals: Vec<DVector<f64>>,
    /// Annihilating normals outside `E_p`.
    pub degenerate: Vec<DVector<f64>>,
    pub sigma_ratio: f64,
}

fn surface_ep(jet: &MongeJet) -> DMatrix<f64> {
    if jet.normal_dim() == 2 {
        DMatrix::identity(2, 2)
    } else {
        classify_locus(jet).ep_basis
    }
}

fn require_sing_surface(jet: &MongeJet, operation: &'static str) -> Result<()> {
    if jet.class() != ManifoldClass::SingSurface {
        return Err(GeometryError::WrongManifoldClass {
            operation,
            found: jet.class().to_string(),
        });
    }
    Ok(())
}

fn surface_m(jet: &MongeJet, u: &DVector<f64>) -> DMatrix<f64> {
    let ii = second_form(jet);
    let columns: Vec<DVector<f64>> = (0..2)
        .map(|j| ii.eval(u, &DVector::from_fn(2, |k, _| if k == j { 1.0 } else { 0.0 })))
        .collect();
    crate::linalg::columns_matrix(&columns, jet.normal_dim())
}

/// Binormal and degenerate directions of a corank-1 surface at `u`: normals
/// `nu` with `<II(u, v), nu> = 0` for all `v`, split by membership in `E_p`.
pub fn surface_asymptotic(jet: &MongeJet, u: &DVector<f64>) -> Result<SurfaceAsymptotic> {
    require_sing_surface(jet, "surface_asymptotic")?;
    if u.len() != 2 {
        return Err(GeometryError::DimensionMismatch(format!(
            "direction has {} components for a surface",
            u.len()
        )));
    }
    if u.amax() == 0.0 {
        return Err(GeometryError::ZeroDirection);
    }
    let unit = u / u.norm();
    let m = surface_m(jet, &unit);
    let p = surface_ep(jet);
    let reduced = p.transpose() * &m;
    let values = singular_values(&reduced);
    let largest = values.first().copied().unwrap_or(0.0);
    let smallest = if values.len() < reduced.nrows() {
        0.0
    } else {
        values.last().copied().unwrap_or(0.0)
    };
    let sigma_ratio = if largest == 0.0 { 0.0 } else { smallest / largest };
    let binormals: Vec<DVector<f64>> = if sigma_ratio <= ASYMPTOTIC_TOL {
        left_null_space(&reduced, ASYMPTOTIC_TOL)
            .iter()
            .map(|w| canonical_sign((&p * w).normalize()))
            .collect()
    } else {
        Vec::new()
    };
    let scale = m.amax().max(f64::MIN_POSITIVE);
    let degenerate = if jet.normal_dim() == 2 {
        Vec::new()
    } else {
        left_null_space(&m, ASYMPTOTIC_TOL)
            .into_iter()
            .filter(|v| !in_span(&p, v, 1.0, 1e-9) && m.amax() > 0.0 && (m.transpose() * v).amax() <= ASYMPTOTIC_TOL * scale)
            .collect()
    };
    Ok(SurfaceAsymptotic {
        asymptotic: sigma_ratio <= ASYMPTOTIC_TOL,
        binormals,
        degenerate,
        sigma_ratio,
    })
}

/// Asymptotic directions of a corank-1 surface: roots of the binary
/// quadratic `det(P^T M(u))`.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceDirections {
    pub identically_zero: bool,
    /// Unit, sign-normalized directions.
    pub directions: Vec<DVector<f64>>,
}

pub fn surface_asymptotic_directions(jet: &MongeJet) -> Result<SurfaceDirections> {
    require_sing_surface(jet, "surface_asymptotic_directions")?;
    let p = surface_ep(jet);
    let det_at = |a: f64, b: f64| {
        let n = p.transpose() * surface_m(jet, &DVector::from_vec(vec![a, b]));
        if n.nrows() == 2 && n.ncols() == 2 {
            n[(0, 0)] * n[(1, 1)] - n[(0, 1)] * n[(1, 0)]
        } else {
            0.0
        }
    };
    let caa = det_at(1.0, 0.0);
    let cbb = det_at(0.0, 1.0);
    let cab = det_at(1.0, 1.0) - caa - cbb;
    let s = nalgebra::Matrix2::new(caa, cab / 2.0, cab / 2.0, cbb);
    let scale = second_form(jet).matrix.amax().powi(2);
    if s.amax() <= 1e-12 * scale || scale == 0.0 {
        return Ok(SurfaceDirections {
            identically_zero: true,
            directions: Vec::new(),
        });
    }
    let eig = s.symmetric_eigen();
    let mut order = [0usize, 1];
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let (l1, l2) = (eig.eigenvalues[order[0]], eig.eigenvalues[order[1]]);
    let v1 = eig.eigenvectors.column(order[0]).into_owned();
    let v2 = eig.eigenvectors.column(order[1]).into_owned();
    let eps = 1e-10 * s.amax();
    let mut directions: Vec<DVector<f64>> = Vec::new();
    let push = |v: nalgebra::Vector2<f64>, out: &mut Vec<DVector<f64>>| {
        out.push(canonical_sign(DVector::from_vec(vec![v[0], v[1]]).normalize()));
    };
    if l1.abs() <= eps && l2.abs() <= eps {
        return Ok(SurfaceDirections {
            identically_zero: true,
            directions,
        });
    } else if l1.abs() <= eps {
        push(v1, &mut directions);
    } else if l2.abs() <= eps {
        push(v2, &mut directions);
    } else if l1 < 0.0 && l2 > 0.0 {
        let (a, b) = (l2.sqrt(), (-l1).sqrt());
        push(v1 * a + v2 * b, &mut directions);
        push(v1 * a - v2 * b, &mut directions);
    }
    directions.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    Ok(SurfaceDirections {
        identically_zero: false,
        directions,
    })
}

/// Asymptotic directions of a section against those of the 3-manifold
/// restricted to the section plane.
#[derive(Debug, Clone, PartialEq)]
pub struct SectionCorrespondence {
    pub section: MongeJet,
    /// `Aff_p = E_p` for the section.
    pub affine_equals_ep: bool,
    /// In section coordinates.
    pub restricted: Vec<DVector<f64>>,
    pub restricted_identically_zero: bool,
    pub section_directions: SurfaceDirections,
    /// Projective Hausdorff distance between the two direction sets.
    pub distance: f64,
}

/// Section of a corank-1 `(3, 5)` jet by the hyperplane with normal `u`,
/// compared with the asymptotic cubic restricted to that hyperplane.
pub fn section_asymptotic_correspondence(
    jet: &MongeJet,
    u: &ProjectiveDirection,
) -> Result<SectionCorrespondence> {
    if jet.class() != ManifoldClass::Sing3Manifold || jet.ambient_dim() != 5 {
        return Err(GeometryError::WrongManifoldClass {
            operation: "section_asymptotic_correspondence",
            found: format!("{} in R^{}", jet.class(), jet.ambient_dim()),
        });
    }
    let section = normal_section(jet, u)?;
    let basis = section_basis(jet, u)?;
    let cubic = asymptotic_cubic(jet)?;
    let inv = classify_locus(&section);
    let affine_equals_ep = inv.dim_affine_hull == inv.ep_basis.ncols()
        && in_span(&inv.ep_basis, &inv.affine_point, 1.0, 1e-9)
        && (0..inv.affine_directions.ncols()).all(|k| {
            in_span(&inv.ep_basis, &inv.affine_directions.column(k).into_owned(), 1.0, 1e-9)
        });
    let section_directions = surface_asymptotic_directions(&section)?;

    // Restrict D to the plane spanned by the (orthonormalized) basis columns.
    let q = basis.clone().qr();
    let (qm, rm) = (q.q(), q.r());
    let a: V3 = [qm[(0, 0)], qm[(1, 0)], qm[(2, 0)]];
    let b: V3 = [qm[(0, 1)], qm[(1, 1)], qm[(2, 1)]];
    let scale: f64 = cubic.coefficients.iter().map(|x| x.abs()).sum();
    let restricted_zero = cubic.identically_zero || {
        let probe: Vec<f64> = (0..16)
            .map(|k| {
                let t = PI * (k as f64 + 0.5) / 16.0;
                let p = [t.cos() * a[0] + t.sin() * b[0], t.cos() * a[1] + t.sin() * b[1], t.cos() * a[2] + t.sin() * b[2]];
                cubic_eval(&cubic.coefficients, &p)
            })
            .collect();
        probe.iter().all(|v| v.abs() <= 1e-12 * scale)
    };
    let restricted: Vec<DVector<f64>> = if restricted_zero {
        Vec::new()
    } else {
        let roots = dedupe_directions(scan_circle(&cubic.coefficients, a, b, 4096, scale), 1e-9);
        let rinv = rm.try_inverse().ok_or(GeometryError::KernelDirection)?;
        let mut out: Vec<DVector<f64>> = roots
            .iter()
            .map(|p| {
                let in_q = DVector::from_vec(vec![dot(p, &a), dot(p, &b)]);
                canonical_sign((&rinv * in_q).normalize())
            })
            .collect();
        out.sort_by(|x, y| x[0].total_cmp(&y[0]).then(x[1].total_cmp(&y[1])));
        out.dedup_by(|x, y| line_angle(x, y) <= 1e-9);
        out
    };
    let distance = match (restricted_zero, section_directions.identically_zero) {
        (true, true) => 0.0,
        (false, false) => direction_set_distance(&restricted, &section_directions.directions),
        _ => f64::INFINITY,
    };
    Ok(SectionCorrespondence {
        section,
        affine_equals_ep,
        restricted,
        restricted_identically_zero: restricted_zero,
        section_directions,
        distance,
    })
}

/// Projective Hausdorff distance between two finite sets of lines.
pub fn direction_set_distance(a: &[DVector<f64>], b: &[DVector<f64>]) -> f64 {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => return 0.0,
        (true, false) | (false, true) => return f64::INFINITY,
        _ => {}
    }
    let one_sided = |x: &[DVector<f64>], y: &[DVector<f64>]| {
        x.iter()
            .map(|p| y.iter().map(|q| line_angle(p, q)).fold(f64::INFINITY, f64::min))
            .fold(0.0f64, f64::max)
    };
    one_sided(a, b).max(one_sided(b, a))
}

/// Which case of the definition of `eta` at the null direction applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InfinityCase {
    Point,
    Curve,
    Planar,
    Limit,
}

impl InfinityCase {
    pub fn as_str(self) -> &'static str {
        match self {
            InfinityCase::Point => "point",
            InfinityCase::Curve => "curve",
            InfinityCase::Planar => "planar",
            InfinityCase::Limit => "limit",
        }
    }
}

/// `eta` and its derivatives at the null tangent direction, in normal
/// coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct EtaAtInfinity {
    pub case: InfinityCase,
    pub value: DVector<f64>,
    /// `d eta / d theta` (the parabola derivative for surfaces).
    pub d_theta: Option<DVector<f64>>,
    pub d_phi: Option<DVector<f64>>,
    /// Whether the null direction is asymptotic (3-manifolds only).
    pub u_inf_asymptotic: Option<bool>,
}

impl EtaAtInfinity {
    /// The value as an ambient vector, zero on the tangent coordinates.
    pub fn ambient(&self, jet: &MongeJet) -> DVector<f64> {
        let t = jet.ambient_dim() - jet.normal_dim();
        DVector::from_fn(jet.ambient_dim(), |i, _| if i < t { 0.0 } else { self.value[i - t] })
    }
}

fn unit_or_zero(v: DVector<f64>) -> DVector<f64> {
    let n = v.norm();
    if n == 0.0 {
        v
    } else {
        v / n
    }
}

pub fn eta_at_infinity(jet: &MongeJet) -> Result<EtaAtInfinity> {
    match jet.class() {
        ManifoldClass::SingSurface => surface_eta_at_infinity(jet),
        ManifoldClass::Sing3Manifold => manifold_eta_at_infinity(jet),
        other => Err(GeometryError::WrongManifoldClass {
            operation: "eta_at_infinity",
            found: other.to_string(),
        }),
    }
}

fn surface_eta_at_infinity(jet: &MongeJet) -> Result<EtaAtInfinity> {
    let inv = classify_locus(jet);
    let p = ParabolaCoefficients::of(jet)?;
    let zero = DVector::zeros(jet.normal_dim());
    let (case, value, d_theta) = match inv.degenerate_type {
        LocusType::Point => (InfinityCase::Point, p.l.clone(), Some(zero)),
        LocusType::Line => (InfinityCase::Curve, canonical_sign(unit_or_zero(p.m.clone())), None),
        LocusType::HalfLine => (InfinityCase::Curve, unit_or_zero(p.n.clone()), None),
        other => return Err(GeometryError::UndefinedForType(other.to_string())),
    };
    Ok(EtaAtInfinity {
        case,
        value,
        d_theta,
        d_phi: None,
        u_inf_asymptotic: None,
    })
}

fn cylinder_eta(jet: &MongeJet, theta: f64, c: f64) -> DVector<f64> {
    eta(jet, &DVector::from_vec(vec![theta.cos(), theta.sin(), c]))
}

fn manifold_eta_at_infinity(jet: &MongeJet) -> Result<EtaAtInfinity> {
    let inv = classify_locus(jet);
    let e3 = DVector::from_vec(vec![0.0, 0.0, 1.0]);
    let u_inf_asymptotic = if jet.normal_dim() == 3 {
        Some(asymptotic_test(jet, &e3).asymptotic)
    } else {
        None
    };
    let zero = DVector::zeros(jet.normal_dim());
    let out = |case, value, d_theta, d_phi| EtaAtInfinity {
        case,
        value,
        d_theta,
        d_phi,
        u_inf_asymptotic,
    };
    match inv.degenerate_type {
        LocusType::Point => Ok(out(
            InfinityCase::Point,
            inv.affine_point.clone(),
            Some(zero.clone()),
            Some(zero),
        )),
        LocusType::Curve => {
            let mut dir = canonical_sign(inv.affine_directions.column(0).into_owned());
            if inv.tag.as_deref() == Some("half-line") {
                let p = second_form(jet).column("p").expect("3-manifold column");
                if dir.dot(&p) < 0.0 {
                    dir = -dir;
                }
            }
            Ok(out(InfinityCase::Curve, dir, None, None))
        }
        LocusType::PlanarRegion => {
            let plane = &inv.affine_directions;
            let h = 1e-6;
            for k in 0..32 {
                let theta = 0.3 + 0.7 * k as f64;
                let c = 0.5 + 0.3 * k as f64;
                let d_theta = (cylinder_eta(jet, theta + h, c) - cylinder_eta(jet, theta - h, c)) / (2.0 * h);
                let d_c = (cylinder_eta(jet, theta, c + h) - cylinder_eta(jet, theta, c - h)) / (2.0 * h);
                let jac = DMatrix::from_fn(2, 2, |r, col| {
                    let v = if col == 0 { &d_theta } else { &d_c };
                    plane.column(r).dot(v)
                });
                let sv = singular_values(&jac);
                if sv[0] > 0.0 && sv[1] / sv[0] > 1e-3 {
                    let t = d_theta.normalize();
                    let in_plane = plane.transpose() * &t;
                    let perp = plane * DVector::from_vec(vec![-in_plane[1], in_plane[0]]);
                    return Ok(out(InfinityCase::Planar, t.clone(), Some(t), Some(perp.normalize())));
                }
            }
            Err(GeometryError::NonConvergentLimit(f64::INFINITY))
        }
        _ => {
            let direction_at = |theta: f64, phi: f64| {
                let v = DVector::from_vec(vec![phi.sin() * theta.cos(), phi.sin() * theta.sin(), phi.cos()]);
                unit_or_zero(eta(jet, &v))
            };
            let limit = |theta: f64| {
                let a = direction_at(theta, 1e-4);
                let b = direction_at(theta, 1e-5);
                let c = direction_at(theta, 1e-3);
                let spread = (&a - &b).norm().max((&c - &a).norm() / 10.0);
                (unit_or_zero((&b * 10.0 - &a) / 9.0), spread)
            };
            let (l1, s1) = limit(0.3);
            let (l2, s2) = limit(1.9);
            let spread = (&l1 - &l2).norm().max(s1).max(s2);
            if spread > 1e-3 || l1.norm() == 0.0 {
                return Err(GeometryError::NonConvergentLimit(spread));
            }
            Ok(out(InfinityCase::Limit, l1, None, None))
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

    fn v(x: &[f64]) -> DVector<f64> {
        DVector::from_row_slice(x)
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
    fn cubic_matches_determinant() {
        let j = cyclic();
        let c = cubic_coefficients(&j).unwrap();
        for u in [[0.3, -1.2, 0.7], [1.0, 0.0, 0.0], [-0.4, 0.25, 2.0]] {
            let a = a_matrix(&j, &v(&u));
            assert!((cubic_eval(&c, &u) - a.determinant()).abs() < 1e-12);
        }
    }

    #[test]
    fn gradient_matches_differences() {
        let c = cubic_coefficients(&cyclic()).unwrap();
        let p = [0.3, -0.5, 0.8];
        let g = cubic_gradient(&c, &p);
        for k in 0..3 {
            let mut a = p;
            let mut b = p;
            a[k] += 1e-6;
            b[k] -= 1e-6;
            let fd = (cubic_eval(&c, &a) - cubic_eval(&c, &b)) / 2e-6;
            assert!((fd - g[k]).abs() < 1e-6);
        }
    }

    #[test]
    fn cyclic_root_and_binormal() {
        let j = cyclic();
        let u = v(&[0.0, 1.0, -1.0]);
        let test = is_asymptotic(&j, &u).unwrap();
        assert!(test.asymptotic);
        assert!(line_angle(test.witness().unwrap(), &v(&[-1.0, 1.0, 1.0])) < 1e-10);
        let cubic = asymptotic_cubic(&j).unwrap();
        assert!(cubic.has_root_near(&u, 1e-8));
    }

    #[test]
    fn best_orbit_cubic_is_a_cube() {
        // D = 2 gamma^3: the null direction is not asymptotic, every
        // direction with gamma = 0 is.
        let j = Orbit::Best.normal_form();
        let c = cubic_coefficients(&j).unwrap();
        assert_eq!(c, [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 2.0]);
        let a = a_matrix(&j, &v(&[0.0, 0.0, 1.0]));
        assert_eq!(a, DMatrix::from_diagonal(&v(&[1.0, 1.0, 2.0])));
        assert!(!is_asymptotic(&j, &v(&[0.0, 0.0, 1.0])).unwrap().asymptotic);
        assert!(is_asymptotic(&j, &v(&[1.0, 0.0, 0.0])).unwrap().asymptotic);
    }

    #[test]
    fn zero_jet_is_identically_asymptotic() {
        let j = MongeJet::zero(JetShape::new(3, 6, 0).unwrap());
        let c = asymptotic_cubic(&j).unwrap();
        assert!(c.identically_zero);
        assert!(is_asymptotic(&j, &v(&[1.0, 2.0, 3.0])).unwrap().asymptotic);
        assert!(equivalence_check(&j).unwrap().passes());
    }

    #[test]
    fn roots_vanish_and_are_sorted() {
        let j = jet(3, 6, 0, &[(4, "x^2", 1.0), (4, "y*z", 0.5), (5, "y^2", -1.0), (5, "x*z", 1.0), (6, "z^2", 1.0), (6, "x*y", 0.3)]);
        let c = asymptotic_cubic_with(&j, ScanOptions { theta: 180, phi: 90 }).unwrap();
        assert!(!c.roots.is_empty());
        for r in &c.roots {
            assert!(c.eval(&r.direction).abs() < 1e-10 * c.scale());
        }
        for w in c.roots.windows(2) {
            assert!(w[0].direction[0] <= w[1].direction[0]);
        }
    }

    #[test]
    fn wrong_shapes() {
        let s = MongeJet::zero(JetShape::new(3, 5, 0).unwrap());
        assert!(asymptotic_cubic(&s).is_err());
        let j = cyclic();
        assert!(matches!(is_asymptotic(&j, &v(&[0.0, 0.0, 0.0])), Err(GeometryError::ZeroDirection)));
        assert!(matches!(is_asymptotic(&j, &v(&[1.0, 0.0])), Err(GeometryError::DimensionMismatch(_))));
    }

    #[test]
    fn degenerate_normal_of_cyclic_section() {
        let j = cyclic();
        let section = normal_section(&j, &ProjectiveDirection::new(vec![1.0, 0.0, 0.0]).unwrap()).unwrap();
        let out = surface_asymptotic(&section, &v(&[1.0, -1.0])).unwrap();
        assert!(!out.asymptotic);
        assert!(out.binormals.is_empty());
        assert_eq!(out.degenerate.len(), 1);
        assert!(line_angle(&out.degenerate[0], &v(&[-1.0, 1.0, 1.0])) < 1e-10);
    }

    #[test]
    fn section_correspondence_on_best_orbit() {
        let j = Orbit::Best.normal_form();
        let corr = section_asymptotic_correspondence(&j, &ProjectiveDirection::new(vec![0.0, 1.0, 0.0]).unwrap()).unwrap();
        assert!(corr.affine_equals_ep);
        assert_eq!(corr.restricted.len(), 1);
        assert!(corr.distance < 1e-6);
    }

    #[test]
    fn limit_at_infinity_of_best_orbit() {
        let e = eta_at_infinity(&Orbit::Best.normal_form()).unwrap();
        assert_eq!(e.case, InfinityCase::Limit);
        assert!((e.value.clone() - v(&[0.0, 0.0, 1.0])).norm() < 1e-6);
        assert_eq!(e.u_inf_asymptotic, Some(false));
    }

    #[test]
    fn planar_case_at_infinity() {
        let j = Orbit::SquareMixed.normal_form();
        let e = eta_at_infinity(&j).unwrap();
        assert_eq!(e.case, InfinityCase::Planar);
        assert!(e.value[2].abs() < 1e-9);
        assert!(e.d_phi.unwrap().dot(&e.value).abs() < 1e-9);
    }

    #[test]
    fn surface_cases_at_infinity() {
        let point = jet(2, 4, 1, &[(2, "x^2", 1.0)]);
        let e = eta_at_infinity(&point).unwrap();
        assert_eq!(e.case, InfinityCase::Point);
        assert_eq!(e.value, v(&[2.0, 0.0, 0.0]));
        let nondeg = jet(2, 4, 1, &[(2, "x*y", -2.0), (3, "x^2", 1.0), (4, "y^2", 1.0)]);
        assert!(matches!(eta_at_infinity(&nondeg), Err(GeometryError::UndefinedForType(_))));
    }
}
