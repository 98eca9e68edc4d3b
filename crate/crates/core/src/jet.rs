//! Monge-form 2-jets.
//!
//! A jet stores only the quadratic part of the non-trivial ambient
//! coordinates. The linear part is implied by the shape: for corank 0 the
//! first `n` ambient coordinates are the source variables, for corank 1 the
//! first `n - 1` are, and the last source variable spans the kernel of the
//! differential.
//!
//! Quadratic parts are stored as symmetric coefficient matrices `Q` with
//! `f_i(x) = x^T Q_i x`, so the second derivative matrix of `f_i` is `2 Q_i`.

use std::fmt;

use nalgebra::{DMatrix, DVector};

use crate::error::{GeometryError, Result};

const NORMAL_COORD_NAMES: [&str; 6] = ["W", "T", "S", "U", "V", "R"];

/// Which of the four manifold types a jet describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ManifoldClass {
    RegSurface,
    Reg3Manifold,
    SingSurface,
    Sing3Manifold,
}

impl ManifoldClass {
    pub fn as_str(self) -> &'static str {
        match self {
            ManifoldClass::RegSurface => "reg-surface",
            ManifoldClass::Reg3Manifold => "reg-3manifold",
            ManifoldClass::SingSurface => "sing-surface",
            ManifoldClass::Sing3Manifold => "sing-3manifold",
        }
    }
}

impl fmt::Display for ManifoldClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Source dimension, ambient dimension and corank of a jet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct JetShape {
    pub source_dim: usize,
    pub ambient_dim: usize,
    pub corank: usize,
}

impl JetShape {
    pub fn new(source_dim: usize, ambient_dim: usize, corank: usize) -> Result<Self> {
        if !(2..=3).contains(&source_dim) {
            return Err(GeometryError::DimensionMismatch(format!(
                "source dimension {source_dim} not in {{2, 3}}"
            )));
        }
        if !(3..=6).contains(&ambient_dim) {
            return Err(GeometryError::DimensionMismatch(format!(
                "ambient dimension {ambient_dim} not in {{3, ..., 6}}"
            )));
        }
        if corank > 1 {
            return Err(GeometryError::DimensionMismatch(format!(
                "corank {corank} not in {{0, 1}}"
            )));
        }
        if ambient_dim <= source_dim {
            return Err(GeometryError::DimensionMismatch(format!(
                "ambient dimension {ambient_dim} must exceed source dimension {source_dim}"
            )));
        }
        Ok(Self {
            source_dim,
            ambient_dim,
            corank,
        })
    }

    /// Number of ambient coordinates that are identity on a source variable.
    pub fn tangent_coords(&self) -> usize {
        self.source_dim - self.corank
    }

    pub fn normal_dim(&self) -> usize {
        self.ambient_dim - self.tangent_coords()
    }

    /// Index of the kernel (null) source variable for corank-1 jets.
    pub fn kernel_index(&self) -> Option<usize> {
        (self.corank == 1).then_some(self.source_dim - 1)
    }

    pub fn class(&self) -> ManifoldClass {
        match (self.source_dim, self.corank) {
            (2, 0) => ManifoldClass::RegSurface,
            (2, _) => ManifoldClass::SingSurface,
            (_, 0) => ManifoldClass::Reg3Manifold,
            _ => ManifoldClass::Sing3Manifold,
        }
    }

    /// The canonical `m x n` linear part.
    pub fn linear_part(&self) -> DMatrix<f64> {
        let mut l = DMatrix::zeros(self.ambient_dim, self.source_dim);
        for a in 0..self.tangent_coords() {
            l[(a, a)] = 1.0;
        }
        l
    }

    pub fn default_var_names(&self) -> Vec<String> {
        ["x", "y", "z"][..self.source_dim]
            .iter()
            .map(|s| s.to_string())
            .collect()
    }

    fn default_coord_names(&self, vars: &[String]) -> Vec<String> {
        let mut names: Vec<String> = vars[..self.tangent_coords()]
            .iter()
            .map(|v| v.to_uppercase())
            .collect();
        let taken = names.clone();
        let mut pool = NORMAL_COORD_NAMES
            .iter()
            .filter(|n| !taken.iter().any(|t| t == *n));
        for i in 0..self.normal_dim() {
            names.push(
                pool.next()
                    .map(|s| s.to_string())
                    .unwrap_or_else(|| format!("N{}", i + 1)),
            );
        }
        names
    }
}

/// A monomial of degree at most two in the source variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monomial {
    Constant,
    Linear(usize),
    /// Indices sorted, `a <= b`.
    Quadratic(usize, usize),
    /// Degree three or more; dropped on ingestion.
    HigherOrder,
}

/// Parse a monomial such as `x*z`, `z^2` or `x * x` over the given variables.
pub fn parse_monomial(text: &str, vars: &[String]) -> std::result::Result<Monomial, String> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err("empty monomial".into());
    }
    if compact == "1" {
        return Ok(Monomial::Constant);
    }
    let mut factors: Vec<usize> = Vec::new();
    for factor in compact.split('*') {
        let (name, power) = match factor.split_once('^') {
            Some((name, p)) => {
                let power: usize = p
                    .parse()
                    .map_err(|_| format!("bad exponent `{p}` in `{text}`"))?;
                (name, power)
            }
            None => (factor, 1),
        };
        let idx = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| format!("unknown variable `{name}` in `{text}`"))?;
        factors.extend(std::iter::repeat_n(idx, power));
    }
    factors.sort_unstable();
    Ok(match factors.as_slice() {
        [] => Monomial::Constant,
        [a] => Monomial::Linear(*a),
        [a, b] => Monomial::Quadratic(*a, *b),
        _ => Monomial::HigherOrder,
    })
}

pub fn monomial_name(a: usize, b: usize, vars: &[String]) -> String {
    if a == b {
        format!("{}^2", vars[a])
    } else {
        format!("{}*{}", vars[a.min(b)], vars[a.max(b)])
    }
}

/// A full coefficient table: linear part (optional, `m x n`) and one
/// quadratic coefficient matrix per ambient coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    pub shape: JetShape,
    pub linear: Option<DMatrix<f64>>,
    pub quadratic: Vec<DMatrix<f64>>,
}

/// Build a jet from a full coefficient table, checking that it is in Monge
/// (corank 0) or normal (corank 1) form and symmetrizing the quadratic part.
pub fn make_jet(table: &CoefficientTable) -> Result<MongeJet> {
    let shape = table.shape;
    let (m, n) = (shape.ambient_dim, shape.source_dim);
    if let Some(linear) = &table.linear {
        if linear.shape() != (m, n) {
            return Err(GeometryError::DimensionMismatch(format!(
                "linear part is {}x{}, expected {m}x{n}",
                linear.nrows(),
                linear.ncols()
            )));
        }
        let expected = shape.linear_part();
        if let Some(((r, c), _)) = linear
            .iter()
            .zip(expected.iter())
            .enumerate()
            .map(|(k, pair)| ((k % m, k / m), pair))
            .find(|(_, (a, b))| a != b)
        {
            return Err(GeometryError::NonMongeLinearPart(format!(
                "entry ({}, {}) is {}, expected {}",
                r + 1,
                c + 1,
                linear[(r, c)],
                expected[(r, c)]
            )));
        }
    }
    if table.quadratic.len() != m {
        return Err(GeometryError::DimensionMismatch(format!(
            "{} quadratic blocks for {m} ambient coordinates",
            table.quadratic.len()
        )));
    }
    for (i, q) in table.quadratic.iter().enumerate().take(shape.tangent_coords()) {
        if q.iter().any(|&v| v != 0.0) {
            return Err(GeometryError::QuadraticOnTangentCoordinate { coordinate: i + 1 });
        }
    }
    MongeJet::new(shape, table.quadratic[shape.tangent_coords()..].to_vec())
}

/// A corank-0 or corank-1 2-jet in Monge/normal form at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct MongeJet {
    shape: JetShape,
    quad: Vec<DMatrix<f64>>,
    var_names: Vec<String>,
    coord_names: Vec<String>,
}

impl MongeJet {
    /// Jet from the quadratic blocks of the normal coordinates (one `n x n`
    /// block each). Blocks are symmetrized to `(Q + Q^T) / 2`.
    pub fn new(shape: JetShape, quad: Vec<DMatrix<f64>>) -> Result<Self> {
        let n = shape.source_dim;
        if quad.len() != shape.normal_dim() {
            return Err(GeometryError::DimensionMismatch(format!(
                "{} quadratic blocks for {} normal coordinates",
                quad.len(),
                shape.normal_dim()
            )));
        }
        let mut sym = Vec::with_capacity(quad.len());
        for (i, q) in quad.into_iter().enumerate() {
            if q.shape() != (n, n) {
                return Err(GeometryError::DimensionMismatch(format!(
                    "block {} is {}x{}, expected {n}x{n}",
                    i + 1,
                    q.nrows(),
                    q.ncols()
                )));
            }
            for r in 0..n {
                for c in 0..n {
                    if !q[(r, c)].is_finite() {
                        return Err(GeometryError::NonFiniteEntry { row: r, col: c });
                    }
                }
            }
            sym.push(DMatrix::from_fn(n, n, |r, c| {
                if r == c {
                    q[(r, c)]
                } else {
                    0.5 * (q[(r, c)] + q[(c, r)])
                }
            }));
        }
        let var_names = shape.default_var_names();
        let coord_names = shape.default_coord_names(&var_names);
        Ok(Self {
            shape,
            quad: sym,
            var_names,
            coord_names,
        })
    }

    pub fn zero(shape: JetShape) -> Self {
        let n = shape.source_dim;
        Self::new(shape, vec![DMatrix::zeros(n, n); shape.normal_dim()])
            .expect("zero blocks are well formed")
    }

    /// Jet from polynomial terms `(ambient coordinate, monomial, coefficient)`
    /// with 1-based coordinates, e.g. `(4, "x*z", 1.0)`. Repeated terms add.
    pub fn from_terms(shape: JetShape, terms: &[(usize, &str, f64)]) -> Result<Self> {
        let vars = shape.default_var_names();
        let owned: Vec<(usize, String, f64)> = terms
            .iter()
            .map(|(c, m, v)| (*c, m.to_string(), *v))
            .collect();
        Self::from_terms_with_vars(shape, &owned, &vars)
    }

    pub fn from_terms_with_vars(
        shape: JetShape,
        terms: &[(usize, String, f64)],
        vars: &[String],
    ) -> Result<Self> {
        if vars.len() != shape.source_dim {
            return Err(GeometryError::DimensionMismatch(format!(
                "{} variable names for source dimension {}",
                vars.len(),
                shape.source_dim
            )));
        }
        let (m, n) = (shape.ambient_dim, shape.source_dim);
        let mut linear = shape.linear_part();
        let mut quadratic = vec![DMatrix::zeros(n, n); m];
        for (coord, monomial, coeff) in terms {
            if *coord == 0 || *coord > m {
                return Err(GeometryError::DimensionMismatch(format!(
                    "coordinate {coord} outside 1..={m}"
                )));
            }
            let i = coord - 1;
            let parsed =
                parse_monomial(monomial, vars).map_err(GeometryError::DimensionMismatch)?;
            match parsed {
                Monomial::Constant => {
                    return Err(GeometryError::NonMongeLinearPart(format!(
                        "constant term on coordinate {coord}"
                    )))
                }
                Monomial::Linear(a) => {
                    // Identity entries may be restated; anything else breaks
                    // the Monge/normal form.
                    if linear[(i, a)] != *coeff {
                        linear[(i, a)] += coeff;
                    }
                }
                Monomial::Quadratic(a, b) => {
                    if a == b {
                        quadratic[i][(a, a)] += coeff;
                    } else {
                        quadratic[i][(a, b)] += 0.5 * coeff;
                        quadratic[i][(b, a)] += 0.5 * coeff;
                    }
                }
                Monomial::HigherOrder => {}
            }
        }
        let mut jet = make_jet(&CoefficientTable {
            shape,
            linear: Some(linear),
            quadratic,
        })?;
        jet.var_names = vars.to_vec();
        jet.coord_names = shape.default_coord_names(vars);
        Ok(jet)
    }

    pub fn with_names(mut self, vars: Vec<String>, coords: Vec<String>) -> Result<Self> {
        if vars.len() != self.shape.source_dim || coords.len() != self.shape.ambient_dim {
            return Err(GeometryError::DimensionMismatch(
                "name lists do not match jet dimensions".into(),
            ));
        }
        self.var_names = vars;
        self.coord_names = coords;
        Ok(self)
    }

    pub fn with_var_names(mut self, vars: Vec<String>) -> Self {
        assert_eq!(vars.len(), self.shape.source_dim);
        self.coord_names = self.shape.default_coord_names(&vars);
        self.var_names = vars;
        self
    }

    pub fn shape(&self) -> JetShape {
        self.shape
    }

    pub fn class(&self) -> ManifoldClass {
        self.shape.class()
    }

    pub fn source_dim(&self) -> usize {
        self.shape.source_dim
    }

    pub fn ambient_dim(&self) -> usize {
        self.shape.ambient_dim
    }

    pub fn corank(&self) -> usize {
        self.shape.corank
    }

    pub fn normal_dim(&self) -> usize {
        self.shape.normal_dim()
    }

    pub fn var_names(&self) -> &[String] {
        &self.var_names
    }

    pub fn coord_names(&self) -> &[String] {
        &self.coord_names
    }

    /// Symmetric coefficient matrix of the `i`-th normal coordinate (0-based).
    pub fn quad(&self, i: usize) -> &DMatrix<f64> {
        &self.quad[i]
    }

    pub fn quads(&self) -> &[DMatrix<f64>] {
        &self.quad
    }

    /// Second derivative matrix of the `i`-th normal coordinate.
    pub fn hessian(&self, i: usize) -> DMatrix<f64> {
        &self.quad[i] * 2.0
    }

    pub fn linear_part(&self) -> DMatrix<f64> {
        self.shape.linear_part()
    }

    /// The full `m`-block table, tangent coordinates carrying zero blocks.
    pub fn to_table(&self) -> CoefficientTable {
        let n = self.shape.source_dim;
        let mut quadratic = vec![DMatrix::zeros(n, n); self.shape.tangent_coords()];
        quadratic.extend(self.quad.iter().cloned());
        CoefficientTable {
            shape: self.shape,
            linear: Some(self.linear_part()),
            quadratic,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.quad.iter().all(|q| q.iter().all(|&v| v == 0.0))
    }

    /// Nonzero polynomial terms `(1-based ambient coordinate, monomial,
    /// coefficient)` in coordinate-then-monomial order.
    pub fn terms(&self) -> Vec<(usize, String, f64)> {
        let n = self.shape.source_dim;
        let offset = self.shape.tangent_coords();
        let mut out = Vec::new();
        for (i, q) in self.quad.iter().enumerate() {
            for a in 0..n {
                for b in a..n {
                    let c = if a == b { q[(a, a)] } else { 2.0 * q[(a, b)] };
                    if c != 0.0 {
                        out.push((offset + i + 1, monomial_name(a, b, &self.var_names), c));
                    }
                }
            }
        }
        out
    }

    /// Quadratic value `(x^T Q_i x)_i` of the normal coordinates.
    pub fn quadratic_value(&self, x: &DVector<f64>) -> DVector<f64> {
        DVector::from_iterator(self.quad.len(), self.quad.iter().map(|q| (x.transpose() * q * x)[0]))
    }

    /// Apply a linear substitution `x = S x'` in the source: `Q' = S^T Q S`.
    /// The result keeps this jet's shape; callers are responsible for `S`
    /// preserving the Monge/normal linear part.
    pub fn substitute_source(&self, s: &DMatrix<f64>) -> MongeJet {
        let quad = self.quad.iter().map(|q| s.transpose() * q * s).collect();
        MongeJet::new(self.shape, quad).expect("substitution preserves block sizes")
    }

    /// Replace the normal coordinates by `G` times them: `Q'_i = sum_k G_ik Q_k`.
    pub fn mix_normals(&self, g: &DMatrix<f64>) -> MongeJet {
        let n = self.shape.source_dim;
        let quad = (0..g.nrows())
            .map(|i| {
                let mut acc = DMatrix::zeros(n, n);
                for (k, q) in self.quad.iter().enumerate() {
                    acc += q * g[(i, k)];
                }
                acc
            })
            .collect();
        MongeJet::new(self.shape, quad).expect("mixing preserves block sizes")
    }

    /// Largest coefficientwise difference to another jet of the same shape.
    pub fn max_abs_diff(&self, other: &MongeJet) -> f64 {
        if self.shape != other.shape {
            return f64::INFINITY;
        }
        self.quad
            .iter()
            .zip(&other.quad)
            .map(|(a, b)| (a - b).amax())
            .fold(0.0, f64::max)
    }

    /// Drop trailing normal coordinates whose quadratic part vanishes, as long
    /// as the result is still a valid shape.
    pub fn drop_trailing_zero_normals(&self) -> MongeJet {
        let mut jet = self.clone();
        while jet.quad.len() > 1
            && jet.quad.last().is_some_and(|q| q.iter().all(|&v| v == 0.0))
        {
            let Ok(shape) = JetShape::new(
                jet.shape.source_dim,
                jet.shape.ambient_dim - 1,
                jet.shape.corank,
            ) else {
                break;
            };
            if shape.normal_dim() < 1 || (shape.corank == 1 && shape.normal_dim() < 2) {
                break;
            }
            jet.quad.pop();
            jet.coord_names.pop();
            jet.shape = shape;
        }
        jet
    }
}

impl fmt::Display for MongeJet {
    /// Writes the parametrization, e.g. `(x, y, x^2 - 2 y*z, ...)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.shape.source_dim;
        let mut parts: Vec<String> = self.var_names[..self.shape.tangent_coords()].to_vec();
        for q in &self.quad {
            let mut s = String::new();
            for a in 0..n {
                for b in a..n {
                    let c = if a == b { q[(a, a)] } else { 2.0 * q[(a, b)] };
                    if c == 0.0 {
                        continue;
                    }
                    let mono = monomial_name(a, b, &self.var_names);
                    let sign = if c < 0.0 { "-" } else { "+" };
                    let mag = c.abs();
                    let body = if mag == 1.0 { mono } else { format!("{mag}*{mono}") };
                    if s.is_empty() {
                        s = if c < 0.0 { format!("-{body}") } else { body };
                    } else {
                        s = format!("{s} {sign} {body}");
                    }
                }
            }
            parts.push(if s.is_empty() { "0".into() } else { s });
        }
        write!(f, "({})", parts.join(", "))
    }
}

/// How a projective tangent direction sits relative to the unit tangent set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScaleClass {
    Affine,
    /// The null tangent direction of a corank-1 jet (`u_inf`).
    Infinite,
}

/// A nonzero tangent direction, equal to any nonzero multiple of itself.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveDirection {
    components: DVector<f64>,
    scale_class: ScaleClass,
}

/// Default angle below which two projective directions are equal.
pub const DIRECTION_ANGLE_TOL: f64 = 1e-8;

impl ProjectiveDirection {
    pub fn new(components: Vec<f64>) -> Result<Self> {
        Self::from_vector(DVector::from_vec(components))
    }

    pub fn from_vector(components: DVector<f64>) -> Result<Self> {
        if let Some(i) = components.iter().position(|v| !v.is_finite()) {
            return Err(GeometryError::NonFiniteEntry { row: i, col: 0 });
        }
        if components.iter().all(|&v| v == 0.0) {
            return Err(GeometryError::ZeroDirection);
        }
        Ok(Self {
            components,
            scale_class: ScaleClass::Affine,
        })
    }

    /// Direction in the source of `jet`, flagged infinite when it is the
    /// kernel direction of a corank-1 jet.
    pub fn for_jet(jet: &MongeJet, components: Vec<f64>) -> Result<Self> {
        if components.len() != jet.source_dim() {
            return Err(GeometryError::DimensionMismatch(format!(
                "direction has {} components, source dimension is {}",
                components.len(),
                jet.source_dim()
            )));
        }
        let mut dir = Self::new(components)?;
        if jet.corank() == 1 {
            let t = jet.shape().tangent_coords();
            let scale = dir.components.amax();
            if dir.components.rows(0, t).amax() <= 1e-14 * scale {
                dir.scale_class = ScaleClass::Infinite;
            }
        }
        Ok(dir)
    }

    pub fn components(&self) -> &DVector<f64> {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn scale_class(&self) -> ScaleClass {
        self.scale_class
    }

    pub fn is_infinite(&self) -> bool {
        self.scale_class == ScaleClass::Infinite
    }

    pub fn normalized(&self) -> DVector<f64> {
        &self.components / self.components.norm()
    }

    /// Unit representative whose first significant component is positive.
    pub fn canonical(&self) -> DVector<f64> {
        crate::linalg::canonical_sign(self.normalized())
    }

    pub fn angle_to(&self, other: &ProjectiveDirection) -> f64 {
        crate::linalg::line_angle(&self.components, &other.components)
    }

    pub fn approx_eq(&self, other: &ProjectiveDirection, angle_tol: f64) -> bool {
        self.len() == other.len() && self.angle_to(other) < angle_tol
    }
}

/// A nonzero vector of the normal space, in the jet's normal frame.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalDirection {
    components: DVector<f64>,
}

impl NormalDirection {
    pub fn new(components: DVector<f64>) -> Result<Self> {
        if components.iter().all(|&v| v == 0.0) {
            return Err(GeometryError::ZeroDirection);
        }
        Ok(Self { components })
    }

    pub fn components(&self) -> &DVector<f64> {
        &self.components
    }

    pub fn normalized(&self) -> DVector<f64> {
        &self.components / self.components.norm()
    }

    pub fn canonical(&self) -> DVector<f64> {
        crate::linalg::canonical_sign(self.normalized())
    }

    pub fn approx_eq(&self, other: &NormalDirection, angle_tol: f64) -> bool {
        self.components.len() == other.components.len()
            && crate::linalg::line_angle(&self.components, &other.components) < angle_tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(n: usize, m: usize, c: usize) -> JetShape {
        JetShape::new(n, m, c).unwrap()
    }

    #[test]
    fn roman_steiner_jet_is_valid() {
        let h = std::f64::consts::SQRT_2 / 2.0;
        let jet = MongeJet::from_terms(
            shape(3, 6, 0),
            &[(4, "x*y", h), (5, "x*z", h), (6, "y*z", h)],
        )
        .unwrap();
        assert_eq!(jet.class(), ManifoldClass::Reg3Manifold);
        assert_eq!(jet.normal_dim(), 3);
        assert_eq!(jet.quad(0)[(0, 1)], h / 2.0);
        assert_eq!(jet.hessian(2)[(1, 2)], h);
        assert_eq!(jet.coord_names(), ["X", "Y", "Z", "W", "T", "S"]);
    }

    #[test]
    fn zero_table_is_the_deepest_orbit_representative() {
        let jet = MongeJet::from_terms(shape(3, 5, 1), &[]).unwrap();
        assert!(jet.is_zero());
        assert_eq!(jet, MongeJet::zero(shape(3, 5, 1)));
        assert_eq!(jet.to_string(), "(x, y, 0, 0, 0)");
    }

    #[test]
    fn asymmetric_table_is_symmetrized_to_the_average() {
        let s = shape(3, 5, 1);
        let mut q = DMatrix::zeros(3, 3);
        q[(1, 2)] = 1.0;
        q[(2, 1)] = 3.0;
        let jet = MongeJet::new(s, vec![q, DMatrix::zeros(3, 3), DMatrix::zeros(3, 3)]).unwrap();
        assert_eq!(jet.quad(0)[(1, 2)], 2.0);
        assert_eq!(jet.quad(0)[(2, 1)], 2.0);
        let again = MongeJet::new(s, jet.quads().to_vec()).unwrap();
        assert_eq!(again, jet);
    }

    #[test]
    fn non_monge_linear_parts_are_rejected() {
        let s = shape(3, 5, 1);
        assert!(matches!(
            MongeJet::from_terms(s, &[(3, "z", 1.0)]),
            Err(GeometryError::NonMongeLinearPart(_))
        ));
        assert!(matches!(
            MongeJet::from_terms(s, &[(1, "x", 2.0)]),
            Err(GeometryError::NonMongeLinearPart(_))
        ));
        assert!(matches!(
            MongeJet::from_terms(s, &[(2, "1", 1.0)]),
            Err(GeometryError::NonMongeLinearPart(_))
        ));
        // restating the identity is fine
        assert!(MongeJet::from_terms(s, &[(1, "x", 1.0), (2, "y", 1.0)]).is_ok());
        assert!(matches!(
            MongeJet::from_terms(s, &[(1, "z^2", 1.0)]),
            Err(GeometryError::QuadraticOnTangentCoordinate { coordinate: 1 })
        ));
    }

    #[test]
    fn table_dimension_mismatch() {
        let s = shape(3, 5, 1);
        let table = CoefficientTable {
            shape: s,
            linear: None,
            quadratic: vec![DMatrix::zeros(3, 3); 4],
        };
        assert!(matches!(make_jet(&table), Err(GeometryError::DimensionMismatch(_))));
        assert!(JetShape::new(3, 3, 0).is_err());
        assert!(JetShape::new(4, 6, 0).is_err());
        assert!(JetShape::new(2, 4, 2).is_err());
    }

    #[test]
    fn monomial_syntax() {
        let vars: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        assert_eq!(parse_monomial(" z ^ 2", &vars), Ok(Monomial::Quadratic(2, 2)));
        assert_eq!(parse_monomial("z*x", &vars), Ok(Monomial::Quadratic(0, 2)));
        assert_eq!(parse_monomial("y", &vars), Ok(Monomial::Linear(1)));
        assert_eq!(parse_monomial("y^3", &vars), Ok(Monomial::HigherOrder));
        assert!(parse_monomial("w*x", &vars).is_err());
    }

    #[test]
    fn cubic_terms_are_truncated() {
        let s = shape(3, 5, 1);
        let jet = MongeJet::from_terms(s, &[(3, "x*z", 1.0), (4, "y^3", 7.0)]).unwrap();
        assert_eq!(jet, MongeJet::from_terms(s, &[(3, "x*z", 1.0)]).unwrap());
    }

    #[test]
    fn display_and_terms() {
        let jet = MongeJet::from_terms(
            shape(3, 5, 1),
            &[(3, "x^2", 1.0), (3, "y*z", -2.0), (4, "y^2", 1.0), (5, "z^2", 0.5)],
        )
        .unwrap();
        assert_eq!(jet.to_string(), "(x, y, x^2 - 2*y*z, y^2, 0.5*z^2)");
        let terms = jet.terms();
        assert_eq!(terms[1], (3, "y*z".to_string(), -2.0));
    }

    #[test]
    fn null_direction_is_flagged_infinite() {
        let jet = MongeJet::zero(shape(3, 5, 1));
        assert!(ProjectiveDirection::for_jet(&jet, vec![0.0, 0.0, 2.0])
            .unwrap()
            .is_infinite());
        assert!(!ProjectiveDirection::for_jet(&jet, vec![1.0, 0.0, 2.0])
            .unwrap()
            .is_infinite());
        assert_eq!(
            ProjectiveDirection::new(vec![0.0, 0.0]),
            Err(GeometryError::ZeroDirection)
        );
    }

    #[test]
    fn projective_equality_ignores_scale_and_sign() {
        let a = ProjectiveDirection::new(vec![0.0, 1.0, -1.0]).unwrap();
        let b = ProjectiveDirection::new(vec![0.0, -3.0, 3.0]).unwrap();
        let c = ProjectiveDirection::new(vec![0.0, 1.0, -1.0 + 1e-6]).unwrap();
        assert!(a.approx_eq(&b, DIRECTION_ANGLE_TOL));
        assert!(!a.approx_eq(&c, DIRECTION_ANGLE_TOL));
    }

    #[test]
    fn trailing_zero_normals_can_be_dropped() {
        let jet = MongeJet::from_terms(shape(2, 5, 0), &[(3, "x^2", 1.0), (4, "x*y", 1.0)]).unwrap();
        let dropped = jet.drop_trailing_zero_normals();
        assert_eq!(dropped.ambient_dim(), 4);
        assert_eq!(dropped.quads(), &jet.quads()[..2]);
    }
}
