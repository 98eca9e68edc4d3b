//! Small dense linear algebra: numerical rank, null spaces and orthonormal
//! frames. Everything here works on matrices of size at most 6x6, so
//! nalgebra's dynamic SVD is used throughout.

use nalgebra::{DMatrix, DVector};

use crate::error::{GeometryError, Result};

/// Default relative tolerance for rank decisions.
pub const DEFAULT_TOL: f64 = 1e-9;

fn check_finite(matrix: &DMatrix<f64>) -> Result<()> {
    for (col, column) in matrix.column_iter().enumerate() {
        for (row, v) in column.iter().enumerate() {
            if !v.is_finite() {
                return Err(GeometryError::NonFiniteEntry { row, col });
            }
        }
    }
    Ok(())
}

/// One-sided Jacobi SVD: rotates column pairs of `matrix` until they are
/// mutually orthogonal, so the column norms are the singular values and the
/// normalized columns the left singular vectors. Returns the `min(m, k)`
/// largest values (descending) with their left vectors; vectors for zero
/// values are zero.
///
/// nalgebra's bidiagonal SVD returns inconsistent factors for some
/// rank-deficient 3x3 inputs, which breaks null-space extraction; at these
/// sizes Jacobi is cheap and accurate.
fn jacobi_svd(matrix: &DMatrix<f64>) -> (Vec<f64>, Vec<DVector<f64>>) {
    let (m, k) = matrix.shape();
    let mut b = matrix.clone();
    for _ in 0..80 {
        let mut rotated = false;
        for p in 0..k {
            for q in p + 1..k {
                let alpha = b.column(p).norm_squared();
                let beta = b.column(q).norm_squared();
                let gamma = b.column(p).dot(&b.column(q));
                if gamma == 0.0 || gamma.abs() <= 1e-16 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for r in 0..m {
                    let (bp, bq) = (b[(r, p)], b[(r, q)]);
                    b[(r, p)] = c * bp - s * bq;
                    b[(r, q)] = s * bp + c * bq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut pairs: Vec<(f64, DVector<f64>)> = (0..k)
        .map(|c| {
            let col = b.column(c).into_owned();
            let n = col.norm();
            let v = if n > 0.0 { col / n } else { DVector::zeros(m) };
            (n, v)
        })
        .collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    pairs.truncate(m.min(k));
    pairs.into_iter().unzip()
}

/// Singular values in descending order. Empty matrices have none.
pub fn singular_values(matrix: &DMatrix<f64>) -> Vec<f64> {
    if matrix.nrows() == 0 || matrix.ncols() == 0 {
        return Vec::new();
    }
    jacobi_svd(matrix).0
}

/// Numerical rank: the number of singular values at least `tol` times the
/// largest one. A zero matrix has rank 0.
pub fn rank_with_tolerance(matrix: &DMatrix<f64>, tol: f64) -> Result<usize> {
    check_finite(matrix)?;
    let values = singular_values(matrix);
    let Some(&largest) = values.first() else {
        return Ok(0);
    };
    if largest == 0.0 {
        return Ok(0);
    }
    Ok(values.iter().filter(|&&s| s >= tol * largest).count())
}

/// Rank of the matrix whose columns are `vectors` (all of length `dim`).
pub fn rank_of_columns(vectors: &[DVector<f64>], dim: usize, tol: f64) -> usize {
    rank_with_tolerance(&columns_matrix(vectors, dim), tol).unwrap_or(0)
}

pub fn columns_matrix(vectors: &[DVector<f64>], dim: usize) -> DMatrix<f64> {
    DMatrix::from_fn(dim, vectors.len(), |r, c| vectors[c][r])
}

/// Orthonormal basis (as columns) of the span of `vectors`, with rank decided
/// relative to the largest singular value. The basis is read off the left
/// singular vectors, so it is deterministic for a given input.
pub fn span_basis(vectors: &[DVector<f64>], dim: usize, tol: f64) -> DMatrix<f64> {
    let m = columns_matrix(vectors, dim);
    if m.ncols() == 0 {
        return DMatrix::zeros(dim, 0);
    }
    let (values, vectors) = jacobi_svd(&m);
    let largest = values.first().copied().unwrap_or(0.0);
    if largest == 0.0 {
        return DMatrix::zeros(dim, 0);
    }
    let keep = values.iter().filter(|&&s| s >= tol * largest).count();
    DMatrix::from_fn(dim, keep, |r, c| vectors[c][r])
}

/// Whether `v` lies in the column span of the orthonormal `basis`, measured
/// relative to `scale`.
pub fn in_span(basis: &DMatrix<f64>, v: &DVector<f64>, scale: f64, tol: f64) -> bool {
    let residual = if basis.ncols() == 0 {
        v.clone()
    } else {
        v - basis * (basis.transpose() * v)
    };
    residual.norm() <= tol * scale.max(f64::MIN_POSITIVE)
}

/// Left singular pairs of `matrix` sorted by ascending singular value, with
/// a full orthonormal basis of left vectors (missing singular values count
/// as zero). Singular vectors for negligible singular values are not
/// reliable out of the SVD, so those are rebuilt as the orthogonal
/// complement of the well-determined ones.
pub fn left_singular_pairs(matrix: &DMatrix<f64>) -> Vec<(f64, DVector<f64>)> {
    let m = matrix.nrows();
    if m == 0 {
        return Vec::new();
    }
    let mut basis: Vec<(f64, DVector<f64>)> = Vec::with_capacity(m);
    if matrix.ncols() > 0 {
        let (values, vectors) = jacobi_svd(matrix);
        let largest = values.first().copied().unwrap_or(0.0);
        for (s, v) in values.into_iter().zip(vectors) {
            if largest == 0.0 || s <= 1e-10 * largest {
                break;
            }
            if let Some(v) = orthogonalize(v, &basis) {
                basis.push((s, v));
            }
        }
    }
    while basis.len() < m {
        let candidate = (0..m)
            .filter_map(|j| {
                let e = DVector::from_fn(m, |r, _| if r == j { 1.0 } else { 0.0 });
                orthogonalize(e, &basis)
            })
            .next()
            .expect("a coordinate axis leaves the span of fewer than m vectors");
        let s = (candidate.transpose() * matrix).norm();
        basis.push((s, candidate));
    }
    basis.sort_by(|a, b| a.0.total_cmp(&b.0));
    basis
}

/// Two passes of Gram-Schmidt against `basis`; `None` if little is left.
fn orthogonalize(mut v: DVector<f64>, basis: &[(f64, DVector<f64>)]) -> Option<DVector<f64>> {
    let start = v.norm();
    for _ in 0..2 {
        for (_, b) in basis {
            let c = b.dot(&v);
            v -= b * c;
        }
    }
    let n = v.norm();
    (n > 0.1 * start && n > 0.0).then(|| v / n)
}

/// Unit vectors spanning the left null space of `matrix`: directions whose
/// singular value is below `tol` times the largest singular value (or all
/// directions when the matrix vanishes).
pub fn left_null_space(matrix: &DMatrix<f64>, tol: f64) -> Vec<DVector<f64>> {
    let pairs = left_singular_pairs(matrix);
    let largest = pairs.last().map(|p| p.0).unwrap_or(0.0);
    pairs
        .into_iter()
        .filter(|(s, _)| largest == 0.0 || *s <= tol * largest)
        .map(|(_, v)| canonical_sign(v))
        .collect()
}

/// Flip `v` so that its first component of significant size is positive.
pub fn canonical_sign(v: DVector<f64>) -> DVector<f64> {
    let scale = v.amax();
    match v.iter().find(|x| x.abs() > 1e-12 * scale.max(f64::MIN_POSITIVE)) {
        Some(&x) if x < 0.0 => -v,
        _ => v,
    }
}

/// Orthogonal Householder matrix `H` with `H e_last = u / |u|`. Returns the
/// identity when `u` already points along the last axis.
pub fn householder_to_last_axis(u: &DVector<f64>) -> DMatrix<f64> {
    let n = u.len();
    let unit = u / u.norm();
    let mut v = -unit.clone();
    v[n - 1] += 1.0;
    let vv = v.dot(&v);
    if vv < 1e-30 {
        return DMatrix::identity(n, n);
    }
    DMatrix::identity(n, n) - (&v * v.transpose()) * (2.0 / vv)
}

/// Cosine of the angle between two lines through the origin, ignoring sign.
pub fn line_cosine(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    let na = a.norm();
    let nb = b.norm();
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    (a.dot(b) / (na * nb)).abs().min(1.0)
}

/// Angle between two lines through the origin in [0, pi/2].
pub fn line_angle(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    let na = a.norm();
    let nb = b.norm();
    if na == 0.0 || nb == 0.0 {
        return std::f64::consts::FRAC_PI_2;
    }
    let ua = a / na;
    let ub = b / nb;
    // Chord-based formula stays accurate for nearly parallel lines.
    let d = (&ua - &ub).norm().min((&ua + &ub).norm());
    2.0 * (0.5 * d).min(1.0).asin()
}

pub fn det3(m: &DMatrix<f64>) -> f64 {
    m[(0, 0)] * (m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)])
        - m[(0, 1)] * (m[(1, 0)] * m[(2, 2)] - m[(1, 2)] * m[(2, 0)])
        + m[(0, 2)] * (m[(1, 0)] * m[(2, 1)] - m[(1, 1)] * m[(2, 0)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_full_rank() {
        assert_eq!(rank_with_tolerance(&DMatrix::identity(3, 3), 1e-9).unwrap(), 3);
    }

    #[test]
    fn zero_and_empty_matrices_have_rank_zero() {
        assert_eq!(rank_with_tolerance(&DMatrix::zeros(3, 6), 1e-9).unwrap(), 0);
        assert_eq!(rank_with_tolerance(&DMatrix::zeros(3, 0), 1e-9).unwrap(), 0);
    }

    #[test]
    fn product_of_thin_factors_has_rank_two() {
        let a = DMatrix::from_row_slice(3, 2, &[1.0, 2.0, -0.5, 3.0, 4.0, 0.25]);
        let b = DMatrix::from_row_slice(2, 3, &[0.3, -1.0, 2.0, 1.5, 0.7, -0.2]);
        assert_eq!(rank_with_tolerance(&(a * b), 1e-9).unwrap(), 2);
    }

    #[test]
    fn non_finite_entries_are_rejected() {
        let mut m = DMatrix::identity(2, 2);
        m[(1, 0)] = f64::NAN;
        assert_eq!(
            rank_with_tolerance(&m, 1e-9),
            Err(GeometryError::NonFiniteEntry { row: 1, col: 0 })
        );
    }

    #[test]
    fn householder_maps_last_axis_to_u() {
        let u = DVector::from_vec(vec![0.3, -0.4, 0.5]);
        let h = householder_to_last_axis(&u);
        let image = h.column(2).into_owned();
        assert!((image - &u / u.norm()).norm() < 1e-14);
        assert!((h.transpose() * &h - DMatrix::identity(3, 3)).norm() < 1e-14);
        assert_eq!(
            householder_to_last_axis(&DVector::from_vec(vec![0.0, 0.0, 2.0])),
            DMatrix::identity(3, 3)
        );
    }

    #[test]
    fn left_null_space_of_tall_matrix() {
        // 3x2 matrix always has a left null vector.
        let m = DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
        let null = left_null_space(&m, 1e-9);
        assert_eq!(null.len(), 1);
        assert!((null[0].transpose() * &m).norm() < 1e-12);
    }
}
