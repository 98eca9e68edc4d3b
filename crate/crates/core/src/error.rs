use thiserror::Error;

/// Errors raised by jet construction and the geometry operations built on it.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("linear part is not in Monge/normal form: {0}")]
    NonMongeLinearPart(String),

    #[error("quadratic term on tangent coordinate {coordinate}: Monge form requires the identity there")]
    QuadraticOnTangentCoordinate { coordinate: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFiniteEntry { row: usize, col: usize },

    #[error("operation `{operation}` does not apply to a {found}")]
    WrongManifoldClass {
        operation: &'static str,
        found: String,
    },

    #[error("sampling grid is empty")]
    EmptyGrid,

    #[error("direction lies in the kernel of the differential")]
    KernelDirection,

    #[error("zero direction")]
    ZeroDirection,

    #[error("direction has a normal component of size {0:e}")]
    NonTangentDirection(f64),

    #[error("grid only contains the poles phi = 0 or phi = pi")]
    PoleOnlyGrid,

    #[error("limit at the null direction does not converge (spread {0:e})")]
    NonConvergentLimit(f64),

    #[error("value at the null direction is undefined for a {0}")]
    UndefinedForType(String),

    #[error("section and projection directions must be orthogonal (cosine {0:e})")]
    NonOrthogonalConfiguration(f64),

    #[error("cannot export: {0}")]
    Unsupported(String),
}

pub type Result<T, E = GeometryError> = std::result::Result<T, E>;
