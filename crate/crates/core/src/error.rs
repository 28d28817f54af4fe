use thiserror::Error;

use crate::linalg::Vector;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("input vectors are linearly dependent")]
    RankDeficient,
    #[error("matrix is singular (pivot {pivot:e} below threshold)")]
    Singular { pivot: f64 },
    #[error("linear program failed to converge: {0}")]
    NumericalFailure(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("polyhedron is unbounded")]
    Unbounded,
    #[error("support function evaluated at the zero vector")]
    ZeroDirection,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("affine map is singular (|det| = {det:e})")]
    SingularMap { det: f64 },
    #[error("basis is not orthonormal or has the wrong size: {0}")]
    BadBasis(String),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("body is a single point")]
    PointBody,
    #[error("body is not an n-simplex ({vertices} vertices in dimension {dim})")]
    NotASimplex { dim: usize, vertices: usize },
    #[error("shadow covering fails in direction {direction:?}")]
    PreconditionFailed { direction: Vector },
    #[error("Vandermonde fit is ill-conditioned in dimension {0} (max 6)")]
    IllConditioned(usize),
    #[error("body has zero volume")]
    ZeroVolume,
    #[error("bad sampling strategy: {0}")]
    BadStrategy(String),
    #[error("codimension {d} out of range for dimension {n}")]
    BadCodimension { n: usize, d: usize },
    #[error("covering sweep passed but dilate containment failed (deficit {deficit:e}); sampling may be too coarse")]
    SweepInconclusive { deficit: f64 },
    #[error("body JSON: {0}")]
    Json(String),
}
