use alloc::string::String;

use crate::algebra::AlgebraTag;

/// Errors raised by the geometry kernels.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("algebra tag mismatch: {left:?} vs {right:?}")]
    TagMismatch { left: AlgebraTag, right: AlgebraTag },

    #[error("operation requires the {expected:?} algebra, got {got:?}")]
    WrongAlgebra { expected: AlgebraTag, got: AlgebraTag },

    #[error("coefficient vector has length {got}, algebra {tag:?} has dimension {expected}")]
    DimensionMismatch { tag: AlgebraTag, expected: usize, got: usize },

    #[error("group element and algebra vector are incompatible")]
    GroupAlgebraMismatch,

    #[error("degenerate 2-plane (Gram determinant {gram_det:e})")]
    DegeneratePlane { gram_det: f64 },

    #[error("2-planes are based at different points or metrics")]
    BasePointMismatch,

    #[error("not positive definite (minimum eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("endomorphism is not symmetric (asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("quaternion is not a unit (|q| = {norm})")]
    NotUnit { norm: f64 },

    #[error("point violates the S^2 x S^3 embedding constraints (defect {defect:e})")]
    NotOnManifold { defect: f64 },

    #[error("finite-difference step halving did not converge (successive estimates differ by {discrepancy:e} > {tolerance:e})")]
    OracleFailure { discrepancy: f64, tolerance: f64 },

    #[error("chart parameter outside the validity box (|t| = {norm}, radius {radius})")]
    ChartDomain { norm: f64, radius: f64 },

    #[error("rank deficiency: rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },

    #[error("feasible set is empty: theta {theta} exceeds the Grassmannian diameter {diameter}")]
    EmptyFeasibleSet { theta: f64, diameter: f64 },

    #[error("theta must be positive, got {0}")]
    NonPositiveTheta(f64),

    #[error("pair is not in K_theta: distance {distance} < theta {theta}")]
    NotInKTheta { distance: f64, theta: f64 },

    #[error("plane is not flat (sec = {sec:e}, tolerance {tolerance:e})")]
    NotFlat { sec: f64, tolerance: f64 },

    #[error("the two planes coincide")]
    IdenticalPlanes,

    #[error("vector is not horizontal (vertical component {vertical:e})")]
    NotHorizontal { vertical: f64 },

    #[error("geodesic boundary value solve did not converge (residual {residual:e})")]
    GeodesicSolve { residual: f64 },

    #[error("normal space estimate failed at cloud point {index}")]
    NormalSpace { index: usize },

    #[error("conformal factor not positive (1 + s*phi = {factor})")]
    ConformalPositivity { factor: f64 },

    #[error("closed form and direct trace disagree by {discrepancy:e}")]
    TraceIntegrity { discrepancy: f64 },

    #[error("resolution {resolution} (refinement depth {depth}) only certifies the lower bound {bound}")]
    InsufficientResolution { resolution: usize, depth: usize, bound: f64 },

    #[error("optimizer did not converge after {iterations} iterations")]
    NonConvergence { iterations: usize },

    #[error("invalid data: {0}")]
    InvalidData(String),
}

pub type Result<T> = core::result::Result<T, Error>;
