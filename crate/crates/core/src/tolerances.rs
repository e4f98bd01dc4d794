//! Tolerance constants shared by the kernels and their property tests.

/// Every numeric threshold the library compares against.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerances {
    /// Unit-norm and group-membership checks.
    pub unit_norm: f64,
    /// Isometry checks for adjoint actions.
    pub isometry: f64,
    /// Orthonormality of 2-plane frames.
    pub orthonormal: f64,
    /// Gram determinant below which a 2-plane is degenerate.
    pub degenerate_gram: f64,
    /// Agreement required between successive Richardson estimates.
    pub fd_convergence: f64,
    /// Minimum-plane sectional curvature below which a point counts as flat.
    pub flat: f64,
    /// Noise floor of finite-difference sectional curvature.
    pub sec_noise_floor: f64,
    /// Agreement of closed-form and direct trace evaluations.
    pub trace_integrity: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        unit_norm: 1e-12,
        isometry: 1e-10,
        orthonormal: 1e-10,
        degenerate_gram: 1e-12,
        fd_convergence: 1e-6,
        flat: 1e-5,
        sec_noise_floor: 5e-5,
        trace_integrity: 1e-12,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}

pub const TOL: Tolerances = Tolerances::DEFAULT;
