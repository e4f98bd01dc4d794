//! The Wu manifold `SU(3)/SO(3)` with its normal symmetric metric.
//!
//! Tangent vectors at the base coset are elements of the Cartan complement
//! `p = so(3)^perp`, spanned by `-i lambda_a` for `a in {1, 3, 4, 6, 8}`.
//! Plane coordinates in this module are taken in that orthonormal basis, in
//! that order. A horizontal plane `X ^ Y` is flat iff `[X, Y] = 0`, and the
//! flats are the `SO(3)`-conjugates of the diagonal plane
//! `span(-i lambda_3, -i lambda_8)`.

mod base;
mod chart;
mod interval;
mod infeasible;
mod trace;

use alloc::vec::Vec;

use crate::algebra::{adjoint, bracket, cartan_split, euler_rotation, inner_g0, AlgVec, AlgebraTag, P_INDICES};
use crate::error::{Error, Result};
use crate::grassmann::{CurvatureOperator, PAIRS};
use crate::linalg::{orthonormal_pair, Vec5};

pub use base::{biorth_wu_at_base, distance_to_flat_orbit, min_sec_wu, OrbitDistance, WuBiorth, WuBiorthConfig, WuSecMin};
pub use chart::{fd_cross_validation, WuChart, WuCrossValidation};
pub use infeasible::{
    infeasibility_certificate, infeasibility_scan, BoxRecord, InfeasibilityCertificate, InfeasibilityConfig,
    InfeasibilityMethod, LIPSCHITZ,
};
pub use interval::Interval;
pub use trace::{trace_closed_form, trace_direct, trace_system, TraceResidual, SPOT_E11};

/// Constant `c` in `sec = c |[X, Y]|^2` for orthonormal horizontal `X, Y`.
/// O'Neill's formula gives `1/4 |[X,Y]|^2 + 3/4 |[X,Y]^v|^2` and
/// `[p, p]` is vertical; the finite-difference chart reproduces it.
pub const WU_SEC_CONSTANT: f64 = 1.0;

/// `-i lambda_{P_INDICES[k] + 1}`.
pub fn p_basis(k: usize) -> AlgVec {
    AlgVec::basis(AlgebraTag::Su3, P_INDICES[k])
}

/// `sum_k c_k p_basis(k)`.
pub fn from_p_coords(c: &Vec5) -> AlgVec {
    let mut out = [0.0; 8];
    for (k, &i) in P_INDICES.iter().enumerate() {
        out[i] = c[k];
    }
    AlgVec::from_slice(AlgebraTag::Su3, &out).expect("eight coefficients")
}

pub fn to_p_coords(x: &AlgVec) -> Vec5 {
    core::array::from_fn(|k| x.coeffs()[P_INDICES[k]])
}

fn vertical_defect(x: &AlgVec) -> Result<f64> {
    Ok(cartan_split(x)?.0.max_abs())
}

/// An orthonormal pair in `so(3)^perp`.
#[derive(Debug, Clone, PartialEq)]
pub struct HorizontalPlane {
    pub x: AlgVec,
    pub y: AlgVec,
}

impl HorizontalPlane {
    /// Checks horizontality and orthonormality to `1e-12`.
    pub fn new(x: AlgVec, y: AlgVec) -> Result<Self> {
        let tol = 1e-12;
        for v in [&x, &y] {
            let vertical = vertical_defect(v)?;
            if vertical > tol {
                return Err(Error::NotHorizontal { vertical });
            }
        }
        let (xx, yy, xy) = (inner_g0(&x, &x)?, inner_g0(&y, &y)?, inner_g0(&x, &y)?);
        let defect = (xx - 1.0).abs().max((yy - 1.0).abs()).max(xy.abs());
        if defect > tol {
            return Err(Error::DegeneratePlane {
                gram_det: xx * yy - xy * xy,
            });
        }
        Ok(HorizontalPlane { x, y })
    }

    /// Gram-Schmidt on a horizontal pair.
    pub fn from_span(a: &AlgVec, b: &AlgVec) -> Result<Self> {
        for v in [a, b] {
            let vertical = vertical_defect(v)?;
            if vertical > 1e-12 {
                return Err(Error::NotHorizontal { vertical });
            }
        }
        Self::from_coords(&to_p_coords(a), &to_p_coords(b))
    }

    pub fn from_coords(u: &Vec5, v: &Vec5) -> Result<Self> {
        let (u, v) = orthonormal_pair(u, v, crate::TOL.degenerate_gram).ok_or(Error::DegeneratePlane { gram_det: 0.0 })?;
        Ok(HorizontalPlane {
            x: from_p_coords(&u),
            y: from_p_coords(&v),
        })
    }

    /// The diagonal flat `span(-i lambda_3, -i lambda_8)`.
    pub fn reference() -> Self {
        HorizontalPlane {
            x: AlgVec::gell_mann(3),
            y: AlgVec::gell_mann(8),
        }
    }

    pub fn coords(&self) -> (Vec5, Vec5) {
        (to_p_coords(&self.x), to_p_coords(&self.y))
    }
}

/// Sectional curvature of the normal symmetric metric at the base coset.
pub fn sec_wu(plane: &HorizontalPlane) -> Result<f64> {
    let b = bracket(&plane.x, &plane.y)?;
    Ok(WU_SEC_CONSTANT * inner_g0(&b, &b)?)
}

/// `-Ad_r(lambda_3 ^ lambda_8)` with `r = euler_rotation(x, y, z)`.
pub fn flat_plane_from_euler(x: f64, y: f64, z: f64) -> HorizontalPlane {
    let r = euler_rotation(x, y, z);
    let reference = HorizontalPlane::reference();
    let ax = adjoint(&r, &reference.x).expect("su3");
    let ay = adjoint(&r, &reference.y).expect("su3");
    // Ad_r preserves p and g0, so the frame is still orthonormal.
    let (u, v) = (to_p_coords(&ax), to_p_coords(&ay));
    HorizontalPlane {
        x: from_p_coords(&u),
        y: from_p_coords(&v),
    }
}

/// The curvature operator of the base on `Lambda^2 p`:
/// `<e_i ^ e_j, K e_k ^ e_l> = c <[e_i, e_j], [e_k, e_l]>`.
pub fn wu_operator() -> CurvatureOperator {
    let brackets: Vec<AlgVec> = PAIRS
        .iter()
        .map(|&(i, j)| bracket(&p_basis(i), &p_basis(j)).expect("su3"))
        .collect();
    let k = core::array::from_fn(|a| {
        core::array::from_fn(|b| WU_SEC_CONSTANT * inner_g0(&brackets[a], &brackets[b]).expect("su3"))
    });
    CurvatureOperator { k }
}
