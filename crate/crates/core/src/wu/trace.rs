//! The four inner products `e_ab = <lambda_a, Ad_r lambda_b>`, `a, b in
//! {3, 8}`, for `r` in Euler angles. Two flats `Ad_r sigma_0` and
//! `Ad_r' sigma_0` are orthogonal iff all four vanish for `r^-1 r'`.

use libm::{cos, sin, sqrt};
use serde::{Deserialize, Serialize};

use crate::algebra::{adjoint, euler_rotation, inner_g0, AlgVec};
use crate::error::{Error, Result};

/// `|e11|` where the other three vanish: `cos 2x = cos 2z = 0`,
/// `cos^2 y = 1/3`.
pub const SPOT_E11: f64 = 0.577_350_269_189_625_8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceResidual {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    /// `<lambda_3, Ad lambda_3>`
    pub e11: f64,
    /// `<lambda_3, Ad lambda_8>`
    pub e18: f64,
    /// `<lambda_8, Ad lambda_3>`
    pub e81: f64,
    /// `<lambda_8, Ad lambda_8>`
    pub e88: f64,
    /// Largest difference between the closed forms and the matrix traces.
    pub discrepancy: f64,
}

impl TraceResidual {
    pub fn values(&self) -> [f64; 4] {
        [self.e11, self.e18, self.e81, self.e88]
    }

    /// `max |e_ab|`.
    pub fn max_abs(&self) -> f64 {
        self.values().iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

/// `(e11, e18, e81, e88)` from the closed trigonometric forms.
pub fn trace_closed_form(x: f64, y: f64, z: f64) -> [f64; 4] {
    let (c2x, s2x) = (cos(2.0 * x), sin(2.0 * x));
    let (c2z, s2z) = (cos(2.0 * z), sin(2.0 * z));
    let c2y = cos(2.0 * y);
    let sy = sin(y);
    let h = 0.5 * sqrt(3.0);
    [
        0.25 * c2x * (3.0 + c2y) * c2z - s2x * cos(y) * s2z,
        -h * c2x * sy * sy,
        -h * c2z * sy * sy,
        0.25 * (1.0 + 3.0 * c2y),
    ]
}

/// The same four numbers from `Ad` on matrices.
pub fn trace_direct(x: f64, y: f64, z: f64) -> [f64; 4] {
    let r = euler_rotation(x, y, z);
    let l3 = AlgVec::gell_mann(3);
    let l8 = AlgVec::gell_mann(8);
    let a3 = adjoint(&r, &l3).expect("su3");
    let a8 = adjoint(&r, &l8).expect("su3");
    let ip = |a: &AlgVec, b: &AlgVec| inner_g0(a, b).expect("su3");
    [ip(&l3, &a3), ip(&l3, &a8), ip(&l8, &a3), ip(&l8, &a8)]
}

/// Both evaluations; fails if they differ by more than the trace tolerance.
pub fn trace_system(x: f64, y: f64, z: f64) -> Result<TraceResidual> {
    let c = trace_closed_form(x, y, z);
    let d = trace_direct(x, y, z);
    let discrepancy = c.iter().zip(&d).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
    if discrepancy > crate::TOL.trace_integrity {
        return Err(Error::TraceIntegrity { discrepancy });
    }
    Ok(TraceResidual {
        x,
        y,
        z,
        e11: c[0],
        e18: c[1],
        e81: c[2],
        e88: c[3],
        discrepancy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_PI_4, PI};

    #[test]
    fn identity_rotation() {
        let t = trace_system(0.0, 0.0, 0.0).unwrap();
        assert_eq!(t.values(), [1.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn e88_vanishes_on_the_critical_cone() {
        let y = 0.5 * libm::acos(-1.0 / 3.0);
        for (x, z) in [(0.1, 0.7), (2.0, -1.3)] {
            assert!(trace_system(x, y, z).unwrap().e88.abs() < 1e-15);
        }
    }

    #[test]
    fn spot_value() {
        let y = libm::acos(1.0 / sqrt(3.0));
        for (x, z) in [(FRAC_PI_4, FRAC_PI_4), (FRAC_PI_4, 3.0 * FRAC_PI_4), (3.0 * FRAC_PI_4, PI + FRAC_PI_4)] {
            let t = trace_system(x, y, z).unwrap();
            assert!((t.e11.abs() - SPOT_E11).abs() < 1e-12);
            assert!(t.e18.abs() < 1e-12 && t.e81.abs() < 1e-12 && t.e88.abs() < 1e-12);
        }
        assert!((SPOT_E11 - 1.0 / sqrt(3.0)).abs() < 1e-15);
    }
}
