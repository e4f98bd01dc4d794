//! First-variation checks at flat configurations on the orbits of a
//! potential.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::deform::{df_ds_positivity, first_variation_sec, hessian_identity_check, DeformedPoint};
use super::potential::{orbit_tangent_normal, FlatOrbit, PotentialField};
use crate::algebra::Quat;
use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::grassmann::{quasi_gaussian, SecFunctional};
use crate::linalg::{orthonormal_pair, Vec5};
use crate::wilking::{act, analyze_curvature, FlatScanConfig, PointCurvature, S2xS3Point, WilkingChart};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlatCheckConfig {
    /// Points per orbit: the slice representative and conjugates of it.
    pub points_per_orbit: usize,
    /// Step of the central difference in `s`.
    pub eps: f64,
}

impl Default for FlatCheckConfig {
    fn default() -> Self {
        FlatCheckConfig {
            points_per_orbit: 3,
            eps: 1e-2,
        }
    }
}

/// Two flat planes at a point of an orbit and what the first-order
/// formulas say about them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlatConfiguration {
    pub tube: usize,
    pub orbit: FlatOrbit,
    pub point: S2xS3Point,
    /// Orthonormal frames in the `g_W`-orthonormal basis.
    pub planes: [(Vec5, Vec5); 2],
    /// `-1/2 Hess phi(X, X) - 1/2 Hess phi(Y, Y)` per plane.
    pub first_variation: [f64; 2],
    /// Central difference of `sec_{g_s}` in `s` per plane.
    pub fd_in_s: [f64; 2],
    pub df_ds: f64,
    /// Largest `|Hess phi(xi, xi) + 2 |xi_perp|^2|` over orthonormal
    /// tangent and normal vectors of the orbit.
    pub hessian_residual: f64,
}

impl FlatConfiguration {
    pub fn first_variation_error(&self) -> f64 {
        (0..2)
            .map(|k| (self.first_variation[k] - self.fd_in_s[k]).abs())
            .fold(0.0, f64::max)
    }
}

/// Two distinct flat planes at `pc`, as orthonormal frame coordinates.
pub fn flat_plane_pair(pc: &PointCurvature) -> Result<[(Vec5, Vec5); 2]> {
    let a = analyze_curvature(pc, &FlatScanConfig::default());
    let second = a.second_plane.filter(|_| a.flat).ok_or(Error::NotFlat {
        sec: a.min_sec,
        tolerance: crate::TOL.flat,
    })?;
    let frame = |p: &[[f64; 5]; 2]| {
        orthonormal_pair(&pc.chart_to_frame(&p[0]), &pc.chart_to_frame(&p[1]), 1e-12)
            .ok_or(Error::DegeneratePlane { gram_det: 0.0 })
    };
    Ok([frame(&a.flat_plane)?, frame(&second)?])
}

/// The `k`-th checked point of an orbit.
pub fn orbit_point(orbit: FlatOrbit, k: usize) -> S2xS3Point {
    let x = orbit.representative();
    if k == 0 {
        return x;
    }
    let g = quasi_gaussian(k);
    let q = Quat::new(g[0], g[1], g[2], g[3]).normalize();
    act(q, q, &x).expect("unit quaternion")
}

fn check_one(field: &PotentialField, tube: usize, x: &S2xS3Point, eps: f64) -> Result<FlatConfiguration> {
    let dp = DeformedPoint::new(x, field)?;
    let pc = dp.curvature(0.0)?;
    let planes = flat_plane_pair(&pc)?;
    let (plus, minus) = (dp.curvature(eps)?, dp.curvature(-eps)?);
    let mut first_variation = [0.0; 2];
    let mut fd_in_s = [0.0; 2];
    for (k, (u, v)) in planes.iter().enumerate() {
        first_variation[k] = first_variation_sec(&pc, field, u, v)?;
        fd_in_s[k] = (plus.sec(u, v) - minus.sec(u, v)) / (2.0 * eps);
    }
    let df_ds = df_ds_positivity(&pc, field, tube, &planes[0], &planes[1])?;
    let chart = WilkingChart::centered_at(&dp.point);
    let (tangent, normal) = orbit_tangent_normal(&chart)?;
    let mut hessian_residual: f64 = 0.0;
    for xi in tangent.iter().chain(&normal) {
        hessian_residual = hessian_residual.max(hessian_identity_check(field, tube, &dp.point, xi)?);
    }
    Ok(FlatConfiguration {
        tube,
        orbit: field.tubes[tube].orbit,
        point: dp.point,
        planes,
        first_variation,
        fd_in_s,
        df_ds,
        hessian_residual,
    })
}

/// Flat plane pairs at `points_per_orbit` points of every orbit of the
/// potential, in tube-major order.
pub fn flat_configuration_checks<E: Executor>(
    field: &PotentialField,
    cfg: &FlatCheckConfig,
    exec: &E,
) -> Result<Vec<FlatConfiguration>> {
    let m = cfg.points_per_orbit;
    exec.map(field.tubes.len() * m, |idx| {
        let tube = idx / m;
        let x = orbit_point(field.tubes[tube].orbit, idx % m);
        check_one(field, tube, &x, cfg.eps)
    })
    .into_iter()
    .collect()
}
