//! The conformal family `g_s = (1 + s phi) g_W` and its first variation.

use alloc::vec::Vec;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::potential::{PotentialField, PotentialSupport};
use crate::curvature::{riemann_from_samples, stencil_points, ChartSpec, MetricField, RiemannReport};
use crate::error::{Error, Result};
use crate::grassmann::{frame_distance, plane_distance, MetricTag, PlaneBase, SecFunctional, TwoPlane};
use crate::linalg::{sym_eigen, Vec5};
use crate::wilking::{exp_point, PointCurvature, S2xS3Point, WilkingChart};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeformConfig {
    /// Deformation scale `s >= 0`.
    pub s: f64,
    /// Plane separation defining `K_theta`.
    pub theta: f64,
    /// Inner and outer tube radii of the cutoffs, in `g_W` distance.
    pub r0: f64,
    pub r1: f64,
    pub support: PotentialSupport,
}

impl Default for DeformConfig {
    fn default() -> Self {
        DeformConfig {
            s: 0.0,
            theta: 0.1,
            r0: 0.1,
            r1: 0.25,
            support: PotentialSupport::SpheresAndRp3,
        }
    }
}

impl DeformConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.theta > 0.0) {
            return Err(Error::NonPositiveTheta(self.theta));
        }
        if !(self.s >= 0.0) || !(self.r0 > 0.0 && self.r0 < self.r1) {
            return Err(Error::InvalidData(alloc::format!(
                "need s >= 0 and 0 < r0 < r1, got s = {}, r0 = {}, r1 = {}",
                self.s,
                self.r0,
                self.r1
            )));
        }
        Ok(())
    }

    /// `1/2` of the positivity bound `1 / sup |phi|`.
    pub fn s_max(field: &PotentialField) -> f64 {
        0.5 / field.phi_bound()
    }
}

fn conformal_factor(s: f64, phi: f64) -> Result<f64> {
    let factor = 1.0 + s * phi;
    if !(factor > 0.0) {
        return Err(Error::ConformalPositivity { factor });
    }
    Ok(factor)
}

/// `g_s` in a Wilking chart.
#[derive(Debug, Clone)]
pub struct DeformedChart<'a> {
    pub chart: WilkingChart,
    pub field: &'a PotentialField,
    pub s: f64,
}

impl MetricField for DeformedChart<'_> {
    fn chart(&self) -> ChartSpec {
        self.chart.spec()
    }

    fn metric(&self, t: &[f64]) -> Result<DMatrix<f64>> {
        let g = self.chart.metric(t)?;
        let phi = self.field.phi(&self.chart.point(t))?;
        Ok(g * conformal_factor(self.s, phi)?)
    }
}

pub fn deformed_metric<'a>(chart: WilkingChart, field: &'a PotentialField, s: f64) -> DeformedChart<'a> {
    DeformedChart { chart, field, s }
}

/// Metric and potential samples on the curvature stencil of one point, so
/// that the curvature of every `g_s` costs one tensor assembly.
#[derive(Debug, Clone)]
pub struct DeformedPoint {
    pub point: S2xS3Point,
    pub chart: WilkingChart,
    gw: Vec<DMatrix<f64>>,
    phi: Vec<f64>,
}

impl DeformedPoint {
    pub fn new(x: &S2xS3Point, field: &PotentialField) -> Result<Self> {
        let chart = WilkingChart::centered_at(x);
        let pts = stencil_points(&[0.0; 5], chart.spec().fd_step);
        let mut gw = Vec::with_capacity(pts.len());
        let mut phi = Vec::with_capacity(pts.len());
        for t in &pts {
            gw.push(chart.metric(t)?);
            phi.push(field.phi(&chart.point(t))?);
        }
        Ok(DeformedPoint {
            point: chart.center(),
            chart,
            gw,
            phi,
        })
    }

    /// `phi` at the point.
    pub fn phi(&self) -> f64 {
        self.phi[0]
    }

    /// Whether `phi` vanishes on the whole stencil, so `g_s = g_W` there.
    pub fn undeformed(&self) -> bool {
        self.phi.iter().all(|&p| p == 0.0)
    }

    pub fn report(&self, s: f64) -> Result<RiemannReport> {
        let samples = self
            .gw
            .iter()
            .zip(&self.phi)
            .map(|(g, &p)| Ok(g * conformal_factor(s, p)?))
            .collect::<Result<Vec<_>>>()?;
        riemann_from_samples(5, self.chart.spec().fd_step, &samples, crate::TOL.fd_convergence)
    }

    /// Curvature of `g_s`. The orthonormal frame is the `g_W` frame scaled
    /// by `(1 + s phi)^(-1/2)`, so frame coordinates of a plane do not
    /// depend on `s`.
    pub fn curvature(&self, s: f64) -> Result<PointCurvature> {
        Ok(PointCurvature::from_report(self.chart.clone(), self.report(s)?))
    }

    /// Planes based here, in the frame coordinates of [`Self::curvature`].
    pub fn plane_base(&self) -> PlaneBase {
        PlaneBase::new(self.point.to_array(), MetricTag::Deformed)
    }
}

/// `d^2/dt^2 phi(exp_x(t xi))` at `t = 0`, by central differences at `h`
/// and `h/2` combined by Richardson extrapolation.
pub fn hess_phi(field: &PotentialField, chart: &WilkingChart, xi: &[f64; 5]) -> Result<f64> {
    let phi0 = field.phi(&chart.center())?;
    let second = |h: f64| -> Result<f64> {
        let p = field.phi(&exp_point(chart, xi, h)?)?;
        let m = field.phi(&exp_point(chart, xi, -h)?)?;
        Ok((p - 2.0 * phi0 + m) / (h * h))
    };
    let h = 1e-3;
    let (a, b) = (second(h)?, second(0.5 * h)?);
    Ok(b + (b - a) / 3.0)
}

fn check_flat(pc: &PointCurvature, u: &Vec5, v: &Vec5) -> Result<()> {
    let sec = pc.sec(u, v);
    if sec.abs() > crate::TOL.flat {
        return Err(Error::NotFlat {
            sec,
            tolerance: crate::TOL.flat,
        });
    }
    Ok(())
}

/// `-1/2 Hess phi(X, X) - 1/2 Hess phi(Y, Y)` for a flat `g_W` plane with
/// orthonormal frame `(u, v)` in the frame coordinates of `pc`.
pub fn first_variation_sec(pc: &PointCurvature, field: &PotentialField, u: &Vec5, v: &Vec5) -> Result<f64> {
    check_flat(pc, u, v)?;
    let hx = hess_phi(field, &pc.chart, &pc.to_chart(u))?;
    let hy = hess_phi(field, &pc.chart, &pc.to_chart(v))?;
    Ok(-0.5 * hx - 0.5 * hy)
}

/// `|Hess phi(X, X) + 2 |X_perp|^2|` at a point `x` of orbit `tube` for a
/// chart vector `xi` of the chart centered at `x`.
pub fn hessian_identity_check(field: &PotentialField, tube: usize, x: &S2xS3Point, xi: &[f64; 5]) -> Result<f64> {
    let t = field.tubes.get(tube).ok_or(Error::NormalSpace { index: tube })?;
    if t.orbit.chordal_distance(x) > 1e-8 {
        return Err(Error::NormalSpace { index: tube });
    }
    let chart = WilkingChart::centered_at(x);
    let (_, normal) = super::potential::orbit_tangent_normal(&chart).map_err(|_| Error::NormalSpace { index: tube })?;
    let g = chart.metric(&[0.0; 5])?;
    let ip = |a: &[f64; 5], b: &[f64; 5]| -> f64 {
        (0..5).map(|i| (0..5).map(|j| a[i] * g[(i, j)] * b[j]).sum::<f64>()).sum()
    };
    let perp: f64 = normal.iter().map(|n| { let c = ip(xi, n); c * c }).sum();
    Ok((hess_phi(field, &chart, xi)? + 2.0 * perp).abs())
}

/// `1/2 (sec_{g_s}(sigma) + sec_{g_s}(sigma'))` for a pair in `K_theta`.
pub fn f_eval(curv: &PointCurvature, theta: f64, sigma: &TwoPlane, sigma_prime: &TwoPlane) -> Result<f64> {
    if !(theta > 0.0) {
        return Err(Error::NonPositiveTheta(theta));
    }
    let distance = plane_distance(sigma, sigma_prime)?;
    if distance < theta {
        return Err(Error::NotInKTheta { distance, theta });
    }
    Ok(0.5 * (curv.sec(&sigma.u, &sigma.v) + curv.sec(&sigma_prime.u, &sigma_prime.v)))
}

/// `|X_perp|^2 + |Y_perp|^2 + |Z_perp|^2 + |W_perp|^2` for two distinct flat
/// planes at a point `pc` of the orbit of `tube`; `perp` is the `g_W`
/// projection to the orbit's normal space.
pub fn df_ds_positivity(
    pc: &PointCurvature,
    field: &PotentialField,
    tube: usize,
    sigma: &(Vec5, Vec5),
    sigma_prime: &(Vec5, Vec5),
) -> Result<f64> {
    let t = field.tubes.get(tube).ok_or(Error::NormalSpace { index: tube })?;
    if t.orbit.chordal_distance(&pc.point) > 1e-8 {
        return Err(Error::NormalSpace { index: tube });
    }
    check_flat(pc, &sigma.0, &sigma.1)?;
    check_flat(pc, &sigma_prime.0, &sigma_prime.1)?;
    if frame_distance((&sigma.0, &sigma.1), (&sigma_prime.0, &sigma_prime.1)) < 1e-8 {
        return Err(Error::IdenticalPlanes);
    }
    let (_, normal) = super::potential::orbit_tangent_normal(&pc.chart)?;
    // orthonormal-frame coordinates of the normal vectors
    let nf: Vec<Vec5> = normal.iter().map(|n| pc.chart_to_frame(n)).collect();
    let perp = |u: &Vec5| -> f64 { nf.iter().map(|n| { let c = crate::linalg::dot(u, n); c * c }).sum() };
    Ok(perp(&sigma.0) + perp(&sigma.1) + perp(&sigma_prime.0) + perp(&sigma_prime.1))
}

/// Ricci form in the orthonormal frame of `pc`.
pub fn ricci_matrix(pc: &PointCurvature) -> [[f64; 5]; 5] {
    let rf = pc.report.r.in_frame(&pc.frame);
    core::array::from_fn(|a| core::array::from_fn(|b| (0..5).map(|c| rf.get(a, c, c, b)).sum()))
}

/// Smallest Ricci curvature at `pc` and a unit direction attaining it.
pub fn min_ricci(pc: &PointCurvature) -> (f64, Vec5) {
    let (vals, vecs) = sym_eigen(&ricci_matrix(pc));
    (vals[0], vecs[0])
}
