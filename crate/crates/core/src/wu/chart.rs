//! A chart of `SU(3)/SO(3)` for the finite-difference engine:
//! `t -> exp(sum t_a P_a) SO(3)` with the metric pulled back through the
//! submersion, i.e. `g(d_a, d_b) = <h(s^-1 d_a s), h(s^-1 d_b s)>` with `h`
//! the projection to `p`. The left-trivialized derivative of `exp` is the
//! series `sum_k (-ad_A)^k / (k+1)!`.

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{from_p_coords, to_p_coords, wu_operator, HorizontalPlane};
use crate::algebra::{from_su3_matrix, to_su3_matrix, CMat3};
use crate::curvature::{riemann_fd, sec_from_riemann, ChartSpec, MetricField};
use crate::error::{Error, Result};
use crate::grassmann::{quasi_gaussian, SecFunctional};
use crate::linalg::{orthonormal_pair, Vec5, DIM};

#[derive(Debug, Clone, Copy, Default)]
pub struct WuChart;

impl WuChart {
    /// `h(s(t)^-1 d_a s(t))` in `p` coordinates.
    pub fn coordinate_vectors(&self, t: &[f64]) -> [Vec5; DIM] {
        let mut coords = [0.0; DIM];
        coords.copy_from_slice(&t[..DIM]);
        let a = to_su3_matrix(&from_p_coords(&coords)).expect("su3");
        core::array::from_fn(|k| {
            let mut e = [0.0; DIM];
            e[k] = 1.0;
            let b = to_su3_matrix(&from_p_coords(&e)).expect("su3");
            let mut term: CMat3 = b;
            let mut sum = b;
            for n in 1..40 {
                term = (a * term - term * a) * Complex64::new(-1.0 / (n as f64 + 1.0), 0.0);
                sum += term;
                if term.iter().map(|z| z.norm()).sum::<f64>() < 1e-18 {
                    break;
                }
            }
            to_p_coords(&from_su3_matrix(&sum))
        })
    }
}

impl MetricField for WuChart {
    fn chart(&self) -> ChartSpec {
        ChartSpec::new(DIM)
    }

    fn metric(&self, t: &[f64]) -> Result<DMatrix<f64>> {
        let w = self.coordinate_vectors(t);
        Ok(DMatrix::from_fn(DIM, DIM, |a, b| crate::linalg::dot(&w[a], &w[b])))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WuCrossValidation {
    /// Least-squares `c` in `sec_fd = c |[X, Y]|^2`.
    pub fitted_c: f64,
    /// `max |c_fit |[X,Y]|^2 - sec_fd|`.
    pub max_residual: f64,
    /// `max ||[X,Y]|^2 - sec_fd|` with the constant fixed at 1.
    pub max_error_unit_c: f64,
    pub planes: usize,
    pub points: usize,
}

/// Compares the bracket formula with finite differences at `points` chart
/// points (the first is the base coset) on `planes_per_point` quasi-random
/// planes each. At `t != 0` a chart plane is carried to the base coset by
/// the left translation `s(t)^-1`, which is an isometry.
pub fn fd_cross_validation(points: usize, planes_per_point: usize) -> Result<WuCrossValidation> {
    let chart = WuChart;
    let op = wu_operator();
    let mut pairs: Vec<(f64, f64)> = Vec::new();
    for i in 0..points {
        let t: Vec<f64> = if i == 0 {
            alloc::vec![0.0; DIM]
        } else {
            let g = quasi_gaussian(1000 + i);
            (0..DIM).map(|k| 0.05 * g[k]).collect()
        };
        let rep = riemann_fd(&chart, &t)?;
        let w = chart.coordinate_vectors(&t);
        for j in 0..planes_per_point {
            let g = quasi_gaussian(1 + j + planes_per_point * i);
            let u: Vec5 = core::array::from_fn(|k| g[k]);
            let v: Vec5 = core::array::from_fn(|k| g[k + 3]);
            let fd = sec_from_riemann(&rep.r, &rep.g, &u, &v)?;
            let push = |c: &Vec5| -> Vec5 {
                core::array::from_fn(|d| (0..DIM).map(|a| c[a] * w[a][d]).sum())
            };
            let (x, y) = orthonormal_pair(&push(&u), &push(&v), crate::TOL.degenerate_gram)
                .ok_or(Error::DegeneratePlane { gram_det: 0.0 })?;
            let alg = op.sec(&x, &y);
            debug_assert!({
                let p = HorizontalPlane::from_coords(&x, &y).unwrap();
                (super::sec_wu(&p).unwrap() - alg).abs() < 1e-10
            });
            pairs.push((alg, fd));
        }
    }
    let num: f64 = pairs.iter().map(|(a, f)| a * f).sum();
    let den: f64 = pairs.iter().map(|(a, _)| a * a).sum();
    let fitted_c = num / den;
    let max_residual = pairs.iter().fold(0.0_f64, |m, (a, f)| m.max((fitted_c * a - f).abs()));
    let max_error_unit_c = pairs.iter().fold(0.0_f64, |m, (a, f)| m.max((a - f).abs()));
    Ok(WuCrossValidation {
        fitted_c,
        max_residual,
        max_error_unit_c,
        planes: pairs.len(),
        points,
    })
}
