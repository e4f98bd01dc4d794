//! Curvature minima at the base coset. By homogeneity one point suffices.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::{flat_plane_from_euler, wu_operator};
use crate::error::{Error, Result};
use crate::exec::{argmin, Executor};
use crate::grassmann::{
    biorthogonal_curvature, frame_distance, min_plane, plane_lattice, CurvatureOperator, GridConfig, MetricTag,
    PlaneBase, SecFunctional, TwoPlane,
};
use crate::linalg::{complete_basis, dot, orthonormal_pair, Vec5, DIM};
use crate::optimize::{nelder_mead, NelderMeadOptions};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WuBiorthConfig {
    /// Lattice size on `Gr_2(p)`.
    pub planes: usize,
    /// Lattice size on each complement family.
    pub complements: usize,
    /// Lattice planes polished afterwards.
    pub refine_starts: usize,
    pub max_evals: usize,
}

impl Default for WuBiorthConfig {
    fn default() -> Self {
        WuBiorthConfig {
            planes: 64 * 64,
            complements: 100,
            refine_starts: 8,
            max_evals: 4000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WuBiorth {
    /// `min_sigma min_{sigma' in sigma^perp} 1/2 (sec sigma + sec sigma')`.
    pub value: f64,
    pub sigma: (Vec5, Vec5),
    pub sigma_prime: (Vec5, Vec5),
    pub sec_sigma: f64,
    pub sec_sigma_prime: f64,
    /// Plane distance of the minimizing pair; orthogonal complements sit at
    /// the diameter of the Grassmannian.
    pub distance: f64,
    /// Best lattice value with the complement minimized on its own lattice.
    pub grid_value: f64,
    /// Best lattice value with the exact complement minimum.
    pub grid_exact_value: f64,
    pub planes: usize,
    pub complements: usize,
    pub converged: bool,
}

/// `1/2 (sec sigma + min over sigma' in sigma^perp)`; for a curvature
/// operator the inner minimum is the bottom eigenvalue on `Lambda^2` of the
/// complement.
fn biorth_exact(op: &CurvatureOperator, u: &Vec5, v: &Vec5) -> (f64, f64, f64, (Vec5, Vec5)) {
    let r = complete_basis::<DIM>(&[*u, *v]);
    let q = [r[0], r[1], r[2]];
    let (m, n) = op.min_in_three_space(&q);
    // the plane with unit normal n inside span(q)
    let nv: Vec5 = core::array::from_fn(|d| (0..3).map(|i| n[i] * q[i][d]).sum());
    let rest = complete_basis::<DIM>(&[*u, *v, nv]);
    let sec_sigma = op.sec(u, v);
    (0.5 * (sec_sigma + m), sec_sigma, m, (rest[0], rest[1]))
}

fn chart(u: &Vec5, v: &Vec5, q: &[Vec5; 3], t: &[f64]) -> Option<(Vec5, Vec5)> {
    let mut x = *u;
    let mut y = *v;
    for i in 0..3 {
        for d in 0..DIM {
            x[d] += t[i] * q[i][d];
            y[d] += t[3 + i] * q[i][d];
        }
    }
    orthonormal_pair(&x, &y, 1e-12)
}

/// Minimum biorthogonal curvature of the normal metric at the base coset.
pub fn biorth_wu_at_base<E: Executor>(cfg: &WuBiorthConfig, exec: &E) -> Result<WuBiorth> {
    let op = wu_operator();
    let lattice = plane_lattice(cfg.planes.max(1));
    let grid = GridConfig {
        planes: cfg.planes,
        complements: cfg.complements,
        refine_starts: 1,
        max_evals: 400,
    };
    let base = PlaneBase::origin(MetricTag::Wu);
    let coarse = exec.map(lattice.len(), |i| {
        let (u, v) = lattice[i];
        let sigma = TwoPlane { base, u, v };
        let g = biorthogonal_curvature(&sigma, &op, &grid).value;
        (g, biorth_exact(&op, &u, &v).0)
    });
    let grid_value = coarse.iter().map(|c| c.0).fold(f64::INFINITY, f64::min);
    let exact: Vec<f64> = coarse.iter().map(|c| c.1).collect();
    let (_, grid_exact_value) = argmin(exact.iter().copied()).ok_or(Error::NonConvergence { iterations: 0 })?;
    let mut order: Vec<usize> = (0..exact.len()).collect();
    order.sort_by(|&a, &b| exact[a].total_cmp(&exact[b]).then(a.cmp(&b)));
    order.truncate(cfg.refine_starts.max(1));

    let opts = NelderMeadOptions {
        initial_step: 0.05,
        max_evals: cfg.max_evals,
        f_tol: 1e-15,
        x_tol: 1e-10,
    };
    let polished = exec.map(order.len(), |s| {
        let (u0, v0) = lattice[order[s]];
        let (mut u, mut v) = (u0, v0);
        let mut converged = false;
        // restart in a fresh chart until the chart origin stops moving
        for _ in 0..4 {
            let r = complete_basis::<DIM>(&[u, v]);
            let q = [r[0], r[1], r[2]];
            let m = nelder_mead(
                |t| match chart(&u, &v, &q, t) {
                    Some((x, y)) => biorth_exact(&op, &x, &y).0,
                    None => f64::NAN,
                },
                &[0.0; 6],
                &opts,
            );
            converged = m.converged;
            match chart(&u, &v, &q, &m.x) {
                Some((x, y)) if m.f <= biorth_exact(&op, &u, &v).0 => {
                    let moved = m.x.iter().map(|t| t * t).sum::<f64>();
                    u = x;
                    v = y;
                    if moved < 1e-16 {
                        break;
                    }
                }
                _ => break,
            }
        }
        (biorth_exact(&op, &u, &v).0, u, v, converged)
    });
    let (k, _) = argmin(polished.iter().map(|p| p.0)).ok_or(Error::NonConvergence { iterations: 0 })?;
    let (_, u, v, converged) = polished[k];
    let (value, sec_sigma, sec_sigma_prime, sigma_prime) = biorth_exact(&op, &u, &v);
    Ok(WuBiorth {
        value,
        sigma: (u, v),
        sigma_prime,
        sec_sigma,
        sec_sigma_prime,
        distance: frame_distance((&u, &v), (&sigma_prime.0, &sigma_prime.1)),
        grid_value,
        grid_exact_value,
        planes: lattice.len(),
        complements: cfg.complements,
        converged,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitDistance {
    /// Plane distance to the nearest `Ad_r(lambda_3 ^ lambda_8)`.
    pub distance: f64,
    pub euler: [f64; 3],
}

/// `sum sin^2` of the principal angles, smooth at coincidence.
fn chordal2(a: (&Vec5, &Vec5), b: (&Vec5, &Vec5)) -> f64 {
    let m = [dot(a.0, b.0), dot(a.0, b.1), dot(a.1, b.0), dot(a.1, b.1)];
    2.0 - m.iter().map(|x| x * x).sum::<f64>()
}

fn euler_frame(e: &[f64]) -> (Vec5, Vec5) {
    flat_plane_from_euler(e[0], e[1], e[2]).coords()
}

/// Distance from a plane in `p` to the `SO(3)`-orbit of the reference flat,
/// by a coarse Euler grid and Nelder-Mead on the chordal distance.
pub fn distance_to_flat_orbit(u: &Vec5, v: &Vec5) -> OrbitDistance {
    let n = 8;
    let mut starts: Vec<([f64; 3], f64)> = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let e = [TAU * i as f64 / n as f64, TAU * j as f64 / n as f64, TAU * k as f64 / n as f64];
                let (x, y) = euler_frame(&e);
                starts.push((e, chordal2((u, v), (&x, &y))));
            }
        }
    }
    starts.sort_by(|a, b| a.1.total_cmp(&b.1));
    let opts = NelderMeadOptions {
        initial_step: 0.1,
        max_evals: 3000,
        f_tol: 1e-30,
        x_tol: 1e-13,
    };
    let mut best = OrbitDistance {
        distance: f64::INFINITY,
        euler: [0.0; 3],
    };
    for (e0, _) in starts.iter().take(3) {
        let mut m = nelder_mead(
            |e| {
                let (x, y) = euler_frame(e);
                chordal2((u, v), (&x, &y))
            },
            e0,
            &opts,
        );
        // one restart sheds the simplex's stale scale
        let x0 = m.x.clone();
        m = nelder_mead(
            |e| {
                let (x, y) = euler_frame(e);
                chordal2((u, v), (&x, &y))
            },
            &x0,
            &NelderMeadOptions {
                initial_step: 1e-4,
                ..opts
            },
        );
        let (x, y) = euler_frame(&m.x);
        let d = frame_distance((u, v), (&x, &y));
        if d < best.distance {
            best = OrbitDistance {
                distance: d,
                euler: [m.x[0], m.x[1], m.x[2]],
            };
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WuSecMin {
    pub value: f64,
    pub plane: (Vec5, Vec5),
    pub orbit: OrbitDistance,
}

/// Unconstrained minimum of the sectional curvature over `Gr_2(p)` and the
/// distance of the minimizer to the orbit of flats.
pub fn min_sec_wu(grid: &GridConfig) -> WuSecMin {
    let op = wu_operator();
    let m = min_plane(&op, grid);
    WuSecMin {
        value: m.value,
        plane: (m.u, m.v),
        orbit: distance_to_flat_orbit(&m.u, &m.v),
    }
}
