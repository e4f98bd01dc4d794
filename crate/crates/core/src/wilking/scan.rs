//! Sampled lower bounds for the sectional curvature of `g_W`.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{PointCurvature, S2xS3Point};
use crate::algebra::Quat;
use crate::error::Result;
use crate::exec::{argmin, Executor};
use crate::grassmann::{plane_lattice, quasi_gaussian, SecFunctional};

/// The `k`-th quasi-random point of `S^2 x S^3`.
pub fn sample_point(k: usize) -> S2xS3Point {
    let g = quasi_gaussian(k + 1);
    S2xS3Point::normalized(Quat::new(g[0], g[1], g[2], g[3]), Quat::new(g[4], g[5], g[6], g[7]))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SecFloor {
    pub min_sec: f64,
    pub point_index: usize,
    pub plane_index: usize,
    pub point: S2xS3Point,
    /// Minimizing plane, orthonormal-basis coordinates.
    pub plane: [[f64; 5]; 2],
    pub samples: usize,
    /// Worst finite-difference convergence gap met.
    pub max_fd_convergence: f64,
}

/// Minimum of `sec_{g_W}` over `points x planes` lattice samples.
pub fn sec_floor<E: Executor>(points: usize, planes: usize, exec: &E) -> Result<SecFloor> {
    let lattice = plane_lattice(planes);
    let per_point = exec.map(points, |i| -> Result<(usize, f64, f64)> {
        let pc = PointCurvature::at(&sample_point(i))?;
        let (j, v) = argmin(lattice.iter().map(|(u, v)| pc.sec(u, v))).expect("planes > 0");
        Ok((j, v, pc.report.convergence))
    });
    let per_point: Vec<(usize, f64, f64)> = per_point.into_iter().collect::<Result<_>>()?;
    let (i, min_sec) = argmin(per_point.iter().map(|r| r.1)).expect("points > 0");
    let j = per_point[i].0;
    Ok(SecFloor {
        min_sec,
        point_index: i,
        plane_index: j,
        point: sample_point(i),
        plane: [lattice[j].0, lattice[j].1],
        samples: points * planes,
        max_fd_convergence: per_point.iter().map(|r| r.2).fold(0.0, f64::max),
    })
}
