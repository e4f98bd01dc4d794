//! Deterministic point sets on the plane families we search over.

use alloc::vec::Vec;

use libm::{cos, log, sin, sqrt};

use super::TwoPlane;
use crate::linalg::{complete_basis, norm, orthonormal_pair, scale, Vec5, DIM};

const GOLDEN: f64 = 1.618_033_988_749_895;

/// `n` points of a spherical Fibonacci lattice on the upper unit hemisphere.
/// Unit normals `n` and `-n` give the same plane, so the hemisphere covers
/// the whole family of planes in a 3-space.
pub fn fibonacci_hemisphere(n: usize) -> Vec<[f64; 3]> {
    (0..n)
        .map(|k| {
            let z = (k as f64 + 0.5) / n as f64;
            let r = sqrt(1.0 - z * z);
            let phi = 2.0 * core::f64::consts::PI * k as f64 / GOLDEN;
            [r * cos(phi), r * sin(phi), z]
        })
        .collect()
}

/// Upper bound for the covering radius of [`fibonacci_hemisphere`] in the
/// plane distance (angle between normals modulo sign). The constant is a
/// measured `2.12 / sqrt(n)` rounded up.
pub fn hemisphere_covering_radius(n: usize) -> f64 {
    2.5 / sqrt(n as f64)
}

/// The plane of `span(q)` with unit normal `normal` (coordinates in `q`).
pub fn complement_plane(q: &[Vec5; 3], normal: &[f64; 3]) -> (Vec5, Vec5) {
    let n = scale(normal, 1.0 / norm(normal));
    let rest = complete_basis::<3>(&[n]);
    let lift = |c: &[f64; 3]| -> Vec5 { core::array::from_fn(|i| c[0] * q[0][i] + c[1] * q[1][i] + c[2] * q[2][i]) };
    (lift(&rest[0]), lift(&rest[1]))
}

/// The 2-parameter family of planes inside `sigma`'s orthogonal complement,
/// indexed by unit normals on a Fibonacci hemisphere.
#[derive(Debug, Clone)]
pub struct ComplementPlanes {
    pub q: [Vec5; 3],
    pub normals: Vec<[f64; 3]>,
}

impl ComplementPlanes {
    pub fn new(u: &Vec5, v: &Vec5, n: usize) -> Self {
        let rest = complete_basis::<DIM>(&[*u, *v]);
        ComplementPlanes {
            q: [rest[0], rest[1], rest[2]],
            normals: fibonacci_hemisphere(n),
        }
    }

    pub fn len(&self) -> usize {
        self.normals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.normals.is_empty()
    }

    pub fn frame(&self, k: usize) -> (Vec5, Vec5) {
        complement_plane(&self.q, &self.normals[k])
    }
}

/// Sample of `n` planes in `sigma`'s orthogonal complement.
pub fn orthogonal_complement_planes(sigma: &TwoPlane, n: usize) -> impl Iterator<Item = TwoPlane> + '_ {
    let family = ComplementPlanes::new(&sigma.u, &sigma.v, n);
    (0..n).map(move |k| {
        let (u, v) = family.frame(k);
        TwoPlane { base: sigma.base, u, v }
    })
}

/// Additive-recurrence constants of the 10-dimensional Kronecker sequence
/// (powers of the inverse of the root of `x^11 = x + 1`).
fn kronecker_alphas() -> [f64; 2 * DIM] {
    let mut g = 1.0_f64;
    for _ in 0..64 {
        let f = libm::pow(g, 11.0) - g - 1.0;
        let df = 11.0 * libm::pow(g, 10.0) - 1.0;
        g -= f / df;
    }
    core::array::from_fn(|i| libm::pow(1.0 / g, (i + 1) as f64))
}

/// The `k`-th point (from 1) of a Kronecker sequence in `[0,1)^10`, pushed
/// to standard Gaussians by Box-Muller.
pub fn quasi_gaussian(k: usize) -> [f64; 2 * DIM] {
    let alpha = kronecker_alphas();
    let u: [f64; 2 * DIM] = core::array::from_fn(|i| {
        let x = 0.5 + k as f64 * alpha[i];
        (x - libm::floor(x)).max(1e-300)
    });
    core::array::from_fn(|i| {
        let p = i / 2;
        let r = sqrt(-2.0 * log(u[2 * p]));
        let t = 2.0 * core::f64::consts::PI * u[2 * p + 1];
        if i % 2 == 0 {
            r * cos(t)
        } else {
            r * sin(t)
        }
    })
}

/// `n` orthonormal frames roughly uniform on `Gr_2(R^5)`: [`quasi_gaussian`]
/// vectors, orthonormalized.
pub fn plane_lattice(n: usize) -> Vec<(Vec5, Vec5)> {
    let mut out = Vec::with_capacity(n);
    let mut k = 0usize;
    while out.len() < n {
        k += 1;
        let gauss = quasi_gaussian(k);
        let a: Vec5 = core::array::from_fn(|i| gauss[i]);
        let b: Vec5 = core::array::from_fn(|i| gauss[DIM + i]);
        if let Some(frame) = orthonormal_pair(&a, &b, 1e-8) {
            out.push(frame);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::{frame_distance, MetricTag, PlaneBase};
    use crate::linalg::dot;

    #[test]
    fn complement_planes_lie_in_complement() {
        let sigma = TwoPlane::axes(PlaneBase::origin(MetricTag::Euclidean), 0, 1);
        for p in orthogonal_complement_planes(&sigma, 50) {
            assert!(p.u[0].abs() + p.u[1].abs() + p.v[0].abs() + p.v[1].abs() < 1e-14);
            assert!(TwoPlane::new(p.base, p.u, p.v).is_ok());
        }
    }

    #[test]
    fn hundred_point_sample_covers_family() {
        let sigma = TwoPlane::from_span(
            PlaneBase::origin(MetricTag::Euclidean),
            &[1.0, 0.5, 0.0, -0.3, 0.2],
            &[0.0, 1.0, 1.0, 0.0, 0.4],
        )
        .unwrap();
        let coarse = ComplementPlanes::new(&sigma.u, &sigma.v, 100);
        let dense = ComplementPlanes {
            q: coarse.q,
            normals: fibonacci_hemisphere(10_000),
        };
        let coarse_frames: Vec<_> = (0..100).map(|k| coarse.frame(k)).collect();
        let mut worst: f64 = 0.0;
        for k in 0..dense.len() {
            let (u, v) = dense.frame(k);
            let d = coarse_frames
                .iter()
                .map(|(a, b)| frame_distance((&u, &v), (a, b)))
                .fold(f64::INFINITY, f64::min);
            worst = worst.max(d);
        }
        assert!(worst <= 0.35, "covering radius {worst}");
        assert!(worst <= hemisphere_covering_radius(100));
    }

    #[test]
    fn lattice_frames_are_orthonormal() {
        let l = plane_lattice(200);
        assert_eq!(l.len(), 200);
        for (u, v) in &l {
            assert!((dot(u, u) - 1.0).abs() < 1e-14 && dot(u, v).abs() < 1e-14);
        }
        assert_eq!(l, plane_lattice(200));
    }
}
