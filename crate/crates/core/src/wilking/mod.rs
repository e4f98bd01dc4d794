//! `S^2 x S^3` with Wilking's almost positively curved metric.
//!
//! Points are pairs `(p, v)` of orthogonal unit quaternions. The group
//! `G = Sp(1) x Sp(1)` acts by `(q1, q2).(p, v) = (q1 p q2^-1, q1 v q2^-1)`
//! with isotropy `H = {(e^{i phi}, e^{i phi})}` at `(1, i)`. The metric `g_W`
//! is the quotient of `(G x G, g + g)` by `Delta G` on the left and `1 x H`
//! on the right, with `g = g0(Phi ., .)` and `Phi = Id - P/2`.

mod chart;
mod flat;
mod geodesic;
mod scan;

use serde::{Deserialize, Serialize};

use crate::algebra::quaternion::rotation_taking_i_to;
use crate::algebra::{GroupElem, GroupTag, Quat};
use crate::error::{Error, Result};

pub use chart::{
    gw_metric_components, horizontal_project, isotropy_complement, total_inner, vertical_space, HorizontalData,
    WilkingChart, ISOTROPY_GENERATOR,
};
pub use flat::{
    analyze_curvature, analyze_point, cluster_points, find_flat_locus, orbit_frames, sec_gw, slice_grid_point,
    slice_point, sphere_cloud, FlatLocusAtlas, FlatScanConfig, PointAnalysis, PointCurvature, SphereCloud,
    SpherePoint,
};
pub use scan::{sample_point, sec_floor, SecFloor};
pub use geodesic::{exp_point, group_geodesic, group_geodesic_rk4};

/// An element of `Sp(1) x Sp(1)` as a pair of unit quaternions.
pub type QuatPair = [Quat; 2];

pub const IDENTITY_PAIR: QuatPair = [Quat::ONE, Quat::ONE];

pub fn pair_mul(a: &QuatPair, b: &QuatPair) -> QuatPair {
    [a[0] * b[0], a[1] * b[1]]
}

pub fn pair_inv(a: &QuatPair) -> QuatPair {
    [a[0].conj(), a[1].conj()]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct S2xS3Point {
    pub p: Quat,
    pub v: Quat,
}

impl S2xS3Point {
    /// Validates `|p| = |v| = 1` and `Re(conj(p) v) = 0` to `1e-12`.
    pub fn new(p: Quat, v: Quat) -> Result<Self> {
        let tol = crate::TOL.unit_norm;
        let defect = (p.norm() - 1.0)
            .abs()
            .max((v.norm() - 1.0).abs())
            .max(p.dot(v).abs());
        if defect > tol {
            return Err(Error::NotOnManifold { defect });
        }
        Ok(S2xS3Point { p, v })
    }

    /// The base point `(1, i)`.
    pub const BASE: S2xS3Point = S2xS3Point { p: Quat::ONE, v: Quat::I };

    /// Projects a nearby pair back onto the manifold.
    pub fn normalized(p: Quat, v: Quat) -> Self {
        let p = p.normalize();
        let v = (v - p.scale(p.dot(v))).normalize();
        S2xS3Point { p, v }
    }

    pub fn to_array(&self) -> [f64; 8] {
        let (p, v) = (self.p, self.v);
        [p.w, p.x, p.y, p.z, v.w, v.x, v.y, v.z]
    }

    /// Euclidean distance in `R^8`; a cheap proxy for nearness.
    pub fn chordal_distance(&self, other: &S2xS3Point) -> f64 {
        libm::sqrt((self.p - other.p).norm_sqr() + (self.v - other.v).norm_sqr())
    }

    /// `(Re p, Re v)`, constant on the orbits of simultaneous conjugation.
    pub fn orbit_invariants(&self) -> [f64; 2] {
        [self.p.w, self.v.w]
    }
}

/// `(q1 p q2^-1, q1 v q2^-1)`.
pub fn act(q1: Quat, q2: Quat, x: &S2xS3Point) -> Result<S2xS3Point> {
    let tol = crate::TOL.unit_norm;
    for q in [q1, q2] {
        if !q.is_unit(tol) {
            return Err(Error::NotUnit { norm: q.norm() });
        }
    }
    Ok(act_unchecked(&[q1, q2], x))
}

pub(crate) fn act_unchecked(c: &QuatPair, x: &S2xS3Point) -> S2xS3Point {
    let q2i = c[1].conj();
    S2xS3Point {
        p: c[0] * x.p * q2i,
        v: c[0] * x.v * q2i,
    }
}

/// A representative `(a, b)` of a point of `Delta G \ (G x G) / (1 x H)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DoubleCosetRep {
    pub a: QuatPair,
    pub b: QuatPair,
}

impl DoubleCosetRep {
    pub fn new(a: &GroupElem, b: &GroupElem) -> Result<Self> {
        let get = |g: &GroupElem| -> Result<QuatPair> {
            match (g.tag(), g.as_quats()) {
                (GroupTag::Sp1xSp1, Some(q)) => Ok([q[0], q[1]]),
                _ => Err(Error::GroupAlgebraMismatch),
            }
        };
        Ok(DoubleCosetRep { a: get(a)?, b: get(b)? })
    }

    pub fn from_pairs(a: QuatPair, b: QuatPair) -> Self {
        DoubleCosetRep { a, b }
    }

    /// `a^{-1} b` in `G`.
    pub fn reduced(&self) -> QuatPair {
        pair_mul(&pair_inv(&self.a), &self.b)
    }
}

/// `(a, b) -> a^{-1} b . (1, i)`.
pub fn coset_to_point(rep: &DoubleCosetRep) -> S2xS3Point {
    act_unchecked(&rep.reduced(), &S2xS3Point::BASE)
}

/// Some `c` in `G` with `c . (1, i) = x`.
pub fn lift(x: &S2xS3Point) -> QuatPair {
    let w = (x.p.conj() * x.v).imag();
    let n = crate::algebra::quaternion::norm3(w);
    let q2 = rotation_taking_i_to([w[0] / n, w[1] / n, w[2] / n]);
    [x.p * q2, q2]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_point() -> S2xS3Point {
        S2xS3Point::normalized(Quat::new(0.3, -0.5, 0.7, 0.2), Quat::new(0.1, 0.8, -0.2, 0.4))
    }

    #[test]
    fn action_examples() {
        let x = sample_point();
        assert_eq!(act(Quat::ONE, Quat::ONE, &x).unwrap(), x);
        for phi in [0.1, 1.0, 2.5] {
            let h = Quat::exp_imag([phi, 0.0, 0.0]);
            let y = act(h, h, &S2xS3Point::BASE).unwrap();
            assert!(y.chordal_distance(&S2xS3Point::BASE) < 1e-15);
        }
        let g = [Quat::exp_imag([0.2, -0.4, 0.1]), Quat::exp_imag([0.5, 0.3, -0.3])];
        let h = [Quat::exp_imag([-0.7, 0.1, 0.9]), Quat::exp_imag([0.0, 0.6, 0.2])];
        let lhs = act_unchecked(&g, &act_unchecked(&h, &x));
        let rhs = act_unchecked(&pair_mul(&g, &h), &x);
        assert!(lhs.chordal_distance(&rhs) < 1e-15);
        assert!(matches!(act(Quat::new(2.0, 0.0, 0.0, 0.0), Quat::ONE, &x), Err(Error::NotUnit { .. })));
    }

    #[test]
    fn lift_reaches_point() {
        let x = sample_point();
        let c = lift(&x);
        assert!(act_unchecked(&c, &S2xS3Point::BASE).chordal_distance(&x) < 1e-14);
        // v = -p i is the antipodal case of the rotation
        let y = S2xS3Point::new(Quat::J, -(Quat::J * Quat::I)).unwrap();
        assert!(act_unchecked(&lift(&y), &S2xS3Point::BASE).chordal_distance(&y) < 1e-14);
    }

    #[test]
    fn coset_map_is_well_defined() {
        assert_eq!(
            coset_to_point(&DoubleCosetRep::from_pairs(IDENTITY_PAIR, IDENTITY_PAIR)),
            S2xS3Point::BASE
        );
        let a = [Quat::exp_imag([0.2, -0.4, 0.1]), Quat::exp_imag([0.5, 0.3, -0.3])];
        let b = [Quat::exp_imag([-0.7, 0.1, 0.9]), Quat::exp_imag([0.0, 0.6, 0.2])];
        let g = [Quat::exp_imag([1.1, 0.0, -0.2]), Quat::exp_imag([0.3, 0.3, 0.3])];
        let h = Quat::exp_imag([0.8, 0.0, 0.0]);
        let x = coset_to_point(&DoubleCosetRep::from_pairs(a, b));
        let moved = coset_to_point(&DoubleCosetRep::from_pairs(pair_mul(&g, &a), pair_mul(&g, &b)));
        assert!(x.chordal_distance(&moved) < 1e-12);
        let moved = coset_to_point(&DoubleCosetRep::from_pairs(a, pair_mul(&b, &[h, h])));
        assert!(x.chordal_distance(&moved) < 1e-12);
    }

    #[test]
    fn point_validation() {
        assert!(S2xS3Point::new(Quat::ONE, Quat::ONE).is_err());
        assert!(S2xS3Point::new(Quat::ONE, Quat::J).is_ok());
    }
}
