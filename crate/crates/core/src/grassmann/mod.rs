//! Tangent 2-planes, the Grassmannian distance, and the minimizations that
//! define biorthogonal and distance curvature.
//!
//! Planes live in a 5-dimensional tangent space written in coordinates that
//! are orthonormal for the metric in question, so "orthonormal" below always
//! means Euclidean orthonormality of the coordinate vectors.

mod lattice;
mod minimize;

use libm::{atan2, sqrt};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, orthonormal_pair, reject, Vec5, DIM};

pub use lattice::{
    complement_plane, fibonacci_hemisphere, hemisphere_covering_radius, orthogonal_complement_planes,
    plane_lattice, quasi_gaussian, ComplementPlanes,
};
pub use minimize::{
    biorthogonal_curvature, distance_curvature, min_pair_k_theta, min_plane, plane_hessian, BiorthResult, DistanceResult,
    GridConfig, PairResult, PlaneMin,
};

/// Diameter of `Gr_2(R^5)` for the principal-angle metric: both angles `pi/2`.
pub const GRASSMANN_DIAMETER: f64 = core::f64::consts::FRAC_PI_2 * core::f64::consts::SQRT_2;

/// Which metric a plane's orthonormality refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricTag {
    Euclidean,
    Wilking,
    Deformed,
    Wu,
}

/// Base point and metric shared by the planes being compared.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaneBase {
    /// Coordinates of the point (the quaternion pair for `S^2 x S^3`;
    /// zero for homogeneous spaces evaluated at their base point).
    pub point: [f64; 8],
    pub metric: MetricTag,
}

impl PlaneBase {
    pub const fn new(point: [f64; 8], metric: MetricTag) -> Self {
        PlaneBase { point, metric }
    }

    pub const fn origin(metric: MetricTag) -> Self {
        PlaneBase { point: [0.0; 8], metric }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoPlane {
    pub base: PlaneBase,
    pub u: Vec5,
    pub v: Vec5,
}

impl TwoPlane {
    /// Accepts an orthonormal frame (to `1e-10`).
    pub fn new(base: PlaneBase, u: Vec5, v: Vec5) -> Result<Self> {
        let defect = (dot(&u, &u) - 1.0)
            .abs()
            .max((dot(&v, &v) - 1.0).abs())
            .max(dot(&u, &v).abs());
        if defect > crate::TOL.orthonormal {
            return Err(Error::NotOnManifold { defect });
        }
        Ok(TwoPlane { base, u, v })
    }

    /// Orthonormalizes `span{a, b}`.
    pub fn from_span(base: PlaneBase, a: &Vec5, b: &Vec5) -> Result<Self> {
        let gram_det = dot(a, a) * dot(b, b) - dot(a, b) * dot(a, b);
        match orthonormal_pair(a, b, crate::TOL.degenerate_gram) {
            Some((u, v)) => Ok(TwoPlane { base, u, v }),
            None => Err(Error::DegeneratePlane { gram_det }),
        }
    }

    /// Plane spanned by coordinate axes `i` and `j`.
    pub fn axes(base: PlaneBase, i: usize, j: usize) -> Self {
        TwoPlane {
            base,
            u: crate::linalg::basis(i),
            v: crate::linalg::basis(j),
        }
    }

    pub fn bivector(&self) -> Bivector {
        wedge(&self.u, &self.v)
    }
}

/// Both planes share a base point, and `distance` is their plane distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanePair {
    pub sigma: TwoPlane,
    pub sigma_prime: TwoPlane,
    pub distance: f64,
}

impl PlanePair {
    pub fn new(sigma: TwoPlane, sigma_prime: TwoPlane) -> Result<Self> {
        let distance = plane_distance(&sigma, &sigma_prime)?;
        Ok(PlanePair {
            sigma,
            sigma_prime,
            distance,
        })
    }
}

/// Principal angles `(theta_1, theta_2)`, ascending, between the spans of two
/// orthonormal frames. Cosines come from the cross Gram matrix and sines from
/// the rejection, so both small and right angles are accurate.
pub fn principal_angles(a: (&Vec5, &Vec5), b: (&Vec5, &Vec5)) -> (f64, f64) {
    let m = [[dot(a.0, b.0), dot(a.0, b.1)], [dot(a.1, b.0), dot(a.1, b.1)]];
    let mtm = (
        m[0][0] * m[0][0] + m[1][0] * m[1][0],
        m[0][0] * m[0][1] + m[1][0] * m[1][1],
        m[0][1] * m[0][1] + m[1][1] * m[1][1],
    );
    let (c_lo, c_hi) = crate::linalg::sym2_eigenvalues(mtm.0, mtm.1, mtm.2);
    let r0 = reject(b.0, &[*a.0, *a.1]);
    let r1 = reject(b.1, &[*a.0, *a.1]);
    let (s_lo, s_hi) = crate::linalg::sym2_eigenvalues(dot(&r0, &r0), dot(&r0, &r1), dot(&r1, &r1));
    let c = |x: f64| sqrt(x.max(0.0));
    (
        atan2(c(s_lo), c(c_hi)),
        atan2(c(s_hi), c(c_lo)),
    )
}

/// Geodesic distance `sqrt(theta_1^2 + theta_2^2)` on the Grassmannian.
pub fn plane_distance(a: &TwoPlane, b: &TwoPlane) -> Result<f64> {
    if a.base != b.base {
        return Err(Error::BasePointMismatch);
    }
    Ok(frame_distance((&a.u, &a.v), (&b.u, &b.v)))
}

pub fn frame_distance(a: (&Vec5, &Vec5), b: (&Vec5, &Vec5)) -> f64 {
    let (t1, t2) = principal_angles(a, b);
    sqrt(t1 * t1 + t2 * t2)
}

/// Number of coordinates of a bivector in `Lambda^2 R^5`.
pub const BIVECTOR_DIM: usize = DIM * (DIM - 1) / 2;
pub type Bivector = [f64; BIVECTOR_DIM];

/// Index pairs `(i, j)`, `i < j`, in lexicographic order.
pub const PAIRS: [(usize, usize); BIVECTOR_DIM] = [
    (0, 1),
    (0, 2),
    (0, 3),
    (0, 4),
    (1, 2),
    (1, 3),
    (1, 4),
    (2, 3),
    (2, 4),
    (3, 4),
];

pub fn wedge(u: &Vec5, v: &Vec5) -> Bivector {
    core::array::from_fn(|k| {
        let (i, j) = PAIRS[k];
        u[i] * v[j] - u[j] * v[i]
    })
}

/// Anything that assigns a sectional curvature to an orthonormal frame.
pub trait SecFunctional: Sync {
    fn sec(&self, u: &Vec5, v: &Vec5) -> f64;

    /// The quadratic form on `Lambda^2`, when the functional is one.
    fn operator(&self) -> Option<&CurvatureOperator> {
        None
    }
}

impl<F: Fn(&Vec5, &Vec5) -> f64 + Sync> SecFunctional for F {
    fn sec(&self, u: &Vec5, v: &Vec5) -> f64 {
        self(u, v)
    }
}

/// Curvature operator as a symmetric form on `Lambda^2 R^5`, normalized so
/// that `sec(u ^ v) = <w, K w>` for an orthonormal frame with `w = u ^ v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureOperator {
    pub k: [[f64; BIVECTOR_DIM]; BIVECTOR_DIM],
}

impl CurvatureOperator {
    /// From a `(0,4)` tensor with `sec = R(u, v, v, u)` on orthonormal frames.
    pub fn from_riemann<F: Fn(usize, usize, usize, usize) -> f64>(r: F) -> Self {
        let k = core::array::from_fn(|a| {
            core::array::from_fn(|b| {
                let (i, j) = PAIRS[a];
                let (kk, l) = PAIRS[b];
                r(i, j, l, kk)
            })
        });
        CurvatureOperator { k }
    }

    /// Constant curvature `c`.
    pub fn constant(c: f64) -> Self {
        let mut k = [[0.0; BIVECTOR_DIM]; BIVECTOR_DIM];
        for (a, row) in k.iter_mut().enumerate() {
            row[a] = c;
        }
        CurvatureOperator { k }
    }

    pub fn quadratic(&self, w: &Bivector) -> f64 {
        let mut s = 0.0;
        for a in 0..BIVECTOR_DIM {
            let mut t = 0.0;
            for b in 0..BIVECTOR_DIM {
                t += self.k[a][b] * w[b];
            }
            s += w[a] * t;
        }
        s
    }

    /// `M[a][b] = <u ^ e_a, K (u ^ e_b)>`, so that `sec(u ^ v) = v^T M v`
    /// for `v` orthonormal to the unit vector `u`.
    pub fn jacobi_form(&self, u: &Vec5) -> [[f64; DIM]; DIM] {
        let w: [Bivector; DIM] = core::array::from_fn(|a| wedge(u, &crate::linalg::basis(a)));
        let kw: [Bivector; DIM] = core::array::from_fn(|a| {
            core::array::from_fn(|p| (0..BIVECTOR_DIM).map(|q| self.k[p][q] * w[a][q]).sum())
        });
        core::array::from_fn(|a| core::array::from_fn(|b| dot(&w[a], &kw[b])))
    }

    /// Exact minimum of sec over the planes inside the 3-space spanned by the
    /// orthonormal `q`: the smallest eigenvalue of the induced 3x3 form.
    pub fn min_in_three_space(&self, q: &[Vec5; 3]) -> (f64, [f64; 3]) {
        let star = [wedge(&q[1], &q[2]), wedge(&q[2], &q[0]), wedge(&q[0], &q[1])];
        let m: [[f64; 3]; 3] = core::array::from_fn(|a| {
            core::array::from_fn(|b| {
                let mut s = 0.0;
                for p in 0..BIVECTOR_DIM {
                    for r in 0..BIVECTOR_DIM {
                        s += star[a][p] * self.k[p][r] * star[b][r];
                    }
                }
                s
            })
        });
        let (vals, vecs) = crate::linalg::sym_eigen(&m);
        (vals[0], vecs[0])
    }
}

impl SecFunctional for CurvatureOperator {
    fn sec(&self, u: &Vec5, v: &Vec5) -> f64 {
        let w = wedge(u, v);
        self.quadratic(&w) / dot(&w, &w)
    }

    fn operator(&self) -> Option<&CurvatureOperator> {
        Some(self)
    }
}
