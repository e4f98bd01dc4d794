//! Sectional curvature engines.
//!
//! The algebraic engine works on left-invariant metrics of Lie groups. The
//! finite-difference engine works on any metric given in a chart and is the
//! reference the algebraic values are checked against.

mod fd;
mod fields;

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::algebra::{bracket, inner_g0, same_tag, AlgVec, MetricEndo, StructureTable};
use crate::error::{Error, Result};

pub use fd::{
    metric_components, ricci_fd, ricci_from_report, riemann_fd, riemann_from_samples, sec_from_riemann, stencil_points, ChartSpec,
    MetricField, Riemann, RiemannReport, RICHARDSON_LEVELS,
};
pub use fields::{EuclideanField, LeftInvariantChart, RoundSphereChart};

fn gram_det(xx: f64, yy: f64, xy: f64) -> Result<f64> {
    let det = xx * yy - xy * xy;
    if det < crate::TOL.degenerate_gram * (xx * yy).max(1e-300) || det <= 0.0 {
        return Err(Error::DegeneratePlane { gram_det: det });
    }
    Ok(det)
}

/// `1/4 |[X,Y]|^2 / |X ^ Y|^2` for the bi-invariant metric `g0`.
pub fn sec_biinvariant(x: &AlgVec, y: &AlgVec) -> Result<f64> {
    same_tag(x, y)?;
    let det = gram_det(inner_g0(x, x)?, inner_g0(y, y)?, inner_g0(x, y)?)?;
    let b = bracket(x, y)?;
    Ok(0.25 * inner_g0(&b, &b)? / det)
}

/// Levi-Civita data of a left-invariant metric in a `g`-orthonormal frame.
#[derive(Debug, Clone)]
pub struct LeftInvariantConnection {
    n: usize,
    /// Frame vectors (columns) in the `g0`-orthonormal basis.
    frame: DMatrix<f64>,
    /// `Gamma[a][b][c]`: `nabla_{f_a} f_b = sum_c Gamma[a][b][c] f_c`.
    gamma: Vec<f64>,
    /// Structure constants in the frame.
    c: Vec<f64>,
}

impl LeftInvariantConnection {
    /// Builds a `g`-orthonormal frame by Gram-Schmidt from the `g0` basis
    /// and evaluates the Koszul formula for left-invariant fields,
    /// `g(nabla_X Y, Z) = 1/2 (g([X,Y],Z) - g([Y,Z],X) + g([Z,X],Y))`.
    pub fn new(phi: &MetricEndo) -> Self {
        let tag = phi.tag();
        let n = tag.dim();
        let g = phi.matrix();
        let ip = |a: &[f64], b: &[f64]| -> f64 {
            let mut s = 0.0;
            for i in 0..n {
                for j in 0..n {
                    s += a[i] * g[(i, j)] * b[j];
                }
            }
            s
        };
        let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n);
        for k in 0..n {
            let mut v = vec![0.0; n];
            v[k] = 1.0;
            for _ in 0..2 {
                for e in &cols {
                    let c = ip(&v, e);
                    for i in 0..n {
                        v[i] -= c * e[i];
                    }
                }
            }
            let nv = libm::sqrt(ip(&v, &v));
            for x in v.iter_mut() {
                *x /= nv;
            }
            cols.push(v);
        }
        let frame = DMatrix::from_fn(n, n, |i, j| cols[j][i]);
        let table = StructureTable::get(tag);
        let mut c = vec![0.0; n * n * n];
        for a in 0..n {
            for b in 0..n {
                let br = table.bracket(&cols[a], &cols[b]);
                for (k, col) in cols.iter().enumerate() {
                    c[(a * n + b) * n + k] = ip(&br, col);
                }
            }
        }
        let cc = |a: usize, b: usize, k: usize| c[(a * n + b) * n + k];
        let mut gamma = vec![0.0; n * n * n];
        for a in 0..n {
            for b in 0..n {
                for k in 0..n {
                    gamma[(a * n + b) * n + k] = 0.5 * (cc(a, b, k) - cc(b, k, a) + cc(k, a, b));
                }
            }
        }
        LeftInvariantConnection { n, frame, gamma, c }
    }

    /// Coordinates of a `g0`-basis vector in the `g`-orthonormal frame.
    pub fn to_frame(&self, x: &[f64]) -> Vec<f64> {
        let inv = self.frame.clone().try_inverse().expect("frame is invertible");
        (0..self.n)
            .map(|a| (0..self.n).map(|i| inv[(a, i)] * x[i]).sum())
            .collect()
    }

    fn nabla(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n];
        for a in 0..n {
            if x[a] == 0.0 {
                continue;
            }
            for b in 0..n {
                let w = x[a] * y[b];
                if w == 0.0 {
                    continue;
                }
                for k in 0..n {
                    out[k] += w * self.gamma[(a * n + b) * n + k];
                }
            }
        }
        out
    }

    fn bracket(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n];
        for a in 0..n {
            for b in 0..n {
                let w = x[a] * y[b];
                if w == 0.0 {
                    continue;
                }
                for k in 0..n {
                    out[k] += w * self.c[(a * n + b) * n + k];
                }
            }
        }
        out
    }

    /// `g(R(X,Y)Y, X) / |X ^ Y|^2` for frame coordinates `x`, `y`.
    pub fn sec_frame(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        let dot = |a: &[f64], b: &[f64]| -> f64 { a.iter().zip(b).map(|(p, q)| p * q).sum() };
        let det = gram_det(dot(x, x), dot(y, y), dot(x, y))?;
        let nyy = self.nabla(y, y);
        let nxy = self.nabla(x, y);
        let t1 = self.nabla(x, &nyy);
        let t2 = self.nabla(y, &nxy);
        let t3 = self.nabla(&self.bracket(x, y), y);
        let r: Vec<f64> = (0..self.n).map(|k| t1[k] - t2[k] - t3[k]).collect();
        Ok(dot(&r, x) / det)
    }
}

/// Sectional curvature at the identity of the left-invariant metric
/// `g = g0(Phi ., .)` on the plane `X ^ Y`.
pub fn sec_left_invariant(x: &AlgVec, y: &AlgVec, phi: &MetricEndo) -> Result<f64> {
    same_tag(x, y)?;
    if phi.tag() != x.tag() {
        return Err(Error::TagMismatch {
            left: phi.tag(),
            right: x.tag(),
        });
    }
    let conn = LeftInvariantConnection::new(phi);
    conn.sec_frame(&conn.to_frame(x.coeffs()), &conn.to_frame(y.coeffs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraTag;

    #[test]
    fn biinvariant_examples() {
        let i = AlgVec::sp1([1.0, 0.0, 0.0]);
        let j = AlgVec::sp1([0.0, 1.0, 0.0]);
        assert!((sec_biinvariant(&i, &j).unwrap() - 1.0).abs() < 1e-15);
        assert!((sec_biinvariant(&i.scale(2.0), &j).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(
            sec_biinvariant(&AlgVec::gell_mann(3), &AlgVec::gell_mann(8)).unwrap(),
            0.0
        );
        assert!(matches!(sec_biinvariant(&i, &i), Err(Error::DegeneratePlane { .. })));
    }

    #[test]
    fn identity_endomorphism_matches_biinvariant() {
        let phi = MetricEndo::identity(AlgebraTag::Su3);
        let x = AlgVec::new(AlgebraTag::Su3, vec![0.3, -1.0, 0.2, 0.0, 0.5, 0.1, -0.7, 0.4]).unwrap();
        let y = AlgVec::new(AlgebraTag::Su3, vec![1.0, 0.2, 0.0, -0.6, 0.3, 0.9, 0.1, -0.2]).unwrap();
        let a = sec_left_invariant(&x, &y, &phi).unwrap();
        let b = sec_biinvariant(&x, &y).unwrap();
        assert!((a - b).abs() < 1e-12, "{a} vs {b}");
    }

    #[test]
    fn wilking_group_agrees_with_finite_differences() {
        let phi = MetricEndo::wilking();
        let field = LeftInvariantChart::wilking_group();
        let rep = riemann_fd(&field, &[0.0; 6]).unwrap();
        let planes = [
            ([1.0, 0.0, 0.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0, 0.0, 0.0]),
            ([1.0, 0.0, 0.0, 1.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0, 1.0, 0.0]),
            ([0.3, -0.2, 0.5, 0.1, 0.0, 0.7], [0.0, 0.4, -0.1, 0.9, 0.2, -0.3]),
        ];
        for (x, y) in planes {
            let a = sec_left_invariant(
                &AlgVec::from_slice(AlgebraTag::Sp1PlusSp1, &x).unwrap(),
                &AlgVec::from_slice(AlgebraTag::Sp1PlusSp1, &y).unwrap(),
                &phi,
            )
            .unwrap();
            let b = sec_from_riemann(&rep.r, &rep.g, &x, &y).unwrap();
            assert!((a - b).abs() < 2e-4, "{a} vs {b}");
        }
    }
}
