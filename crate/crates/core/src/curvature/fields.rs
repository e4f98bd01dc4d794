//! Metric fields with known curvature, used to validate the engines.

use alloc::vec::Vec;

use nalgebra::DMatrix;

use super::fd::{ChartSpec, MetricField};
use crate::algebra::quaternion::dexp_left;
use crate::algebra::{AlgebraTag, MetricEndo};
use crate::error::Result;

/// `g(t) = I`.
#[derive(Debug, Clone, Copy)]
pub struct EuclideanField {
    pub dim: usize,
}

impl MetricField for EuclideanField {
    fn chart(&self) -> ChartSpec {
        ChartSpec::new(self.dim)
    }

    fn metric(&self, _t: &[f64]) -> Result<DMatrix<f64>> {
        Ok(DMatrix::identity(self.dim, self.dim))
    }
}

/// Unit round `S^3` in normal coordinates, closed form:
/// `g = dr^2 + sin^2(r) dOmega^2`.
#[derive(Debug, Clone, Copy, Default)]
pub struct RoundSphereChart;

impl MetricField for RoundSphereChart {
    fn chart(&self) -> ChartSpec {
        ChartSpec::new(3)
    }

    fn metric(&self, t: &[f64]) -> Result<DMatrix<f64>> {
        let r2: f64 = t.iter().map(|x| x * x).sum();
        let r = libm::sqrt(r2);
        // sin^2(r)/r^2 with a series near 0
        let s = if r < 1e-4 {
            1.0 - r2 / 3.0 + 2.0 * r2 * r2 / 45.0
        } else {
            let q = libm::sin(r) / r;
            q * q
        };
        Ok(DMatrix::from_fn(3, 3, |a, b| {
            let delta = if a == b { 1.0 } else { 0.0 };
            let radial = if r2 > 0.0 { t[a] * t[b] / r2 } else { 0.0 };
            radial + s * (delta - radial)
        }))
    }
}

/// A left-invariant metric `g0(Phi ., .)` on `Sp(1)^k` in the chart
/// `t -> exp(sum t_a e_a)` (componentwise quaternion exponential).
#[derive(Debug, Clone)]
pub struct LeftInvariantChart {
    phi: MetricEndo,
    spec: ChartSpec,
}

impl LeftInvariantChart {
    pub fn new(phi: MetricEndo) -> Self {
        assert_ne!(phi.tag(), AlgebraTag::Su3, "quaternion groups only");
        let spec = ChartSpec::new(phi.tag().dim());
        LeftInvariantChart { phi, spec }
    }

    /// The unit sphere `S^3 = Sp(1)` with the bi-invariant metric.
    pub fn sphere() -> Self {
        Self::new(MetricEndo::identity(AlgebraTag::Sp1))
    }

    /// `(Sp(1) x Sp(1), g)` with `Phi = Id - P/2`.
    pub fn wilking_group() -> Self {
        Self::new(MetricEndo::wilking())
    }

    /// Left-trivialized coordinate vectors at `t`.
    pub fn coordinate_vectors(&self, t: &[f64]) -> Vec<Vec<f64>> {
        let n = self.spec.param_dim;
        (0..n)
            .map(|a| {
                let mut out = Vec::with_capacity(n);
                for k in 0..n / 3 {
                    let v = [t[3 * k], t[3 * k + 1], t[3 * k + 2]];
                    let mut u = [0.0; 3];
                    if a / 3 == k {
                        u[a % 3] = 1.0;
                    }
                    out.extend_from_slice(&dexp_left(v, u));
                }
                out
            })
            .collect()
    }
}

impl MetricField for LeftInvariantChart {
    fn chart(&self) -> ChartSpec {
        self.spec
    }

    fn metric(&self, t: &[f64]) -> Result<DMatrix<f64>> {
        let n = self.spec.param_dim;
        let w = self.coordinate_vectors(t);
        let m = self.phi.matrix();
        Ok(DMatrix::from_fn(n, n, |a, b| {
            let mut s = 0.0;
            for i in 0..n {
                for j in 0..n {
                    s += w[a][i] * m[(i, j)] * w[b][j];
                }
            }
            s
        }))
    }
}
