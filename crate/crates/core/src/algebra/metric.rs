//! Left-invariant metrics `g = g0(Phi ., .)` given by an endomorphism.

use alloc::vec::Vec;

use nalgebra::DMatrix;

use super::{AlgVec, AlgebraTag};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct MetricEndo {
    tag: AlgebraTag,
    matrix: DMatrix<f64>,
}

impl MetricEndo {
    /// Validates symmetry (to `1e-12`) and positive definiteness.
    pub fn new(tag: AlgebraTag, matrix: DMatrix<f64>) -> Result<Self> {
        let n = tag.dim();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimensionMismatch {
                tag,
                expected: n,
                got: matrix.nrows(),
            });
        }
        let asymmetry = (&matrix - matrix.transpose()).amax();
        if asymmetry > 1e-12 {
            return Err(Error::NotSymmetric { asymmetry });
        }
        let min_eigenvalue = matrix.clone().symmetric_eigenvalues().min();
        if min_eigenvalue <= 0.0 {
            return Err(Error::NotPositiveDefinite { min_eigenvalue });
        }
        Ok(MetricEndo { tag, matrix })
    }

    pub fn identity(tag: AlgebraTag) -> Self {
        let n = tag.dim();
        MetricEndo {
            tag,
            matrix: DMatrix::identity(n, n),
        }
    }

    /// `Phi = Id - 1/2 P` on `sp(1)+sp(1)`, `P` the `g0`-orthogonal
    /// projection onto the diagonal.
    pub fn wilking() -> Self {
        let mut m = DMatrix::identity(6, 6);
        for a in 0..3 {
            m[(a, a)] -= 0.25;
            m[(a + 3, a + 3)] -= 0.25;
            m[(a, a + 3)] -= 0.25;
            m[(a + 3, a)] -= 0.25;
        }
        MetricEndo {
            tag: AlgebraTag::Sp1PlusSp1,
            matrix: m,
        }
    }

    /// `Phi + Phi` on the double `(sp(1)+sp(1))^2`.
    pub fn wilking_double() -> Self {
        let w = Self::wilking().matrix;
        let mut m = DMatrix::zeros(12, 12);
        m.view_mut((0, 0), (6, 6)).copy_from(&w);
        m.view_mut((6, 6), (6, 6)).copy_from(&w);
        MetricEndo {
            tag: AlgebraTag::DoubleSp1PlusSp1,
            matrix: m,
        }
    }

    pub fn tag(&self) -> AlgebraTag {
        self.tag
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn apply(&self, x: &AlgVec) -> Result<AlgVec> {
        if x.tag() != self.tag {
            return Err(Error::TagMismatch {
                left: self.tag,
                right: x.tag(),
            });
        }
        let n = self.tag.dim();
        let coeffs = (0..n)
            .map(|i| (0..n).map(|j| self.matrix[(i, j)] * x.coeffs()[j]).sum())
            .collect();
        AlgVec::new(self.tag, coeffs)
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.matrix.clone().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{inner_g0, inner_gphi};

    #[test]
    fn wilking_spectrum() {
        let ev = MetricEndo::wilking().eigenvalues();
        for (k, e) in ev.iter().enumerate() {
            let expected = if k < 3 { 0.5 } else { 1.0 };
            assert!((e - expected).abs() < 1e-14, "{ev:?}");
        }
        let ev = MetricEndo::wilking_double().eigenvalues();
        assert!((ev[0] - 0.5).abs() < 1e-14 && (ev[11] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn diagonal_and_antidiagonal_norms() {
        let phi = MetricEndo::wilking();
        let d = AlgVec::pair([0.2, 0.3, -0.4], [0.2, 0.3, -0.4]);
        let a = AlgVec::pair([0.2, 0.3, -0.4], [-0.2, -0.3, 0.4]);
        let g0 = inner_g0(&d, &d).unwrap();
        assert!((inner_gphi(&d, &d, &phi).unwrap() - 0.5 * g0).abs() < 1e-15);
        assert!((inner_gphi(&a, &a, &phi).unwrap() - g0).abs() < 1e-15);
    }

    #[test]
    fn identity_reduces_to_g0() {
        let id = MetricEndo::identity(AlgebraTag::Su3);
        for a in 0..8 {
            for b in 0..8 {
                let x = AlgVec::basis(AlgebraTag::Su3, a);
                let y = AlgVec::basis(AlgebraTag::Su3, b);
                assert_eq!(inner_gphi(&x, &y, &id).unwrap(), inner_g0(&x, &y).unwrap());
            }
        }
    }

    #[test]
    fn rejects_bad_endomorphisms() {
        let mut m = DMatrix::identity(3, 3);
        m[(0, 1)] = 0.5;
        assert!(matches!(
            MetricEndo::new(AlgebraTag::Sp1, m),
            Err(Error::NotSymmetric { .. })
        ));
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(alloc::vec![1.0, -1.0, 1.0]));
        assert!(matches!(
            MetricEndo::new(AlgebraTag::Sp1, m),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }
}
