//! Lie algebra kernels: `sp(1)`, `sp(1)+sp(1)`, its double, and `su(3)`.
//!
//! Every vector is stored as coefficients in a fixed basis that is
//! orthonormal for the reference inner product `g0`:
//!
//! * `sp(1)`: `i, j, k` with `<x, y> = Re(conj(x) y)`;
//! * `sp(1)+sp(1)`: `(i,0), (j,0), (k,0), (0,i), (0,j), (0,k)`;
//! * the double: two copies of the previous basis;
//! * `su(3)`: `-i lambda_1, ..., -i lambda_8` with `<X, Y> = -1/2 Re Tr(XY)`.

mod gell_mann;
mod group;
mod metric;
pub mod quaternion;
mod structure;

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use gell_mann::{from_su3_matrix, gell_mann, su3_basis, to_su3_matrix, CMat3};
pub use group::{adjoint, euler_rotation, exp_elem, mat_exp, GroupElem, GroupTag};
pub use metric::MetricEndo;
pub use quaternion::{Imag, Quat};
pub use structure::StructureTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgebraTag {
    Sp1,
    Sp1PlusSp1,
    DoubleSp1PlusSp1,
    Su3,
}

impl AlgebraTag {
    pub const fn dim(self) -> usize {
        match self {
            AlgebraTag::Sp1 => 3,
            AlgebraTag::Sp1PlusSp1 => 6,
            AlgebraTag::DoubleSp1PlusSp1 => 12,
            AlgebraTag::Su3 => 8,
        }
    }

    pub const ALL: [AlgebraTag; 4] = [
        AlgebraTag::Sp1,
        AlgebraTag::Sp1PlusSp1,
        AlgebraTag::DoubleSp1PlusSp1,
        AlgebraTag::Su3,
    ];
}

/// An element of one of the four algebras.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgVec {
    tag: AlgebraTag,
    coeffs: Vec<f64>,
}

impl AlgVec {
    pub fn new(tag: AlgebraTag, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != tag.dim() {
            return Err(Error::DimensionMismatch {
                tag,
                expected: tag.dim(),
                got: coeffs.len(),
            });
        }
        Ok(AlgVec { tag, coeffs })
    }

    pub fn from_slice(tag: AlgebraTag, coeffs: &[f64]) -> Result<Self> {
        Self::new(tag, coeffs.to_vec())
    }

    pub fn zero(tag: AlgebraTag) -> Self {
        AlgVec {
            tag,
            coeffs: vec![0.0; tag.dim()],
        }
    }

    /// The `index`-th basis vector.
    pub fn basis(tag: AlgebraTag, index: usize) -> Self {
        let mut v = Self::zero(tag);
        v.coeffs[index] = 1.0;
        v
    }

    pub fn sp1(x: Imag) -> Self {
        AlgVec {
            tag: AlgebraTag::Sp1,
            coeffs: x.to_vec(),
        }
    }

    pub fn pair(x: Imag, y: Imag) -> Self {
        AlgVec {
            tag: AlgebraTag::Sp1PlusSp1,
            coeffs: vec![x[0], x[1], x[2], y[0], y[1], y[2]],
        }
    }

    /// `-i lambda_a`, with `a` counted from 1 as in the physics convention.
    pub fn gell_mann(a: usize) -> Self {
        Self::basis(AlgebraTag::Su3, a - 1)
    }

    pub fn tag(&self) -> AlgebraTag {
        self.tag
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    /// The `k`-th `sp(1)` component (`k = 0` for the `sp(1)` algebra itself).
    pub fn imag_component(&self, k: usize) -> Imag {
        [
            self.coeffs[3 * k],
            self.coeffs[3 * k + 1],
            self.coeffs[3 * k + 2],
        ]
    }

    pub fn scale(&self, s: f64) -> Self {
        AlgVec {
            tag: self.tag,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn add(&self, other: &AlgVec) -> Result<Self> {
        same_tag(self, other)?;
        Ok(AlgVec {
            tag: self.tag,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &AlgVec) -> Result<Self> {
        self.add(&other.scale(-1.0))
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.coeffs.iter().map(|c| c * c).sum())
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

pub(crate) fn same_tag(a: &AlgVec, b: &AlgVec) -> Result<()> {
    if a.tag != b.tag {
        return Err(Error::TagMismatch {
            left: a.tag,
            right: b.tag,
        });
    }
    Ok(())
}

fn expect_tag(x: &AlgVec, expected: AlgebraTag) -> Result<()> {
    if x.tag != expected {
        return Err(Error::WrongAlgebra {
            expected,
            got: x.tag,
        });
    }
    Ok(())
}

/// Lie bracket through the structure constants of the algebra.
pub fn bracket(x: &AlgVec, y: &AlgVec) -> Result<AlgVec> {
    same_tag(x, y)?;
    let table = StructureTable::get(x.tag);
    Ok(AlgVec {
        tag: x.tag,
        coeffs: table.bracket(&x.coeffs, &y.coeffs),
    })
}

/// Reference inner product `g0`.
pub fn inner_g0(x: &AlgVec, y: &AlgVec) -> Result<f64> {
    same_tag(x, y)?;
    Ok(x.coeffs.iter().zip(&y.coeffs).map(|(a, b)| a * b).sum())
}

/// `g(X, Y) = g0(Phi X, Y)`.
pub fn inner_gphi(x: &AlgVec, y: &AlgVec, phi: &MetricEndo) -> Result<f64> {
    same_tag(x, y)?;
    if phi.tag() != x.tag {
        return Err(Error::TagMismatch {
            left: phi.tag(),
            right: x.tag,
        });
    }
    inner_g0(&phi.apply(x)?, y)
}

/// `g0`-orthogonal projection of `sp(1)+sp(1)` onto the diagonal.
pub fn proj_diagonal(x: &AlgVec) -> Result<AlgVec> {
    expect_tag(x, AlgebraTag::Sp1PlusSp1)?;
    let c = &x.coeffs;
    let m = [
        0.5 * (c[0] + c[3]),
        0.5 * (c[1] + c[4]),
        0.5 * (c[2] + c[5]),
    ];
    Ok(AlgVec::pair(m, m))
}

/// Indices (0-based) of the `so(3)` basis vectors `-i lambda_{2,5,7}`.
pub const SO3_INDICES: [usize; 3] = [1, 4, 6];
/// Indices (0-based) of the complement `-i lambda_{1,3,4,6,8}`.
pub const P_INDICES: [usize; 5] = [0, 2, 3, 5, 7];

/// Splits `X in su(3)` into its `so(3)` part and its complement.
pub fn cartan_split(x: &AlgVec) -> Result<(AlgVec, AlgVec)> {
    expect_tag(x, AlgebraTag::Su3)?;
    let mut k = AlgVec::zero(AlgebraTag::Su3);
    let mut p = AlgVec::zero(AlgebraTag::Su3);
    for i in SO3_INDICES {
        k.coeffs[i] = x.coeffs[i];
    }
    for i in P_INDICES {
        p.coeffs[i] = x.coeffs[i];
    }
    Ok((k, p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sp1_bracket_is_twice_cross() {
        let i = AlgVec::sp1([1.0, 0.0, 0.0]);
        let j = AlgVec::sp1([0.0, 1.0, 0.0]);
        assert_eq!(bracket(&i, &j).unwrap().coeffs(), &[0.0, 0.0, 2.0]);
        assert!(bracket(&i, &i).unwrap().max_abs() == 0.0);
    }

    #[test]
    fn tag_mismatch_is_reported() {
        let a = AlgVec::zero(AlgebraTag::Sp1);
        let b = AlgVec::zero(AlgebraTag::Su3);
        assert!(matches!(bracket(&a, &b), Err(Error::TagMismatch { .. })));
        assert!(matches!(
            AlgVec::new(AlgebraTag::Su3, vec![0.0; 3]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn gell_mann_inner_products() {
        let l3 = AlgVec::gell_mann(3);
        let l8 = AlgVec::gell_mann(8);
        assert_eq!(inner_g0(&l3, &l3).unwrap(), 1.0);
        assert_eq!(inner_g0(&l3, &l8).unwrap(), 0.0);
    }

    #[test]
    fn diagonal_projection() {
        let x = [0.3, -1.0, 2.0];
        let d = proj_diagonal(&AlgVec::pair(x, x)).unwrap();
        assert_eq!(d, AlgVec::pair(x, x));
        let a = proj_diagonal(&AlgVec::pair(x, [-0.3, 1.0, -2.0])).unwrap();
        assert_eq!(a.max_abs(), 0.0);
        let h = proj_diagonal(&AlgVec::pair(x, [0.0; 3])).unwrap();
        assert_eq!(h, AlgVec::pair([0.15, -0.5, 1.0], [0.15, -0.5, 1.0]));
        assert!(proj_diagonal(&AlgVec::zero(AlgebraTag::Su3)).is_err());
    }

    #[test]
    fn cartan_split_examples() {
        let (k, p) = cartan_split(&AlgVec::gell_mann(2)).unwrap();
        assert_eq!(k, AlgVec::gell_mann(2));
        assert_eq!(p.max_abs(), 0.0);
        let (k, p) = cartan_split(&AlgVec::gell_mann(8)).unwrap();
        assert_eq!(k.max_abs(), 0.0);
        assert_eq!(p, AlgVec::gell_mann(8));
    }
}
