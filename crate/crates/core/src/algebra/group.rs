//! Group elements, adjoint actions and exponentials.

use alloc::vec::Vec;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::gell_mann::{from_su3_matrix, to_su3_matrix, CMat3};
use super::{AlgVec, AlgebraTag, Quat};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupTag {
    Sp1,
    Sp1xSp1,
    DoubleSp1xSp1,
    Su3,
    So3InSu3,
}

impl GroupTag {
    pub fn algebra(self) -> AlgebraTag {
        match self {
            GroupTag::Sp1 => AlgebraTag::Sp1,
            GroupTag::Sp1xSp1 => AlgebraTag::Sp1PlusSp1,
            GroupTag::DoubleSp1xSp1 => AlgebraTag::DoubleSp1PlusSp1,
            GroupTag::Su3 | GroupTag::So3InSu3 => AlgebraTag::Su3,
        }
    }
}

/// A point of `Sp(1)^k` (as unit quaternions) or of `SU(3)`.
#[derive(Debug, Clone, PartialEq)]
pub enum GroupElem {
    /// Quaternion factors; `tag` fixes how many (1, 2 or 4).
    Quats { tag: GroupTag, q: Vec<Quat> },
    Matrix { tag: GroupTag, u: CMat3 },
}

const UNIT_TOL: f64 = 1e-12;

impl GroupElem {
    pub fn quats(tag: GroupTag, q: Vec<Quat>) -> Result<Self> {
        let n = match tag {
            GroupTag::Sp1 => 1,
            GroupTag::Sp1xSp1 => 2,
            GroupTag::DoubleSp1xSp1 => 4,
            _ => return Err(Error::GroupAlgebraMismatch),
        };
        if q.len() != n {
            return Err(Error::GroupAlgebraMismatch);
        }
        for x in &q {
            if !x.is_unit(UNIT_TOL) {
                return Err(Error::NotUnit { norm: x.norm() });
            }
        }
        Ok(GroupElem::Quats { tag, q })
    }

    pub fn sp1(q: Quat) -> Result<Self> {
        Self::quats(GroupTag::Sp1, alloc::vec![q])
    }

    pub fn pair(q1: Quat, q2: Quat) -> Result<Self> {
        Self::quats(GroupTag::Sp1xSp1, alloc::vec![q1, q2])
    }

    /// Validates `U* U = I`, `det U = 1`, and realness for `SO(3)`.
    pub fn matrix(tag: GroupTag, u: CMat3) -> Result<Self> {
        if !matches!(tag, GroupTag::Su3 | GroupTag::So3InSu3) {
            return Err(Error::GroupAlgebraMismatch);
        }
        let defect = (u.adjoint() * u - CMat3::identity()).norm();
        let det_defect = (u.determinant() - Complex64::new(1.0, 0.0)).norm();
        if defect > UNIT_TOL * 10.0 || det_defect > UNIT_TOL * 10.0 {
            return Err(Error::NotOnManifold {
                defect: defect.max(det_defect),
            });
        }
        if tag == GroupTag::So3InSu3 {
            let imag = u.iter().fold(0.0_f64, |m, z| m.max(z.im.abs()));
            if imag > UNIT_TOL {
                return Err(Error::NotOnManifold { defect: imag });
            }
        }
        Ok(GroupElem::Matrix { tag, u })
    }

    pub fn identity(tag: GroupTag) -> Self {
        match tag {
            GroupTag::Sp1 => GroupElem::Quats { tag, q: alloc::vec![Quat::ONE] },
            GroupTag::Sp1xSp1 => GroupElem::Quats { tag, q: alloc::vec![Quat::ONE; 2] },
            GroupTag::DoubleSp1xSp1 => GroupElem::Quats { tag, q: alloc::vec![Quat::ONE; 4] },
            GroupTag::Su3 | GroupTag::So3InSu3 => GroupElem::Matrix { tag, u: CMat3::identity() },
        }
    }

    pub fn tag(&self) -> GroupTag {
        match self {
            GroupElem::Quats { tag, .. } | GroupElem::Matrix { tag, .. } => *tag,
        }
    }

    pub fn as_quats(&self) -> Option<&[Quat]> {
        match self {
            GroupElem::Quats { q, .. } => Some(q),
            _ => None,
        }
    }

    pub fn as_matrix(&self) -> Option<&CMat3> {
        match self {
            GroupElem::Matrix { u, .. } => Some(u),
            _ => None,
        }
    }

    /// Group product; two `SO(3)` factors stay in `SO(3)`.
    pub fn mul(&self, other: &GroupElem) -> Result<GroupElem> {
        match (self, other) {
            (GroupElem::Quats { tag: a, q: p }, GroupElem::Quats { tag: b, q }) if a == b => {
                Ok(GroupElem::Quats {
                    tag: *a,
                    q: p.iter().zip(q).map(|(x, y)| *x * *y).collect(),
                })
            }
            (GroupElem::Matrix { tag: a, u }, GroupElem::Matrix { tag: b, u: w }) => {
                let tag = if *a == GroupTag::So3InSu3 && *b == GroupTag::So3InSu3 {
                    GroupTag::So3InSu3
                } else {
                    GroupTag::Su3
                };
                Ok(GroupElem::Matrix { tag, u: u * w })
            }
            _ => Err(Error::GroupAlgebraMismatch),
        }
    }

    pub fn inv(&self) -> GroupElem {
        match self {
            GroupElem::Quats { tag, q } => GroupElem::Quats {
                tag: *tag,
                q: q.iter().map(|x| x.conj()).collect(),
            },
            GroupElem::Matrix { tag, u } => GroupElem::Matrix {
                tag: *tag,
                u: u.adjoint(),
            },
        }
    }
}

/// `Ad_u X = u X u^{-1}`.
pub fn adjoint(u: &GroupElem, x: &AlgVec) -> Result<AlgVec> {
    if u.tag().algebra() != x.tag() {
        return Err(Error::GroupAlgebraMismatch);
    }
    match u {
        GroupElem::Quats { q, .. } => {
            let mut out = Vec::with_capacity(x.coeffs().len());
            for (k, qk) in q.iter().enumerate() {
                out.extend_from_slice(&qk.rotate(x.imag_component(k)));
            }
            AlgVec::new(x.tag(), out)
        }
        GroupElem::Matrix { u, .. } => {
            let m = to_su3_matrix(x)?;
            Ok(from_su3_matrix(&(u * m * u.adjoint())))
        }
    }
}

/// `exp(tX)`.
pub fn exp_elem(x: &AlgVec, t: f64) -> GroupElem {
    match x.tag() {
        AlgebraTag::Su3 => {
            let m = to_su3_matrix(x).expect("su3 tag") * Complex64::new(t, 0.0);
            GroupElem::Matrix {
                tag: GroupTag::Su3,
                u: mat_exp(&m),
            }
        }
        tag => {
            let n = tag.dim() / 3;
            let q = (0..n)
                .map(|k| {
                    let v = x.imag_component(k);
                    Quat::exp_imag([v[0] * t, v[1] * t, v[2] * t])
                })
                .collect();
            let gtag = match tag {
                AlgebraTag::Sp1 => GroupTag::Sp1,
                AlgebraTag::Sp1PlusSp1 => GroupTag::Sp1xSp1,
                _ => GroupTag::DoubleSp1xSp1,
            };
            GroupElem::Quats { tag: gtag, q }
        }
    }
}

/// Matrix exponential by scaling and squaring of a truncated Taylor series.
pub fn mat_exp(a: &CMat3) -> CMat3 {
    let norm = a.iter().map(|z| z.norm()).sum::<f64>();
    let mut squarings = 0u32;
    let mut scale = 1.0;
    while norm * scale > 0.25 {
        scale *= 0.5;
        squarings += 1;
    }
    let b = a * Complex64::new(scale, 0.0);
    let mut term = CMat3::identity();
    let mut sum = CMat3::identity();
    for k in 1..=18 {
        term = term * b * Complex64::new(1.0 / k as f64, 0.0);
        sum += term;
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    sum
}

/// `exp(-i lambda_2 x) exp(-i lambda_5 y) exp(-i lambda_2 z)`.
pub fn euler_rotation(x: f64, y: f64, z: f64) -> GroupElem {
    let e2 = AlgVec::gell_mann(2);
    let e5 = AlgVec::gell_mann(5);
    let u = [exp_elem(&e2, x), exp_elem(&e5, y), exp_elem(&e2, z)]
        .iter()
        .map(|g| *g.as_matrix().expect("su3"))
        .fold(CMat3::identity(), |acc, m| acc * m);
    // The factors are real rotations; clear rounding noise in the imaginary part.
    let u = u.map(|z| Complex64::new(z.re, 0.0));
    GroupElem::Matrix {
        tag: GroupTag::So3InSu3,
        u,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::inner_g0;
    use libm::{cos, sin};

    #[test]
    fn exp_of_zero_is_identity() {
        for tag in AlgebraTag::ALL {
            let g = exp_elem(&AlgVec::basis(tag, 0), 0.0);
            match g {
                GroupElem::Quats { q, .. } => assert!(q.iter().all(|x| *x == Quat::ONE)),
                GroupElem::Matrix { u, .. } => assert!((u - CMat3::identity()).norm() == 0.0),
            }
        }
    }

    #[test]
    fn exp_pi_i_is_minus_one() {
        let g = exp_elem(&AlgVec::sp1([1.0, 0.0, 0.0]), core::f64::consts::PI);
        assert!(g.as_quats().unwrap()[0].max_abs_diff(-Quat::ONE) < 1e-15);
    }

    #[test]
    fn exp_lambda_2_is_rotation_block() {
        for x in [0.3, 1.7, -2.5, 6.0] {
            let u = *exp_elem(&AlgVec::gell_mann(2), x).as_matrix().unwrap();
            let expected = nalgebra::Matrix3::new(cos(x), -sin(x), 0.0, sin(x), cos(x), 0.0, 0.0, 0.0, 1.0)
                .map(|r| Complex64::new(r, 0.0));
            assert!((u - expected).norm() < 1e-14, "x = {x}");
        }
    }

    #[test]
    fn euler_rotation_examples() {
        let r = euler_rotation(0.0, 0.0, 0.0);
        assert!((r.as_matrix().unwrap() - CMat3::identity()).norm() < 1e-15);
        let r = euler_rotation(core::f64::consts::PI, 0.0, 0.0);
        let direct = exp_elem(&AlgVec::gell_mann(2), core::f64::consts::PI);
        assert!((r.as_matrix().unwrap() - direct.as_matrix().unwrap()).norm() < 1e-14);
        let r = euler_rotation(0.4, 1.3, -2.2);
        assert!(GroupElem::matrix(GroupTag::So3InSu3, *r.as_matrix().unwrap()).is_ok());
    }

    #[test]
    fn adjoint_of_rotation_fixes_lambda_8_at_origin() {
        let r = euler_rotation(0.0, 0.0, 0.0);
        let l8 = AlgVec::gell_mann(8);
        let a = adjoint(&r, &l8).unwrap();
        assert!((inner_g0(&a, &l8).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn group_validation() {
        assert!(matches!(
            GroupElem::pair(Quat::ONE, Quat::new(1.0, 1.0, 0.0, 0.0)),
            Err(Error::NotUnit { .. })
        ));
        let u = *exp_elem(&AlgVec::gell_mann(3), 0.7).as_matrix().unwrap();
        assert!(GroupElem::matrix(GroupTag::Su3, u).is_ok());
        assert!(GroupElem::matrix(GroupTag::So3InSu3, u).is_err());
        assert!(GroupElem::matrix(GroupTag::Su3, u * Complex64::new(2.0, 0.0)).is_err());
    }
}
