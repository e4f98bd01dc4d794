//! Quaternions with the convention `i j = k`, and the Lie algebra
//! `sp(1) = Im(H)` written as 3-vectors.

use core::ops::{Add, Mul, Neg, Sub};

use libm::{cos, sin, sqrt};
use serde::{Deserialize, Serialize};

/// Imaginary quaternion `x i + y j + z k` stored as `[x, y, z]`.
pub type Imag = [f64; 3];

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Quat {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quat {
    pub const ONE: Quat = Quat::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quat = Quat::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quat = Quat::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quat = Quat::new(0.0, 0.0, 0.0, 1.0);
    pub const ZERO: Quat = Quat::new(0.0, 0.0, 0.0, 0.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quat { w, x, y, z }
    }

    pub const fn from_imag(v: Imag) -> Self {
        Quat::new(0.0, v[0], v[1], v[2])
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Quat::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn imag(self) -> Imag {
        [self.x, self.y, self.z]
    }

    pub fn conj(self) -> Self {
        Quat::new(self.w, -self.x, -self.y, -self.z)
    }

    /// `Re(conj(self) * other)`, the Euclidean inner product on `R^4`.
    pub fn dot(self, other: Quat) -> f64 {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm_sqr(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        sqrt(self.norm_sqr())
    }

    pub fn scale(self, s: f64) -> Self {
        Quat::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    pub fn normalize(self) -> Self {
        self.scale(1.0 / self.norm())
    }

    pub fn is_unit(self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    /// Inverse of a unit quaternion.
    pub fn inv(self) -> Self {
        self.conj().scale(1.0 / self.norm_sqr())
    }

    /// Quaternion exponential of an imaginary quaternion:
    /// `exp(v) = cos|v| + sin|v| v/|v|`.
    pub fn exp_imag(v: Imag) -> Self {
        let n = norm3(v);
        if n < 1e-300 {
            return Quat::ONE;
        }
        let s = sin(n) / n;
        Quat::new(cos(n), s * v[0], s * v[1], s * v[2])
    }

    /// `q X q^{-1}` for imaginary `X`; for unit `q` this is a rotation.
    pub fn rotate(self, v: Imag) -> Imag {
        (self * Quat::from_imag(v) * self.inv()).imag()
    }

    pub fn max_abs_diff(self, other: Quat) -> f64 {
        let d = self - other;
        d.w.abs().max(d.x.abs()).max(d.y.abs()).max(d.z.abs())
    }
}

impl Mul for Quat {
    type Output = Quat;
    fn mul(self, b: Quat) -> Quat {
        let a = self;
        Quat::new(
            a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        )
    }
}

impl Add for Quat {
    type Output = Quat;
    fn add(self, b: Quat) -> Quat {
        Quat::new(self.w + b.w, self.x + b.x, self.y + b.y, self.z + b.z)
    }
}

impl Sub for Quat {
    type Output = Quat;
    fn sub(self, b: Quat) -> Quat {
        Quat::new(self.w - b.w, self.x - b.x, self.y - b.y, self.z - b.z)
    }
}

impl Neg for Quat {
    type Output = Quat;
    fn neg(self) -> Quat {
        self.scale(-1.0)
    }
}

pub fn dot3(a: Imag, b: Imag) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm3(a: Imag) -> f64 {
    sqrt(dot3(a, a))
}

pub fn cross3(a: Imag, b: Imag) -> Imag {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn add3(a: Imag, b: Imag) -> Imag {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn sub3(a: Imag, b: Imag) -> Imag {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn scale3(a: Imag, s: f64) -> Imag {
    [a[0] * s, a[1] * s, a[2] * s]
}

/// Commutator in `sp(1)`: `[a, b] = ab - ba = 2 a x b`.
pub fn bracket3(a: Imag, b: Imag) -> Imag {
    scale3(cross3(a, b), 2.0)
}

/// Left-trivialized differential of the exponential,
/// `exp(-v) d/de exp(v + e u)|_{e=0} = (1 - e^{-ad v}) / ad v (u)`.
pub fn dexp_left(v: Imag, u: Imag) -> Imag {
    let n = norm3(v);
    if n < 1e-300 {
        return u;
    }
    let axis = scale3(v, 1.0 / n);
    let theta = 2.0 * n;
    let (s_over, c_over) = if theta < 1e-4 {
        let t2 = theta * theta;
        (1.0 - t2 / 6.0, theta / 2.0 - theta * t2 / 24.0)
    } else {
        (sin(theta) / theta, (1.0 - cos(theta)) / theta)
    };
    let par = scale3(axis, dot3(axis, u));
    let perp = sub3(u, par);
    add3(
        add3(par, scale3(perp, s_over)),
        scale3(cross3(axis, perp), -c_over),
    )
}

/// Unit quaternion `q` with `q i q^{-1} = w` for a unit imaginary `w`.
pub fn rotation_taking_i_to(w: Imag) -> Quat {
    let q = Quat::new(1.0 + w[0], 0.0, -w[2], w[1]);
    if q.norm() < 1e-6 {
        // w is (close to) -i: rotate by pi about j.
        return Quat::J;
    }
    q.normalize()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hamilton_relations() {
        assert_eq!(Quat::I * Quat::J, Quat::K);
        assert_eq!(Quat::J * Quat::K, Quat::I);
        assert_eq!(Quat::K * Quat::I, Quat::J);
        assert_eq!(Quat::I * Quat::I, -Quat::ONE);
        assert_eq!(bracket3([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]), [0.0, 0.0, 2.0]);
    }

    #[test]
    fn exp_of_pi_i_is_minus_one() {
        let q = Quat::exp_imag([core::f64::consts::PI, 0.0, 0.0]);
        assert!(q.max_abs_diff(-Quat::ONE) < 1e-15);
    }

    #[test]
    fn dexp_matches_central_difference() {
        let v = [0.3, -0.7, 0.4];
        let u = [0.2, 0.5, -1.1];
        let h = 1e-6;
        let plus = Quat::exp_imag(add3(v, scale3(u, h)));
        let minus = Quat::exp_imag(sub3(v, scale3(u, h)));
        let d = (plus - minus).scale(0.5 / h);
        let fd = (Quat::exp_imag(v).inv() * d).imag();
        let exact = dexp_left(v, u);
        for k in 0..3 {
            assert!((fd[k] - exact[k]).abs() < 1e-8, "{fd:?} vs {exact:?}");
        }
        let tiny = [1e-6, 2e-6, -1e-6];
        let d = dexp_left(tiny, u);
        let approx = sub3(u, cross3(tiny, u));
        assert!(norm3(sub3(d, approx)) < 1e-11);
    }

    #[test]
    fn rotation_to_target() {
        for w in [[0.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [0.6, 0.0, 0.8], [1.0, 0.0, 0.0]] {
            let q = rotation_taking_i_to(w);
            let r = q.rotate([1.0, 0.0, 0.0]);
            assert!(norm3(sub3(r, w)) < 1e-14, "{w:?} -> {r:?}");
        }
    }
}
