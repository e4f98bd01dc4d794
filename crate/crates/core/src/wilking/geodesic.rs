//! Geodesics of `(G, g)` and of the quotient `(S^2 x S^3, g_W)`.

use super::{act_unchecked, pair_inv, pair_mul, QuatPair, S2xS3Point, WilkingChart};
use crate::algebra::quaternion::bracket3;
use crate::algebra::Quat;
use crate::error::Result;

fn exp_pair(w: &[f64; 6], t: f64) -> QuatPair {
    [
        Quat::exp_imag([t * w[0], t * w[1], t * w[2]]),
        Quat::exp_imag([t * w[3], t * w[4], t * w[5]]),
    ]
}

/// Geodesic of `(G, g0(Phi ., .))` through `e` with left-trivialized initial
/// velocity `w`: `exp(t (W_p + W_k / 2)) exp(t W_k / 2)`, where `W_k` is the
/// diagonal part of `w` and `W_p` the rest.
pub fn group_geodesic(w: &[f64; 6], t: f64) -> QuatPair {
    let mut k = [0.0; 6];
    let mut first = [0.0; 6];
    for i in 0..3 {
        let d = 0.5 * (w[i] + w[3 + i]);
        k[i] = 0.5 * d;
        k[3 + i] = 0.5 * d;
    }
    for i in 0..6 {
        first[i] = w[i] - k[i];
    }
    pair_mul(&exp_pair(&first, t), &exp_pair(&k, t))
}

fn phi_apply(w: &[f64; 6]) -> [f64; 6] {
    let mut out = [0.0; 6];
    for i in 0..3 {
        out[i] = 0.75 * w[i] - 0.25 * w[3 + i];
        out[3 + i] = 0.75 * w[3 + i] - 0.25 * w[i];
    }
    out
}

fn phi_solve(m: &[f64; 6]) -> [f64; 6] {
    // inverse of [[3/4, -1/4], [-1/4, 3/4]] is [[3/2, 1/2], [1/2, 3/2]]
    let mut out = [0.0; 6];
    for i in 0..3 {
        out[i] = 1.5 * m[i] + 0.5 * m[3 + i];
        out[3 + i] = 0.5 * m[i] + 1.5 * m[3 + i];
    }
    out
}

/// Euler-Arnold right-hand side: `Phi w' = [Phi w, w]`.
fn euler_arnold(w: &[f64; 6]) -> [f64; 6] {
    let m = phi_apply(w);
    let b1 = bracket3([m[0], m[1], m[2]], [w[0], w[1], w[2]]);
    let b2 = bracket3([m[3], m[4], m[5]], [w[3], w[4], w[5]]);
    phi_solve(&[b1[0], b1[1], b1[2], b2[0], b2[1], b2[2]])
}

/// The same geodesic by classical RK4 on the Euler-Arnold equation and the
/// reconstruction `gamma' = gamma w`; used as an independent check.
pub fn group_geodesic_rk4(w0: &[f64; 6], t: f64, steps: usize) -> QuatPair {
    let h = t / steps as f64;
    let mut w = *w0;
    let mut q = super::IDENTITY_PAIR;
    let axpy = |a: &[f64; 6], s: f64, b: &[f64; 6]| -> [f64; 6] { core::array::from_fn(|i| a[i] + s * b[i]) };
    for _ in 0..steps {
        let k1 = euler_arnold(&w);
        let k2 = euler_arnold(&axpy(&w, 0.5 * h, &k1));
        let k3 = euler_arnold(&axpy(&w, 0.5 * h, &k2));
        let k4 = euler_arnold(&axpy(&w, h, &k3));
        let w1 = axpy(&w, 0.5 * h, &k1);
        let w2 = axpy(&w, 0.5 * h, &k2);
        let w3 = axpy(&w, h, &k3);
        // RK4 for q' = q w(t) on each quaternion factor
        for f in 0..2 {
            let o = 3 * f;
            let vel = |q: Quat, ww: &[f64; 6]| q * Quat::from_imag([ww[o], ww[o + 1], ww[o + 2]]);
            let q0 = q[f];
            let a1 = vel(q0, &w);
            let a2 = vel(q0 + a1.scale(0.5 * h), &w1);
            let a3 = vel(q0 + a2.scale(0.5 * h), &w2);
            let a4 = vel(q0 + a3.scale(h), &w3);
            q[f] = (q0 + (a1 + a2.scale(2.0) + a3.scale(2.0) + a4).scale(h / 6.0)).normalize();
        }
        w = core::array::from_fn(|i| w[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
    }
    q
}

/// `exp_x(t xi)` for a chart vector `xi` at the center of `chart`:
/// the projection of the horizontal geodesic `(gamma_1(t), c gamma_2(t))`.
pub fn exp_point(chart: &WilkingChart, xi: &[f64], t: f64) -> Result<S2xS3Point> {
    let w = chart.horizontal_lift(xi)?;
    let w1: [f64; 6] = core::array::from_fn(|i| w[i]);
    let w2: [f64; 6] = core::array::from_fn(|i| w[6 + i]);
    let a = group_geodesic(&w1, t);
    let b = pair_mul(&chart.center_lift(), &group_geodesic(&w2, t));
    let g = pair_mul(&pair_inv(&a), &b);
    let x = act_unchecked(&g, &S2xS3Point::BASE);
    Ok(S2xS3Point::normalized(x.p, x.v))
}
