//! Squared distance to the flat orbits and the potential built from it.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::algebra::quaternion::{dot3, norm3, rotation_taking_i_to, Imag};
use crate::algebra::Quat;
use crate::curvature::MetricField;
use crate::error::{Error, Result};
use crate::linalg::sym2_eigenvalues;
use crate::wilking::{
    act_unchecked, group_geodesic, pair_inv, pair_mul, slice_point, FlatLocusAtlas, S2xS3Point, WilkingChart,
};

/// Euclidean length in `R^8` of a unit `g_W` vector is at most this (the
/// measured maximum is about 3.46).
pub const CHORDAL_STRETCH: f64 = 4.0;

/// `exp(-1/x)` for `x > 0`, else `0`.
fn mollifier(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        libm::exp(-1.0 / x)
    }
}

/// Smooth cutoff in the distance `d`: `1` for `d <= r0`, `0` for `d >= r1`.
pub fn bump(d: f64, r0: f64, r1: f64) -> f64 {
    let a = mollifier(r1 - d);
    let b = mollifier(d - r0);
    if a + b == 0.0 {
        return if d <= r0 { 1.0 } else { 0.0 };
    }
    a / (a + b)
}

/// Conjugation orbits carrying flat planes that the potential is built around.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlatOrbit {
    /// `{p = sign}`, a 2-sphere.
    RealP(i8),
    /// `{v = sign}`, a 2-sphere.
    RealV(i8),
    /// `{Re p = Re v = 0}`, where the two flat hypersurfaces meet.
    Rp3,
}

impl FlatOrbit {
    pub fn from_invariants(inv: [f64; 2]) -> Result<Self> {
        let sign = |x: f64| if x > 0.0 { 1 } else { -1 };
        if (inv[0].abs() - 1.0).abs() < 1e-6 && inv[1].abs() < 1e-6 {
            Ok(FlatOrbit::RealP(sign(inv[0])))
        } else if (inv[1].abs() - 1.0).abs() < 1e-6 && inv[0].abs() < 1e-6 {
            Ok(FlatOrbit::RealV(sign(inv[1])))
        } else if inv[0].abs() < 1e-6 && inv[1].abs() < 1e-6 {
            Ok(FlatOrbit::Rp3)
        } else {
            Err(Error::InvalidData(alloc::format!("no flat orbit has invariants {inv:?}")))
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            FlatOrbit::Rp3 => 3,
            _ => 2,
        }
    }

    /// A point of the orbit on the slice.
    pub fn representative(&self) -> S2xS3Point {
        use core::f64::consts::{FRAC_PI_2, PI};
        match *self {
            FlatOrbit::RealP(1) => slice_point(0.0, FRAC_PI_2),
            FlatOrbit::RealP(_) => slice_point(PI, FRAC_PI_2),
            FlatOrbit::RealV(1) => slice_point(FRAC_PI_2, PI),
            FlatOrbit::RealV(_) => slice_point(FRAC_PI_2, 0.0),
            FlatOrbit::Rp3 => slice_point(FRAC_PI_2, FRAC_PI_2),
        }
    }

    /// Chordal distance in `R^8` from `x` to the orbit.
    pub fn chordal_distance(&self, x: &S2xS3Point) -> f64 {
        let (real, other, s) = match *self {
            FlatOrbit::RealP(s) => (x.p, x.v, s),
            FlatOrbit::RealV(s) => (x.v, x.p, s),
            FlatOrbit::Rp3 => {
                // min over orthonormal (a, b) of |Im p - a|^2 + |Im v - b|^2
                // is sum (sigma_i - 1)^2 over the singular values of
                // [Im p, Im v]; written as squares to avoid cancellation
                let (a, b) = (x.p.imag(), x.v.imag());
                let (lo, hi) = sym2_eigenvalues(dot3(a, a), dot3(a, b), dot3(b, b));
                let dev = |e: f64| {
                    let d = libm::sqrt(e.max(0.0)) - 1.0;
                    d * d
                };
                return libm::sqrt(x.p.w * x.p.w + x.v.w * x.v.w + dev(lo) + dev(hi));
            }
        };
        let d_real = (real - Quat::ONE.scale(s as f64)).norm_sqr();
        // min over unit imaginary w of |other - w|^2
        let d_im = norm3(other.imag()) - 1.0;
        let d_other = other.w * other.w + d_im * d_im;
        libm::sqrt(d_real + d_other)
    }
}

fn g_inner(g: &DMatrix<f64>, a: &[f64; 5], b: &[f64; 5]) -> f64 {
    (0..5).map(|i| (0..5).map(|j| a[i] * g[(i, j)] * b[j]).sum::<f64>()).sum()
}

fn gram_schmidt(g: &DMatrix<f64>, vecs: &[[f64; 5]], cutoff: f64) -> Vec<[f64; 5]> {
    let scale = vecs.iter().map(|v| libm::sqrt(g_inner(g, v, v))).fold(0.0, f64::max);
    let mut out: Vec<[f64; 5]> = Vec::new();
    for v in vecs {
        let mut w = *v;
        for _ in 0..2 {
            for e in &out {
                let c = g_inner(g, &w, e);
                for k in 0..5 {
                    w[k] -= c * e[k];
                }
            }
        }
        let n = libm::sqrt(g_inner(g, &w, &w));
        if n > cutoff * scale.max(1e-300) {
            out.push(core::array::from_fn(|k| w[k] / n));
        }
    }
    out
}

/// `g_W`-orthonormal tangent and normal chart vectors of the conjugation
/// orbit through the center of `chart`.
pub fn orbit_tangent_normal(chart: &WilkingChart) -> Result<(Vec<[f64; 5]>, Vec<[f64; 5]>)> {
    let g = chart.metric(&[0.0; 5])?;
    let fields = [
        chart.conjugation_field([1.0, 0.0, 0.0])?,
        chart.conjugation_field([0.0, 1.0, 0.0])?,
        chart.conjugation_field([0.0, 0.0, 1.0])?,
    ];
    let tangent = gram_schmidt(&g, &fields, 1e-6);
    let mut all = tangent.clone();
    all.extend((0..5).map(crate::linalg::basis::<5>));
    let normal = gram_schmidt(&g, &all, 1e-8).split_off(tangent.len());
    if tangent.len() + normal.len() != 5 {
        return Err(Error::RankDeficient {
            rank: tangent.len() + normal.len(),
            expected: 5,
        });
    }
    Ok((tangent, normal))
}

/// Quasi-uniform rotations: Fibonacci axes times turns about them.
fn rotation_net(axes: usize, turns: usize) -> Vec<Quat> {
    let golden = core::f64::consts::PI * (3.0 - libm::sqrt(5.0));
    let mut out = Vec::new();
    for k in 0..axes {
        let z = 1.0 - (2.0 * k as f64 + 1.0) / axes as f64;
        let r = libm::sqrt(1.0 - z * z);
        let phi = golden * k as f64;
        let d = [z, r * libm::cos(phi), r * libm::sin(phi)];
        for t in 0..turns {
            let gamma = core::f64::consts::TAU * t as f64 / turns as f64;
            out.push(rotation_taking_i_to(d) * Quat::exp_imag([0.5 * gamma, 0.0, 0.0]));
        }
    }
    out
}

/// Normal exponential map of one flat orbit, used to measure the `g_W`
/// distance to it.
#[derive(Debug, Clone)]
pub struct OrbitTube {
    pub orbit: FlatOrbit,
    pub seed: S2xS3Point,
    chart: WilkingChart,
    /// `g_W`-orthonormal chart vectors at the seed.
    pub tangent: Vec<[f64; 5]>,
    pub normal: Vec<[f64; 5]>,
    normal_lifts: Vec<[f64; 12]>,
    /// Conjugations spreading the seed over the orbit.
    rotations: Vec<Quat>,
    seeds: Vec<S2xS3Point>,
}

impl OrbitTube {
    /// Tube around the orbit through `seed`, with starting guesses at the
    /// conjugates of `seed` by `rotations`.
    pub fn new(orbit: FlatOrbit, seed: S2xS3Point, rotations: Vec<Quat>) -> Result<Self> {
        if rotations.is_empty() {
            return Err(Error::NormalSpace { index: 0 });
        }
        let chart = WilkingChart::centered_at(&seed);
        let (tangent, normal) = orbit_tangent_normal(&chart)?;
        if tangent.len() != orbit.dim() {
            return Err(Error::RankDeficient {
                rank: tangent.len(),
                expected: orbit.dim(),
            });
        }
        let normal_lifts = normal.iter().map(|n| chart.horizontal_lift(n)).collect::<Result<Vec<_>>>()?;
        let seeds = rotations.iter().map(|&k| act_unchecked(&[k, k], &seed)).collect();
        Ok(OrbitTube {
            orbit,
            seed,
            chart,
            tangent,
            normal,
            normal_lifts,
            rotations,
            seeds,
        })
    }

    /// Tube whose starting guesses are the points of an atlas cloud.
    pub fn from_cloud(cloud: &crate::wilking::SphereCloud) -> Result<Self> {
        let orbit = FlatOrbit::from_invariants(cloud.invariants)?;
        let seed = *cloud.seed();
        let axis = |x: &S2xS3Point| -> Imag {
            let w = match orbit {
                FlatOrbit::RealP(_) => x.v.imag(),
                _ => x.p.imag(),
            };
            let n = norm3(w);
            [w[0] / n, w[1] / n, w[2] / n]
        };
        let back = rotation_taking_i_to(axis(&seed)).conj();
        let rotations = cloud
            .points
            .iter()
            .map(|sp| rotation_taking_i_to(axis(&sp.analysis.point)) * back)
            .collect();
        Self::new(orbit, seed, rotations)
    }

    /// Tube around `orbit` seeded at its slice representative.
    pub fn for_orbit(orbit: FlatOrbit) -> Result<Self> {
        Self::new(orbit, orbit.representative(), rotation_net(12, 4))
    }

    /// Tube around the RP^3 orbit through `(i, j)`.
    pub fn rp3() -> Result<Self> {
        Self::for_orbit(FlatOrbit::Rp3)
    }

    /// Points where the distance solve may start.
    pub fn seeds(&self) -> &[S2xS3Point] {
        &self.seeds
    }

    /// `exp_seed(sum n_a N_a)`.
    pub fn normal_exp(&self, n: &[f64]) -> S2xS3Point {
        let mut w = [0.0; 12];
        for (a, lift) in self.normal_lifts.iter().enumerate() {
            for k in 0..12 {
                w[k] += n[a] * lift[k];
            }
        }
        let w1: [f64; 6] = core::array::from_fn(|i| w[i]);
        let w2: [f64; 6] = core::array::from_fn(|i| w[6 + i]);
        let a = group_geodesic(&w1, 1.0);
        let b = pair_mul(&self.chart.center_lift(), &group_geodesic(&w2, 1.0));
        act_unchecked(&pair_mul(&pair_inv(&a), &b), &S2xS3Point::BASE)
    }

    /// `k exp_seed(n) k^-1` with `k = exp(omega) k0`, `z = (omega, n)`.
    fn model(&self, k0: Quat, z: &[f64]) -> [f64; 8] {
        let k = Quat::exp_imag([z[0], z[1], z[2]]) * k0;
        let x = self.normal_exp(&z[3..]);
        act_unchecked(&[k, k], &x).to_array()
    }

    /// Squared `g_W` distance from the seed's orbit, starting at seed point
    /// `j`: solves `x = k exp_seed(n) k^-1` by damped Gauss-Newton and
    /// returns `|n|^2`.
    pub fn dist_sq_seeded(&self, x: &S2xS3Point, j: usize) -> Result<f64> {
        let k0 = *self.rotations.get(j).ok_or(Error::NormalSpace { index: j })?;
        let nz = 3 + self.normal.len();
        let target = x.to_array();
        let resid = |z: &[f64]| -> DVector<f64> {
            let m = self.model(k0, z);
            DVector::from_fn(8, |i, _| m[i] - target[i])
        };
        let mut z = alloc::vec![0.0; nz];
        let mut f = resid(&z);
        let h = 1e-7;
        let mut mu = 1e-8;
        for _ in 0..200 {
            if f.norm() < 1e-14 {
                break;
            }
            let mut jac = DMatrix::<f64>::zeros(8, nz);
            for c in 0..nz {
                let mut zp = z.clone();
                let mut zm = z.clone();
                zp[c] += h;
                zm[c] -= h;
                jac.set_column(c, &((resid(&zp) - resid(&zm)) / (2.0 * h)));
            }
            let jtj = jac.transpose() * &jac;
            let grad = jac.transpose() * &f;
            let scale = jtj.trace() / nz as f64;
            // Levenberg-Marquardt: shrink the damping after a successful
            // step, grow it until the residual decreases
            let mut improved = false;
            while mu < 1e8 {
                let a = &jtj + DMatrix::<f64>::identity(nz, nz) * (mu * scale);
                let Some(chol) = a.cholesky() else {
                    mu *= 4.0;
                    continue;
                };
                let step = -chol.solve(&grad);
                let trial: Vec<f64> = (0..nz).map(|i| z[i] + step[i]).collect();
                let ft = resid(&trial);
                if ft.norm() < f.norm() {
                    z = trial;
                    f = ft;
                    mu = (mu / 3.0).max(1e-14);
                    improved = true;
                    break;
                }
                mu *= 4.0;
            }
            if !improved {
                break;
            }
        }
        let residual = f.norm();
        if residual > 1e-11 {
            return Err(Error::GeodesicSolve { residual });
        }
        Ok(z[3..].iter().map(|t| t * t).sum())
    }

    /// Seed indices ordered by chordal distance to `x`.
    pub fn seeds_by_distance(&self, x: &S2xS3Point) -> Vec<usize> {
        let d: Vec<f64> = self.seeds.iter().map(|c| c.chordal_distance(x)).collect();
        let mut idx: Vec<usize> = (0..d.len()).collect();
        idx.sort_by(|&a, &b| d[a].total_cmp(&d[b]).then(a.cmp(&b)));
        idx
    }

    /// Squared distance: the smallest solution started from the two nearest
    /// seeds that converge (of the four nearest).
    pub fn dist_sq(&self, x: &S2xS3Point) -> Result<f64> {
        let mut last = Error::GeodesicSolve { residual: f64::INFINITY };
        let mut best: Option<f64> = None;
        let mut found = 0;
        for &j in self.seeds_by_distance(x).iter().take(4) {
            match self.dist_sq_seeded(x, j) {
                Ok(v) => {
                    best = Some(best.map_or(v, |b: f64| b.min(v)));
                    found += 1;
                    if found == 2 {
                        break;
                    }
                }
                Err(e) => last = e,
            }
        }
        best.ok_or(last)
    }

    /// Squared `g_W` length of the normal part of a chart vector at the seed.
    pub fn normal_part_sq(&self, xi: &[f64; 5]) -> Result<f64> {
        let g = self.chart.metric(&[0.0; 5])?;
        Ok(self.normal.iter().map(|n| { let c = g_inner(&g, xi, n); c * c }).sum())
    }
}

/// Which flat orbits the potential is built around.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialSupport {
    /// The four 2-spheres only.
    Spheres,
    /// The four 2-spheres and the RP^3 orbit, where two orthogonal flat
    /// planes also meet.
    SpheresAndRp3,
}

/// `phi = - sum_i chi_i psi_i` with `psi_i` the squared `g_W` distance to
/// the `i`-th orbit and `chi_i` a cutoff in that distance.
#[derive(Debug, Clone)]
pub struct PotentialField {
    pub tubes: Vec<OrbitTube>,
    pub r0: f64,
    pub r1: f64,
}

impl PotentialField {
    pub fn new(tubes: Vec<OrbitTube>, r0: f64, r1: f64) -> Result<Self> {
        if !(r0 > 0.0 && r0 < r1) {
            return Err(Error::InvalidData(alloc::format!(
                "tube radii need 0 < r0 < r1, got {r0}, {r1}"
            )));
        }
        Ok(PotentialField { tubes, r0, r1 })
    }

    pub fn from_atlas(atlas: &FlatLocusAtlas, support: PotentialSupport, r0: f64, r1: f64) -> Result<Self> {
        let mut tubes = atlas.spheres.iter().map(OrbitTube::from_cloud).collect::<Result<Vec<_>>>()?;
        if support == PotentialSupport::SpheresAndRp3 {
            tubes.push(OrbitTube::rp3()?);
        }
        Self::new(tubes, r0, r1)
    }

    /// The potential around the four spheres (and the RP^3), without an
    /// atlas.
    pub fn standard(support: PotentialSupport, r0: f64, r1: f64) -> Result<Self> {
        let mut orbits = alloc::vec![FlatOrbit::RealP(1), FlatOrbit::RealP(-1), FlatOrbit::RealV(1), FlatOrbit::RealV(-1)];
        if support == PotentialSupport::SpheresAndRp3 {
            orbits.push(FlatOrbit::Rp3);
        }
        let tubes = orbits.into_iter().map(OrbitTube::for_orbit).collect::<Result<Vec<_>>>()?;
        Self::new(tubes, r0, r1)
    }

    /// Whether `x` may lie in the outer tube of orbit `i`.
    pub fn near(&self, x: &S2xS3Point, i: usize) -> bool {
        self.tubes[i].orbit.chordal_distance(x) < CHORDAL_STRETCH * self.r1
    }

    /// `psi_i(x)`.
    pub fn dist_sq_to_orbit(&self, x: &S2xS3Point, i: usize) -> Result<f64> {
        self.tubes[i].dist_sq(x)
    }

    /// `chi_i(x)`.
    pub fn chi(&self, x: &S2xS3Point, i: usize) -> Result<f64> {
        if !self.near(x, i) {
            return Ok(0.0);
        }
        Ok(bump(libm::sqrt(self.dist_sq_to_orbit(x, i)?), self.r0, self.r1))
    }

    pub fn phi(&self, x: &S2xS3Point) -> Result<f64> {
        let mut phi = 0.0;
        for i in 0..self.tubes.len() {
            if self.near(x, i) {
                let psi = self.dist_sq_to_orbit(x, i)?;
                phi -= bump(libm::sqrt(psi), self.r0, self.r1) * psi;
            }
        }
        Ok(phi)
    }

    /// A bound for `sup |phi|`.
    pub fn phi_bound(&self) -> f64 {
        self.tubes.len() as f64 * self.r1 * self.r1
    }

    /// Index and `g_W` distance of the closest orbit among those whose
    /// outer tube may contain `x`.
    pub fn nearest_tube(&self, x: &S2xS3Point) -> Result<Option<(usize, f64)>> {
        let mut best: Option<(usize, f64)> = None;
        for i in 0..self.tubes.len() {
            if self.near(x, i) {
                let d = libm::sqrt(self.dist_sq_to_orbit(x, i)?);
                if best.is_none_or(|(_, b)| d < b) {
                    best = Some((i, d));
                }
            }
        }
        Ok(best)
    }
}
