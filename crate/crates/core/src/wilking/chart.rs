//! Charts of `(S^2 x S^3, g_W)` from sections of the doubling quotient.

use nalgebra::{DMatrix, SMatrix, SVector};

use super::{pair_inv, pair_mul, DoubleCosetRep, QuatPair, IDENTITY_PAIR};
use crate::algebra::quaternion::{dexp_left, Imag};
use crate::algebra::Quat;
use crate::curvature::{ChartSpec, MetricField};
use crate::error::{Error, Result};

type Mat12x7 = SMatrix<f64, 12, 7>;
type Mat12x5 = SMatrix<f64, 12, 5>;
type Vec12 = SVector<f64, 12>;

const S: f64 = core::f64::consts::FRAC_1_SQRT_2;

/// `(i, i) / sqrt 2`, the unit generator of the isotropy algebra.
pub const ISOTROPY_GENERATOR: [f64; 6] = [S, 0.0, 0.0, S, 0.0, 0.0];

/// A `g0`-orthonormal basis of the `g0`-complement of the isotropy algebra:
/// `(j,0), (k,0), (0,j), (0,k), (i,-i)/sqrt 2`.
pub fn isotropy_complement() -> [[f64; 6]; 5] {
    [
        [0.0, 1.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
        [S, 0.0, 0.0, -S, 0.0, 0.0],
    ]
}

/// `Phi (x1, x2) = (3/4 x1 - 1/4 x2, 3/4 x2 - 1/4 x1)`, applied to both
/// factors of `G x G`.
fn apply_m(w: &Vec12) -> Vec12 {
    let mut out = Vec12::zeros();
    for f in 0..2 {
        let o = 6 * f;
        for k in 0..3 {
            let (x1, x2) = (w[o + k], w[o + 3 + k]);
            out[o + k] = 0.75 * x1 - 0.25 * x2;
            out[o + 3 + k] = 0.75 * x2 - 0.25 * x1;
        }
    }
    out
}

fn apply_m_cols<const C: usize>(w: &SMatrix<f64, 12, C>) -> SMatrix<f64, 12, C> {
    let mut out = SMatrix::<f64, 12, C>::zeros();
    for c in 0..C {
        out.set_column(c, &apply_m(&w.column(c).into_owned()));
    }
    out
}

fn ad_inv(q: Quat, x: Imag) -> Imag {
    q.conj().rotate(x)
}

fn vertical_at(rep: &DoubleCosetRep) -> Mat12x7 {
    let mut v = Mat12x7::zeros();
    for z in 0..6 {
        let f = z / 3;
        let mut x = [0.0; 3];
        x[z % 3] = 1.0;
        let ya = ad_inv(rep.a[f], x);
        let yb = ad_inv(rep.b[f], x);
        for k in 0..3 {
            v[(3 * f + k, z)] = ya[k];
            v[(6 + 3 * f + k, z)] = yb[k];
        }
    }
    for k in 0..6 {
        v[(6 + k, 6)] = ISOTROPY_GENERATOR[k];
    }
    v
}

/// Basis (columns, left trivialization) of the vertical space of the
/// quotient map at `rep`: `(Ad_{a^-1} X, Ad_{b^-1} X)` for `X` in `g` and
/// `(0, Y)` for `Y` in the isotropy algebra.
pub fn vertical_space(rep: &DoubleCosetRep) -> Result<DMatrix<f64>> {
    let v = vertical_at(rep);
    let rank = v.svd(false, false).rank(1e-8);
    if rank < 7 {
        return Err(Error::RankDeficient { rank, expected: 7 });
    }
    Ok(DMatrix::from_fn(12, 7, |i, j| v[(i, j)]))
}

/// `g + g`-orthogonal projection onto the horizontal space at a point of
/// `G x G`.
#[derive(Debug, Clone)]
pub struct HorizontalData {
    v: Mat12x7,
    mv: Mat12x7,
    chol: nalgebra::Cholesky<f64, nalgebra::Const<7>>,
}

impl HorizontalData {
    pub fn new(rep: &DoubleCosetRep) -> Result<Self> {
        let v = vertical_at(rep);
        let mv = apply_m_cols(&v);
        let chol = (v.transpose() * mv).cholesky().ok_or(Error::RankDeficient { rank: 6, expected: 7 })?;
        Ok(HorizontalData { v, mv, chol })
    }

    pub fn project(&self, w: &[f64; 12]) -> [f64; 12] {
        let w = Vec12::from_column_slice(w);
        let coef = self.chol.solve(&(self.mv.transpose() * w));
        let h = w - self.v * coef;
        h.into()
    }

    fn project_cols(&self, w: &Mat12x5) -> Mat12x5 {
        let coef = self.chol.solve(&(self.mv.transpose() * w));
        w - self.v * coef
    }
}

/// Horizontal part of a left-trivialized tangent vector at `rep`.
pub fn horizontal_project(rep: &DoubleCosetRep, w: &[f64; 12]) -> Result<[f64; 12]> {
    Ok(HorizontalData::new(rep)?.project(w))
}

/// `<w1, w2>` in `g + g`.
pub fn total_inner(w1: &[f64; 12], w2: &[f64; 12]) -> f64 {
    let m = apply_m(&Vec12::from_column_slice(w2));
    (0..12).map(|k| w1[k] * m[k]).sum()
}

/// The chart `t -> [(e, c exp(sum t_a E_a))]` around `c . (1, i)`.
#[derive(Debug, Clone)]
pub struct WilkingChart {
    c: QuatPair,
    basis: [[f64; 6]; 5],
    spec: ChartSpec,
}

impl WilkingChart {
    pub fn new(c: QuatPair) -> Self {
        Self::with_basis(c, isotropy_complement())
    }

    /// A chart using another `g0`-orthonormal basis of the isotropy complement.
    pub fn with_basis(c: QuatPair, basis: [[f64; 6]; 5]) -> Self {
        WilkingChart {
            c,
            basis,
            spec: ChartSpec::new(5),
        }
    }

    pub fn centered_at(x: &super::S2xS3Point) -> Self {
        Self::new(super::lift(x))
    }

    pub fn center_lift(&self) -> QuatPair {
        self.c
    }

    pub fn center(&self) -> super::S2xS3Point {
        super::act_unchecked(&self.c, &super::S2xS3Point::BASE)
    }

    pub fn spec(&self) -> ChartSpec {
        self.spec
    }

    fn algebra_element(&self, t: &[f64]) -> [f64; 6] {
        let mut x = [0.0; 6];
        for (a, e) in self.basis.iter().enumerate() {
            for k in 0..6 {
                x[k] += t[a] * e[k];
            }
        }
        x
    }

    /// `c exp(sum t_a E_a)`.
    pub fn section(&self, t: &[f64]) -> QuatPair {
        let x = self.algebra_element(t);
        let e = [Quat::exp_imag([x[0], x[1], x[2]]), Quat::exp_imag([x[3], x[4], x[5]])];
        pair_mul(&self.c, &e)
    }

    pub fn point(&self, t: &[f64]) -> super::S2xS3Point {
        super::act_unchecked(&self.section(t), &super::S2xS3Point::BASE)
    }

    fn rep(&self, t: &[f64]) -> DoubleCosetRep {
        DoubleCosetRep::from_pairs(IDENTITY_PAIR, self.section(t))
    }

    fn coordinate_vectors(&self, t: &[f64]) -> Mat12x5 {
        let x = self.algebra_element(t);
        let mut w = Mat12x5::zeros();
        for (a, e) in self.basis.iter().enumerate() {
            let d1 = dexp_left([x[0], x[1], x[2]], [e[0], e[1], e[2]]);
            let d2 = dexp_left([x[3], x[4], x[5]], [e[3], e[4], e[5]]);
            for k in 0..3 {
                w[(6 + k, a)] = d1[k];
                w[(9 + k, a)] = d2[k];
            }
        }
        w
    }

    /// Horizontal lifts (left trivialized at the section) of the coordinate
    /// vectors at `t`.
    pub fn horizontal_lifts(&self, t: &[f64]) -> Result<[[f64; 12]; 5]> {
        let hd = HorizontalData::new(&self.rep(t))?;
        let h = hd.project_cols(&self.coordinate_vectors(t));
        let mut out = [[0.0; 12]; 5];
        for (a, col) in out.iter_mut().enumerate() {
            for k in 0..12 {
                col[k] = h[(k, a)];
            }
        }
        Ok(out)
    }

    /// Horizontal lift of `sum xi_a d/dt_a` at the chart center.
    pub fn horizontal_lift(&self, xi: &[f64]) -> Result<[f64; 12]> {
        let h = self.horizontal_lifts(&[0.0; 5])?;
        let mut out = [0.0; 12];
        for (a, col) in h.iter().enumerate() {
            for k in 0..12 {
                out[k] += xi[a] * col[k];
            }
        }
        Ok(out)
    }

    /// Chart coordinates at the center of the projection of a
    /// left-trivialized vector `w` at `(e, c)`.
    pub fn coordinates_of(&self, w: &[f64; 12]) -> Result<[f64; 5]> {
        let h = self.horizontal_lifts(&[0.0; 5])?;
        let g = gw_metric_components(self, &[0.0; 5])?;
        let rhs = SVector::<f64, 5>::from_fn(|a, _| total_inner(&h[a], w));
        let chol = g.cholesky().ok_or(Error::NotPositiveDefinite { min_eigenvalue: 0.0 })?;
        Ok(chol.solve(&rhs).into())
    }

    /// Chart coordinates at the center of the velocity of `s -> (k_s p k_s^-1, k_s v k_s^-1)`
    /// with `k_s = exp(s omega)`.
    pub fn conjugation_field(&self, omega: Imag) -> Result<[f64; 5]> {
        let ci = pair_inv(&self.c);
        let a = ci[0].rotate(omega);
        let b = ci[1].rotate(omega);
        let mut w = [0.0; 12];
        for k in 0..3 {
            w[6 + k] = a[k];
            w[9 + k] = b[k];
        }
        self.coordinates_of(&w)
    }
}

/// `g_W` components of `chart` at `t`.
pub fn gw_metric_components(chart: &WilkingChart, t: &[f64]) -> Result<SMatrix<f64, 5, 5>> {
    let hd = HorizontalData::new(&chart.rep(t))?;
    let w = chart.coordinate_vectors(t);
    let h = hd.project_cols(&w);
    Ok(h.transpose() * apply_m_cols(&h))
}

impl MetricField for WilkingChart {
    fn chart(&self) -> ChartSpec {
        self.spec
    }

    fn metric(&self, t: &[f64]) -> Result<DMatrix<f64>> {
        let g = gw_metric_components(self, t)?;
        // exact symmetry
        Ok(DMatrix::from_fn(5, 5, |i, j| 0.5 * (g[(i, j)] + g[(j, i)])))
    }
}

#[cfg(test)]
mod tests {
    use super::super::{coset_to_point, lift, S2xS3Point};
    use super::*;
    use crate::curvature::{metric_components, riemann_fd, sec_from_riemann};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_unit(rng: &mut ChaCha8Rng) -> Quat {
        Quat::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        )
        .normalize()
    }

    fn random_pair(rng: &mut ChaCha8Rng) -> QuatPair {
        [random_unit(rng), random_unit(rng)]
    }

    fn random_t(rng: &mut ChaCha8Rng, r: f64) -> [f64; 5] {
        core::array::from_fn(|_| rng.random_range(-r..r))
    }

    #[test]
    fn vertical_space_has_rank_seven() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let rep = DoubleCosetRep::from_pairs(random_pair(&mut rng), random_pair(&mut rng));
            let v = vertical_space(&rep).unwrap();
            assert_eq!(v.clone().svd(false, false).rank(1e-8), 7);
        }
        let v = vertical_space(&DoubleCosetRep::from_pairs(IDENTITY_PAIR, IDENTITY_PAIR)).unwrap();
        // diagonal (X, X) and (0, h)
        for z in 0..6 {
            for k in 0..6 {
                assert_eq!(v[(k, z)], v[(6 + k, z)]);
            }
        }
        assert_eq!(v[(6, 6)], S);
        assert_eq!(v[(0, 6)], 0.0);
    }

    #[test]
    fn vertical_vectors_do_not_move_the_point() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let rep = DoubleCosetRep::from_pairs(random_pair(&mut rng), random_pair(&mut rng));
        let v = vertical_space(&rep).unwrap();
        let h = 1e-5;
        for c in 0..7 {
            let col: [f64; 12] = core::array::from_fn(|k| v[(k, c)]);
            let moved = |s: f64| {
                let ea = [
                    Quat::exp_imag([s * col[0], s * col[1], s * col[2]]),
                    Quat::exp_imag([s * col[3], s * col[4], s * col[5]]),
                ];
                let eb = [
                    Quat::exp_imag([s * col[6], s * col[7], s * col[8]]),
                    Quat::exp_imag([s * col[9], s * col[10], s * col[11]]),
                ];
                coset_to_point(&DoubleCosetRep::from_pairs(pair_mul(&rep.a, &ea), pair_mul(&rep.b, &eb)))
            };
            let (p, m) = (moved(h).to_array(), moved(-h).to_array());
            let d = (0..8).map(|k| ((p[k] - m[k]) / (2.0 * h)).abs()).fold(0.0, f64::max);
            assert!(d < 1e-8, "column {c}: {d}");
        }
    }

    #[test]
    fn metric_is_positive_definite() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let chart = WilkingChart::new(random_pair(&mut rng));
            let t = random_t(&mut rng, 0.2);
            metric_components(&chart, &[0.0; 5]).unwrap();
            metric_components(&chart, &t).unwrap();
        }
    }

    #[test]
    fn horizontal_and_vertical_are_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let chart = WilkingChart::new(random_pair(&mut rng));
        let t = random_t(&mut rng, 0.2);
        let h = chart.horizontal_lifts(&t).unwrap();
        let v = vertical_space(&chart.rep(&t)).unwrap();
        for col in &h {
            for c in 0..7 {
                let vc: [f64; 12] = core::array::from_fn(|k| v[(k, c)]);
                assert!(total_inner(col, &vc).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn components_do_not_depend_on_left_diagonal_move() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let c = random_pair(&mut rng);
        let g = random_pair(&mut rng);
        let t = random_t(&mut rng, 0.2);
        let chart = WilkingChart::new(c);
        let base = gw_metric_components(&chart, &t).unwrap();
        // recompute through (g e, g c exp(..)) directly
        let b = chart.section(&t);
        let rep = DoubleCosetRep::from_pairs(g, pair_mul(&g, &b));
        let hd = HorizontalData::new(&rep).unwrap();
        let w = chart.coordinate_vectors(&t);
        // left translation by g leaves left-trivialized vectors at the
        // second factor unchanged, the first factor gets no component
        let h = hd.project_cols(&w);
        let moved = h.transpose() * apply_m_cols(&h);
        assert!((moved - base).amax() < 1e-10);
    }

    #[test]
    fn submersion_does_not_increase_length() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let chart = WilkingChart::new(random_pair(&mut rng));
        for _ in 0..20 {
            let w: [f64; 12] = core::array::from_fn(|_| rng.random_range(-1.0..1.0));
            let xi = chart.coordinates_of(&w).unwrap();
            let g = gw_metric_components(&chart, &[0.0; 5]).unwrap();
            let x = SVector::<f64, 5>::from_column_slice(&xi);
            let quotient = (x.transpose() * g * x)[0];
            assert!(quotient <= total_inner(&w, &w) + 1e-10);
        }
    }

    #[test]
    fn lift_and_isotropy_give_same_curvature() {
        let x = S2xS3Point::normalized(Quat::new(0.4, 0.1, -0.6, 0.3), Quat::new(0.2, 0.5, 0.3, -0.4));
        let c = lift(&x);
        let h = Quat::exp_imag([0.7, 0.0, 0.0]);
        let ch = pair_mul(&c, &[h, h]);
        let a = WilkingChart::new(c);
        let b = WilkingChart::new(ch);
        assert!(a.center().chordal_distance(&b.center()) < 1e-14);
        let ra = riemann_fd(&a, &[0.0; 5]).unwrap();
        let rb = riemann_fd(&b, &[0.0; 5]).unwrap();
        // the two charts differ by Ad_h on the complement
        let hd = Quat::exp_imag([0.7, 0.0, 0.0]);
        let e = isotropy_complement();
        let ad = |x: &[f64; 6]| -> [f64; 6] {
            let p = hd.rotate([x[0], x[1], x[2]]);
            let q = hd.rotate([x[3], x[4], x[5]]);
            [p[0], p[1], p[2], q[0], q[1], q[2]]
        };
        let m = DMatrix::from_fn(5, 5, |i, j| {
            let adj = ad(&e[j]);
            (0..6).map(|k| e[i][k] * adj[k]).sum::<f64>()
        });
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let u = random_t(&mut rng, 1.0);
            let v = random_t(&mut rng, 1.0);
            let mu: Vec<f64> = (0..5).map(|i| (0..5).map(|j| m[(i, j)] * u[j]).sum()).collect();
            let mv: Vec<f64> = (0..5).map(|i| (0..5).map(|j| m[(i, j)] * v[j]).sum()).collect();
            let sa = sec_from_riemann(&ra.r, &ra.g, &mu, &mv).unwrap();
            let sb = sec_from_riemann(&rb.r, &rb.g, &u, &v).unwrap();
            assert!((sa - sb).abs() < 1e-6, "{sa} vs {sb}");
        }
    }
}
