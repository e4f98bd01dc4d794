//! Riemann tensor of a metric given in a chart, from central differences of
//! its components with Richardson extrapolation.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grassmann::{CurvatureOperator, BIVECTOR_DIM, PAIRS};

/// Step sizes and validity region of a chart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChartSpec {
    pub param_dim: usize,
    /// Coarsest finite-difference step; it is halved twice.
    pub fd_step: f64,
    /// Parameters are valid while their Euclidean norm stays below this.
    pub radius: f64,
}

impl ChartSpec {
    pub const fn new(param_dim: usize) -> Self {
        ChartSpec {
            param_dim,
            fd_step: 1e-3,
            radius: 0.4,
        }
    }
}

/// Metric components `g(t)` in a chart.
pub trait MetricField: Sync {
    fn chart(&self) -> ChartSpec;
    /// Components at `t`; implementations need not check the chart domain.
    fn metric(&self, t: &[f64]) -> Result<DMatrix<f64>>;
}

/// Checked evaluation: domain, symmetry and positive definiteness.
pub fn metric_components<F: MetricField + ?Sized>(field: &F, t: &[f64]) -> Result<DMatrix<f64>> {
    let spec = field.chart();
    let r = libm::sqrt(t.iter().map(|x| x * x).sum());
    if t.len() != spec.param_dim || r > spec.radius {
        return Err(Error::ChartDomain {
            norm: r,
            radius: spec.radius,
        });
    }
    let g = field.metric(t)?;
    let asymmetry = (&g - g.transpose()).amax();
    if asymmetry > 1e-12 * g.amax().max(1.0) {
        return Err(Error::NotSymmetric { asymmetry });
    }
    if g.clone().cholesky().is_none() {
        let min_eigenvalue = g.clone().symmetric_eigenvalues().min();
        return Err(Error::NotPositiveDefinite { min_eigenvalue });
    }
    Ok(g)
}

/// A `(0,4)` tensor in chart coordinates with the convention
/// `sec(u ^ v) = R(u, v, v, u) / |u ^ v|^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Riemann {
    n: usize,
    data: Vec<f64>,
}

impl Riemann {
    pub fn zeros(n: usize) -> Self {
        Riemann {
            n,
            data: vec![0.0; n * n * n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    fn idx(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * self.n + j) * self.n + k) * self.n + l
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.data[self.idx(i, j, k, l)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, l: usize, v: f64) {
        let x = self.idx(i, j, k, l);
        self.data[x] = v;
    }

    /// `R(a, b, c, d)` for vectors.
    pub fn eval(&self, a: &[f64], b: &[f64], c: &[f64], d: &[f64]) -> f64 {
        let n = self.n;
        let mut s = 0.0;
        for i in 0..n {
            if a[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                let ab = a[i] * b[j];
                if ab == 0.0 {
                    continue;
                }
                for k in 0..n {
                    let abc = ab * c[k];
                    if abc == 0.0 {
                        continue;
                    }
                    let base = self.idx(i, j, k, 0);
                    for l in 0..n {
                        s += abc * d[l] * self.data[base + l];
                    }
                }
            }
        }
        s
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn max_diff(&self, other: &Riemann) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Largest violation of `R_ijkl = -R_jikl = -R_ijlk = R_klij`.
    pub fn symmetry_residual(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let r = self.get(i, j, k, l);
                        worst = worst
                            .max((r + self.get(j, i, k, l)).abs())
                            .max((r + self.get(i, j, l, k)).abs())
                            .max((r - self.get(k, l, i, j)).abs());
                    }
                }
            }
        }
        worst
    }

    /// Largest `|R_ijkl + R_jkil + R_kijl|`.
    pub fn bianchi_residual(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let s = self.get(i, j, k, l) + self.get(j, k, i, l) + self.get(k, i, j, l);
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }

    /// Projection onto algebraic curvature tensors: average over the pair
    /// symmetries, then remove the totally antisymmetric (Bianchi) part.
    pub fn symmetrized(&self) -> Riemann {
        let n = self.n;
        let mut t = Riemann::zeros(n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let s = self.get(i, j, k, l) - self.get(j, i, k, l) - self.get(i, j, l, k)
                            + self.get(j, i, l, k)
                            + self.get(k, l, i, j)
                            - self.get(l, k, i, j)
                            - self.get(k, l, j, i)
                            + self.get(l, k, j, i);
                        t.set(i, j, k, l, s / 8.0);
                    }
                }
            }
        }
        let mut out = Riemann::zeros(n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let b = (t.get(i, j, k, l) + t.get(j, k, i, l) + t.get(k, i, j, l)) / 3.0;
                        out.set(i, j, k, l, t.get(i, j, k, l) - b);
                    }
                }
            }
        }
        out
    }

    /// The tensor in a new basis whose vectors are the columns of `e`.
    pub fn in_frame(&self, e: &DMatrix<f64>) -> Riemann {
        let n = self.n;
        let cols: Vec<Vec<f64>> = (0..n).map(|a| e.column(a).iter().copied().collect()).collect();
        let mut out = Riemann::zeros(n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        out.set(a, b, c, d, self.eval(&cols[a], &cols[b], &cols[c], &cols[d]));
                    }
                }
            }
        }
        out
    }
}

/// Output of [`riemann_fd`].
#[derive(Debug, Clone)]
pub struct RiemannReport {
    /// Symmetrized tensor.
    pub r: Riemann,
    /// Metric at the evaluation point.
    pub g: DMatrix<f64>,
    /// Symmetry residual before symmetrization.
    pub presym_residual: f64,
    /// Bianchi residual before symmetrization.
    pub presym_bianchi: f64,
    /// Difference between the last two Richardson estimates.
    pub convergence: f64,
}

impl RiemannReport {
    /// Columns form a `g`-orthonormal basis (inverse transpose of the
    /// Cholesky factor).
    pub fn orthonormal_frame(&self) -> DMatrix<f64> {
        let l = self.g.clone().cholesky().expect("metric is positive definite").l();
        l.transpose().try_inverse().expect("invertible")
    }

    /// Curvature operator on `Lambda^2` in the orthonormal frame (5-dimensional charts).
    pub fn operator(&self) -> (CurvatureOperator, DMatrix<f64>) {
        assert_eq!(self.r.dim(), crate::linalg::DIM, "curvature operators are 5-dimensional");
        let e = self.orthonormal_frame();
        let rf = self.r.in_frame(&e);
        let mut k = [[0.0; BIVECTOR_DIM]; BIVECTOR_DIM];
        for (a, &(i, j)) in PAIRS.iter().enumerate() {
            for (b, &(kk, l)) in PAIRS.iter().enumerate() {
                k[a][b] = rf.get(i, j, l, kk);
            }
        }
        (CurvatureOperator { k }, e)
    }
}

pub const RICHARDSON_LEVELS: usize = 3;

/// Points at which [`riemann_from_samples`] needs the metric, level by level:
/// the center, `t +- h e_k`, and `t + h (+-e_k +- e_l)` for `k < l`, with
/// `h = fd_step / 2^level`.
pub fn stencil_points(t: &[f64], fd_step: f64) -> Vec<Vec<f64>> {
    let n = t.len();
    let mut pts = Vec::new();
    for level in 0..RICHARDSON_LEVELS {
        let h = fd_step / (1u32 << level) as f64;
        pts.push(t.to_vec());
        for k in 0..n {
            for s in [1.0, -1.0] {
                let mut p = t.to_vec();
                p[k] += s * h;
                pts.push(p);
            }
        }
        for k in 0..n {
            for l in k + 1..n {
                for (sk, sl) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                    let mut p = t.to_vec();
                    p[k] += sk * h;
                    p[l] += sl * h;
                    pts.push(p);
                }
            }
        }
    }
    pts
}

fn stencil_len(n: usize) -> usize {
    1 + 2 * n + 2 * n * (n - 1)
}

/// First and second derivatives of the components at one level.
struct Derivatives {
    d1: Vec<DMatrix<f64>>,
    d2: Vec<DMatrix<f64>>,
}

fn level_derivatives(n: usize, h: f64, s: &[DMatrix<f64>]) -> Derivatives {
    let center = &s[0];
    let plus = |k: usize| &s[1 + 2 * k];
    let minus = |k: usize| &s[2 + 2 * k];
    let mut d1 = Vec::with_capacity(n);
    let mut d2 = vec![DMatrix::zeros(n, n); n * n];
    for k in 0..n {
        d1.push((plus(k) - minus(k)) / (2.0 * h));
        d2[k * n + k] = (plus(k) - center * 2.0 + minus(k)) / (h * h);
    }
    let mut idx = 1 + 2 * n;
    for k in 0..n {
        for l in k + 1..n {
            let m = (&s[idx] - &s[idx + 1] - &s[idx + 2] + &s[idx + 3]) / (4.0 * h * h);
            d2[k * n + l] = m.clone();
            d2[l * n + k] = m;
            idx += 4;
        }
    }
    Derivatives { d1, d2 }
}

fn richardson(coarse: &DMatrix<f64>, fine: &DMatrix<f64>, order: i32) -> DMatrix<f64> {
    let f = libm::pow(2.0, order as f64);
    fine + (fine - coarse) / (f - 1.0)
}

/// Curvature from the metric and its first and second derivatives.
fn riemann_from_derivatives(g: &DMatrix<f64>, d1: &[DMatrix<f64>], d2: &[DMatrix<f64>]) -> Result<Riemann> {
    let n = g.nrows();
    let ginv = g.clone().try_inverse().ok_or(Error::NotPositiveDefinite { min_eigenvalue: 0.0 })?;
    // dg(k, i, j) = d_k g_ij
    let dg = |k: usize, i: usize, j: usize| d1[k][(i, j)];
    let ddg = |a: usize, b: usize, i: usize, j: usize| d2[a * n + b][(i, j)];
    // first-kind Christoffel symbols Gamma_{m, jk}
    let mut g1 = vec![0.0; n * n * n];
    for m in 0..n {
        for j in 0..n {
            for k in 0..n {
                g1[(m * n + j) * n + k] = 0.5 * (dg(j, m, k) + dg(k, m, j) - dg(m, j, k));
            }
        }
    }
    let mut g2 = vec![0.0; n * n * n];
    for m in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut s = 0.0;
                for p in 0..n {
                    s += ginv[(m, p)] * g1[(p * n + j) * n + k];
                }
                g2[(m * n + j) * n + k] = s;
            }
        }
    }
    let c1 = |m: usize, j: usize, k: usize| g1[(m * n + j) * n + k];
    let c2 = |m: usize, j: usize, k: usize| g2[(m * n + j) * n + k];
    let mut r = Riemann::zeros(n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    // L(i,j,k,l), with sec = L(u,v,u,v)/|u^v|^2; stored as R(i,j,l,k)
                    let mut v = 0.5 * (ddg(j, k, i, l) + ddg(i, l, j, k) - ddg(j, l, i, k) - ddg(i, k, j, l));
                    for m in 0..n {
                        v += c1(m, j, k) * c2(m, i, l) - c1(m, j, l) * c2(m, i, k);
                    }
                    r.set(i, j, l, k, v);
                }
            }
        }
    }
    Ok(r)
}

/// Assembles the Riemann tensor from metric samples at [`stencil_points`].
pub fn riemann_from_samples(n: usize, fd_step: f64, samples: &[DMatrix<f64>], tol: f64) -> Result<RiemannReport> {
    let len = stencil_len(n);
    assert_eq!(samples.len(), len * RICHARDSON_LEVELS, "sample count must match the stencil");
    let levels: Vec<Derivatives> = (0..RICHARDSON_LEVELS)
        .map(|lv| level_derivatives(n, fd_step / (1u32 << lv) as f64, &samples[lv * len..(lv + 1) * len]))
        .collect();
    let g = samples[0].clone();
    let combine = |a: &Derivatives, b: &Derivatives| Derivatives {
        d1: a.d1.iter().zip(&b.d1).map(|(x, y)| richardson(x, y, 2)).collect(),
        d2: a.d2.iter().zip(&b.d2).map(|(x, y)| richardson(x, y, 2)).collect(),
    };
    let r01 = combine(&levels[0], &levels[1]);
    let r12 = combine(&levels[1], &levels[2]);
    let est1 = riemann_from_derivatives(&g, &r01.d1, &r01.d2)?;
    let d1: Vec<DMatrix<f64>> = r01.d1.iter().zip(&r12.d1).map(|(x, y)| richardson(x, y, 4)).collect();
    let d2: Vec<DMatrix<f64>> = r01.d2.iter().zip(&r12.d2).map(|(x, y)| richardson(x, y, 4)).collect();
    let est2 = riemann_from_derivatives(&g, &r12.d1, &r12.d2)?;
    let convergence = est1.max_diff(&est2);
    if convergence > tol {
        return Err(Error::OracleFailure {
            discrepancy: convergence,
            tolerance: tol,
        });
    }
    let raw = riemann_from_derivatives(&g, &d1, &d2)?;
    Ok(RiemannReport {
        presym_residual: raw.symmetry_residual(),
        presym_bianchi: raw.bianchi_residual(),
        r: raw.symmetrized(),
        g,
        convergence,
    })
}

/// Riemann tensor at `t` by finite differences of `field`.
pub fn riemann_fd<F: MetricField + ?Sized>(field: &F, t: &[f64]) -> Result<RiemannReport> {
    let spec = field.chart();
    let pts = stencil_points(t, spec.fd_step);
    let samples = pts
        .iter()
        .map(|p| field.metric(p))
        .collect::<Result<Vec<_>>>()?;
    riemann_from_samples(spec.param_dim, spec.fd_step, &samples, crate::TOL.fd_convergence)
}

/// `R(u, v, v, u) / (|u|^2 |v|^2 - <u,v>^2)` in the metric `g`.
pub fn sec_from_riemann(r: &Riemann, g: &DMatrix<f64>, u: &[f64], v: &[f64]) -> Result<f64> {
    let ip = |a: &[f64], b: &[f64]| -> f64 {
        let n = a.len();
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += a[i] * g[(i, j)] * b[j];
            }
        }
        s
    };
    let (uu, vv, uv) = (ip(u, u), ip(v, v), ip(u, v));
    let det = uu * vv - uv * uv;
    if det < crate::TOL.degenerate_gram * (uu * vv).max(1e-300) || det <= 0.0 {
        return Err(Error::DegeneratePlane { gram_det: det });
    }
    Ok(r.eval(u, v, v, u) / det)
}

/// `Ric(u, u) = g^{jk} R(u, e_j, e_k, u)` at `t`.
pub fn ricci_fd<F: MetricField + ?Sized>(field: &F, t: &[f64], u: &[f64]) -> Result<f64> {
    let rep = riemann_fd(field, t)?;
    Ok(ricci_from_report(&rep, u))
}

pub fn ricci_from_report(rep: &RiemannReport, u: &[f64]) -> f64 {
    let n = rep.r.dim();
    let ginv = rep.g.clone().try_inverse().expect("positive definite");
    let mut s = 0.0;
    for j in 0..n {
        for k in 0..n {
            let ej: Vec<f64> = (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect();
            let ek: Vec<f64> = (0..n).map(|i| if i == k { 1.0 } else { 0.0 }).collect();
            s += ginv[(j, k)] * rep.r.eval(u, &ej, &ek, u);
        }
    }
    s
}
