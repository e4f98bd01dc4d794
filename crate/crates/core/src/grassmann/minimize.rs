//! Grid-plus-refinement minimizers over plane families.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::lattice::{hemisphere_covering_radius, plane_lattice, ComplementPlanes};
use super::{frame_distance, SecFunctional, TwoPlane, GRASSMANN_DIAMETER};
use crate::error::{Error, Result};
use crate::linalg::{complete_basis, norm, orthonormal_pair, scale, sym_eigen, Vec5, DIM};
use crate::optimize::{nelder_mead, NelderMeadOptions};

/// Resolutions of the plane searches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    /// Size of the lattice on the full Grassmannian.
    pub planes: usize,
    /// Size of the lattice on the complement family of a plane.
    pub complements: usize,
    /// Number of best cells refined by Nelder-Mead.
    pub refine_starts: usize,
    /// Evaluation budget of each refinement.
    pub max_evals: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            planes: 64 * 64,
            complements: 64 * 64,
            refine_starts: 5,
            max_evals: 1500,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BiorthResult {
    /// `min 1/2 (sec(sigma) + sec(sigma'))` over `sigma'` in the complement.
    pub value: f64,
    pub sec_sigma: f64,
    pub sigma_prime: TwoPlane,
    /// Best lattice value before refinement.
    pub coarse_value: f64,
    pub coarse_index: usize,
    /// Numerical Lipschitz estimate of sec over the complement family.
    pub lipschitz: f64,
    pub covering_radius: f64,
    /// `coarse_value - value` can not exceed this if the estimate holds.
    pub gap_bound: f64,
    pub converged: bool,
}

fn ordered_starts(values: &[f64], count: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).filter(|&i| values[i].is_finite()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    idx.truncate(count);
    idx
}

fn normal_chart(n0: &[f64; 3]) -> [[f64; 3]; 2] {
    let rest = complete_basis::<3>(&[scale(n0, 1.0 / norm(n0))]);
    [rest[0], rest[1]]
}

/// Minimum over planes `sigma'` in the orthogonal complement of `sigma` of
/// the average sectional curvature.
pub fn biorthogonal_curvature<S: SecFunctional + ?Sized>(sigma: &TwoPlane, sec: &S, grid: &GridConfig) -> BiorthResult {
    let sec_sigma = sec.sec(&sigma.u, &sigma.v);
    let family = ComplementPlanes::new(&sigma.u, &sigma.v, grid.complements.max(1));
    let eval_normal = |n: &[f64; 3]| {
        let (a, b) = super::complement_plane(&family.q, n);
        sec.sec(&a, &b)
    };
    let values: Vec<f64> = family.normals.iter().map(eval_normal).collect();
    let starts = ordered_starts(&values, grid.refine_starts.max(1));
    let coarse_index = starts[0];
    let coarse_sec = values[coarse_index];

    // Lipschitz estimate from central differences at evenly spaced cells
    // and at the refinement starts.
    let h = 1e-4;
    let mut probe: Vec<usize> = (0..32).map(|i| i * family.len() / 32).collect();
    probe.extend_from_slice(&starts);
    let mut lipschitz: f64 = 0.0;
    for &k in &probe {
        let n0 = family.normals[k];
        let t = normal_chart(&n0);
        let mut g2 = 0.0;
        for dir in &t {
            let plus: [f64; 3] = core::array::from_fn(|i| n0[i] + h * dir[i]);
            let minus: [f64; 3] = core::array::from_fn(|i| n0[i] - h * dir[i]);
            let d = (eval_normal(&plus) - eval_normal(&minus)) / (2.0 * h);
            g2 += d * d;
        }
        lipschitz = lipschitz.max(libm::sqrt(g2));
    }
    lipschitz *= 1.25;
    let covering_radius = hemisphere_covering_radius(family.len());

    let mut best = (coarse_sec, family.normals[coarse_index]);
    let mut converged = true;
    let opts = NelderMeadOptions {
        initial_step: 0.5 * covering_radius,
        max_evals: grid.max_evals / 4,
        f_tol: 1e-15,
        x_tol: 1e-9,
    };
    for &k in &starts {
        let n0 = family.normals[k];
        let t = normal_chart(&n0);
        let at = |x: &[f64]| -> [f64; 3] { core::array::from_fn(|i| n0[i] + x[0] * t[0][i] + x[1] * t[1][i]) };
        let m = nelder_mead(|x| eval_normal(&at(x)), &[0.0, 0.0], &opts);
        if m.f < best.0 {
            best = (m.f, at(&m.x));
            converged = m.converged;
        }
    }
    let (u, v) = super::complement_plane(&family.q, &best.1);
    BiorthResult {
        value: 0.5 * (sec_sigma + best.0),
        sec_sigma,
        sigma_prime: TwoPlane { base: sigma.base, u, v },
        coarse_value: 0.5 * (sec_sigma + coarse_sec),
        coarse_index,
        lipschitz,
        covering_radius,
        gap_bound: 0.5 * lipschitz * covering_radius,
        converged,
    }
}

/// Frame near `(a, b)` in the graph chart `t -> span(a + Q t_a, b + Q t_b)`.
fn chart_frame(a: &Vec5, b: &Vec5, q: &[Vec5], t: &[f64]) -> Option<(Vec5, Vec5)> {
    let k = q.len();
    let mut x = *a;
    let mut y = *b;
    for (i, qi) in q.iter().enumerate() {
        for d in 0..DIM {
            x[d] += t[i] * qi[d];
            y[d] += t[k + i] * qi[d];
        }
    }
    orthonormal_pair(&x, &y, 1e-12)
}

fn complement3(a: &Vec5, b: &Vec5) -> [Vec5; 3] {
    let r = complete_basis::<DIM>(&[*a, *b]);
    [r[0], r[1], r[2]]
}

/// Hessian of sec at the plane `(u, v)` in the graph chart
/// `span(u + Q s, v + Q t)`, `Q` an orthonormal basis of the complement.
/// The chart is an isometry to first order at the origin, so the
/// eigenvalues are those of the Riemannian Hessian at a critical plane.
pub fn plane_hessian<S: SecFunctional + ?Sized>(sec: &S, u: &Vec5, v: &Vec5, step: f64) -> [[f64; 6]; 6] {
    let q = complement3(u, v);
    let f = |t: &[f64; 6]| match chart_frame(u, v, &q, t) {
        Some((x, y)) => sec.sec(&x, &y),
        None => f64::NAN,
    };
    let f0 = f(&[0.0; 6]);
    let shifted = |i: usize, si: f64, j: usize, sj: f64| {
        let mut t = [0.0; 6];
        t[i] += si * step;
        t[j] += sj * step;
        f(&t)
    };
    let mut h = [[0.0; 6]; 6];
    for i in 0..6 {
        h[i][i] = (shifted(i, 1.0, i, 0.0) - 2.0 * f0 + shifted(i, -1.0, i, 0.0)) / (step * step);
        for j in i + 1..6 {
            let d = shifted(i, 1.0, j, 1.0) - shifted(i, 1.0, j, -1.0) - shifted(i, -1.0, j, 1.0)
                + shifted(i, -1.0, j, -1.0);
            h[i][j] = d / (4.0 * step * step);
            h[j][i] = h[i][j];
        }
    }
    h
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceResult {
    pub value: f64,
    pub sec_sigma: f64,
    pub sigma_prime: TwoPlane,
    pub distance: f64,
    pub coarse_value: f64,
    pub converged: bool,
}

/// Minimum over planes at distance at least `theta` from `sigma` of the
/// average sectional curvature.
pub fn distance_curvature<S: SecFunctional + ?Sized>(
    sigma: &TwoPlane,
    theta: f64,
    sec: &S,
    grid: &GridConfig,
) -> Result<DistanceResult> {
    if theta <= 0.0 || theta.is_nan() {
        return Err(Error::NonPositiveTheta(theta));
    }
    if theta > GRASSMANN_DIAMETER {
        return Err(Error::EmptyFeasibleSet {
            theta,
            diameter: GRASSMANN_DIAMETER,
        });
    }
    let sigma_frame = (&sigma.u, &sigma.v);
    let mut candidates = plane_lattice(grid.planes.max(1));
    // the complement family is always feasible and anchors the comparison
    // with biorthogonal curvature
    let family = ComplementPlanes::new(&sigma.u, &sigma.v, grid.complements.clamp(1, 256));
    candidates.extend((0..family.len()).map(|k| family.frame(k)));
    let values: Vec<f64> = candidates
        .iter()
        .map(|(a, b)| {
            if frame_distance(sigma_frame, (a, b)) >= theta {
                sec.sec(a, b)
            } else {
                f64::INFINITY
            }
        })
        .collect();
    let starts = ordered_starts(&values, grid.refine_starts.max(1));
    let Some(&first) = starts.first() else {
        return Err(Error::EmptyFeasibleSet {
            theta,
            diameter: GRASSMANN_DIAMETER,
        });
    };
    let coarse = values[first];
    let mut best = (coarse, candidates[first]);
    let mut converged = true;
    let opts = NelderMeadOptions {
        initial_step: 0.05,
        max_evals: grid.max_evals,
        f_tol: 1e-15,
        x_tol: 1e-9,
    };
    for &k in &starts {
        let (a, b) = candidates[k];
        let q = complement3(&a, &b);
        let f = |t: &[f64]| match chart_frame(&a, &b, &q, t) {
            Some((x, y)) if frame_distance(sigma_frame, (&x, &y)) >= theta => sec.sec(&x, &y),
            _ => f64::NAN,
        };
        let m = nelder_mead(f, &[0.0; 6], &opts);
        if m.f < best.0 {
            if let Some(frame) = chart_frame(&a, &b, &q, &m.x) {
                best = (m.f, frame);
                converged = m.converged;
            }
        }
    }
    let sec_sigma = sec.sec(&sigma.u, &sigma.v);
    let (u, v) = best.1;
    Ok(DistanceResult {
        value: 0.5 * (sec_sigma + best.0),
        sec_sigma,
        sigma_prime: TwoPlane { base: sigma.base, u, v },
        distance: frame_distance(sigma_frame, (&u, &v)),
        coarse_value: 0.5 * (sec_sigma + coarse),
        converged,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaneMin {
    pub value: f64,
    pub u: Vec5,
    pub v: Vec5,
    pub coarse_value: f64,
    pub converged: bool,
}

/// Alternating minimization for a quadratic curvature operator: with `u`
/// fixed, the best `v` is the bottom eigenvector of the Jacobi form on
/// `u`'s complement; then the roles swap.
fn rayleigh_descent(op: &super::CurvatureOperator, u: &Vec5, v: &Vec5) -> (Vec5, Vec5, f64) {
    let mut u = *u;
    let mut v = *v;
    let mut val = op.sec(&u, &v);
    for _ in 0..200 {
        let m = op.jacobi_form(&u);
        let q = complete_basis::<DIM>(&[u]);
        let r: [[f64; 4]; 4] = core::array::from_fn(|i| {
            core::array::from_fn(|j| {
                let mut s = 0.0;
                for a in 0..DIM {
                    for b in 0..DIM {
                        s += q[i][a] * m[a][b] * q[j][b];
                    }
                }
                s
            })
        });
        let (vals, vecs) = sym_eigen(&r);
        let w: Vec5 = core::array::from_fn(|d| (0..4).map(|i| vecs[0][i] * q[i][d]).sum());
        let w = scale(&w, 1.0 / norm(&w));
        let improvement = val - vals[0];
        let new_v = u;
        u = w;
        v = new_v;
        val = vals[0].min(val);
        if improvement <= 1e-16 * (1.0 + val.abs()) {
            break;
        }
    }
    (u, v, op.sec(&u, &v))
}

/// Local minimum of sec near the frame `(a, b)`.
fn polish_plane<S: SecFunctional + ?Sized>(sec: &S, a: &Vec5, b: &Vec5, max_evals: usize) -> (Vec5, Vec5, f64, bool) {
    let (mut a, mut b) = (*a, *b);
    if let Some(op) = sec.operator() {
        let (x, y, _) = rayleigh_descent(op, &a, &b);
        a = x;
        b = y;
    }
    let q = complement3(&a, &b);
    let opts = NelderMeadOptions {
        initial_step: 0.02,
        max_evals,
        f_tol: 1e-16,
        x_tol: 1e-10,
    };
    let m = nelder_mead(
        |t| match chart_frame(&a, &b, &q, t) {
            Some((x, y)) => sec.sec(&x, &y),
            None => f64::NAN,
        },
        &[0.0; 6],
        &opts,
    );
    match chart_frame(&a, &b, &q, &m.x) {
        Some((x, y)) if m.f <= sec.sec(&a, &b) => (x, y, m.f, m.converged),
        _ => (a, b, sec.sec(&a, &b), m.converged),
    }
}

/// Global minimum of sec over `Gr_2(R^5)` by lattice plus local refinement.
pub fn min_plane<S: SecFunctional + ?Sized>(sec: &S, grid: &GridConfig) -> PlaneMin {
    let lattice = plane_lattice(grid.planes.max(1));
    let values: Vec<f64> = lattice.iter().map(|(a, b)| sec.sec(a, b)).collect();
    let starts = ordered_starts(&values, grid.refine_starts.max(1));
    let coarse_value = values[starts[0]];
    let mut best = PlaneMin {
        value: coarse_value,
        u: lattice[starts[0]].0,
        v: lattice[starts[0]].1,
        coarse_value,
        converged: false,
    };
    for &k in &starts {
        let (u, v, f, conv) = polish_plane(sec, &lattice[k].0, &lattice[k].1, grid.max_evals);
        if f < best.value {
            best.value = f;
            best.u = u;
            best.v = v;
            best.converged = conv;
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairResult {
    /// `min 1/2 (sec(sigma) + sec(sigma'))` over pairs at distance `>= theta`.
    pub value: f64,
    pub sigma: (Vec5, Vec5),
    pub sigma_prime: (Vec5, Vec5),
    pub distance: f64,
    pub coarse_value: f64,
    pub converged: bool,
}

/// Minimum of the average sectional curvature over pairs of planes at
/// plane distance at least `theta` (the fiber of `K_theta` over a point).
pub fn min_pair_k_theta<S: SecFunctional + ?Sized>(sec: &S, theta: f64, grid: &GridConfig) -> Result<PairResult> {
    if theta <= 0.0 || theta.is_nan() {
        return Err(Error::NonPositiveTheta(theta));
    }
    if theta > GRASSMANN_DIAMETER {
        return Err(Error::EmptyFeasibleSet {
            theta,
            diameter: GRASSMANN_DIAMETER,
        });
    }
    let mut frames = plane_lattice(grid.planes.max(2));
    let mut values: Vec<f64> = frames.iter().map(|(a, b)| sec.sec(a, b)).collect();
    // local minima enrich the sample where the minimum pair lives
    let starts = ordered_starts(&values, 16);
    for &k in &starts {
        let (u, v, f, _) = polish_plane(sec, &frames[k].0, &frames[k].1, grid.max_evals / 4);
        frames.push((u, v));
        values.push(f);
    }
    let order = ordered_starts(&values, values.len());
    let mut best_pairs: Vec<(f64, usize, usize)> = Vec::new();
    let keep = grid.refine_starts.max(1);
    'outer: for (oi, &i) in order.iter().enumerate() {
        let worst_kept = if best_pairs.len() == keep {
            best_pairs[keep - 1].0
        } else {
            f64::INFINITY
        };
        if values[i] + values[order[0]] >= worst_kept {
            break;
        }
        for &j in &order[oi + 1..] {
            let s = values[i] + values[j];
            let worst_kept = if best_pairs.len() == keep {
                best_pairs[keep - 1].0
            } else {
                f64::INFINITY
            };
            if s >= worst_kept {
                continue 'outer;
            }
            let fi = (&frames[i].0, &frames[i].1);
            let fj = (&frames[j].0, &frames[j].1);
            if frame_distance(fi, fj) >= theta {
                best_pairs.push((s, i, j));
                best_pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
                best_pairs.truncate(keep);
                continue 'outer;
            }
        }
    }
    let Some(&(coarse_sum, ci, cj)) = best_pairs.first() else {
        return Err(Error::EmptyFeasibleSet {
            theta,
            diameter: GRASSMANN_DIAMETER,
        });
    };
    let mut best = (coarse_sum, frames[ci], frames[cj]);
    let mut converged = true;
    let opts = NelderMeadOptions {
        initial_step: 0.02,
        max_evals: grid.max_evals * 2,
        f_tol: 1e-16,
        x_tol: 1e-10,
    };
    for &(_, i, j) in &best_pairs {
        let (a, b) = frames[i];
        let (c, d) = frames[j];
        let qa = complement3(&a, &b);
        let qc = complement3(&c, &d);
        let pair_at = |t: &[f64]| -> Option<((Vec5, Vec5), (Vec5, Vec5))> {
            Some((chart_frame(&a, &b, &qa, &t[..6])?, chart_frame(&c, &d, &qc, &t[6..])?))
        };
        let f = |t: &[f64]| match pair_at(t) {
            Some((x, y)) if frame_distance((&x.0, &x.1), (&y.0, &y.1)) >= theta => {
                sec.sec(&x.0, &x.1) + sec.sec(&y.0, &y.1)
            }
            _ => f64::NAN,
        };
        let m = nelder_mead(f, &[0.0; 12], &opts);
        if m.f < best.0 {
            if let Some((x, y)) = pair_at(&m.x) {
                best = (m.f, x, y);
                converged = m.converged;
            }
        }
    }
    let (s1, s2) = (best.1, best.2);
    Ok(PairResult {
        value: 0.5 * best.0,
        sigma: s1,
        sigma_prime: s2,
        distance: frame_distance((&s1.0, &s1.1), (&s2.0, &s2.1)),
        coarse_value: 0.5 * coarse_sum,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::{CurvatureOperator, MetricTag, PlaneBase, PAIRS};

    const B: PlaneBase = PlaneBase::origin(MetricTag::Euclidean);

    fn small_grid() -> GridConfig {
        GridConfig {
            planes: 512,
            complements: 256,
            refine_starts: 3,
            max_evals: 1500,
        }
    }

    /// A curvature operator of "diagonal" type with distinct values on
    /// coordinate planes, which has non-trivial minimizers.
    fn diag_operator() -> CurvatureOperator {
        let mut op = CurvatureOperator::constant(0.0);
        for (a, &(i, j)) in PAIRS.iter().enumerate() {
            op.k[a][a] = 1.0 + (i as f64) * 0.3 - (j as f64) * 0.1;
        }
        op
    }

    #[test]
    fn constant_curvature_biorthogonal_is_one() {
        let k = CurvatureOperator::constant(1.0);
        let sigma = TwoPlane::from_span(B, &[1.0, 2.0, 0.0, 0.0, 1.0], &[0.0, 1.0, -1.0, 3.0, 0.0]).unwrap();
        let r = biorthogonal_curvature(&sigma, &k, &small_grid());
        assert!((r.value - 1.0).abs() < 1e-12);
        let d = distance_curvature(&sigma, 0.5, &k, &small_grid()).unwrap();
        assert!((d.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn biorthogonal_matches_exact_eigenvalue() {
        let op = diag_operator();
        let sigma = TwoPlane::from_span(B, &[1.0, 0.2, 0.0, 0.3, 0.0], &[0.0, 1.0, 0.5, 0.0, -0.2]).unwrap();
        let r = biorthogonal_curvature(&sigma, &op, &small_grid());
        let fam = ComplementPlanes::new(&sigma.u, &sigma.v, 1);
        let (exact, _) = op.min_in_three_space(&fam.q);
        assert!((r.value - 0.5 * (r.sec_sigma + exact)).abs() < 1e-9, "{} vs {}", r.value, exact);
        assert!(r.value <= r.coarse_value);
        assert!(r.coarse_value <= r.value + r.gap_bound);
    }

    #[test]
    fn min_plane_finds_smallest_coordinate_plane() {
        let op = diag_operator();
        let m = min_plane(&op, &small_grid());
        // smallest diagonal entry: (0, 4) -> 1 - 0.4 = 0.6
        assert!((m.value - 0.6).abs() < 1e-10, "{m:?}");
    }

    #[test]
    fn distance_curvature_errors() {
        let k = CurvatureOperator::constant(1.0);
        let sigma = TwoPlane::axes(B, 0, 1);
        assert!(matches!(
            distance_curvature(&sigma, 3.0, &k, &small_grid()),
            Err(Error::EmptyFeasibleSet { .. })
        ));
        assert!(matches!(
            distance_curvature(&sigma, 0.0, &k, &small_grid()),
            Err(Error::NonPositiveTheta(_))
        ));
    }

    #[test]
    fn pair_minimum_of_diagonal_operator() {
        let op = diag_operator();
        let r = min_pair_k_theta(&op, 0.1, &small_grid()).unwrap();
        // the (0,4) plane tilted by +-0.05 towards e_3
        let expected = 0.6 + 0.1 * libm::sin(0.05) * libm::sin(0.05);
        assert!(r.value >= expected - 1e-12 && r.value - expected < 5e-6, "{r:?}");
        assert!(r.distance >= 0.1);
    }
}
