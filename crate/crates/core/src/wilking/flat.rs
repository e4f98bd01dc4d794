//! Pointwise curvature of `g_W` and the search for its flat locus.

use alloc::vec::Vec;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use alloc::format;
use alloc::string::String;

use super::{act_unchecked, S2xS3Point, WilkingChart};
use crate::algebra::quaternion::{norm3, rotation_taking_i_to};
use crate::algebra::Quat;
use crate::curvature::{riemann_fd, RiemannReport};
use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::grassmann::{
    distance_curvature, frame_distance, min_plane, plane_hessian, CurvatureOperator, GridConfig, MetricTag, PlaneBase,
    SecFunctional, TwoPlane,
};
use crate::linalg::{sym_eigen, Vec5};

/// Curvature of `g_W` at one point, from the finite-difference engine on a
/// chart centered there. Planes are given by orthonormal frames in the
/// `g_W`-orthonormal basis `frame` (columns, chart coordinates).
#[derive(Debug, Clone)]
pub struct PointCurvature {
    pub point: S2xS3Point,
    pub chart: WilkingChart,
    pub report: RiemannReport,
    pub op: CurvatureOperator,
    pub frame: DMatrix<f64>,
}

impl PointCurvature {
    pub fn at(x: &S2xS3Point) -> Result<Self> {
        Self::from_chart(WilkingChart::centered_at(x))
    }

    pub fn from_chart(chart: WilkingChart) -> Result<Self> {
        let report = riemann_fd(&chart, &[0.0; 5])?;
        Ok(Self::from_report(chart, report))
    }

    pub fn from_report(chart: WilkingChart, report: RiemannReport) -> Self {
        let (op, frame) = report.operator();
        PointCurvature {
            point: chart.center(),
            chart,
            report,
            op,
            frame,
        }
    }

    /// Chart coordinates of a vector given in the orthonormal basis.
    pub fn to_chart(&self, u: &Vec5) -> [f64; 5] {
        core::array::from_fn(|i| (0..5).map(|j| self.frame[(i, j)] * u[j]).sum())
    }

    /// Orthonormal-basis coordinates of a chart vector.
    pub fn chart_to_frame(&self, xi: &[f64; 5]) -> Vec5 {
        // frame^{-1} = frame^T g
        let g = &self.report.g;
        core::array::from_fn(|a| {
            (0..5)
                .map(|i| self.frame[(i, a)] * (0..5).map(|j| g[(i, j)] * xi[j]).sum::<f64>())
                .sum()
        })
    }
}

impl SecFunctional for PointCurvature {
    fn sec(&self, u: &Vec5, v: &Vec5) -> f64 {
        self.op.sec(u, v)
    }

    fn operator(&self) -> Option<&CurvatureOperator> {
        Some(&self.op)
    }
}

/// The slice `p = cos a + sin a i`, `v = -sin a cos b + cos a cos b i + sin b j`
/// meets every orbit of simultaneous conjugation.
pub fn slice_point(alpha: f64, beta: f64) -> S2xS3Point {
    let (sa, ca) = (libm::sin(alpha), libm::cos(alpha));
    let (sb, cb) = (libm::sin(beta), libm::cos(beta));
    S2xS3Point::normalized(Quat::new(ca, sa, 0.0, 0.0), Quat::new(-sa * cb, ca * cb, sb, 0.0))
}


/// `sec_{g_W}` of a plane at `x`, its frame given in the orthonormal basis
/// of [`PointCurvature::at`].
pub fn sec_gw(x: &S2xS3Point, sigma: &TwoPlane) -> Result<f64> {
    if sigma.base.point != x.to_array() || sigma.base.metric != MetricTag::Wilking {
        return Err(Error::BasePointMismatch);
    }
    Ok(PointCurvature::at(x)?.sec(&sigma.u, &sigma.v))
}

/// Parameters of the flat-locus search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlatScanConfig {
    /// Points per side of the `(alpha, beta)` slice grid on `[0, pi]^2`.
    /// Odd values put grid lines on both flat hypersurfaces.
    pub slice_resolution: usize,
    pub grid: GridConfig,
    /// A point is flat when its minimal sectional curvature is below this.
    pub flat_tol: f64,
    /// Hessian eigenvalues of `sec` on the Grassmannian below this count as
    /// null directions of the flat set.
    pub hessian_tol: f64,
    /// A second flat plane is searched at least this far from the first.
    pub family_distance: f64,
    /// Clusters are formed by single linkage in the orbit invariants
    /// `(Re p, Re v)` with this radius.
    pub cluster_radius: f64,
    /// Points per sphere cloud.
    pub cloud_size: usize,
}

impl Default for FlatScanConfig {
    fn default() -> Self {
        FlatScanConfig {
            slice_resolution: 17,
            grid: GridConfig {
                planes: 1024,
                complements: 1024,
                refine_starts: 5,
                max_evals: 1500,
            },
            flat_tol: crate::TOL.flat,
            hessian_tol: 1e-4,
            family_distance: 1.0,
            cluster_radius: 0.25,
            cloud_size: 24,
        }
    }
}

/// Flatness data at one point. Vectors are chart coordinates of
/// [`WilkingChart::centered_at`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointAnalysis {
    pub point: S2xS3Point,
    pub min_sec: f64,
    pub flat_plane: [[f64; 5]; 2],
    /// Ascending Hessian spectrum of `sec` on `Gr_2` at the minimizing plane.
    pub hessian: [f64; 6],
    /// Number of Hessian eigenvalues below `hessian_tol`.
    pub family_dim: usize,
    /// Smallest `sec` at distance `>= family_distance` from the flat plane
    /// (only searched at flat points).
    pub second_sec: Option<f64>,
    pub second_plane: Option<[[f64; 5]; 2]>,
    pub second_distance: Option<f64>,
    /// Finite-difference convergence gap of the curvature tensor.
    pub fd_convergence: f64,
    pub flat: bool,
    /// Carries a one-parameter family of flat planes.
    pub s1_flag: bool,
}

pub fn analyze_point(x: &S2xS3Point, cfg: &FlatScanConfig) -> Result<PointAnalysis> {
    let pc = PointCurvature::at(x)?;
    Ok(analyze_curvature(&pc, cfg))
}

pub fn analyze_curvature(pc: &PointCurvature, cfg: &FlatScanConfig) -> PointAnalysis {
    let m = min_plane(pc, &cfg.grid);
    let h = plane_hessian(pc, &m.u, &m.v, 1e-3);
    let (hessian, _) = sym_eigen(&h);
    let family_dim = hessian.iter().filter(|&&e| e <= cfg.hessian_tol).count();
    let flat = m.value <= cfg.flat_tol;
    let (mut second_sec, mut second_plane, mut second_distance) = (None, None, None);
    if flat {
        let base = PlaneBase::new(pc.point.to_array(), MetricTag::Wilking);
        if let Ok(sigma) = TwoPlane::new(base, m.u, m.v) {
            if let Ok(r) = distance_curvature(&sigma, cfg.family_distance, pc, &cfg.grid) {
                let sp = r.sigma_prime;
                second_sec = Some(pc.sec(&sp.u, &sp.v));
                second_plane = Some([pc.to_chart(&sp.u), pc.to_chart(&sp.v)]);
                second_distance = Some(frame_distance((&m.u, &m.v), (&sp.u, &sp.v)));
            }
        }
    }
    let s1_flag = flat && family_dim >= 1 && second_sec.is_some_and(|s| s <= cfg.flat_tol);
    PointAnalysis {
        point: pc.point,
        min_sec: m.value,
        flat_plane: [pc.to_chart(&m.u), pc.to_chart(&m.v)],
        hessian,
        family_dim,
        second_sec,
        second_plane,
        second_distance,
        fd_convergence: pc.report.convergence,
        flat,
        s1_flag,
    }
}

/// Single-linkage clusters of `points` (by index) in the plane, sorted by
/// smallest member.
pub fn cluster_points(points: &[[f64; 2]], radius: f64) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn root(label: &mut [usize], mut i: usize) -> usize {
        while label[i] != i {
            label[i] = label[label[i]];
            i = label[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            let d = libm::hypot(points[i][0] - points[j][0], points[i][1] - points[j][1]);
            if d <= radius {
                let (a, b) = (root(&mut label, i), root(&mut label, j));
                if a != b {
                    label[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut roots: Vec<usize> = Vec::new();
    for i in 0..n {
        let r = root(&mut label, i);
        match roots.iter().position(|&x| x == r) {
            Some(k) => clusters[k].push(i),
            None => {
                roots.push(r);
                clusters.push(alloc::vec![i]);
            }
        }
    }
    clusters
}

/// One point of a sphere cloud with its tangent and normal frames, all
/// `g_W`-orthonormal chart vectors of [`WilkingChart::centered_at`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpherePoint {
    pub analysis: PointAnalysis,
    pub tangent: [[f64; 5]; 2],
    pub normal: [[f64; 5]; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphereCloud {
    /// Orbit invariants `(Re p, Re v)` of the sphere.
    pub invariants: [f64; 2],
    /// Imaginary unit whose conjugation orbit is the sphere.
    pub axis: [f64; 3],
    pub points: Vec<SpherePoint>,
}

impl SphereCloud {
    pub fn seed(&self) -> &S2xS3Point {
        &self.points[0].analysis.point
    }

    /// Index and chordal distance of the cloud point closest to `x`.
    pub fn nearest(&self, x: &S2xS3Point) -> (usize, f64) {
        let d: Vec<f64> = self.points.iter().map(|sp| sp.analysis.point.chordal_distance(x)).collect();
        crate::exec::argmin(d).expect("clouds are non-empty")
    }
}

/// Points on the unit sphere by the Fibonacci spiral.
fn fibonacci_sphere(n: usize) -> Vec<[f64; 3]> {
    let golden = core::f64::consts::PI * (3.0 - libm::sqrt(5.0));
    (0..n)
        .map(|k| {
            let z = 1.0 - (2.0 * k as f64 + 1.0) / n as f64;
            let r = libm::sqrt(1.0 - z * z);
            let phi = golden * k as f64;
            [z, r * libm::cos(phi), r * libm::sin(phi)]
        })
        .collect()
}

/// The imaginary unit spanning the orbit of `x` when `x` lies on one of
/// the orbits `{p = +-1}` or `{v = +-1}`.
fn orbit_axis(x: &S2xS3Point) -> [f64; 3] {
    let (ip, iv) = (x.p.imag(), x.v.imag());
    let w = if norm3(ip) > norm3(iv) { ip } else { iv };
    let n = norm3(w);
    [w[0] / n, w[1] / n, w[2] / n]
}

/// Conjugates of `x` whose axes follow a Fibonacci spiral, starting with
/// `x` itself.
pub fn sphere_cloud(x: &S2xS3Point, size: usize) -> Vec<S2xS3Point> {
    let axis = orbit_axis(x);
    let back = rotation_taking_i_to(axis).conj();
    let mut out = alloc::vec![*x];
    for d in fibonacci_sphere(size.saturating_sub(1)) {
        let k = rotation_taking_i_to(d) * back;
        let y = act_unchecked(&[k, k], x);
        out.push(S2xS3Point::normalized(y.p, y.v));
    }
    out
}

fn orthonormalize_in(g: &DMatrix<f64>, vecs: &[[f64; 5]]) -> Vec<[f64; 5]> {
    let ip = |a: &[f64; 5], b: &[f64; 5]| -> f64 {
        (0..5).map(|i| (0..5).map(|j| a[i] * g[(i, j)] * b[j]).sum::<f64>()).sum()
    };
    let mut out: Vec<[f64; 5]> = Vec::new();
    for v in vecs {
        let mut w = *v;
        for _ in 0..2 {
            for e in &out {
                let c = ip(&w, e);
                for k in 0..5 {
                    w[k] -= c * e[k];
                }
            }
        }
        let n = libm::sqrt(ip(&w, &w));
        if n > 1e-8 {
            out.push(core::array::from_fn(|k| w[k] / n));
        }
    }
    out
}

/// Tangent and normal frames of the conjugation orbit through the center
/// of `chart`.
pub fn orbit_frames(chart: &WilkingChart, g: &DMatrix<f64>) -> Result<([[f64; 5]; 2], [[f64; 5]; 3])> {
    let fields = [
        chart.conjugation_field([1.0, 0.0, 0.0])?,
        chart.conjugation_field([0.0, 1.0, 0.0])?,
        chart.conjugation_field([0.0, 0.0, 1.0])?,
    ];
    let tangent = orthonormalize_in(g, &fields);
    if tangent.len() != 2 {
        return Err(Error::RankDeficient {
            rank: tangent.len(),
            expected: 2,
        });
    }
    let mut all = tangent.clone();
    for k in 0..5 {
        all.push(crate::linalg::basis(k));
    }
    let full = orthonormalize_in(g, &all);
    Ok(([full[0], full[1]], [full[2], full[3], full[4]]))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlatLocusAtlas {
    pub config: FlatScanConfig,
    /// Slice grid results in row-major `(alpha, beta)` order.
    pub slice: Vec<PointAnalysis>,
    /// Slice indices whose curvature evaluation failed, with the reason.
    pub failures: Vec<(usize, String)>,
    pub flat_count: usize,
    pub flagged_count: usize,
    pub spheres: Vec<SphereCloud>,
    /// Four clusters of flagged points, and every cloud point re-verifies.
    pub verified: bool,
}

impl FlatLocusAtlas {
    /// Re-evaluates every cloud point and checks the stored flags. The
    /// recomputed minimum may move by finite-difference noise, so it is
    /// only compared up to the flatness tolerance.
    pub fn reverify(&self) -> Result<bool> {
        for cloud in &self.spheres {
            for sp in &cloud.points {
                let a = analyze_point(&sp.analysis.point, &self.config)?;
                if !(a.flat && a.s1_flag) || (a.min_sec - sp.analysis.min_sec).abs() > self.config.flat_tol {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Slice grid point `(i, j)`.
pub fn slice_grid_point(cfg: &FlatScanConfig, index: usize) -> (f64, f64) {
    let n = cfg.slice_resolution;
    let step = core::f64::consts::PI / (n - 1) as f64;
    ((index / n) as f64 * step, (index % n) as f64 * step)
}

/// Scans the slice, clusters the points carrying a circle of flat planes
/// and spreads each cluster over its sphere with the conjugation isometries.
pub fn find_flat_locus<E: Executor>(cfg: &FlatScanConfig, exec: &E) -> Result<FlatLocusAtlas> {
    if cfg.slice_resolution < 2 || cfg.cloud_size < 1 {
        return Err(Error::InvalidData(format!(
            "slice resolution {} and cloud size {} are too small",
            cfg.slice_resolution, cfg.cloud_size
        )));
    }
    let n = cfg.slice_resolution * cfg.slice_resolution;
    let results = exec.map(n, |k| {
        let (a, b) = slice_grid_point(cfg, k);
        analyze_point(&slice_point(a, b), cfg)
    });
    let mut slice = Vec::new();
    let mut failures = Vec::new();
    for (k, r) in results.into_iter().enumerate() {
        match r {
            Ok(a) => {
                slice.push(a);
            }
            Err(e) => failures.push((k, format!("{e}"))),
        }
    }
    let flat_count = slice.iter().filter(|a| a.flat).count();
    let flagged: Vec<usize> = (0..slice.len()).filter(|&i| slice[i].s1_flag).collect();
    let inv: Vec<[f64; 2]> = flagged.iter().map(|&i| slice[i].point.orbit_invariants()).collect();
    let clusters = cluster_points(&inv, cfg.cluster_radius);
    let seeds: Vec<S2xS3Point> = clusters.iter().map(|c| slice[flagged[c[0]]].point).collect();
    let clouds: Vec<Vec<S2xS3Point>> = seeds.iter().map(|s| sphere_cloud(s, cfg.cloud_size)).collect();
    let flat_points: Vec<(usize, S2xS3Point)> = clouds
        .iter()
        .enumerate()
        .flat_map(|(c, pts)| pts.iter().map(move |p| (c, *p)))
        .collect();
    let evaluated = exec.map(flat_points.len(), |k| -> Result<SpherePoint> {
        let chart = WilkingChart::centered_at(&flat_points[k].1);
        let pc = PointCurvature::from_chart(chart)?;
        let analysis = analyze_curvature(&pc, cfg);
        let (tangent, normal) = orbit_frames(&pc.chart, &pc.report.g)?;
        Ok(SpherePoint {
            analysis,
            tangent,
            normal,
        })
    });
    let mut spheres: Vec<SphereCloud> = seeds
        .iter()
        .map(|s| SphereCloud {
            invariants: s.orbit_invariants(),
            axis: orbit_axis(s),
            points: Vec::new(),
        })
        .collect();
    let mut all_ok = true;
    for ((c, _), r) in flat_points.iter().zip(evaluated) {
        let sp = r?;
        all_ok &= sp.analysis.flat && sp.analysis.s1_flag;
        spheres[*c].points.push(sp);
    }
    let verified = spheres.len() == 4 && all_ok;
    Ok(FlatLocusAtlas {
        config: *cfg,
        flagged_count: flagged.len(),
        slice,
        failures,
        flat_count,
        spheres,
        verified,
    })
}
