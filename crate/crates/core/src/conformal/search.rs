//! Sampled searches over `K_theta`: the deformation scale `s_*`, a plane of
//! negative curvature, and the Ricci floor.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::deform::{min_ricci, DeformedPoint};
use super::potential::PotentialField;
use crate::error::{Error, Result};
use crate::exec::{argmin, Executor};
use crate::grassmann::{min_pair_k_theta, min_plane, GridConfig, SecFunctional};
use crate::linalg::Vec5;
use crate::wilking::{exp_point, slice_point, S2xS3Point, WilkingChart};

/// Points sampled from `S^2 x S^3`. Every orbit of simultaneous conjugation
/// is an orbit of isometries of `g_W` and of `phi`, so a slice of the orbit
/// space stands for the whole manifold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleConfig {
    /// Side of the global `(alpha, beta)` slice grid.
    pub slice_resolution: usize,
    /// Number of distances sampled along each normal geodesic of a tube.
    pub tube_radii: usize,
    /// Plane searches at each point.
    pub grid: GridConfig,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            slice_resolution: 9,
            tube_radii: 6,
            grid: GridConfig {
                planes: 1024,
                complements: 256,
                refine_starts: 5,
                max_evals: 1500,
            },
        }
    }
}

impl SampleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.slice_resolution < 2 || self.tube_radii < 1 || self.grid.planes < 2 {
            return Err(Error::InvalidData(format!(
                "sample resolutions too small: slice {}, tube radii {}, planes {}",
                self.slice_resolution, self.tube_radii, self.grid.planes
            )));
        }
        Ok(())
    }
}

/// Where a sample point came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleOrigin {
    Slice { alpha: f64, beta: f64 },
    /// `exp_seed(t N)` for the `normal`-th normal vector of tube `tube`,
    /// with `sign` its orientation.
    Tube { tube: usize, normal: usize, sign: i8, t: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplePoint {
    pub point: S2xS3Point,
    pub origin: SampleOrigin,
}

/// The slice grid plus points on the normal geodesics out of every tube's
/// seed, at distances `1.1 r1 k / n`, `k = 1..n`.
pub fn k_theta_points(field: &PotentialField, cfg: &SampleConfig) -> Result<Vec<SamplePoint>> {
    cfg.validate()?;
    let n = cfg.slice_resolution;
    let step = core::f64::consts::PI / (n - 1) as f64;
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let (alpha, beta) = (i as f64 * step, j as f64 * step);
            out.push(SamplePoint {
                point: slice_point(alpha, beta),
                origin: SampleOrigin::Slice { alpha, beta },
            });
        }
    }
    let m = cfg.tube_radii;
    for (ti, tube) in field.tubes.iter().enumerate() {
        let chart = WilkingChart::centered_at(&tube.seed);
        for (a, nv) in tube.normal.iter().enumerate() {
            for sign in [1i8, -1] {
                for k in 1..=m {
                    let t = 1.1 * field.r1 * k as f64 / m as f64;
                    let xi: [f64; 5] = core::array::from_fn(|c| sign as f64 * nv[c]);
                    out.push(SamplePoint {
                        point: exp_point(&chart, &xi, t)?,
                        origin: SampleOrigin::Tube {
                            tube: ti,
                            normal: a,
                            sign,
                            t,
                        },
                    });
                }
            }
        }
    }
    Ok(out)
}

/// A point of `K_theta` attaining a sampled minimum of `f`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KThetaWitness {
    pub sample: usize,
    pub point: S2xS3Point,
    pub origin: SampleOrigin,
    pub value: f64,
    pub sigma: (Vec5, Vec5),
    pub sigma_prime: (Vec5, Vec5),
    pub distance: f64,
}

/// Curvature data of every sample point, reusable for any `s`.
#[derive(Debug, Clone)]
pub struct SampledField {
    pub samples: Vec<SamplePoint>,
    pub points: Vec<DeformedPoint>,
    pub grid: GridConfig,
}

impl SampledField {
    pub fn new<E: Executor>(field: &PotentialField, cfg: &SampleConfig, exec: &E) -> Result<Self> {
        let samples = k_theta_points(field, cfg)?;
        let points = exec
            .map(samples.len(), |k| DeformedPoint::new(&samples[k].point, field))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        Ok(SampledField {
            samples,
            points,
            grid: cfg.grid,
        })
    }

    /// Indices of the samples where `phi` is not identically zero nearby.
    pub fn deformed(&self) -> Vec<usize> {
        (0..self.points.len()).filter(|&k| !self.points[k].undeformed()).collect()
    }

    /// Minimum of `f(s, .)` over the pairs in `K_theta` at sample `k`.
    pub fn f_min(&self, k: usize, s: f64, theta: f64) -> Result<KThetaWitness> {
        let pc = self.points[k].curvature(s)?;
        let r = min_pair_k_theta(&pc, theta, &self.grid)?;
        Ok(KThetaWitness {
            sample: k,
            point: self.samples[k].point,
            origin: self.samples[k].origin,
            value: r.value,
            sigma: r.sigma,
            sigma_prime: r.sigma_prime,
            distance: r.distance,
        })
    }

    /// `f_min` over the samples `idx`, stopping after the first block of
    /// `block` samples that contains a value `<= 0` or a sample whose
    /// curvature the finite-difference oracle cannot resolve. Blocks are
    /// fixed in advance, so the result does not depend on the executor.
    pub fn scan<E: Executor>(&self, idx: &[usize], s: f64, theta: f64, block: usize, exec: &E) -> Result<ScanOutcome> {
        let mut out = ScanOutcome {
            min: None,
            oracle_failure: None,
            evaluated: 0,
        };
        for chunk in idx.chunks(block.max(1)) {
            let res = exec.map(chunk.len(), |c| self.f_min(chunk[c], s, theta));
            for (c, r) in res.into_iter().enumerate() {
                match r {
                    Ok(w) => {
                        out.evaluated += 1;
                        if out.min.is_none_or(|b| w.value < b.value) {
                            out.min = Some(w);
                        }
                    }
                    Err(Error::OracleFailure { .. }) => {
                        if out.oracle_failure.is_none() {
                            out.oracle_failure = Some(chunk[c]);
                        }
                    }
                    Err(e) => return Err(e),
                }
            }
            if !out.passed() {
                break;
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanOutcome {
    pub min: Option<KThetaWitness>,
    /// First sample whose curvature failed the finite-difference check.
    pub oracle_failure: Option<usize>,
    pub evaluated: usize,
}

impl ScanOutcome {
    pub fn passed(&self) -> bool {
        self.oracle_failure.is_none() && self.min.is_some_and(|m| m.value > 0.0)
    }
}

/// One value of `s` tried by [`find_s_star`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct STrial {
    pub s: f64,
    pub min: Option<f64>,
    pub oracle_failure: Option<usize>,
    pub evaluated: usize,
    pub passed: bool,
}

/// Result of [`find_s_star`]. `s_star` is `None` when no tried `s` gave a
/// positive sampled minimum; `min` is then the lowest witness at the
/// smallest `s` tried.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SStarCertificate {
    pub theta: f64,
    pub s_star: Option<f64>,
    pub s_max: f64,
    /// Sampled minimum of `f(s_star, .)` over `K_theta` and where it is.
    pub min: Option<KThetaWitness>,
    /// Sampled minimum of `f(0, .)`.
    pub min_at_zero: KThetaWitness,
    /// Sampled minimum over the samples where `phi` vanishes, which no `s`
    /// changes.
    pub undeformed_min: Option<KThetaWitness>,
    pub trials: Vec<STrial>,
    pub samples: usize,
    pub deformed_samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SStarOptions {
    /// Smallest `s` tried before giving up.
    pub s_floor: f64,
    /// Bisection steps between the last failing and the first passing `s`.
    pub refine_steps: usize,
    /// Samples per block of the fail-fast scan.
    pub block: usize,
}

impl Default for SStarOptions {
    fn default() -> Self {
        SStarOptions {
            s_floor: 1e-12,
            refine_steps: 4,
            block: 16,
        }
    }
}

fn lower(a: Option<KThetaWitness>, b: Option<KThetaWitness>) -> Option<KThetaWitness> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if y.value < x.value { y } else { x }),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Halves `s` from `s_max` until the sampled minimum of `f(s, .)` over
/// `K_theta` is positive, then bisects towards the last failing value.
/// Undeformed samples have `f(s, .) = f(0, .)` and are scanned once; if
/// one of them is not positive the search stops there. The others are
/// rescanned at every `s`, worst sample first.
pub fn find_s_star<E: Executor>(
    sampled: &SampledField,
    s_max: f64,
    theta: f64,
    opts: &SStarOptions,
    exec: &E,
) -> Result<SStarCertificate> {
    if !(theta > 0.0) {
        return Err(Error::NonPositiveTheta(theta));
    }
    let all: Vec<usize> = (0..sampled.points.len()).collect();
    let at_zero = exec
        .map(all.len(), |k| sampled.f_min(k, 0.0, theta))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let lowest = |ks: &mut dyn Iterator<Item = usize>| -> Option<KThetaWitness> {
        ks.map(|k| Some(at_zero[k])).fold(None, lower)
    };
    let zero_min = lowest(&mut all.iter().copied()).ok_or_else(|| Error::InvalidData(String::from("empty sample")))?;
    let deformed = sampled.deformed();
    let fixed_min = lowest(&mut all.iter().copied().filter(|&k| sampled.points[k].undeformed()));
    let fixed_ok = fixed_min.is_none_or(|m| m.value > 0.0);
    if !fixed_ok {
        return Ok(SStarCertificate {
            theta,
            s_star: None,
            s_max,
            min: fixed_min,
            min_at_zero: zero_min,
            undeformed_min: fixed_min,
            trials: Vec::new(),
            samples: all.len(),
            deformed_samples: deformed.len(),
        });
    }
    let mut order = deformed.clone();
    let mut trials = Vec::new();
    let mut eval = |s: f64, order: &mut Vec<usize>| -> Result<(bool, Option<KThetaWitness>)> {
        let out = sampled.scan(order, s, theta, opts.block, exec)?;
        // the sample that failed goes first next time
        let worst = out.oracle_failure.or(out.min.filter(|m| m.value <= 0.0).map(|m| m.sample));
        if let Some(pos) = worst.and_then(|w| order.iter().position(|&k| k == w)) {
            let k = order.remove(pos);
            order.insert(0, k);
        }
        let min = lower(out.min, fixed_min);
        let passed = fixed_ok && (order.is_empty() || out.passed());
        trials.push(STrial {
            s,
            min: min.map(|m| m.value),
            oracle_failure: out.oracle_failure,
            evaluated: out.evaluated,
            passed,
        });
        Ok((passed, min))
    };
    let mut s = s_max;
    let mut found = None;
    let mut last = None;
    while s >= opts.s_floor {
        let (passed, m) = eval(s, &mut order)?;
        last = m;
        if passed {
            found = Some((s, m));
            break;
        }
        s *= 0.5;
    }
    let Some((mut lo, mut lo_min)) = found else {
        return Ok(SStarCertificate {
            theta,
            s_star: None,
            s_max,
            min: last,
            min_at_zero: zero_min,
            undeformed_min: fixed_min,
            trials,
            samples: all.len(),
            deformed_samples: deformed.len(),
        });
    };
    if lo < s_max {
        let mut hi = 2.0 * lo;
        for _ in 0..opts.refine_steps {
            let mid = 0.5 * (lo + hi);
            let (passed, m) = eval(mid, &mut order)?;
            if passed {
                lo = mid;
                lo_min = m;
            } else {
                hi = mid;
            }
        }
    }
    Ok(SStarCertificate {
        theta,
        s_star: Some(lo),
        s_max,
        min: lo_min,
        min_at_zero: zero_min,
        undeformed_min: fixed_min,
        trials,
        samples: all.len(),
        deformed_samples: deformed.len(),
    })
}

/// Sampled minimum of `f(s, .)` over `K_theta` with every sample evaluated.
pub fn k_theta_minimum<E: Executor>(sampled: &SampledField, s: f64, theta: f64, exec: &E) -> Result<ScanOutcome> {
    let all: Vec<usize> = (0..sampled.points.len()).collect();
    sampled.scan(&all, s, theta, usize::MAX, exec)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NegativePlane {
    pub s: f64,
    pub point: S2xS3Point,
    pub origin: SampleOrigin,
    /// `g_W` distance to the nearest flat orbit.
    pub distance: f64,
    /// Orthonormal frame in the `g_s`-orthonormal basis at the point.
    pub plane: (Vec5, Vec5),
    pub sec: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NegativeSearchConfig {
    /// Points per half-line of the flat hypersurfaces leaving a sphere.
    pub points_per_line: usize,
    pub grid: GridConfig,
}

impl Default for NegativeSearchConfig {
    fn default() -> Self {
        NegativeSearchConfig {
            points_per_line: 24,
            grid: SampleConfig::default().grid,
        }
    }
}

/// Points of the flat hypersurfaces `{Re v = 0}` and `{Re p = 0}` on the
/// slice whose distance to a sphere lies in the cutoff's transition band
/// `(r0, r1)`, where `Hess phi` changes sign.
pub fn transition_points(field: &PotentialField, n: usize) -> Result<Vec<(SamplePoint, f64)>> {
    use core::f64::consts::{FRAC_PI_2, PI};
    let mut out = Vec::new();
    // the hypersurface lines through the four spheres on the slice
    let lines: [(f64, f64, bool); 4] = [(0.0, 1.0, true), (PI, -1.0, true), (0.0, 1.0, false), (PI, -1.0, false)];
    let reach = 2.0 * field.r1;
    for &(start, dir, along_alpha) in &lines {
        for k in 1..=n {
            let u = start + dir * reach * k as f64 / n as f64;
            let (alpha, beta) = if along_alpha { (u, FRAC_PI_2) } else { (FRAC_PI_2, u) };
            let point = slice_point(alpha, beta);
            if let Some((_, d)) = field.nearest_tube(&point)? {
                if d > field.r0 && d < field.r1 {
                    out.push((
                        SamplePoint {
                            point,
                            origin: SampleOrigin::Slice { alpha, beta },
                        },
                        d,
                    ));
                }
            }
        }
    }
    Ok(out)
}

/// The most negative single-plane curvature of `g_s` over
/// [`transition_points`]; `None` if every sampled minimum is nonnegative.
pub fn negative_plane_search<E: Executor>(
    field: &PotentialField,
    s: f64,
    cfg: &NegativeSearchConfig,
    exec: &E,
) -> Result<Option<NegativePlane>> {
    let pts = transition_points(field, cfg.points_per_line)?;
    // points whose finite differences do not converge are skipped
    let res = exec.map(pts.len(), |c| -> Result<(f64, Vec5, Vec5)> {
        let pc = match DeformedPoint::new(&pts[c].0.point, field)?.curvature(s) {
            Ok(pc) => pc,
            Err(Error::OracleFailure { .. }) => return Ok((f64::INFINITY, [0.0; 5], [0.0; 5])),
            Err(e) => return Err(e),
        };
        let m = min_plane(&pc, &cfg.grid);
        Ok((pc.sec(&m.u, &m.v), m.u, m.v))
    });
    let res = res.into_iter().collect::<Result<Vec<_>>>()?;
    let Some((c, sec)) = argmin(res.iter().map(|r| r.0)) else {
        return Ok(None);
    };
    if sec >= 0.0 {
        return Ok(None);
    }
    Ok(Some(NegativePlane {
        s,
        point: pts[c].0.point,
        origin: pts[c].0.origin,
        distance: pts[c].1,
        plane: (res[c].1, res[c].2),
        sec,
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RicciFloor {
    pub s: f64,
    pub min: f64,
    pub sample: usize,
    pub point: S2xS3Point,
    /// Unit direction in the `g_s`-orthonormal basis.
    pub direction: Vec5,
    pub samples: usize,
}

/// Smallest Ricci curvature of `g_s` over all samples and all directions.
pub fn ricci_positivity_scan<E: Executor>(sampled: &SampledField, s: f64, exec: &E) -> Result<RicciFloor> {
    let res = exec.map(sampled.points.len(), |k| -> Result<(f64, Vec5)> {
        Ok(min_ricci(&sampled.points[k].curvature(s)?))
    });
    let res = res.into_iter().collect::<Result<Vec<_>>>()?;
    let (k, min) = argmin(res.iter().map(|r| r.0)).ok_or_else(|| Error::InvalidData(String::from("empty sample")))?;
    Ok(RicciFloor {
        s,
        min,
        sample: k,
        point: sampled.samples[k].point,
        direction: res[k].1,
        samples: res.len(),
    })
}
