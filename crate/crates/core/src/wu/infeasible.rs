//! A certified positive lower bound for `max |e_ab|` over the Euler cube
//! `[0, 2 pi]^3`, so the four trace equations have no common zero.
//!
//! The cube is cut into `resolution^3` boxes. Each box gets a lower bound
//! for the max-residual, either from interval evaluation of the closed
//! forms or from the value at its center minus a Lipschitz allowance. A box
//! whose bound misses `target` is bisected (all three axes) up to
//! `refine_depth` times. The certified bound is the minimum over the leaves;
//! the certificate passes when that bound reaches `target`.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::interval::Interval;
use super::trace::trace_closed_form;
use crate::error::{Error, Result};
use crate::exec::Executor;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InfeasibilityMethod {
    Interval,
    GridLipschitz,
}

/// Bounds on `|d e_ab / d(x, y, z)|` for `e11, e18, e81, e88`, from
/// `|sin|, |cos| <= 1` applied to the differentiated closed forms.
pub const LIPSCHITZ: [[f64; 3]; 4] = [
    [4.0, 1.5, 4.0],
    [1.732_050_807_568_877_2, 0.866_025_403_784_438_6, 0.0],
    [0.0, 0.866_025_403_784_438_6, 1.732_050_807_568_877_2],
    [0.0, 1.5, 0.0],
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InfeasibilityConfig {
    pub method: InfeasibilityMethod,
    /// Boxes per axis before refinement.
    pub resolution: usize,
    pub refine_depth: usize,
    /// Boxes whose bound is already at least this are not refined.
    pub target: f64,
    /// Number of lowest-bound leaves kept in the certificate.
    pub keep_worst: usize,
}

impl InfeasibilityConfig {
    pub fn validate(&self) -> Result<()> {
        if self.resolution == 0 || !(self.target > 0.0) {
            return Err(Error::InvalidData(alloc::format!(
                "infeasibility config needs resolution >= 1 and target > 0, got {} and {}",
                self.resolution,
                self.target
            )));
        }
        Ok(())
    }
}

impl Default for InfeasibilityConfig {
    fn default() -> Self {
        InfeasibilityConfig {
            method: InfeasibilityMethod::Interval,
            resolution: 32,
            refine_depth: 4,
            target: 0.2,
            keep_worst: 8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxRecord {
    pub lo: [f64; 3],
    pub hi: [f64; 3],
    pub depth: usize,
    /// Certified lower bound of `max |e_ab|` on the box.
    pub bound: f64,
    /// `(e11, e18, e81, e88)` at the center.
    pub center_residuals: [f64; 4],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfeasibilityCertificate {
    pub config: InfeasibilityConfig,
    /// Certified lower bound `L` over the whole cube.
    pub lower_bound: f64,
    /// `lower_bound >= target`.
    pub certified: bool,
    pub leaves: u64,
    pub boxes_evaluated: u64,
    /// Lowest-bound leaves, ascending.
    pub worst: Vec<BoxRecord>,
    /// `max |e_ab|` at the identity, which is 1.
    pub residual_at_origin: f64,
    /// `max |e_ab|` at the best box center met.
    pub best_center_residual: f64,
    pub lipschitz: Option<[[f64; 3]; 4]>,
}

fn box_bound(method: InfeasibilityMethod, lo: &[f64; 3], hi: &[f64; 3]) -> f64 {
    match method {
        InfeasibilityMethod::Interval => {
            let [x, y, z] = core::array::from_fn(|i| Interval::new(lo[i], hi[i]));
            let (x2, y2, z2) = (x.scale(2.0), y.scale(2.0), z.scale(2.0));
            let (c2x, s2x, c2z, s2z) = (x2.cos(), x2.sin(), z2.cos(), z2.sin());
            let c2y = y2.cos();
            let sy2 = y.sin().sqr();
            let h = 0.5 * libm::sqrt(3.0);
            let e11 = (c2x * c2y.add_scalar(3.0) * c2z).scale(0.25) - s2x * y.cos() * s2z;
            let e18 = (c2x * sy2).scale(-h);
            let e81 = (c2z * sy2).scale(-h);
            let e88 = c2y.scale(3.0).add_scalar(1.0).scale(0.25);
            [e11, e18, e81, e88].iter().map(Interval::mig).fold(0.0, f64::max)
        }
        InfeasibilityMethod::GridLipschitz => {
            let c: [f64; 3] = core::array::from_fn(|i| 0.5 * (lo[i] + hi[i]));
            let half: [f64; 3] = core::array::from_fn(|i| 0.5 * (hi[i] - lo[i]));
            let e = trace_closed_form(c[0], c[1], c[2]);
            let mut best = f64::NEG_INFINITY;
            for (k, ek) in e.iter().enumerate() {
                let allowance: f64 = (0..3).map(|i| LIPSCHITZ[k][i] * half[i]).sum();
                // rounding in the closed forms is far below 1e-14
                best = best.max(ek.abs() - allowance - 1e-14);
            }
            best
        }
    }
}

struct Cell {
    min: f64,
    leaves: u64,
    evaluated: u64,
    worst: Vec<BoxRecord>,
    best_center: f64,
}

fn push_worst(worst: &mut Vec<BoxRecord>, rec: BoxRecord, keep: usize) {
    worst.push(rec);
    worst.sort_by(|a, b| {
        a.bound
            .total_cmp(&b.bound)
            .then(a.lo[0].total_cmp(&b.lo[0]))
            .then(a.lo[1].total_cmp(&b.lo[1]))
            .then(a.lo[2].total_cmp(&b.lo[2]))
    });
    worst.truncate(keep);
}

fn refine(cfg: &InfeasibilityConfig, lo: [f64; 3], hi: [f64; 3], depth: usize, cell: &mut Cell) {
    let bound = box_bound(cfg.method, &lo, &hi);
    cell.evaluated += 1;
    if bound < cfg.target && depth < cfg.refine_depth {
        let mid: [f64; 3] = core::array::from_fn(|i| 0.5 * (lo[i] + hi[i]));
        for child in 0..8 {
            let pick = |i: usize| child >> i & 1 == 1;
            let clo = core::array::from_fn(|i| if pick(i) { mid[i] } else { lo[i] });
            let chi = core::array::from_fn(|i| if pick(i) { hi[i] } else { mid[i] });
            refine(cfg, clo, chi, depth + 1, cell);
        }
        return;
    }
    let c: [f64; 3] = core::array::from_fn(|i| 0.5 * (lo[i] + hi[i]));
    let center_residuals = trace_closed_form(c[0], c[1], c[2]);
    let m = center_residuals.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    cell.best_center = cell.best_center.min(m);
    cell.leaves += 1;
    cell.min = cell.min.min(bound);
    if cfg.keep_worst > 0 && (cell.worst.len() < cfg.keep_worst || bound < cell.worst[cell.worst.len() - 1].bound) {
        push_worst(
            &mut cell.worst,
            BoxRecord {
                lo,
                hi,
                depth,
                bound,
                center_residuals,
            },
            cfg.keep_worst,
        );
    }
}

/// Runs the box pass and reports the bound found, certified or not.
pub fn infeasibility_scan<E: Executor>(cfg: &InfeasibilityConfig, exec: &E) -> InfeasibilityCertificate {
    let n = cfg.resolution.max(1);
    let edge = |k: usize| TAU * k as f64 / n as f64;
    let cells = exec.map(n * n * n, |idx| {
        let (i, j, k) = (idx / (n * n), idx / n % n, idx % n);
        let mut cell = Cell {
            min: f64::INFINITY,
            leaves: 0,
            evaluated: 0,
            worst: Vec::new(),
            best_center: f64::INFINITY,
        };
        refine(cfg, [edge(i), edge(j), edge(k)], [edge(i + 1), edge(j + 1), edge(k + 1)], 0, &mut cell);
        cell
    });
    let mut worst = Vec::new();
    let (mut min, mut leaves, mut evaluated, mut best_center) = (f64::INFINITY, 0, 0, f64::INFINITY);
    for c in cells {
        min = min.min(c.min);
        leaves += c.leaves;
        evaluated += c.evaluated;
        best_center = best_center.min(c.best_center);
        for r in c.worst {
            push_worst(&mut worst, r, cfg.keep_worst);
        }
    }
    let origin = trace_closed_form(0.0, 0.0, 0.0).iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    InfeasibilityCertificate {
        config: *cfg,
        lower_bound: min,
        certified: min >= cfg.target,
        leaves,
        boxes_evaluated: evaluated,
        worst,
        residual_at_origin: origin,
        best_center_residual: best_center,
        lipschitz: (cfg.method == InfeasibilityMethod::GridLipschitz).then_some(LIPSCHITZ),
    }
}

/// [`infeasibility_scan`], failing unless the bound reaches the target.
pub fn infeasibility_certificate<E: Executor>(cfg: &InfeasibilityConfig, exec: &E) -> Result<InfeasibilityCertificate> {
    cfg.validate()?;
    let cert = infeasibility_scan(cfg, exec);
    if !cert.certified {
        return Err(Error::InsufficientResolution {
            resolution: cfg.resolution,
            depth: cfg.refine_depth,
            bound: cert.lower_bound,
        });
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Sequential;

    #[test]
    fn interval_bounds_are_below_sampled_values() {
        let lo = [0.3, 1.1, 2.0];
        let hi = [0.5, 1.3, 2.4];
        for m in [InfeasibilityMethod::Interval, InfeasibilityMethod::GridLipschitz] {
            let b = box_bound(m, &lo, &hi);
            for s in 0..27 {
                let p: [f64; 3] = core::array::from_fn(|i| lo[i] + (hi[i] - lo[i]) * ((s / 3usize.pow(i as u32)) % 3) as f64 / 2.0);
                let e = trace_closed_form(p[0], p[1], p[2]);
                let v = e.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
                assert!(b <= v, "{m:?}: {b} > {v}");
            }
        }
    }

    #[test]
    fn coarse_grid_is_insufficient() {
        let cfg = InfeasibilityConfig {
            resolution: 2,
            ..Default::default()
        };
        let e = infeasibility_certificate(&cfg, &Sequential).unwrap_err();
        assert!(matches!(e, Error::InsufficientResolution { bound, .. } if bound < 0.2));
    }

    #[test]
    fn default_certifies_target_with_both_methods() {
        for method in [InfeasibilityMethod::Interval, InfeasibilityMethod::GridLipschitz] {
            let cfg = InfeasibilityConfig {
                method,
                ..Default::default()
            };
            let c = infeasibility_certificate(&cfg, &Sequential).unwrap();
            assert!(c.lower_bound >= 0.2 && c.lower_bound <= c.best_center_residual);
            assert_eq!(c.residual_at_origin, 1.0);
        }
    }

    #[test]
    fn doubling_resolution_does_not_lower_the_bound() {
        for method in [InfeasibilityMethod::Interval, InfeasibilityMethod::GridLipschitz] {
            let mut prev = f64::NEG_INFINITY;
            for resolution in [2, 4, 8, 16] {
                let cfg = InfeasibilityConfig {
                    method,
                    resolution,
                    refine_depth: 2,
                    ..Default::default()
                };
                let l = infeasibility_scan(&cfg, &Sequential).lower_bound;
                assert!(l >= prev - 1e-12, "{method:?} {resolution}: {l} < {prev}");
                prev = l;
            }
        }
    }
}
