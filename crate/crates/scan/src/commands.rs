//! The `wu-verify`, `wilking-scan` and `deform-verify` pipelines.

use std::f64::consts::{FRAC_PI_4, TAU};
use std::path::Path;

use biorth_core::algebra::{AlgVec, AlgebraTag, MetricEndo};
use biorth_core::conformal::{
    find_s_star, flat_configuration_checks, k_theta_minimum, negative_plane_search, ricci_positivity_scan,
    DeformConfig, PotentialField, SampledField,
};
use biorth_core::curvature::{riemann_fd, sec_from_riemann, sec_left_invariant, LeftInvariantChart};
use biorth_core::exec::{argmax, Executor};
use biorth_core::wilking::{find_flat_locus, sec_floor, FlatLocusAtlas};
use biorth_core::wu::{
    biorth_wu_at_base, fd_cross_validation, infeasibility_scan, min_sec_wu, trace_closed_form, trace_direct,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::certificate::{Certificate, CheckKind};
use crate::config::ScanConfig;
use crate::ScanError;

use CheckKind::{Numeric, Resolution, Warning};

pub fn load_atlas(path: &Path) -> Result<FlatLocusAtlas, ScanError> {
    let text = std::fs::read_to_string(path).map_err(|e| ScanError::Io(path.display().to_string(), e.to_string()))?;
    serde_json::from_str(&text).map_err(|e| ScanError::Config(format!("atlas {}: {e}", path.display())))
}

pub fn save_atlas(atlas: &FlatLocusAtlas, path: &Path) -> Result<(), ScanError> {
    let text = serde_json::to_string_pretty(atlas).expect("atlas serializes");
    std::fs::write(path, text).map_err(|e| ScanError::Io(path.display().to_string(), e.to_string()))
}

/// Trace system check, infeasibility certificate, biorthogonal curvature at
/// the base coset, the flat minimum of the sectional curvature and the
/// engine comparison.
pub fn cmd_wu_verify<E: Executor>(cfg: &ScanConfig, exec: &E) -> Result<Certificate, ScanError> {
    cfg.validate()?;
    let g = &cfg.grids.wu;
    let tol = &cfg.tolerances;
    let mut cert = Certificate::new("wu-verify", cfg);

    let n = g.trace_resolution;
    let angle = |k: usize| TAU * k as f64 / n as f64;
    let gaps = exec.map(n * n * n, |idx| {
        let (x, y, z) = (angle(idx / (n * n)), angle(idx / n % n), angle(idx % n));
        let (c, d) = (trace_closed_form(x, y, z), trace_direct(x, y, z));
        (0..4).map(|k| (c[k] - d[k]).abs()).fold(0.0, f64::max)
    });
    let (worst, gap) = argmax(gaps).expect("nonempty grid");
    cert.headline("trace.max_discrepancy", gap);
    cert.witness(
        "trace.worst_point",
        &[angle(worst / (n * n)), angle(worst / n % n), angle(worst % n)],
    );
    cert.check(
        "trace-closed-form",
        Numeric,
        gap <= tol.trace,
        format!("max |closed - direct| = {gap:e} on a {n}^3 grid"),
    );
    // cos 2x = cos 2z = 0, cos^2 y = 1/3
    let y = (1.0_f64 / 3.0).sqrt().acos();
    let spot = trace_direct(FRAC_PI_4, y, FRAC_PI_4)[0].abs();
    let expected = 1.0 / 3.0_f64.sqrt();
    cert.headline("trace.spot_e11", spot);
    cert.check(
        "trace-spot-value",
        Numeric,
        (spot - expected).abs() <= tol.spot_value,
        format!("|e11| = {spot} vs 1/sqrt(3)"),
    );

    let inf = infeasibility_scan(&g.infeasibility, exec);
    cert.headline("infeasibility.lower_bound", inf.lower_bound);
    cert.check(
        "infeasibility",
        Resolution,
        inf.certified,
        if inf.certified {
            format!("certified max-residual >= {} >= target {}", inf.lower_bound, g.infeasibility.target)
        } else {
            format!(
                "insufficient resolution: {}^3 boxes with refinement depth {} only certify {} < target {}",
                g.infeasibility.resolution, g.infeasibility.refine_depth, inf.lower_bound, g.infeasibility.target
            )
        },
    );
    cert.witness("infeasibility", &inf);

    let b = biorth_wu_at_base(&g.biorth, exec)?;
    cert.headline("biorth.min", b.value);
    cert.headline("biorth.pair_distance", b.distance);
    cert.check("biorth-positive", Numeric, b.value > 0.0, format!("min biorthogonal curvature {}", b.value));
    cert.witness("biorth", &b);

    let m = min_sec_wu(&g.sec_min);
    cert.headline("sec.min", m.value);
    cert.headline("sec.orbit_distance", m.orbit.distance);
    cert.check(
        "sec-min-zero",
        Numeric,
        m.value.abs() <= tol.sec_zero,
        format!("min sectional curvature {:e}", m.value),
    );
    cert.check(
        "sec-min-on-flat-orbit",
        Numeric,
        m.orbit.distance <= tol.orbit_distance,
        format!("chordal distance {:e} to the Ad-orbit of the reference flat", m.orbit.distance),
    );
    cert.witness("sec_min", &m);

    let cv = fd_cross_validation(g.crossval_points, g.crossval_planes)?;
    cert.headline("crossval.fitted_c", cv.fitted_c);
    cert.headline("crossval.max_error", cv.max_error_unit_c);
    cert.check(
        "engine-crossval",
        Numeric,
        cv.max_error_unit_c <= tol.crossval,
        format!("{} planes, max |algebraic - fd| = {:e}, fitted c = {}", cv.planes, cv.max_error_unit_c, cv.fitted_c),
    );
    cert.witness("crossval", &cv);
    Ok(cert)
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

/// Largest `|algebraic - fd|` over random planes of a left-invariant metric.
fn left_invariant_crossval(phi: &MetricEndo, planes: usize, rng: &mut ChaCha8Rng) -> Result<(f64, f64), ScanError> {
    let tag = phi.tag();
    let n = tag.dim();
    let rep = riemann_fd(&LeftInvariantChart::new(phi.clone()), &vec![0.0; n])?;
    let (mut worst, mut min_sec) = (0.0_f64, f64::INFINITY);
    for _ in 0..planes {
        let (x, y) = (random_vec(rng, n), random_vec(rng, n));
        let a = sec_left_invariant(&AlgVec::from_slice(tag, &x)?, &AlgVec::from_slice(tag, &y)?, phi)?;
        let f = sec_from_riemann(&rep.r, &rep.g, &x, &y)?;
        worst = worst.max((a - f).abs());
        min_sec = min_sec.min(a);
    }
    Ok((worst, min_sec))
}

/// Curvature floor, flat locus, and the engine comparison on the group.
pub fn cmd_wilking_scan<E: Executor>(cfg: &ScanConfig, exec: &E) -> Result<Certificate, ScanError> {
    cfg.validate()?;
    let g = &cfg.grids.wilking;
    let tol = &cfg.tolerances;
    let mut cert = Certificate::new("wilking-scan", cfg);

    let floor = sec_floor(g.floor_points, g.floor_planes, exec)?;
    cert.headline("floor.min_sec", floor.min_sec);
    cert.headline("floor.samples", floor.samples as f64);
    cert.check(
        "sec-floor",
        Numeric,
        floor.min_sec >= tol.sec_floor,
        format!("min sec {:e} over {} (point, plane) pairs", floor.min_sec, floor.samples),
    );
    cert.witness("floor", &floor);

    let atlas = find_flat_locus(&g.flat, exec)?;
    cert.headline("flat.flat_points", atlas.flat_count as f64);
    cert.headline("flat.flagged_points", atlas.flagged_count as f64);
    cert.headline("flat.clusters", atlas.spheres.len() as f64);
    cert.headline("flat.oracle_failures", atlas.failures.len() as f64);
    cert.check(
        "flat-locus",
        Numeric,
        atlas.flat_count > 0 && atlas.flagged_count > 0,
        format!("{} flat slice points, {} with a circle of flat planes", atlas.flat_count, atlas.flagged_count),
    );
    cert.check(
        "cluster-count",
        Warning,
        atlas.spheres.len() == tol.expected_clusters,
        format!("{} clusters (expected {})", atlas.spheres.len(), tol.expected_clusters),
    );
    for (k, why) in &atlas.failures {
        cert.check("fd-oracle", Warning, false, format!("slice point {k}: {why}"));
    }
    cert.witness("flat.failures", &atlas.failures);
    cert.witness("flat.clusters", &atlas.spheres.iter().map(|s| s.invariants).collect::<Vec<_>>());
    if let Some(path) = &cfg.atlas {
        save_atlas(&atlas, Path::new(path))?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (gap, _) = left_invariant_crossval(&MetricEndo::wilking(), g.crossval_planes, &mut rng)?;
    cert.headline("crossval.wilking_group_max_error", gap);
    cert.check(
        "engine-crossval",
        Numeric,
        gap <= tol.crossval,
        format!("{} random planes of (Sp(1) x Sp(1), g): max |algebraic - fd| = {gap:e}", g.crossval_planes),
    );
    let sphere = MetricEndo::identity(AlgebraTag::Sp1);
    let rep = riemann_fd(&LeftInvariantChart::new(sphere), &[0.0; 3])?;
    let mut sphere_gap = 0.0_f64;
    for _ in 0..g.crossval_planes {
        let (x, y) = (random_vec(&mut rng, 3), random_vec(&mut rng, 3));
        sphere_gap = sphere_gap.max((sec_from_riemann(&rep.r, &rep.g, &x, &y)? - 1.0).abs());
    }
    cert.headline("crossval.sphere_max_error", sphere_gap);
    cert.check(
        "round-sphere",
        Numeric,
        sphere_gap <= tol.sphere,
        format!("max |sec - 1| = {sphere_gap:e} on the bi-invariant S^3"),
    );
    Ok(cert)
}

/// The `s_*` search, negative-plane witness, Ricci floor and first-order
/// checks for the conformal deformation at `cfg.theta`.
pub fn cmd_deform_verify<E: Executor>(cfg: &ScanConfig, exec: &E) -> Result<Certificate, ScanError> {
    cfg.validate()?;
    let d = &cfg.grids.deformed;
    let tol = &cfg.tolerances;
    let theta = cfg.theta;
    let mut cert = Certificate::new("deform-verify", cfg);

    let atlas = match &cfg.atlas {
        Some(path) => load_atlas(Path::new(path))?,
        None => find_flat_locus(&cfg.grids.wilking.flat, exec)?,
    };
    let field = PotentialField::from_atlas(&atlas, d.support, d.r0, d.r1)?;
    let s_max = DeformConfig::s_max(&field);
    cert.headline("tubes", field.tubes.len() as f64);
    cert.headline("s_max", s_max);

    let sampled = SampledField::new(&field, &d.sample, exec)?;
    cert.headline("samples", sampled.points.len() as f64);
    let s = match cfg.s {
        Some(s) => {
            let out = k_theta_minimum(&sampled, s, theta, exec)?;
            if let Some(m) = out.min {
                cert.headline("f.min", m.value);
                cert.witness("f.min", &m);
            }
            cert.check(
                "f-positive",
                Numeric,
                out.passed(),
                format!("min f({s}, .) over K_{theta} = {:?}", out.min.map(|m| m.value)),
            );
            Some(s)
        }
        None => {
            let search = find_s_star(&sampled, s_max, theta, &d.s_search, exec)?;
            if let Some(m) = search.min {
                cert.headline("f.min", m.value);
            }
            cert.headline("f.min_at_zero", search.min_at_zero.value);
            let detail = match (search.s_star, search.undeformed_min) {
                (Some(s), _) => format!("s_* = {s}, min f(s_*, .) over K_{theta} = {:?}", search.min.map(|m| m.value)),
                (None, Some(u)) => format!("f(s, .) <= 0 for every s at an undeformed sample: {}", u.value),
                (None, None) => format!("no s in [{}, {s_max}] gives min f > 0", d.s_search.s_floor),
            };
            cert.check("s-star", Numeric, search.s_star.is_some(), detail);
            cert.witness("s_search", &search);
            search.s_star
        }
    };
    if let Some(s) = s {
        cert.headline("s", s);
        let neg = negative_plane_search(&field, s, &d.negative, exec)?;
        if let Some(n) = &neg {
            cert.headline("negative.sec", n.sec);
        }
        cert.check(
            "negative-plane",
            Numeric,
            neg.is_some(),
            match &neg {
                Some(n) => format!("sec = {:e} at g_W distance {} from a flat orbit", n.sec, n.distance),
                None => "every sampled plane has sec >= 0".into(),
            },
        );
        cert.witness("negative", &neg);
        let ricci = ricci_positivity_scan(&sampled, s, exec)?;
        cert.headline("ricci.min", ricci.min);
        cert.check("ricci-positive", Numeric, ricci.min > 0.0, format!("min Ricci {}", ricci.min));
        cert.witness("ricci", &ricci);
    }

    let flats = flat_configuration_checks(&field, &d.flat_checks, exec)?;
    let fv = flats.iter().map(|c| c.first_variation_error()).fold(0.0, f64::max);
    let hess = flats.iter().map(|c| c.hessian_residual).fold(0.0, f64::max);
    let dfds = flats.iter().map(|c| c.df_ds).fold(f64::INFINITY, f64::min);
    cert.headline("flat.first_variation_error", fv);
    cert.headline("flat.hessian_residual", hess);
    cert.headline("flat.min_df_ds", dfds);
    cert.check(
        "first-variation",
        Numeric,
        fv <= tol.first_variation,
        format!("max |formula - fd in s| = {fv:e} over {} flat planes", 2 * flats.len()),
    );
    cert.check(
        "hessian-identity",
        Numeric,
        hess <= tol.hessian_identity,
        format!("max residual {hess:e}"),
    );
    cert.check("df-ds-positive", Numeric, dfds > 0.0, format!("min df/ds {dfds}"));
    cert.witness("flat_configurations", &flats);
    Ok(cert)
}

/// Certifies `cfg.theta` with a passing certificate for a smaller theta
/// and otherwise identical settings: `K_theta` shrinks as theta grows, so
/// the minimum of `f` can only go up.
pub fn cmd_deform_reuse(cfg: &ScanConfig, prior: &Certificate) -> Result<Certificate, ScanError> {
    cfg.validate()?;
    let p = &prior.config;
    let same = p.grids == cfg.grids && p.atlas == cfg.atlas && p.s == cfg.s && p.tolerances == cfg.tolerances;
    if prior.command != "deform-verify" || !same {
        return Err(ScanError::Config(
            "the reused certificate must come from deform-verify with the same settings".into(),
        ));
    }
    let mut cert = Certificate::new("deform-verify", cfg);
    cert.headline = prior.headline.clone();
    cert.headline("reused_theta", p.theta);
    cert.witnesses = prior.witnesses.clone();
    cert.checks = prior.checks.clone();
    cert.check(
        "theta-containment",
        Numeric,
        prior.passed && p.theta <= cfg.theta,
        format!("K_{} is contained in K_{} of the reused certificate", cfg.theta, p.theta),
    );
    Ok(cert)
}
