use biorth_core::exec::Sequential;
use biorth_core::grassmann::GridConfig;
use biorth_scan::commands::cmd_deform_reuse;
use biorth_scan::{
    cmd_deform_verify, cmd_wilking_scan, cmd_wu_verify, load_atlas, ExitCode, RayonExecutor, ScanConfig, Space,
};

fn small_grid() -> GridConfig {
    GridConfig {
        planes: 256,
        complements: 128,
        refine_starts: 3,
        max_evals: 600,
    }
}

fn small_wilking(cfg: &mut ScanConfig) {
    let w = &mut cfg.grids.wilking;
    w.floor_points = 8;
    w.floor_planes = 16;
    w.flat.slice_resolution = 9;
    w.flat.cloud_size = 3;
    w.crossval_planes = 16;
}

fn small_deformed() -> ScanConfig {
    let mut cfg = ScanConfig::new(Space::Deformed);
    small_wilking(&mut cfg);
    let d = &mut cfg.grids.deformed;
    d.sample.slice_resolution = 3;
    d.sample.tube_radii = 2;
    d.sample.grid = small_grid();
    d.negative.grid = small_grid();
    d.flat_checks.points_per_orbit = 1;
    cfg
}

#[test]
fn wu_verify_passes_and_is_deterministic() {
    let cfg = ScanConfig::new(Space::Wu);
    let a = cmd_wu_verify(&cfg, &Sequential).unwrap();
    assert!(a.passed, "{:?}", a.failed_checks().collect::<Vec<_>>());
    assert!(a.headline["infeasibility.lower_bound"] >= 0.2);
    assert!(a.headline["biorth.min"] > 0.0);
    let b = cmd_wu_verify(&cfg, &RayonExecutor::new(3)).unwrap();
    assert_eq!(a.to_json(), b.to_json());
}

#[test]
fn wu_verify_reports_insufficient_resolution() {
    let mut cfg = ScanConfig::new(Space::Wu);
    cfg.set_grid(2);
    let c = cmd_wu_verify(&cfg, &Sequential).unwrap();
    assert!(!c.passed);
    assert_eq!(c.exit_code, ExitCode::Resolution as i32);
    let failed: Vec<_> = c.failed_checks().collect();
    assert_eq!(failed.len(), 1);
    assert!(failed[0].detail.contains("insufficient resolution"));
    assert!(c.headline["infeasibility.lower_bound"] < 0.2);
}

#[test]
fn wilking_scan_writes_a_reverifiable_atlas() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("atlas.json");
    let mut cfg = ScanConfig::new(Space::Wilking);
    small_wilking(&mut cfg);
    cfg.atlas = Some(path.display().to_string());
    let c = cmd_wilking_scan(&cfg, &RayonExecutor::new(2)).unwrap();
    assert!(c.passed, "{:?}", c.failed_checks().collect::<Vec<_>>());
    assert!(c.headline["floor.min_sec"] >= -5e-5);
    let atlas = load_atlas(&path).unwrap();
    assert_eq!(atlas.spheres.len() as f64, c.headline["flat.clusters"]);
    assert!(atlas.reverify().unwrap());
}

#[test]
fn deform_verify_small_sample_and_containment() {
    let cfg = small_deformed();
    let c = cmd_deform_verify(&cfg, &RayonExecutor::new(2)).unwrap();
    assert!(c.passed, "{:?}", c.failed_checks().collect::<Vec<_>>());
    let s = c.headline["s"];
    assert!(s > 0.0 && s <= c.headline["s_max"]);
    assert!(c.headline["f.min"] > 0.0 && c.headline["negative.sec"] < 0.0);

    let mut wider = cfg.clone();
    wider.theta = 0.2;
    let r = cmd_deform_reuse(&wider, &c).unwrap();
    assert!(r.passed);
    assert_eq!(r.headline["s"], s);
    assert_eq!(r.headline["reused_theta"], 0.1);
    assert_eq!(r.config.theta, 0.2);

    // a smaller theta is not contained
    let mut narrower = cfg.clone();
    narrower.theta = 0.05;
    assert!(!cmd_deform_reuse(&narrower, &c).unwrap().passed);
    // nor is a certificate for different grids
    let mut other = wider.clone();
    other.grids.deformed.sample.tube_radii = 3;
    assert!(cmd_deform_reuse(&other, &c).is_err());
}

#[test]
fn fixed_s_zero_fails_numerically() {
    let mut cfg = small_deformed();
    cfg.s = Some(0.0);
    let c = cmd_deform_verify(&cfg, &Sequential).unwrap();
    assert_eq!(c.exit_code, ExitCode::Numeric as i32);
    assert!(c.failed_checks().any(|k| k.name == "f-positive"));
}
