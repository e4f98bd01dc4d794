use biorth_scan::{cmd_diff, Certificate, CheckKind, DiffTolerances, DriftClass, ExitCode, ScanConfig, ScanError, Space};

#[test]
fn config_round_trip_is_stable() {
    for space in [Space::Wu, Space::Wilking, Space::Deformed] {
        let mut cfg = ScanConfig::new(space);
        cfg.theta = 0.123456789012345;
        cfg.s = Some(1.0 / 3.0);
        cfg.seed = 42;
        let text = cfg.to_json();
        let back = ScanConfig::from_json(&text).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.to_json(), text);
    }
}

#[test]
fn resolutions_below_two_are_config_errors() {
    let mut cfg = ScanConfig::new(Space::Wu);
    cfg.set_grid(1);
    let e = cfg.validate().unwrap_err();
    assert_eq!(e.exit_code(), ExitCode::Config);
    cfg.set_grid(2);
    assert!(cfg.validate().is_ok());

    let mut cfg = ScanConfig::new(Space::Wilking);
    cfg.grids.wilking.floor_planes = 0;
    assert!(matches!(cfg.validate(), Err(ScanError::Config(_))));

    let mut cfg = ScanConfig::new(Space::Deformed);
    cfg.theta = 0.0;
    assert!(cfg.validate().is_err());
    cfg.theta = 0.1;
    cfg.s = Some(-1.0);
    assert!(cfg.validate().is_err());
}

#[test]
fn grid_flag_targets_the_space() {
    let mut cfg = ScanConfig::new(Space::Wu);
    cfg.set_grid(7);
    assert_eq!(cfg.grids.wu.infeasibility.resolution, 7);
    let mut cfg = ScanConfig::new(Space::Wilking);
    cfg.set_grid(11);
    assert_eq!(cfg.grids.wilking.flat.slice_resolution, 11);
    let mut cfg = ScanConfig::new(Space::Deformed);
    cfg.set_grid(5);
    assert_eq!(cfg.grids.deformed.sample.slice_resolution, 5);
}

#[test]
fn schema_mismatch_is_rejected() {
    let mut v: serde_json::Value = serde_json::from_str(&ScanConfig::new(Space::Wu).to_json()).unwrap();
    v["schema_version"] = 99.into();
    assert!(matches!(ScanConfig::from_json(&v.to_string()), Err(ScanError::Schema { got: 99, .. })));
}

fn sample_certificate() -> Certificate {
    let mut c = Certificate::new("wu-verify", &ScanConfig::new(Space::Wu));
    c.headline("infeasibility.lower_bound", 0.20708882894526184);
    c.headline("biorth.min", 0.25);
    c.witness("point", &[0.1, 0.2, 0.3]);
    c.check("biorth-positive", CheckKind::Numeric, true, "ok");
    c
}

#[test]
fn exit_code_follows_the_worst_check() {
    let mut c = sample_certificate();
    assert_eq!((c.passed, c.exit_code), (true, 0));
    c.check("clusters", CheckKind::Warning, false, "3 clusters");
    assert_eq!(c.exit_code, 0);
    c.check("sec", CheckKind::Numeric, false, "negative");
    assert_eq!(c.exit_code, 2);
    c.check("infeasibility", CheckKind::Resolution, false, "coarse");
    assert_eq!((c.passed, c.exit_code), (false, 3));
    assert_eq!(c.failed_checks().count(), 2);
}

#[test]
fn certificate_round_trip_and_csv() {
    let c = sample_certificate();
    let text = c.to_json();
    assert!(!text.contains("wall_clock"));
    assert_eq!(Certificate::from_json(&text).unwrap(), c);
    let csv = c.headline_csv();
    assert!(csv.starts_with("name,value\n"));
    assert!(csv.contains("biorth.min,0.25\n"));
}

#[test]
fn identical_certificates_have_an_empty_diff() {
    let text = sample_certificate().to_json();
    let r = cmd_diff(&text, &text, &DiffTolerances::default()).unwrap();
    assert!(r.is_empty());
    assert_eq!(r.exit_code(), ExitCode::Pass);
}

#[test]
fn tolerance_changes_are_config_drift() {
    let a = sample_certificate();
    let mut b = a.clone();
    b.config.tolerances.crossval = 3e-4;
    let r = cmd_diff(&a.to_json(), &b.to_json(), &DiffTolerances::default()).unwrap();
    assert_eq!(r.drifts.len(), 1);
    assert_eq!(r.drifts[0].class, DriftClass::Config);
    assert_eq!(r.drifts[0].path, "config.tolerances.crossval");
    assert_eq!(r.exit_code(), ExitCode::Pass);
}

#[test]
fn headline_drift_beyond_tolerance_fails() {
    let a = sample_certificate();
    let mut b = a.clone();
    b.headline("biorth.min", 0.25 * (1.0 + 1e-12));
    let r = cmd_diff(&a.to_json(), &b.to_json(), &DiffTolerances::default()).unwrap();
    assert_eq!(r.drifts.len(), 1);
    assert!(r.drifts[0].within_tolerance);
    assert_eq!(r.exit_code(), ExitCode::Pass);

    b.headline("biorth.min", 0.24);
    let r = cmd_diff(&a.to_json(), &b.to_json(), &DiffTolerances::default()).unwrap();
    assert_eq!(r.regressions().count(), 1);
    assert_eq!(r.exit_code(), ExitCode::Numeric);
    assert!(r.render().contains("value-drift headline.biorth.min"));

    let mut c = a.clone();
    c.witness("point", &[0.1, 0.2, 0.4]);
    let r = cmd_diff(&a.to_json(), &c.to_json(), &DiffTolerances::default()).unwrap();
    assert_eq!(r.drifts[0].class, DriftClass::Witness);
    assert_eq!(r.exit_code(), ExitCode::Numeric);
}

#[test]
fn wall_clock_is_ignored() {
    let a = sample_certificate();
    let mut b = a.clone();
    b.wall_clock_seconds = Some(12.5);
    assert!(cmd_diff(&a.to_json(), &b.to_json(), &DiffTolerances::default()).unwrap().is_empty());
}

#[test]
fn diff_rejects_other_schemas() {
    let a = sample_certificate().to_json();
    let b = a.replace("\"schema_version\": 1,\n  \"command\"", "\"schema_version\": 2,\n  \"command\"");
    assert_ne!(a, b);
    let e = cmd_diff(&a, &b, &DiffTolerances::default()).unwrap_err();
    assert!(matches!(e, ScanError::Schema { got: 2, .. }));
    assert_eq!(e.exit_code(), ExitCode::Config);
}
