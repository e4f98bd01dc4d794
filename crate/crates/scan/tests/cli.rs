use std::process::Command;

use biorth_scan::{Certificate, ScanConfig, Space};

fn biorth() -> Command {
    Command::new(env!("CARGO_BIN_EXE_biorth"))
}

#[test]
fn wu_verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("wu.json");
    let st = biorth().args(["wu-verify", "--jobs", "2", "--out"]).arg(&out).status().unwrap();
    assert_eq!(st.code(), Some(0));
    let cert = Certificate::load(&out).unwrap();
    assert!(cert.passed && cert.wall_clock_seconds.is_none());

    let coarse = dir.path().join("coarse.json");
    let st = biorth().args(["wu-verify", "--grid", "2", "--out"]).arg(&coarse).status().unwrap();
    assert_eq!(st.code(), Some(3));
    assert!(!Certificate::load(&coarse).unwrap().passed);

    let st = biorth().args(["wu-verify", "--grid", "1"]).output().unwrap();
    assert_eq!(st.status.code(), Some(4));
}

#[test]
fn config_file_and_timing() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("cfg.json");
    let mut cfg = ScanConfig::new(Space::Wu);
    cfg.grids.wu.trace_resolution = 4;
    std::fs::write(&cfg_path, cfg.to_json()).unwrap();
    let out = biorth().args(["wu-verify", "--timing", "--config"]).arg(&cfg_path).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let cert = Certificate::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(cert.config.grids.wu.trace_resolution, 4);
    assert!(cert.wall_clock_seconds.is_some());

    // a config for another space is refused
    let st = biorth().args(["wilking-scan", "--config"]).arg(&cfg_path).output().unwrap();
    assert_eq!(st.status.code(), Some(4));
    let st = biorth().args(["wu-verify", "--config"]).arg(dir.path().join("missing.json")).output().unwrap();
    assert_eq!(st.status.code(), Some(4));
}

#[test]
fn default_config_is_loadable() {
    let out = biorth().args(["default-config", "deformed"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let cfg = ScanConfig::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(cfg, ScanConfig::new(Space::Deformed));
}

#[test]
fn diff_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = Certificate::new("wu-verify", &ScanConfig::new(Space::Wu));
    c.headline("biorth.min", 0.25);
    let a = dir.path().join("a.json");
    c.save(&a).unwrap();
    let out = biorth().arg("diff").arg(&a).arg(&a).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());

    let mut d = c.clone();
    d.config.tolerances.sec_floor = -1e-4;
    let b = dir.path().join("b.json");
    d.save(&b).unwrap();
    let out = biorth().arg("diff").arg(&a).arg(&b).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("config-drift config.tolerances.sec_floor"));

    d.headline("biorth.min", 0.2);
    d.save(&b).unwrap();
    let out = biorth().arg("diff").arg(&a).arg(&b).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
