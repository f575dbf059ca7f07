//! End-to-end runs of the `blockade` binary.

use std::process::Command;

fn blockade(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_blockade")).args(args).output().unwrap()
}

#[test]
fn validate_succeeds() {
    let out = blockade(&["validate"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(!String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn unknown_preset_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = blockade(&["fig", "fig9", "--out", dir.path().join("x.csv").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("fig9"));
}

#[test]
fn bad_override_is_a_config_error() {
    assert_eq!(blockade(&["point", "--set", "kappa1=-1"]).status.code(), Some(1));
    assert_eq!(blockade(&["point", "--set", "nonsense=1"]).status.code(), Some(1));
    assert_eq!(blockade(&["point", "--engine", "magic"]).status.code(), Some(1));
}

#[test]
fn point_json_has_both_engines() {
    let out = blockade(&["--json", "point", "--engine", "both", "--set", "delta=0.5", "--set", "u=1"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["master"]["g2_a1"].as_f64().is_some());
    assert!(v["analytic"]["g2_a1"].as_f64().is_some());
}

#[test]
fn sweep_writes_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "[hilbert]\ncutoff = 3\n[sweep]\nengine = \"both\"\noutputs = [\"g2_a1\"]\n\
         [[sweep.axes]]\nname = \"delta\"\nmin = -1.0\nmax = 1.0\npoints = 5\n",
    )
    .unwrap();
    let csv = dir.path().join("out.csv");
    let out = blockade(&["--json", "sweep", "--config", cfg.to_str().unwrap(), "--out", csv.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = photon_blockade::sweep::read_csv(&csv, 1).unwrap();
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|r| r.valid && r.value("g2_a1_master").is_some()));
    assert!(csv.with_extension("json").exists());
}

#[test]
fn missing_config_file_is_a_config_error() {
    let out = blockade(&["sweep", "--config", "/nonexistent/run.toml", "--out", "/tmp/never.csv"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn contour_preset_writes_rows() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("fig5.csv");
    let out = blockade(&["fig", "fig5", "--out", csv.to_str().unwrap()]);
    assert!(out.status.success());
    let rows = photon_blockade::sweep::read_csv(&csv, 3).unwrap();
    assert_eq!(rows.len(), 4 * 61 * 61);
}
