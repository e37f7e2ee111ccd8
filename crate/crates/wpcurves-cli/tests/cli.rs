use num_complex::Complex64;
use std::path::Path;
use std::process::Command;
use wpcurves::grid::{make_grid, GridFunction};
use wpcurves::io;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_wpcurves"))
}

fn write_circle_fn(path: &Path, f: impl Fn(f64) -> Complex64) {
    let grid = make_grid(256).unwrap();
    let gf = GridFunction::from_circle_fn(grid, f);
    std::fs::write(path, io::grid_function_to_json(&gf).unwrap()).unwrap();
}

#[test]
fn norm_of_constant_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("constant.json");
    write_circle_fn(&input, |_| Complex64::new(1.25, -0.5));
    let out = bin()
        .args(["compute", "norm", "--kind", "bhat", "--p", "1"])
        .arg(&input)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["value"].as_f64().unwrap(), 0.0);
    assert_eq!(report["kind"], "bhat");
}

#[test]
fn hilbert_of_cosine_is_sine() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("cos1.json");
    write_circle_fn(&input, |t| Complex64::new(t.cos(), 0.0));
    let out_path = dir.path().join("h.json");
    let status = bin()
        .args(["compute", "hilbert", "--out"])
        .arg(&out_path)
        .arg(&input)
        .status()
        .unwrap();
    assert!(status.success());
    let hf = io::grid_function_from_json(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    let grid = hf.grid();
    let expect = GridFunction::from_circle_fn(grid, |t| Complex64::new(t.sin(), 0.0));
    assert!(hf.sub(&expect).sup_norm() < 1e-12);
}

#[test]
fn csv_input_accepted_for_hilbert() {
    let dir = tempfile::tempdir().unwrap();
    let grid = make_grid(128).unwrap();
    let gf = GridFunction::from_circle_fn(grid, |t| Complex64::new((2.0 * t).sin(), 0.0));
    let input = dir.path().join("f.csv");
    std::fs::write(&input, io::grid_function_to_csv(&gf)).unwrap();
    let out = bin().args(["compute", "hilbert"]).arg(&input).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let hf = io::grid_function_from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    let expect = GridFunction::from_circle_fn(grid, |t| Complex64::new(-(2.0 * t).cos(), 0.0));
    assert!(hf.sub(&expect).sup_norm() < 1e-12);
}

#[test]
fn projection_keeps_interior_half_of_cosine() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("cos1.json");
    write_circle_fn(&input, |t| Complex64::new(t.cos(), 0.0));
    let out = bin()
        .args(["compute", "project", "--side", "plus"])
        .arg(&input)
        .output()
        .unwrap();
    assert!(out.status.success());
    let pf = io::grid_function_from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    let expect =
        GridFunction::from_circle_fn(pf.grid(), |t| Complex64::from_polar(0.5, t));
    assert!(pf.sub(&expect).sup_norm() < 1e-12);
}

#[test]
fn weld_reports_small_residual() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("weld.json");
    let status = bin()
        .args(["compute", "weld", "--c2", "0.2", "--n", "1024", "--out"])
        .arg(&out_path)
        .status()
        .unwrap();
    assert!(status.success());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert!(report["residual"].as_f64().unwrap() < 1e-4);
    assert_eq!(report["n"].as_u64().unwrap(), 1024);
}

#[test]
fn weld_tolerance_gate_exits_3() {
    let status = bin()
        .args(["compute", "weld", "--c2", "0.3", "--n", "1024", "--tol", "1e-30"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(3));
}

#[test]
fn ba_extend_identity_has_tiny_dilatation() {
    let dir = tempfile::tempdir().unwrap();
    let grid = make_grid(512).unwrap();
    let gf = GridFunction::from_line_fn(grid, |x| Complex64::new(x, 0.0));
    let input = dir.path().join("identity.json");
    std::fs::write(&input, io::grid_function_to_json(&gf).unwrap()).unwrap();
    let out = bin().args(["compute", "ba-extend"]).arg(&input).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let mu = io::beltrami_from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert!(mu.sup() < 1e-10);
}

#[test]
fn identity_suite_passes() {
    let out = bin().args(["suite", "identities", "--n", "512"]).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["schema_version"], 1);
}

#[test]
fn corrupted_multiplier_fails_identity_suite() {
    let status = bin()
        .args(["suite", "identities", "--n", "512", "--corrupt-multiplier"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
}

#[test]
fn cauchy_suite_reports_refinement_ratio() {
    let out = bin().args(["suite", "cauchy", "--c2", "0.2"]).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let checks = report["checks"].as_array().unwrap();
    let ratio = checks
        .iter()
        .find(|c| c["id"] == "welded-projection-refinement")
        .expect("refinement check present");
    assert!(ratio["value"].as_f64().unwrap() >= 4.0);
}

#[test]
fn suite_reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let status = bin()
            .args(["suite", "besov", "--n", "256", "--seed", "9", "--out"])
            .arg(path)
            .status()
            .unwrap();
        assert!(status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn malformed_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.json");
    std::fs::write(&input, "{\"domain\": \"circle\"").unwrap();
    let status = bin().args(["compute", "hilbert"]).arg(&input).status().unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn unknown_suite_exits_2() {
    let status = bin().args(["suite", "frobnicate"]).status().unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn unknown_subcommand_exits_64() {
    let status = bin().arg("frobnicate").status().unwrap();
    assert_eq!(status.code(), Some(64));
}

#[test]
fn invalid_thread_cap_exits_2() {
    let status = bin()
        .env("WPCURVES_THREADS", "zero")
        .args(["suite", "besov", "--n", "256"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}
