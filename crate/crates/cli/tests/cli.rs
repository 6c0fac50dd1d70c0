use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use wehrl::functionals::{extremal_entropy, ConvexFn};
use wehrl::polyspace::{normalize, write_poly, HomPoly};
use wehrl::states::DensityState;
use wehrl::Complex64;

fn wehrl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wehrl")).args(args).output().expect("binary runs")
}

fn json_out(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

fn kernel_file(dir: &Path, d: usize, n: usize) -> PathBuf {
    let path = dir.join("kernel.json");
    write_poly(&path, &HomPoly::coordinate_power(d, n, 0).unwrap()).unwrap();
    path
}

#[test]
fn kernel_entropy_is_extremal() {
    let dir = tempfile::tempdir().unwrap();
    for (d, n) in [(1, 5), (2, 3)] {
        let path = kernel_file(dir.path(), d, n);
        let v = json_out(&wehrl(&["entropy", "--poly", path.to_str().unwrap(), "--phi", "xlogx"]));
        let value = v["value"].as_f64().unwrap();
        let stderr = v["stderr"].as_f64().unwrap_or(0.0);
        let oracle = extremal_entropy(n, d, &ConvexFn::xlogx()).unwrap().value;
        assert!((value - oracle).abs() <= 5.0 * stderr + 1e-8, "d={d} N={n}: {value} vs {oracle}");
        assert_eq!(v["config"]["phi"], "xlogx");
        assert_eq!(v["config"]["N"], n);
    }
}

#[test]
fn kernel_distance_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let path = kernel_file(dir.path(), 2, 4);
    let v = json_out(&wehrl(&["distance", "--poly", path.to_str().unwrap()]));
    assert!(v["value"].as_f64().unwrap().abs() < 1e-6);
}

#[test]
fn exact_values_carry_the_exact_label() {
    let dir = tempfile::tempdir().unwrap();
    let path = kernel_file(dir.path(), 1, 3);
    let out = wehrl(&["entropy", "--poly", path.to_str().unwrap(), "--phi", "power:2", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# config: {"));
    assert_eq!(lines.next().unwrap(), "functional,value,stderr,method,argmax");
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[2], "exact");
    assert_eq!(row[3], "exact_rule");
}

#[test]
fn sweeps_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"d": 1, "N": 3, "phi": ["xlogx", "hinge:0.5"], "generator": {"kind": "near_kernel"}, "count": 4, "samples": 20000, "starts": 16}"#,
    )
    .unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let status = wehrl(&[
            "sweep-wehrl",
            "--config",
            cfg.to_str().unwrap(),
            "--seed",
            "7",
            "--format",
            "csv",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
        assert!(dir.path().join(format!("{name}.summary.json")).exists());
        std::fs::read(out).unwrap()
    };
    let a = run("a.csv");
    let b = run("b.csv");
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("# config: "));
    assert!(text.contains("\"seed\":7"));
    // header plus two records per polynomial
    assert_eq!(text.lines().count(), 2 + 8);
}

#[test]
fn concentration_sweep_reports_a_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"d": 1, "N": 4, "omega": [0.2], "count": 3, "samples": 20000, "starts": 16}"#).unwrap();
    let v = json_out(&wehrl(&["sweep-conc", "--config", cfg.to_str().unwrap(), "--seed", "3"]));
    assert_eq!(v["summary"]["records"], 3);
    assert_eq!(v["summary"]["violations"], 0);
    assert_eq!(v["config"]["sweep"]["seed"], 3);
}

#[test]
fn region_file_concentration() {
    let dir = tempfile::tempdir().unwrap();
    let path = kernel_file(dir.path(), 1, 2);
    let region = dir.path().join("region.json");
    std::fs::write(&region, r#"{"caps": [{"center": [[1, 0], [0, 0]], "t": 0.25}]}"#).unwrap();
    let arg = format!("file:{}", region.display());
    let v = json_out(&wehrl(&["concentration", "--poly", path.to_str().unwrap(), "--region", &arg, "--samples", "100000"]));
    // cap |zeta_1|^2 > 1/2 for zeta_1^2: C = 1 - (1/2)^3
    let c = v["value"].as_f64().unwrap();
    assert!((c - 0.875).abs() < 5.0 * v["stderr"].as_f64().unwrap(), "{c}");
}

#[test]
fn coherent_state_has_zero_trace_distance() {
    let dir = tempfile::tempdir().unwrap();
    let eta = normalize(&[Complex64::new(0.6, 0.1), Complex64::new(0.2, -0.7)]).unwrap();
    let path = dir.path().join("rho.json");
    DensityState::coherent(3, &eta).unwrap().write(&path).unwrap();
    let v = json_out(&wehrl(&["state-distance", "--state", path.to_str().unwrap()]));
    assert!(v["value"].as_f64().unwrap() < 1e-5);
}

#[test]
fn malformed_inputs_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"d": 1, "N": 2, "terms": [{"alpha": [1, 0], "re": 1, "im": 0}]}"#).unwrap();
    let out = wehrl(&["entropy", "--poly", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("terms[0].alpha"));

    let good = kernel_file(dir.path(), 1, 2);
    let out = wehrl(&["entropy", "--poly", good.to_str().unwrap(), "--phi", "cosh"]);
    assert_eq!(out.status.code(), Some(2));
    let out = wehrl(&["concentration", "--poly", good.to_str().unwrap(), "--region", "disc:0.2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = wehrl(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));

    let scaled = dir.path().join("scaled.json");
    std::fs::write(&scaled, r#"{"d": 1, "N": 2, "terms": [{"alpha": [2, 0], "re": 2, "im": 0}]}"#).unwrap();
    let out = wehrl(&["distance", "--poly", scaled.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let out = wehrl(&["distance", "--poly", scaled.to_str().unwrap(), "--normalize"]);
    assert!(out.status.success());

    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"d": 1, "N": 3, "unknown": true}"#).unwrap();
    let out = wehrl(&["sweep-wehrl", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}
