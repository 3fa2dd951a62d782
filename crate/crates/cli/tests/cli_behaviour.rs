use std::path::Path;
use std::process::{Command, Output};

fn bellsim(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bellsim"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn generated_streams_round_trip_through_verify_identity() {
    let dir = tempfile::tempdir().unwrap();
    let out = bellsim(
        dir.path(),
        &[
            "streams",
            "--seed",
            "4",
            "--trials",
            "500",
            "--angles",
            "0,90,-45,45",
            "--out",
            "s.txt",
        ],
    );
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "streams: 4");

    let out = bellsim(
        dir.path(),
        &["verify-identity", "--input", "s.txt", "--out", "r.json"],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json(&dir.path().join("r.json"));
    assert_eq!(v["holds"], true);
    assert_eq!(v["trials"], 500);
    assert_eq!(v["checks"][0]["kind"], "four");
    assert_eq!(v["columns"][3], "b'@45.000000");
}

#[test]
fn nonlocal_streams_are_checked_triple_by_triple() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "streams",
        "--seed",
        "4",
        "--trials",
        "300",
        "--model",
        "nonlocal-toy",
        "--locality",
        "nonlocal",
        "--angles",
        "0,90,-45,45",
        "--out",
        "s.txt",
    ];
    assert!(bellsim(dir.path(), &args).status.success());
    let out = bellsim(
        dir.path(),
        &["verify-identity", "--input", "s.txt", "--out", "r.json"],
    );
    assert!(out.status.success());
    let v = json(&dir.path().join("r.json"));
    // 6 anchors times C(5, 2) pairs
    assert_eq!(v["checks"].as_array().unwrap().len(), 60);
    assert_eq!(v["holds"], true);
}

#[test]
fn malformed_stream_file_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.txt"), "a b c\n1 -1 1\n1 0 -1\n").unwrap();
    let out = bellsim(dir.path(), &["verify-identity", "--input", "bad.txt"]);
    assert_eq!(out.status.code(), Some(2));

    std::fs::write(dir.path().join("ragged.txt"), "1 -1 1\n1 -1\n").unwrap();
    let out = bellsim(dir.path(), &["verify-identity", "--input", "ragged.txt"]);
    assert_eq!(out.status.code(), Some(2));

    std::fs::write(dir.path().join("two.txt"), "1 -1\n-1 -1\n").unwrap();
    let out = bellsim(dir.path(), &["verify-identity", "--input", "two.txt"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn matched_nonlocal_chsh_is_a_configuration_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = bellsim(
        dir.path(),
        &[
            "experiment",
            "--model",
            "nonlocal-toy",
            "--locality",
            "nonlocal",
            "--angles",
            "0,90,-45,45",
            "--seed",
            "1",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("inconsistent"));
}

#[test]
fn usage_errors_and_help() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(bellsim(dir.path(), &["--help"]).status.code(), Some(0));
    assert_eq!(bellsim(dir.path(), &["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        bellsim(dir.path(), &["experiment", "--angles", "0,1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        bellsim(dir.path(), &["experiment", "--model", "nope"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        bellsim(dir.path(), &["scan", "--model", "exponential:-1"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn unmatched_singlet_experiment_violates() {
    let dir = tempfile::tempdir().unwrap();
    let out = bellsim(
        dir.path(),
        &[
            "experiment",
            "--model",
            "singlet",
            "--acquisition",
            "unmatched",
            "--angles",
            "0,90,-45,45",
            "--trials",
            "200000",
            "--seed",
            "8",
            "--format",
            "both",
            "--out",
            "exp.any",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json(&dir.path().join("exp.json"));
    assert_eq!(v["violated"], true);
    assert_eq!(v["config"]["seed"], 8);
    assert!((v["lhs"].as_f64().unwrap() - 2.0 * std::f64::consts::SQRT_2).abs() < 0.03);
    let csv = std::fs::read_to_string(dir.path().join("exp.csv")).unwrap();
    assert_eq!(csv.lines().count(), 5);
    assert!(csv.starts_with("label,setting_1_deg,setting_2_deg,n,sum,value,stderr\n"));
}

#[test]
fn missing_seed_is_reported_and_echoed() {
    let dir = tempfile::tempdir().unwrap();
    let out = bellsim(
        dir.path(),
        &["experiment", "--trials", "100", "--out", "e.json"],
    );
    assert!(out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("using seed"));
    let v = json(&dir.path().join("e.json"));
    assert!(v["config"]["seed"].is_u64());
}

#[test]
fn cosine_scan_reports_infeasibility() {
    let dir = tempfile::tempdir().unwrap();
    let out = bellsim(
        dir.path(),
        &[
            "scan", "--model", "cosine", "--grid", "0:180:32", "--out", "w.json",
        ],
    );
    assert!(out.status.success());
    let v = json(&dir.path().join("w.json"));
    assert_eq!(v["feasible"], false);
    assert!(v["worst_slack"].as_f64().unwrap() < -0.4);
    assert_eq!(v["config"]["grid"]["units"], "degrees");
}
