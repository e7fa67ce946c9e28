use std::path::Path;
use std::process::{Command, Output, Stdio};
use std::thread::sleep;
use std::time::Duration;

fn gkf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gkf"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = gkf(args);
    assert!(
        out.status.success(),
        "gkf {args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn ws_args<'a>(dir: &'a Path, rest: &[&'a str]) -> Vec<&'a str> {
    let mut v = vec!["--workspace", dir.to_str().unwrap()];
    v.extend_from_slice(rest);
    v
}

#[test]
fn dims_in_three_formats() {
    let csv = stdout(&["dims", "--from", "2", "--to", "10"]);
    assert_eq!(csv.lines().count(), 6);
    assert!(csv.contains("\n10,0,1,3,9,12,4,0,0\n"));

    let json: serde_json::Value = serde_json::from_str(&stdout(&[
        "dims", "--from", "2", "--to", "2", "--format", "json",
    ]))
    .unwrap();
    assert_eq!(json["schema"], "gkf-dims/1");
    assert_eq!(json["rows"][0]["dims"][1], 1);

    let tex = stdout(&["dims", "--from", "20", "--to", "20", "--format", "tex"]);
    assert!(tex.contains("20 & 0 & 0 & 17 & 124 & 423 & 791 & 801 & 414 & 96 & 9 & 1 & $1$"));
}

#[test]
fn odd_weight_is_rejected() {
    assert_eq!(gkf(&["betti", "-w", "7"]).status.code(), Some(2));
}

#[test]
fn basis_counts() {
    assert_eq!(
        stdout(&["basis", "-w", "8", "-m", "3", "--count-only"]),
        "(3 4 7): 1\n(3 5 6): 1\n(4^2 6): 1\n(4 5^2): 1\ntotal: 4\n"
    );
    assert_eq!(
        stdout(&["basis", "-w", "4", "-m", "1", "--count-only"]),
        "total: 0\n"
    );
    let json: serde_json::Value = serde_json::from_str(&stdout(&[
        "basis",
        "-w",
        "8",
        "-m",
        "4",
        "--count-only",
        "--format",
        "json",
    ]))
    .unwrap();
    assert_eq!(json["total"], 5);
}

#[test]
fn basis_listing_weight_two() {
    assert_eq!(
        stdout(&["basis", "-w", "2", "-m", "2"]),
        "# (3^2): 1\n1/1 z(0,3)^z(3,3)\n-3/1 z(1,3)^z(2,3)\n\n"
    );
}

#[test]
fn betti_weight_twelve() {
    let csv = stdout(&["betti", "-w", "12"]);
    assert!(csv.contains("12,betti,0,0,0,1,0,0,0,0\n"), "{csv}");
    let json: serde_json::Value =
        serde_json::from_str(&stdout(&["betti", "-w", "8", "--format", "json"])).unwrap();
    assert_eq!(json["schema"], "gkf-betti/1");
    assert!(json["betti"].as_array().unwrap().iter().all(|b| b == 0));
}

#[test]
fn warm_cache_reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for cmd in [
        &["betti", "-w", "12", "--format", "json"][..],
        &["basis", "-w", "10", "-m", "4"][..],
    ] {
        let cold = stdout(&ws_args(dir.path(), cmd));
        let warm = stdout(&ws_args(dir.path(), cmd));
        assert_eq!(cold, warm);
        assert_eq!(cold, stdout(cmd));
    }
    assert!(dir.path().join("manifest.json").exists());
    assert!(dir.path().join("matrix/w12/m04.txt").exists());
}

#[test]
fn verify_detects_corrupted_cache() {
    let dir = tempfile::tempdir().unwrap();
    stdout(&ws_args(dir.path(), &["betti", "-w", "8"]));
    let ok = gkf(&ws_args(dir.path(), &["verify"]));
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("PASS workspace-digests"));

    let file = dir.path().join("matrix/w08/m03.txt");
    let mut text = std::fs::read_to_string(&file).unwrap();
    text.push('\n');
    std::fs::write(&file, text).unwrap();
    let bad = gkf(&ws_args(dir.path(), &["verify"]));
    assert_eq!(bad.status.code(), Some(1));
    let report = String::from_utf8_lossy(&bad.stdout);
    assert!(
        report.contains("FAIL workspace-digests: digest mismatch for matrix/w08/m03"),
        "{report}"
    );
}

#[test]
fn verify_full_with_weight() {
    let out = stdout(&["verify", "--level", "full", "-w", "8", "--format", "json"]);
    let json: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(json["passed"], true);
    let names: Vec<&str> = json["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"poisson-pairing"));
    assert!(names.contains(&"d-squared-w8"));
}

#[test]
fn interrupted_run_resumes_with_identical_output() {
    let fresh = stdout(&["betti", "-w", "16"]);

    let dir = tempfile::tempdir().unwrap();
    let mut child = Command::new(env!("CARGO_BIN_EXE_gkf"))
        .args(ws_args(
            dir.path(),
            &["--threads", "1", "betti", "-w", "16"],
        ))
        .stdout(Stdio::null())
        .spawn()
        .unwrap();
    sleep(Duration::from_millis(400));
    child.kill().unwrap();
    child.wait().unwrap();

    let resumed = stdout(&ws_args(dir.path(), &["betti", "-w", "16"]));
    assert_eq!(resumed, fresh);
    assert_eq!(
        gkf(&ws_args(dir.path(), &["verify"])).status.code(),
        Some(0)
    );
}

#[test]
fn partial_cache_from_basis_command_is_reused() {
    let dir = tempfile::tempdir().unwrap();
    stdout(&ws_args(
        dir.path(),
        &["basis", "-w", "14", "-m", "5", "--count-only"],
    ));
    assert_eq!(
        stdout(&ws_args(dir.path(), &["betti", "-w", "14"])),
        stdout(&["betti", "-w", "14"])
    );
}
