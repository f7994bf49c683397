use std::process::Command;

fn gnum() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gnum"))
}

fn stdout_of(args: &[&str]) -> (i32, String, String) {
    let out = gnum().args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn count_of_rationals_is_floor() {
    let (code, out, _) = stdout_of(&["count", "--system", "builtin:rational", "--x", "100"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "100");
}

#[test]
fn zeta_of_rationals_at_two() {
    let (code, out, _) = stdout_of(&["--format", "json", "zeta", "--system", "builtin:rational", "--s", "2+0i"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let re = v[0]["re"].as_f64().unwrap();
    assert!((re - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-4, "{re}");
}

#[test]
fn budget_env_var_caps_enumeration() {
    let out = gnum()
        .args(["integers", "--system", "primes:2,3", "--x", "1000"])
        .env("GNUM_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn bad_system_is_a_validation_error() {
    assert_eq!(stdout_of(&["count", "--system", "primes:1,2", "--x", "10"]).0, 2);
    assert_eq!(stdout_of(&["count", "--system", "/no/such/file.json", "--x", "10"]).0, 2);
}

#[test]
fn usage_and_help() {
    assert_eq!(stdout_of(&["count"]).0, 64);
    let (code, out, _) = stdout_of(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("verify-paper"));
    assert_eq!(stdout_of(&["--version"]).0, 0);
}

#[test]
fn system_from_json_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sys.json");
    std::fs::write(&path, r#"{"kind":"discrete","primes":[2,3,5]}"#).unwrap();
    let (code, out, err) = stdout_of(&["count", "--system", path.to_str().unwrap(), "--x", "30"]);
    assert_eq!(code, 0, "{err}");
    // 5-smooth numbers up to 30
    assert_eq!(out.trim(), "18");
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pi.csv");
    let (code, out, _) = stdout_of(&[
        "--format",
        "csv",
        "--output",
        path.to_str().unwrap(),
        "pi",
        "--system",
        "builtin:rational",
        "--x",
        "10,100",
    ]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,pi,Pi,Pi0");
    assert!(lines[1].starts_with("10,4,"));
    assert!(lines[2].starts_with("100,25,"));
}

#[test]
fn verify_paper_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, err) = stdout_of(&["verify-paper", "ex43-wobble", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(code, 0, "{out}{err}");
    assert!(out.contains("PASS"));
    let csv = std::fs::read_to_string(dir.path().join("ex43-wobble.csv")).unwrap();
    assert!(csv.starts_with("u,") && csv.lines().count() > 50);
}

#[test]
fn verify_paper_unknown_example() {
    assert_eq!(stdout_of(&["verify-paper", "ex99"]).0, 2);
}

#[test]
fn mobius_json_reports_decay() {
    let (code, out, err) =
        stdout_of(&["--format", "json", "mobius", "--system", "builtin:rational", "--u-from", "2", "--u-to", "11.5"]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["decays"], serde_json::Value::Bool(true));
}

#[test]
fn wobble_text() {
    let (code, out, err) = stdout_of(&["wobble", "--system", "builtin:ex43", "--h", "0.0108304", "--lo", "20", "--hi", "45"]);
    assert_eq!(code, 0, "{err}");
    assert!(out.starts_with("min 1.18"), "{out}");
}
