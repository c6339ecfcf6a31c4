use std::fs;
use std::process::{Command, Output};

fn holocert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_holocert"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn fixture_f1_exits_zero() {
    let out = holocert(&["verify", "--fixture", "F1"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["metadata"]["holonomy_dimension"], 6);
    assert_eq!(json["summary"]["failed"], 0);
}

#[test]
fn negative_control_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.json");
    fs::write(&config, r#"{"fixture": "F1", "debug": {"flip_u": 2}}"#).unwrap();
    let out = holocert(&[
        "verify",
        "--config",
        config.to_str().unwrap(),
        "--format",
        "text",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("FAIL"));
    assert!(text.contains("negative control"));
}

#[test]
fn report_file_round_trips_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = holocert(&[
            "verify",
            "--fixture",
            "F3",
            "--output",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    let first = fs::read(&a).unwrap();
    assert_eq!(first, fs::read(&b).unwrap());
    let report = holocert::CheckReport::from_json(std::str::from_utf8(&first).unwrap()).unwrap();
    assert_eq!(report.metadata.holonomy_dimension, Some(11));
}

#[test]
fn flags_override_the_config() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    fs::write(
        &config,
        r#"{"fixture": "F0", "checks": ["holonomy.equality", "holonomy.pruning"]}"#,
    )
    .unwrap();
    let out = holocert(&[
        "verify",
        "--config",
        config.to_str().unwrap(),
        "--fixture",
        "random:3",
        "--seed",
        "4",
        "--mode",
        "exhaustive",
        "--max-order",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["metadata"]["fixture"], "random:3");
    assert_eq!(json["metadata"]["seed"], 4);
    assert_eq!(json["metadata"]["max_order"], 1);
    assert_eq!(json["checks"].as_array().unwrap().len(), 2);
}

#[test]
fn input_errors_exit_two() {
    let out = holocert(&["verify"]);
    assert_eq!(out.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.json");
    fs::write(
        &config,
        r#"{"n": 2, "generators": [[["0", "1"], ["1", "0"]]]}"#,
    )
    .unwrap();
    let out = holocert(&["verify", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("generator 1"), "{err}");
}
