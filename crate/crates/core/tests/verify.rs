use holocert::verify::{parse_config_str, ReportFormat};
use holocert::{run_checks, CheckReport, EnumerationMode, RunConfig, Status, CHECK_NAMES};

#[test]
fn f1_passes_every_check() {
    let report = run_checks(&RunConfig::fixture("F1")).unwrap();
    let failing: Vec<&str> = report
        .checks
        .iter()
        .filter(|c| c.status == Status::Fail)
        .map(|c| c.name.as_str())
        .collect();
    assert!(failing.is_empty(), "{failing:?}");
    assert_eq!(report.exit_code(), 0);
    assert_eq!(report.metadata.holonomy_dimension, Some(6));
    assert_eq!(report.summary.heuristic, 1);
    // every check except the exhaustive-only pruning audit
    assert_eq!(report.checks.len(), CHECK_NAMES.len() - 1);
}

#[test]
fn negative_control_names_the_broken_identity() {
    let cfg = parse_config_str(r#"{"fixture": "F1", "debug": {"flip_u": 1}}"#).unwrap();
    let report = run_checks(&cfg).unwrap();
    assert_ne!(report.exit_code(), 0);
    let e21 = report.check("christoffel.e21").unwrap();
    assert_eq!(e21.status, Status::Fail);
    let w = &e21.witnesses[0];
    assert!(w.indices.iter().all(|&i| (1..=6).contains(&i)));
    assert_ne!(w.expected, w.actual);
    assert!(report
        .metadata
        .notes
        .iter()
        .any(|n| n.contains("negative control")));
}

#[test]
fn report_round_trips_through_json() {
    let report = run_checks(&RunConfig::fixture("F0")).unwrap();
    let back = CheckReport::from_json(&report.to_json()).unwrap();
    assert_eq!(back, report);
    let text = report.render(ReportFormat::Text);
    assert!(text.contains("PASS"));
    assert!(text.contains("holonomy dimension: 5"));
}

#[test]
fn reports_are_deterministic() {
    let cfg = RunConfig::fixture("F3");
    let a = run_checks(&cfg).unwrap().to_json();
    let b = run_checks(&cfg).unwrap().to_json();
    assert_eq!(a, b);
}

#[test]
fn check_subset_and_exhaustive_audit() {
    let cfg = parse_config_str(
        r#"{"fixture": "F2", "mode": "exhaustive", "checks": ["holonomy.pruning", "holonomy.equality"]}"#,
    )
    .unwrap();
    assert_eq!(cfg.mode, EnumerationMode::Exhaustive);
    let report = run_checks(&cfg).unwrap();
    let names: Vec<&str> = report.checks.iter().map(|c| c.name.as_str()).collect();
    assert_eq!(names, ["holonomy.pruning", "holonomy.equality"]);
    assert!(report.all_passed());
    assert_eq!(report.metadata.holonomy_dimension, Some(10));
}

#[test]
fn explicit_generators_match_the_fixture() {
    let cfg = parse_config_str(r#"{"n": 2, "generators": [[["0", "-1"], ["1", "0"]]]}"#).unwrap();
    let explicit = run_checks(&cfg).unwrap();
    let fixture = run_checks(&RunConfig::fixture("F1")).unwrap();
    assert_eq!(explicit.checks, fixture.checks);
    assert_eq!(explicit.metadata.fixture, None);
}
