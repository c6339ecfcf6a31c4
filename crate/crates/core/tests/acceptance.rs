//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Run with `cargo test -p holocert-core --test acceptance -- --nocapture`.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use holocert::curvature::origin_value;
use holocert::rational::factorial;
use holocert::verify::fixture_spec;
use holocert::{pr_so_n, run_checks, CheckReport, EnumerationMode, Geometry, RunConfig, Status};

const FIXTURES: [&str; 5] = ["F0", "F1", "F2", "F3", "F4"];
const DIMENSIONS: [usize; 5] = [5, 6, 10, 11, 10];
const PRUNED_BUDGET: Duration = Duration::from_secs(60);
const EXHAUSTIVE_BUDGET: Duration = Duration::from_secs(600);
/// `(n, seed)` of the random one-dimensional inputs.
const RANDOM: [(usize, u64); 5] = [(2, 1), (3, 2), (4, 3), (5, 4), (6, 5)];

type Reports<'a> = BTreeMap<&'a str, (CheckReport, Duration)>;
type Criterion = (u32, &'static str, fn(&Reports) -> Outcome);

/// The literal bracket form `k! [A_k, ·]` does not hold on F4, where the
/// basis elements do not commute; the Leibniz sum does.
const EXPECTED_FAILURES: &[u32] = &[6];

struct Outcome {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn require(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn checks(&mut self, report: &CheckReport, label: &str, names: &[&str]) {
        for name in names {
            match report.check(name) {
                Some(c) if c.status == Status::Pass => {}
                Some(c) => {
                    let first = c
                        .witnesses
                        .first()
                        .map(|w| {
                            format!(
                                " at {:?}: expected {}, got {}",
                                w.indices, w.expected, w.actual
                            )
                        })
                        .unwrap_or_default();
                    self.failures.push(format!("{label} {name}{first}"));
                }
                None => self.failures.push(format!("{label} {name} did not run")),
            }
        }
    }
}

fn run(cfg: &RunConfig) -> (CheckReport, Duration) {
    let t0 = Instant::now();
    let report = run_checks(cfg).expect("pipeline runs");
    (report, t0.elapsed())
}

fn subset(mut cfg: RunConfig, names: &[&str]) -> RunConfig {
    cfg.checks = Some(names.iter().map(|s| s.to_string()).collect());
    cfg
}

fn criterion_1(reports: &Reports) -> Outcome {
    let mut o = Outcome::new();
    for (fixture, want) in FIXTURES.iter().zip(DIMENSIONS) {
        let (report, elapsed) = &reports[fixture];
        o.checks(report, fixture, &["holonomy.equality"]);
        let got = report.metadata.holonomy_dimension;
        o.require(
            got == Some(want),
            format!("{fixture} dimension {got:?}, want {want}"),
        );
        o.require(
            *elapsed <= PRUNED_BUDGET,
            format!("{fixture} took {elapsed:?}"),
        );

        let cfg = RunConfig {
            mode: EnumerationMode::Exhaustive,
            ..RunConfig::fixture(fixture)
        };
        let (ex, ex_elapsed) = run(&subset(cfg, &["holonomy.pruning", "holonomy.equality"]));
        o.checks(
            &ex,
            &format!("{fixture} exhaustive"),
            &["holonomy.pruning", "holonomy.equality"],
        );
        o.require(
            ex_elapsed <= EXHAUSTIVE_BUDGET,
            format!("{fixture} exhaustive took {ex_elapsed:?}"),
        );
        o.notes.push(format!(
            "{fixture}={} ({:.2}s, exhaustive {:.2}s)",
            got.unwrap_or(0),
            elapsed.as_secs_f64(),
            ex_elapsed.as_secs_f64()
        ));
    }
    o
}

const CHRISTOFFEL: [&str; 6] = [
    "christoffel.e11",
    "christoffel.e22",
    "christoffel.e21",
    "christoffel.e10",
    "christoffel.e20",
    "christoffel.e25",
];

fn criterion_2(reports: &Reports) -> Outcome {
    let mut o = Outcome::new();
    for fixture in FIXTURES {
        o.checks(&reports[fixture].0, fixture, &CHRISTOFFEL);
    }
    for (n, seed) in RANDOM {
        let cfg = RunConfig {
            seed,
            ..RunConfig::fixture(&format!("random:{n}"))
        };
        let (report, _) = run(&subset(cfg, &CHRISTOFFEL));
        o.checks(&report, &format!("random:{n} seed {seed}"), &CHRISTOFFEL);
    }
    o.notes.push(format!(
        "{} fixtures + {} random inputs",
        FIXTURES.len(),
        RANDOM.len()
    ));
    o
}

fn criterion_3(reports: &Reports) -> Outcome {
    let mut o = Outcome::new();
    let names = [
        "curvature.e50",
        "curvature.e30",
        "curvature.e40",
        "curvature.e70",
        "curvature.e60",
        "curvature.e80",
    ];
    for fixture in FIXTURES {
        o.checks(&reports[fixture].0, fixture, &names);
        // R^1_{n+4, î, ĵ}(0) against -A^ĵ_{î 1}, read straight off the input.
        let spec = fixture_spec(fixture, 0).unwrap();
        let geo = Geometry::build(&spec, 0).unwrap();
        let f = geo.frame();
        let a1 = spec.basis_or_zero(1);
        for i in 0..spec.n() {
            for j in 0..spec.n() {
                let got = origin_value(geo.curvature(0).get(&[f.p1(), f.q2(), f.e(i), f.e(j)]));
                let want = -a1[(j, i)].clone();
                o.require(
                    got == want,
                    format!("{fixture} R^1_(n+4,{},{}) = {got}", i + 3, j + 3),
                );
            }
        }
    }
    o
}

fn criterion_4(reports: &Reports) -> Outcome {
    let mut o = Outcome::new();
    let names = [
        "lemma1.contraction",
        "lemma2.vanishing",
        "lemma3.i",
        "lemma3.ii",
        "lemma3.iii",
        "pattern.e200",
    ];
    for fixture in FIXTURES {
        let report = &reports[fixture].0;
        o.checks(report, fixture, &names);
        let want = fixture_spec(fixture, 0).unwrap().dim_h() + 1;
        o.require(
            report.metadata.max_order == want,
            format!("{fixture} max order {}", report.metadata.max_order),
        );
    }
    o
}

fn criterion_5(reports: &Reports) -> Outcome {
    let mut o = Outcome::new();
    for fixture in ["F1", "F3", "F4"] {
        o.checks(
            &reports[fixture].0,
            fixture,
            &["e130.factorial", "e130.beyond"],
        );
        let spec = fixture_spec(fixture, 0).unwrap();
        let big_n = spec.dim_h();
        let geo = Geometry::build(&spec, big_n).unwrap();
        let f = geo.frame();
        for r in 1..=big_n + 1 {
            let derivs = vec![f.q1(); r - 1];
            let got = pr_so_n(&geo.operator_at_origin(f.q1(), f.q2(), &derivs)).unwrap();
            let want = spec.basis_or_zero(r).scale(&factorial(r));
            o.require(got == want, format!("{fixture} r={r}: projection {got:?}"));
        }
    }
    o
}

fn criterion_6(reports: &Reports) -> Outcome {
    let mut o = Outcome::new();
    for fixture in ["F3", "F4"] {
        o.checks(&reports[fixture].0, fixture, &["e140.bracket"]);
        o.notes.push(format!(
            "{fixture} Leibniz form {}",
            reports[fixture]
                .0
                .check("e140.leibniz")
                .map_or("skipped", |c| c.status.label())
        ));
    }
    o
}

fn criterion_7(reports: &Reports) -> Outcome {
    let mut o = Outcome::new();
    let names = [
        "oracle.christoffel",
        "oracle.riemann",
        "oracle.loop_transport",
        "oracle.convergence",
    ];
    for fixture in FIXTURES {
        let report = &reports[fixture].0;
        o.checks(report, fixture, &names);
        if let Some(c) = report.check("oracle.convergence") {
            o.notes.push(format!("{fixture}: {}", c.detail));
        }
    }
    o
}

fn criterion_8(reports: &Reports) -> Outcome {
    let mut o = Outcome::new();
    let names = [
        "operators.shape",
        "metric.origin",
        "metric.determinant",
        "metric.degree",
        "connection.metric_compatible",
    ];
    for fixture in FIXTURES {
        o.checks(&reports[fixture].0, fixture, &names);
    }
    o
}

fn criterion_9(reports: &Reports) -> Outcome {
    let mut o = Outcome::new();
    for fixture in ["F3", "F4"] {
        let report = &reports[fixture].0;
        o.checks(report, fixture, &["holonomy.permutation"]);
        let detail = report
            .check("holonomy.permutation")
            .map_or("", |c| c.detail.as_str());
        o.require(
            detail.contains("metric changed"),
            format!("{fixture} permutation: {detail}"),
        );
    }
    let mut cfg = RunConfig::fixture("F1");
    cfg.debug.flip_u = Some(1);
    let (report, _) = run(&cfg);
    o.require(
        report.summary.failed >= 1,
        "negative control has no failing check",
    );
    o.require(report.exit_code() != 0, "negative control exits with 0");
    o.notes.push(format!(
        "negative control: {} failing checks, exit {}",
        report.summary.failed,
        report.exit_code()
    ));
    o
}

#[test]
fn acceptance() {
    let reports: Reports = FIXTURES
        .iter()
        .map(|&f| (f, run(&RunConfig::fixture(f))))
        .collect();

    let criteria: [Criterion; 9] = [
        (1, "holonomy equals g^h", criterion_1),
        (2, "Christoffel identities", criterion_2),
        (3, "curvature identities", criterion_3),
        (4, "lemma suite", criterion_4),
        (5, "key formula r! A_r", criterion_5),
        (6, "bracket formula", criterion_6),
        (7, "oracle agreement", criterion_7),
        (8, "structural invariants", criterion_8),
        (9, "robustness", criterion_9),
    ];

    let mut failed = Vec::new();
    for (id, title, check) in criteria {
        let o = check(&reports);
        let status = if o.failures.is_empty() {
            "PASS"
        } else {
            "FAIL"
        };
        println!("{status} {id} {title}");
        for note in &o.notes {
            println!("       {note}");
        }
        for failure in o.failures.iter().take(5) {
            println!("       failed: {failure}");
        }
        if !o.failures.is_empty() {
            failed.push(id);
        }
    }
    assert_eq!(failed, EXPECTED_FAILURES, "failing criteria changed");
}

#[test]
fn expected_failure_is_the_literal_bracket_on_f4() {
    let report = run_checks(&subset(
        RunConfig::fixture("F4"),
        &["e140.bracket", "e140.leibniz"],
    ))
    .unwrap();
    assert_eq!(report.check("e140.bracket").unwrap().status, Status::Fail);
    assert_eq!(report.check("e140.leibniz").unwrap().status, Status::Pass);
    let witness = &report.check("e140.bracket").unwrap().witnesses[0];
    assert_eq!(witness.indices, vec![1, 3]);
}
