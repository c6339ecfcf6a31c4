//! Batch verification: a run configuration goes in, a report with one entry
//! per named identity comes out.

mod checks;
pub mod config;
pub mod report;

use std::time::Instant;

use crate::curvature::{holonomy_algebra, Geometry, HolonomyResult};
use crate::error::Result;
use crate::metric::HSpec;

pub use config::{
    fixture_note, fixture_spec, parse_config, parse_config_str, random_skew, DebugConfig,
    OracleConfig, ReportFormat, RunConfig, FIXTURES,
};
pub use report::{emit_report, CheckReport, CheckResult, RunMetadata, Status, Summary, Witness};

/// Every check, in execution order. Names are stable across versions.
pub const CHECK_NAMES: &[&str] = &[
    "metric.origin",
    "metric.symmetric",
    "metric.determinant",
    "metric.inverse",
    "metric.independence",
    "metric.degree",
    "christoffel.e11",
    "christoffel.e22",
    "christoffel.e21",
    "christoffel.e10",
    "christoffel.e20",
    "christoffel.e25",
    "christoffel.torsion_free",
    "connection.metric_compatible",
    "curvature.e50",
    "curvature.e30",
    "curvature.e40",
    "curvature.e70",
    "curvature.e60",
    "curvature.e80",
    "curvature.antisymmetry",
    "curvature.bianchi",
    "lemma1.contraction",
    "lemma2.vanishing",
    "lemma3.e100",
    "lemma3.i",
    "lemma3.ii",
    "lemma3.iii",
    "lemma3.e105",
    "lemma3.e106",
    "lemma3.e107",
    "pattern.e200",
    "recursion.e110",
    "recursion.e111",
    "e130.factorial",
    "e130.beyond",
    "e140.bracket",
    "e140.leibniz",
    "operators.shape",
    "holonomy.pruning",
    "holonomy.equality",
    "irreducibility.probe",
    "oracle.christoffel",
    "oracle.riemann",
    "oracle.convergence",
    "oracle.loop_transport",
    "holonomy.permutation",
];

pub const TYPO_NOTE: &str = "metric reading: the quadratic potential f multiplies both \
    (dx^{n+3})^2 and (dx^{n+4})^2; a repeated f(dx^{n+3})^2 term is read as f(dx^{n+4})^2";

pub const SIGN_NOTE: &str = "curvature convention: R(d_c, d_d) d_b = R^a_{bcd} d_a with \
    R^a_{bcd} = d_c G^a_{db} - d_d G^a_{cb} + G^a_{cf} G^f_{db} - G^a_{df} G^f_{cb}";

pub const SLOT_NOTE: &str = "derivative slots: nabla^r R(X, Y; Z_1; ...; Z_r) = \
    (nabla_{Z_r} ... nabla_{Z_1} R)(X, Y); the newest derivative index is the last one";

pub const INDEX_NOTE: &str = "indices are 1-based: p1 = 1, p2 = 2, e_k = k + 2, \
    q1 = n + 3, q2 = n + 4";

/// State shared by the checks of one run.
pub(crate) struct Ctx<'a> {
    pub cfg: &'a RunConfig,
    pub spec: HSpec,
    pub geo: Geometry,
    pub max_order: usize,
    holonomy: Option<HolonomyResult>,
}

impl Ctx<'_> {
    pub fn holonomy(&mut self) -> Result<&HolonomyResult> {
        if self.holonomy.is_none() {
            self.holonomy = Some(holonomy_algebra(&self.geo, self.max_order, self.cfg.mode)?);
        }
        Ok(self.holonomy.as_ref().expect("just set"))
    }
}

/// Runs the selected checks in order. Check failures are recorded in the
/// report; only pipeline errors are returned as `Err`.
pub fn run_checks(cfg: &RunConfig) -> Result<CheckReport> {
    cfg.validate()?;
    let started = Instant::now();
    let spec = cfg.spec()?;
    let max_order = cfg.resolved_max_order(&spec);
    let geo = Geometry::build_with(&spec, max_order, cfg.metric_options())?;
    let mut ctx = Ctx {
        cfg,
        spec: spec.clone(),
        geo,
        max_order,
        holonomy: None,
    };

    let mut results = Vec::new();
    for def in checks::DEFINITIONS {
        if !cfg.selected(def.name) || !(def.applies)(&ctx) {
            continue;
        }
        let t0 = Instant::now();
        let tally = (def.run)(&mut ctx)?;
        let millis = cfg.timings.then(|| t0.elapsed().as_millis() as u64);
        results.push(tally.finish(def.name, def.location, millis));
    }

    let n = spec.n();
    let mut notes = vec![
        TYPO_NOTE.to_string(),
        SIGN_NOTE.to_string(),
        SLOT_NOTE.to_string(),
        INDEX_NOTE.to_string(),
    ];
    if let Some(note) = cfg.fixture.as_deref().and_then(fixture_note) {
        notes.push(note.to_string());
    }
    if let Some(k) = cfg.debug.flip_u {
        notes.push(format!(
            "negative control: u^{} has its sign flipped; failures are expected",
            k + 2
        ));
    }
    let summary = Summary {
        passed: results.iter().filter(|c| c.status == Status::Pass).count(),
        failed: results.iter().filter(|c| c.status == Status::Fail).count(),
        heuristic: results
            .iter()
            .filter(|c| c.status == Status::HeuristicPass)
            .count(),
    };
    let metadata = RunMetadata {
        tool: "holocert".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        fixture: cfg.fixture.clone(),
        n,
        dim_h: spec.dim_h(),
        dim_manifold: n + 4,
        max_order,
        mode: cfg.mode,
        seed: cfg.seed,
        generators: spec.basis().to_vec(),
        expected_dimension: spec.dim_h() + 2 * n + 1,
        holonomy_dimension: ctx.holonomy.as_ref().map(|h| h.span.dim()),
        notes,
        total_millis: cfg.timings.then(|| started.elapsed().as_millis() as u64),
    };
    Ok(CheckReport {
        metadata,
        checks: results,
        summary,
    })
}
