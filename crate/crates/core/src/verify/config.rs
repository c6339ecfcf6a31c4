//! Run configuration: the JSON schema read by `verify --config` and the
//! built-in fixtures.

use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::curvature::EnumerationMode;
use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::metric::{HSpec, MetricOptions};
use crate::rational::{int, rat};

use super::CHECK_NAMES;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    #[default]
    Json,
    Text,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleConfig {
    /// Differencing step for the agreement checks.
    pub h: f64,
    /// Relative tolerance on entries of magnitude at least `1e-3`, absolute below.
    pub tolerance: f64,
    pub sample_points: usize,
    /// Coarse step of the second-order convergence check; the fine step is half.
    pub convergence_h: f64,
    pub eps: f64,
    pub steps: usize,
    /// Loop transport passes within `transport_factor * eps`.
    pub transport_factor: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            h: 1e-4,
            tolerance: 1e-6,
            sample_points: 3,
            convergence_h: 1e-2,
            eps: 1e-3,
            steps: 100,
            transport_factor: 5.0,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DebugConfig {
    /// Negate `u^î` for the `k`-th middle coordinate (1-based, `1..=n`).
    pub flip_u: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub n: Option<usize>,
    pub generators: Vec<RatMatrix>,
    /// Built-in input; overrides `n` and `generators` when set.
    pub fixture: Option<String>,
    pub max_order: Option<usize>,
    pub mode: EnumerationMode,
    /// Subset of the check names; all checks when absent.
    pub checks: Option<Vec<String>>,
    pub oracle: OracleConfig,
    pub seed: u64,
    pub probe_samples: usize,
    pub permutation_check: bool,
    /// Record per-check wall time in the report; makes reports nondeterministic.
    pub timings: bool,
    pub format: ReportFormat,
    pub output: Option<PathBuf>,
    pub debug: DebugConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n: None,
            generators: Vec::new(),
            fixture: None,
            max_order: None,
            mode: EnumerationMode::Pruned,
            checks: None,
            oracle: OracleConfig::default(),
            seed: 0,
            probe_samples: 4,
            permutation_check: true,
            timings: false,
            format: ReportFormat::Json,
            output: None,
            debug: DebugConfig::default(),
        }
    }
}

/// Parses and validates a configuration file.
pub fn parse_config(path: impl AsRef<Path>) -> Result<RunConfig> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_config_str(&text).map_err(|e| match e {
        Error::Json(j) => Error::Input(format!("{}: {j}", path.display())),
        other => other,
    })
}

pub fn parse_config_str(text: &str) -> Result<RunConfig> {
    let cfg: RunConfig = serde_json::from_str(text)?;
    cfg.validate()?;
    Ok(cfg)
}

impl RunConfig {
    pub fn fixture(name: &str) -> Self {
        RunConfig {
            fixture: Some(name.to_string()),
            ..RunConfig::default()
        }
    }

    /// Checks everything that can be checked without running the pipeline.
    pub fn validate(&self) -> Result<()> {
        let spec = self.spec()?;
        if let Some((a, b)) = spec.closure_defect() {
            return Err(Error::Input(format!(
                "generators do not span a subalgebra: [A_{a}, A_{b}] leaves the span"
            )));
        }
        if let Some(names) = &self.checks {
            for name in names {
                if !CHECK_NAMES.contains(&name.as_str()) {
                    return Err(Error::Input(format!("unknown check name {name:?}")));
                }
            }
        }
        if let Some(k) = self.debug.flip_u {
            if k == 0 || k > spec.n() {
                return Err(Error::Input(format!(
                    "debug.flip_u must lie in 1..={}, got {k}",
                    spec.n()
                )));
            }
        }
        let o = &self.oracle;
        for (name, v) in [
            ("h", o.h),
            ("tolerance", o.tolerance),
            ("convergence_h", o.convergence_h),
            ("eps", o.eps),
            ("transport_factor", o.transport_factor),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Input(format!(
                    "oracle.{name} must be positive, got {v}"
                )));
            }
        }
        if o.steps < 100 {
            return Err(Error::Input(format!(
                "oracle.steps must be at least 100, got {}",
                o.steps
            )));
        }
        Ok(())
    }

    /// The input `h`, either from the fixture or from `n` and `generators`.
    pub fn spec(&self) -> Result<HSpec> {
        match &self.fixture {
            Some(name) => fixture_spec(name, self.seed),
            None => {
                let n = self
                    .n
                    .ok_or_else(|| Error::Input("either `fixture` or `n` must be given".into()))?;
                HSpec::new(n, self.generators.clone())
            }
        }
    }

    /// `max_order`, defaulting to `N + 1`.
    pub fn resolved_max_order(&self, spec: &HSpec) -> usize {
        self.max_order.unwrap_or(spec.dim_h() + 1)
    }

    pub fn metric_options(&self) -> MetricOptions {
        MetricOptions {
            flip_u: self.debug.flip_u.map(|k| k - 1),
        }
    }

    pub fn selected(&self, name: &str) -> bool {
        self.checks
            .as_ref()
            .is_none_or(|names| names.iter().any(|c| c == name))
    }
}

/// Names accepted by [`fixture_spec`], besides `random:<n>`.
pub const FIXTURES: &[&str] = &["F0", "F1", "F2", "F3", "F4"];

fn j_block(n: usize, at: usize, scale: i64) -> RatMatrix {
    let mut m = RatMatrix::zeros(n, n);
    m[(at, at + 1)] = int(-scale);
    m[(at + 1, at)] = int(scale);
    m
}

fn elementary(n: usize, i: usize, j: usize) -> RatMatrix {
    let mut m = RatMatrix::zeros(n, n);
    m[(i, j)] = int(-1);
    m[(j, i)] = int(1);
    m
}

/// Built-in fixtures. `random:<n>` draws one skew matrix from `seed`.
pub fn fixture_spec(name: &str, seed: u64) -> Result<HSpec> {
    match name {
        "F0" => HSpec::new(2, vec![]),
        "F1" => HSpec::new(2, vec![j_block(2, 0, 1)]),
        "F2" => {
            let a = j_block(4, 0, 1)
                .checked_add(&j_block(4, 2, 2))
                .expect("same size");
            HSpec::new(4, vec![a])
        }
        "F3" => HSpec::new(4, vec![j_block(4, 0, 1), j_block(4, 2, 1)]),
        "F4" => HSpec::new(
            3,
            vec![
                elementary(3, 0, 1),
                elementary(3, 0, 2),
                elementary(3, 1, 2),
            ],
        ),
        other => match other.strip_prefix("random:") {
            Some(n) => {
                let n: usize = n
                    .parse()
                    .map_err(|_| Error::Input(format!("bad random fixture size in {other:?}")))?;
                if n < 2 {
                    return Err(Error::Input(format!(
                        "random fixture needs n >= 2, got {n}"
                    )));
                }
                HSpec::new(n, vec![random_skew(n, seed)])
            }
            None => Err(Error::Input(format!(
                "unknown fixture {other:?}; expected one of {FIXTURES:?} or random:<n>"
            ))),
        },
    }
}

/// Nonzero skew matrix with entries `p/q`, `|p| ≤ 3`, `1 ≤ q ≤ 3`.
pub fn random_skew(n: usize, seed: u64) -> RatMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut m = RatMatrix::zeros(n, n);
        for i in 0..n {
            for j in i + 1..n {
                let v = rat(rng.gen_range(-3..=3), rng.gen_range(1..=3));
                m[(j, i)] = -v.clone();
                m[(i, j)] = v;
            }
        }
        if !m.is_zero() {
            return m;
        }
    }
}

/// Human-readable remarks attached to a fixture in reports.
pub fn fixture_note(name: &str) -> Option<&'static str> {
    match name {
        "F2" => Some(
            "h = span{diag(J, 2J)} is not the holonomy algebra of any Riemannian manifold; \
             the construction does not require it to be",
        ),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_have_expected_sizes() {
        let dims: Vec<(usize, usize)> = FIXTURES
            .iter()
            .map(|f| {
                let s = fixture_spec(f, 0).unwrap();
                (s.n(), s.dim_h())
            })
            .collect();
        assert_eq!(dims, vec![(2, 0), (2, 1), (4, 1), (4, 2), (3, 3)]);
        for f in FIXTURES {
            assert_eq!(fixture_spec(f, 0).unwrap().closure_defect(), None);
        }
    }

    #[test]
    fn random_fixture_is_seeded() {
        assert_eq!(random_skew(5, 7), random_skew(5, 7));
        assert_ne!(random_skew(5, 7), random_skew(5, 8));
        assert_eq!(random_skew(4, 1).is_skew(), None);
    }

    #[test]
    fn rejects_bad_input() {
        let err = parse_config_str(r#"{"n": 2, "generators": [[["0","1"],["1","0"]]]}"#)
            .unwrap_err()
            .to_string();
        assert!(
            err.contains("generator 1") && err.contains("(1, 2)"),
            "{err}"
        );

        let err = parse_config_str(
            r#"{"n": 2, "generators": [[["0","-1"],["1","0"]], [["0","-2"],["2","0"]]]}"#,
        )
        .unwrap_err()
        .to_string();
        assert!(
            err.contains("generator 2") && err.contains("dependent"),
            "{err}"
        );

        assert!(parse_config_str(r#"{"fixture": "F1", "checks": ["nope"]}"#).is_err());
        assert!(parse_config_str(r#"{"fixture": "F1", "bogus": 1}"#).is_err());
        assert!(parse_config_str(r#"{"fixture": "F9"}"#).is_err());
    }

    #[test]
    fn rejects_non_subalgebra() {
        let cfg = RunConfig {
            n: Some(3),
            generators: vec![elementary(3, 0, 1), elementary(3, 0, 2)],
            ..RunConfig::default()
        };
        assert!(cfg
            .validate()
            .unwrap_err()
            .to_string()
            .contains("subalgebra"));
    }

    #[test]
    fn fixture_f1_is_so2() {
        let cfg = parse_config_str(r#"{"fixture": "F1"}"#).unwrap();
        let spec = cfg.spec().unwrap();
        assert_eq!(spec.basis(), &[RatMatrix::from_ints(&[&[0, -1], &[1, 0]])]);
        assert_eq!(cfg.resolved_max_order(&spec), 2);
    }
}
