//! Report types and their JSON and text renderings.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::curvature::EnumerationMode;
use crate::error::{Error, Result};
use crate::matrix::RatMatrix;

use super::config::ReportFormat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// Passed a search that can only refute, never prove.
    HeuristicPass,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::HeuristicPass => "HEURISTIC-PASS",
        }
    }
}

/// One offending component: 1-based indices plus both sides of the identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub indices: Vec<usize>,
    pub expected: String,
    pub actual: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    /// The identity being checked, in index notation.
    pub location: String,
    pub detail: String,
    /// First few failures; `failures` counts all of them.
    pub witnesses: Vec<Witness>,
    pub failures: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub tool: String,
    pub version: String,
    pub fixture: Option<String>,
    pub n: usize,
    pub dim_h: usize,
    pub dim_manifold: usize,
    pub max_order: usize,
    pub mode: EnumerationMode,
    pub seed: u64,
    pub generators: Vec<RatMatrix>,
    pub expected_dimension: usize,
    pub holonomy_dimension: Option<usize>,
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub total_millis: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub heuristic: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub metadata: RunMetadata,
    pub checks: Vec<CheckResult>,
    pub summary: Summary,
}

impl CheckReport {
    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// `true` when no exact check failed.
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_passed() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_text(&self) -> String {
        let m = &self.metadata;
        let mut out = String::new();
        let _ = writeln!(out, "{} {} holonomy verification", m.tool, m.version);
        for note in &m.notes {
            let _ = writeln!(out, "note: {note}");
        }
        let _ = writeln!(
            out,
            "input: {} n={} N={} dim={} max_order={} mode={} seed={}",
            m.fixture.as_deref().unwrap_or("config"),
            m.n,
            m.dim_h,
            m.dim_manifold,
            m.max_order,
            match m.mode {
                EnumerationMode::Pruned => "pruned",
                EnumerationMode::Exhaustive => "exhaustive",
            },
            m.seed
        );
        let _ = writeln!(
            out,
            "holonomy dimension: {} (g^h: {})",
            m.holonomy_dimension
                .map_or_else(|| "not computed".to_string(), |d| d.to_string()),
            m.expected_dimension
        );
        let _ = writeln!(out);
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{:<15} {:<32} {}",
                c.status.label(),
                c.name,
                c.location
            );
            if !c.detail.is_empty() {
                let _ = writeln!(out, "{:15} {}", "", c.detail);
            }
            for w in &c.witnesses {
                let idx: Vec<String> = w.indices.iter().map(ToString::to_string).collect();
                let _ = writeln!(
                    out,
                    "{:15} at ({}): expected {}, got {}",
                    "",
                    idx.join(","),
                    w.expected,
                    w.actual
                );
            }
            if c.failures > c.witnesses.len() {
                let _ = writeln!(out, "{:15} ... {} more", "", c.failures - c.witnesses.len());
            }
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "\nsummary: {} passed, {} failed, {} heuristic",
            s.passed, s.failed, s.heuristic
        );
        out
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Json => self.to_json(),
            ReportFormat::Text => self.to_text(),
        }
    }
}

/// Writes the report in the given format.
pub fn emit_report(report: &CheckReport, format: ReportFormat, path: &Path) -> Result<()> {
    fs::write(path, report.render(format)).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}
