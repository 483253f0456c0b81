use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::config::RunConfig;

pub const SCHEMA: u32 = 1;

/// One check's outcome. Residuals are decimal strings with 17 significant
/// digits so the payload round-trips exactly.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub suite: String,
    pub identity: String,
    pub inputs_digest: String,
    pub residual: String,
    pub tolerance: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

/// Everything that depends only on the configuration and seed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Payload {
    pub seed: u64,
    pub config: RunConfig,
    pub summary: Summary,
    pub checks: Vec<CheckRecord>,
}

/// Wall-clock seconds, kept apart from the payload.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timing {
    pub total_seconds: f64,
    pub checks: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub payload: Payload,
    pub timing: Timing,
}

pub fn decimal(x: f64) -> String {
    format!("{x:.16e}")
}

impl Report {
    pub fn new(config: RunConfig, checks: Vec<CheckRecord>, timing: Timing) -> Self {
        let passed = checks.iter().filter(|c| c.passed).count();
        let summary = Summary {
            total: checks.len(),
            passed,
            failed: checks.len() - passed,
        };
        Self {
            schema: SCHEMA,
            payload: Payload {
                seed: config.seed,
                config,
                summary,
                checks,
            },
            timing,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.payload.summary.failed == 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report is serializable");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let p = &self.payload;
        for c in &p.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            let _ = write!(
                s,
                "{mark} {:<14} {:<32} residual {} tol {}",
                c.suite, c.name, c.residual, c.tolerance
            );
            if !c.detail.is_empty() {
                let _ = write!(s, " ({})", c.detail);
            }
            s.push('\n');
        }
        let _ = writeln!(
            s,
            "seed {}: {} checks, {} passed, {} failed",
            p.seed, p.summary.total, p.summary.passed, p.summary.failed
        );
        s
    }
}
