use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::io::SystemJson;
use crate::suites::{registry, SUITES};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default = "default_format")]
    pub format: Format,
}

fn default_format() -> Format {
    Format::Json
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub system: SystemJson,
    #[serde(default = "default_times")]
    pub times: Vec<f64>,
    #[serde(default)]
    pub seed: u64,
    /// Per-check overrides of the built-in tolerances.
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    /// Empty selects every suite.
    #[serde(default)]
    pub suites: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputJson>,
}

pub const DEFAULT_TIMES: [f64; 3] = [0.1, 0.7, 1.3];

fn default_times() -> Vec<f64> {
    DEFAULT_TIMES.to_vec()
}

impl RunConfig {
    /// Checks everything that does not need the model built.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.times.is_empty() {
            return Err(CliError::Config("times: at least one time is needed".into()));
        }
        if let Some(t) = self.times.iter().find(|t| !t.is_finite()) {
            return Err(CliError::Config(format!("times: {t} is not finite")));
        }
        for s in &self.suites {
            if !SUITES.contains(&s.as_str()) {
                return Err(CliError::Config(format!(
                    "suites: unknown suite `{s}` (known: {})",
                    SUITES.join(", ")
                )));
            }
        }
        let names: Vec<&str> = registry().iter().map(|c| c.name).collect();
        for (name, tol) in &self.tolerances {
            if !names.contains(&name.as_str()) {
                return Err(CliError::Config(format!("tolerances.{name}: no such check")));
            }
            if !(tol.is_finite() && *tol > 0.0) {
                return Err(CliError::Config(format!("tolerances.{name}: must be positive, got {tol}")));
            }
        }
        Ok(())
    }

    pub fn format(&self) -> Format {
        self.output.as_ref().map_or(Format::Json, |o| o.format)
    }

    pub fn out_path(&self) -> Option<&PathBuf> {
        self.output.as_ref().and_then(|o| o.path.as_ref())
    }
}
