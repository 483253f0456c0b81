use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use qhier_core::random::OperatorSampler;
use qhier_core::Dynamics;

use crate::config::{Format, OutputJson, RunConfig};
use crate::error::CliError;
use crate::io::{read_json, write_text};
use crate::report::{decimal, CheckRecord, Report, Timing};
use crate::suites::{registry, Check, Ctx};

#[derive(Debug, Clone, Default)]
pub struct VerifyArgs {
    pub config: PathBuf,
    pub suites: Vec<String>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

/// Loads the config and applies command-line overrides.
pub fn load(args: &VerifyArgs) -> Result<RunConfig, CliError> {
    let mut config: RunConfig = read_json(&args.config)?;
    if !args.suites.is_empty() {
        config.suites = args.suites.clone();
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if args.out.is_some() || args.format.is_some() {
        let mut out = config.output.take().unwrap_or(OutputJson {
            path: None,
            format: Format::Json,
        });
        if let Some(p) = &args.out {
            out.path = Some(p.clone());
        }
        if let Some(f) = args.format {
            out.format = f;
        }
        config.output = Some(out);
    }
    config.validate()?;
    Ok(config)
}

fn digest(config: &RunConfig, name: &str, seed: u64) -> String {
    let mut h = Sha256::new();
    h.update(name.as_bytes());
    h.update(seed.to_le_bytes());
    h.update(serde_json::to_vec(&config.system).expect("serializable"));
    h.update(serde_json::to_vec(&config.times).expect("serializable"));
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn failed(name: &str, suite: &str, identity: &str, digest: String, detail: String) -> CheckRecord {
    CheckRecord {
        name: name.to_string(),
        suite: suite.to_string(),
        identity: identity.to_string(),
        inputs_digest: digest,
        residual: decimal(f64::INFINITY),
        tolerance: decimal(0.0),
        passed: false,
        detail,
    }
}

fn run_check(ctx: &Ctx, config: &RunConfig, index: usize, check: &Check) -> (CheckRecord, f64) {
    let seed = config.seed ^ index as u64;
    let digest = digest(config, check.name, seed);
    let tolerance = config.tolerances.get(check.name).copied().unwrap_or(check.tolerance);
    let start = Instant::now();
    let mut sampler = OperatorSampler::new(seed);
    let outcome = (check.run)(ctx, &mut sampler);
    let seconds = start.elapsed().as_secs_f64();
    let record = match outcome {
        Ok(m) => CheckRecord {
            name: check.name.to_string(),
            suite: check.suite.to_string(),
            identity: check.identity.to_string(),
            inputs_digest: digest,
            residual: decimal(m.residual),
            tolerance: decimal(tolerance),
            passed: m.ok && m.residual <= tolerance,
            detail: m.detail,
        },
        Err(e) => {
            let mut r = failed(check.name, check.suite, check.identity, digest, e.to_string());
            r.tolerance = decimal(tolerance);
            r
        }
    };
    (record, seconds)
}

/// Runs the selected checks. An invalid system yields a single failed
/// `system-validation` record.
pub fn run(config: RunConfig) -> Result<Report, CliError> {
    let start = Instant::now();
    let spec = config.system.to_spec()?;
    let ctx = spec
        .and_then(Dynamics::new)
        .and_then(|dy| Ctx::new(dy, config.times.clone()));
    let ctx = match ctx {
        Ok(ctx) => ctx,
        Err(e) => {
            let record = failed(
                "system-validation",
                "system",
                "Hermitian, exchange-symmetric, within the dimension cap",
                digest(&config, "system-validation", config.seed),
                e.to_string(),
            );
            let timing = Timing {
                total_seconds: start.elapsed().as_secs_f64(),
                checks: BTreeMap::new(),
            };
            return Ok(Report::new(config, vec![record], timing));
        }
    };
    let selected: Vec<(usize, Check)> = registry()
        .into_iter()
        .enumerate()
        .filter(|(_, c)| config.suites.is_empty() || config.suites.iter().any(|s| s == c.suite))
        .collect();
    let results: Vec<(CheckRecord, f64)> = selected
        .par_iter()
        .map(|(i, c)| run_check(&ctx, &config, *i, c))
        .collect();
    let mut checks = Vec::with_capacity(results.len());
    let mut times = BTreeMap::new();
    for (record, seconds) in results {
        times.insert(record.name.clone(), seconds);
        checks.push(record);
    }
    let timing = Timing {
        total_seconds: start.elapsed().as_secs_f64(),
        checks: times,
    };
    Ok(Report::new(config, checks, timing))
}

/// Runs a campaign and writes the report; returns the exit status.
pub fn cmd_verify(args: &VerifyArgs) -> Result<i32, CliError> {
    let config = load(args)?;
    let format = config.format();
    let out = config.out_path().cloned();
    let report = run(config)?;
    let text = match format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    match out {
        Some(p) => write_text(&p, &text)?,
        None => print!("{text}"),
    }
    Ok(if report.all_passed() { 0 } else { 1 })
}
