use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use qhier_core::hierarchies::{self, Formula, Hierarchy};
use qhier_core::{Dynamics, SequenceKind};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::io::{read_json, write_text, SequenceJson};
use crate::report::SCHEMA;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum FormulaArg {
    Expansion,
    Conjugated,
    SecondOrder,
}

impl From<FormulaArg> for Formula {
    fn from(f: FormulaArg) -> Self {
        match f {
            FormulaArg::Expansion => Formula::Expansion,
            FormulaArg::Conjugated => Formula::Conjugated,
            FormulaArg::SecondOrder => Formula::SecondOrder,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum HierarchyArg {
    VonNeumann,
    Bbgky,
    Dual,
}

impl From<HierarchyArg> for Hierarchy {
    fn from(h: HierarchyArg) -> Self {
        match h {
            HierarchyArg::VonNeumann => Hierarchy::VonNeumann,
            HierarchyArg::Bbgky => Hierarchy::Bbgky,
            HierarchyArg::Dual => Hierarchy::Dual,
        }
    }
}

#[derive(Debug, Clone)]
pub struct EvolveArgs {
    pub config: PathBuf,
    pub state: PathBuf,
    pub formula: FormulaArg,
    /// Defaults to BBGKY for states and its dual for observables.
    pub hierarchy: Option<HierarchyArg>,
    /// Defaults to the config's times.
    pub times: Vec<f64>,
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolvedJson {
    pub t: f64,
    pub sequence: SequenceJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolveOutput {
    pub schema: u32,
    pub hierarchy: HierarchyArg,
    pub formula: FormulaArg,
    pub truncation: usize,
    pub results: Vec<EvolvedJson>,
}

pub fn run(args: &EvolveArgs) -> Result<EvolveOutput, CliError> {
    let config: RunConfig = read_json(&args.config)?;
    let spec = config
        .system
        .to_spec()?
        .map_err(|e| CliError::Config(format!("system: {e}")))?;
    let dy = Dynamics::new(spec)?;
    let input: SequenceJson = read_json(&args.state)?;
    let x = input.to_sequence(&args.state.display().to_string())?;
    let hierarchy = args.hierarchy.unwrap_or(match x.kind() {
        SequenceKind::State => HierarchyArg::Bbgky,
        SequenceKind::Observable => HierarchyArg::Dual,
    });
    let times = if args.times.is_empty() { config.times.clone() } else { args.times.clone() };
    if let Some(t) = times.iter().find(|t| !t.is_finite()) {
        return Err(CliError::Config(format!("time {t} is not finite")));
    }
    let mut results = Vec::with_capacity(times.len());
    let mut truncation = x.n_max();
    for t in times {
        let r = hierarchies::evolve(&dy, hierarchy.into(), args.formula.into(), t, &x)?;
        truncation = r.truncation;
        results.push(EvolvedJson {
            t,
            sequence: SequenceJson::from_sequence(&r.sequence),
        });
    }
    Ok(EvolveOutput {
        schema: SCHEMA,
        hierarchy,
        formula: args.formula,
        truncation,
        results,
    })
}

pub fn cmd_evolve(args: &EvolveArgs) -> Result<i32, CliError> {
    let out = run(args)?;
    let mut text = serde_json::to_string_pretty(&out).expect("serializable");
    text.push('\n');
    write_text(&args.out, &text)?;
    Ok(0)
}
