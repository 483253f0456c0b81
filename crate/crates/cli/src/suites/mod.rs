//! Verification checks, grouped into suites. Every check draws its random
//! inputs from its own seeded sampler, so checks are independent and can run
//! in any order or in parallel.

use qhier_core::random::OperatorSampler;
use qhier_core::cumulants::{cumulant_apply, CumulantRequest};
use qhier_core::partitions::ClusterSet;
use qhier_core::{Direction, Dynamics, Matrix, NParticleOperator, OperatorSequence, C64};

mod bbgky;
mod bounds;
mod combinatorics;
mod cumulants;
mod dual;
mod duality;
mod groups;
mod von_neumann;

pub const SUITES: [&str; 8] = [
    "combinatorics",
    "group-laws",
    "cumulants",
    "von-neumann",
    "bbgky",
    "dual",
    "duality",
    "bounds",
];

pub struct Ctx {
    pub dy: Dynamics,
    /// The same system with every potential removed.
    pub free: Dynamics,
    pub times: Vec<f64>,
}

impl Ctx {
    pub fn new(dy: Dynamics, times: Vec<f64>) -> Result<Self, qhier_core::Error> {
        let free = Dynamics::new(dy.spec().free())?;
        Ok(Self { dy, free, times })
    }

    pub fn d(&self) -> usize {
        self.dy.d()
    }

    pub fn n_max(&self) -> usize {
        self.dy.n_max()
    }

    /// Ordered pairs of configured times.
    pub fn time_pairs(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        for &a in &self.times {
            for &b in &self.times {
                out.push((a, -b));
            }
        }
        out
    }
}

/// What a check measured. The check passes when `residual ≤ tolerance` and
/// `ok` holds (`ok` carries extra conditions such as a convergence order).
#[derive(Debug, Clone, PartialEq)]
pub struct Measure {
    pub residual: f64,
    pub ok: bool,
    pub detail: String,
}

impl Measure {
    pub fn residual(residual: f64) -> Self {
        Self {
            residual,
            ok: true,
            detail: String::new(),
        }
    }

    pub fn with_detail(mut self, detail: String) -> Self {
        self.detail = detail;
        self
    }
}

pub type CheckFn = fn(&Ctx, &mut OperatorSampler) -> Result<Measure, qhier_core::Error>;

pub struct Check {
    pub name: &'static str,
    pub suite: &'static str,
    /// The identity or estimate being checked, in formula form.
    pub identity: &'static str,
    pub tolerance: f64,
    pub run: CheckFn,
}

/// Every check, in a fixed order. A check's position here is its index for
/// seed derivation.
pub fn registry() -> Vec<Check> {
    let mut all = Vec::new();
    all.extend(combinatorics::checks());
    all.extend(groups::checks());
    all.extend(cumulants::checks());
    all.extend(von_neumann::checks());
    all.extend(bbgky::checks());
    all.extend(dual::checks());
    all.extend(duality::checks());
    all.extend(bounds::checks());
    all
}

fn max(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

/// Hermitian operator on `1..=n`, scaled to unit trace norm.
fn unit_hermitian(s: &mut OperatorSampler, d: usize, n: usize) -> NParticleOperator {
    let h = s.hermitian(d.pow(n as u32));
    let norm = qhier_core::linalg::trace_norm(&h);
    NParticleOperator::on_first(n, d, h / C64::new(norm, 0.0)).expect("side matches")
}

fn states(s: &mut OperatorSampler, ctx: &Ctx) -> OperatorSequence {
    s.density_sequence(ctx.d(), ctx.n_max(), 3.0, 1.0)
}

fn observables(s: &mut OperatorSampler, ctx: &Ctx) -> OperatorSequence {
    s.observable_sequence(ctx.d(), ctx.n_max(), 0.3)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn first(n: usize) -> Vec<usize> {
    (1..=n).collect()
}

/// Entry `x_{|labels|}` placed on `labels` inside `ambient`.
fn place(x: &OperatorSequence, labels: &[usize], ambient: &[usize]) -> Result<NParticleOperator, qhier_core::Error> {
    let op = NParticleOperator::new(labels.to_vec(), x.d(), x.entry(labels.len()).data().clone())?;
    qhier_core::linalg::embed(&op, ambient)
}

/// Trace over every label above `s`.
fn trace_tail(op: &NParticleOperator, s: usize) -> Result<Matrix, qhier_core::Error> {
    let traced: Vec<usize> = (s + 1..=op.n_particles()).collect();
    Ok(qhier_core::linalg::partial_trace(op, &traced)?.into_data())
}

fn cumulant(
    dy: &Dynamics,
    t: f64,
    clusters: &ClusterSet,
    direction: Direction,
    target: &NParticleOperator,
) -> Result<NParticleOperator, qhier_core::Error> {
    cumulant_apply(
        dy,
        &CumulantRequest {
            t,
            clusters,
            direction,
            target,
        },
    )
}

/// Final relative residual, with a convergence order of at least 0.9 when
/// the residuals are above round-off.
fn convergence(report: &qhier_core::cumulants::ConvergenceReport) -> Measure {
    let detail = match report.slope {
        Some(k) => format!("slope={k:.3}"),
        None => "exact".to_string(),
    };
    let mut m = Measure::residual(report.final_relative()).with_detail(detail);
    m.ok = report.slope.is_none_or(|k| k >= 0.9);
    m
}

/// A sequence with only entry `n` nonzero.
fn single_entry(
    d: usize,
    n_max: usize,
    kind: qhier_core::SequenceKind,
    weight: f64,
    n: usize,
    data: Matrix,
) -> Result<OperatorSequence, qhier_core::Error> {
    let mut entries = Vec::with_capacity(n_max + 1);
    for k in 0..=n_max {
        let side = qhier_core::linalg::dim_pow(d, k)?;
        entries.push(Matrix::zeros(side, side));
    }
    entries[n] = data;
    OperatorSequence::new(d, kind, weight, entries)
}
