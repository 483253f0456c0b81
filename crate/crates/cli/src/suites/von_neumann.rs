use qhier_core::cumulants::DEFAULT_STEPS;
use qhier_core::hierarchies::{sequence_generator_check, von_neumann_evolve, von_neumann_generator};
use qhier_core::linalg::{kron, trace_norm};
use qhier_core::partitions::ClusterSet;
use qhier_core::random::OperatorSampler;
use qhier_core::{Direction, NParticleOperator, SequenceKind};

use super::{convergence, cumulant, first, single_entry, states, Check, Ctx, Measure};

pub(super) fn checks() -> Vec<Check> {
    vec![
        Check {
            name: "von-neumann-zero-time",
            suite: "von-neumann",
            identity: "𝔄₀(f) = f",
            tolerance: 1e-12,
            run: zero_time,
        },
        Check {
            name: "von-neumann-chaos",
            suite: "von-neumann",
            identity: "f = (0, f₁, 0, …) ⇒ (𝔄_t(f))ₙ = 𝔄ₙ(t,1,…,n) ∏ f₁(i)",
            tolerance: 1e-9,
            run: chaos,
        },
        Check {
            name: "von-neumann-group-law",
            suite: "von-neumann",
            identity: "𝔄_{t₁}(𝔄_{t₂}(f)) = 𝔄_{t₁+t₂}(f)",
            tolerance: 1e-9,
            run: group_law,
        },
        Check {
            name: "von-neumann-generator-limit",
            suite: "von-neumann",
            identity: "(1/h)(𝔄_h(f) − f) → 𝔑f",
            tolerance: 1e-3,
            run: generator_limit,
        },
    ]
}

type R = Result<Measure, qhier_core::Error>;

fn zero_time(ctx: &Ctx, s: &mut OperatorSampler) -> R {
    let f = states(s, ctx);
    let r = von_neumann_evolve(&ctx.dy, 0.0, &f)?;
    Ok(Measure::residual(r.sequence.max_trace_distance(&f)?))
}

fn chaos(ctx: &Ctx, s: &mut OperatorSampler) -> R {
    let d = ctx.d();
    let f1 = s.density(d);
    let f = single_entry(d, ctx.n_max(), SequenceKind::State, 3.0, 1, f1.clone())?;
    let mut worst: f64 = 0.0;
    for &t in &ctx.times {
        let r = von_neumann_evolve(&ctx.dy, t, &f)?.sequence;
        let mut prod = f1.clone();
        for n in 1..=ctx.n_max().min(3) {
            if n > 1 {
                prod = kron(&prod, &f1);
            }
            let target = NParticleOperator::on_first(n, d, prod.clone())?;
            let clusters = ClusterSet::atoms(&first(n))?;
            let oracle = cumulant(&ctx.dy, t, &clusters, Direction::Forward, &target)?;
            worst = worst.max(trace_norm(&(r.entry(n).data() - oracle.data())));
        }
    }
    Ok(Measure::residual(worst))
}

fn group_law(ctx: &Ctx, s: &mut OperatorSampler) -> R {
    let f = states(s, ctx);
    let mut worst: f64 = 0.0;
    for (t1, t2) in ctx.time_pairs() {
        let two = von_neumann_evolve(&ctx.dy, t1, &von_neumann_evolve(&ctx.dy, t2, &f)?.sequence)?;
        let one = von_neumann_evolve(&ctx.dy, t1 + t2, &f)?;
        worst = worst.max(two.sequence.max_trace_distance(&one.sequence)?);
    }
    Ok(Measure::residual(worst))
}

fn generator_limit(ctx: &Ctx, s: &mut OperatorSampler) -> R {
    let f = states(s, ctx);
    let gen = von_neumann_generator(&ctx.dy, &f)?;
    let report = sequence_generator_check(&DEFAULT_STEPS, &f, &gen, |h| Ok(von_neumann_evolve(&ctx.dy, h, &f)?.sequence))?;
    Ok(convergence(&report))
}
