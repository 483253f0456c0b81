use qhier_core::cumulants::bbgky_cumulant;
use qhier_core::hierarchies::{
    bbgky_cumulant_bound, bbgky_evolve, bbgky_norm_constant, dual_bbgky_evolve, dual_norm_constant, von_neumann_bound,
    von_neumann_evolve,
};
use qhier_core::random::OperatorSampler;
use qhier_core::NParticleOperator;

use super::{observables, states, Check, Ctx, Measure};

const INPUTS: usize = 50;
const ALPHA: f64 = 3.0;
const GAMMA: f64 = 0.3;
const T_MAX: f64 = 3.0;

pub(super) fn checks() -> Vec<Check> {
    vec![
        Check {
            name: "von-neumann-bound",
            suite: "bounds",
            identity: "‖(𝔄_t(f))ₙ‖₁ ≤ n! e^{2n+1} cⁿ, c = maxₖ‖fₖ‖₁ ≥ 1",
            tolerance: 1.0,
            run: von_neumann,
        },
        Check {
            name: "bbgky-cumulant-bound",
            suite: "bounds",
            identity: "‖𝔄_{1+n}(t)f_{s+n}‖₁ ≤ n! e^{n+2} ‖f_{s+n}‖₁",
            tolerance: 1.0,
            run: bbgky_cumulant_estimate,
        },
        Check {
            name: "bbgky-norm-bound",
            suite: "bounds",
            identity: "‖U(t)F‖_α ≤ e²(1 − e/α)⁻¹ ‖F‖_α",
            tolerance: 1.0,
            run: bbgky_norm,
        },
        Check {
            name: "dual-norm-bound",
            suite: "bounds",
            identity: "‖U⁺(t)G‖_γ ≤ e²(1 − γe)⁻¹ ‖G‖_γ",
            tolerance: 1.0,
            run: dual_norm,
        },
    ]
}

type R = Result<Measure, qhier_core::Error>;

fn von_neumann(ctx: &Ctx, s: &mut OperatorSampler) -> R {
    let mut worst: f64 = 0.0;
    for _ in 0..INPUTS {
        let scale = s.uniform(1.0, 3.0);
        let f = s.density_sequence(ctx.d(), ctx.n_max(), ALPHA, scale);
        let c = f.max_trace_norm();
        let t = s.time(T_MAX);
        let r = von_neumann_evolve(&ctx.dy, t, &f)?.sequence;
        for n in 1..=ctx.n_max() {
            worst = worst.max(r.entry(n).trace_norm() / von_neumann_bound(n, c));
        }
    }
    Ok(Measure::residual(worst))
}

fn bbgky_cumulant_estimate(ctx: &Ctx, s: &mut OperatorSampler) -> R {
    let mut worst: f64 = 0.0;
    let nm = ctx.n_max();
    for _ in 0..INPUTS {
        let t = s.time(T_MAX);
        for sv in 1..=nm {
            for n in 0..=nm - sv {
                let f = NParticleOperator::on_first(sv + n, ctx.d(), s.symmetric_hermitian(ctx.d(), sv + n))?;
                let a = bbgky_cumulant(&ctx.dy, t, sv, n, &f)?;
                worst = worst.max(a.trace_norm() / f.trace_norm() / bbgky_cumulant_bound(n));
            }
        }
    }
    Ok(Measure::residual(worst))
}

fn bbgky_norm(ctx: &Ctx, s: &mut OperatorSampler) -> R {
    let mut worst: f64 = 0.0;
    for _ in 0..INPUTS {
        let f = states(s, ctx);
        let t = s.time(T_MAX);
        let u = bbgky_evolve(&ctx.dy, t, &f)?.sequence;
        worst = worst.max(u.norm() / (bbgky_norm_constant(ALPHA) * f.norm()));
    }
    Ok(Measure::residual(worst))
}

fn dual_norm(ctx: &Ctx, s: &mut OperatorSampler) -> R {
    let mut worst: f64 = 0.0;
    for _ in 0..INPUTS {
        let g = observables(s, ctx);
        let t = s.time(T_MAX);
        let u = dual_bbgky_evolve(&ctx.dy, t, &g)?.sequence;
        worst = worst.max(u.norm() / (dual_norm_constant(GAMMA) * g.norm()));
    }
    Ok(Measure::residual(worst))
}
