use qhier_core::cumulants::{bbgky_cumulant, interaction_term, DEFAULT_STEPS};
use qhier_core::hierarchies::{
    annihilation, bbgky_evolve, bbgky_evolve_conjugated, bbgky_generator, exp_ladder, marginals_of_state,
    second_order_reexpansion, sequence_generator_check, Ladder, Sign,
};
use qhier_core::linalg::{min_eigenvalue, partial_trace, trace_norm};
use qhier_core::random::OperatorSampler;
use qhier_core::NParticleOperator;

use super::{convergence, factorial, states, trace_tail, Check, Ctx, Measure};

pub(super) fn checks() -> Vec<Check> {
    vec![
        Check {
            name: "marginal-consistency",
            suite: "bbgky",
            identity: "(N−s)!(U(t)F)_s = Tr_{s+1..N} 𝒢(−t)f_N",
            tolerance: 1e-9,
            run: marginals,
        },
        Check {
            name: "bbgky-conjugated",
            suite: "bbgky",
            identity: "U(t) = e^{𝔞}𝒢(−t)e^{−𝔞}",
            tolerance: 1e-9,
            run: conjugated,
        },
        Check {
            name: "bbgky-second-order",
            suite: "bbgky",
            identity: "U(t) = 𝔄₁ + Σ Tr Σ_Z (−1)^{n−|Z|} 𝔄₂(t,Y,Z)",
            tolerance: 1e-9,
            run: second_order,
        },
        Check {
            name: "bbgky-group-law",
            suite: "bbgky",
            identity: "U(t₁)U(t₂) = U(t₁+t₂)",
            tolerance: 1e-9,
            run: group_law,
        },
        Check {
            name: "bbgky-generator-limit",
            suite: "bbgky",
            identity: "(1/h)(U(h)F − F) → 𝔅F",
            tolerance: 1e-3,
            run: generator_limit,
        },
        Check {
            name: "bbgky-generator-conjugation",
            suite: "bbgky",
            identity: "𝔅 = e^{𝔞}(−𝒩)e^{−𝔞}",
            tolerance: 1e-10,
            run: generator_conjugation,
        },
        Check {
            name: "annihilation-commutator",
            suite: "bbgky",
            identity: "(𝔞𝒢(−t) − 𝒢(−t)𝔞)F)_s = Tr_{s+1} 𝔄₂(t,Y,s+1)F_{s+1}",
            tolerance: 1e-10,
            run: commutator,
        },
        Check {
            name: "traced-one-body-generator",
            suite: "bbgky",
            identity: "Tr_{s+1} 𝒩₁(s+1)F_{s+1} = 0",
            tolerance: 1e-10,
            run: traced_one_body,
        },
        Check {
            name: "marginal-positivity",
            suite: "bbgky",
            identity: "F_s ≥ 0 ⇒ (U(t)F)_s ≥ 0 for marginals of a state",
            tolerance: 1e-10,
            run: positivity,
        },
    ]
}

type R = Result<Measure, qhier_core::Error>;

fn marginals(ctx: &Ctx, s: &mut OperatorSampler) -> R {
    let n = ctx.n_max();
    let rho = NParticleOperator::on_first(n, ctx.d(), s.symmetric_density(ctx.d(), n))?;
    let marg = marginals_of_state(&rho, 3.0)?;
    let mut worst: f64 = 0.0;
    for &t in &ctx.times {
        let u = bbgky_evolve(&ctx.dy, t, &marg)?.sequence;
        let evolved = ctx.dy.evolve_state(t, &rho)?;
        for sv in 1..=n {
            let direct = trace_tail(&evolved, sv)?;
            let scaled = u.entry(sv).data() * qhier_core::C64::new(factorial(n - sv), 0.0);
            worst = worst.max(trace_norm(&(scaled - direct)));
        }
    }
    Ok(Measure::residual(worst))
}

fn conjugated(ctx: &Ctx, s: &mut OperatorSampler) -> R {
    let f = states(s, ctx);
    let mut worst: f64 = 0.0;
    for &t in &ctx.times {
        let a = bbgky_evolve(&ctx.dy, t, &f)?.sequence;
        let b = bbgky_evolve_conjugated(&ctx.dy, t, &f)?.sequence;
        worst = worst.max(a.max_trace_distance(&b)?);
    }
    Ok(Measure::residual(worst))
}

fn second_order(ctx: &Ctx, s: &mut OperatorSampler) -> R {
    let f = states(s, ctx);
    let mut worst: f64 = 0.0;
    for &t in &ctx.times {
        let a = bbgky_evolve(&ctx.dy, t, &f)?.sequence;
        let b = second_order_reexpansion(&ctx.dy, t, &f)?.sequence;
        worst = worst.max(a.max_trace_distance(&b)?);
    }
    Ok(Measure::residual(worst))
}

fn group_law(ctx: &Ctx, s: &mut OperatorSampler) -> R {
    let f = states(s, ctx);
    let mut worst: f64 = 0.0;
    for (t1, t2) in ctx.time_pairs() {
        let two = bbgky_evolve(&ctx.dy, t1, &bbgky_evolve(&ctx.dy, t2, &f)?.sequence)?;
        let one = bbgky_evolve(&ctx.dy, t1 + t2, &f)?;
        worst = worst.max(two.sequence.max_trace_distance(&one.sequence)?);
    }
    Ok(Measure::residual(worst))
}

fn generator_limit(ctx: &Ctx, s: &mut OperatorSampler) -> R {
    let f = states(s, ctx);
    let gen = bbgky_generator(&ctx.dy, &f)?;
    let report = sequence_generator_check(&DEFAULT_STEPS, &f, &gen, |h| Ok(bbgky_evolve(&ctx.dy, h, &f)?.sequence))?;
    Ok(convergence(&report))
}

fn generator_conjugation(ctx: &Ctx, s: &mut OperatorSampler) -> R {
    let f = states(s, ctx);
    let inner = exp_ladder(Sign::Minus, Ladder::Annihilation, &f)?;
    let conj = exp_ladder(Sign::Plus, Ladder::Annihilation, &ctx.dy.generator_state_sequence(&inner)?)?;
    Ok(Measure::residual(conj.max_trace_distance(&bbgky_generator(&ctx.dy, &f)?)?))
}

fn commutator(ctx: &Ctx, s: &mut OperatorSampler) -> R {
    let f = states(s, ctx);
    let mut worst: f64 = 0.0;
    for &t in &ctx.times {
        let lhs = annihilation(&ctx.dy.evolve_state_sequence(t, &f)?)?
            .sub(&ctx.dy.evolve_state_sequence(t, &annihilation(&f)?)?)?;
        for sv in 1..ctx.n_max() {
            let a2 = bbgky_cumulant(&ctx.dy, t, sv, 1, f.entry(sv + 1))?;
            let rhs = trace_tail(&a2, sv)?;
            worst = worst.max(trace_norm(&(lhs.entry(sv).data() - rhs)));
        }
    }
    Ok(Measure::residual(worst))
}

fn traced_one_body(ctx: &Ctx, s: &mut OperatorSampler) -> R {
    let f = states(s, ctx);
    let mut worst: f64 = 0.0;
    for sv in 0..ctx.n_max() {
        let n1 = interaction_term(&ctx.dy, &[sv + 1], f.entry(sv + 1))?;
        worst = worst.max(partial_trace(&n1, &[sv + 1])?.trace_norm());
    }
    Ok(Measure::residual(worst))
}

fn positivity(ctx: &Ctx, s: &mut OperatorSampler) -> R {
    let n = ctx.n_max();
    let rho = NParticleOperator::on_first(n, ctx.d(), s.symmetric_density(ctx.d(), n))?;
    let marg = marginals_of_state(&rho, 3.0)?;
    let mut worst: f64 = 0.0;
    for &t in &ctx.times {
        let u = bbgky_evolve(&ctx.dy, t, &marg)?.sequence;
        for sv in 1..=n {
            worst = worst.max(-min_eigenvalue(u.entry(sv).data()));
        }
    }
    Ok(Measure::residual(worst.max(0.0)))
}
