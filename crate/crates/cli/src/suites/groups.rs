use qhier_core::linalg::{min_eigenvalue, trace_norm};
use qhier_core::random::OperatorSampler;
use qhier_core::{bilinear_form, Matrix, NParticleOperator, C64};

use super::{max, observables, states, unit_hermitian, Check, Ctx, Measure};

pub(super) fn checks() -> Vec<Check> {
    vec![
        Check {
            name: "state-group-composition",
            suite: "group-laws",
            identity: "𝒢(−t₁)𝒢(−t₂)f = 𝒢(−t₁−t₂)f",
            tolerance: 1e-10,
            run: state_composition,
        },
        Check {
            name: "observable-group-composition",
            suite: "group-laws",
            identity: "𝒢(t₁)𝒢(t₂)g = 𝒢(t₁+t₂)g",
            tolerance: 1e-10,
            run: observable_composition,
        },
        Check {
            name: "state-isometry",
            suite: "group-laws",
            identity: "‖𝒢(−t)f‖₁ = ‖f‖₁",
            tolerance: 1e-10,
            run: state_isometry,
        },
        Check {
            name: "observable-isometry",
            suite: "group-laws",
            identity: "‖𝒢(t)g‖ = ‖g‖",
            tolerance: 1e-10,
            run: observable_isometry,
        },
        Check {
            name: "positivity",
            suite: "group-laws",
            identity: "f ≥ 0 ⇒ 𝒢(−t)f ≥ 0",
            tolerance: 1e-10,
            run: positivity,
        },
        Check {
            name: "continuity-at-zero",
            suite: "group-laws",
            identity: "‖𝒢(−t)f − f‖₁ → 0 as t → 0",
            tolerance: 1e-6,
            run: continuity,
        },
        Check {
            name: "state-generator-limit",
            suite: "group-laws",
            identity: "d/dt 𝒢(−t)f |₀ = −(i/ħ)(Hf − fH)",
            tolerance: 1e-6,
            run: state_generator,
        },
        Check {
            name: "observable-generator-limit",
            suite: "group-laws",
            identity: "d/dt 𝒢(t)g |₀ = −(i/ħ)(gH − Hg)",
            tolerance: 1e-6,
            run: observable_generator,
        },
        Check {
            name: "generator-duality",
            suite: "group-laws",
            identity: "⟨𝒩g|f⟩ = ⟨g|−𝒩f⟩",
            tolerance: 1e-8,
            run: generator_duality,
        },
    ]
}

type R = Result<Measure, qhier_core::Error>;

fn composition(ctx: &Ctx, s: &mut OperatorSampler, state: bool) -> R {
    let mut worst: f64 = 0.0;
    for n in 1..=ctx.n_max() {
        let f = unit_hermitian(s, ctx.d(), n);
        for (t1, t2) in ctx.time_pairs() {
            let ev = |t: f64, x: &NParticleOperator| {
                if state {
                    ctx.dy.evolve_state(t, x)
                } else {
                    ctx.dy.evolve_observable(t, x)
                }
            };
            let two = ev(t1, &ev(t2, &f)?)?;
            let one = ev(t1 + t2, &f)?;
            worst = worst.max(trace_norm(&(two.data() - one.data())));
        }
    }
    Ok(Measure::residual(worst))
}

fn state_composition(ctx: &Ctx, s: &mut OperatorSampler) -> R {
    composition(ctx, s, true)
}

fn observable_composition(ctx: &Ctx, s: &mut OperatorSampler) -> R {
    composition(ctx, s, false)
}

fn state_isometry(ctx: &Ctx, s: &mut OperatorSampler) -> R {
    let mut worst: f64 = 0.0;
    for n in 1..=ctx.n_max() {
        let f = NParticleOperator::on_first(n, ctx.d(), s.gaussian_matrix(ctx.d().pow(n as u32)))?;
        let f = f.scale(C64::new(1.0 / f.trace_norm(), 0.0));
        for &t in &ctx.times {
            worst = worst.max((ctx.dy.evolve_state(t, &f)?.trace_norm() - 1.0).abs());
        }
    }
    Ok(Measure::residual(worst))
}

fn observable_isometry(ctx: &Ctx, s: &mut OperatorSampler) -> R {
    let mut worst: f64 = 0.0;
    for n in 1..=ctx.n_max() {
        let g = NParticleOperator::on_first(n, ctx.d(), s.gaussian_matrix(ctx.d().pow(n as u32)))?;
        let g = g.scale(C64::new(1.0 / g.operator_norm(), 0.0));
        for &t in &ctx.times {
            worst = worst.max((ctx.dy.evolve_observable(t, &g)?.operator_norm() - 1.0).abs());
        }
    }
    Ok(Measure::residual(worst))
}

fn positivity(ctx: &Ctx, s: &mut OperatorSampler) -> R {
    let mut worst: f64 = 0.0;
    for n in 1..=ctx.n_max() {
        let rho = NParticleOperator::on_first(n, ctx.d(), s.density(ctx.d().pow(n as u32)))?;
        for &t in &ctx.times {
            worst = worst.max(-min_eigenvalue(ctx.dy.evolve_state(t, &rho)?.data()));
        }
    }
    Ok(Measure::residual(worst.max(0.0)))
}

fn continuity(ctx: &Ctx, s: &mut OperatorSampler) -> R {
    let mut worst: f64 = 0.0;
    for n in 1..=ctx.n_max() {
        let f = unit_hermitian(s, ctx.d(), n);
        let ft = ctx.dy.evolve_state(1e-8, &f)?;
        worst = worst.max(trace_norm(&(ft.data() - f.data())));
    }
    Ok(Measure::residual(worst))
}

/// Central difference with one Richardson step, relative trace-norm error.
fn richardson<F>(evolve: F, limit: &Matrix, h: f64) -> Result<f64, qhier_core::Error>
where
    F: Fn(f64) -> Result<Matrix, qhier_core::Error>,
{
    let central = |h: f64| -> Result<Matrix, qhier_core::Error> { Ok((evolve(h)? - evolve(-h)?) / C64::new(2.0 * h, 0.0)) };
    let est = (central(h / 2.0)? * C64::new(4.0, 0.0) - central(h)?) / C64::new(3.0, 0.0);
    let scale = trace_norm(limit);
    let err = trace_norm(&(est - limit));
    Ok(if scale > 0.0 { err / scale } else { err })
}

fn generator(ctx: &Ctx, s: &mut OperatorSampler, state: bool) -> R {
    let mut worst: f64 = 0.0;
    for n in 1..=ctx.n_max() {
        let f = unit_hermitian(s, ctx.d(), n);
        let rel = if state {
            let lim = ctx.dy.generator_state(&f)?;
            richardson(|h| Ok(ctx.dy.evolve_state(h, &f)?.into_data()), lim.data(), 1e-2)?
        } else {
            let lim = ctx.dy.generator_observable(&f)?;
            richardson(|h| Ok(ctx.dy.evolve_observable(h, &f)?.into_data()), lim.data(), 1e-2)?
        };
        worst = worst.max(rel);
    }
    Ok(Measure::residual(worst))
}

fn state_generator(ctx: &Ctx, s: &mut OperatorSampler) -> R {
    generator(ctx, s, true)
}

fn observable_generator(ctx: &Ctx, s: &mut OperatorSampler) -> R {
    generator(ctx, s, false)
}

fn generator_duality(ctx: &Ctx, s: &mut OperatorSampler) -> R {
    let f = states(s, ctx);
    let g = observables(s, ctx);
    let lhs = bilinear_form(&ctx.dy.generator_observable_sequence(&g)?, &f)?;
    let rhs = bilinear_form(&g, &ctx.dy.generator_state_sequence(&f)?)?;
    Ok(Measure::residual(max([(lhs - rhs).norm()])))
}
