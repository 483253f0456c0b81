use qhier_core::bilinear_form;
use qhier_core::hierarchies::{annihilation, bbgky_evolve, bbgky_generator, creation, dual_bbgky_evolve, dual_bbgky_generator};
use qhier_core::random::OperatorSampler;

use super::{observables, states, Check, Ctx, Measure};

const PAIRS: usize = 20;

pub(super) fn checks() -> Vec<Check> {
    vec![
        Check {
            name: "group-duality",
            suite: "duality",
            identity: "⟨U⁺(t)G|F⟩ = ⟨G|U(t)F⟩",
            tolerance: 1e-9,
            run: groups,
        },
        Check {
            name: "generator-duality",
            suite: "duality",
            identity: "⟨𝔅⁺G|F⟩ = ⟨G|𝔅F⟩",
            tolerance: 1e-8,
            run: generators,
        },
        Check {
            name: "ladder-adjointness",
            suite: "duality",
            identity: "⟨𝔞⁺G|F⟩ = ⟨G|𝔞F⟩",
            tolerance: 1e-10,
            run: ladders,
        },
    ]
}

type R = Result<Measure, qhier_core::Error>;

fn groups(ctx: &Ctx, s: &mut OperatorSampler) -> R {
    let mut worst: f64 = 0.0;
    for _ in 0..PAIRS {
        let f = states(s, ctx);
        let g = observables(s, ctx);
        let t = s.time(2.0);
        let lhs = bilinear_form(&dual_bbgky_evolve(&ctx.dy, t, &g)?.sequence, &f)?;
        let rhs = bilinear_form(&g, &bbgky_evolve(&ctx.dy, t, &f)?.sequence)?;
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(Measure::residual(worst))
}

fn generators(ctx: &Ctx, s: &mut OperatorSampler) -> R {
    let mut worst: f64 = 0.0;
    for _ in 0..PAIRS {
        let f = states(s, ctx);
        let g = observables(s, ctx);
        let lhs = bilinear_form(&dual_bbgky_generator(&ctx.dy, &g)?, &f)?;
        let rhs = bilinear_form(&g, &bbgky_generator(&ctx.dy, &f)?)?;
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(Measure::residual(worst))
}

fn ladders(ctx: &Ctx, s: &mut OperatorSampler) -> R {
    let mut worst: f64 = 0.0;
    for _ in 0..PAIRS {
        let f = states(s, ctx);
        let g = observables(s, ctx);
        let lhs = bilinear_form(&creation(&g)?, &f)?;
        let rhs = bilinear_form(&g, &annihilation(&f)?)?;
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(Measure::residual(worst))
}
