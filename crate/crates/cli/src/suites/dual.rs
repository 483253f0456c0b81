use qhier_core::cumulants::DEFAULT_STEPS;
use qhier_core::hierarchies::{
    creation, dual_bbgky_evolve, dual_bbgky_generator, dual_evolve_conjugated, exp_ladder, second_order_reexpansion,
    sequence_generator_check, Ladder, Sign,
};
use qhier_core::linalg::{label_difference, operator_norm, trace_norm};
use qhier_core::partitions::{subsets_of_size, ClusterElement, ClusterSet};
use qhier_core::random::OperatorSampler;
use qhier_core::{Direction, Matrix, NParticleOperator, SequenceKind};

use super::{convergence, cumulant, first, observables, place, single_entry, Check, Ctx, Measure};

pub(super) fn checks() -> Vec<Check> {
    vec![
        Check {
            name: "dual-zero-time",
            suite: "dual",
            identity: "U⁺(0)G = G",
            tolerance: 1e-12,
            run: zero_time,
        },
        Check {
            name: "dual-conjugated",
            suite: "dual",
            identity: "U⁺(t) = e^{−𝔞⁺}𝒢(t)e^{𝔞⁺}",
            tolerance: 1e-9,
            run: conjugated,
        },
        Check {
            name: "dual-second-order",
            suite: "dual",
            identity: "U⁺(t) = 𝔄⁺₁ + Σ_J Σ_Z (−1)^{|Y∖J∖Z|} 𝔄⁺₂(t,J,Z)",
            tolerance: 1e-9,
            run: second_order,
        },
        Check {
            name: "dual-group-law",
            suite: "dual",
            identity: "U⁺(t₁)U⁺(t₂) = U⁺(t₁+t₂)",
            tolerance: 1e-9,
            run: group_law,
        },
        Check {
            name: "dual-generator-limit",
            suite: "dual",
            identity: "(1/h)(U⁺(h)G − G) → 𝔅⁺G",
            tolerance: 1e-3,
            run: generator_limit,
        },
        Check {
            name: "dual-generator-conjugation",
            suite: "dual",
            identity: "𝔅⁺ = e^{−𝔞⁺}𝒩e^{𝔞⁺}",
            tolerance: 1e-10,
            run: generator_conjugation,
        },
        Check {
            name: "additive-observable",
            suite: "dual",
            identity: "G = (0, g₁, 0, …) ⇒ (U⁺(t)G)_s = 𝔄⁺_s(t,1,…,s) Σⱼ g₁(j)",
            tolerance: 1e-10,
            run: additive,
        },
        Check {
            name: "creation-commutator",
            suite: "dual",
            identity: "((𝒢(t)𝔞⁺ − 𝔞⁺𝒢(t))G)_s = Σⱼ 𝔄⁺₂(t,Y∖{j},j)G_{s−1}(Y∖{j})",
            tolerance: 1e-10,
            run: commutator,
        },
        Check {
            name: "complement-sum-identity",
            suite: "dual",
            identity: "Σ_{A⊆Y} G(Y∖A) = Σ_{B⊆Y} G(B)",
            tolerance: 1e-12,
            run: complement_sum,
        },
    ]
}

type R = Result<Measure, qhier_core::Error>;

fn zero_time(ctx: &Ctx, s: &mut OperatorSampler) -> R {
    let g = observables(s, ctx);
    let r = dual_bbgky_evolve(&ctx.dy, 0.0, &g)?;
    Ok(Measure::residual(r.sequence.max_operator_distance(&g)?))
}

fn conjugated(ctx: &Ctx, s: &mut OperatorSampler) -> R {
    let g = observables(s, ctx);
    let mut worst: f64 = 0.0;
    for &t in &ctx.times {
        let a = dual_bbgky_evolve(&ctx.dy, t, &g)?.sequence;
        let b = dual_evolve_conjugated(&ctx.dy, t, &g)?.sequence;
        worst = worst.max(a.max_trace_distance(&b)?);
    }
    Ok(Measure::residual(worst))
}

fn second_order(ctx: &Ctx, s: &mut OperatorSampler) -> R {
    let g = observables(s, ctx);
    let mut worst: f64 = 0.0;
    for &t in &ctx.times {
        let a = dual_bbgky_evolve(&ctx.dy, t, &g)?.sequence;
        let b = second_order_reexpansion(&ctx.dy, t, &g)?.sequence;
        worst = worst.max(a.max_trace_distance(&b)?);
    }
    Ok(Measure::residual(worst))
}

fn group_law(ctx: &Ctx, s: &mut OperatorSampler) -> R {
    let g = observables(s, ctx);
    let mut worst: f64 = 0.0;
    for (t1, t2) in ctx.time_pairs() {
        let two = dual_bbgky_evolve(&ctx.dy, t1, &dual_bbgky_evolve(&ctx.dy, t2, &g)?.sequence)?;
        let one = dual_bbgky_evolve(&ctx.dy, t1 + t2, &g)?;
        worst = worst.max(two.sequence.max_trace_distance(&one.sequence)?);
    }
    Ok(Measure::residual(worst))
}

fn generator_limit(ctx: &Ctx, s: &mut OperatorSampler) -> R {
    let g = observables(s, ctx);
    let gen = dual_bbgky_generator(&ctx.dy, &g)?;
    let report = sequence_generator_check(&DEFAULT_STEPS, &g, &gen, |h| Ok(dual_bbgky_evolve(&ctx.dy, h, &g)?.sequence))?;
    Ok(convergence(&report))
}

fn generator_conjugation(ctx: &Ctx, s: &mut OperatorSampler) -> R {
    let g = observables(s, ctx);
    let inner = exp_ladder(Sign::Plus, Ladder::Creation, &g)?;
    let conj = exp_ladder(Sign::Minus, Ladder::Creation, &ctx.dy.generator_observable_sequence(&inner)?)?;
    Ok(Measure::residual(conj.max_trace_distance(&dual_bbgky_generator(&ctx.dy, &g)?)?))
}

fn additive(ctx: &Ctx, s: &mut OperatorSampler) -> R {
    let d = ctx.d();
    let g = single_entry(d, ctx.n_max(), SequenceKind::Observable, 0.3, 1, s.hermitian(d))?;
    let mut worst: f64 = 0.0;
    for &t in &ctx.times {
        let u = dual_bbgky_evolve(&ctx.dy, t, &g)?.sequence;
        for sv in 1..=ctx.n_max() {
            let y = first(sv);
            let mut sum = NParticleOperator::zeros(y.clone(), d)?;
            for j in 1..=sv {
                sum = sum.add(&place(&g, &[j], &y)?)?;
            }
            let oracle = cumulant(&ctx.dy, t, &ClusterSet::atoms(&y)?, Direction::Dual, &sum)?;
            worst = worst.max(trace_norm(&(u.entry(sv).data() - oracle.data())));
        }
    }
    Ok(Measure::residual(worst))
}

fn commutator(ctx: &Ctx, s: &mut OperatorSampler) -> R {
    let g = observables(s, ctx);
    let mut worst: f64 = 0.0;
    for &t in &ctx.times {
        let lhs = ctx
            .dy
            .evolve_observable_sequence(t, &creation(&g)?)?
            .sub(&creation(&ctx.dy.evolve_observable_sequence(t, &g)?)?)?;
        for sv in 1..=ctx.n_max() {
            let y = first(sv);
            let mut rhs = Matrix::zeros(lhs.entry(sv).data().nrows(), lhs.entry(sv).data().ncols());
            for j in 1..=sv {
                let rest = label_difference(&y, &[j]);
                let target = place(&g, &rest, &y)?;
                let clusters = ClusterSet::new(vec![ClusterElement::Cluster(rest), ClusterElement::Atom(j)])?;
                rhs += cumulant(&ctx.dy, t, &clusters, Direction::Dual, &target)?.data();
            }
            worst = worst.max(trace_norm(&(lhs.entry(sv).data() - rhs)));
        }
    }
    Ok(Measure::residual(worst))
}

fn complement_sum(ctx: &Ctx, s: &mut OperatorSampler) -> R {
    let g = observables(s, ctx);
    let mut worst: f64 = 0.0;
    for sv in 0..=ctx.n_max() {
        let y = first(sv);
        let side = g.entry(sv).data().nrows();
        let mut lhs = Matrix::zeros(side, side);
        let mut rhs = Matrix::zeros(side, side);
        for n in 0..=sv {
            for a in subsets_of_size(&y, n) {
                lhs += place(&g, &label_difference(&y, &a), &y)?.data();
                rhs += place(&g, &a, &y)?.data();
            }
        }
        worst = worst.max(operator_norm(&(lhs - rhs)));
    }
    Ok(Measure::residual(worst))
}
