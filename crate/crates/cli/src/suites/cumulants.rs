use qhier_core::cumulants::{cluster_reconstruct, cumulant_generator_check, DEFAULT_STEPS, MAX_GENERATOR_CHECK};
use qhier_core::linalg::trace_norm;
use qhier_core::partitions::{ClusterElement, ClusterSet};
use qhier_core::random::OperatorSampler;
use qhier_core::{Direction, NParticleOperator};

use super::{cumulant, first, unit_hermitian, Check, Ctx, Measure};

pub(super) fn checks() -> Vec<Check> {
    vec![
        Check {
            name: "cluster-reconstruction",
            suite: "cumulants",
            identity: "𝒢(−t,Y) = Σ_P ∏_{X∈P} 𝔄_{|X|}(t,X)",
            tolerance: 1e-9,
            run: reconstruction,
        },
        Check {
            name: "free-cumulant-vanishing",
            suite: "cumulants",
            identity: "Φ = 0 ⇒ 𝔄_n(t) = 0 for n ≥ 2",
            tolerance: 1e-10,
            run: free_vanishing,
        },
        Check {
            name: "zero-time-collapse",
            suite: "cumulants",
            identity: "𝔄₁(0) = I, 𝔄_n(0) = 0 for n ≥ 2",
            tolerance: 1e-12,
            run: zero_time,
        },
        Check {
            name: "element-order-independence",
            suite: "cumulants",
            identity: "𝔄(t,E₁,…,E_m) is symmetric in its elements",
            tolerance: 1e-12,
            run: order_independence,
        },
        Check {
            name: "cumulant-generator-limit",
            suite: "cumulants",
            identity: "(1/h)(𝔄_n(h) − δ_{n1}) → −𝒩_int^{(n)}",
            tolerance: 1e-3,
            run: generator_limit,
        },
    ]
}

type R = Result<Measure, qhier_core::Error>;

fn reconstruction(ctx: &Ctx, s: &mut OperatorSampler) -> R {
    let mut worst: f64 = 0.0;
    for n in 1..=ctx.n_max().min(4) {
        let y = first(n);
        for _ in 0..5 {
            let f = unit_hermitian(s, ctx.d(), n);
            for &t in &ctx.times {
                let rec = cluster_reconstruct(&ctx.dy, t, &y, &f)?;
                let direct = ctx.dy.evolve_state(t, &f)?;
                worst = worst.max(trace_norm(&(rec.data() - direct.data())));
            }
        }
    }
    Ok(Measure::residual(worst))
}

fn atoms_cumulant(ctx: &Ctx, free: bool, t: f64, f: &NParticleOperator) -> Result<NParticleOperator, qhier_core::Error> {
    let clusters = ClusterSet::atoms(f.labels())?;
    let dy = if free { &ctx.free } else { &ctx.dy };
    cumulant(dy, t, &clusters, Direction::Forward, f)
}

fn free_vanishing(ctx: &Ctx, s: &mut OperatorSampler) -> R {
    let mut worst: f64 = 0.0;
    for n in 2..=ctx.n_max() {
        let f = unit_hermitian(s, ctx.d(), n);
        for &t in &ctx.times {
            worst = worst.max(atoms_cumulant(ctx, true, t, &f)?.trace_norm());
        }
    }
    Ok(Measure::residual(worst))
}

fn zero_time(ctx: &Ctx, s: &mut OperatorSampler) -> R {
    let mut worst: f64 = 0.0;
    for n in 1..=ctx.n_max() {
        let f = unit_hermitian(s, ctx.d(), n);
        let a = atoms_cumulant(ctx, false, 0.0, &f)?;
        let r = if n == 1 { trace_norm(&(a.data() - f.data())) } else { a.trace_norm() };
        worst = worst.max(r);
    }
    Ok(Measure::residual(worst))
}

fn order_independence(ctx: &Ctx, s: &mut OperatorSampler) -> R {
    let mut worst: f64 = 0.0;
    for n in 2..=ctx.n_max() {
        let f = unit_hermitian(s, ctx.d(), n);
        let y = first(n);
        // first two labels grouped, the rest atoms, in both orders
        let mut forward = vec![ClusterElement::Cluster(y[..2].to_vec())];
        forward.extend(y[2..].iter().copied().map(ClusterElement::Atom));
        let mut reversed = forward.clone();
        reversed.reverse();
        let a = ClusterSet::new(forward)?;
        let b = ClusterSet::new(reversed)?;
        for &t in &ctx.times {
            let x = cumulant(&ctx.dy, t, &a, Direction::Forward, &f)?;
            let z = cumulant(&ctx.dy, t, &b, Direction::Forward, &f)?;
            worst = worst.max(trace_norm(&(x.data() - z.data())));
        }
    }
    Ok(Measure::residual(worst))
}

fn generator_limit(ctx: &Ctx, s: &mut OperatorSampler) -> R {
    let mut worst: f64 = 0.0;
    let mut ok = true;
    let mut detail = Vec::new();
    for n in 1..=ctx.n_max().min(MAX_GENERATOR_CHECK) {
        let f = unit_hermitian(s, ctx.d(), n);
        let report = cumulant_generator_check(&ctx.dy, n, &f, &DEFAULT_STEPS)?;
        ok &= report.slope.is_none_or(|k| k >= 0.9);
        worst = worst.max(report.final_relative());
        detail.push(match report.slope {
            Some(k) => format!("n={n} slope={k:.3}"),
            None => format!("n={n} exact"),
        });
    }
    let mut m = Measure::residual(worst).with_detail(detail.join(", "));
    m.ok = ok;
    Ok(m)
}
