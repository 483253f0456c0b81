use super::*;
use crate::linalg::{kron, operator_norm};
use crate::random::OperatorSampler;
use crate::system::SystemSpec;
use alloc::collections::BTreeMap;

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn pauli() -> (Matrix, Matrix, Matrix) {
    let o = c(0.0);
    let x = Matrix::from_row_slice(2, 2, &[o, c(1.0), c(1.0), o]);
    let y = Matrix::from_row_slice(2, 2, &[o, C64::new(0.0, -1.0), C64::new(0.0, 1.0), o]);
    let z = Matrix::from_row_slice(2, 2, &[c(1.0), o, o, c(-1.0)]);
    (x, y, z)
}

/// Transverse field, Heisenberg-type pair coupling and a symmetric
/// three-body term.
fn spec(n_max: usize, hbar: f64, three_body: bool) -> SystemSpec {
    let (x, y, z) = pauli();
    let one = &x * c(0.5) + &z * c(0.3);
    let mut pots = BTreeMap::new();
    pots.insert(2, kron(&z, &z) * c(0.4) + (kron(&x, &x) + kron(&y, &y)) * c(0.25));
    if three_body {
        let zzz = kron(&kron(&z, &z), &z);
        pots.insert(3, zzz * c(0.2));
    }
    SystemSpec::new(2, hbar, n_max, one, pots).unwrap()
}

fn two_body(n_max: usize) -> Dynamics {
    Dynamics::new(spec(n_max, 1.0, false)).unwrap()
}

fn full(n_max: usize) -> Dynamics {
    Dynamics::new(spec(n_max, 0.9, true)).unwrap()
}

fn states(seed: u64, n_max: usize) -> OperatorSequence {
    OperatorSampler::new(seed).density_sequence(2, n_max, 3.0, 1.0)
}

fn observables(seed: u64, n_max: usize) -> OperatorSequence {
    OperatorSampler::new(seed).observable_sequence(2, n_max, 0.3)
}

fn dist(a: &OperatorSequence, b: &OperatorSequence) -> f64 {
    a.max_trace_distance(b).unwrap()
}

fn product(ops: &[&Matrix]) -> Matrix {
    ops.iter().skip(1).fold(ops[0].clone(), |acc, m| kron(&acc, m))
}

#[test]
fn von_neumann_identity_at_zero_time() {
    let dy = full(4);
    let f = states(1, 4);
    let r = von_neumann_evolve(&dy, 0.0, &f).unwrap();
    assert!(dist(&r.sequence, &f) <= 1e-12);
    assert_eq!(r.provenance.hierarchy, Hierarchy::VonNeumann);
    assert_eq!(r.truncation, 4);
}

#[test]
fn von_neumann_chaos_data_evolve_by_cumulants() {
    let dy = full(3);
    let mut s = OperatorSampler::new(2);
    let f1 = s.symmetric_density(2, 1);
    let mut e: Vec<Matrix> = (0..=3).map(|n| Matrix::zeros(1 << n, 1 << n)).collect();
    e[1] = f1.clone();
    let f = OperatorSequence::new(2, SequenceKind::State, 3.0, e).unwrap();
    let t = 0.8;
    let r = von_neumann_evolve(&dy, t, &f).unwrap();
    for n in 1..=3 {
        let prod = NParticleOperator::on_first(n, 2, product(&vec![&f1; n])).unwrap();
        let y = first(n);
        let oracle = apply(&dy, t, &ClusterSet::atoms(&y).unwrap(), Direction::Forward, &prod).unwrap();
        assert!(trace_norm(&(r.sequence.entry(n).data() - oracle.data())) <= 1e-9, "n = {n}");
    }
}

#[test]
fn von_neumann_group_law() {
    let dy = full(3);
    let f = states(3, 3);
    let (t1, t2) = (0.45, -1.2);
    let two = von_neumann_evolve(&dy, t1, &von_neumann_evolve(&dy, t2, &f).unwrap().sequence).unwrap();
    let one = von_neumann_evolve(&dy, t1 + t2, &f).unwrap();
    assert!(dist(&two.sequence, &one.sequence) <= 1e-9);
}

#[test]
fn von_neumann_generator_free_and_two_body() {
    let dy = two_body(3);
    let f = states(4, 3);
    let free = Dynamics::new(dy.spec().free()).unwrap();
    let gen = von_neumann_generator(&free, &f).unwrap();
    assert!(dist(&gen, &free.generator_state_sequence(&f).unwrap()) <= 1e-14);

    // n = 2 by hand: −𝒩₂f₂ − i(ΦF − FΦ) with F = f₁⊗f₁, ħ = 1
    let gen = von_neumann_generator(&dy, &f).unwrap();
    let f1 = f.entry(1).data();
    let ff = kron(f1, f1);
    let phi = dy.spec().potential(2).unwrap();
    let h2 = dy.hamiltonian(2).unwrap().into_data();
    let f2 = f.entry(2).data();
    let i = C64::new(0.0, 1.0);
    let oracle = (&h2 * f2 - f2 * &h2) * -i + (phi * &ff - &ff * phi) * -i;
    assert!(trace_norm(&(gen.entry(2).data() - oracle)) <= 1e-12);

    // n = 3, two-body reduction: sum over two-block partitions and pairs across blocks
    let y = first(3);
    let mut oracle = dy.generator_state(f.entry(3)).unwrap().into_data();
    for part in SetPartitions::new(&y).unwrap().filter(|p| p.len() == 2) {
        let target = product_on(&f, part.blocks(), &y).unwrap();
        for &i1 in &part.blocks()[0] {
            for &i2 in &part.blocks()[1] {
                let pair = label_union(&[i1], &[i2]);
                oracle -= dy.interaction_generator(&pair, &target).unwrap().data();
            }
        }
    }
    assert!(trace_norm(&(gen.entry(3).data() - oracle)) <= 1e-12);
}

#[test]
fn von_neumann_generator_is_the_derivative() {
    let dy = full(3);
    let f = states(5, 3);
    let gen = von_neumann_generator(&dy, &f).unwrap();
    let report = sequence_generator_check(&crate::cumulants::DEFAULT_STEPS, &f, &gen, |h| {
        Ok(von_neumann_evolve(&dy, h, &f)?.sequence)
    })
    .unwrap();
    assert!(report.passes(0.9, 1e-3), "{report:?}");
}

#[test]
fn ladder_basics() {
    let mut s = OperatorSampler::new(6);
    let mut e: Vec<Matrix> = (0..=3).map(|n| Matrix::zeros(1 << n, 1 << n)).collect();
    e[1] = s.hermitian(2);
    let f = OperatorSequence::new(2, SequenceKind::State, 3.0, e.clone()).unwrap();
    let af = annihilation(&f).unwrap();
    assert!((af.entry(0).data()[(0, 0)] - e[1].trace()).norm() <= 1e-15);
    assert!((1..=3).all(|k| af.entry(k).operator_norm() == 0.0));

    let g = OperatorSequence::new(2, SequenceKind::Observable, 0.3, e.clone()).unwrap();
    let cg = creation(&g).unwrap();
    let id = Matrix::identity(2, 2);
    let oracle = kron(&e[1], &id) + kron(&id, &e[1]);
    assert!(operator_norm(&(cg.entry(2).data() - oracle)) <= 1e-15);
    assert_eq!(cg.entry(0).data()[(0, 0)], c(0.0));

    let mut e0 = e.clone();
    e0[0][(0, 0)] = c(0.7);
    let f = OperatorSequence::new(2, SequenceKind::State, 3.0, e0).unwrap();
    let ef = exp_ladder(Sign::Plus, Ladder::Annihilation, &f).unwrap();
    assert!((ef.entry(0).data()[(0, 0)] - c(0.7) - e[1].trace()).norm() <= 1e-15);
}

#[test]
fn ladder_adjointness_and_inverses() {
    let f = states(7, 4);
    let g = observables(8, 4);
    let lhs = bilinear(&creation(&g).unwrap(), &f);
    let rhs = bilinear(&g, &annihilation(&f).unwrap());
    assert!((lhs - rhs).norm() <= 1e-10);

    for which in [Ladder::Annihilation, Ladder::Creation] {
        let x = if which == Ladder::Annihilation { &f } else { &g };
        let there = exp_ladder(Sign::Plus, which, x).unwrap();
        let back = exp_ladder(Sign::Minus, which, &there).unwrap();
        assert!(dist(&back, x) <= 1e-12);
        let back = exp_ladder(Sign::Plus, which, &exp_ladder(Sign::Minus, which, x).unwrap()).unwrap();
        assert!(dist(&back, x) <= 1e-12);
    }

    // e^{𝔞⁺} and e^{𝔞} stay adjoint
    let lhs = bilinear(&exp_ladder(Sign::Plus, Ladder::Creation, &g).unwrap(), &f);
    let rhs = bilinear(&g, &exp_ladder(Sign::Plus, Ladder::Annihilation, &f).unwrap());
    assert!((lhs - rhs).norm() <= 1e-10);
}

#[test]
fn exp_annihilation_matches_power_series() {
    let f = states(9, 4);
    let ef = exp_ladder(Sign::Minus, Ladder::Annihilation, &f).unwrap();
    // Σ (−1)ⁿ/n! 𝔞ⁿ f, powers applied one trace at a time
    let mut term = f.clone();
    let mut acc = f.clone();
    for n in 1..=4 {
        term = annihilation(&term).unwrap();
        acc = acc.add_scaled(parity(n) / factorial(n), &term).unwrap();
    }
    assert!(dist(&ef, &acc) <= 1e-12);

    let g = observables(10, 4);
    let eg = exp_ladder(Sign::Plus, Ladder::Creation, &g).unwrap();
    let mut term = g.clone();
    let mut acc = g.clone();
    for n in 1..=4 {
        term = creation(&term).unwrap();
        acc = acc.add_scaled(1.0 / factorial(n), &term).unwrap();
    }
    assert!(dist(&eg, &acc) <= 1e-12);
}

fn bilinear(g: &OperatorSequence, f: &OperatorSequence) -> C64 {
    crate::groups::bilinear_form(g, f).unwrap()
}

#[test]
fn bbgky_identity_at_zero_time() {
    let dy = full(4);
    let f = states(11, 4);
    for r in [
        bbgky_evolve(&dy, 0.0, &f).unwrap(),
        bbgky_evolve_conjugated(&dy, 0.0, &f).unwrap(),
        second_order_reexpansion(&dy, 0.0, &f).unwrap(),
    ] {
        assert!(dist(&r.sequence, &f) <= 1e-12);
    }
}

#[test]
fn bbgky_reproduces_direct_marginals() {
    let dy = full(3);
    let mut s = OperatorSampler::new(12);
    let rho = NParticleOperator::on_first(3, 2, s.symmetric_density(2, 3)).unwrap();
    let marg = marginals_of_state(&rho, 3.0).unwrap();
    let t = 1.4;
    let u = bbgky_evolve(&dy, t, &marg).unwrap().sequence;
    let evolved = dy.evolve_state(t, &rho).unwrap();
    for sv in 1..=2 {
        let direct = trace_tail(&evolved, sv).unwrap();
        let scaled = u.entry(sv).data() * c(factorial(3 - sv));
        assert!(trace_norm(&(scaled - direct)) <= 1e-9, "s = {sv}");
    }
}

#[test]
fn bbgky_representations_agree() {
    let dy = full(4);
    let f = states(13, 4);
    let t = 0.9;
    let a = bbgky_evolve(&dy, t, &f).unwrap();
    let b = bbgky_evolve_conjugated(&dy, t, &f).unwrap();
    let c2 = second_order_reexpansion(&dy, t, &f).unwrap();
    assert!(dist(&a.sequence, &b.sequence) <= 1e-9);
    assert!(dist(&a.sequence, &c2.sequence) <= 1e-9);
    assert_eq!(b.provenance.formula, Formula::Conjugated);
    assert_eq!(c2.provenance.formula, Formula::SecondOrder);
}

#[test]
fn second_order_single_term_by_hand() {
    let dy = two_body(2);
    let f = states(14, 2);
    let t = 0.5;
    let r = second_order_reexpansion(&dy, t, &f).unwrap().sequence;
    // s = 1: 𝒢₁(−t)f₁ + Tr₂(𝒢₂(−t) − 𝒢₁(−t,1)𝒢₁(−t,2)) f₂
    let u2 = dy.block_unitary(Direction::Forward, t, &[1, 2], &[1, 2]).unwrap();
    let ua = dy.block_unitary(Direction::Forward, t, &[1], &[1, 2]).unwrap();
    let ub = dy.block_unitary(Direction::Forward, t, &[2], &[1, 2]).unwrap();
    let f2 = f.entry(2).data();
    let a2 = crate::linalg::conjugate(&u2, f2) - crate::linalg::conjugate(&(ua * ub), f2);
    let tr = partial_trace(&NParticleOperator::on_first(2, 2, a2).unwrap(), &[2]).unwrap();
    let oracle = dy.evolve_state(t, f.entry(1)).unwrap().into_data() + tr.data();
    assert!(trace_norm(&(r.entry(1).data() - oracle)) <= 1e-12);
}

#[test]
fn free_second_order_keeps_first_order_term() {
    let dy = Dynamics::new(spec(4, 1.0, true).free()).unwrap();
    let f = states(15, 4);
    let g = observables(16, 4);
    let t = 1.1;
    let r = second_order_reexpansion(&dy, t, &f).unwrap().sequence;
    assert!(dist(&r, &dy.evolve_state_sequence(t, &f).unwrap()) <= 1e-10);
    let r = second_order_reexpansion(&dy, t, &g).unwrap().sequence;
    assert!(dist(&r, &dy.evolve_observable_sequence(t, &g).unwrap()) <= 1e-10);
}

#[test]
fn annihilation_commutator_is_a_second_order_cumulant() {
    let dy = full(3);
    let f = states(17, 3);
    let t = -0.7;
    let lhs = annihilation(&dy.evolve_state_sequence(t, &f).unwrap())
        .unwrap()
        .sub(&dy.evolve_state_sequence(t, &annihilation(&f).unwrap()).unwrap())
        .unwrap();
    for sv in 1..=2 {
        let a2 = bbgky_cumulant(&dy, t, sv, 1, f.entry(sv + 1)).unwrap();
        let rhs = trace_tail(&a2, sv).unwrap();
        assert!(trace_norm(&(lhs.entry(sv).data() - rhs)) <= 1e-12);
    }
}

#[test]
fn bbgky_norm_estimate() {
    let dy = full(4);
    let f = states(18, 4);
    for t in [0.3, 2.0, -3.0] {
        let u = bbgky_evolve(&dy, t, &f).unwrap().sequence;
        assert!(u.norm() <= bbgky_norm_constant(3.0) * f.norm());
    }
}

#[test]
fn bbgky_generator_free_and_two_body() {
    let dy = two_body(4);
    let f = states(19, 4);
    let free = Dynamics::new(dy.spec().free()).unwrap();
    assert!(dist(&bbgky_generator(&free, &f).unwrap(), &free.generator_state_sequence(&f).unwrap()) <= 1e-14);

    // (𝔅f)_s = −𝒩_s f_s + Σ_{i∈Y} Tr_{s+1}(−𝒩_int^{(2)})(i, s+1) f_{s+1}
    let gen = bbgky_generator(&dy, &f).unwrap();
    for sv in 1..=3 {
        let mut oracle = dy.generator_state(f.entry(sv)).unwrap().into_data();
        for i in 1..=sv {
            let n = dy.interaction_generator(&[i, sv + 1], f.entry(sv + 1)).unwrap();
            oracle -= partial_trace(&n, &[sv + 1]).unwrap().data();
        }
        assert!(trace_norm(&(gen.entry(sv).data() - oracle)) <= 1e-12, "s = {sv}");
    }
    assert!(gen.entry(4).trace_norm() > 0.0);
}

#[test]
fn bbgky_generator_is_the_derivative() {
    let dy = full(4);
    let f = states(20, 4);
    let gen = bbgky_generator(&dy, &f).unwrap();
    let report = sequence_generator_check(&crate::cumulants::DEFAULT_STEPS, &f, &gen, |h| {
        Ok(bbgky_evolve(&dy, h, &f)?.sequence)
    })
    .unwrap();
    assert!(report.passes(0.9, 1e-3), "{report:?}");
}

#[test]
fn generators_as_conjugated_free_generators() {
    let dy = full(4);
    let f = states(21, 4);
    let inner = exp_ladder(Sign::Minus, Ladder::Annihilation, &f).unwrap();
    let conj = exp_ladder(Sign::Plus, Ladder::Annihilation, &dy.generator_state_sequence(&inner).unwrap()).unwrap();
    assert!(dist(&conj, &bbgky_generator(&dy, &f).unwrap()) <= 1e-10);

    let g = observables(22, 4);
    let inner = exp_ladder(Sign::Plus, Ladder::Creation, &g).unwrap();
    let conj = exp_ladder(Sign::Minus, Ladder::Creation, &dy.generator_observable_sequence(&inner).unwrap()).unwrap();
    assert!(dist(&conj, &dual_bbgky_generator(&dy, &g).unwrap()) <= 1e-10);
}

#[test]
fn one_body_generator_is_traceless_in_the_traced_particle() {
    let dy = full(3);
    let f = states(23, 3);
    for sv in 0..3 {
        let n1 = crate::cumulants::interaction_term(&dy, &[sv + 1], f.entry(sv + 1)).unwrap();
        let tr = partial_trace(&n1, &[sv + 1]).unwrap();
        assert!(tr.operator_norm() <= 1e-10);
    }
}

#[test]
fn dual_identity_at_zero_time_and_additive_observables() {
    let dy = full(4);
    let g = observables(24, 4);
    for r in [
        dual_bbgky_evolve(&dy, 0.0, &g).unwrap(),
        dual_evolve_conjugated(&dy, 0.0, &g).unwrap(),
        second_order_reexpansion(&dy, 0.0, &g).unwrap(),
    ] {
        assert!(dist(&r.sequence, &g) <= 1e-12);
    }

    let mut s = OperatorSampler::new(25);
    let g1 = s.hermitian(2);
    let mut e: Vec<Matrix> = (0..=4).map(|n| Matrix::zeros(1 << n, 1 << n)).collect();
    e[1] = g1;
    let g = OperatorSequence::new(2, SequenceKind::Observable, 0.3, e).unwrap();
    let t = 0.6;
    let u = dual_bbgky_evolve(&dy, t, &g).unwrap().sequence;
    for sv in 2..=3 {
        let y = first(sv);
        let mut sum = NParticleOperator::zeros(y.clone(), 2).unwrap();
        for j in 1..=sv {
            sum = sum.add(&place(&g, &[j], &y).unwrap()).unwrap();
        }
        let oracle = apply(&dy, t, &ClusterSet::atoms(&y).unwrap(), Direction::Dual, &sum).unwrap();
        assert!(trace_norm(&(u.entry(sv).data() - oracle.data())) <= 1e-10, "s = {sv}");
    }
}

#[test]
fn dual_representations_agree() {
    let dy = full(4);
    let g = observables(26, 4);
    let t = -1.3;
    let a = dual_bbgky_evolve(&dy, t, &g).unwrap();
    let b = dual_evolve_conjugated(&dy, t, &g).unwrap();
    let c2 = second_order_reexpansion(&dy, t, &g).unwrap();
    assert!(dist(&a.sequence, &b.sequence) <= 1e-9);
    assert!(dist(&a.sequence, &c2.sequence) <= 1e-9);
}

#[test]
fn creation_commutator_is_a_dual_second_order_cumulant() {
    let dy = full(3);
    let g = observables(27, 3);
    let t = 0.75;
    let lhs = dy
        .evolve_observable_sequence(t, &creation(&g).unwrap())
        .unwrap()
        .sub(&creation(&dy.evolve_observable_sequence(t, &g).unwrap()).unwrap())
        .unwrap();
    for sv in 1..=3 {
        let y = first(sv);
        let mut rhs = Matrix::zeros(1 << sv, 1 << sv);
        for j in 1..=sv {
            let rest = label_difference(&y, &[j]);
            let target = place(&g, &rest, &y).unwrap();
            let clusters = ClusterSet::new(vec![ClusterElement::Cluster(rest), ClusterElement::Atom(j)]).unwrap();
            rhs += apply(&dy, t, &clusters, Direction::Dual, &target).unwrap().data();
        }
        assert!(trace_norm(&(lhs.entry(sv).data() - rhs)) <= 1e-12, "s = {sv}");
    }
}

#[test]
fn duality_of_groups_and_generators() {
    let dy = full(3);
    for seed in 0..4 {
        let f = states(100 + seed, 3);
        let g = observables(200 + seed, 3);
        let t = 0.4 + seed as f64;
        let lhs = bilinear(&dual_bbgky_evolve(&dy, t, &g).unwrap().sequence, &f);
        let rhs = bilinear(&g, &bbgky_evolve(&dy, t, &f).unwrap().sequence);
        assert!((lhs - rhs).norm() <= 1e-9);
        let lhs = bilinear(&dual_bbgky_generator(&dy, &g).unwrap(), &f);
        let rhs = bilinear(&g, &bbgky_generator(&dy, &f).unwrap());
        assert!((lhs - rhs).norm() <= 1e-8);
    }
}

#[test]
fn dual_generator_free_and_two_body() {
    let dy = two_body(4);
    let g = observables(28, 4);
    let free = Dynamics::new(dy.spec().free()).unwrap();
    assert!(dist(&dual_bbgky_generator(&free, &g).unwrap(), &free.generator_observable_sequence(&g).unwrap()) <= 1e-14);

    // 𝒩_s g_s + Σ_{j₁≠j₂} 𝒩_int^{(2)}(j₁,j₂) g_{s−1}(Y∖{j₁})
    let gen = dual_bbgky_generator(&dy, &g).unwrap();
    for sv in 1..=4 {
        let y = first(sv);
        let mut oracle = dy.generator_observable(g.entry(sv)).unwrap().into_data();
        for j1 in 1..=sv {
            let target = place(&g, &label_difference(&y, &[j1]), &y).unwrap();
            for j2 in (1..=sv).filter(|&j| j != j1) {
                let pair = label_union(&[j1], &[j2]);
                oracle += dy.interaction_generator(&pair, &target).unwrap().data();
            }
        }
        assert!(trace_norm(&(gen.entry(sv).data() - oracle)) <= 1e-12, "s = {sv}");
    }
}

#[test]
fn dual_generator_is_the_derivative() {
    let dy = full(4);
    let g = observables(29, 4);
    let gen = dual_bbgky_generator(&dy, &g).unwrap();
    let report = sequence_generator_check(&crate::cumulants::DEFAULT_STEPS, &g, &gen, |h| {
        Ok(dual_bbgky_evolve(&dy, h, &g)?.sequence)
    })
    .unwrap();
    assert!(report.passes(0.9, 1e-3), "{report:?}");
}

#[test]
fn group_laws() {
    let dy = full(4);
    let f = states(30, 4);
    let g = observables(31, 4);
    let (t1, t2) = (1.1, -0.35);
    let two = bbgky_evolve(&dy, t1, &bbgky_evolve(&dy, t2, &f).unwrap().sequence).unwrap();
    let one = bbgky_evolve(&dy, t1 + t2, &f).unwrap();
    assert!(dist(&two.sequence, &one.sequence) <= 1e-9);
    let two = dual_bbgky_evolve(&dy, t1, &dual_bbgky_evolve(&dy, t2, &g).unwrap().sequence).unwrap();
    let one = dual_bbgky_evolve(&dy, t1 + t2, &g).unwrap();
    assert!(dist(&two.sequence, &one.sequence) <= 1e-9);
}

#[test]
fn dual_norm_estimate() {
    let dy = full(4);
    let g = observables(32, 4);
    for t in [0.5, -2.5] {
        let u = dual_bbgky_evolve(&dy, t, &g).unwrap().sequence;
        assert!(u.norm() <= dual_norm_constant(0.3) * g.norm());
    }
}

#[test]
fn complement_sum_identity() {
    // Σ_{A⊆Y} g(Y∖A) = Σ_{B⊆Y} g(B) for exchange-symmetric g
    let g = observables(33, 4);
    for sv in 0..=4 {
        let y = first(sv);
        let mut lhs = Matrix::zeros(1 << sv, 1 << sv);
        let mut rhs = Matrix::zeros(1 << sv, 1 << sv);
        for n in 0..=sv {
            for a in subsets_of_size(&y, n) {
                lhs += place(&g, &label_difference(&y, &a), &y).unwrap().data();
                rhs += place(&g, &a, &y).unwrap().data();
            }
        }
        assert!(operator_norm(&(lhs - rhs)) <= 1e-12);
    }
}

#[test]
fn rejects_invalid_inputs() {
    let dy = full(3);
    let g = observables(34, 3);
    assert!(matches!(bbgky_evolve(&dy, 0.1, &g), Err(Error::Mismatch(_))));
    let f = states(35, 3);
    assert!(matches!(dual_bbgky_evolve(&dy, 0.1, &f), Err(Error::Mismatch(_))));

    let mut s = OperatorSampler::new(36);
    let mut asym = f.clone();
    asym.set_entry(2, s.hermitian(4)).unwrap();
    assert!(matches!(bbgky_evolve(&dy, 0.1, &asym), Err(Error::Validation(_))));

    let big = states(37, 4);
    assert!(matches!(bbgky_evolve(&dy, 0.1, &big), Err(Error::Resource { .. })));
    assert!(evolve(&dy, Hierarchy::VonNeumann, Formula::Conjugated, 0.1, &f).is_err());
}

#[test]
fn hbar_rescales_time() {
    let a = Dynamics::new(spec(3, 1.0, true)).unwrap();
    let b = Dynamics::new(spec(3, 0.5, true)).unwrap();
    let f = states(38, 3);
    let ra = bbgky_evolve(&a, 0.8, &f).unwrap().sequence;
    let rb = bbgky_evolve(&b, 0.4, &f).unwrap().sequence;
    assert!(dist(&ra, &rb) <= 1e-12);
}

#[test]
fn bound_constants() {
    let e = core::f64::consts::E;
    assert!((von_neumann_bound(1, 1.0) - e * e * e).abs() <= 1e-12);
    assert!((bbgky_cumulant_bound(2) - 2.0 * e.powi(4)).abs() <= 1e-10);
    assert!(bbgky_norm_constant(3.0) > e * e);
    assert!(dual_norm_constant(0.3) > e * e);
}
