//! Evolution of operator sequences: the von Neumann hierarchy for
//! correlation operators, the BBGKY hierarchy for marginal states and its
//! dual for marginal observables, with generators, ladder operators and the
//! alternative (conjugated, second-order) representations of each group.
//!
//! Sequences are truncated at `n_max`; every series is then a finite sum and
//! every representation is exact up to round-off.

use alloc::vec;
use alloc::vec::Vec;

use crate::cumulants::{bbgky_cumulant, cumulant_apply, ConvergenceReport, CumulantRequest};
use crate::error::{Error, Result};
use crate::groups::{Direction, Dynamics, OperatorSequence, SequenceKind};
use crate::linalg::{dim_pow, embed, label_difference, label_union, partial_trace, trace_norm, Matrix, NParticleOperator, C64};
use crate::partitions::{nonempty_subsets, subsets_of_size, ClusterElement, ClusterSet, SetPartitions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Hierarchy {
    VonNeumann,
    Bbgky,
    Dual,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Formula {
    /// Cumulant expansion.
    Expansion,
    /// Free group conjugated by ladder exponentials.
    Conjugated,
    /// Re-expansion in first- and second-order cumulants.
    SecondOrder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Provenance {
    pub hierarchy: Hierarchy,
    pub formula: Formula,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HierarchyResult {
    pub sequence: OperatorSequence,
    pub provenance: Provenance,
    /// Largest particle number carried.
    pub truncation: usize,
}

fn result(sequence: OperatorSequence, hierarchy: Hierarchy, formula: Formula) -> HierarchyResult {
    let truncation = sequence.n_max();
    HierarchyResult {
        sequence,
        provenance: Provenance { hierarchy, formula },
        truncation,
    }
}

fn validate(dy: &Dynamics, x: &OperatorSequence, kind: SequenceKind) -> Result<()> {
    if x.kind() != kind {
        return Err(Error::Mismatch(alloc::format!("expected a {kind:?} sequence, got {:?}", x.kind())));
    }
    dy.check_sequence(x)?;
    x.check_exchange_symmetric()
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn parity(n: usize) -> f64 {
    if n.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn first(n: usize) -> Vec<usize> {
    (1..=n).collect()
}

fn range(lo: usize, hi: usize) -> Vec<usize> {
    (lo..=hi).collect()
}

fn zeros(d: usize, n: usize) -> Result<Matrix> {
    let side = dim_pow(d, n)?;
    Ok(Matrix::zeros(side, side))
}

/// Entry `x_{|labels|}` placed on `labels` and embedded into `ambient`.
fn place(x: &OperatorSequence, labels: &[usize], ambient: &[usize]) -> Result<NParticleOperator> {
    let op = NParticleOperator::new(labels.to_vec(), x.d(), x.entry(labels.len()).data().clone())?;
    embed(&op, ambient)
}

/// `∏ᵢ x_{|Xᵢ|}(Xᵢ)` inside `ambient`; the factors act on disjoint labels.
fn product_on(x: &OperatorSequence, blocks: &[Vec<usize>], ambient: &[usize]) -> Result<NParticleOperator> {
    let mut acc = NParticleOperator::identity(ambient.to_vec(), x.d())?;
    for b in blocks {
        acc = acc.mul(&place(x, b, ambient)?)?;
    }
    Ok(acc)
}

/// Partial trace of an operator on `1..=s+n` over `s+1..=s+n`.
fn trace_tail(op: &NParticleOperator, s: usize) -> Result<Matrix> {
    let traced = range(s + 1, op.n_particles());
    Ok(partial_trace(op, &traced)?.into_data())
}

/// Unions `Z₁ ∪ … ∪ Z_m` over every choice of nonempty `Zᵣ ⊆ Xᵣ`.
fn transversal_unions(blocks: &[Vec<usize>]) -> Result<Vec<Vec<usize>>> {
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    for b in blocks {
        let choices = nonempty_subsets(b)?;
        let mut next = Vec::with_capacity(out.len() * choices.len());
        for prefix in &out {
            for z in &choices {
                next.push(label_union(prefix, z));
            }
        }
        out = next;
    }
    Ok(out)
}

fn has_potential(dy: &Dynamics, k: usize) -> bool {
    dy.spec().potential(k).is_some()
}

fn apply(dy: &Dynamics, t: f64, clusters: &ClusterSet, direction: Direction, target: &NParticleOperator) -> Result<NParticleOperator> {
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

// ---------------------------------------------------------------------------
// von Neumann hierarchy

/// `(𝔄_t(f))ₙ(Y) = Σ_P 𝔄_{|P|}(t, Y_P) ∏_{X∈P} f_{|X|}(X)`, the blocks of
/// each partition entering the cumulant as clusters. Entry 0 is carried over.
pub fn von_neumann_evolve(dy: &Dynamics, t: f64, f: &OperatorSequence) -> Result<HierarchyResult> {
    validate(dy, f, SequenceKind::State)?;
    let mut out = vec![f.entry(0).data().clone()];
    for n in 1..=f.n_max() {
        let y = first(n);
        let mut acc = zeros(f.d(), n)?;
        for part in SetPartitions::new(&y)? {
            let target = product_on(f, part.blocks(), &y)?;
            let clusters = ClusterSet::from_blocks(part.blocks())?;
            acc += apply(dy, t, &clusters, Direction::Forward, &target)?.data();
        }
        out.push(acc);
    }
    Ok(result(f.with_entries(out)?, Hierarchy::VonNeumann, Formula::Expansion))
}

/// `(𝔑f)ₙ = −𝒩ₙfₙ + Σ_{|P|>1} Σ_{∅≠Zᵣ⊆Xᵣ} (−𝒩_int^{(Σ|Zᵣ|)})(∪Zᵣ) ∏ f_{|Xᵣ|}(Xᵣ)`.
pub fn von_neumann_generator(dy: &Dynamics, f: &OperatorSequence) -> Result<OperatorSequence> {
    validate(dy, f, SequenceKind::State)?;
    let mut out = vec![Matrix::zeros(1, 1)];
    for n in 1..=f.n_max() {
        let y = first(n);
        let mut acc = dy.generator_state(f.entry(n))?.into_data();
        for part in SetPartitions::new(&y)?.filter(|p| p.len() > 1) {
            let target = product_on(f, part.blocks(), &y)?;
            for z in transversal_unions(part.blocks())? {
                if has_potential(dy, z.len()) {
                    acc -= dy.interaction_generator(&z, &target)?.data();
                }
            }
        }
        out.push(acc);
    }
    f.with_entries(out)
}

// ---------------------------------------------------------------------------
// Ladder operators

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ladder {
    /// `(𝔞f)_s = Tr_{s+1} f_{s+1}`.
    Annihilation,
    /// `(𝔞⁺g)_s = Σ_{j∈Y} g_{s−1}(Y∖{j})`.
    Creation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// `𝔞`; the top entry is zero by truncation.
pub fn annihilation(f: &OperatorSequence) -> Result<OperatorSequence> {
    let nm = f.n_max();
    let mut out = Vec::with_capacity(nm + 1);
    for s in 0..nm {
        out.push(partial_trace(f.entry(s + 1), &[s + 1])?.into_data());
    }
    out.push(zeros(f.d(), nm)?);
    f.with_entries(out)
}

/// `𝔞⁺`; entry 0 is zero.
pub fn creation(g: &OperatorSequence) -> Result<OperatorSequence> {
    let mut out = vec![Matrix::zeros(1, 1)];
    for s in 1..=g.n_max() {
        let y = first(s);
        let mut acc = zeros(g.d(), s)?;
        for j in 1..=s {
            acc += place(g, &label_difference(&y, &[j]), &y)?.data();
        }
        out.push(acc);
    }
    g.with_entries(out)
}

/// `e^{±𝔞}` or `e^{±𝔞⁺}`, summed exactly:
/// `(e^{±𝔞}f)_s = Σₙ (±1)ⁿ/n! Tr_{s+1..s+n} f_{s+n}` and
/// `(e^{±𝔞⁺}g)_s = Σ_{A⊆Y} (±1)^{|A|} g_{s−|A|}(Y∖A)`.
pub fn exp_ladder(sign: Sign, which: Ladder, x: &OperatorSequence) -> Result<OperatorSequence> {
    let nm = x.n_max();
    let sg = sign.value();
    let mut out = Vec::with_capacity(nm + 1);
    for s in 0..=nm {
        let mut acc = zeros(x.d(), s)?;
        match which {
            Ladder::Annihilation => {
                for n in 0..=nm - s {
                    let tr = trace_tail(x.entry(s + n), s)?;
                    acc += tr * C64::new(libm::pow(sg, n as f64) / factorial(n), 0.0);
                }
            }
            Ladder::Creation => {
                let y = first(s);
                for n in 0..=s {
                    let w = C64::new(libm::pow(sg, n as f64), 0.0);
                    for a in subsets_of_size(&y, n) {
                        acc += place(x, &label_difference(&y, &a), &y)?.data() * w;
                    }
                }
            }
        }
        out.push(acc);
    }
    x.with_entries(out)
}

// ---------------------------------------------------------------------------
// BBGKY hierarchy

/// `(U(t)f)_s = Σₙ (1/n!) Tr_{s+1..s+n} 𝔄_{1+n}(t, Y₁, s+1, …, s+n) f_{s+n}`.
///
/// Entry 0 is `f₀`: every cumulant of order ≥ 2 with the vacuum as cluster
/// vanishes identically.
pub fn bbgky_evolve(dy: &Dynamics, t: f64, f: &OperatorSequence) -> Result<HierarchyResult> {
    validate(dy, f, SequenceKind::State)?;
    let nm = f.n_max();
    let mut out = vec![f.entry(0).data().clone()];
    for s in 1..=nm {
        let mut acc = zeros(f.d(), s)?;
        for n in 0..=nm - s {
            let a = bbgky_cumulant(dy, t, s, n, f.entry(s + n))?;
            acc += trace_tail(&a, s)? / C64::new(factorial(n), 0.0);
        }
        out.push(acc);
    }
    Ok(result(f.with_entries(out)?, Hierarchy::Bbgky, Formula::Expansion))
}

/// `(𝔅f)_s = −𝒩_s f_s + Σ_{n≥1} (1/n!) Tr_{s+1..s+n} Σ_{∅≠Z⊆Y} (−𝒩_int^{(|Z|+n)})(Z, s+1, …, s+n) f_{s+n}`.
pub fn bbgky_generator(dy: &Dynamics, f: &OperatorSequence) -> Result<OperatorSequence> {
    validate(dy, f, SequenceKind::State)?;
    let nm = f.n_max();
    let mut out = vec![Matrix::zeros(1, 1)];
    for s in 1..=nm {
        let y = first(s);
        let mut acc = dy.generator_state(f.entry(s))?.into_data();
        for n in 1..=nm - s {
            let x = range(s + 1, s + n);
            let fsn = f.entry(s + n);
            let mut inner = zeros(f.d(), s + n)?;
            for z in nonempty_subsets(&y)? {
                if has_potential(dy, z.len() + n) {
                    inner -= dy.interaction_generator(&label_union(&z, &x), fsn)?.data();
                }
            }
            acc += trace_tail(&fsn.with_data(inner)?, s)? / C64::new(factorial(n), 0.0);
        }
        out.push(acc);
    }
    f.with_entries(out)
}

/// `U(t) = e^{𝔞} 𝒢(−t) e^{−𝔞}`. At `t = 0` the conjugation is the identity
/// and the input comes back unchanged.
pub fn bbgky_evolve_conjugated(dy: &Dynamics, t: f64, f: &OperatorSequence) -> Result<HierarchyResult> {
    validate(dy, f, SequenceKind::State)?;
    if t == 0.0 {
        return Ok(result(f.clone(), Hierarchy::Bbgky, Formula::Conjugated));
    }
    let inner = exp_ladder(Sign::Minus, Ladder::Annihilation, f)?;
    let evolved = dy.evolve_state_sequence(t, &inner)?;
    let out = exp_ladder(Sign::Plus, Ladder::Annihilation, &evolved)?;
    Ok(result(out, Hierarchy::Bbgky, Formula::Conjugated))
}

/// `(U(t)f)_s = 𝔄₁(t,Y) f_s + Σ_{n≥1} (1/n!) Tr_{s+1..s+n} Σ_{∅≠Z⊆X∖Y} (−1)^{n−|Z|} 𝔄₂(t, Y, Z) f_{s+n}`.
fn bbgky_second_order(dy: &Dynamics, t: f64, f: &OperatorSequence) -> Result<HierarchyResult> {
    validate(dy, f, SequenceKind::State)?;
    let nm = f.n_max();
    let mut out = vec![f.entry(0).data().clone()];
    for s in 1..=nm {
        let y = first(s);
        let mut acc = dy.evolve_state(t, f.entry(s))?.into_data();
        for n in 1..=nm - s {
            let x = range(s + 1, s + n);
            let fsn = f.entry(s + n);
            let mut inner = zeros(f.d(), s + n)?;
            for z in nonempty_subsets(&x)? {
                let clusters = ClusterSet::from_blocks(&[y.clone(), z.clone()])?;
                let a2 = apply(dy, t, &clusters, Direction::Forward, fsn)?;
                inner += a2.data() * C64::new(parity(n - z.len()), 0.0);
            }
            acc += trace_tail(&fsn.with_data(inner)?, s)? / C64::new(factorial(n), 0.0);
        }
        out.push(acc);
    }
    Ok(result(f.with_entries(out)?, Hierarchy::Bbgky, Formula::SecondOrder))
}

/// Marginals `F_s = (1/(N−s)!) Tr_{s+1..N} f_N` of an N-particle state, i.e.
/// `e^{𝔞}` applied to the sequence holding only `f_N`.
pub fn marginals_of_state(f_n: &NParticleOperator, weight: f64) -> Result<OperatorSequence> {
    let n = f_n.n_particles();
    if f_n.labels() != first(n).as_slice() {
        return Err(Error::Label("the state must act on 1..=N".into()));
    }
    let d = f_n.d();
    let mut entries: Vec<Matrix> = (0..n).map(|k| zeros(d, k)).collect::<Result<_>>()?;
    entries.push(f_n.data().clone());
    let only = OperatorSequence::new(d, SequenceKind::State, weight, entries)?;
    exp_ladder(Sign::Plus, Ladder::Annihilation, &only)
}

// ---------------------------------------------------------------------------
// Dual BBGKY hierarchy

/// `(U⁺(t)g)_s = Σₙ Σ_{J⊆Y, |J|=s−n} 𝔄⁺_{1+n}(t, J₁, Y∖J) g_{s−n}(J)`.
///
/// Terms with `J = ∅` and `s ≥ 1` are cumulants with the vacuum as cluster
/// and vanish identically; entry 0 is `g₀`.
pub fn dual_bbgky_evolve(dy: &Dynamics, t: f64, g: &OperatorSequence) -> Result<HierarchyResult> {
    validate(dy, g, SequenceKind::Observable)?;
    let mut out = vec![g.entry(0).data().clone()];
    for s in 1..=g.n_max() {
        let y = first(s);
        let mut acc = zeros(g.d(), s)?;
        for n in 0..s {
            for j in subsets_of_size(&y, s - n) {
                let x = label_difference(&y, &j);
                let target = place(g, &j, &y)?;
                let mut elements = vec![ClusterElement::Cluster(j)];
                elements.extend(x.into_iter().map(ClusterElement::Atom));
                let clusters = ClusterSet::new(elements)?;
                acc += apply(dy, t, &clusters, Direction::Dual, &target)?.data();
            }
        }
        out.push(acc);
    }
    Ok(result(g.with_entries(out)?, Hierarchy::Dual, Formula::Expansion))
}

/// `(𝔅⁺g)_s = 𝒩_s g_s + Σ_{∅≠A⊆Y} Σ_{∅≠B⊆Y∖A} 𝒩_int^{(|A|+|B|)}(A∪B) g_{s−|A|}(Y∖A)`.
pub fn dual_bbgky_generator(dy: &Dynamics, g: &OperatorSequence) -> Result<OperatorSequence> {
    validate(dy, g, SequenceKind::Observable)?;
    let mut out = vec![Matrix::zeros(1, 1)];
    for s in 1..=g.n_max() {
        let y = first(s);
        let mut acc = dy.generator_observable(g.entry(s))?.into_data();
        for a in nonempty_subsets(&y)? {
            let rest = label_difference(&y, &a);
            let target = place(g, &rest, &y)?;
            for b in nonempty_subsets(&rest)? {
                if has_potential(dy, a.len() + b.len()) {
                    acc += dy.interaction_generator(&label_union(&a, &b), &target)?.data();
                }
            }
        }
        out.push(acc);
    }
    g.with_entries(out)
}

/// `U⁺(t) = e^{−𝔞⁺} 𝒢(t) e^{𝔞⁺}`, the identity at `t = 0`.
pub fn dual_evolve_conjugated(dy: &Dynamics, t: f64, g: &OperatorSequence) -> Result<HierarchyResult> {
    validate(dy, g, SequenceKind::Observable)?;
    if t == 0.0 {
        return Ok(result(g.clone(), Hierarchy::Dual, Formula::Conjugated));
    }
    let inner = exp_ladder(Sign::Plus, Ladder::Creation, g)?;
    let evolved = dy.evolve_observable_sequence(t, &inner)?;
    let out = exp_ladder(Sign::Minus, Ladder::Creation, &evolved)?;
    Ok(result(out, Hierarchy::Dual, Formula::Conjugated))
}

/// `(U⁺(t)g)_s = 𝔄⁺₁(t,Y) g_s + Σ_{∅≠J⊊Y} Σ_{∅≠Z⊆Y∖J} (−1)^{|Y∖J∖Z|} 𝔄⁺₂(t, J, Z) g_{|J|}(J)`.
fn dual_second_order(dy: &Dynamics, t: f64, g: &OperatorSequence) -> Result<HierarchyResult> {
    validate(dy, g, SequenceKind::Observable)?;
    let mut out = vec![g.entry(0).data().clone()];
    for s in 1..=g.n_max() {
        let y = first(s);
        let mut acc = dy.evolve_observable(t, g.entry(s))?.into_data();
        for j in nonempty_subsets(&y)?.into_iter().filter(|j| j.len() < s) {
            let x = label_difference(&y, &j);
            let target = place(g, &j, &y)?;
            for z in nonempty_subsets(&x)? {
                let sign = parity(x.len() - z.len());
                let clusters = ClusterSet::from_blocks(&[j.clone(), z])?;
                acc += apply(dy, t, &clusters, Direction::Dual, &target)?.data() * C64::new(sign, 0.0);
            }
        }
        out.push(acc);
    }
    Ok(result(g.with_entries(out)?, Hierarchy::Dual, Formula::SecondOrder))
}

/// The first- plus second-order cumulant re-expansion of `U(t)` (state
/// input) or `U⁺(t)` (observable input).
pub fn second_order_reexpansion(dy: &Dynamics, t: f64, x: &OperatorSequence) -> Result<HierarchyResult> {
    match x.kind() {
        SequenceKind::State => bbgky_second_order(dy, t, x),
        SequenceKind::Observable => dual_second_order(dy, t, x),
    }
}

/// Dispatches on hierarchy and formula. The von Neumann hierarchy has only
/// the expansion.
pub fn evolve(dy: &Dynamics, hierarchy: Hierarchy, formula: Formula, t: f64, x: &OperatorSequence) -> Result<HierarchyResult> {
    match (hierarchy, formula) {
        (Hierarchy::VonNeumann, Formula::Expansion) => von_neumann_evolve(dy, t, x),
        (Hierarchy::VonNeumann, _) => Err(Error::Validation(
            "the von Neumann hierarchy is only available as an expansion".into(),
        )),
        (Hierarchy::Bbgky, Formula::Expansion) => bbgky_evolve(dy, t, x),
        (Hierarchy::Bbgky, Formula::Conjugated) => bbgky_evolve_conjugated(dy, t, x),
        (Hierarchy::Bbgky, Formula::SecondOrder) => bbgky_second_order(dy, t, x),
        (Hierarchy::Dual, Formula::Expansion) => dual_bbgky_evolve(dy, t, x),
        (Hierarchy::Dual, Formula::Conjugated) => dual_evolve_conjugated(dy, t, x),
        (Hierarchy::Dual, Formula::SecondOrder) => dual_second_order(dy, t, x),
    }
}

// ---------------------------------------------------------------------------
// Bounds and convergence

/// `n! e^{2n+1} cⁿ`, bounding `‖(𝔄_t(f))ₙ‖₁` when `c = maxₖ ‖fₖ‖₁ ≥ 1`.
pub fn von_neumann_bound(n: usize, c: f64) -> f64 {
    factorial(n) * libm::exp((2 * n + 1) as f64) * libm::pow(c, n as f64)
}

/// `n! e^{n+2}`, bounding `‖𝔄_{1+n}(t) f_{s+n}‖₁ / ‖f_{s+n}‖₁`.
pub fn bbgky_cumulant_bound(n: usize) -> f64 {
    factorial(n) * libm::exp((n + 2) as f64)
}

/// `e²(1 − e/α)⁻¹`, bounding `‖U(t)‖` on the α-weighted space; needs `α > e`.
pub fn bbgky_norm_constant(alpha: f64) -> f64 {
    let e = core::f64::consts::E;
    e * e / (1.0 - e / alpha)
}

/// `e²(1 − γe)⁻¹`, bounding `‖U⁺(t)‖` on the γ-weighted space; needs `γ < 1/e`.
pub fn dual_norm_constant(gamma: f64) -> f64 {
    let e = core::f64::consts::E;
    e * e / (1.0 - gamma * e)
}

fn total_trace_norm(x: &OperatorSequence) -> f64 {
    x.entries().iter().map(|e| e.trace_norm()).sum()
}

/// Forward-difference check `(1/h)(evolve(h) − x) → limit`, residuals summed
/// over entries in trace norm.
pub fn sequence_generator_check<F>(steps: &[f64], x: &OperatorSequence, limit: &OperatorSequence, evolve: F) -> Result<ConvergenceReport>
where
    F: Fn(f64) -> Result<OperatorSequence>,
{
    let mut residuals = Vec::with_capacity(steps.len());
    for &h in steps {
        let xh = evolve(h)?;
        let r: f64 = xh
            .entries()
            .iter()
            .zip(x.entries())
            .zip(limit.entries())
            .map(|((a, b), l)| trace_norm(&((a.data() - b.data()) / C64::new(h, 0.0) - l.data())))
            .sum();
        residuals.push(r);
    }
    Ok(ConvergenceReport::new(
        steps.to_vec(),
        residuals,
        total_trace_norm(limit),
        total_trace_norm(x),
    ))
}

#[cfg(test)]
mod tests;
