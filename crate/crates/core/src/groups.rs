//! Unitary conjugation groups on n-particle operators and on finite
//! operator sequences.
//!
//! `𝒢(−t)f = U(−t) f U(−t)†` with `U(−t) = exp(−i t H/ħ)` evolves states;
//! `𝒢(t)g = U(t) g U(t)†` evolves observables. The two are dual under
//! [`bilinear_form`].

use alloc::format;
use alloc::vec::Vec;

use crate::error::{label_err, Error, Result};
use crate::linalg::{
    conjugate, dim_pow, embed, exchange_asymmetry, HermitianEigen, Matrix, NParticleOperator, C64,
};
use crate::partitions::subsets_of_size;
use crate::system::SystemSpec;

/// Exchange-symmetry tolerance for sequence entries.
pub const SYMMETRY_TOL: f64 = 1e-10;

/// Which one-parameter group a computation uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// `𝒢(−t)`, acting on states.
    Forward,
    /// `𝒢(t)`, acting on observables.
    Dual,
}

impl Direction {
    /// Phase parameter θ such that the propagator is `exp(−iθH)`.
    fn theta(self, t: f64, hbar: f64) -> f64 {
        match self {
            Direction::Forward => t / hbar,
            Direction::Dual => -t / hbar,
        }
    }
}

/// `H_n` on the labels `1..=n`: one-body terms on every particle plus each
/// declared k-body potential on every k-subset. `H_0 = 0`.
pub fn build_hamiltonian(spec: &SystemSpec, n: usize) -> Result<NParticleOperator> {
    let labels: Vec<usize> = (1..=n).collect();
    hamiltonian_on(spec, &labels)
}

fn hamiltonian_on(spec: &SystemSpec, labels: &[usize]) -> Result<NParticleOperator> {
    let d = spec.d();
    let side = dim_pow(d, labels.len())?;
    if side > spec.dim_cap() {
        return Err(Error::Resource {
            what: "Hamiltonian dimension",
            requested: side,
            limit: spec.dim_cap(),
        });
    }
    let mut h = NParticleOperator::zeros(labels.to_vec(), d)?;
    for &i in labels {
        let term = NParticleOperator::new(alloc::vec![i], d, spec.one_body().clone())?;
        h = h.add(&embed(&term, labels)?)?;
    }
    for (&k, phi) in spec.potentials() {
        for subset in subsets_of_size(labels, k) {
            let term = NParticleOperator::new(subset, d, phi.clone())?;
            h = h.add(&embed(&term, labels)?)?;
        }
    }
    Ok(h)
}

/// Role of a sequence: trace-class states or bounded observables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SequenceKind {
    State,
    Observable,
}

/// A finite sequence `(f_0, f_1, …, f_N)`; entry `n` acts on labels `1..=n`.
///
/// `weight` is α for states (norm `Σ αⁿ‖fₙ‖₁`) and γ for observables
/// (norm `max γⁿ/n! ‖gₙ‖_op`).
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSequence {
    d: usize,
    kind: SequenceKind,
    weight: f64,
    entries: Vec<NParticleOperator>,
}

impl OperatorSequence {
    pub fn new(d: usize, kind: SequenceKind, weight: f64, entries: Vec<Matrix>) -> Result<Self> {
        if !(weight.is_finite() && weight > 0.0) {
            return Err(Error::Validation(format!("sequence weight must be positive, got {weight}")));
        }
        if entries.is_empty() {
            return Err(Error::Validation("a sequence needs at least the vacuum entry".into()));
        }
        let entries = entries
            .into_iter()
            .enumerate()
            .map(|(n, m)| NParticleOperator::on_first(n, d, m))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            d,
            kind,
            weight,
            entries,
        })
    }

    pub fn zeros(d: usize, n_max: usize, kind: SequenceKind, weight: f64) -> Result<Self> {
        let entries = (0..=n_max)
            .map(|n| dim_pow(d, n).map(|s| Matrix::zeros(s, s)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(d, kind, weight, entries)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn kind(&self) -> SequenceKind {
        self.kind
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn n_max(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn entry(&self, n: usize) -> &NParticleOperator {
        &self.entries[n]
    }

    pub fn entries(&self) -> &[NParticleOperator] {
        &self.entries
    }

    /// Rebuild with new entry matrices, keeping d, kind and weight.
    pub fn with_entries(&self, entries: Vec<Matrix>) -> Result<Self> {
        Self::new(self.d, self.kind, self.weight, entries)
    }

    pub fn with_kind(&self, kind: SequenceKind, weight: f64) -> Result<Self> {
        let entries = self.entries.iter().map(|e| e.data().clone()).collect();
        Self::new(self.d, kind, weight, entries)
    }

    /// Replaces entry `n`.
    pub fn set_entry(&mut self, n: usize, data: Matrix) -> Result<()> {
        self.entries[n] = NParticleOperator::on_first(n, self.d, data)?;
        Ok(())
    }

    /// `Σ αⁿ‖fₙ‖₁` for states, `max γⁿ/n! ‖gₙ‖_op` for observables.
    pub fn norm(&self) -> f64 {
        match self.kind {
            SequenceKind::State => self
                .entries
                .iter()
                .enumerate()
                .map(|(n, e)| libm::pow(self.weight, n as f64) * e.trace_norm())
                .sum(),
            SequenceKind::Observable => {
                let mut fact = 1.0;
                let mut best: f64 = 0.0;
                for (n, e) in self.entries.iter().enumerate() {
                    if n > 0 {
                        fact *= n as f64;
                    }
                    best = best.max(libm::pow(self.weight, n as f64) / fact * e.operator_norm());
                }
                best
            }
        }
    }

    /// Fails unless every entry is invariant under permutations of its factors.
    pub fn check_exchange_symmetric(&self) -> Result<()> {
        for (n, e) in self.entries.iter().enumerate() {
            let asym = exchange_asymmetry(e.data(), self.d, n);
            if asym > SYMMETRY_TOL {
                return Err(Error::Validation(format!(
                    "entry {n} is not exchange-symmetric (relative defect {asym:e})"
                )));
            }
        }
        Ok(())
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.d != other.d || self.n_max() != other.n_max() {
            return Err(Error::Mismatch(format!(
                "sequences differ in shape: d {} / {}, n_max {} / {}",
                self.d,
                other.d,
                self.n_max(),
                other.n_max()
            )));
        }
        Ok(())
    }

    /// Entrywise `self − other`.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.data() - b.data())
            .collect();
        self.with_entries(entries)
    }

    /// Entrywise `self + factor·other`.
    pub fn add_scaled(&self, factor: f64, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.data() + b.data() * C64::new(factor, 0.0))
            .collect();
        self.with_entries(entries)
    }

    pub fn scale(&self, factor: f64) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|e| e.scale(C64::new(factor, 0.0)))
            .collect();
        Self {
            entries,
            ..self.clone()
        }
    }

    /// Largest per-entry trace-norm distance.
    pub fn max_trace_distance(&self, other: &Self) -> Result<f64> {
        self.compatible(other)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| crate::linalg::trace_norm(&(a.data() - b.data())))
            .fold(0.0, f64::max))
    }

    /// Largest per-entry operator-norm distance.
    pub fn max_operator_distance(&self, other: &Self) -> Result<f64> {
        self.compatible(other)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| crate::linalg::operator_norm(&(a.data() - b.data())))
            .fold(0.0, f64::max))
    }

    /// Largest per-entry trace norm.
    pub fn max_trace_norm(&self) -> f64 {
        self.entries.iter().map(|e| e.trace_norm()).fold(0.0, f64::max)
    }
}

/// `⟨g|f⟩ = Σₙ (1/n!) Tr gₙ fₙ`.
pub fn bilinear_form(g: &OperatorSequence, f: &OperatorSequence) -> Result<C64> {
    if g.kind != SequenceKind::Observable || f.kind != SequenceKind::State {
        return Err(Error::Mismatch("bilinear form pairs an observable with a state".into()));
    }
    g.compatible(f)?;
    let mut fact = 1.0;
    let mut acc = C64::new(0.0, 0.0);
    for (n, (gn, fn_)) in g.entries.iter().zip(&f.entries).enumerate() {
        if n > 0 {
            fact *= n as f64;
        }
        acc += (gn.data() * fn_.data()).trace() / fact;
    }
    Ok(acc)
}

/// Hamiltonians `H_0 … H_{N}` with their spectral decompositions, built once
/// per system. `H_X` on any label set depends only on `|X|` because every
/// potential is exchange-symmetric, so one decomposition per particle count
/// serves every block.
#[derive(Debug, Clone)]
pub struct Dynamics {
    spec: SystemSpec,
    hamiltonians: Vec<Matrix>,
    spectra: Vec<HermitianEigen>,
}

impl Dynamics {
    pub fn new(spec: SystemSpec) -> Result<Self> {
        let mut hamiltonians = Vec::with_capacity(spec.n_max() + 1);
        let mut spectra = Vec::with_capacity(spec.n_max() + 1);
        for n in 0..=spec.n_max() {
            let h = build_hamiltonian(&spec, n)?.into_data();
            spectra.push(HermitianEigen::new(&h)?);
            hamiltonians.push(h);
        }
        Ok(Self {
            spec,
            hamiltonians,
            spectra,
        })
    }

    pub fn spec(&self) -> &SystemSpec {
        &self.spec
    }

    pub fn d(&self) -> usize {
        self.spec.d()
    }

    pub fn hbar(&self) -> f64 {
        self.spec.hbar()
    }

    pub fn n_max(&self) -> usize {
        self.spec.n_max()
    }

    fn check_count(&self, n: usize) -> Result<()> {
        if n > self.spec.n_max() {
            return Err(Error::Resource {
                what: "particle number",
                requested: n,
                limit: self.spec.n_max(),
            });
        }
        Ok(())
    }

    fn check_d(&self, op: &NParticleOperator) -> Result<()> {
        if op.d() != self.spec.d() {
            return Err(Error::Mismatch(format!(
                "operator has d = {}, system has d = {}",
                op.d(),
                self.spec.d()
            )));
        }
        Ok(())
    }

    /// `H_n` on labels `1..=n`.
    pub fn hamiltonian(&self, n: usize) -> Result<NParticleOperator> {
        self.check_count(n)?;
        NParticleOperator::on_first(n, self.d(), self.hamiltonians[n].clone())
    }

    /// The group's unitary for `block`, embedded into `ambient`. An empty
    /// block gives the identity.
    pub fn block_unitary(&self, direction: Direction, t: f64, block: &[usize], ambient: &[usize]) -> Result<Matrix> {
        self.check_count(block.len())?;
        let u = self.spectra[block.len()].propagator(direction.theta(t, self.hbar()));
        let op = NParticleOperator::new(block.to_vec(), self.d(), u)?;
        Ok(embed(&op, ambient)?.into_data())
    }

    fn evolve(&self, direction: Direction, t: f64, f: &NParticleOperator) -> Result<NParticleOperator> {
        self.check_d(f)?;
        self.check_count(f.n_particles())?;
        let u = self.spectra[f.n_particles()].propagator(direction.theta(t, self.hbar()));
        f.with_data(conjugate(&u, f.data()))
    }

    /// `𝒢(−t)f = U(−t) f U(−t)†`.
    pub fn evolve_state(&self, t: f64, f: &NParticleOperator) -> Result<NParticleOperator> {
        self.evolve(Direction::Forward, t, f)
    }

    /// `𝒢(t)g = U(t) g U(t)†`.
    pub fn evolve_observable(&self, t: f64, g: &NParticleOperator) -> Result<NParticleOperator> {
        self.evolve(Direction::Dual, t, g)
    }

    fn commutator_with_h(&self, f: &NParticleOperator) -> Result<Matrix> {
        self.check_d(f)?;
        self.check_count(f.n_particles())?;
        let h = &self.hamiltonians[f.n_particles()];
        Ok(h * f.data() - f.data() * h)
    }

    /// `−𝒩f = −(i/ħ)(Hf − fH)`.
    pub fn generator_state(&self, f: &NParticleOperator) -> Result<NParticleOperator> {
        let c = self.commutator_with_h(f)?;
        f.with_data(c * C64::new(0.0, -1.0 / self.hbar()))
    }

    /// `𝒩g = −(i/ħ)(gH − Hg)`.
    pub fn generator_observable(&self, g: &NParticleOperator) -> Result<NParticleOperator> {
        let c = self.commutator_with_h(g)?;
        g.with_data(c * C64::new(0.0, 1.0 / self.hbar()))
    }

    /// `𝒩_int^{(k)} f = −(i/ħ)(fΦ − Φf)` with `Φ = Φ^{(k)}` on `k_labels`
    /// inside the labels of `f`; zero when no k-body potential is declared.
    pub fn interaction_generator(&self, k_labels: &[usize], f: &NParticleOperator) -> Result<NParticleOperator> {
        self.check_d(f)?;
        if k_labels.iter().any(|l| !f.labels().contains(l)) {
            return Err(label_err("interaction labels are not inside the operator's labels", k_labels));
        }
        let Some(phi) = self.spec.potential(k_labels.len()) else {
            return f.with_data(Matrix::zeros(f.data().nrows(), f.data().ncols()));
        };
        let phi = embed(&NParticleOperator::new(k_labels.to_vec(), self.d(), phi.clone())?, f.labels())?;
        let c = f.data() * phi.data() - phi.data() * f.data();
        f.with_data(c * C64::new(0.0, -1.0 / self.hbar()))
    }

    /// `𝒢(−t)` applied entrywise to a sequence.
    pub fn evolve_state_sequence(&self, t: f64, f: &OperatorSequence) -> Result<OperatorSequence> {
        self.map_sequence(f, |e| self.evolve_state(t, e))
    }

    /// `𝒢(t)` applied entrywise to a sequence.
    pub fn evolve_observable_sequence(&self, t: f64, g: &OperatorSequence) -> Result<OperatorSequence> {
        self.map_sequence(g, |e| self.evolve_observable(t, e))
    }

    /// `−𝒩` applied entrywise.
    pub fn generator_state_sequence(&self, f: &OperatorSequence) -> Result<OperatorSequence> {
        self.map_sequence(f, |e| self.generator_state(e))
    }

    /// `𝒩` applied entrywise.
    pub fn generator_observable_sequence(&self, g: &OperatorSequence) -> Result<OperatorSequence> {
        self.map_sequence(g, |e| self.generator_observable(e))
    }

    pub(crate) fn check_sequence(&self, f: &OperatorSequence) -> Result<()> {
        if f.d() != self.d() {
            return Err(Error::Mismatch(format!("sequence has d = {}, system has d = {}", f.d(), self.d())));
        }
        self.check_count(f.n_max())
    }

    fn map_sequence<F>(&self, f: &OperatorSequence, op: F) -> Result<OperatorSequence>
    where
        F: Fn(&NParticleOperator) -> Result<NParticleOperator>,
    {
        self.check_sequence(f)?;
        let entries = f
            .entries()
            .iter()
            .map(|e| op(e).map(NParticleOperator::into_data))
            .collect::<Result<Vec<_>>>()?;
        f.with_entries(entries)
    }
}
