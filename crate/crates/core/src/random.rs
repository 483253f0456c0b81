//! Seeded random operators and sequences for tests and verification runs.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::groups::{OperatorSequence, SequenceKind};
use crate::linalg::{symmetrize, Matrix, C64};

/// Deterministic generator; the same seed always yields the same stream.
#[derive(Debug, Clone)]
pub struct OperatorSampler {
    rng: ChaCha8Rng,
}

impl OperatorSampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Uniform in `[-max, max]`.
    pub fn time(&mut self, max: f64) -> f64 {
        self.rng.random_range(-max..=max)
    }

    /// Uniform in `[lo, hi]`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..=hi)
    }

    /// Entries i.i.d. standard complex Gaussian (variance ½ per part).
    pub fn gaussian_matrix(&mut self, side: usize) -> Matrix {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        Matrix::from_fn(side, side, |_, _| C64::new(0.0, 0.0))
            .map(|_| C64::new(s * self.normal(), s * self.normal()))
    }

    /// `(B + B†)/2` for Gaussian `B`.
    pub fn hermitian(&mut self, side: usize) -> Matrix {
        let b = self.gaussian_matrix(side);
        (&b + b.adjoint()) * C64::new(0.5, 0.0)
    }

    /// Trace-one positive matrix `B†B / Tr B†B`.
    pub fn density(&mut self, side: usize) -> Matrix {
        let b = self.gaussian_matrix(side);
        let p = b.adjoint() * b;
        let tr = p.trace();
        p / tr
    }

    /// Exchange-symmetric Hermitian operator on `n` particles.
    pub fn symmetric_hermitian(&mut self, d: usize, n: usize) -> Matrix {
        let h = self.hermitian(d.pow(n as u32));
        symmetrize(&h, d, n)
    }

    /// Exchange-symmetric density matrix on `n` particles.
    pub fn symmetric_density(&mut self, d: usize, n: usize) -> Matrix {
        let p = self.density(d.pow(n as u32));
        symmetrize(&p, d, n)
    }

    /// Exchange-symmetric Hermitian state sequence. Entry 0 is a real scalar.
    pub fn state_sequence(&mut self, d: usize, n_max: usize, alpha: f64) -> OperatorSequence {
        let entries = self.entries(d, n_max);
        OperatorSequence::new(d, SequenceKind::State, alpha, entries).expect("shapes are consistent")
    }

    /// Exchange-symmetric Hermitian observable sequence.
    pub fn observable_sequence(&mut self, d: usize, n_max: usize, gamma: f64) -> OperatorSequence {
        let entries = self.entries(d, n_max);
        OperatorSequence::new(d, SequenceKind::Observable, gamma, entries).expect("shapes are consistent")
    }

    /// Sequence of symmetric density matrices, each scaled to trace `scale`.
    pub fn density_sequence(&mut self, d: usize, n_max: usize, alpha: f64, scale: f64) -> OperatorSequence {
        let entries = (0..=n_max)
            .map(|n| self.symmetric_density(d, n) * C64::new(scale, 0.0))
            .collect();
        OperatorSequence::new(d, SequenceKind::State, alpha, entries).expect("shapes are consistent")
    }

    fn entries(&mut self, d: usize, n_max: usize) -> Vec<Matrix> {
        (0..=n_max).map(|n| self.symmetric_hermitian(d, n)).collect()
    }
}
