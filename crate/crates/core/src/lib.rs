//! Cumulant expansions of unitary groups on many-particle operator spaces,
//! and the hierarchies of evolution equations they generate.
//!
//! Finite-dimensional throughout: each particle carries a `d`-level space and
//! particle numbers are truncated at `n_max`. Operators on `n` particles are
//! dense `dⁿ × dⁿ` complex matrices with tensor factors in ascending label
//! order (first label is the most significant index digit).
//!
//! - [`linalg`]: embedding, partial trace, propagators, norms.
//! - [`system`]: the model (one-body term, k-body potentials, ħ, truncation).
//! - [`partitions`]: set partitions, cluster sets, combinatorial identities.
//! - [`groups`]: the conjugation groups `𝒢(±t)` and their generators.
//! - [`cumulants`]: cumulants of the groups over clusters.
//! - [`hierarchies`]: von Neumann, BBGKY and dual BBGKY evolution.
//! - [`random`]: seeded test operators.

#![no_std]

extern crate alloc;

pub mod cumulants;
pub mod error;
pub mod groups;
pub mod hierarchies;
pub mod linalg;
pub mod partitions;
pub mod random;
pub mod system;

pub use error::{Error, Result};
pub use groups::{bilinear_form, build_hamiltonian, Direction, Dynamics, OperatorSequence, SequenceKind};
pub use linalg::{Matrix, NParticleOperator, C64};
pub use system::SystemSpec;
