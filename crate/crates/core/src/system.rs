use alloc::collections::BTreeMap;
use alloc::format;

use crate::error::{Error, Result};
use crate::linalg::{dim_pow, exchange_asymmetry, hermitian_defect, operator_norm, Matrix, VALIDATION_TOL};

/// Largest many-particle Hilbert-space dimension accepted by default.
pub const DEFAULT_DIM_CAP: usize = 4096;

/// The physical model: a `d`-level particle with a one-body Hamiltonian and a
/// finite collection of exchange-symmetric k-body interaction potentials.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemSpec {
    d: usize,
    hbar: f64,
    n_max: usize,
    one_body: Matrix,
    potentials: BTreeMap<usize, Matrix>,
    dim_cap: usize,
}

impl SystemSpec {
    /// Validates every invariant; a missing potential order is the zero operator.
    pub fn new(
        d: usize,
        hbar: f64,
        n_max: usize,
        one_body: Matrix,
        potentials: BTreeMap<usize, Matrix>,
    ) -> Result<Self> {
        Self::with_dim_cap(d, hbar, n_max, one_body, potentials, DEFAULT_DIM_CAP)
    }

    pub fn with_dim_cap(
        d: usize,
        hbar: f64,
        n_max: usize,
        one_body: Matrix,
        potentials: BTreeMap<usize, Matrix>,
        dim_cap: usize,
    ) -> Result<Self> {
        if d < 2 {
            return Err(Error::Validation(format!("single-particle dimension must be >= 2, got {d}")));
        }
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::Validation(format!("hbar must be positive and finite, got {hbar}")));
        }
        if n_max < 1 {
            return Err(Error::Validation("n_max must be >= 1".into()));
        }
        let full = dim_pow(d, n_max)?;
        if full > dim_cap {
            return Err(Error::Resource {
                what: "d^n_max",
                requested: full,
                limit: dim_cap,
            });
        }
        check_hermitian("one-body operator", &one_body, d)?;
        for (&k, phi) in &potentials {
            if k < 2 {
                return Err(Error::Validation(format!("potential order must be >= 2, got {k}")));
            }
            let side = dim_pow(d, k)?;
            let name = format!("{k}-body potential");
            check_hermitian(&name, phi, side)?;
            let asym = exchange_asymmetry(phi, d, k);
            if asym > VALIDATION_TOL {
                return Err(Error::Validation(format!(
                    "{name} is not exchange-symmetric (relative defect {asym:e})"
                )));
            }
        }
        Ok(Self {
            d,
            hbar,
            n_max,
            one_body,
            potentials,
            dim_cap,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dim_cap(&self) -> usize {
        self.dim_cap
    }

    pub fn one_body(&self) -> &Matrix {
        &self.one_body
    }

    /// The k-body potential, if declared.
    pub fn potential(&self, k: usize) -> Option<&Matrix> {
        self.potentials.get(&k)
    }

    pub fn potentials(&self) -> &BTreeMap<usize, Matrix> {
        &self.potentials
    }

    /// Same system with every interaction removed.
    pub fn free(&self) -> Self {
        Self {
            potentials: BTreeMap::new(),
            ..self.clone()
        }
    }

    /// Same system with a different particle-number truncation.
    pub fn with_n_max(&self, n_max: usize) -> Result<Self> {
        Self::with_dim_cap(
            self.d,
            self.hbar,
            n_max,
            self.one_body.clone(),
            self.potentials.clone(),
            self.dim_cap,
        )
    }
}

fn check_hermitian(name: &str, m: &Matrix, side: usize) -> Result<()> {
    if m.nrows() != side || m.ncols() != side {
        return Err(Error::Validation(format!(
            "{name} must be {side}x{side}, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let defect = hermitian_defect(m);
    if defect > VALIDATION_TOL * operator_norm(m).max(1.0) {
        return Err(Error::Validation(format!(
            "{name} is not Hermitian (anti-Hermitian part has norm {defect:e})"
        )));
    }
    Ok(())
}
