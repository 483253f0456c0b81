//! Dense complex-operator kernels on tensor products of a `d`-dimensional
//! single-particle space.
//!
//! Tensor factors are always ordered by ascending particle label, with the
//! smallest label as the most significant digit of the basis index. Every
//! subset embedding and partial trace is an index remapping under that
//! convention.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{label_err, Error, Result};

pub type C64 = Complex64;
pub type Matrix = DMatrix<C64>;

/// Relative anti-Hermitian residual allowed for operators flagged Hermitian.
pub const HERMITIAN_REL_TOL: f64 = 1e-12;

/// Relative tolerance used when validating user-supplied operators.
pub const VALIDATION_TOL: f64 = 1e-10;

/// A dense operator on the tensor product of the factors named by `labels`.
#[derive(Debug, Clone, PartialEq)]
pub struct NParticleOperator {
    labels: Vec<usize>,
    d: usize,
    data: Matrix,
}

impl NParticleOperator {
    pub fn new(labels: Vec<usize>, d: usize, data: Matrix) -> Result<Self> {
        check_labels(&labels)?;
        if d == 0 {
            return Err(Error::Validation("single-particle dimension must be positive".into()));
        }
        let side = dim_pow(d, labels.len())?;
        if data.nrows() != side || data.ncols() != side {
            return Err(Error::Mismatch(format!(
                "operator on {} particles with d = {d} needs side {side}, got {}x{}",
                labels.len(),
                data.nrows(),
                data.ncols()
            )));
        }
        Ok(Self { labels, d, data })
    }

    /// Operator on the canonical labels `1..=n`.
    pub fn on_first(n: usize, d: usize, data: Matrix) -> Result<Self> {
        Self::new((1..=n).collect(), d, data)
    }

    /// The vacuum component: a scalar carried as a 1x1 matrix.
    pub fn scalar(d: usize, value: C64) -> Self {
        Self {
            labels: Vec::new(),
            d,
            data: Matrix::from_element(1, 1, value),
        }
    }

    pub fn identity(labels: Vec<usize>, d: usize) -> Result<Self> {
        check_labels(&labels)?;
        let side = dim_pow(d, labels.len())?;
        Ok(Self {
            labels,
            d,
            data: Matrix::identity(side, side),
        })
    }

    pub fn zeros(labels: Vec<usize>, d: usize) -> Result<Self> {
        check_labels(&labels)?;
        let side = dim_pow(d, labels.len())?;
        Ok(Self {
            labels,
            d,
            data: Matrix::zeros(side, side),
        })
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n_particles(&self) -> usize {
        self.labels.len()
    }

    pub fn data(&self) -> &Matrix {
        &self.data
    }

    pub fn into_data(self) -> Matrix {
        self.data
    }

    /// Same matrix, reinterpreted on another label set of equal size.
    ///
    /// Factor order follows ascending label order on both sides.
    pub fn relabel(&self, labels: Vec<usize>) -> Result<Self> {
        if labels.len() != self.labels.len() {
            return Err(Error::Mismatch(format!(
                "relabel needs {} labels, got {}",
                self.labels.len(),
                labels.len()
            )));
        }
        Self::new(labels, self.d, self.data.clone())
    }

    /// Replace the matrix, keeping labels; the shape must match.
    pub fn with_data(&self, data: Matrix) -> Result<Self> {
        Self::new(self.labels.clone(), self.d, data)
    }

    pub fn dagger(&self) -> Self {
        Self {
            labels: self.labels.clone(),
            d: self.d,
            data: self.data.adjoint(),
        }
    }

    pub fn trace(&self) -> C64 {
        self.data.trace()
    }

    /// `‖A − A†‖_op ≤ tol · ‖A‖_op`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        hermitian_defect(&self.data) <= tol * operator_norm(&self.data)
    }

    pub fn trace_norm(&self) -> f64 {
        trace_norm(&self.data)
    }

    pub fn operator_norm(&self) -> f64 {
        operator_norm(&self.data)
    }

    fn same_support(&self, other: &Self) -> Result<()> {
        if self.labels != other.labels || self.d != other.d {
            return Err(Error::Mismatch(format!(
                "operators live on different spaces: {:?} (d = {}) vs {:?} (d = {})",
                self.labels, self.d, other.labels, other.d
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_support(other)?;
        Ok(Self {
            labels: self.labels.clone(),
            d: self.d,
            data: &self.data + &other.data,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_support(other)?;
        Ok(Self {
            labels: self.labels.clone(),
            d: self.d,
            data: &self.data - &other.data,
        })
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            labels: self.labels.clone(),
            d: self.d,
            data: &self.data * factor,
        }
    }

    /// Operator product; both factors must live on the same labels.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_support(other)?;
        Ok(Self {
            labels: self.labels.clone(),
            d: self.d,
            data: &self.data * &other.data,
        })
    }
}

fn check_labels(labels: &[usize]) -> Result<()> {
    if labels.first() == Some(&0) {
        return Err(label_err("labels must be positive", labels));
    }
    if labels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(label_err("labels must be strictly increasing", labels));
    }
    Ok(())
}

/// `d^n`, failing instead of overflowing.
pub fn dim_pow(d: usize, n: usize) -> Result<usize> {
    let exp = u32::try_from(n).map_err(|_| Error::Resource {
        what: "tensor power",
        requested: n,
        limit: u32::MAX as usize,
    })?;
    d.checked_pow(exp).ok_or(Error::Resource {
        what: "tensor dimension",
        requested: n,
        limit: usize::BITS as usize,
    })
}

/// Index offsets of every multi-index over the factors at `positions` inside
/// an `m`-factor product space. `positions` need not be sorted; the first
/// position is the most significant digit of the local index.
pub(crate) fn factor_offsets(d: usize, m: usize, positions: &[usize]) -> Vec<usize> {
    let weights: Vec<usize> = positions.iter().map(|&p| d.pow((m - 1 - p) as u32)).collect();
    let count = d.pow(positions.len() as u32);
    let mut out = vec![0usize; count];
    for (idx, slot) in out.iter_mut().enumerate() {
        let mut rem = idx;
        let mut off = 0;
        for w in weights.iter().rev() {
            off += (rem % d) * w;
            rem /= d;
        }
        *slot = off;
    }
    out
}

/// Positions of `sub` inside the sorted label list `within`.
fn positions_of(sub: &[usize], within: &[usize]) -> Option<Vec<usize>> {
    sub.iter().map(|l| within.binary_search(l).ok()).collect()
}

/// Sorted difference `a ∖ b`.
pub fn label_difference(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().copied().filter(|l| !b.contains(l)).collect()
}

/// Sorted union of two label sets.
pub fn label_union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = a.iter().chain(b.iter()).copied().collect();
    out.sort_unstable();
    out.dedup();
    out
}

pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    a.kronecker(b)
}

/// Act as `op` on the factors of `op.labels()` and as the identity on the rest
/// of `target_labels`.
pub fn embed(op: &NParticleOperator, target_labels: &[usize]) -> Result<NParticleOperator> {
    check_labels(target_labels)?;
    let Some(pos) = positions_of(&op.labels, target_labels) else {
        return Err(label_err(
            "embedding source is not a subset of the target labels",
            &op.labels,
        ));
    };
    if op.labels.len() == target_labels.len() {
        return Ok(op.clone());
    }
    let d = op.d;
    let m = target_labels.len();
    let rest: Vec<usize> = (0..m).filter(|p| !pos.contains(p)).collect();
    let inner = factor_offsets(d, m, &pos);
    let outer = factor_offsets(d, m, &rest);
    let side = dim_pow(d, m)?;
    let mut data = Matrix::zeros(side, side);
    let block = &op.data;
    for &o in &outer {
        for (a, &ra) in inner.iter().enumerate() {
            for (b, &cb) in inner.iter().enumerate() {
                data[(o + ra, o + cb)] = block[(a, b)];
            }
        }
    }
    Ok(NParticleOperator {
        labels: target_labels.to_vec(),
        d,
        data,
    })
}

/// Trace out the factors named by `traced`.
pub fn partial_trace(op: &NParticleOperator, traced: &[usize]) -> Result<NParticleOperator> {
    let mut traced = traced.to_vec();
    traced.sort_unstable();
    traced.dedup();
    let Some(tpos) = positions_of(&traced, &op.labels) else {
        return Err(label_err("traced labels are not a subset of the operator labels", &traced));
    };
    if traced.is_empty() {
        return Ok(op.clone());
    }
    let d = op.d;
    let m = op.labels.len();
    let keep_pos: Vec<usize> = (0..m).filter(|p| !tpos.contains(p)).collect();
    let keep_labels: Vec<usize> = keep_pos.iter().map(|&p| op.labels[p]).collect();
    let kept = factor_offsets(d, m, &keep_pos);
    let summed = factor_offsets(d, m, &tpos);
    let side = kept.len();
    let mut data = Matrix::zeros(side, side);
    for (r, &kr) in kept.iter().enumerate() {
        for (c, &kc) in kept.iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for &t in &summed {
                acc += op.data[(kr + t, kc + t)];
            }
            data[(r, c)] = acc;
        }
    }
    Ok(NParticleOperator {
        labels: keep_labels,
        d,
        data,
    })
}

/// `‖A − A†‖_op`.
pub fn hermitian_defect(a: &Matrix) -> f64 {
    operator_norm(&(a - a.adjoint()))
}

pub fn is_hermitian(a: &Matrix, rel_tol: f64) -> bool {
    a.is_square() && hermitian_defect(a) <= rel_tol * operator_norm(a)
}

fn hermitian_part(a: &Matrix) -> Matrix {
    (a + a.adjoint()) * C64::new(0.5, 0.0)
}

/// Spectral data of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: DVector<f64>,
    pub vectors: Matrix,
}

impl HermitianEigen {
    pub fn new(h: &Matrix) -> Result<Self> {
        if !h.is_square() {
            return Err(Error::Validation(format!(
                "expected a square matrix, got {}x{}",
                h.nrows(),
                h.ncols()
            )));
        }
        if !is_hermitian(h, VALIDATION_TOL) {
            return Err(Error::Validation(format!(
                "matrix is not Hermitian: anti-Hermitian part has norm {:e}",
                hermitian_defect(h)
            )));
        }
        let eig = hermitian_part(h).symmetric_eigen();
        Ok(Self {
            values: eig.eigenvalues,
            vectors: eig.eigenvectors,
        })
    }

    /// `exp(−iθh)`; exactly the identity at `θ = 0`.
    pub fn propagator(&self, theta: f64) -> Matrix {
        if theta == 0.0 {
            let n = self.vectors.nrows();
            return Matrix::identity(n, n);
        }
        let phases = self.values.map(|l| C64::from_polar(1.0, -theta * l));
        let mut scaled = self.vectors.clone();
        for (j, mut col) in scaled.column_iter_mut().enumerate() {
            col *= phases[j];
        }
        scaled * self.vectors.adjoint()
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// `exp(−iθh)` for Hermitian `h`, via eigendecomposition.
pub fn hermitian_propagator(h: &Matrix, theta: f64) -> Result<Matrix> {
    Ok(HermitianEigen::new(h)?.propagator(theta))
}

pub fn singular_values(a: &Matrix) -> DVector<f64> {
    a.clone().svd(false, false).singular_values
}

/// Sum of singular values.
pub fn trace_norm(a: &Matrix) -> f64 {
    singular_values(a).iter().sum()
}

/// Largest singular value.
pub fn operator_norm(a: &Matrix) -> f64 {
    singular_values(a).iter().copied().fold(0.0, f64::max)
}

/// Smallest eigenvalue of the Hermitian part of `a`.
pub fn min_eigenvalue(a: &Matrix) -> f64 {
    hermitian_part(a)
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

pub fn commutator(a: &Matrix, b: &Matrix) -> Matrix {
    a * b - b * a
}

/// `u a u†`.
pub fn conjugate(u: &Matrix, a: &Matrix) -> Matrix {
    u * a * u.adjoint()
}

/// `P a P†` where factor `k` of the result is factor `perm[k]` of `a`.
///
/// `a` must be an operator on `perm.len()` factors of dimension `d`.
pub fn permute_factors(a: &Matrix, d: usize, perm: &[usize]) -> Matrix {
    let n = perm.len();
    let map = factor_offsets(d, n, perm);
    Matrix::from_fn(a.nrows(), a.ncols(), |r, c| a[(map[r], map[c])])
}

/// Largest relative change of `a` under an adjacent transposition of factors.
/// Adjacent transpositions generate the symmetric group, so zero here means
/// invariance under every permutation.
pub fn exchange_asymmetry(a: &Matrix, d: usize, n: usize) -> f64 {
    if n < 2 {
        return 0.0;
    }
    let scale = operator_norm(a).max(1.0);
    let mut worst: f64 = 0.0;
    for k in 0..n - 1 {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(k, k + 1);
        let moved = permute_factors(a, d, &perm);
        worst = worst.max(operator_norm(&(moved - a)) / scale);
    }
    worst
}

/// Average of `a` over all permutations of its `n` factors.
pub fn symmetrize(a: &Matrix, d: usize, n: usize) -> Matrix {
    let perms = permutations(n);
    let mut acc = Matrix::zeros(a.nrows(), a.ncols());
    for p in &perms {
        acc += permute_factors(a, d, p);
    }
    acc / C64::new(perms.len() as f64, 0.0)
}

/// All permutations of `0..n` (Heap's algorithm).
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut items: Vec<usize> = (0..n).collect();
    let mut out = vec![items.clone()];
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                items.swap(0, i);
            } else {
                items.swap(c[i], i);
            }
            out.push(items.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}
