//! Cumulants of the conjugation groups over cluster sets.
//!
//! `𝔄(t, E₁,…,E_m) = Σ_P (−1)^{|P|−1}(|P|−1)! ∏_{X∈P} 𝒢(∓t, X)`, where the
//! partitions run over the elements `Eᵢ` (atoms or pre-grouped clusters) and
//! a block acts on the union of its elements' labels.

use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{label_err, Error, Result};
use crate::groups::{Direction, Dynamics};
use crate::linalg::{conjugate, embed, Matrix, NParticleOperator, C64};
use crate::partitions::{
    cumulant_weight, nonempty_subsets, partitions_of, ClusterElement, ClusterSet, SetPartitions, MAX_ELEMENTS,
};

/// Largest label set accepted by [`cluster_reconstruct`].
pub const MAX_RECONSTRUCT: usize = 8;

/// Largest order accepted by [`cumulant_generator_check`].
pub const MAX_GENERATOR_CHECK: usize = 5;

/// Step sizes used for convergence-order estimates.
pub const DEFAULT_STEPS: [f64; 4] = [1e-1, 1e-2, 1e-3, 1e-4];

/// One cumulant evaluation: `𝔄(t, clusters)` applied to `target`.
#[derive(Debug, Clone, Copy)]
pub struct CumulantRequest<'a> {
    pub t: f64,
    pub clusters: &'a ClusterSet,
    pub direction: Direction,
    pub target: &'a NParticleOperator,
}

fn check_request(req: &CumulantRequest) -> Result<()> {
    if req.clusters.is_empty() {
        return Err(Error::Validation("a cumulant needs at least one element".into()));
    }
    if req.clusters.len() > MAX_ELEMENTS {
        return Err(Error::Resource {
            what: "cumulant elements",
            requested: req.clusters.len(),
            limit: MAX_ELEMENTS,
        });
    }
    let labels = req.clusters.labels();
    if labels.iter().any(|l| !req.target.labels().contains(l)) {
        return Err(label_err("cluster labels are not inside the target's labels", &labels));
    }
    Ok(())
}

/// Evaluates the cumulant on the target. Labels of the target outside every
/// cluster are spectators.
pub fn cumulant_apply(dy: &Dynamics, req: &CumulantRequest) -> Result<NParticleOperator> {
    check_request(req)?;
    let ambient = req.target.labels();
    let side = req.target.data().nrows();
    let mut cache: BTreeMap<u32, Matrix> = BTreeMap::new();
    let mut acc = Matrix::zeros(side, side);
    for part in partitions_of(req.clusters)? {
        let mut u = Matrix::identity(side, side);
        for block in part.blocks() {
            let mask = block.iter().fold(0u32, |m, &i| m | (1 << i));
            let ub = match cache.entry(mask) {
                Entry::Occupied(e) => e.into_mut(),
                Entry::Vacant(e) => {
                    let labels = req.clusters.labels_of(block);
                    e.insert(dy.block_unitary(req.direction, req.t, &labels, ambient)?)
                }
            };
            u *= &*ub;
        }
        let w = cumulant_weight(part.len()) as f64;
        acc += conjugate(&u, req.target.data()) * C64::new(w, 0.0);
    }
    req.target.with_data(acc)
}

/// Right side of the cluster expansion `Σ_P ∏_{X∈P} 𝔄_{|X|}(t, X)` over the
/// partitions of `y` (every label an atom), applied to `target`. Equals
/// `𝒢(−t, y)` on the target.
pub fn cluster_reconstruct(dy: &Dynamics, t: f64, y: &[usize], target: &NParticleOperator) -> Result<NParticleOperator> {
    if y.len() > MAX_RECONSTRUCT {
        return Err(Error::Resource {
            what: "reconstruction label set",
            requested: y.len(),
            limit: MAX_RECONSTRUCT,
        });
    }
    let side = target.data().nrows();
    let mut acc = Matrix::zeros(side, side);
    for part in SetPartitions::new(y)? {
        let mut term = target.clone();
        for block in part.blocks() {
            let clusters = ClusterSet::atoms(block)?;
            term = cumulant_apply(
                dy,
                &CumulantRequest {
                    t,
                    clusters: &clusters,
                    direction: Direction::Forward,
                    target: &term,
                },
            )?;
        }
        acc += term.data();
    }
    target.with_data(acc)
}

/// `𝒩_int^{(|S|)}(S)` summed over every label subset `S` of the clusters that
/// meets each element, with the one-body term standing in for `|S| = 1`.
/// Scaled by −1 for the forward group, +1 for the dual one, this is the
/// derivative of the cumulant at `t = 0`.
pub fn cumulant_generator(dy: &Dynamics, clusters: &ClusterSet, direction: Direction, target: &NParticleOperator) -> Result<NParticleOperator> {
    let labels = clusters.labels();
    let side = target.data().nrows();
    let mut acc = Matrix::zeros(side, side);
    for s in nonempty_subsets(&labels)? {
        let connected = clusters
            .elements()
            .iter()
            .all(|e| e.labels().is_empty() || e.labels().iter().any(|l| s.contains(l)));
        let empty_element = clusters.elements().iter().any(|e| e.labels().is_empty());
        if !connected || (empty_element && clusters.len() > 1) {
            continue;
        }
        acc += interaction_term(dy, &s, target)?.data();
    }
    let sign = match direction {
        Direction::Forward => -1.0,
        Direction::Dual => 1.0,
    };
    target.with_data(acc * C64::new(sign, 0.0))
}

/// `𝒩_int^{(|s|)}(s) f`, using the one-body operator when `|s| = 1`.
pub fn interaction_term(dy: &Dynamics, s: &[usize], f: &NParticleOperator) -> Result<NParticleOperator> {
    if s.len() == 1 {
        let one = NParticleOperator::new(s.to_vec(), dy.d(), dy.spec().one_body().clone())?;
        let h = embed(&one, f.labels())?;
        let c = f.data() * h.data() - h.data() * f.data();
        return f.with_data(c * C64::new(0.0, -1.0 / dy.hbar()));
    }
    dy.interaction_generator(s, f)
}

/// The forward cumulant `𝔄_{1+n}(t, Y₁, s+1, …, s+n)` with `Y = (1..=s)` as
/// one cluster, applied to `f` on labels `1..=s+n`. For `s = 0` the cluster is
/// empty (the vacuum).
pub fn bbgky_cumulant(dy: &Dynamics, t: f64, s: usize, n: usize, f: &NParticleOperator) -> Result<NParticleOperator> {
    if s == 0 && n == 0 {
        return Err(Error::Validation("bbgky_cumulant needs s >= 1 or n >= 1".into()));
    }
    if s + n > dy.n_max() {
        return Err(Error::Resource {
            what: "s + n",
            requested: s + n,
            limit: dy.n_max(),
        });
    }
    let expected: Vec<usize> = (1..=s + n).collect();
    if f.labels() != expected.as_slice() {
        return Err(label_err("bbgky_cumulant target must act on 1..=s+n", f.labels()));
    }
    let clusters = bbgky_clusters(s, n)?;
    cumulant_apply(
        dy,
        &CumulantRequest {
            t,
            clusters: &clusters,
            direction: Direction::Forward,
            target: f,
        },
    )
}

/// `{(1..=s) as a cluster, s+1, …, s+n}`.
pub fn bbgky_clusters(s: usize, n: usize) -> Result<ClusterSet> {
    let mut elements = vec![ClusterElement::Cluster((1..=s).collect())];
    elements.extend((s + 1..=s + n).map(ClusterElement::Atom));
    ClusterSet::new(elements)
}

/// Residuals of difference quotients against a limit, with a log-log
/// convergence-order estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub steps: Vec<f64>,
    /// Trace-norm distance between quotient and limit, per step.
    pub residuals: Vec<f64>,
    /// `residuals / ‖limit‖₁` (absolute when the limit vanishes).
    pub relative: Vec<f64>,
    /// Least-squares slope of `log residual` against `log h`; `None` when
    /// every residual is at round-off level, so there is nothing to fit.
    pub slope: Option<f64>,
}

/// A residual below `ROUNDOFF_FACTOR · ε · ‖input‖ / h` is round-off, not
/// truncation error.
pub const ROUNDOFF_FACTOR: f64 = 1e4;

impl ConvergenceReport {
    /// `limit_norm` normalizes the residuals; `input_norm` sets the round-off
    /// floor and replaces `limit_norm` when the limit is numerically zero.
    pub fn new(steps: Vec<f64>, residuals: Vec<f64>, limit_norm: f64, input_norm: f64) -> Self {
        let denom = if limit_norm > 1e-12 * input_norm && limit_norm > 0.0 {
            limit_norm
        } else if input_norm > 0.0 {
            input_norm
        } else {
            1.0
        };
        let relative: Vec<f64> = residuals.iter().map(|r| r / denom).collect();
        let at_roundoff = steps
            .iter()
            .zip(&residuals)
            .all(|(&h, &r)| r <= ROUNDOFF_FACTOR * f64::EPSILON * input_norm.max(limit_norm) / h);
        let slope = if at_roundoff {
            None
        } else {
            Some(log_log_slope(&steps, &residuals))
        };
        Self {
            steps,
            residuals,
            relative,
            slope,
        }
    }

    pub fn final_relative(&self) -> f64 {
        self.relative.last().copied().unwrap_or(0.0)
    }

    /// Slope at least `min_slope` (or exact agreement) and final relative
    /// residual at most `max_final`.
    pub fn passes(&self, min_slope: f64, max_final: f64) -> bool {
        self.slope.is_none_or(|s| s >= min_slope) && self.final_relative() <= max_final
    }
}

/// Least-squares slope of `log y` against `log x`. Zero residuals are clamped
/// to the smallest positive double.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .map(|(&a, &b)| (libm::log(a), libm::log(b.max(f64::MIN_POSITIVE))))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Forward-difference check of `(1/h)(𝔄_n(h, 1..n) − δ_{n,1})f → −𝒩_int^{(n)}f`
/// (`−𝒩f` for `n = 1`).
pub fn cumulant_generator_check(dy: &Dynamics, n: usize, f: &NParticleOperator, steps: &[f64]) -> Result<ConvergenceReport> {
    if n == 0 || n > MAX_GENERATOR_CHECK {
        return Err(Error::Validation(format!(
            "generator check order must be in 1..={MAX_GENERATOR_CHECK}, got {n}"
        )));
    }
    let y: Vec<usize> = (1..=n).collect();
    if f.labels() != y.as_slice() {
        return Err(label_err("generator check target must act on 1..=n", f.labels()));
    }
    let clusters = ClusterSet::atoms(&y)?;
    let limit = if n == 1 {
        dy.generator_state(f)?
    } else {
        dy.interaction_generator(&y, f)?.scale(C64::new(-1.0, 0.0))
    };
    let mut residuals = Vec::with_capacity(steps.len());
    for &h in steps {
        let mut q = cumulant_apply(
            dy,
            &CumulantRequest {
                t: h,
                clusters: &clusters,
                direction: Direction::Forward,
                target: f,
            },
        )?
        .into_data();
        if n == 1 {
            q -= f.data();
        }
        q /= C64::new(h, 0.0);
        residuals.push(crate::linalg::trace_norm(&(q - limit.data())));
    }
    Ok(ConvergenceReport::new(steps.to_vec(), residuals, limit.trace_norm(), f.trace_norm()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{kron, operator_norm, trace_norm};
    use crate::random::OperatorSampler;
    use crate::system::SystemSpec;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn z() -> Matrix {
        Matrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0), c(-1.0)]))
    }

    fn spec(seed: u64, three_body: bool) -> SystemSpec {
        scaled_spec(seed, three_body, 1.0)
    }

    fn scaled_spec(seed: u64, three_body: bool, scale: f64) -> SystemSpec {
        let mut s = OperatorSampler::new(seed);
        let one = s.hermitian(2) * c(scale);
        let mut pots = BTreeMap::new();
        pots.insert(2, s.symmetric_hermitian(2, 2) * c(scale));
        if three_body {
            pots.insert(3, s.symmetric_hermitian(2, 3) * c(scale));
        }
        SystemSpec::new(2, 1.0, 4, one, pots).unwrap()
    }

    fn apply(dy: &Dynamics, t: f64, clusters: &ClusterSet, direction: Direction, f: &NParticleOperator) -> NParticleOperator {
        cumulant_apply(
            dy,
            &CumulantRequest {
                t,
                clusters,
                direction,
                target: f,
            },
        )
        .unwrap()
    }

    #[test]
    fn first_and_second_order_cumulants() {
        let dy = Dynamics::new(spec(1, false)).unwrap();
        let mut s = OperatorSampler::new(2);
        let f = NParticleOperator::on_first(2, 2, s.hermitian(4)).unwrap();
        let t = 0.7;

        let whole = ClusterSet::from_blocks(&[vec![1, 2]]).unwrap();
        let a1 = apply(&dy, t, &whole, Direction::Forward, &f);
        assert!(trace_norm(&(a1.data() - dy.evolve_state(t, &f).unwrap().data())) <= 1e-12);

        // oracle: 𝒢₂ f − 𝒢₁(1)𝒢₁(2) f
        let a2 = apply(&dy, t, &ClusterSet::atoms(&[1, 2]).unwrap(), Direction::Forward, &f);
        let u1 = dy.block_unitary(Direction::Forward, t, &[1], &[1, 2]).unwrap();
        let u2 = dy.block_unitary(Direction::Forward, t, &[2], &[1, 2]).unwrap();
        let full = dy.evolve_state(t, &f).unwrap();
        let oracle = full.data() - conjugate(&(u1 * u2), f.data());
        assert!(trace_norm(&(a2.data() - oracle)) <= 1e-12);
    }

    #[test]
    fn cluster_labels_must_lie_in_target() {
        let dy = Dynamics::new(spec(1, false)).unwrap();
        let f = NParticleOperator::identity(vec![1, 2], 2).unwrap();
        let clusters = ClusterSet::atoms(&[1, 3]).unwrap();
        let r = cumulant_apply(
            &dy,
            &CumulantRequest {
                t: 0.1,
                clusters: &clusters,
                direction: Direction::Forward,
                target: &f,
            },
        );
        assert!(matches!(r, Err(Error::Label(_))));
    }

    #[test]
    fn free_system_higher_cumulants_vanish() {
        let dy = Dynamics::new(spec(3, true).free()).unwrap();
        let mut s = OperatorSampler::new(4);
        for n in 2..=4 {
            let f = NParticleOperator::on_first(n, 2, s.symmetric_hermitian(2, n)).unwrap();
            let y: Vec<usize> = (1..=n).collect();
            for direction in [Direction::Forward, Direction::Dual] {
                let a = apply(&dy, 1.3, &ClusterSet::atoms(&y).unwrap(), direction, &f);
                assert!(a.trace_norm() <= 1e-10, "n = {n}");
            }
        }
    }

    #[test]
    fn reconstruction_inverts_cumulants() {
        let dy = Dynamics::new(spec(5, true)).unwrap();
        let mut s = OperatorSampler::new(6);
        for n in 1..=4 {
            let y: Vec<usize> = (1..=n).collect();
            let f = NParticleOperator::on_first(n, 2, s.hermitian(1 << n)).unwrap();
            for t in [0.1, 0.7, 1.3] {
                let r = cluster_reconstruct(&dy, t, &y, &f).unwrap();
                let direct = dy.evolve_state(t, &f).unwrap();
                assert!(trace_norm(&(r.data() - direct.data())) <= 1e-9, "n = {n}, t = {t}");
            }
        }
    }

    #[test]
    fn reconstruction_on_a_subset_leaves_spectators() {
        let dy = Dynamics::new(spec(5, false)).unwrap();
        let mut s = OperatorSampler::new(8);
        let f = NParticleOperator::on_first(3, 2, s.hermitian(8)).unwrap();
        let r = cluster_reconstruct(&dy, 0.4, &[1, 3], &f).unwrap();
        let u = dy.block_unitary(Direction::Forward, 0.4, &[1, 3], &[1, 2, 3]).unwrap();
        assert!(trace_norm(&(r.data() - conjugate(&u, f.data()))) <= 1e-10);
    }

    #[test]
    fn collapse_at_zero_time() {
        let dy = Dynamics::new(spec(7, true)).unwrap();
        let mut s = OperatorSampler::new(9);
        for n in 1..=4 {
            let y: Vec<usize> = (1..=n).collect();
            let f = NParticleOperator::on_first(n, 2, s.hermitian(1 << n)).unwrap();
            let a = apply(&dy, 0.0, &ClusterSet::atoms(&y).unwrap(), Direction::Forward, &f);
            let expect = if n == 1 { f.data().clone() } else { Matrix::zeros(1 << n, 1 << n) };
            assert!(operator_norm(&(a.data() - expect)) <= 1e-13);
        }
    }

    #[test]
    fn vacuum_cluster_cancels() {
        let dy = Dynamics::new(spec(7, false)).unwrap();
        let mut s = OperatorSampler::new(10);
        for n in 1..=3 {
            let f = NParticleOperator::on_first(n, 2, s.hermitian(1 << n)).unwrap();
            let a = bbgky_cumulant(&dy, 0.9, 0, n, &f).unwrap();
            assert!(a.trace_norm() <= 1e-12);
        }
    }

    #[test]
    fn bbgky_cumulant_small_orders() {
        let dy = Dynamics::new(spec(11, false)).unwrap();
        let mut s = OperatorSampler::new(12);
        let t = -0.6;
        let f2 = NParticleOperator::on_first(2, 2, s.hermitian(4)).unwrap();
        let a0 = bbgky_cumulant(&dy, t, 2, 0, &f2).unwrap();
        assert!(trace_norm(&(a0.data() - dy.evolve_state(t, &f2).unwrap().data())) <= 1e-12);

        let f3 = NParticleOperator::on_first(3, 2, s.hermitian(8)).unwrap();
        let a1 = bbgky_cumulant(&dy, t, 2, 1, &f3).unwrap();
        let uy = dy.block_unitary(Direction::Forward, t, &[1, 2], &[1, 2, 3]).unwrap();
        let u3 = dy.block_unitary(Direction::Forward, t, &[3], &[1, 2, 3]).unwrap();
        let oracle = dy.evolve_state(t, &f3).unwrap().data() - conjugate(&(uy * u3), f3.data());
        assert!(trace_norm(&(a1.data() - oracle)) <= 1e-12);

        assert!(bbgky_cumulant(&dy, t, 0, 0, &f2).is_err());
        assert!(bbgky_cumulant(&dy, t, 3, 2, &f2).is_err());
    }

    #[test]
    fn bbgky_cumulant_norm_bound() {
        let dy = Dynamics::new(spec(13, true)).unwrap();
        let mut s = OperatorSampler::new(14);
        for (sv, n) in [(1, 1), (1, 2), (2, 2), (1, 3)] {
            let f = NParticleOperator::on_first(sv + n, 2, s.hermitian(1 << (sv + n))).unwrap();
            let a = bbgky_cumulant(&dy, 1.1, sv, n, &f).unwrap();
            let fact: f64 = (1..=n).map(|k| k as f64).product();
            assert!(a.trace_norm() <= fact * libm::exp((n + 2) as f64) * f.trace_norm());
        }
    }

    #[test]
    fn block_order_does_not_matter() {
        let dy = Dynamics::new(spec(15, false)).unwrap();
        let mut s = OperatorSampler::new(16);
        let f = NParticleOperator::on_first(3, 2, s.hermitian(8)).unwrap();
        let amb = [1, 2, 3];
        let u1 = dy.block_unitary(Direction::Forward, 0.8, &[1, 3], &amb).unwrap();
        let u2 = dy.block_unitary(Direction::Forward, 0.8, &[2], &amb).unwrap();
        let a = conjugate(&(&u1 * &u2), f.data());
        let b = conjugate(&(&u2 * &u1), f.data());
        assert!(operator_norm(&(a - b)) <= 1e-12);
    }

    #[test]
    fn generator_check_two_body_zz() {
        let mut pots = BTreeMap::new();
        pots.insert(2, kron(&z(), &z()));
        let one = Matrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]);
        let dy = Dynamics::new(SystemSpec::new(2, 1.0, 3, one, pots).unwrap()).unwrap();
        let mut s = OperatorSampler::new(17);
        let f = NParticleOperator::on_first(2, 2, s.symmetric_hermitian(2, 2)).unwrap();
        let report = cumulant_generator_check(&dy, 2, &f, &DEFAULT_STEPS).unwrap();
        assert!(report.residuals.windows(2).all(|w| w[1] < w[0]));
        let slope = report.slope.unwrap();
        assert!((slope - 1.0).abs() < 0.1, "slope {slope}");
        assert!(report.passes(0.9, 1e-3));

        // commutator oracle built by hand
        let zz = kron(&z(), &z());
        let oracle = (&zz * f.data() - f.data() * &zz) * C64::new(0.0, -1.0);
        let lim = dy.interaction_generator(&[1, 2], &f).unwrap().scale(c(-1.0));
        assert!(operator_norm(&(lim.data() - oracle)) <= 1e-14);
    }

    #[test]
    fn generator_check_trivial_cases() {
        let dy = Dynamics::new(spec(19, false).free()).unwrap();
        let mut s = OperatorSampler::new(20);
        let f = NParticleOperator::on_first(2, 2, s.hermitian(4)).unwrap();
        let report = cumulant_generator_check(&dy, 2, &f, &DEFAULT_STEPS).unwrap();
        assert!(report.residuals.iter().all(|&r| r <= 1e-9));
        assert!(report.passes(0.9, 1e-3), "{report:?}");

        let dy = Dynamics::new(scaled_spec(19, true, 0.3)).unwrap();
        let f1 = NParticleOperator::on_first(1, 2, s.hermitian(2)).unwrap();
        let report = cumulant_generator_check(&dy, 1, &f1, &DEFAULT_STEPS).unwrap();
        assert!(report.passes(0.9, 1e-3));
        for n in 2..=4 {
            let f = NParticleOperator::on_first(n, 2, s.symmetric_hermitian(2, n)).unwrap();
            let report = cumulant_generator_check(&dy, n, &f, &DEFAULT_STEPS).unwrap();
            assert!(report.passes(0.9, 1e-3), "n = {n}: {report:?}");
        }
    }

    #[test]
    fn cluster_generator_matches_difference_quotient() {
        let dy = Dynamics::new(spec(21, true)).unwrap();
        let mut s = OperatorSampler::new(22);
        let f = NParticleOperator::on_first(4, 2, s.hermitian(16)).unwrap();
        let clusters = ClusterSet::new(vec![ClusterElement::Cluster(vec![1, 2]), ClusterElement::Atom(3), ClusterElement::Atom(4)]).unwrap();
        for direction in [Direction::Forward, Direction::Dual] {
            let lim = cumulant_generator(&dy, &clusters, direction, &f).unwrap();
            let h = 1e-5;
            let q = (apply(&dy, h, &clusters, direction, &f).into_data()
                - apply(&dy, -h, &clusters, direction, &f).into_data())
                / c(2.0 * h);
            assert!(trace_norm(&(q - lim.data())) / lim.trace_norm() <= 1e-7);
        }
    }

    #[test]
    fn slope_fit() {
        let x = [1e-1, 1e-2, 1e-3];
        let y = [3e-2, 3e-4, 3e-6];
        assert!((log_log_slope(&x, &y) - 2.0).abs() <= 1e-12);
        let r = ConvergenceReport::new(x.to_vec(), vec![0.0; 3], 1.0, 1.0);
        assert_eq!(r.slope, None);
    }
}
