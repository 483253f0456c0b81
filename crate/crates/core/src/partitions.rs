//! Set partitions, subsets and the integer identities behind cumulant
//! inversion.
//!
//! Partitions are enumerated as restricted-growth strings in lexicographic
//! order: element `i` gets block index `a[i]` with `a[0] = 0` and
//! `a[i] <= 1 + max(a[..i])`. Blocks are therefore numbered by first
//! occurrence, which is the same as ordering them by minimum element.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::error::{Error, Result};

/// Largest ground set accepted by the enumerators (B₁₄ ≈ 1.9·10⁸).
pub const MAX_ELEMENTS: usize = 14;

/// Largest argument of the exact coefficient sums.
pub const MAX_COEFFICIENT_N: usize = 12;

/// Largest argument of [`stirling2`].
pub const MAX_STIRLING_N: usize = 20;

fn guard(what: &'static str, requested: usize, limit: usize) -> Result<()> {
    if requested > limit {
        return Err(Error::Resource {
            what,
            requested,
            limit,
        });
    }
    Ok(())
}

/// A partition of `ground` into nonempty disjoint blocks, in canonical form:
/// each block sorted, blocks ordered by their minimum.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetPartition {
    ground: Vec<usize>,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    /// Builds and canonicalizes; fails unless the blocks partition `ground`.
    pub fn new(ground: Vec<usize>, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut ground = ground;
        ground.sort_unstable();
        let mut seen: Vec<usize> = blocks.iter().flatten().copied().collect();
        seen.sort_unstable();
        if blocks.iter().any(|b| b.is_empty()) || seen != ground || ground.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Validation("blocks do not partition the ground set".into()));
        }
        let mut p = Self { ground, blocks };
        p.canonicalize();
        Ok(p)
    }

    pub fn ground(&self) -> &[usize] {
        &self.ground
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Number of blocks, `|P|`.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn canonicalize(&mut self) {
        for b in &mut self.blocks {
            b.sort_unstable();
        }
        self.blocks.sort_by_key(|b| b[0]);
    }

    /// Text form such as `{1,3}{2}`; equal partitions give equal strings.
    pub fn canonical_string(&self) -> String {
        let mut s = String::new();
        for b in &self.blocks {
            s.push('{');
            for (i, x) in b.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                let _ = write!(s, "{x}");
            }
            s.push('}');
        }
        s
    }
}

/// Lexicographic restricted-growth-string enumeration of the partitions of a
/// ground list.
#[derive(Debug, Clone)]
pub struct SetPartitions {
    ground: Vec<usize>,
    rgs: Vec<usize>,
    // prefix_max[i] = max(rgs[..=i])
    prefix_max: Vec<usize>,
    done: bool,
}

impl SetPartitions {
    pub fn new(ground: &[usize]) -> Result<Self> {
        guard("partition ground set size", ground.len(), MAX_ELEMENTS)?;
        let n = ground.len();
        Ok(Self {
            ground: ground.to_vec(),
            rgs: vec![0; n],
            prefix_max: vec![0; n],
            done: false,
        })
    }

    fn current(&self) -> SetPartition {
        let nblocks = self.prefix_max.last().map_or(0, |m| m + 1);
        let mut blocks = vec![Vec::new(); nblocks];
        for (i, &b) in self.rgs.iter().enumerate() {
            blocks[b].push(self.ground[i]);
        }
        SetPartition {
            ground: self.ground.clone(),
            blocks,
        }
    }

    fn advance(&mut self) {
        let n = self.rgs.len();
        for i in (1..n).rev() {
            if self.rgs[i] <= self.prefix_max[i - 1] {
                self.rgs[i] += 1;
                self.prefix_max[i] = self.prefix_max[i - 1].max(self.rgs[i]);
                for j in i + 1..n {
                    self.rgs[j] = 0;
                    self.prefix_max[j] = self.prefix_max[i];
                }
                return;
            }
        }
        self.done = true;
    }

    /// The current restricted-growth string (block index per element).
    pub fn rgs(&self) -> &[usize] {
        &self.rgs
    }
}

impl Iterator for SetPartitions {
    type Item = SetPartition;

    fn next(&mut self) -> Option<SetPartition> {
        if self.done {
            return None;
        }
        let p = self.current();
        self.advance();
        Some(p)
    }
}

/// One element of a [`ClusterSet`]: a single particle, or a pre-grouped
/// block of particles that partitions must keep together.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClusterElement {
    Atom(usize),
    /// May be empty; an empty cluster stands for the vacuum and contributes
    /// no labels.
    Cluster(Vec<usize>),
}

impl ClusterElement {
    pub fn labels(&self) -> &[usize] {
        match self {
            ClusterElement::Atom(l) => core::slice::from_ref(l),
            ClusterElement::Cluster(ls) => ls,
        }
    }
}

/// Elements to be partitioned, with pairwise-disjoint label sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterSet {
    elements: Vec<ClusterElement>,
}

impl ClusterSet {
    pub fn new(elements: Vec<ClusterElement>) -> Result<Self> {
        let mut elements = elements;
        for e in &mut elements {
            if let ClusterElement::Cluster(ls) = e {
                ls.sort_unstable();
            }
        }
        let mut all: Vec<usize> = elements.iter().flat_map(|e| e.labels().iter().copied()).collect();
        all.sort_unstable();
        if all.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Label("cluster elements share a label".into()));
        }
        if all.first() == Some(&0) {
            return Err(Error::Label("labels must be positive".into()));
        }
        Ok(Self { elements })
    }

    /// Every label as its own atom.
    pub fn atoms(labels: &[usize]) -> Result<Self> {
        Self::new(labels.iter().map(|&l| ClusterElement::Atom(l)).collect())
    }

    /// Each block becomes one cluster element.
    pub fn from_blocks(blocks: &[Vec<usize>]) -> Result<Self> {
        Self::new(blocks.iter().map(|b| ClusterElement::Cluster(b.clone())).collect())
    }

    pub fn elements(&self) -> &[ClusterElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Sorted union of all element labels.
    pub fn labels(&self) -> Vec<usize> {
        self.labels_of(&(0..self.elements.len()).collect::<Vec<_>>())
    }

    /// Sorted union of the labels of the elements at `indices`.
    pub fn labels_of(&self, indices: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = indices
            .iter()
            .flat_map(|&i| self.elements[i].labels().iter().copied())
            .collect();
        out.sort_unstable();
        out
    }
}

/// Partitions of the elements of `items`; blocks hold element indices.
pub fn partitions_of(items: &ClusterSet) -> Result<SetPartitions> {
    let idx: Vec<usize> = (0..items.len()).collect();
    SetPartitions::new(&idx)
}

/// Stirling number of the second kind `S(n, k)`, exactly.
pub fn stirling2(n: usize, k: usize) -> Result<u64> {
    guard("stirling2 n", n, MAX_STIRLING_N)?;
    guard("stirling2 k", k, MAX_STIRLING_N)?;
    let mut row = vec![0u64; n + 1];
    row[0] = 1;
    for m in 1..=n {
        // S(m, j) = j S(m−1, j) + S(m−1, j−1); update right to left in place
        for j in (1..=m).rev() {
            row[j] = j as u64 * row[j] + row[j - 1];
        }
        row[0] = 0;
    }
    Ok(if k <= n { row[k] } else { 0 })
}

/// All nonempty subsets of `items`, in binary-counter order over positions.
pub fn nonempty_subsets(items: &[usize]) -> Result<Vec<Vec<usize>>> {
    guard("subset ground set size", items.len(), MAX_ELEMENTS)?;
    let m = items.len();
    Ok((1u32..(1u32 << m))
        .map(|mask| (0..m).filter(|&i| mask & (1 << i) != 0).map(|i| items[i]).collect())
        .collect())
}

/// All subsets of `items` with exactly `k` elements, in lexicographic order.
pub fn subsets_of_size(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= items.len() {
        rec(items, k, 0, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}

/// Cumulant weight of a partition with `blocks` blocks: `(−1)^{|P|−1}(|P|−1)!`.
pub fn cumulant_weight(blocks: usize) -> i64 {
    debug_assert!(blocks >= 1);
    let f = factorial(blocks - 1);
    if (blocks - 1).is_multiple_of(2) {
        f
    } else {
        -f
    }
}

/// `Σ_P (−1)^{|P|−1}(|P|−1)!` over the partitions of an n-set.
pub fn cumulant_coefficient_sum(n: usize) -> Result<i64> {
    if n == 0 {
        return Err(Error::Validation("cumulant coefficient sum needs n >= 1".into()));
    }
    guard("coefficient sum n", n, MAX_COEFFICIENT_N)?;
    let ground: Vec<usize> = (1..=n).collect();
    Ok(SetPartitions::new(&ground)?.map(|p| cumulant_weight(p.len())).sum())
}

/// `Σ_P (−1)^{|P|}|P|!` over the partitions of an n-set (1 for the empty set).
pub fn moebius_coefficient_sum(n: usize) -> Result<i64> {
    guard("coefficient sum n", n, MAX_COEFFICIENT_N)?;
    let ground: Vec<usize> = (1..=n).collect();
    Ok(SetPartitions::new(&ground)?
        .map(|p| {
            let f = factorial(p.len());
            if p.len() % 2 == 0 {
                f
            } else {
                -f
            }
        })
        .sum())
}
