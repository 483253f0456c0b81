use std::collections::BTreeSet;

use qhier_core::partitions::{cumulant_coefficient_sum, moebius_coefficient_sum, stirling2, SetPartitions};

use super::{Check, Ctx, Measure};
use qhier_core::random::OperatorSampler;

pub(super) fn checks() -> Vec<Check> {
    vec![
        Check {
            name: "cumulant-coefficient-sum",
            suite: "combinatorics",
            identity: "Σ_P (−1)^{|P|−1}(|P|−1)! = δ_{n,1}, 1 ≤ n ≤ 12",
            tolerance: 0.0,
            run: cumulant_sum,
        },
        Check {
            name: "moebius-coefficient-sum",
            suite: "combinatorics",
            identity: "Σ_P (−1)^{|P|}|P|! = (−1)^n, 0 ≤ n ≤ 12",
            tolerance: 0.0,
            run: moebius_sum,
        },
        Check {
            name: "partition-count",
            suite: "combinatorics",
            identity: "|partitions of an n-set| = Bell(n), duplicate-free, n ≤ 10",
            tolerance: 0.0,
            run: partition_count,
        },
        Check {
            name: "stirling-row-sums",
            suite: "combinatorics",
            identity: "Σ_k S(n,k) = Bell(n), n ≤ 15",
            tolerance: 0.0,
            run: stirling_rows,
        },
    ]
}

fn bell(n: usize) -> u64 {
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            let v = next.last().unwrap() + x;
            next.push(v);
        }
        row = next;
    }
    row[0]
}

fn cumulant_sum(_: &Ctx, _: &mut OperatorSampler) -> Result<Measure, qhier_core::Error> {
    let mut worst = 0i64;
    for n in 1..=12 {
        worst = worst.max((cumulant_coefficient_sum(n)? - i64::from(n == 1)).abs());
    }
    Ok(Measure::residual(worst as f64))
}

fn moebius_sum(_: &Ctx, _: &mut OperatorSampler) -> Result<Measure, qhier_core::Error> {
    let mut worst = 0i64;
    for n in 0..=12 {
        let expect = if n % 2 == 0 { 1 } else { -1 };
        worst = worst.max((moebius_coefficient_sum(n)? - expect).abs());
    }
    Ok(Measure::residual(worst as f64))
}

fn partition_count(_: &Ctx, _: &mut OperatorSampler) -> Result<Measure, qhier_core::Error> {
    let mut mismatches = 0u64;
    for n in 0..=10 {
        let ground: Vec<usize> = (1..=n).collect();
        let names: Vec<String> = SetPartitions::new(&ground)?.map(|p| p.canonical_string()).collect();
        let distinct: BTreeSet<&String> = names.iter().collect();
        if names.len() as u64 != bell(n) || distinct.len() != names.len() {
            mismatches += 1;
        }
    }
    Ok(Measure::residual(mismatches as f64))
}

fn stirling_rows(_: &Ctx, _: &mut OperatorSampler) -> Result<Measure, qhier_core::Error> {
    let mut worst = 0u64;
    for n in 0..=15 {
        let mut sum = 0u64;
        for k in 0..=n {
            sum += stirling2(n, k)?;
        }
        worst = worst.max(sum.abs_diff(bell(n)));
    }
    Ok(Measure::residual(worst as f64))
}
