//! Entropy-targeted instance generation: integer weight vectors over `n`
//! outcomes summing to `m` whose entropies land within 0.1 bits of evenly
//! spaced targets.
//!
//! Shape comes from a power law `w_i ~ i^(-s)` (s = 0 is uniform, large s
//! concentrates everything on the first outcome), integerized to sum `m`;
//! a local repair pass then moves single units between the extreme weights
//! until the entropy matches the target.

use anyhow::{bail, Result};
use bitdice::WeightedDistribution;

/// The lowest entropy reachable with positive weights: all slack on one
/// outcome.
pub fn entropy_floor(n: usize, m: u64) -> f64 {
    let mut weights = vec![1u64; n];
    weights[0] = m - (n as u64 - 1);
    WeightedDistribution::new(weights).unwrap().entropy_bits()
}

/// The highest entropy reachable: weights as equal as `m % n` allows.
pub fn entropy_ceiling(n: usize, m: u64) -> f64 {
    WeightedDistribution::new(balanced(n, m))
        .unwrap()
        .entropy_bits()
}

fn balanced(n: usize, m: u64) -> Vec<u64> {
    let base = m / n as u64;
    let extra = (m % n as u64) as usize;
    (0..n).map(|i| base + u64::from(i < extra)).collect()
}

fn power_law(n: usize, m: u64, s: f64) -> Vec<u64> {
    let shape: Vec<f64> = (1..=n).map(|i| (i as f64).powf(-s)).collect();
    let total: f64 = shape.iter().sum();
    let mut weights: Vec<u64> = shape
        .iter()
        .map(|x| ((x / total * m as f64).round() as u64).max(1))
        .collect();
    // settle the sum on the largest bucket
    let mut sum: u64 = weights.iter().sum();
    while sum > m {
        let i = largest_index(&weights);
        let take = (sum - m).min(weights[i] - 1);
        if take == 0 {
            break;
        }
        weights[i] -= take;
        sum -= take;
    }
    if sum < m {
        weights[0] += m - sum;
    }
    weights
}

fn largest_index(weights: &[u64]) -> usize {
    let mut best = 0;
    for (i, &w) in weights.iter().enumerate() {
        if w > weights[best] {
            best = i;
        }
    }
    best
}

fn smallest_movable_index(weights: &[u64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, &w) in weights.iter().enumerate() {
        if w > 1 && best.is_none_or(|b| w < weights[b]) {
            best = Some(i);
        }
    }
    best
}

fn smallest_index(weights: &[u64]) -> usize {
    let mut best = 0;
    for (i, &w) in weights.iter().enumerate() {
        if w < weights[best] {
            best = i;
        }
    }
    best
}

fn entropy_of(weights: &[u64]) -> f64 {
    WeightedDistribution::new(weights.to_vec())
        .unwrap()
        .entropy_bits()
}

/// One instance whose entropy lands within `tolerance` of `target`.
pub fn gen_one(n: usize, m: u64, target: f64, tolerance: f64) -> Result<WeightedDistribution> {
    anyhow::ensure!(n >= 2, "generator needs at least two outcomes");
    anyhow::ensure!(m >= n as u64, "sum must cover one unit per outcome");
    let floor = entropy_floor(n, m);
    let ceiling = entropy_ceiling(n, m);
    if target < floor - tolerance || target > ceiling + tolerance {
        bail!(
            "entropy target {target:.4} outside the feasible range \
             [{floor:.4}, {ceiling:.4}] for n={n}, m={m}"
        );
    }

    // bracket the target on the power-law family
    let mut lo = 0.0f64; // uniform, highest entropy
    let mut hi = 64.0f64; // maximal skew
    let mut weights = power_law(n, m, 0.0);
    for _ in 0..48 {
        let mid = 0.5 * (lo + hi);
        weights = power_law(n, m, mid);
        if entropy_of(&weights) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    // unit-move repair toward the target
    let mut h = entropy_of(&weights);
    for _ in 0..200_000 {
        if (h - target).abs() <= 0.5 * tolerance {
            break;
        }
        if h < target {
            // toward uniform: largest gives to smallest
            let from = largest_index(&weights);
            let to = smallest_index(&weights);
            if from == to || weights[from] <= 1 {
                break;
            }
            weights[from] -= 1;
            weights[to] += 1;
        } else {
            // away from uniform: smallest movable gives to largest
            let Some(from) = smallest_movable_index(&weights) else {
                break;
            };
            let to = largest_index(&weights);
            if from == to {
                break;
            }
            weights[from] -= 1;
            weights[to] += 1;
        }
        h = entropy_of(&weights);
    }
    if (h - target).abs() > tolerance {
        bail!("generator missed entropy target {target:.4} (reached {h:.4}) for n={n}, m={m}");
    }
    WeightedDistribution::new(weights).map_err(Into::into)
}

/// `count` instances with entropies evenly spaced over
/// `[target_lo, target_hi]`, each within 0.1 bits of its target.
pub fn gen_dists(
    n: usize,
    m: u64,
    count: usize,
    target_lo: f64,
    target_hi: f64,
) -> Result<Vec<WeightedDistribution>> {
    anyhow::ensure!(count >= 1, "need a positive count");
    anyhow::ensure!(target_lo <= target_hi, "entropy range is inverted");
    let mut dists = Vec::with_capacity(count);
    for idx in 0..count {
        let target = if count == 1 {
            0.5 * (target_lo + target_hi)
        } else {
            target_lo + (target_hi - target_lo) * idx as f64 / (count - 1) as f64
        };
        dists.push(gen_one(n, m, target, 0.1)?);
    }
    Ok(dists)
}
