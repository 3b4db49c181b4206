//! Shared oracle machinery for the integration tests: an independent
//! mass-flow analysis of generating trees (walking the same node-index
//! state machine the samplers walk, in exact rationals) and a seeded
//! corpus generator.

// each test binary compiles its own copy and uses a different subset
#![allow(dead_code)]

use bitdice::bits::{SplitMix64, WordSource};
use bitdice::ddg::DdgTree;
use bitdice::WeightedDistribution;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Internal-node counts per level, root included.
pub fn internal_counts(tree: &DdgTree) -> Vec<usize> {
    let mut counts = vec![1usize];
    for j in 1..=tree.depth() {
        let prev = *counts.last().unwrap();
        counts.push(2 * prev - tree.leaves_at(j).len());
    }
    counts
}

/// Propagates mass from the internal nodes of `start_level` (one entry per
/// internal offset) down to absorption or the deepest level's overflow
/// slots. Returns per-label absorbed mass (index = label) and per-slot
/// overflow mass.
pub fn flow(
    tree: &DdgTree,
    start_level: usize,
    start: Vec<BigRational>,
) -> (Vec<BigRational>, Vec<BigRational>) {
    let depth = tree.depth() as usize;
    let internals = internal_counts(tree);
    assert_eq!(start.len(), internals[start_level]);
    let mut absorbed = vec![BigRational::zero(); tree.n() as usize + 2];
    let mut overflow = vec![BigRational::zero(); internals[depth]];
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut level = start_level;
    let mut current = start;
    while level < depth {
        let leaves = tree.leaves_at((level + 1) as u32);
        let reaches_bottom = level + 1 == depth;
        let mut next = vec![BigRational::zero(); internals[level + 1]];
        for (offset, mass) in current.iter().enumerate() {
            if mass.is_zero() {
                continue;
            }
            let split = mass * &half;
            for bit in 0..2usize {
                let child = 2 * offset + bit;
                if child < leaves.len() {
                    absorbed[leaves[child] as usize] += &split;
                } else if reaches_bottom {
                    overflow[child - leaves.len()] += &split;
                } else {
                    next[child - leaves.len()] += &split;
                }
            }
        }
        current = next;
        level += 1;
    }
    (absorbed, overflow)
}

/// Output distribution by mass flow plus geometric closure of whichever
/// restart loop the tree has. Independent of the closed-form per-level
/// sums in `bitdice::ddg::output_distribution`.
pub fn oracle_output_distribution(tree: &DdgTree) -> Vec<BigRational> {
    let n = tree.n() as usize;
    if tree.depth() == 0 {
        return vec![BigRational::one()];
    }
    let (alpha, overflow) = flow(tree, 0, vec![BigRational::one()]);
    if let Some(reject) = tree.reject_label() {
        assert!(overflow.iter().all(BigRational::is_zero));
        let restart = &alpha[reject as usize];
        let keep = BigRational::one() - restart;
        return (1..=n).map(|i| &alpha[i] / &keep).collect();
    }
    if overflow.is_empty() {
        return alpha[1..=n].to_vec();
    }
    // every overflow slot must carry the same mass: re-entry is uniform
    assert!(overflow.windows(2).all(|w| w[0] == w[1]));
    let reinjected: BigRational = overflow.iter().sum();
    let stubs = overflow.len();
    let unit = vec![BigRational::new(BigInt::one(), BigInt::from(stubs as u64)); stubs];
    let (beta, second) = flow(tree, tree.back_level() as usize, unit);
    assert!(second.windows(2).all(|w| w[0] == w[1]));
    let sigma: BigRational = second.iter().sum();
    let keep = BigRational::one() - sigma;
    (1..=n)
        .map(|i| &alpha[i] + &reinjected * &beta[i] / &keep)
        .collect()
}

/// Expected bits by summing the infinite tree's per-level leaf masses,
/// which repeat geometrically with ratio `2^(l-k)` beyond the encoding.
/// Only meaningful for trees without reject restarts.
pub fn oracle_expected_bits(tree: &DdgTree) -> BigRational {
    assert!(tree.reject_label().is_none());
    if tree.depth() == 0 {
        return BigRational::zero();
    }
    let k = tree.depth() as u64;
    let l = tree.back_level() as u64;
    let level_mass = |j: u64| {
        BigRational::new(
            BigInt::from(tree.leaves_at(j as u32).len()),
            BigInt::one() << j,
        )
    };
    let mut expected: BigRational = (1..=k).map(|j| level_mass(j) * BigInt::from(j)).sum();
    let stubs = *internal_counts(tree).last().unwrap();
    if stubs == 0 {
        return expected;
    }
    let period = k - l;
    let ratio = BigRational::new(BigInt::one(), BigInt::one() << period);
    let tail_mass: BigRational = (l + 1..=k).map(level_mass).sum();
    let tail_weighted: BigRational = (l + 1..=k).map(|j| level_mass(j) * BigInt::from(j)).sum();
    let geom = &ratio / (BigRational::one() - &ratio);
    // levels k+1.. replicate levels l+1..k scaled by ratio^t; depths shift
    // by t*period per replica
    expected += &tail_weighted * &geom;
    expected += tail_mass * BigInt::from(period) * &geom / (BigRational::one() - &ratio);
    expected
}

/// Seeded generator of random weight compositions: `n` positive parts
/// summing to `m`.
pub fn random_composition(gen: &mut SplitMix64, n: usize, m: u64) -> Vec<u64> {
    assert!(m >= n as u64);
    if n == 1 {
        return vec![m];
    }
    let mut cuts: Vec<u64> = Vec::with_capacity(n - 1);
    while cuts.len() < n - 1 {
        let c = 1 + gen.next_word() % (m - 1);
        if !cuts.contains(&c) {
            cuts.push(c);
        }
    }
    cuts.sort_unstable();
    let mut weights = Vec::with_capacity(n);
    let mut previous = 0;
    for c in cuts.into_iter().chain([m]) {
        weights.push(c - previous);
        previous = c;
    }
    weights
}

pub fn random_distribution(gen: &mut SplitMix64, max_n: usize, max_m: u64) -> WeightedDistribution {
    let n = 1 + (gen.next_word() % max_n as u64) as usize;
    let m = n as u64 + gen.next_word() % (max_m - n as u64 + 1);
    WeightedDistribution::new(random_composition(gen, n, m)).unwrap()
}

/// Exact probabilities `a_i / m` of an input instance.
pub fn target_distribution(dist: &WeightedDistribution) -> Vec<BigRational> {
    dist.weights()
        .iter()
        .map(|&a| BigRational::new(BigInt::from(a), BigInt::from(dist.total())))
        .collect()
}
