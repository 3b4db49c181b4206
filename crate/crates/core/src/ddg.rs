//! Discrete distribution generating trees: construction of the Knuth–Yao
//! entropy-optimal tree, the level-encoded walk that samples it, and
//! exact-rational analysis of any tree's output distribution and expected
//! bit consumption.
//!
//! A tree is stored level by level: `levels[j-1]` holds the outcome labels
//! of the leaves at level `j`, and everything else at that level is an
//! internal node. Within a level, leaves occupy the numerically smallest
//! node positions, ordered by ascending label; this canonical placement is
//! what makes replay-script tests deterministic (the output distribution is
//! placement-invariant).
//!
//! Non-dyadic distributions repeat their binary expansions, so the encoding
//! is finite only thanks to a back-edge: walkers that step past the leaves
//! of the deepest level re-enter the tree as internal nodes of level `l`,
//! keeping their positional offset. Offsets must be kept: the deepest
//! level has exactly as many overflow slots as level `l` has internal
//! nodes, and mass re-enters them uniformly; collapsing them onto a single
//! node would skew the output distribution.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::bits::BitSource;
use crate::dist::WeightedDistribution;
use crate::numsys;
use crate::Error;

/// A finitely encoded discrete distribution generating tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DdgTree {
    n: u32,
    depth: u32,
    back_level: u32,
    levels: Vec<Vec<u32>>,
    reject_label: Option<u32>,
}

impl DdgTree {
    pub(crate) fn from_parts(
        n: u32,
        depth: u32,
        back_level: u32,
        levels: Vec<Vec<u32>>,
        reject_label: Option<u32>,
    ) -> Self {
        let tree = Self {
            n,
            depth,
            back_level,
            levels,
            reject_label,
        };
        debug_assert_eq!(tree.validate(), Ok(()));
        tree
    }

    fn degenerate() -> Self {
        Self {
            n: 1,
            depth: 0,
            back_level: 0,
            levels: Vec::new(),
            reject_label: None,
        }
    }

    /// Number of outcomes.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Longest root-to-leaf path in the finite encoding, in edges.
    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// Back-edge target level; equal to `depth` when the tree has no
    /// back-edge (dyadic probabilities).
    pub fn back_level(&self) -> u32 {
        self.back_level
    }

    /// Leaf labels at level `j` (1-based), ascending.
    pub fn leaves_at(&self, j: u32) -> &[u32] {
        &self.levels[(j - 1) as usize]
    }

    /// Label whose leaves restart the walk at the root, if any.
    pub fn reject_label(&self) -> Option<u32> {
        self.reject_label
    }

    /// Labeled leaves plus back-edge stubs of the finite encoding.
    pub fn leaf_count(&self) -> u64 {
        let labeled: u64 = self.levels.iter().map(|lv| lv.len() as u64).sum();
        labeled + self.internal_counts().last().copied().unwrap_or(0)
    }

    /// Total nodes of the finite encoding: `2s - 1` for `s` leaves (the
    /// encoding is a full binary tree once back-edge stubs count as leaves).
    pub fn node_count(&self) -> u64 {
        2 * self.leaf_count().max(1) - 1
    }

    /// Internal-node counts per level, `I_0 = 1` at the root. The last
    /// entry is the number of back-edge stubs.
    fn internal_counts(&self) -> Vec<u64> {
        let mut counts = Vec::with_capacity(self.levels.len() + 1);
        let mut internal = if self.depth == 0 { 0u64 } else { 1 };
        counts.push(internal);
        for level in &self.levels {
            internal = 2 * internal - level.len() as u64;
            counts.push(internal);
        }
        counts
    }

    /// Structural invariants: realizability as a full binary tree, sorted
    /// unique labels in range, and a consistent back-edge.
    pub fn validate(&self) -> Result<(), &'static str> {
        if self.n == 0 {
            return Err("no outcomes");
        }
        if self.depth as usize != self.levels.len() {
            return Err("depth disagrees with level count");
        }
        if self.back_level > self.depth {
            return Err("back-edge target beyond depth");
        }
        if self.reject_label.is_some() && self.back_level != self.depth {
            return Err("reject restarts and a suffix back-edge cannot coexist");
        }
        let max_label = self.n + u32::from(self.reject_label.is_some());
        let mut internal: u64 = 1;
        for level in &self.levels {
            if !level.windows(2).all(|w| w[0] < w[1]) {
                return Err("labels within a level must be strictly ascending");
            }
            if level.iter().any(|&lab| lab == 0 || lab > max_label) {
                return Err("label out of range");
            }
            if (level.len() as u64) > 2 * internal {
                return Err("more leaves than nodes at a level");
            }
            internal = 2 * internal - level.len() as u64;
        }
        if self.back_level == self.depth {
            if self.depth > 0 && internal != 0 {
                return Err("tree without back-edge does not exhaust its mass");
            }
        } else {
            let counts = self.internal_counts();
            if internal == 0 {
                return Err("back-edge with no overflow slots");
            }
            if counts[self.back_level as usize] != internal {
                return Err("overflow slots disagree with back-edge target internals");
            }
        }
        Ok(())
    }

    /// Debug dump: one line per level plus the back-edge target.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (j0, level) in self.levels.iter().enumerate() {
            let _ = writeln!(out, "level {}: {:?}", j0 + 1, level);
        }
        if self.back_level < self.depth {
            let _ = writeln!(out, "back-edge -> {}", self.back_level);
        }
        out
    }
}

/// Builds the entropy-optimal tree for a distribution.
///
/// With reduced modulus `M` and minimal witness `(k, l)`, each probability
/// `a_i/m` equals `c_i / Z_kl` for the exact integer `c_i = a_i * Z_kl / m`.
/// Splitting `c_i = (2^(k-l) - 1) * B_i + S_i` recovers the `l` prefix bits
/// from `B_i` and the `k - l` repeating suffix bits from `S_i`; a leaf
/// labeled `i` sits at level `j` exactly where digit `j` is 1. Single-outcome
/// distributions get the trivial depth-0 tree.
pub fn ky_construct(dist: &WeightedDistribution) -> Result<DdgTree, Error> {
    if dist.n() == 1 {
        return Ok(DdgTree::degenerate());
    }
    let modulus = dist.reduced_modulus();
    if modulus > numsys::MAX_MODULUS {
        return Err(Error::ModulusTooLarge);
    }
    let witness = numsys::minimal_depth(modulus);
    let (k, l) = (witness.k, witness.l);
    let z = witness.z_big();
    let m = BigUint::from(dist.total());
    let suffix_modulus = if l < k {
        (BigUint::one() << (k - l)) - BigUint::one()
    } else {
        BigUint::one()
    };

    let mut levels: Vec<Vec<u32>> = vec![Vec::new(); k as usize];
    for (i, &a) in dist.weights().iter().enumerate() {
        let label = (i + 1) as u32;
        let scaled = BigUint::from(a) * &z;
        debug_assert!((&scaled % &m).is_zero());
        let c = scaled / &m;
        let (prefix, suffix) = if l < k {
            c.div_rem(&suffix_modulus)
        } else {
            (c, BigUint::zero())
        };
        for j in 1..=l {
            if prefix.bit(l - j) {
                levels[(j - 1) as usize].push(label);
            }
        }
        for j in (l + 1)..=k {
            if suffix.bit(k - j) {
                levels[(j - 1) as usize].push(label);
            }
        }
    }
    Ok(DdgTree::from_parts(
        dist.n() as u32,
        k as u32,
        l as u32,
        levels,
        None,
    ))
}

/// Walks a tree with fair bits until a leaf is returned: at each step the
/// walker at internal node `e` consumes a bit `b` and moves to node
/// `2e + b` of the next level, where the level's leaves occupy the lowest
/// indices. Reject-labeled leaves restart at the root; stepping past the
/// deepest level re-enters at the back-edge target with the offset kept.
pub fn ky_sample(tree: &DdgTree, source: &mut dyn BitSource) -> Result<u32, Error> {
    if tree.depth == 0 {
        return Ok(1);
    }
    let mut level = 0usize;
    let mut offset = 0usize;
    loop {
        let bit = source.flip()? as usize;
        let child = 2 * offset + bit;
        let leaves = &tree.levels[level];
        if child < leaves.len() {
            let label = leaves[child];
            if Some(label) == tree.reject_label {
                level = 0;
                offset = 0;
                continue;
            }
            return Ok(label);
        }
        offset = child - leaves.len();
        level += 1;
        if level == tree.depth as usize {
            level = tree.back_level as usize;
        }
    }
}

fn half_pow(j: u64) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << j)
}

/// Per-label leaf masses of one root pass: total mass, mass strictly below
/// the back-edge target, and the stub count.
struct PassMasses {
    alpha: Vec<BigRational>,
    below_back: Vec<BigRational>,
    stubs: u64,
}

fn pass_masses(tree: &DdgTree) -> PassMasses {
    let slots = tree.n as usize + 2;
    let mut alpha = vec![BigRational::zero(); slots];
    let mut below_back = vec![BigRational::zero(); slots];
    for (j0, level) in tree.levels.iter().enumerate() {
        let j = (j0 + 1) as u64;
        let w = half_pow(j);
        for &lab in level {
            alpha[lab as usize] += &w;
            if j > tree.back_level as u64 {
                below_back[lab as usize] += &w;
            }
        }
    }
    PassMasses {
        alpha,
        below_back,
        stubs: *tree.internal_counts().last().unwrap(),
    }
}

/// Exact outcome probabilities, solving any restart loop in closed form.
///
/// One pass from the root gives each label `i` mass `alpha_i`. Reject
/// leaves restart the whole pass, a geometric series summing to
/// `alpha_i / (1 - alpha_reject)`. A suffix back-edge re-injects the stub
/// mass uniformly over level `l`'s internal nodes, whose continuation per
/// unit mass repeats with ratio `2^(l-k)`; the series closes to
/// `alpha_i + below_i * 2^l / (2^k - 2^l)` where `below_i` counts leaves
/// deeper than `l`. The result sums to exactly 1.
pub fn output_distribution(tree: &DdgTree) -> Vec<BigRational> {
    if tree.depth == 0 {
        return vec![BigRational::one()];
    }
    let n = tree.n as usize;
    let masses = pass_masses(tree);
    let mut out = Vec::with_capacity(n);
    if let Some(rej) = tree.reject_label {
        let accept = BigRational::one() - &masses.alpha[rej as usize];
        for i in 1..=n {
            out.push(&masses.alpha[i] / &accept);
        }
    } else if masses.stubs > 0 {
        let k = tree.depth as u64;
        let l = tree.back_level as u64;
        let loop_gain = BigRational::new(
            BigInt::one() << l,
            (BigInt::one() << k) - (BigInt::one() << l),
        );
        for i in 1..=n {
            out.push(&masses.alpha[i] + &masses.below_back[i] * &loop_gain);
        }
    } else {
        for i in 1..=n {
            out.push(masses.alpha[i].clone());
        }
    }
    debug_assert!(out.iter().sum::<BigRational>().is_one());
    out
}

/// Exact expected flips per returned sample, by first-step analysis over
/// the finite encoding: the expected bits of one pass plus one linear
/// equation for the restart loop, solved in rationals. Satisfies
/// `H(p) <= value < H(p) + 2` for entropy-optimal trees.
pub fn expected_bits(tree: &DdgTree) -> BigRational {
    if tree.depth == 0 {
        return BigRational::zero();
    }
    let k = tree.depth as u64;
    let l = tree.back_level as u64;
    let masses = pass_masses(tree);
    let stubs = masses.stubs;

    // expected bits of one pass: every path ends at a leaf or a stub
    let mut per_pass = BigRational::zero();
    for (j0, level) in tree.levels.iter().enumerate() {
        let j = (j0 + 1) as u64;
        per_pass += half_pow(j) * BigInt::from(j * level.len() as u64);
    }
    per_pass += half_pow(k) * BigInt::from(k * stubs);

    if let Some(rej) = tree.reject_label {
        // restart at the root: E = per_pass / (1 - reject mass)
        let accept = BigRational::one() - &masses.alpha[rej as usize];
        return per_pass / accept;
    }
    if stubs == 0 {
        return per_pass;
    }

    // suffix loop: expected additional bits from a re-entry at level l
    let mut tail = BigRational::zero();
    for (j0, level) in tree.levels.iter().enumerate() {
        let j = (j0 + 1) as u64;
        if j > l {
            tail += half_pow(j) * BigInt::from((j - l) * level.len() as u64);
        }
    }
    tail += half_pow(k) * BigInt::from((k - l) * stubs);
    let reentry_mass = half_pow(l) * BigInt::from(stubs);
    let per_reentry = tail / reentry_mass;
    let loop_ratio = half_pow(k - l);
    let from_reentry = per_reentry / (BigRational::one() - loop_ratio);
    per_pass + half_pow(k) * BigInt::from(stubs) * from_reentry
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::ReplayBitSource;
    use num_traits::ToPrimitive;

    fn dist(ws: &[u64]) -> WeightedDistribution {
        WeightedDistribution::new(ws.to_vec()).unwrap()
    }

    fn ratio(num: i64, den: i64) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    #[test]
    fn dyadic_tree_matches_expansions() {
        // (2,1,1)/4: expansions 0.10, 0.01, 0.01: depth 2, no back-edge
        let tree = ky_construct(&dist(&[2, 1, 1])).unwrap();
        assert_eq!(tree.depth(), 2);
        assert_eq!(tree.back_level(), 2);
        assert_eq!(tree.leaves_at(1), &[1]);
        assert_eq!(tree.leaves_at(2), &[2, 3]);
        assert_eq!(tree.node_count(), 5);
    }

    #[test]
    fn repeating_tree_with_back_edge() {
        // (3,7)/10: prefix 1 digit, suffix 4 digits
        let tree = ky_construct(&dist(&[3, 7])).unwrap();
        assert_eq!(tree.depth(), 5);
        assert_eq!(tree.back_level(), 1);
        assert_eq!(tree.leaves_at(1), &[2]);
        assert_eq!(tree.leaves_at(2), &[1]);
        assert_eq!(tree.leaves_at(3), &[2]);
        assert_eq!(tree.leaves_at(4), &[2]);
        assert_eq!(tree.leaves_at(5), &[1]);
    }

    #[test]
    fn fig_style_tree_for_one_four() {
        // 1/5 = 0.(0011) repeating, 4/5 = 0.(1100) repeating: back-edge to root
        let tree = ky_construct(&dist(&[1, 4])).unwrap();
        assert_eq!(tree.depth(), 4);
        assert_eq!(tree.back_level(), 0);
        assert_eq!(tree.leaves_at(1), &[2]);
        assert_eq!(tree.leaves_at(2), &[2]);
        assert_eq!(tree.leaves_at(3), &[1]);
        assert_eq!(tree.leaves_at(4), &[1]);
    }

    #[test]
    fn degenerate_single_outcome() {
        let tree = ky_construct(&dist(&[7])).unwrap();
        assert_eq!(tree.depth(), 0);
        assert_eq!(tree.node_count(), 1);
        let mut src = ReplayBitSource::new([]);
        assert_eq!(ky_sample(&tree, &mut src).unwrap(), 1);
        assert_eq!(src.bits_consumed(), 0);
        assert_eq!(output_distribution(&tree), vec![BigRational::one()]);
        assert!(expected_bits(&tree).is_zero());
    }

    #[test]
    fn sampling_follows_canonical_order() {
        let tree = ky_construct(&dist(&[1, 1])).unwrap();
        let mut src = ReplayBitSource::new([0]);
        assert_eq!(ky_sample(&tree, &mut src).unwrap(), 1);
        let mut src = ReplayBitSource::new([1]);
        assert_eq!(ky_sample(&tree, &mut src).unwrap(), 2);

        // (2,1,1): leaf 1 occupies the bit-0 branch of level 1
        let tree = ky_construct(&dist(&[2, 1, 1])).unwrap();
        let mut src = ReplayBitSource::new([0]);
        assert_eq!(ky_sample(&tree, &mut src).unwrap(), 1);
        let mut src = ReplayBitSource::new([1, 0]);
        assert_eq!(ky_sample(&tree, &mut src).unwrap(), 2);
        let mut src = ReplayBitSource::new([1, 1]);
        assert_eq!(ky_sample(&tree, &mut src).unwrap(), 3);
    }

    #[test]
    fn sampling_surfaces_exhaustion() {
        let tree = ky_construct(&dist(&[3, 7])).unwrap();
        let mut src = ReplayBitSource::new([1]); // level-1 internal, then dry
        assert_eq!(ky_sample(&tree, &mut src), Err(Error::BitsExhausted));
    }

    #[test]
    fn five_bit_paths_of_three_seven() {
        // exhaustive 5-bit enumeration: per-pass masses are 9/32 for outcome
        // 1, 22/32 for outcome 2, and 1/32 keeps walking via the back-edge
        let tree = ky_construct(&dist(&[3, 7])).unwrap();
        let mut mass = [0u64; 3]; // counts of 5-bit scripts, absorbed only
        let mut continuing = 0u64;
        for word in 0..32u8 {
            let script: Vec<u8> = (0..5).rev().map(|b| (word >> b) & 1).collect();
            let mut src = ReplayBitSource::new(script);
            match ky_sample(&tree, &mut src) {
                Ok(lab) => mass[lab as usize] += 1,
                Err(Error::BitsExhausted) => continuing += 1,
                Err(e) => panic!("unexpected error {e:?}"),
            }
        }
        assert_eq!(mass[1], 9);
        assert_eq!(mass[2], 22);
        assert_eq!(continuing, 1);
    }

    #[test]
    fn exact_output_distribution_examples() {
        let tree = ky_construct(&dist(&[1, 1])).unwrap();
        assert_eq!(output_distribution(&tree), vec![ratio(1, 2), ratio(1, 2)]);
        let tree = ky_construct(&dist(&[3, 7])).unwrap();
        assert_eq!(output_distribution(&tree), vec![ratio(3, 10), ratio(7, 10)]);
        let tree = ky_construct(&dist(&[1, 4])).unwrap();
        assert_eq!(output_distribution(&tree), vec![ratio(1, 5), ratio(4, 5)]);
    }

    #[test]
    fn expected_bits_examples() {
        assert_eq!(
            expected_bits(&ky_construct(&dist(&[2, 1, 1])).unwrap()),
            ratio(3, 2)
        );
        assert_eq!(
            expected_bits(&ky_construct(&dist(&[1, 1])).unwrap()),
            ratio(1, 1)
        );
        // first-step analysis closes the (3,7) loop at exactly 2 bits;
        // H(0.3, 0.7) = 0.8813 keeps it inside [H, H+2)
        let e = expected_bits(&ky_construct(&dist(&[3, 7])).unwrap());
        assert_eq!(e, ratio(2, 1));
        let h = dist(&[3, 7]).entropy_bits();
        let e = e.to_f64().unwrap();
        assert!(h <= e && e < h + 2.0);
    }

    #[test]
    fn node_counts() {
        assert_eq!(ky_construct(&dist(&[1, 1])).unwrap().node_count(), 3);
        assert_eq!(ky_construct(&dist(&[2, 1, 1])).unwrap().node_count(), 5);
        // (3,7): five labeled leaves plus one back-edge stub
        assert_eq!(ky_construct(&dist(&[3, 7])).unwrap().node_count(), 11);
    }

    #[test]
    fn depth_equals_minimal_depth_of_reduced_modulus() {
        use crate::bits::{SplitMix64, WordSource};
        let mut gen = SplitMix64::new(99);
        for _ in 0..300 {
            let n = 2 + (gen.next_word() % 7) as usize;
            let ws: Vec<u64> = (0..n).map(|_| 1 + gen.next_word() % 40).collect();
            let d = dist(&ws);
            let tree = ky_construct(&d).unwrap();
            let witness = numsys::minimal_depth(d.reduced_modulus());
            assert_eq!(tree.depth() as u64, witness.k, "weights {ws:?}");
            assert_eq!(tree.back_level() as u64, witness.l, "weights {ws:?}");
            assert_eq!(tree.validate(), Ok(()));
        }
    }

    #[test]
    fn dump_format() {
        let tree = ky_construct(&dist(&[3, 7])).unwrap();
        assert_eq!(
            tree.dump(),
            "level 1: [2]\nlevel 2: [1]\nlevel 3: [2]\nlevel 4: [2]\nlevel 5: [1]\nback-edge -> 1\n"
        );
        let tree = ky_construct(&dist(&[2, 1, 1])).unwrap();
        assert_eq!(tree.dump(), "level 1: [1]\nlevel 2: [2, 3]\n");
    }

    #[test]
    fn offset_preserving_reentry_on_multi_stub_tree() {
        // (2,5,5)/12 has two back-edge stubs; collapsing their offsets would
        // produce (3/16, 7/16, 3/8) instead of the exact distribution.
        let d = dist(&[2, 5, 5]);
        let tree = ky_construct(&d).unwrap();
        assert_eq!(
            output_distribution(&tree),
            vec![ratio(1, 6), ratio(5, 12), ratio(5, 12)]
        );
        // empirical spot-check of the sampler itself
        let mut src = crate::bits::PrngBitSource::new(123);
        let mut counts = [0u64; 4];
        let total = 120_000;
        for _ in 0..total {
            counts[ky_sample(&tree, &mut src).unwrap() as usize] += 1;
        }
        let f1 = counts[1] as f64 / total as f64;
        assert!((f1 - 1.0 / 6.0).abs() < 0.006, "outcome-1 frequency {f1}");
    }
}
