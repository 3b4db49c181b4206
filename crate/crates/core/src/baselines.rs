//! Baseline exact samplers: rejection with a uniform proposal, rejection
//! with the dyadic proposal (lookup table and binary search), and the
//! integer alias method, together with the entropy-efficient uniform and
//! Bernoulli primitives they are built from.
//!
//! All built tables are immutable and shareable; sampling needs an owned
//! bit source per caller.

use alloc::vec;
use alloc::vec::Vec;

use crate::bits::BitSource;
use crate::dist::WeightedDistribution;
use crate::Error;

/// Exactly uniform draw from `1..=n` (the fast dice roller).
///
/// Keeps a running `(v, c)` pair: doubling folds each new bit into `c`
/// until `v >= n`, then either accepts `c` or rescales the leftover range.
/// Expected flips are below `log2(n) + 2`; `n == 1` consumes none.
pub fn fast_dice_roller(n: u64, source: &mut dyn BitSource) -> Result<u64, Error> {
    debug_assert!(n >= 1);
    if n == 1 {
        return Ok(1);
    }
    let mut v: u64 = 1;
    let mut c: u64 = 0;
    loop {
        v *= 2;
        c = 2 * c + source.flip()? as u64;
        if v >= n {
            if c < n {
                return Ok(c + 1);
            }
            v -= n;
            c -= n;
        }
    }
}

/// Exact Bernoulli draw with success probability `a/b` (`0 <= a <= b`).
///
/// Compares the bit stream against the lazily generated binary digits of
/// `a/b`: the first position where a flip differs from the digit decides
/// the outcome, and a terminated expansion (remainder zero) decides against
/// success since the remaining digits are all zero. Expected flips are at
/// most 2; the degenerate weights 0 and `b` consume none.
pub fn bernoulli(a: u64, b: u64, source: &mut dyn BitSource) -> Result<u8, Error> {
    debug_assert!(b >= 1 && a <= b);
    if a == 0 {
        return Ok(0);
    }
    if a == b {
        return Ok(1);
    }
    let mut rem = a;
    loop {
        rem *= 2;
        let digit = (rem >= b) as u8;
        rem -= b * digit as u64;
        let flip = source.flip()?;
        if flip < digit {
            return Ok(1);
        }
        if flip > digit {
            return Ok(0);
        }
        if rem == 0 {
            return Ok(0);
        }
    }
}

/// Draws `count` flips MSB-first into a word.
fn draw_word(count: u32, source: &mut dyn BitSource) -> Result<u64, Error> {
    let mut w = 0u64;
    for _ in 0..count {
        w = (w << 1) | source.flip()? as u64;
    }
    Ok(w)
}

/// Rejection sampler with the uniform proposal: propose `i` uniformly,
/// accept with probability `a_i / max_weight`. No table beyond the weights
/// themselves, but the expected trial count `n * max_weight / m` makes it
/// exponentially wasteful on skewed inputs.
#[derive(Debug, Clone)]
pub struct RejectionUniform {
    weights: Vec<u64>,
    max_weight: u64,
}

impl RejectionUniform {
    pub fn build(dist: &WeightedDistribution) -> Self {
        Self {
            weights: dist.weights().to_vec(),
            max_weight: dist.weights().iter().copied().max().unwrap(),
        }
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn sample(&self, source: &mut dyn BitSource) -> Result<u32, Error> {
        loop {
            let i = fast_dice_roller(self.weights.len() as u64, source)?;
            if bernoulli(self.weights[(i - 1) as usize], self.max_weight, source)? == 1 {
                return Ok(i as u32);
            }
        }
    }
}

/// Default cap on lookup-table entries. The table is intentionally
/// memory-hungry (size `m`); the cap keeps benchmark runs safe.
pub const DEFAULT_LOOKUP_CAP: u64 = 1 << 28;

/// Rejection sampler with the dyadic proposal, realized as a size-`m`
/// lookup table: `k = ceil(log2 m)` flips form a word `W`, accepted as
/// `T[W]` when `W < m`. Outcome `i` occupies the contiguous slots
/// `[sum_(j<i) a_j, sum_(j<=i) a_j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LookupTable {
    k: u32,
    entries: Vec<u32>,
}

impl LookupTable {
    pub fn build(dist: &WeightedDistribution) -> Result<Self, Error> {
        Self::build_with_cap(dist, DEFAULT_LOOKUP_CAP)
    }

    pub fn build_with_cap(dist: &WeightedDistribution, cap: u64) -> Result<Self, Error> {
        let m = dist.total();
        if m > cap {
            return Err(Error::TableTooLarge { entries: m, cap });
        }
        let mut entries = Vec::with_capacity(m as usize);
        for (i, &a) in dist.weights().iter().enumerate() {
            for _ in 0..a {
                entries.push((i + 1) as u32);
            }
        }
        Ok(Self {
            k: ceil_log2(m),
            entries,
        })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn sample(&self, source: &mut dyn BitSource) -> Result<u32, Error> {
        loop {
            let w = draw_word(self.k, source)?;
            if (w as usize) < self.entries.len() {
                return Ok(self.entries[w as usize]);
            }
        }
    }
}

/// Rejection sampler with the dyadic proposal, realized by binary search on
/// cumulative weights: same bit consumption as the lookup table, `n` words
/// of storage instead of `m`, and a logarithmic search per accepted draw.
#[derive(Debug, Clone)]
pub struct CumulativeTable {
    k: u32,
    m: u64,
    cumulative: Vec<u64>,
}

impl CumulativeTable {
    pub fn build(dist: &WeightedDistribution) -> Self {
        let mut cumulative = Vec::with_capacity(dist.n());
        let mut acc = 0u64;
        for &a in dist.weights() {
            acc += a;
            cumulative.push(acc);
        }
        Self {
            k: ceil_log2(dist.total()),
            m: dist.total(),
            cumulative,
        }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn cumulative(&self) -> &[u64] {
        &self.cumulative
    }

    /// Returns `min { j : W < T[j] }` (1-based) for accepted words.
    pub fn sample(&self, source: &mut dyn BitSource) -> Result<u32, Error> {
        loop {
            let w = draw_word(self.k, source)?;
            if w < self.m {
                let idx = self.cumulative.partition_point(|&t| t <= w);
                return Ok((idx + 1) as u32);
            }
        }
    }
}

/// One-table integer alias sampler: a uniform bucket draw plus an exact
/// biased coin choosing between the bucket's own label and its alias.
///
/// Built by the worklist pass over the scaled weights `n * a_i` against the
/// bucket capacity `m`: each finalized bucket `i` keeps threshold `t_i` and
/// spills `m - t_i` to its alias, so that
/// `t_i + sum_(j: alias_j = i) (m - t_j) = n * a_i` for every outcome.
#[derive(Debug, Clone)]
pub struct AliasTable {
    m: u64,
    keep: Vec<u64>,
    alias: Vec<u32>,
}

impl AliasTable {
    pub fn build(dist: &WeightedDistribution) -> Self {
        let n = dist.n();
        let m = dist.total();
        let mut scaled: Vec<u128> = dist
            .weights()
            .iter()
            .map(|&a| a as u128 * n as u128)
            .collect();
        let mut keep = vec![0u64; n];
        let mut alias = vec![0u32; n];
        let mut small = Vec::new();
        let mut large = Vec::new();
        for (i, &s) in scaled.iter().enumerate() {
            match s.cmp(&(m as u128)) {
                core::cmp::Ordering::Less => small.push(i),
                core::cmp::Ordering::Greater => large.push(i),
                core::cmp::Ordering::Equal => keep[i] = m,
            }
        }
        while let (Some(s), Some(g)) = (small.pop(), large.pop()) {
            keep[s] = scaled[s] as u64;
            alias[s] = (g + 1) as u32;
            scaled[g] -= m as u128 - scaled[s];
            match scaled[g].cmp(&(m as u128)) {
                core::cmp::Ordering::Less => small.push(g),
                core::cmp::Ordering::Greater => large.push(g),
                core::cmp::Ordering::Equal => keep[g] = m,
            }
        }
        // rounding-free arithmetic: leftovers are exactly full
        for i in small.into_iter().chain(large) {
            keep[i] = m;
        }
        Self { m, keep, alias }
    }

    pub fn n(&self) -> usize {
        self.keep.len()
    }

    /// Threshold `t_i` (in `0..=m`) for bucket `i` (1-based).
    pub fn keep_weight(&self, outcome: u32) -> u64 {
        self.keep[(outcome - 1) as usize]
    }

    /// Alias label of bucket `i` (1-based); 0 when the bucket never spills.
    pub fn alias_of(&self, outcome: u32) -> u32 {
        self.alias[(outcome - 1) as usize]
    }

    pub fn sample(&self, source: &mut dyn BitSource) -> Result<u32, Error> {
        let u = fast_dice_roller(self.keep.len() as u64, source)? as u32;
        if bernoulli(self.keep_weight(u), self.m, source)? == 1 {
            Ok(u)
        } else {
            Ok(self.alias_of(u))
        }
    }
}

fn ceil_log2(m: u64) -> u32 {
    if m <= 1 {
        0
    } else {
        64 - (m - 1).leading_zeros()
    }
}
