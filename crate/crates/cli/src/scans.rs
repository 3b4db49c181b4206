//! Analytic scans: tree depth versus the weight sum, and the entropy-gap
//! decomposition across one dyadic octave. Pure computation, no sampling.

use std::fmt::Write as _;

use anyhow::Result;
use bitdice::fldr;
use bitdice::numsys::minimal_depth;
use bitdice::WeightedDistribution;
use num_traits::ToPrimitive;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DepthRow {
    pub m: u64,
    /// Depth of the entropy-optimal tree for a distribution with an entry
    /// `1/m`: grows like m on primes where 2 is a primitive root.
    pub ky_depth: u64,
    /// Depth of the FLDR proposal tree: always `ceil(log2 m)`.
    pub fldr_depth: u32,
}

pub fn depth_scan(m_max: u64) -> Result<Vec<DepthRow>> {
    anyhow::ensure!(
        (3..=100_000).contains(&m_max),
        "depth scan range is 3..=100000"
    );
    Ok((3..=m_max)
        .map(|m| DepthRow {
            m,
            ky_depth: minimal_depth(m).k,
            fldr_depth: 64 - (m - 1).leading_zeros(),
        })
        .collect())
}

pub fn depth_scan_csv(rows: &[DepthRow]) -> String {
    let mut out = String::from("m,ky_depth,fldr_depth\n");
    for row in rows {
        let _ = writeln!(out, "{},{},{}", row.m, row.ky_depth, row.fldr_depth);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapRow {
    pub m: u64,
    pub term1: f64,
    pub term2: f64,
    pub exact_gap: f64,
}

/// Entropy-gap terms for the distribution `(1, m-1)` at every `m` in
/// `(2^(k-1), 2^k]`.
pub fn gap_scan(k: u32) -> Result<Vec<GapRow>> {
    anyhow::ensure!((2..=20).contains(&k), "gap scan precision is 2..=20");
    let mut rows = Vec::with_capacity(1 << (k - 1));
    for m in (1u64 << (k - 1)) + 1..=1u64 << k {
        let dist = WeightedDistribution::new(vec![1, m - 1])?;
        let gap = fldr::entropy_gap(&dist)?;
        rows.push(GapRow {
            m,
            term1: gap.term1_bits,
            term2: gap.term2_bits,
            exact_gap: gap.gap_bits,
        });
    }
    Ok(rows)
}

pub fn gap_scan_csv(rows: &[GapRow]) -> String {
    let mut out = String::from("m,term1,term2,exact_gap\n");
    for row in rows {
        let _ = writeln!(
            out,
            "{},{:.9},{:.9},{:.9}",
            row.m, row.term1, row.term2, row.exact_gap
        );
    }
    out
}

/// Exact expected bits per sample of the FLDR tree for `(1, m-1)`, used by
/// figure reproduction alongside the gap terms.
pub fn fldr_expected_bits(m: u64) -> Result<f64> {
    let dist = WeightedDistribution::new(vec![1, m - 1])?;
    let table = fldr::fldr_preprocess(&dist)?;
    Ok(bitdice::ddg::expected_bits(&fldr::fldr_as_ddg(&table))
        .to_f64()
        .unwrap())
}
