//! Timed measurement runs and the CSV row schema shared by `gof` and
//! `bench` output.

use std::time::Instant;

use anyhow::Result;
use bitdice::stats::{self, GofResult, SampleReport};
use bitdice::{BitSource, Sampler, WeightedDistribution};

/// Fixed report schema.
pub const CSV_HEADER: &str =
    "sampler,n,m,H,entropy_bits_per_sample,prng_calls,elapsed_ns,chi2,p_value";

/// Draws `total` samples with wall-clock timing (monotonic clock; timing is
/// reported, never asserted).
pub fn run_timed(
    sampler: &dyn Sampler,
    dist: &WeightedDistribution,
    total: u64,
    source: &mut dyn BitSource,
) -> Result<SampleReport> {
    let start = Instant::now();
    let mut report = stats::run_sampler(sampler, dist, total, source)?;
    report.elapsed_ns = start.elapsed().as_nanos() as u64;
    Ok(report)
}

/// One row of the fixed schema. The goodness-of-fit columns stay empty when
/// the test is unavailable (expected counts below 5).
pub fn csv_row(
    sampler: &str,
    dist: &WeightedDistribution,
    report: &SampleReport,
    gof: Option<&GofResult>,
) -> String {
    let (chi2, p_value) = match gof {
        Some(g) => (format!("{:.6}", g.statistic), format!("{:.6e}", g.p_value)),
        None => (String::new(), String::new()),
    };
    format!(
        "{},{},{},{:.6},{:.6},{},{},{},{}",
        sampler,
        dist.n(),
        dist.total(),
        dist.entropy_bits(),
        report.bits_per_sample(),
        report.prng_calls,
        report.elapsed_ns,
        chi2,
        p_value,
    )
}
