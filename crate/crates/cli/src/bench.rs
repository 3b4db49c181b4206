//! Measurement campaigns: build each requested sampler on each
//! distribution, record preprocessing time and table memory, then draw
//! samples with full bit accounting and a goodness-of-fit check.
//!
//! Rows run in parallel by default, one sampler+source pair per worker,
//! with per-row seeds derived up front so the CSV (timing aside) is
//! deterministic for a given `--seed` regardless of scheduling.

use std::fmt::Write as _;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use anyhow::Result;
use bitdice::bits::{SplitMix64, WordSource};
use bitdice::stats::GofResult;
use bitdice::{
    baselines, BuiltSampler, Error, PrngBitSource, SampleReport, SamplerKind, WeightedDistribution,
};

use crate::harness;

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub samplers: Vec<SamplerKind>,
    pub dists: Vec<WeightedDistribution>,
    pub samples: u64,
    pub seed: u64,
    pub serial: bool,
    pub lookup_cap: u64,
}

impl BenchConfig {
    pub fn new(dists: Vec<WeightedDistribution>) -> Self {
        Self {
            samplers: SamplerKind::ALL.to_vec(),
            dists,
            samples: 1_000_000,
            seed: 0,
            serial: false,
            lookup_cap: baselines::DEFAULT_LOOKUP_CAP,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Measurement {
    pub preprocess_ns: u64,
    pub memory_bytes: u64,
    pub report: SampleReport,
    pub gof: Option<GofResult>,
}

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub sampler: SamplerKind,
    pub dist_index: usize,
    pub outcome: Result<Measurement, Error>,
}

fn measure_row(
    kind: SamplerKind,
    dist: &WeightedDistribution,
    samples: u64,
    seed: u64,
    lookup_cap: u64,
) -> Result<Measurement, Error> {
    let start = Instant::now();
    let sampler = BuiltSampler::build_with_lookup_cap(kind, dist, lookup_cap)?;
    let preprocess_ns = start.elapsed().as_nanos() as u64;
    let memory_bytes = sampler.memory_bytes();
    let mut source = PrngBitSource::new(seed);
    let start = Instant::now();
    let mut report = bitdice::stats::run_sampler(&sampler, dist, samples, &mut source)?;
    report.elapsed_ns = start.elapsed().as_nanos() as u64;
    let gof = bitdice::stats::chi_square_gof(&report, dist).ok();
    Ok(Measurement {
        preprocess_ns,
        memory_bytes,
        report,
        gof,
    })
}

pub fn run_bench(config: &BenchConfig) -> Vec<BenchRow> {
    struct RowSpec {
        sampler: SamplerKind,
        dist_index: usize,
        seed: u64,
    }
    let mut seeder = SplitMix64::new(config.seed);
    let mut specs = Vec::new();
    for dist_index in 0..config.dists.len() {
        for &sampler in &config.samplers {
            specs.push(RowSpec {
                sampler,
                dist_index,
                seed: seeder.next_word(),
            });
        }
    }

    let results: Vec<Mutex<Option<BenchRow>>> = specs.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = if config.serial {
        1
    } else {
        std::thread::available_parallelism()
            .map(|p| p.get())
            .unwrap_or(1)
            .min(specs.len().max(1))
    };

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::Relaxed);
                if idx >= specs.len() {
                    break;
                }
                let spec = &specs[idx];
                let outcome = measure_row(
                    spec.sampler,
                    &config.dists[spec.dist_index],
                    config.samples,
                    spec.seed,
                    config.lookup_cap,
                );
                *results[idx].lock().unwrap() = Some(BenchRow {
                    sampler: spec.sampler,
                    dist_index: spec.dist_index,
                    outcome,
                });
            });
        }
    });

    results
        .into_iter()
        .map(|cell| cell.into_inner().unwrap().unwrap())
        .collect()
}

/// The fixed report schema extended with the preprocessing columns a
/// campaign adds; rows whose build was refused (for example a lookup table
/// over the memory cap) keep their identity columns and are marked
/// `skipped`.
pub fn bench_csv(config: &BenchConfig, rows: &[BenchRow]) -> String {
    let mut out = String::from(harness::CSV_HEADER);
    out.push_str(",preprocess_ns,memory_bytes,status\n");
    for row in rows {
        let dist = &config.dists[row.dist_index];
        match &row.outcome {
            Ok(m) => {
                let _ = writeln!(
                    out,
                    "{},{},{},ok",
                    harness::csv_row(row.sampler.name(), dist, &m.report, m.gof.as_ref()),
                    m.preprocess_ns,
                    m.memory_bytes
                );
            }
            Err(_) => {
                let _ = writeln!(
                    out,
                    "{},{},{},{:.6},,,,,,,,skipped",
                    row.sampler.name(),
                    dist.n(),
                    dist.total(),
                    dist.entropy_bits()
                );
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_config() -> BenchConfig {
        let dists = vec![
            WeightedDistribution::parse("3 7").unwrap(),
            WeightedDistribution::parse("1 1 1").unwrap(),
        ];
        let mut config = BenchConfig::new(dists);
        config.samples = 20_000;
        config
    }

    #[test]
    fn campaign_covers_every_pair() {
        let config = tiny_config();
        let rows = run_bench(&config);
        assert_eq!(rows.len(), 12);
        for row in &rows {
            let m = row.outcome.as_ref().expect("no skips expected");
            assert_eq!(m.report.total, 20_000);
            assert!(m.memory_bytes > 0);
        }
        let csv = bench_csv(&config, &rows);
        assert_eq!(csv.lines().count(), 13);
        assert!(csv.starts_with(harness::CSV_HEADER));
    }

    #[test]
    fn sampled_columns_are_seed_deterministic() {
        let config = tiny_config();
        let a = run_bench(&config);
        let b = run_bench(&config);
        for (x, y) in a.iter().zip(&b) {
            let (mx, my) = (x.outcome.as_ref().unwrap(), y.outcome.as_ref().unwrap());
            assert_eq!(mx.report.counts, my.report.counts);
            assert_eq!(mx.report.bits_consumed, my.report.bits_consumed);
            assert_eq!(mx.report.prng_calls, my.report.prng_calls);
        }
    }

    #[test]
    fn serial_matches_parallel() {
        let mut config = tiny_config();
        let parallel = run_bench(&config);
        config.serial = true;
        let serial = run_bench(&config);
        for (x, y) in parallel.iter().zip(&serial) {
            assert_eq!(
                x.outcome.as_ref().unwrap().report.counts,
                y.outcome.as_ref().unwrap().report.counts
            );
        }
    }

    #[test]
    fn oversized_lookup_rows_are_skipped_not_fatal() {
        let mut config = tiny_config();
        config.lookup_cap = 2; // below both corpus sums
        let rows = run_bench(&config);
        let skipped: Vec<_> = rows
            .iter()
            .filter(|r| r.outcome.is_err())
            .map(|r| r.sampler)
            .collect();
        assert_eq!(
            skipped,
            vec![SamplerKind::RejLookup, SamplerKind::RejLookup]
        );
        let csv = bench_csv(&config, &rows);
        assert_eq!(csv.matches(",skipped").count(), 2);
        assert_eq!(csv.matches(",ok").count(), 10);
    }
}
