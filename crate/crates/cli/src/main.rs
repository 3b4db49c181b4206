use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;

use anyhow::{Context, Result};
use bitdice::baselines::DEFAULT_LOOKUP_CAP;
use bitdice::sampler::parse_sampler_list;
use bitdice::{BitSource, BuiltSampler, PrngBitSource, Sampler, SamplerKind, WeightedDistribution};
use bitdice_cli::{bench, gen, harness, io, scans};
use clap::{Parser, Subcommand};

/// Exact discrete sampling in the random-bit model: samplers, analytic
/// scans, and measurement campaigns emitting plot-ready CSV.
#[derive(Parser)]
#[command(name = "bitdice", version)]
struct Cli {
    /// Seed for the pseudo-random word generator (0 is the default stream).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Replay bits from a file of ASCII '0'/'1' instead of a generator.
    #[arg(long, global = true, value_name = "PATH")]
    bits: Option<PathBuf>,

    /// Write output here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Run benchmark rows sequentially (steadier timing).
    #[arg(long, global = true)]
    serial: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw samples and print one outcome (1-based) per line.
    Sample {
        sampler: SamplerArg,
        /// Weights, e.g. "3 7" or "3,7".
        weights: String,
        count: u64,
    },
    /// Draw samples and print a one-row goodness-of-fit report.
    Gof {
        sampler: SamplerArg,
        weights: String,
        count: u64,
    },
    /// Print a sampler's preprocessing table (fldr or ky).
    DumpTable {
        sampler: SamplerArg,
        weights: String,
    },
    /// CSV of entropy-optimal vs FLDR tree depth for m = 3..=m_max.
    DepthScan { m_max: u64 },
    /// CSV of the entropy-gap decomposition over m in (2^(k-1), 2^k].
    GapScan { k: u32 },
    /// Generate entropy-spaced integer distributions as a weight file.
    GenDists {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: u64,
        #[arg(long, default_value_t = 20)]
        count: usize,
        /// Lowest entropy target in bits (default: just above the floor).
        #[arg(long)]
        min_entropy: Option<f64>,
        /// Highest entropy target in bits (default: just below log2 n).
        #[arg(long)]
        max_entropy: Option<f64>,
    },
    /// Run a measurement campaign over samplers x distributions.
    Bench {
        /// Weight file with one distribution per line.
        #[arg(long, value_name = "PATH", conflicts_with = "gen")]
        weights: Option<PathBuf>,
        /// Generate the corpus instead: N,M,COUNT.
        #[arg(long, value_name = "N,M,COUNT")]
        gen: Option<String>,
        /// Samples per (sampler, distribution) pair.
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        /// Comma-separated sampler names (default: all six).
        #[arg(long)]
        samplers: Option<String>,
        /// Entry cap for the lookup-table sampler.
        #[arg(long, default_value_t = DEFAULT_LOOKUP_CAP)]
        lookup_cap: u64,
    },
}

#[derive(Clone)]
struct SamplerArg(SamplerKind);

impl std::str::FromStr for SamplerArg {
    type Err = bitdice::Error;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse().map(SamplerArg)
    }
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let output = run(&cli)?;
    match &cli.out {
        Some(path) => {
            fs::write(path, output).with_context(|| format!("writing {}", path.display()))?
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(output.as_bytes())?;
        }
    }
    Ok(())
}

fn make_source(cli: &Cli) -> Result<Box<dyn BitSource>> {
    Ok(match &cli.bits {
        Some(path) => Box::new(io::read_bits_file(path)?),
        None => Box::new(PrngBitSource::new(cli.seed)),
    })
}

fn run(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Sample {
            sampler,
            weights,
            count,
        } => {
            let dist = WeightedDistribution::parse(weights)?;
            let built = BuiltSampler::build(sampler.0, &dist)?;
            let mut source = make_source(cli)?;
            let mut out = String::new();
            for _ in 0..*count {
                let outcome = built.sample(source.as_mut())?;
                let _ = writeln!(out, "{outcome}");
            }
            Ok(out)
        }
        Command::Gof {
            sampler,
            weights,
            count,
        } => {
            let dist = WeightedDistribution::parse(weights)?;
            let built = BuiltSampler::build(sampler.0, &dist)?;
            let mut source = make_source(cli)?;
            let report = harness::run_timed(&built, &dist, *count, source.as_mut())?;
            let gof = bitdice::stats::chi_square_gof(&report, &dist)?;
            Ok(format!(
                "{}\n{}\n",
                harness::CSV_HEADER,
                harness::csv_row(sampler.0.name(), &dist, &report, Some(&gof))
            ))
        }
        Command::DumpTable { sampler, weights } => {
            let dist = WeightedDistribution::parse(weights)?;
            match sampler.0 {
                SamplerKind::Fldr => Ok(bitdice::fldr::fldr_preprocess(&dist)?.dump()),
                SamplerKind::Ky => Ok(bitdice::ddg::ky_construct(&dist)?.dump()),
                other => anyhow::bail!("no table dump for {other}; use fldr or ky"),
            }
        }
        Command::DepthScan { m_max } => Ok(scans::depth_scan_csv(&scans::depth_scan(*m_max)?)),
        Command::GapScan { k } => Ok(scans::gap_scan_csv(&scans::gap_scan(*k)?)),
        Command::GenDists {
            n,
            m,
            count,
            min_entropy,
            max_entropy,
        } => {
            let lo = min_entropy.unwrap_or_else(|| gen::entropy_floor(*n, *m) + 0.05);
            let hi = max_entropy.unwrap_or_else(|| gen::entropy_ceiling(*n, *m) - 0.01);
            let dists = gen::gen_dists(*n, *m, *count, lo, hi)?;
            let mut out = format!("# n={n} m={m} count={count} entropy={lo:.3}..{hi:.3}\n");
            out.push_str(&io::format_weight_file(&dists));
            Ok(out)
        }
        Command::Bench {
            weights,
            gen: gen_spec,
            samples,
            samplers,
            lookup_cap,
        } => {
            anyhow::ensure!(
                cli.bits.is_none(),
                "bench draws millions of samples from seeded generators; --bits is not supported"
            );
            let dists = match (weights, gen_spec) {
                (Some(path), _) => io::read_weight_file(path)?,
                (None, Some(spec)) => {
                    let parts: Vec<&str> = spec.split(',').collect();
                    anyhow::ensure!(parts.len() == 3, "--gen wants N,M,COUNT");
                    let n: usize = parts[0].trim().parse()?;
                    let m: u64 = parts[1].trim().parse()?;
                    let count: usize = parts[2].trim().parse()?;
                    gen::gen_dists(
                        n,
                        m,
                        count,
                        gen::entropy_floor(n, m) + 0.05,
                        gen::entropy_ceiling(n, m) - 0.01,
                    )?
                }
                (None, None) => anyhow::bail!("bench needs --weights or --gen"),
            };
            let mut config = bench::BenchConfig::new(dists);
            config.samples = *samples;
            config.seed = cli.seed;
            config.serial = cli.serial;
            config.lookup_cap = *lookup_cap;
            if let Some(list) = samplers {
                config.samplers = parse_sampler_list(list)?;
                anyhow::ensure!(!config.samplers.is_empty(), "empty sampler list");
            }
            let rows = bench::run_bench(&config);
            Ok(bench::bench_csv(&config, &rows))
        }
    }
}
