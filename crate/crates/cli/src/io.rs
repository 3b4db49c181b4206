//! Weight files and bit-script files.
//!
//! A weight file holds one distribution per line, integers separated by
//! spaces or commas; `#` begins a comment line. A bit-script file holds
//! ASCII `'0'`/`'1'` characters with whitespace ignored.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use bitdice::{ReplayBitSource, WeightedDistribution};

pub fn parse_weight_file(text: &str) -> Result<Vec<WeightedDistribution>> {
    let mut dists = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let dist = WeightedDistribution::parse(line)
            .with_context(|| format!("weight file line {}", idx + 1))?;
        dists.push(dist);
    }
    anyhow::ensure!(!dists.is_empty(), "weight file holds no distributions");
    Ok(dists)
}

pub fn read_weight_file(path: &Path) -> Result<Vec<WeightedDistribution>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_weight_file(&text)
}

pub fn format_weight_file(dists: &[WeightedDistribution]) -> String {
    let mut out = String::new();
    for dist in dists {
        let mut first = true;
        for &a in dist.weights() {
            if !first {
                out.push(' ');
            }
            let _ = write!(out, "{a}");
            first = false;
        }
        out.push('\n');
    }
    out
}

pub fn read_bits_file(path: &Path) -> Result<ReplayBitSource> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    ReplayBitSource::from_ascii(&text).with_context(|| format!("parsing {}", path.display()))
}
