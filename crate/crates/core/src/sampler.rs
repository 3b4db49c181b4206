//! A common face over every sampler in the crate, so harnesses can build
//! and drive them by name.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::baselines::{AliasTable, CumulativeTable, LookupTable, RejectionUniform};
use crate::bits::BitSource;
use crate::ddg::{self, DdgTree};
use crate::dist::WeightedDistribution;
use crate::fldr::{self, FldrTable};
use crate::Error;

/// Draws one outcome in `1..=n`.
pub trait Sampler {
    fn sample(&self, source: &mut dyn BitSource) -> Result<u32, Error>;
}

impl Sampler for DdgTree {
    fn sample(&self, source: &mut dyn BitSource) -> Result<u32, Error> {
        ddg::ky_sample(self, source)
    }
}

impl Sampler for FldrTable {
    fn sample(&self, source: &mut dyn BitSource) -> Result<u32, Error> {
        fldr::fldr_sample(self, source)
    }
}

impl Sampler for RejectionUniform {
    fn sample(&self, source: &mut dyn BitSource) -> Result<u32, Error> {
        RejectionUniform::sample(self, source)
    }
}

impl Sampler for LookupTable {
    fn sample(&self, source: &mut dyn BitSource) -> Result<u32, Error> {
        LookupTable::sample(self, source)
    }
}

impl Sampler for CumulativeTable {
    fn sample(&self, source: &mut dyn BitSource) -> Result<u32, Error> {
        CumulativeTable::sample(self, source)
    }
}

impl Sampler for AliasTable {
    fn sample(&self, source: &mut dyn BitSource) -> Result<u32, Error> {
        AliasTable::sample(self, source)
    }
}

/// The samplers addressable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SamplerKind {
    Fldr,
    Ky,
    RejUniform,
    RejLookup,
    RejBinsearch,
    Alias,
}

impl SamplerKind {
    pub const ALL: [SamplerKind; 6] = [
        SamplerKind::Fldr,
        SamplerKind::Ky,
        SamplerKind::RejUniform,
        SamplerKind::RejLookup,
        SamplerKind::RejBinsearch,
        SamplerKind::Alias,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SamplerKind::Fldr => "fldr",
            SamplerKind::Ky => "ky",
            SamplerKind::RejUniform => "rej-uniform",
            SamplerKind::RejLookup => "rej-lookup",
            SamplerKind::RejBinsearch => "rej-binsearch",
            SamplerKind::Alias => "alias",
        }
    }
}

impl FromStr for SamplerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "fldr" => Ok(SamplerKind::Fldr),
            "ky" => Ok(SamplerKind::Ky),
            "rej-uniform" => Ok(SamplerKind::RejUniform),
            "rej-lookup" => Ok(SamplerKind::RejLookup),
            "rej-binsearch" => Ok(SamplerKind::RejBinsearch),
            "alias" => Ok(SamplerKind::Alias),
            _ => Err(Error::UnknownSampler),
        }
    }
}

impl fmt::Display for SamplerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A sampler built for one distribution, with its preprocessing table.
#[derive(Debug, Clone)]
pub enum BuiltSampler {
    Fldr(FldrTable),
    Ky(DdgTree),
    RejUniform(RejectionUniform),
    RejLookup(LookupTable),
    RejBinsearch(CumulativeTable),
    Alias(AliasTable),
}

impl BuiltSampler {
    pub fn build(kind: SamplerKind, dist: &WeightedDistribution) -> Result<Self, Error> {
        Self::build_with_lookup_cap(kind, dist, crate::baselines::DEFAULT_LOOKUP_CAP)
    }

    pub fn build_with_lookup_cap(
        kind: SamplerKind,
        dist: &WeightedDistribution,
        lookup_cap: u64,
    ) -> Result<Self, Error> {
        Ok(match kind {
            SamplerKind::Fldr => BuiltSampler::Fldr(fldr::fldr_preprocess(dist)?),
            SamplerKind::Ky => BuiltSampler::Ky(ddg::ky_construct(dist)?),
            SamplerKind::RejUniform => BuiltSampler::RejUniform(RejectionUniform::build(dist)),
            SamplerKind::RejLookup => {
                BuiltSampler::RejLookup(LookupTable::build_with_cap(dist, lookup_cap)?)
            }
            SamplerKind::RejBinsearch => BuiltSampler::RejBinsearch(CumulativeTable::build(dist)),
            SamplerKind::Alias => BuiltSampler::Alias(AliasTable::build(dist)),
        })
    }

    pub fn kind(&self) -> SamplerKind {
        match self {
            BuiltSampler::Fldr(_) => SamplerKind::Fldr,
            BuiltSampler::Ky(_) => SamplerKind::Ky,
            BuiltSampler::RejUniform(_) => SamplerKind::RejUniform,
            BuiltSampler::RejLookup(_) => SamplerKind::RejLookup,
            BuiltSampler::RejBinsearch(_) => SamplerKind::RejBinsearch,
            BuiltSampler::Alias(_) => SamplerKind::Alias,
        }
    }

    /// Preprocessing-table size in bytes, from the logical layout of each
    /// structure (not process RSS):
    ///
    /// - fldr: `4*(k + (n+1)*k)`: the `h` array plus the dense label matrix
    /// - ky: `4*(labels + levels)`: per-level label lists plus one length each
    /// - rej-uniform: `8*(n + 1)`: the weights plus their maximum
    /// - rej-lookup: `4*m`: one label per weight unit
    /// - rej-binsearch: `8*n`: cumulative sums
    /// - alias: `12*n`: a threshold and an alias label per bucket
    pub fn memory_bytes(&self) -> u64 {
        match self {
            BuiltSampler::Fldr(t) => 4 * (t.k() as u64 + (t.n() as u64 + 1) * t.k() as u64),
            BuiltSampler::Ky(t) => {
                let labels: u64 = (1..=t.depth()).map(|j| t.leaves_at(j).len() as u64).sum();
                4 * (labels + t.depth() as u64)
            }
            BuiltSampler::RejUniform(r) => 8 * (r.n() as u64 + 1),
            BuiltSampler::RejLookup(t) => 4 * t.entries().len() as u64,
            BuiltSampler::RejBinsearch(t) => 8 * t.cumulative().len() as u64,
            BuiltSampler::Alias(t) => 12 * t.n() as u64,
        }
    }
}

impl Sampler for BuiltSampler {
    fn sample(&self, source: &mut dyn BitSource) -> Result<u32, Error> {
        match self {
            BuiltSampler::Fldr(t) => t.sample(source),
            BuiltSampler::Ky(t) => t.sample(source),
            BuiltSampler::RejUniform(t) => t.sample(source),
            BuiltSampler::RejLookup(t) => t.sample(source),
            BuiltSampler::RejBinsearch(t) => t.sample(source),
            BuiltSampler::Alias(t) => t.sample(source),
        }
    }
}

/// Parses a comma-separated sampler list, e.g. `fldr,ky,alias`.
pub fn parse_sampler_list(text: &str) -> Result<Vec<SamplerKind>, Error> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(SamplerKind::from_str)
        .collect()
}
