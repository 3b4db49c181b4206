//! Exact sampling of discrete distributions in the random-bit model.
//!
//! Every sampler in this crate draws its randomness one fair bit at a time
//! from a [`BitSource`] and produces outcomes whose probabilities are
//! *exactly* `a_i / m` for integer weights `(a_1, ..., a_n)` summing to `m` -
//! no floating-point rounding anywhere on the sampling path. The crate
//! provides:
//!
//! - the Fast Loaded Dice Roller ([`fldr`]): near-entropy-optimal sampling
//!   with tables linear in the size of the input;
//! - the Knuth–Yao entropy-optimal sampler ([`ddg`]): generating trees built
//!   from the binary expansions of the probabilities, finitely encoded with
//!   a back-edge when the expansions repeat;
//! - three rejection baselines and an integer alias sampler ([`baselines`]);
//! - exact-rational analysis of any generating tree (output distribution and
//!   expected bits per sample, solved in `BigRational` arithmetic);
//! - the number systems behind tree depth ([`numsys`]) and measurement
//!   utilities ([`stats`]).
//!
//! The crate is `no_std` (with `alloc`); IO, file formats, and the benchmark
//! CLI live in the companion `bitdice-cli` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod baselines;
pub mod bits;
pub mod ddg;
pub mod dist;
pub mod fldr;
pub mod numsys;
pub mod sampler;
pub mod stats;

pub use baselines::{AliasTable, CumulativeTable, LookupTable, RejectionUniform};
pub use bits::{BitSource, PrngBitSource, ReplayBitSource};
pub use ddg::DdgTree;
pub use dist::WeightedDistribution;
pub use fldr::FldrTable;
pub use sampler::{BuiltSampler, Sampler, SamplerKind};
pub use stats::{GofResult, SampleReport};

use core::fmt;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
#[non_exhaustive]
pub enum Error {
    /// A weight list was empty.
    EmptyWeights,
    /// A weight was zero (weights must be positive integers).
    ZeroWeight,
    /// A weight token could not be parsed as a positive integer.
    InvalidWeight,
    /// The weight sum overflowed the 2^63 cap.
    WeightSumOverflow,
    /// The weight sum exceeds what the requested sampler can index (2^62).
    WeightSumTooLarge,
    /// `z_value` called with a depth that does not fit in a 64-bit word.
    DepthOverflow,
    /// The reduced modulus exceeds the 2^31 analysis cap.
    ModulusTooLarge,
    /// Primitive-root test called on a number that is not an odd prime.
    NotOddPrime,
    /// A lookup table would exceed the configured entry cap.
    TableTooLarge { entries: u64, cap: u64 },
    /// A scripted bit source ran out of bits.
    BitsExhausted,
    /// A bit script contained a character other than '0', '1', or whitespace.
    InvalidBit,
    /// Sampler name not recognized.
    UnknownSampler,
    /// Goodness-of-fit called with an expected count below 5.
    LowExpectedCount,
    /// The operation needs at least two outcomes.
    TooFewOutcomes,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyWeights => write!(f, "weight list is empty"),
            Error::ZeroWeight => write!(f, "weights must be positive (found 0)"),
            Error::InvalidWeight => write!(f, "weight is not a positive integer"),
            Error::WeightSumOverflow => write!(f, "weight sum exceeds 2^63"),
            Error::WeightSumTooLarge => write!(f, "weight sum exceeds 2^62"),
            Error::DepthOverflow => write!(f, "depth exceeds 62, value does not fit a 64-bit word"),
            Error::ModulusTooLarge => write!(f, "reduced modulus exceeds the 2^31 analysis cap"),
            Error::NotOddPrime => write!(f, "argument is not an odd prime"),
            Error::TableTooLarge { entries, cap } => {
                write!(f, "lookup table needs {entries} entries, cap is {cap}")
            }
            Error::BitsExhausted => write!(f, "replay bit source exhausted"),
            Error::InvalidBit => write!(f, "bit script may only contain '0', '1', and whitespace"),
            Error::UnknownSampler => write!(
                f,
                "unknown sampler (expected fldr, ky, rej-uniform, rej-lookup, rej-binsearch, or alias)"
            ),
            Error::LowExpectedCount => write!(f, "expected count below 5 for some outcome"),
            Error::TooFewOutcomes => write!(f, "operation requires at least two outcomes"),
        }
    }
}

impl core::error::Error for Error {}
