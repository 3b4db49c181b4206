//! The flip primitive: lazily drawn unbiased random bits with exact
//! accounting of bits consumed and generator-word refills.

use alloc::vec::Vec;

use crate::Error;

/// A generator of 64-bit pseudo-random words.
pub trait WordSource {
    fn next_word(&mut self) -> u64;
}

/// SplitMix64. Used to expand seeds and as a cheap standalone generator in
/// tests.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }
}

impl WordSource for SplitMix64 {
    fn next_word(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }
}

/// xoshiro256**: the default word generator. State is seeded through
/// SplitMix64, so every `u64` seed (including 0, the library default) yields
/// a valid, well-mixed state.
#[derive(Debug, Clone)]
pub struct Xoshiro256StarStar {
    s: [u64; 4],
}

impl Xoshiro256StarStar {
    pub fn new(seed: u64) -> Self {
        let mut sm = SplitMix64::new(seed);
        Self {
            s: [
                sm.next_word(),
                sm.next_word(),
                sm.next_word(),
                sm.next_word(),
            ],
        }
    }
}

impl WordSource for Xoshiro256StarStar {
    fn next_word(&mut self) -> u64 {
        let s = &mut self.s;
        let result = s[1].wrapping_mul(5).rotate_left(7).wrapping_mul(9);
        let t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = s[3].rotate_left(45);
        result
    }
}

/// A stream of unbiased bits with per-flip accounting.
///
/// A source is single-owner mutable state: samplers never share one
/// implicitly, and concurrent samplers must each own their own source.
pub trait BitSource {
    /// Draws one unbiased bit (0 or 1).
    fn flip(&mut self) -> Result<u8, Error>;

    /// Bits handed out since construction or the last counter reset.
    fn bits_consumed(&self) -> u64;

    /// Word refills of the underlying generator since construction or the
    /// last counter reset (always 0 for scripted sources).
    fn prng_calls(&self) -> u64;

    /// Zeroes both counters. Buffered bits are kept, so
    /// `prng_calls * 64 >= bits_consumed` is only guaranteed from a fresh
    /// source; measurement harnesses should start from one.
    fn reset_counters(&mut self);
}

/// Bit source backed by a word generator, draining each 64-bit word
/// most-significant-bit first.
#[derive(Debug, Clone)]
pub struct PrngBitSource<G = Xoshiro256StarStar> {
    generator: G,
    buffer: u64,
    remaining: u32,
    bits_consumed: u64,
    prng_calls: u64,
}

impl PrngBitSource<Xoshiro256StarStar> {
    /// Source over the default generator. Seed 0 is the library default.
    pub fn new(seed: u64) -> Self {
        Self::from_generator(Xoshiro256StarStar::new(seed))
    }
}

impl<G: WordSource> PrngBitSource<G> {
    pub fn from_generator(generator: G) -> Self {
        Self {
            generator,
            buffer: 0,
            remaining: 0,
            bits_consumed: 0,
            prng_calls: 0,
        }
    }
}

impl<G: WordSource> BitSource for PrngBitSource<G> {
    fn flip(&mut self) -> Result<u8, Error> {
        if self.remaining == 0 {
            self.buffer = self.generator.next_word();
            self.remaining = 64;
            self.prng_calls += 1;
        }
        let bit = (self.buffer >> 63) as u8;
        self.buffer <<= 1;
        self.remaining -= 1;
        self.bits_consumed += 1;
        Ok(bit)
    }

    fn bits_consumed(&self) -> u64 {
        self.bits_consumed
    }

    fn prng_calls(&self) -> u64 {
        self.prng_calls
    }

    fn reset_counters(&mut self) {
        self.bits_consumed = 0;
        self.prng_calls = 0;
    }
}

/// Bit source that replays an explicit script. Exhaustion is a hard error,
/// never a silent wraparound.
#[derive(Debug, Clone)]
pub struct ReplayBitSource {
    script: Vec<u8>,
    cursor: usize,
    bits_consumed: u64,
}

impl ReplayBitSource {
    /// Builds a source from bit values; anything nonzero reads as 1.
    pub fn new(bits: impl IntoIterator<Item = u8>) -> Self {
        Self {
            script: bits.into_iter().map(|b| (b != 0) as u8).collect(),
            cursor: 0,
            bits_consumed: 0,
        }
    }

    /// Parses ASCII `'0'`/`'1'` characters; whitespace is ignored.
    pub fn from_ascii(text: &str) -> Result<Self, Error> {
        let mut script = Vec::new();
        for ch in text.chars() {
            match ch {
                '0' => script.push(0),
                '1' => script.push(1),
                c if c.is_whitespace() => {}
                _ => return Err(Error::InvalidBit),
            }
        }
        Ok(Self {
            script,
            cursor: 0,
            bits_consumed: 0,
        })
    }

    pub fn remaining(&self) -> usize {
        self.script.len() - self.cursor
    }
}

impl BitSource for ReplayBitSource {
    fn flip(&mut self) -> Result<u8, Error> {
        let bit = *self.script.get(self.cursor).ok_or(Error::BitsExhausted)?;
        self.cursor += 1;
        self.bits_consumed += 1;
        Ok(bit)
    }

    fn bits_consumed(&self) -> u64 {
        self.bits_consumed
    }

    fn prng_calls(&self) -> u64 {
        0
    }

    fn reset_counters(&mut self) {
        self.bits_consumed = 0;
    }
}
