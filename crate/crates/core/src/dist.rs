//! The input instance: positive integer weights `(a_1, ..., a_n)` summing
//! to `m`, sampled as outcome `i` with probability `a_i / m`.
//!
//! Outcomes are 1-indexed everywhere in this crate.

use alloc::vec::Vec;

use num_integer::Integer;

use crate::Error;

/// Weight sums are capped at 2^63 so that 2^k stays representable for every
/// sampler built on top.
pub const MAX_WEIGHT_SUM: u64 = 1 << 63;

/// Positive integer weights with their sum. Immutable after construction and
/// freely shareable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedDistribution {
    weights: Vec<u64>,
    m: u64,
}

impl WeightedDistribution {
    /// Validates and wraps a weight list. Zero weights are rejected rather
    /// than skipped: dropping them would silently renumber outcomes.
    pub fn new(weights: Vec<u64>) -> Result<Self, Error> {
        if weights.is_empty() {
            return Err(Error::EmptyWeights);
        }
        let mut m: u64 = 0;
        for &a in &weights {
            if a == 0 {
                return Err(Error::ZeroWeight);
            }
            m = m.checked_add(a).ok_or(Error::WeightSumOverflow)?;
        }
        if m > MAX_WEIGHT_SUM {
            return Err(Error::WeightSumOverflow);
        }
        Ok(Self { weights, m })
    }

    /// Parses whitespace- or comma-separated positive decimal integers.
    pub fn parse(text: &str) -> Result<Self, Error> {
        let mut weights = Vec::new();
        for token in text.split(|c: char| c.is_whitespace() || c == ',') {
            if token.is_empty() {
                continue;
            }
            if token == "0" {
                return Err(Error::ZeroWeight);
            }
            let a: u64 = token.parse().map_err(|_| {
                if token.starts_with('-') {
                    Error::ZeroWeight
                } else {
                    Error::InvalidWeight
                }
            })?;
            weights.push(a);
        }
        Self::new(weights)
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    /// The weight sum `m`.
    pub fn total(&self) -> u64 {
        self.m
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn weight(&self, outcome: u32) -> u64 {
        self.weights[(outcome - 1) as usize]
    }

    /// Shannon entropy in bits, `sum (a_i/m) * log2(m/a_i)`.
    ///
    /// Computed in double precision with compensated summation; exactness
    /// claims never rest on this value (exact checks use rationals).
    pub fn entropy_bits(&self) -> f64 {
        // H = log2(m) - (1/m) * sum a_i * log2(a_i), Kahan-summed.
        let mut sum = 0.0f64;
        let mut carry = 0.0f64;
        for &a in &self.weights {
            let term = a as f64 * libm::log2(a as f64);
            let y = term - carry;
            let t = sum + y;
            carry = (t - sum) - y;
            sum = t;
        }
        let h = libm::log2(self.m as f64) - sum / self.m as f64;
        if h < 0.0 {
            0.0
        } else {
            h
        }
    }

    /// The smallest positive `M` such that every `a_i/m` is an integer
    /// multiple of `1/Z` exactly when `M` divides `Z`:
    /// `M = lcm_i(m / gcd(a_i, m))`. Divides `m`.
    pub fn reduced_modulus(&self) -> u64 {
        let mut acc = 1u64;
        for &a in &self.weights {
            acc = acc.lcm(&(self.m / a.gcd(&self.m)));
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn dist(ws: &[u64]) -> WeightedDistribution {
        WeightedDistribution::new(ws.to_vec()).unwrap()
    }

    #[test]
    fn entropy_known_values() {
        assert_eq!(dist(&[1, 1]).entropy_bits(), 1.0);
        assert_eq!(dist(&[1, 1, 1, 1]).entropy_bits(), 2.0);
        // direct evaluation of sum p_i log2(1/p_i) with p = (0.2, 0.8)
        assert!((dist(&[1, 4]).entropy_bits() - 0.7219280948873623).abs() < 1e-12);
        assert!((dist(&[3, 7]).entropy_bits() - 0.8812908992306926).abs() < 1e-12);
    }

    #[test]
    fn reduced_modulus_examples() {
        assert_eq!(dist(&[3, 7]).reduced_modulus(), 10);
        assert_eq!(dist(&[2, 2]).reduced_modulus(), 2);
        assert_eq!(dist(&[1, 4]).reduced_modulus(), 5);
        assert_eq!(dist(&[2, 1, 1]).reduced_modulus(), 4);
    }

    #[test]
    fn parse_accepts_spaces_and_commas() {
        assert_eq!(
            WeightedDistribution::parse("1 4").unwrap().weights(),
            &[1, 4]
        );
        let d = WeightedDistribution::parse("3,7").unwrap();
        assert_eq!(d.weights(), &[3, 7]);
        assert_eq!(d.total(), 10);
        assert_eq!(
            WeightedDistribution::parse(" 2 ,1,\t1 ").unwrap().weights(),
            &[2, 1, 1]
        );
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert_eq!(WeightedDistribution::parse("0 1"), Err(Error::ZeroWeight));
        assert_eq!(WeightedDistribution::parse("-1 2"), Err(Error::ZeroWeight));
        assert_eq!(WeightedDistribution::parse(""), Err(Error::EmptyWeights));
        assert_eq!(
            WeightedDistribution::parse("  ,  "),
            Err(Error::EmptyWeights)
        );
        assert_eq!(
            WeightedDistribution::parse("1 x"),
            Err(Error::InvalidWeight)
        );
        assert_eq!(
            WeightedDistribution::parse("9223372036854775807 9223372036854775807 1"),
            Err(Error::WeightSumOverflow)
        );
    }

    #[test]
    fn entropy_invariant_under_permutation_and_scaling() {
        let mut gen = crate::bits::SplitMix64::new(17);
        use crate::bits::WordSource;
        for _ in 0..200 {
            let n = 2 + (gen.next_word() % 7) as usize;
            let ws: Vec<u64> = (0..n).map(|_| 1 + gen.next_word() % 50).collect();
            let mut rev = ws.clone();
            rev.reverse();
            let c = 1 + gen.next_word() % 9;
            let scaled: Vec<u64> = ws.iter().map(|a| a * c).collect();
            let h = dist(&ws).entropy_bits();
            assert!((h - dist(&rev).entropy_bits()).abs() < 1e-12);
            assert!((h - dist(&scaled).entropy_bits()).abs() < 1e-12);
            assert!(h >= 0.0 && h <= libm::log2(n as f64) + 1e-12);
            // reduced modulus is invariant under joint scaling
            assert_eq!(dist(&ws).reduced_modulus(), dist(&scaled).reduced_modulus());
        }
    }

    #[test]
    fn reduced_modulus_divides_total() {
        let mut gen = crate::bits::SplitMix64::new(5);
        use crate::bits::WordSource;
        for _ in 0..200 {
            let n = 1 + (gen.next_word() % 8) as usize;
            let ws: Vec<u64> = (0..n).map(|_| 1 + gen.next_word() % 60).collect();
            let d = dist(&ws);
            assert_eq!(d.total() % d.reduced_modulus(), 0);
        }
    }

    #[test]
    fn rejects_empty_and_zero_vectors() {
        assert_eq!(WeightedDistribution::new(vec![]), Err(Error::EmptyWeights));
        assert_eq!(
            WeightedDistribution::new(vec![1, 0]),
            Err(Error::ZeroWeight)
        );
    }
}
