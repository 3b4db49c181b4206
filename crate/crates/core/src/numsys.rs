//! Number systems behind generating-tree depth.
//!
//! Probabilities expressible with an `l`-bit prefix and a `(k-l)`-bit
//! repeating suffix are exactly the integer multiples of `1/Z_kl`, where
//! `Z_kl = 2^k - 2^l` (the subtraction dropped when `l == k`, the dyadic
//! case). The depth of an entropy-optimal tree for a distribution with
//! reduced modulus `M` is the smallest `k` admitting an `l` with `M | Z_kl`.

use num_bigint::BigUint;
use num_traits::One;

use crate::Error;

/// The `(k, l)` pair witnessing the minimal depth for a modulus.
///
/// `l == k` means the distribution is dyadic and the tree needs no
/// back-edge. Note that a suffix of exactly one repeating digit can be
/// folded into a dyadic prefix one level deeper (`l == k-1` witnesses
/// coincide with dyadic ones, except for the all-ones value); witnesses are
/// reported raw, without that canonicalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DepthWitness {
    /// Depth in edges.
    pub k: u64,
    /// Back-edge target level, `0 <= l <= k`.
    pub l: u64,
}

impl DepthWitness {
    /// `Z_kl` as a big integer (depths routinely exceed 63 bits' worth).
    pub fn z_big(&self) -> BigUint {
        z_big(self.k, self.l)
    }
}

pub(crate) fn z_big(k: u64, l: u64) -> BigUint {
    let two_k = BigUint::one() << k;
    if l < k {
        two_k - (BigUint::one() << l)
    } else {
        two_k
    }
}

/// `Z_kl = 2^k - 2^l` when `l < k`, else `2^k`, as a machine word.
///
/// Requires `l <= k <= 62` so the value fits comfortably in 64 bits.
pub fn z_value(k: u32, l: u32) -> Result<u64, Error> {
    if k > 62 || l > k {
        return Err(Error::DepthOverflow);
    }
    let two_k = 1u64 << k;
    Ok(if l < k { two_k - (1u64 << l) } else { two_k })
}

/// Euler's totient, by trial-division factorization.
pub fn totient(m: u64) -> u64 {
    let mut n = m;
    let mut phi = m;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            phi -= phi / p;
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        phi -= phi / n;
    }
    phi
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Multiplicative order of 2 modulo odd `u > 1`: the order divides
/// `phi(u)`, so start there and strip prime factors while the power stays 1.
fn order_of_two(u: u64) -> u64 {
    debug_assert!(u > 1 && u % 2 == 1);
    let phi = totient(u);
    let mut order = phi;
    let mut rem = phi;
    let mut p = 2u64;
    while p * p <= rem {
        if rem.is_multiple_of(p) {
            while rem.is_multiple_of(p) {
                rem /= p;
            }
            while order.is_multiple_of(p) && pow_mod(2, order / p, u) == 1 {
                order /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rem > 1 {
        while order.is_multiple_of(rem) && pow_mod(2, order / rem, u) == 1 {
            order /= rem;
        }
    }
    order
}

/// Cap on moduli accepted by [`minimal_depth`]; keeps every intermediate in
/// a 64-bit word with room to spare.
pub const MAX_MODULUS: u64 = 1 << 31;

/// The smallest depth `k` (with its witnessing `l`) such that `M` divides
/// `Z_kl`.
///
/// Writing `M = u * 2^t` with `u` odd, `M | 2^k - 2^l` forces `l >= t` and
/// `k - l` to be a multiple of the order of 2 modulo `u`, so the minimum is
/// `k = t + ord_u(2)` with `l = t`; purely dyadic `M = 2^t` gives `k = l = t`.
/// The result satisfies `k <= M - 1` for `M >= 2`. `M == 1` (a degenerate
/// reduced instance) reports `k == l == 1`; the tree layer special-cases
/// single-outcome distributions to depth 0 regardless.
pub fn minimal_depth(m: u64) -> DepthWitness {
    assert!(m >= 1, "modulus must be positive");
    assert!(m <= MAX_MODULUS, "modulus exceeds the 2^31 analysis cap");
    if m == 1 {
        return DepthWitness { k: 1, l: 1 };
    }
    let t = m.trailing_zeros() as u64;
    let u = m >> t;
    if u == 1 {
        DepthWitness { k: t, l: t }
    } else {
        DepthWitness {
            k: t + order_of_two(u),
            l: t,
        }
    }
}

/// Whether 2 generates the full multiplicative group modulo an odd prime
/// `m`, i.e. its order is `m - 1`. When it does, the entropy-optimal tree
/// for any distribution with reduced modulus `m` has depth exactly `m - 1`.
pub fn is_primitive_root_2(m: u64) -> Result<bool, Error> {
    if m < 3 || m.is_multiple_of(2) || !is_prime(m) {
        return Err(Error::NotOddPrime);
    }
    Ok(order_of_two(m) == m - 1)
}

fn is_prime(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    if m.is_multiple_of(2) {
        return m == 2;
    }
    let mut p = 3u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            return false;
        }
        p += 2;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn z_value_examples() {
        assert_eq!(z_value(3, 3).unwrap(), 8);
        assert_eq!(z_value(5, 1).unwrap(), 30);
        assert_eq!(z_value(1, 0).unwrap(), 1);
        assert_eq!(z_value(62, 0).unwrap(), (1u64 << 62) - 1);
        assert_eq!(z_value(63, 0), Err(Error::DepthOverflow));
        assert_eq!(z_value(3, 4), Err(Error::DepthOverflow));
    }

    #[test]
    fn minimal_depth_examples() {
        assert_eq!(minimal_depth(10), DepthWitness { k: 5, l: 1 });
        assert_eq!(minimal_depth(8), DepthWitness { k: 3, l: 3 });
        assert_eq!(minimal_depth(5), DepthWitness { k: 4, l: 0 });
        assert_eq!(minimal_depth(7), DepthWitness { k: 3, l: 0 });
        assert_eq!(minimal_depth(1), DepthWitness { k: 1, l: 1 });
        assert_eq!(minimal_depth(10).z_big().to_u64().unwrap(), 30);
    }

    #[test]
    fn totient_examples() {
        assert_eq!(totient(1), 1);
        assert_eq!(totient(5), 4);
        assert_eq!(totient(10), 4);
        assert_eq!(totient(625), 500);
        assert_eq!(totient(97), 96);
    }

    #[test]
    fn primitive_root_examples() {
        assert_eq!(is_primitive_root_2(5), Ok(true));
        assert_eq!(is_primitive_root_2(7), Ok(false)); // 2^3 = 8 = 1 mod 7
        assert_eq!(is_primitive_root_2(11), Ok(true));
        assert_eq!(is_primitive_root_2(9), Err(Error::NotOddPrime));
        assert_eq!(is_primitive_root_2(2), Err(Error::NotOddPrime));
        assert_eq!(is_primitive_root_2(1), Err(Error::NotOddPrime));
    }

    /// Brute-force (k, l) scan. This is the oracle for the analytic formula:
    /// ascending k, preferring the largest l at each k.
    fn minimal_depth_scan(m: u64) -> DepthWitness {
        let mut pow2 = alloc::vec![1u64 % m]; // 2^j mod m
        for k in 1u64.. {
            pow2.push((pow2[(k - 1) as usize] * 2) % m);
            for l in (0..=k).rev() {
                let z_mod = if l < k {
                    (pow2[k as usize] + m - pow2[l as usize]) % m
                } else {
                    pow2[k as usize]
                };
                if z_mod == 0 && !(l == k && k == 0) {
                    return DepthWitness { k, l };
                }
            }
        }
        unreachable!()
    }

    #[test]
    fn analytic_depth_matches_bruteforce_scan() {
        for m in 2..=1000u64 {
            let analytic = minimal_depth(m);
            let scanned = minimal_depth_scan(m);
            assert_eq!(analytic, scanned, "m = {m}");
            // witness divides, and the depth bound of m - 1 holds
            let z = analytic.z_big();
            assert!((z % m).to_u64().unwrap() == 0, "m = {m}");
            assert!(analytic.k < m, "m = {m}");
        }
    }

    #[test]
    fn primitive_root_primes_reach_depth_bound() {
        for m in (3..=1000u64).step_by(2) {
            if !is_prime(m) {
                continue;
            }
            if is_primitive_root_2(m).unwrap() {
                assert_eq!(minimal_depth(m).k, m - 1, "m = {m}");
            } else {
                assert!(minimal_depth(m).k < m - 1, "m = {m}");
            }
        }
    }

    #[test]
    fn dyadic_moduli_need_no_back_edge() {
        for j in 1..=30u64 {
            let w = minimal_depth(1 << j);
            assert_eq!(w.k, j);
            assert_eq!(w.l, w.k);
        }
    }
}
