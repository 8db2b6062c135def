//! Small-integer primality and factorization by trial division.
//!
//! Everything in this crate works at desk scale (orders well below 2^16),
//! so trial division is the right tool.

use alloc::vec::Vec;

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Writes `n = p^k` for a prime `p`, if possible.
pub(crate) fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut k = 0;
            let mut rest = n;
            while rest.is_multiple_of(p) {
                rest /= p;
                k += 1;
            }
            return (rest == 1).then_some((p, k));
        }
        p += 1;
    }
    Some((n, 1))
}

/// Factors `n >= 2` into prime powers of distinct primes, ascending.
pub(crate) fn factor_prime_powers(n: u64) -> Vec<(u64, u32)> {
    debug_assert!(n >= 2);
    let mut out = Vec::new();
    let mut rest = n;
    let mut p = 2;
    while p * p <= rest {
        if rest.is_multiple_of(p) {
            let mut k = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += 1;
    }
    if rest > 1 {
        out.push((rest, 1));
    }
    out
}

pub(crate) fn primes_up_to(m: u64) -> Vec<u64> {
    (2..=m).filter(|&p| is_prime(p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_power_detection() {
        assert_eq!(prime_power(2), Some((2, 1)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(128), Some((2, 7)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
        assert_eq!(prime_power(0), None);
        assert_eq!(prime_power(65537), Some((65537, 1)));
    }

    #[test]
    fn factorization() {
        assert_eq!(factor_prime_powers(60), alloc::vec![(2, 2), (3, 1), (5, 1)]);
        assert_eq!(factor_prime_powers(35), alloc::vec![(5, 1), (7, 1)]);
        assert_eq!(factor_prime_powers(121), alloc::vec![(11, 2)]);
    }

    #[test]
    fn primes_list() {
        assert_eq!(primes_up_to(9), alloc::vec![2, 3, 5, 7]);
        assert!(primes_up_to(1).is_empty());
    }
}
