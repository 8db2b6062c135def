//! Parameter selection and the full synthesis pipeline: write `n` as
//! `m*t + u` with `m = q^2` for a prime power `q`, where `t` dodges a pair
//! of congruence conditions for every prime up to `m`, then compose
//! ingredient codes over a truncated transversal design.
//!
//! The congruence scan is exact: it walks the feasible window for `t` and
//! checks every condition directly, returning `None` when nothing in the
//! window qualifies. The companion progression counter is likewise an
//! exact scan, usable as a diagnostic for how thin the admissible set is.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::arith::{is_prime, primes_up_to};
use crate::compose::compose_via_pbd;
use crate::design::truncated_td_pbd;
use crate::error::Error;
use crate::extend::baer_ipc;
use crate::latin::{idempotent_mols_for_order, mols_to_ipc};
use crate::perm::PermutationCode;

/// The parameters a successful synthesis ran with: `n = m*t + u`,
/// `m = q^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SynthesisPlan {
    pub n: u64,
    pub r: usize,
    pub q: u64,
    pub m: u64,
    pub t: u64,
    pub u: u64,
}

impl SynthesisPlan {
    /// Exponent the asymptotic argument aims for; diagnostics only.
    pub const GAMMA: f64 = 0.0797;
    /// Sieve window exponent from the counting argument; diagnostics only.
    pub const BETA: f64 = 4.2665;
}

/// Scans `t` ascending over the feasible window `ceil(n/(m+1)) ..= n/m`
/// and returns the first value with `t != 0 (mod p)` and
/// `m*t != n (mod p)` for every prime `p <= m`. The window bounds make
/// `u = n - m*t` land in `0..=t` automatically.
pub fn find_admissible_t(n: u64, m: u64) -> Option<u64> {
    debug_assert!(m >= 2);
    if n <= m {
        return None;
    }
    let primes = primes_up_to(m);
    let lo = n.div_ceil(m + 1);
    let hi = n / m;
    (lo..=hi).find(|&t| {
        let u = n - m * t;
        debug_assert!(u <= t);
        primes.iter().all(|&p| t % p != 0 && (m * t) % p != n % p)
    })
}

/// A family of forbidden residues: for each prime up to some bound, one or
/// two progressions to avoid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Omega {
    /// `(prime, forbidden residues)`, primes ascending.
    entries: Vec<(u64, Vec<u64>)>,
}

impl Omega {
    /// Builds the family for the primes up to `y`: `a[i]` is forbidden mod
    /// the i-th prime, and `b[j]` additionally mod the (j+1)-th prime (the
    /// prime 2 carries a single progression). Residues may be negative;
    /// they are normalized.
    pub fn new(y: u64, a: &[i64], b: &[i64]) -> Omega {
        let primes = primes_up_to(y);
        assert_eq!(a.len(), primes.len(), "one residue per prime up to y");
        assert!(
            b.is_empty() || b.len() == primes.len().saturating_sub(1),
            "second residues cover the odd primes"
        );
        let entries = primes
            .iter()
            .enumerate()
            .map(|(i, &p)| {
                let mut residues = alloc::vec![normalize(a[i], p)];
                if i >= 1 {
                    if let Some(&bj) = b.get(i - 1) {
                        let r = normalize(bj, p);
                        if !residues.contains(&r) {
                            residues.push(r);
                        }
                    }
                }
                (p, residues)
            })
            .collect();
        Omega { entries }
    }

    /// The residue family behind [`find_admissible_t`]: shifting by
    /// `s = floor(n/(m+1))`, a cofactor `t = z + s` clears the conditions
    /// for a prime `p` not dividing `m` exactly when `z` avoids `-s` and
    /// `inv(m)*n - s` mod `p`. Primes dividing `m` impose no condition on
    /// `t` and are skipped.
    pub fn for_cofactor_search(n: u64, m: u64) -> Omega {
        let s = (n / (m + 1)) as i64;
        let entries = primes_up_to(m)
            .into_iter()
            .filter(|&p| !m.is_multiple_of(p))
            .map(|p| {
                let m_inv = mod_inverse(m % p, p);
                let mut residues = alloc::vec![normalize(-s, p)];
                let second = normalize(m_inv as i64 * (n % p) as i64 - s, p);
                if !residues.contains(&second) {
                    residues.push(second);
                }
                (p, residues)
            })
            .collect();
        Omega { entries }
    }

    pub fn entries(&self) -> &[(u64, Vec<u64>)] {
        &self.entries
    }
}

fn normalize(x: i64, p: u64) -> u64 {
    x.rem_euclid(p as i64) as u64
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    debug_assert!(is_prime(p) && !a.is_multiple_of(p));
    // Fermat
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// Exact count of positive integers `z <= x` lying in none of the listed
/// progressions, by direct scan.
pub fn buchstab_count(x: u64, omega: &Omega) -> u64 {
    (1..=x)
        .filter(|&z| {
            omega
                .entries
                .iter()
                .all(|(p, residues)| !residues.contains(&(z % p)))
        })
        .count() as u64
}

/// Runs the full pipeline for a target length `n` and regularity `r`.
///
/// Picks the least prime power `q` in `[r+1, 2(r+1)]` of parity opposite
/// to `n`, sets `m = q^2`, finds an admissible cofactor `t`, builds the
/// ingredient codes (products of field squares for sizes `m`, `t`, `u`;
/// the length-`m+1` code from the subfield-coset extension, trimmed to
/// regularity `r`), and composes them over the truncated transversal
/// design on `m*t + u` points.
pub fn synthesize_ipc(n: u64, r: usize) -> Result<(SynthesisPlan, PermutationCode), Error> {
    assert!(n >= 10, "synthesis targets lengths of at least 10");
    assert!(r >= 1);
    let lo = r as u64 + 1;
    let hi = 2 * (r as u64 + 1);
    let q = (lo..=hi)
        .find(|&q| crate::arith::prime_power(q).is_some() && q % 2 != n % 2)
        .ok_or(Error::NoPrimePowerInWindow {
            lo,
            hi,
            parity: (n + 1) % 2,
        })?;
    let m = q * q;
    let t = find_admissible_t(n, m).ok_or(Error::NoAdmissibleT { n, m })?;
    let u = n - m * t;
    let plan = SynthesisPlan { n, r, q, m, t, u };

    let fail = |size: u64| move |cause: Error| Error::IngredientFailure {
        size: size as usize,
        cause: Box::new(cause),
    };

    let mut ingredients: BTreeMap<usize, PermutationCode> = BTreeMap::new();
    let ipc_m =
        mols_to_ipc(&idempotent_mols_for_order(m, r).map_err(fail(m))?).map_err(fail(m))?;
    ingredients.insert(m as usize, ipc_m);
    let baer = baer_ipc(q).map_err(fail(m + 1))?;
    let ipc_m1 = if q as usize - 1 == r {
        baer
    } else {
        baer.trim_to_regularity(r).map_err(fail(m + 1))?
    };
    ingredients.insert(m as usize + 1, ipc_m1);
    for size in [t, u] {
        if size >= 2 && !ingredients.contains_key(&(size as usize)) {
            let ipc = mols_to_ipc(&idempotent_mols_for_order(size, r).map_err(fail(size))?)
                .map_err(fail(size))?;
            ingredients.insert(size as usize, ipc);
        }
    }

    let pbd = truncated_td_pbd(m as usize, t as usize, u as usize, None)?;
    let code = compose_via_pbd(&pbd, &ingredients, r)?;
    debug_assert!(code.verify().is_ripc(r));
    Ok((plan, code))
}
