//! Finite-field arithmetic `GF(p^k)` for small orders.
//!
//! Elements are encoded as integers `0..q-1` read as base-`p` digit vectors
//! of polynomial coefficients, constant term in the least significant digit.
//! `0` is the zero element and `1` the multiplicative identity. The modulus
//! is the lexicographically least monic irreducible polynomial of degree `k`
//! (coefficient vector compared constant-term first), so every downstream
//! construction is bit-reproducible.
//!
//! Full add/mul/inv tables are materialized for orders up to 256; larger
//! fields fall back to digit arithmetic per call.

use alloc::vec;
use alloc::vec::Vec;

use crate::arith::prime_power;
use crate::error::Error;

/// Largest supported field order: elements must fit the `u16` symbol type.
pub const MAX_ORDER: u64 = 1 << 16;

/// Whether `n` is a positive power of a single prime.
pub fn is_prime_power(n: u64) -> bool {
    prime_power(n).is_some()
}

/// Orders up to this get full lookup tables.
const TABLE_LIMIT: u32 = 256;

/// The field `GF(p^k)`, immutable after construction.
#[derive(Debug, Clone)]
pub struct FiniteField {
    p: u32,
    k: u32,
    q: u32,
    /// Coefficients `[c_0, ..., c_k]` of the monic modulus, `c_k = 1`.
    modulus: Vec<u16>,
    add_table: Option<Vec<u16>>,
    mul_table: Option<Vec<u16>>,
    inv_table: Option<Vec<u16>>,
}

impl FiniteField {
    /// Constructs the field of order `q`, choosing the modulus
    /// deterministically.
    pub fn new(q: u64) -> Result<Self, Error> {
        let (p, k) = prime_power(q).ok_or(Error::NotAPrimePower(q))?;
        if q > MAX_ORDER {
            return Err(Error::OrderTooLarge { q, max: MAX_ORDER });
        }
        let p = p as u32;
        let q = q as u32;
        let modulus = least_irreducible(p, k);
        let mut field = FiniteField {
            p,
            k,
            q,
            modulus,
            add_table: None,
            mul_table: None,
            inv_table: None,
        };
        if q <= TABLE_LIMIT {
            field.build_tables();
        }
        Ok(field)
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    /// Modulus coefficients `[c_0, ..., c_k]`, constant term first.
    pub fn modulus(&self) -> &[u16] {
        &self.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = u16> {
        (0..self.q).map(|e| e as u16)
    }

    pub fn add(&self, a: u16, b: u16) -> u16 {
        debug_assert!((a as u32) < self.q && (b as u32) < self.q);
        match &self.add_table {
            Some(t) => t[a as usize * self.q as usize + b as usize],
            None => self.raw_add(a, b),
        }
    }

    pub fn neg(&self, a: u16) -> u16 {
        if self.k == 1 {
            return if a == 0 { 0 } else { (self.q - a as u32) as u16 };
        }
        let mut digits = self.digits_of(a);
        for d in &mut digits {
            if *d != 0 {
                *d = (self.p - *d as u32) as u16;
            }
        }
        self.element_from_digits(&digits)
    }

    pub fn sub(&self, a: u16, b: u16) -> u16 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u16, b: u16) -> u16 {
        debug_assert!((a as u32) < self.q && (b as u32) < self.q);
        match &self.mul_table {
            Some(t) => t[a as usize * self.q as usize + b as usize],
            None => self.raw_mul(a, b),
        }
    }

    /// Multiplicative inverse of a nonzero element.
    pub fn inv(&self, a: u16) -> Result<u16, Error> {
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        match &self.inv_table {
            Some(t) => Ok(t[a as usize]),
            None => Ok(self.pow(a, self.q as u64 - 2)),
        }
    }

    pub fn pow(&self, a: u16, mut e: u64) -> u16 {
        let mut base = a;
        let mut acc = 1u16;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Base-`p` digits of an element, constant term first, length `k`.
    pub fn digits_of(&self, e: u16) -> Vec<u16> {
        let mut rest = e as u32;
        let mut digits = vec![0u16; self.k as usize];
        for d in &mut digits {
            *d = (rest % self.p) as u16;
            rest /= self.p;
        }
        digits
    }

    /// Inverse of [`Self::digits_of`].
    pub fn element_from_digits(&self, digits: &[u16]) -> u16 {
        debug_assert_eq!(digits.len(), self.k as usize);
        let mut e = 0u32;
        for &d in digits.iter().rev() {
            debug_assert!((d as u32) < self.p);
            e = e * self.p + d as u32;
        }
        e as u16
    }

    fn raw_add(&self, a: u16, b: u16) -> u16 {
        if self.k == 1 {
            return ((a as u32 + b as u32) % self.p) as u16;
        }
        let da = self.digits_of(a);
        let db = self.digits_of(b);
        let sum: Vec<u16> = da
            .iter()
            .zip(&db)
            .map(|(&x, &y)| ((x as u32 + y as u32) % self.p) as u16)
            .collect();
        self.element_from_digits(&sum)
    }

    fn raw_mul(&self, a: u16, b: u16) -> u16 {
        if self.k == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as u16;
        }
        let da = self.digits_of(a);
        let db = self.digits_of(b);
        let k = self.k as usize;
        let p = self.p as u64;
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        // Reduce by the monic modulus: x^k = -(c_0 + c_1 x + ... + c_{k-1} x^{k-1}).
        for i in (k..prod.len()).rev() {
            let t = prod[i];
            if t == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..k {
                let c = self.modulus[j] as u64;
                if c != 0 {
                    let idx = i - k + j;
                    prod[idx] = (prod[idx] + p - t * c % p) % p;
                }
            }
        }
        let digits: Vec<u16> = prod[..k].iter().map(|&d| d as u16).collect();
        self.element_from_digits(&digits)
    }

    fn build_tables(&mut self) {
        let q = self.q as usize;
        let mut add = vec![0u16; q * q];
        let mut mul = vec![0u16; q * q];
        for a in 0..q {
            for b in 0..q {
                add[a * q + b] = self.raw_add(a as u16, b as u16);
                mul[a * q + b] = self.raw_mul(a as u16, b as u16);
            }
        }
        let mut inv = vec![0u16; q];
        for a in 1..q {
            for b in 1..q {
                if mul[a * q + b] == 1 {
                    inv[a] = b as u16;
                    break;
                }
            }
        }
        self.add_table = Some(add);
        self.mul_table = Some(mul);
        self.inv_table = Some(inv);
    }

    /// Partitions the field into the additive cosets of its index-`sqrt(q)`
    /// subfield.
    ///
    /// The subfield is identified as the fixed points of `x -> x^s` where
    /// `s = sqrt(q)`; the cosets come back sorted by least element (so the
    /// subfield itself is first) with each coset sorted ascending.
    pub fn subfield_cosets(&self) -> Result<Vec<Vec<u16>>, Error> {
        if !self.k.is_multiple_of(2) {
            return Err(Error::NotASquareOrder(self.q));
        }
        let s = self.p.pow(self.k / 2) as u64;
        let subfield: Vec<u16> = self
            .elements()
            .filter(|&x| self.pow(x, s) == x)
            .collect();
        debug_assert_eq!(subfield.len() as u64, s);
        let mut covered = vec![false; self.q as usize];
        let mut cosets = Vec::with_capacity(s as usize);
        for e in self.elements() {
            if covered[e as usize] {
                continue;
            }
            let mut coset: Vec<u16> = subfield.iter().map(|&y| self.add(e, y)).collect();
            coset.sort_unstable();
            for &x in &coset {
                covered[x as usize] = true;
            }
            cosets.push(coset);
        }
        Ok(cosets)
    }
}

/// Lexicographically least monic irreducible polynomial of degree `k` over
/// `GF(p)`, as coefficients `[c_0, ..., c_k]` compared from the constant
/// term. For `k = 1` this is the polynomial `x`.
fn least_irreducible(p: u32, k: u32) -> Vec<u16> {
    let k = k as usize;
    if k == 1 {
        return vec![0, 1];
    }
    let mut coeffs = vec![0u16; k + 1];
    coeffs[k] = 1;
    loop {
        if is_irreducible(&coeffs, p) {
            return coeffs;
        }
        // Odometer over [c_0, ..., c_{k-1}], last index fastest, so the
        // scan order is lexicographic on the stored vector.
        let mut i = k - 1;
        loop {
            coeffs[i] += 1;
            if (coeffs[i] as u32) < p {
                break;
            }
            coeffs[i] = 0;
            assert!(i > 0, "no irreducible polynomial found");
            i -= 1;
        }
    }
}

/// Exhaustive irreducibility test: trial division by every monic polynomial
/// of degree at most `k/2`.
fn is_irreducible(f: &[u16], p: u32) -> bool {
    let k = f.len() - 1;
    if f[0] == 0 {
        return false; // divisible by x
    }
    for d in 1..=k / 2 {
        let mut divisor = vec![0u16; d + 1];
        divisor[d] = 1;
        loop {
            if poly_rem_is_zero(f, &divisor, p) {
                return false;
            }
            // base-p counter over divisor[0..d], index 0 fastest
            let mut i = 0;
            while i < d {
                divisor[i] += 1;
                if (divisor[i] as u32) < p {
                    break;
                }
                divisor[i] = 0;
                i += 1;
            }
            if i == d {
                break; // wrapped: every divisor of this degree was tried
            }
        }
    }
    true
}

/// Whether the monic `divisor` divides `f` over `GF(p)`.
fn poly_rem_is_zero(f: &[u16], divisor: &[u16], p: u32) -> bool {
    let d = divisor.len() - 1;
    let mut rem: Vec<u32> = f.iter().map(|&c| c as u32).collect();
    for i in (d..rem.len()).rev() {
        let t = rem[i] % p;
        if t == 0 {
            continue;
        }
        rem[i] = 0;
        for j in 0..d {
            let c = divisor[j] as u32;
            if c != 0 {
                rem[i - d + j] = (rem[i - d + j] + p * p - t * c % p) % p;
            }
        }
    }
    rem[..d].iter().all(|&c| c % p == 0)
}
