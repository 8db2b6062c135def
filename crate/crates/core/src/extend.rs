//! Lengthening codes by one symbol: reroute one position per word through a
//! designated part of a symbol partition, then send that position to the
//! new symbol.
//!
//! The workhorse instance pairs the affine maps `x -> ax + b` over
//! `GF(q^2)` (one family per slope `a` outside the subfield `GF(q)`) with
//! the additive cosets of that subfield. Each such word maps exactly one
//! point of its assigned coset back into the coset, so the extension point
//! is forced; after dropping words whose fixed point was rerouted, trimming
//! to an even census, and appending translations that fix only the new
//! symbol, the result is a `(q-1)`-regular idempotent code of length
//! `q^2 + 1`.

use alloc::vec::Vec;

use crate::error::Error;
use crate::gf::FiniteField;
use crate::perm::{Distance, Permutation, PermutationCode};

/// The `q` maps `x -> slope*x + b` over the given field, ordered by `b`'s
/// encoding. Distinct words share a slope, so they disagree everywhere.
pub fn agl_coset(field: &FiniteField, slope: u16) -> Result<PermutationCode, Error> {
    if slope == 0 {
        return Err(Error::ZeroSlope);
    }
    let n = field.order() as usize;
    let mut words = Vec::with_capacity(n);
    for b in field.elements() {
        let word: Vec<u16> = field
            .elements()
            .map(|x| field.add(field.mul(slope, x), b))
            .collect();
        words.push(Permutation::from_word(word)?);
    }
    PermutationCode::new(n, words)
}

/// Extends a word on `0..n-1` to one on `0..n`: the least position `z` in
/// `part` whose image also lies in `part` is sent to the new symbol `n`,
/// which in turn takes over `z`'s old image.
pub fn extend_word(word: &Permutation, part: &[u16]) -> Result<Permutation, Error> {
    let n = word.n();
    let z = part
        .iter()
        .copied()
        .filter(|&z| (z as usize) < n && part.contains(&word.image(z)))
        .min()
        .ok_or(Error::NoAnchor)?;
    let mut extended: Vec<u16> = word.word().to_vec();
    let old = extended[z as usize];
    extended[z as usize] = n as u16;
    extended.push(old);
    Permutation::from_word(extended)
}

/// Disjoint symbol parts with one distance-`n` word family attached to
/// each. Disjointness is what the extended distance argument rests on:
/// words from different families send the new symbol into different
/// parts, so they cannot agree there.
#[derive(Debug, Clone)]
pub struct ExtensionPlan {
    n: usize,
    parts: Vec<Vec<u16>>,
    families: Vec<PermutationCode>,
}

impl ExtensionPlan {
    /// Validates the plan: the parts are disjoint subsets of `0..n-1`, the
    /// families are disjoint word sets paired with the parts, each family
    /// has pairwise distance exactly `n`, and every family word has an
    /// extension point in its part.
    pub fn new(
        n: usize,
        parts: Vec<Vec<u16>>,
        families: Vec<PermutationCode>,
    ) -> Result<Self, Error> {
        assert_eq!(parts.len(), families.len(), "one family per part");
        let mut covered = alloc::vec![false; n];
        for part in &parts {
            for &p in part {
                if (p as usize) >= n || covered[p as usize] {
                    return Err(Error::PointOutOfRange { point: p, n });
                }
                covered[p as usize] = true;
            }
        }
        // families must be pairwise disjoint word sets; indices in the
        // witness count across families in order
        let mut seen_words: alloc::collections::BTreeMap<Vec<u16>, usize> =
            alloc::collections::BTreeMap::new();
        let mut global = 0;
        for family in &families {
            for word in family.words() {
                if let Some(&first) = seen_words.get(word.word()) {
                    return Err(Error::DuplicateWords { first, second: global });
                }
                seen_words.insert(word.word().to_vec(), global);
                global += 1;
            }
        }
        for (part, family) in parts.iter().zip(&families) {
            if family.n() != n {
                return Err(Error::LengthMismatch {
                    left: family.n(),
                    right: n,
                });
            }
            match family.min_distance() {
                Distance::Infinite => {}
                Distance::Finite(d) if d == n => {}
                Distance::Finite(d) => {
                    return Err(Error::DistanceTooSmall { found: d, needed: n })
                }
            }
            for word in family.words() {
                extend_word(word, part)?; // NoAnchor surfaces here
            }
        }
        Ok(ExtensionPlan { n, parts, families })
    }

    pub fn parts(&self) -> &[Vec<u16>] {
        &self.parts
    }

    pub fn families(&self) -> &[PermutationCode] {
        &self.families
    }

    /// Encoding of the new symbol in the extended words.
    pub fn infinity_symbol(&self) -> u16 {
        self.n as u16
    }

    /// Extends every family word at its part, in family order.
    pub fn extend(&self) -> Result<PermutationCode, Error> {
        let mut words = Vec::new();
        for (part, family) in self.parts.iter().zip(&self.families) {
            for word in family.words() {
                words.push(extend_word(word, part)?);
            }
        }
        PermutationCode::new(self.n + 1, words)
    }
}

/// Builds a `(q-1)`-regular idempotent code of length `q^2 + 1` from the
/// subfield-coset partition of `GF(q^2)`.
///
/// The `q` smallest slopes outside the subfield are assigned, in order, to
/// the cosets (sorted by least element, subfield first). All `q^3` affine
/// words are extended; extensions that lost their fixed point are dropped;
/// the survivors are trimmed, earliest first, to exactly `q - 1` words per
/// field symbol; finally `q - 1` translations `x -> x + b` with the new
/// symbol appended as their only fixed point round out the census.
pub fn baer_ipc(q: u64) -> Result<PermutationCode, Error> {
    crate::arith::prime_power(q).ok_or(Error::NotAPrimePower(q))?;
    // the extension adds the symbol q^2, which must itself fit
    if q * q + 1 > u16::MAX as u64 + 1 {
        return Err(Error::OrderTooLarge {
            q: q * q + 1,
            max: u16::MAX as u64 + 1,
        });
    }
    let field = FiniteField::new(q * q)?;
    let q_usize = q as usize;
    let n = field.order() as usize;
    let cosets = field.subfield_cosets()?;
    debug_assert_eq!(cosets.len(), q_usize);
    let subfield = &cosets[0];
    debug_assert!(subfield.contains(&0) && subfield.contains(&1));

    let slopes: Vec<u16> = field
        .elements()
        .filter(|a| !subfield.contains(a))
        .take(q_usize)
        .collect();
    let families = slopes
        .iter()
        .map(|&a| agl_coset(&field, a))
        .collect::<Result<Vec<_>, _>>()?;
    let plan = ExtensionPlan::new(n, cosets, families)?;
    let extended = plan.extend()?;

    // Drop words that lost their fixed point, then trim each field symbol
    // to q - 1 fixing words, keeping the earliest-constructed ones.
    let target = q_usize - 1;
    let mut kept_count = alloc::vec![0usize; n];
    let mut words: Vec<Permutation> = Vec::with_capacity(target * (n + 1));
    for word in extended.words() {
        let fps = word.fixed_points();
        debug_assert!(fps.len() <= 1);
        // words whose fixed point was rerouted have none left; the rest
        // are kept until their symbol's census is full
        match fps.first() {
            Some(&fp) if kept_count[fp as usize] < target => {
                kept_count[fp as usize] += 1;
                words.push(word.clone());
            }
            _ => {}
        }
    }
    if let Some(symbol) = kept_count.iter().position(|&c| c < target) {
        return Err(Error::RegularityShortfall {
            symbol: symbol as u16,
            have: kept_count[symbol],
            need: target,
        });
    }

    // Translations by the smallest q - 1 nonzero elements, fixing only the
    // new symbol.
    for b in 1..=target as u16 {
        let mut word: Vec<u16> = field.elements().map(|x| field.add(x, b)).collect();
        word.push(n as u16);
        words.push(Permutation::from_word(word)?);
    }

    Ok(PermutationCode::new(n + 1, words)?
        .with_claims(Some(n), Some(target)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn translations_over_gf4() {
        let f = FiniteField::new(4).unwrap();
        let code = agl_coset(&f, 1).unwrap();
        assert_eq!(code.len(), 4);
        assert_eq!(code.words()[0], Permutation::identity(4));
        assert_eq!(code.min_distance(), Distance::Finite(4));
    }

    #[test]
    fn zero_slope_is_rejected() {
        let f = FiniteField::new(4).unwrap();
        assert_eq!(agl_coset(&f, 0).unwrap_err(), Error::ZeroSlope);
    }

    /// For a slope outside the prime subfield of GF(9), each affine word
    /// has exactly one fixed point, and the family fixes each symbol once.
    #[test]
    fn gf9_family_fixed_points() {
        let f = FiniteField::new(9).unwrap();
        let cosets = f.subfield_cosets().unwrap();
        let subfield = &cosets[0];
        let a = f.elements().find(|x| !subfield.contains(x)).unwrap();
        let code = agl_coset(&f, a).unwrap();
        assert_eq!(code.len(), 9);
        let mut census = [0usize; 9];
        for w in code.words() {
            let fps = w.fixed_points();
            assert_eq!(fps.len(), 1);
            census[fps[0] as usize] += 1;
        }
        assert!(census.iter().all(|&c| c == 1));
    }

    #[test]
    fn identity_extends_at_least_part_element() {
        let id = Permutation::identity(6);
        let ext = extend_word(&id, &[0, 1]).unwrap();
        assert_eq!(ext.word(), &[6, 1, 2, 3, 4, 5, 0]);
    }

    #[test]
    fn extension_without_anchor_fails() {
        let swap = Permutation::from_word(alloc::vec![1, 0]).unwrap();
        assert_eq!(extend_word(&swap, &[0]).unwrap_err(), Error::NoAnchor);
    }

    /// The anchor-counting fact behind the construction: for any slope
    /// outside the subfield, any offset, and any coset, exactly one point
    /// of the coset maps back into it.
    #[test]
    fn unique_anchor_per_offset_and_coset() {
        for q in [2u64, 3, 4, 5] {
            let f = FiniteField::new(q * q).unwrap();
            let cosets = f.subfield_cosets().unwrap();
            let subfield = &cosets[0];
            for a in f.elements().filter(|x| !subfield.contains(x)) {
                for b in f.elements() {
                    for coset in &cosets {
                        let hits = coset
                            .iter()
                            .filter(|&&x| coset.contains(&f.add(f.mul(a, x), b)))
                            .count();
                        assert_eq!(hits, 1, "q={q} a={a} b={b}");
                    }
                }
            }
        }
    }

    /// Before any pruning, the full extension is a code of minimum
    /// distance n on n + 1 symbols.
    #[test]
    fn full_extension_keeps_distance() {
        for q in [2u64, 3] {
            let f = FiniteField::new(q * q).unwrap();
            let n = f.order() as usize;
            let cosets = f.subfield_cosets().unwrap();
            let subfield = cosets[0].clone();
            let slopes: Vec<u16> = f
                .elements()
                .filter(|a| !subfield.contains(a))
                .take(q as usize)
                .collect();
            let families: Vec<PermutationCode> = slopes
                .iter()
                .map(|&a| agl_coset(&f, a).unwrap())
                .collect();
            let plan = ExtensionPlan::new(n, cosets, families).unwrap();
            let ext = plan.extend().unwrap();
            assert_eq!(ext.len(), q as usize * n);
            assert!(ext.min_distance().at_least(n));
        }
    }

    #[test]
    fn plans_reject_overlapping_families() {
        let f = FiniteField::new(4).unwrap();
        let family = agl_coset(&f, 2).unwrap();
        let parts = alloc::vec![alloc::vec![0u16, 1], alloc::vec![2, 3]];
        let err = ExtensionPlan::new(4, parts, alloc::vec![family.clone(), family]).unwrap_err();
        assert!(matches!(err, Error::DuplicateWords { .. }));
    }

    #[test]
    fn baer_codes_verify() {
        for q in [2u64, 3] {
            let code = baer_ipc(q).unwrap();
            let n = (q * q + 1) as usize;
            let r = (q - 1) as usize;
            assert_eq!(code.n(), n);
            assert_eq!(code.len(), r * n);
            assert!(code.verify().is_ripc(r), "q = {q}");
        }
    }

    #[test]
    fn baer_rejects_non_prime_powers() {
        assert_eq!(baer_ipc(6).unwrap_err(), Error::NotAPrimePower(6));
    }
}
