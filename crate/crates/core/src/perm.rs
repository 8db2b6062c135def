//! Permutations, Hamming distance, permutation codes, and the exact
//! brute-force verifier for minimum distance, idempotency and regularity.
//!
//! The verifier is the oracle every construction in this crate is judged
//! against, so it stays plain: `O(|code|^2 n)` pairwise scanning with no
//! shortcuts, and it trusts nothing about its input words (length, symbol
//! range and bijectivity are all re-checked).
//!
//! Symbols are `0..n-1` internally; the one-based convention of the on-disk
//! formats is handled at the IO boundary.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;

use crate::error::Error;
use crate::latin::PartialLatinSquare;

/// A permutation of `0..n-1` in single-line notation: `word[x]` is the
/// image of `x`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    word: Vec<u16>,
}

impl Permutation {
    /// The identity on `n` symbols.
    pub fn identity(n: usize) -> Self {
        Permutation {
            word: (0..n as u16).collect(),
        }
    }

    /// Builds a permutation from a zero-based word, validating bijectivity.
    pub fn from_word(word: Vec<u16>) -> Result<Self, Error> {
        let n = word.len();
        let mut seen = vec![false; n];
        for (x, &y) in word.iter().enumerate() {
            if (y as usize) >= n || seen[y as usize] {
                return Err(Error::NotAPermutation { position: x });
            }
            seen[y as usize] = true;
        }
        Ok(Permutation { word })
    }

    /// Builds a permutation from a one-based word.
    pub fn from_one_based(word: &[u16]) -> Result<Self, Error> {
        let n = word.len();
        let shifted = word
            .iter()
            .enumerate()
            .map(|(x, &y)| {
                if y == 0 || y as usize > n {
                    Err(Error::NotAPermutation { position: x })
                } else {
                    Ok(y - 1)
                }
            })
            .collect::<Result<Vec<u16>, Error>>()?;
        Self::from_word(shifted)
    }

    pub fn n(&self) -> usize {
        self.word.len()
    }

    /// The underlying zero-based word.
    pub fn word(&self) -> &[u16] {
        &self.word
    }

    /// One-based copy of the word, for display and files.
    pub fn one_based(&self) -> Vec<u16> {
        self.word.iter().map(|&y| y + 1).collect()
    }

    pub fn image(&self, x: u16) -> u16 {
        self.word[x as usize]
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u16; self.word.len()];
        for (x, &y) in self.word.iter().enumerate() {
            inv[y as usize] = x as u16;
        }
        Permutation { word: inv }
    }

    /// Composition `self . other`: maps `x` to `self(other(x))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.n(), other.n());
        Permutation {
            word: other.word.iter().map(|&y| self.word[y as usize]).collect(),
        }
    }

    /// The symbols `x` with `self(x) = x`, ascending.
    pub fn fixed_points(&self) -> Vec<u16> {
        self.word
            .iter()
            .enumerate()
            .filter(|&(x, &y)| x as u16 == y)
            .map(|(x, _)| x as u16)
            .collect()
    }

    /// Number of positions where the words disagree.
    pub fn hamming_distance(&self, other: &Permutation) -> Result<usize, Error> {
        if self.n() != other.n() {
            return Err(Error::LengthMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        Ok(raw_distance(&self.word, &other.word))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &y) in self.word.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", y + 1)?;
        }
        Ok(())
    }
}

fn raw_distance(a: &[u16], b: &[u16]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Exact minimum pairwise Hamming distance, `Infinite` for fewer than two
/// words.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Distance {
    Finite(usize),
    Infinite,
}

impl Distance {
    pub fn at_least(self, d: usize) -> bool {
        match self {
            Distance::Finite(v) => v >= d,
            Distance::Infinite => true,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(v) => write!(f, "{v}"),
            Distance::Infinite => write!(f, "infinite"),
        }
    }
}

/// An ordered list of distinct permutations of `0..n-1`, with optional
/// claimed minimum distance and regularity carried as metadata.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationCode {
    n: usize,
    words: Vec<Permutation>,
    claimed_d: Option<usize>,
    claimed_r: Option<usize>,
}

impl PermutationCode {
    /// Builds a code, validating uniform length and pairwise distinctness.
    pub fn new(n: usize, words: Vec<Permutation>) -> Result<Self, Error> {
        let mut seen: BTreeSet<&[u16]> = BTreeSet::new();
        for (i, w) in words.iter().enumerate() {
            if w.n() != n {
                return Err(Error::WordLengthMismatch {
                    word: i,
                    len: w.n(),
                    n,
                });
            }
            if !seen.insert(w.word()) {
                let first = words.iter().position(|v| v == w).unwrap();
                return Err(Error::DuplicateWords { first, second: i });
            }
        }
        Ok(PermutationCode {
            n,
            words,
            claimed_d: None,
            claimed_r: None,
        })
    }

    pub fn with_claims(mut self, d: Option<usize>, r: Option<usize>) -> Self {
        self.claimed_d = d;
        self.claimed_r = r;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[Permutation] {
        &self.words
    }

    pub fn claimed_d(&self) -> Option<usize> {
        self.claimed_d
    }

    pub fn claimed_r(&self) -> Option<usize> {
        self.claimed_r
    }

    fn raw(&self) -> Vec<&[u16]> {
        self.words.iter().map(|w| w.word()).collect()
    }

    /// Exact pairwise minimum distance by brute force.
    pub fn min_distance(&self) -> Distance {
        let raw = self.raw();
        min_distance_over_rows(&raw, 0..raw.len()).0
    }

    /// Runs the full verification kernel.
    pub fn verify(&self) -> VerificationReport {
        verify_words(self.n, &self.raw())
    }

    /// Adjoins the identity word. Every word must have exactly one fixed
    /// point, which keeps it at distance exactly `n - 1` from the identity.
    pub fn adjoin_identity(&self) -> Result<PermutationCode, Error> {
        for (i, w) in self.words.iter().enumerate() {
            let fp = w.fixed_points().len();
            if fp != 1 {
                return Err(Error::NotIdempotent {
                    word: i,
                    fixed_points: fp,
                });
            }
        }
        let mut words = self.words.clone();
        words.push(Permutation::identity(self.n));
        Ok(PermutationCode::new(self.n, words)?
            .with_claims(Some(self.n.saturating_sub(1)), None))
    }

    /// Greedy partition into classes of pairwise distance exactly `n`:
    /// each word joins the first class it has no agreement with, else opens
    /// a new class.
    pub fn partition_into_sharp(&self) -> Vec<PermutationCode> {
        let mut classes: Vec<Vec<Permutation>> = Vec::new();
        for w in &self.words {
            let slot = classes.iter().position(|class| {
                class
                    .iter()
                    .all(|v| raw_distance(v.word(), w.word()) == self.n)
            });
            match slot {
                Some(k) => classes[k].push(w.clone()),
                None => classes.push(vec![w.clone()]),
            }
        }
        classes
            .into_iter()
            .map(|class| {
                PermutationCode::new(self.n, class).expect("classes inherit code invariants")
            })
            .collect()
    }

    /// Extracts a regular idempotent code, maximizing the regularity over
    /// all reference words and breaking ties by the lexicographically least
    /// word.
    ///
    /// Requires minimum distance at least `n - 1`.
    pub fn extract_ripc(&self) -> Result<(usize, PermutationCode), Error> {
        self.check_extraction_distance()?;
        let mut best: Option<(usize, &Permutation)> = None;
        for sigma in &self.words {
            let r = self.min_agreement_count(sigma);
            let better = match best {
                None => true,
                Some((br, bw)) => r > br || (r == br && sigma < bw),
            };
            if better {
                best = Some((r, sigma));
            }
        }
        match best {
            None => Ok((0, PermutationCode::new(self.n, Vec::new())?)),
            Some((_, sigma)) => {
                let sigma = sigma.clone();
                self.extract_ripc_with(&sigma)
            }
        }
    }

    /// Extracts a regular idempotent code relative to a given reference
    /// word: for each position, keeps the first `r` words (in input order)
    /// that agree with the reference there, where `r` is the minimum
    /// agreement count over positions, then relabels every kept word by the
    /// inverse of the reference.
    pub fn extract_ripc_with(
        &self,
        sigma: &Permutation,
    ) -> Result<(usize, PermutationCode), Error> {
        if sigma.n() != self.n {
            return Err(Error::LengthMismatch {
                left: sigma.n(),
                right: self.n,
            });
        }
        self.check_extraction_distance()?;
        let r = self.min_agreement_count(sigma);
        let inv = sigma.inverse();
        let mut out = Vec::with_capacity(r * self.n);
        for i in 0..self.n {
            let target = sigma.word()[i];
            let mut taken = 0;
            for tau in &self.words {
                if taken == r {
                    break;
                }
                if tau.word()[i] == target && tau != sigma {
                    out.push(inv.compose(tau));
                    taken += 1;
                }
            }
            debug_assert_eq!(taken, r);
        }
        let code = PermutationCode::new(self.n, out)?
            .with_claims(Some(self.n.saturating_sub(1)), Some(r));
        Ok((r, code))
    }

    fn check_extraction_distance(&self) -> Result<(), Error> {
        let needed = self.n.saturating_sub(1);
        if let Distance::Finite(found) = self.min_distance() {
            if found < needed {
                return Err(Error::DistanceTooSmall { found, needed });
            }
        }
        Ok(())
    }

    /// Minimum over positions of the number of other words agreeing with
    /// `sigma` there.
    fn min_agreement_count(&self, sigma: &Permutation) -> usize {
        (0..self.n)
            .map(|i| {
                self.words
                    .iter()
                    .filter(|tau| tau.word()[i] == sigma.word()[i] && *tau != sigma)
                    .count()
            })
            .min()
            .unwrap_or(0)
    }

    /// Keeps, scanning in input order, the first `r` words fixing each
    /// symbol. Every word must have exactly one fixed point, and every
    /// symbol must end up with exactly `r` retained words.
    pub fn trim_to_regularity(&self, r: usize) -> Result<PermutationCode, Error> {
        let mut kept_count = vec![0usize; self.n];
        let mut kept = Vec::with_capacity(r * self.n);
        for (i, w) in self.words.iter().enumerate() {
            let fps = w.fixed_points();
            if fps.len() != 1 {
                return Err(Error::NotIdempotent {
                    word: i,
                    fixed_points: fps.len(),
                });
            }
            let fp = fps[0] as usize;
            if kept_count[fp] < r {
                kept_count[fp] += 1;
                kept.push(w.clone());
            }
        }
        if let Some(symbol) = kept_count.iter().position(|&c| c < r) {
            return Err(Error::RegularityShortfall {
                symbol: symbol as u16,
                have: kept_count[symbol],
                need: r,
            });
        }
        Ok(PermutationCode::new(self.n, kept)?
            .with_claims(self.claimed_d, Some(r)))
    }
}

/// Converts distance-`n` classes into partial latin squares: a word with
/// fixed point `i` fills every cell `(x, word(x))` of its class's square
/// with symbol `i`.
pub fn code_to_partial_squares(
    classes: &[PermutationCode],
) -> Result<Vec<PartialLatinSquare>, Error> {
    classes
        .iter()
        .map(|class| {
            let mut square = PartialLatinSquare::new(class.n());
            for (i, w) in class.words().iter().enumerate() {
                let fps = w.fixed_points();
                if fps.len() != 1 {
                    return Err(Error::NotIdempotent {
                        word: i,
                        fixed_points: fps.len(),
                    });
                }
                for (x, &y) in w.word().iter().enumerate() {
                    square.fill(x, y as usize, fps[0])?;
                }
            }
            Ok(square)
        })
        .collect()
}

/// Why a word failed the well-formedness scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WordDefect {
    WrongLength { len: usize },
    SymbolOutOfRange { position: usize },
    RepeatedSymbol { first: usize, second: usize },
}

impl fmt::Display for WordDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordDefect::WrongLength { len } => write!(f, "has length {len}"),
            WordDefect::SymbolOutOfRange { position } => {
                write!(f, "has an out-of-range symbol at position {}", position + 1)
            }
            WordDefect::RepeatedSymbol { first, second } => write!(
                f,
                "repeats a symbol at positions {} and {}",
                first + 1,
                second + 1
            ),
        }
    }
}

/// What the brute-force verification kernel found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub n: usize,
    pub size: usize,
    /// Exact pairwise minimum distance; `Infinite` for fewer than two words.
    pub min_distance: Distance,
    /// A pair of word indices achieving the minimum distance.
    pub witness: Option<(usize, usize)>,
    /// First word that is not a permutation of `0..n-1`, if any.
    pub malformed: Option<(usize, WordDefect)>,
    /// First word whose fixed-point count is not exactly one, with the
    /// count.
    pub idempotency_defect: Option<(usize, usize)>,
    /// Whether every word has exactly one fixed point.
    pub is_idempotent: bool,
    /// For each symbol, how many words fix it.
    pub fixed_point_counts: Vec<usize>,
    /// The common fixed-point count if the census is constant.
    pub regularity: Option<usize>,
}

impl VerificationReport {
    /// Whether the words form an `r`-regular idempotent code of minimum
    /// distance at least `n - 1`.
    pub fn is_ripc(&self, r: usize) -> bool {
        self.malformed.is_none()
            && self.min_distance.at_least(self.n.saturating_sub(1))
            && self.is_idempotent
            && self.regularity == Some(r)
    }

    /// Whether the words form a permutation code of minimum distance at
    /// least `d`.
    pub fn is_pc(&self, d: usize) -> bool {
        self.malformed.is_none() && self.min_distance.at_least(d)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} size={} d={}",
            self.n, self.size, self.min_distance
        )?;
        if let Some((i, j)) = self.witness {
            write!(f, " (words {} and {})", i + 1, j + 1)?;
        }
        match self.regularity {
            Some(r) if self.is_idempotent => write!(f, " idempotent r={r}")?,
            _ => {
                if !self.is_idempotent {
                    if let Some((w, c)) = self.idempotency_defect {
                        write!(f, " not idempotent (word {} has {} fixed points)", w + 1, c)?;
                    }
                }
                if self.regularity.is_none() {
                    write!(f, " irregular fixed-point census")?;
                }
            }
        }
        if let Some((w, defect)) = &self.malformed {
            write!(f, " word {} {}", w + 1, defect)?;
        }
        Ok(())
    }
}

/// The exact verification kernel. Checks well-formedness of every word,
/// computes the fixed-point census, and scans all pairs for the minimum
/// distance.
pub fn verify_words<W: AsRef<[u16]>>(n: usize, words: &[W]) -> VerificationReport {
    let scan = min_distance_over_rows(words, 0..words.len());
    verify_words_scanned(n, words, scan)
}

/// Assembles a report from a precomputed pair scan, for callers that split
/// [`min_distance_over_rows`] across workers and merge with [`merge_scan`].
pub fn verify_words_scanned<W: AsRef<[u16]>>(
    n: usize,
    words: &[W],
    scan: (Distance, Option<(usize, usize)>),
) -> VerificationReport {
    let mut malformed = None;
    let mut seen = vec![usize::MAX; n];
    for (i, w) in words.iter().enumerate() {
        let w = w.as_ref();
        let defect = if w.len() != n {
            Some(WordDefect::WrongLength { len: w.len() })
        } else {
            seen.iter_mut().for_each(|s| *s = usize::MAX);
            let mut found = None;
            for (x, &y) in w.iter().enumerate() {
                if y as usize >= n {
                    found = Some(WordDefect::SymbolOutOfRange { position: x });
                    break;
                }
                if seen[y as usize] != usize::MAX {
                    found = Some(WordDefect::RepeatedSymbol {
                        first: seen[y as usize],
                        second: x,
                    });
                    break;
                }
                seen[y as usize] = x;
            }
            found
        };
        if let Some(d) = defect {
            malformed = Some((i, d));
            break;
        }
    }

    let mut fixed_point_counts = vec![0usize; n];
    let mut idempotency_defect = None;
    for (i, w) in words.iter().enumerate() {
        let w = w.as_ref();
        let mut count = 0;
        for (x, &y) in w.iter().enumerate() {
            if x as u16 == y && x < n {
                fixed_point_counts[x] += 1;
                count += 1;
            }
        }
        if count != 1 && idempotency_defect.is_none() {
            idempotency_defect = Some((i, count));
        }
    }
    let is_idempotent = idempotency_defect.is_none();
    let regularity = match fixed_point_counts.first() {
        Some(&r) if fixed_point_counts.iter().all(|&c| c == r) => Some(r),
        Some(_) => None,
        None => Some(0),
    };

    let (min_distance, witness) = scan;

    VerificationReport {
        n,
        size: words.len(),
        min_distance,
        witness,
        malformed,
        idempotency_defect,
        is_idempotent,
        fixed_point_counts,
        regularity,
    }
}

/// Minimum distance over word pairs `(i, j)` with `i` in `rows` and
/// `j > i`, with a witness pair. Pairs of unequal length are skipped.
///
/// Verification of a large code can be split across workers by row ranges
/// and merged with [`merge_scan`].
pub fn min_distance_over_rows<W: AsRef<[u16]>>(
    words: &[W],
    rows: Range<usize>,
) -> (Distance, Option<(usize, usize)>) {
    let mut best = Distance::Infinite;
    let mut witness = None;
    for i in rows {
        let a = words[i].as_ref();
        for (j, b) in words.iter().enumerate().skip(i + 1) {
            let b = b.as_ref();
            if a.len() != b.len() {
                continue;
            }
            let d = Distance::Finite(raw_distance(a, b));
            if d < best {
                best = d;
                witness = Some((i, j));
            }
        }
    }
    (best, witness)
}

/// Merges two partial scan results, preferring the smaller distance and
/// breaking ties by the earlier witness.
pub fn merge_scan(
    a: (Distance, Option<(usize, usize)>),
    b: (Distance, Option<(usize, usize)>),
) -> (Distance, Option<(usize, usize)>) {
    match a.0.cmp(&b.0) {
        core::cmp::Ordering::Less => a,
        core::cmp::Ordering::Greater => b,
        core::cmp::Ordering::Equal => {
            if a.1.is_none() || (b.1.is_some() && b.1 < a.1) {
                b
            } else {
                a
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(word: &[u16]) -> Permutation {
        Permutation::from_one_based(word).unwrap()
    }

    fn code(n: usize, words: &[&[u16]]) -> PermutationCode {
        PermutationCode::new(n, words.iter().map(|w| perm(w)).collect()).unwrap()
    }

    #[test]
    fn distance_of_reference_pair() {
        // 1234 and 3241 disagree in three positions
        let a = perm(&[1, 2, 3, 4]);
        let b = perm(&[3, 2, 4, 1]);
        assert_eq!(a.hamming_distance(&b).unwrap(), 3);
        assert_eq!(b.hamming_distance(&a).unwrap(), 3);
        assert_eq!(a.hamming_distance(&a).unwrap(), 0);
    }

    #[test]
    fn three_cycle_moves_everything() {
        let id = Permutation::identity(3);
        let c = perm(&[2, 3, 1]);
        assert_eq!(id.hamming_distance(&c).unwrap(), 3);
    }

    #[test]
    fn length_mismatch_is_an_error() {
        let a = perm(&[1, 2]);
        let b = perm(&[1, 2, 3]);
        assert_eq!(
            a.hamming_distance(&b),
            Err(Error::LengthMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn fixed_points_examples() {
        assert_eq!(Permutation::identity(5).fixed_points(), vec![0, 1, 2, 3, 4]);
        assert_eq!(perm(&[1, 3, 5, 6, 2, 4]).fixed_points(), vec![0]);
        assert_eq!(perm(&[2, 1]).fixed_points(), Vec::<u16>::new());
    }

    #[test]
    fn all_of_s3_has_min_distance_two() {
        // brute-force oracle over all 15 pairs of the 6 words
        let s3 = code(
            3,
            &[
                &[1, 2, 3],
                &[1, 3, 2],
                &[2, 1, 3],
                &[2, 3, 1],
                &[3, 1, 2],
                &[3, 2, 1],
            ],
        );
        assert_eq!(s3.min_distance(), Distance::Finite(2));
    }

    #[test]
    fn tiny_codes_have_infinite_distance() {
        let single = code(4, &[&[1, 2, 3, 4]]);
        assert_eq!(single.min_distance(), Distance::Infinite);
        let empty = PermutationCode::new(4, Vec::new()).unwrap();
        assert_eq!(empty.min_distance(), Distance::Infinite);
    }

    #[test]
    fn non_permutations_are_rejected() {
        assert!(Permutation::from_one_based(&[1, 1, 3]).is_err());
        assert!(Permutation::from_one_based(&[1, 2, 5]).is_err());
        assert!(Permutation::from_word(vec![0, 0]).is_err());
    }

    #[test]
    fn duplicate_words_are_rejected() {
        let words = vec![perm(&[1, 2, 3]), perm(&[1, 2, 3])];
        assert_eq!(
            PermutationCode::new(3, words).unwrap_err(),
            Error::DuplicateWords { first: 0, second: 1 }
        );
    }

    #[test]
    fn verifier_flags_corrupted_words() {
        let report = verify_words(3, &[vec![0u16, 2, 1], vec![0u16, 2, 2]]);
        assert_eq!(
            report.malformed,
            Some((1, WordDefect::RepeatedSymbol { first: 1, second: 2 }))
        );
        assert!(!report.is_ripc(1));

        let report = verify_words(3, &[vec![0u16, 2, 1], vec![0u16, 7, 2]]);
        assert_eq!(
            report.malformed,
            Some((1, WordDefect::SymbolOutOfRange { position: 1 }))
        );
    }

    #[test]
    fn adjoining_identity_to_empty_code_gives_identity() {
        let empty = PermutationCode::new(4, Vec::new()).unwrap();
        let adjoined = empty.adjoin_identity().unwrap();
        assert_eq!(adjoined.len(), 1);
        assert_eq!(adjoined.words()[0], Permutation::identity(4));
    }

    #[test]
    fn adjoining_identity_requires_idempotency() {
        let with_id = code(3, &[&[1, 2, 3]]);
        assert_eq!(
            with_id.adjoin_identity().unwrap_err(),
            Error::NotIdempotent { word: 0, fixed_points: 3 }
        );
    }

    /// The twenty affine maps x -> ax + b over GF(5) extract a 3-regular
    /// idempotent code: for every reference word and position, exactly
    /// three other maps agree (one per other slope).
    #[test]
    fn affine_maps_over_gf5_extract_three_regular() {
        let f = crate::gf::FiniteField::new(5).unwrap();
        let mut words = Vec::new();
        for a in 1..5u16 {
            for b in 0..5u16 {
                let word: Vec<u16> = f.elements().map(|x| f.add(f.mul(a, x), b)).collect();
                words.push(Permutation::from_word(word).unwrap());
            }
        }
        let agl = PermutationCode::new(5, words).unwrap();
        let (r, ripc) = agl.extract_ripc().unwrap();
        assert_eq!(r, 3);
        assert_eq!(ripc.len(), 15);
        assert!(ripc.verify().is_ripc(3));
    }

    #[test]
    fn disjoint_pair_extracts_empty() {
        let c = code(3, &[&[1, 2, 3], &[2, 3, 1]]);
        let (r, ripc) = c.extract_ripc().unwrap();
        assert_eq!(r, 0);
        assert!(ripc.is_empty());
    }

    #[test]
    fn extraction_requires_distance() {
        // distance 2 < n - 1 = 3
        let c = code(4, &[&[1, 2, 3, 4], &[1, 2, 4, 3]]);
        assert_eq!(
            c.extract_ripc().unwrap_err(),
            Error::DistanceTooSmall { found: 2, needed: 3 }
        );
    }

    /// Affine maps ordered by slope then offset split greedily into the
    /// four cosets of the translation subgroup: same slope never agrees,
    /// different slopes agree exactly once.
    #[test]
    fn affine_maps_partition_into_slope_classes() {
        let f = crate::gf::FiniteField::new(5).unwrap();
        let mut words = Vec::new();
        for a in 1..5u16 {
            for b in 0..5u16 {
                let word: Vec<u16> = f.elements().map(|x| f.add(f.mul(a, x), b)).collect();
                words.push(Permutation::from_word(word).unwrap());
            }
        }
        let agl = PermutationCode::new(5, words).unwrap();
        let classes = agl.partition_into_sharp();
        assert_eq!(classes.len(), 4);
        assert!(classes.iter().all(|c| c.len() == 5));
    }

    #[test]
    fn sharp_classes_are_bounded_by_n() {
        let f = crate::gf::FiniteField::new(7).unwrap();
        let mut words = Vec::new();
        for a in 1..7u16 {
            for b in 0..7u16 {
                let word: Vec<u16> = f.elements().map(|x| f.add(f.mul(a, x), b)).collect();
                words.push(Permutation::from_word(word).unwrap());
            }
        }
        let agl = PermutationCode::new(7, words).unwrap();
        for class in agl.partition_into_sharp() {
            assert!(class.len() <= 7);
        }
    }

    #[test]
    fn single_square_code_is_one_class() {
        let set = crate::latin::field_idempotent_mols(3).unwrap();
        let code = crate::latin::mols_to_ipc(&set).unwrap();
        let classes = code.partition_into_sharp();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].len(), 3);
    }

    #[test]
    fn empty_class_fills_a_blank_square() {
        let empty = PermutationCode::new(4, Vec::new()).unwrap();
        let squares = code_to_partial_squares(&[empty]).unwrap();
        assert_eq!(squares[0].filled_count(), 0);
    }

    #[test]
    fn agreeing_class_words_conflict_in_the_square() {
        // both fix distinct points but agree at position 3 (image 2),
        // so the fill collides there
        let class = code(
            4,
            &[&[1, 4, 2, 3], &[4, 2, 1, 3]],
        );
        assert_eq!(
            code_to_partial_squares(&[class]).unwrap_err(),
            Error::CellConflict { row: 3, col: 2 }
        );
    }

    #[test]
    fn trim_keeps_earliest_words() {
        let f = crate::gf::FiniteField::new(5).unwrap();
        let mut words = Vec::new();
        for a in 2..5u16 {
            for b in 0..5u16 {
                let word: Vec<u16> = f.elements().map(|x| f.add(f.mul(a, x), b)).collect();
                words.push(Permutation::from_word(word).unwrap());
            }
        }
        // 3-regular idempotent: each slope family fixes each symbol once
        let c = PermutationCode::new(5, words).unwrap();
        let trimmed = c.trim_to_regularity(2).unwrap();
        assert_eq!(trimmed.len(), 10);
        assert!(trimmed.verify().is_ripc(2));
        // the first family (slope 2) is retained whole
        assert_eq!(&trimmed.words()[..5], &c.words()[..5]);
    }

    #[test]
    fn trim_reports_shortfall() {
        let c = code(3, &[&[1, 3, 2]]);
        assert!(matches!(
            c.trim_to_regularity(1).unwrap_err(),
            Error::RegularityShortfall { .. }
        ));
    }

    #[test]
    fn merge_scan_prefers_smaller_and_earlier() {
        let a = (Distance::Finite(3), Some((0, 5)));
        let b = (Distance::Finite(2), Some((4, 6)));
        assert_eq!(merge_scan(a, b), b);
        let c = (Distance::Finite(2), Some((1, 2)));
        assert_eq!(merge_scan(b, c), c);
        assert_eq!(merge_scan((Distance::Infinite, None), b), b);
    }

    #[test]
    fn row_range_scan_matches_full_scan() {
        let f = crate::gf::FiniteField::new(7).unwrap();
        let words: Vec<Vec<u16>> = (1..7u16)
            .flat_map(|a| {
                let f = f.clone();
                (0..7u16).map(move |b| {
                    f.elements().map(|x| f.add(f.mul(a, x), b)).collect()
                })
            })
            .collect();
        let full = min_distance_over_rows(&words, 0..words.len());
        let mut merged = (Distance::Infinite, None);
        for lo in 0..words.len() {
            merged = merge_scan(merged, min_distance_over_rows(&words, lo..lo + 1));
        }
        assert_eq!(full, merged);
    }
}
