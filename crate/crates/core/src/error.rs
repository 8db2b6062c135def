//! Crate-wide error type.

use alloc::boxed::Box;
use core::fmt;

use crate::design::PbdDefect;

/// Errors reported by constructions and queries in this crate.
///
/// Verification *failures* are not errors: the verifier in [`crate::perm`]
/// returns a report describing what it found. Errors signal that an
/// operation's inputs were unusable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// The requested order is not of the form `p^k` for a prime `p`.
    NotAPrimePower(u64),
    /// The requested order exceeds what the element encoding supports.
    OrderTooLarge { q: u64, max: u64 },
    /// Zero has no multiplicative inverse.
    ZeroInverse,
    /// A subfield partition needs a field whose order is the square of a
    /// prime power.
    NotASquareOrder(u32),
    /// Two words of different lengths were compared.
    LengthMismatch { left: usize, right: usize },
    /// A word is not a bijection on its symbol set.
    NotAPermutation { position: usize },
    /// A code contains the same word twice.
    DuplicateWords { first: usize, second: usize },
    /// A code has a word of the wrong length.
    WordLengthMismatch { word: usize, len: usize, n: usize },
    /// An operation requires minimum distance at least `needed`.
    DistanceTooSmall { found: usize, needed: usize },
    /// A word does not have exactly one fixed point.
    NotIdempotent { word: usize, fixed_points: usize },
    /// Two words of one distance-`n` class agree, so their partial square
    /// would fill the same cell twice; also raised for a row or column
    /// repeat among filled cells.
    CellConflict { row: usize, col: usize },
    /// A symbol is fixed by fewer words than a trim requires.
    RegularityShortfall { symbol: u16, have: usize, need: usize },
    /// Rows do not form a latin square.
    NotLatin { index: usize, column: bool },
    /// A square's main diagonal is not the identity.
    SquareNotIdempotent { square: usize },
    /// Latin squares of different orders were combined.
    OrderMismatch { left: usize, right: usize },
    /// Two squares of a set overlay with a repeated ordered pair.
    NotOrthogonal { first: usize, second: usize },
    /// A product construction was given an empty square set.
    EmptyInput,
    /// A design block mentions a point outside `1..=n`.
    PointOutOfRange { point: u16, n: usize },
    /// A design block lists the same point twice.
    DuplicatePointInBlock { block: usize },
    /// Fewer mutually orthogonal squares are available than required.
    InsufficientMols { available: usize, needed: usize },
    /// A truncation would keep more points than a fiber has.
    BadTruncation { u: usize, t: usize },
    /// A plane truncation must keep between 2 and `q + 1` points of a line.
    KeepOutOfRange { keep: usize, max: usize },
    /// The design fed to a composition does not cover every pair exactly
    /// once.
    PbdInvalid(PbdDefect),
    /// No ingredient code was supplied for an occurring block size.
    MissingIngredient { size: usize },
    /// An ingredient code failed the regular-idempotent verification.
    IngredientNotRipc { size: usize },
    /// No idempotent code on two symbols has minimum distance 1 and a
    /// single fixed point per word, so size-2 blocks cannot be filled.
    BlockSizeTwo,
    /// No position of the word maps the part into itself.
    NoAnchor,
    /// Affine maps `x -> ax + b` need a nonzero slope.
    ZeroSlope,
    /// The congruence scan found no admissible cofactor.
    NoAdmissibleT { n: u64, m: u64 },
    /// No prime power of the required parity lies in the window.
    NoPrimePowerInWindow { lo: u64, hi: u64, parity: u64 },
    /// Building the ingredient code for one block size failed.
    IngredientFailure { size: usize, cause: Box<Error> },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotAPrimePower(n) => write!(f, "{n} is not a prime power"),
            Error::OrderTooLarge { q, max } => {
                write!(f, "order {q} exceeds the supported maximum {max}")
            }
            Error::ZeroInverse => write!(f, "zero has no multiplicative inverse"),
            Error::NotASquareOrder(q) => {
                write!(f, "field order {q} is not the square of a prime power")
            }
            Error::LengthMismatch { left, right } => {
                write!(f, "length mismatch: {left} vs {right}")
            }
            Error::NotAPermutation { position } => {
                write!(f, "word is not a permutation (defect at position {})", position + 1)
            }
            Error::DuplicateWords { first, second } => {
                write!(f, "words {} and {} are identical", first + 1, second + 1)
            }
            Error::WordLengthMismatch { word, len, n } => {
                write!(f, "word {} has length {len}, expected {n}", word + 1)
            }
            Error::DistanceTooSmall { found, needed } => {
                write!(f, "minimum distance {found} is below the required {needed}")
            }
            Error::NotIdempotent { word, fixed_points } => {
                write!(f, "word {} has {fixed_points} fixed points, expected exactly 1", word + 1)
            }
            Error::CellConflict { row, col } => {
                write!(f, "conflicting fill at cell ({}, {})", row + 1, col + 1)
            }
            Error::RegularityShortfall { symbol, have, need } => {
                write!(f, "symbol {} is fixed by {have} words, {need} required", symbol + 1)
            }
            Error::NotLatin { index, column } => {
                let what = if *column { "column" } else { "row" };
                write!(f, "{what} {} is not a permutation of the symbols", index + 1)
            }
            Error::SquareNotIdempotent { square } => {
                write!(f, "square {} is not idempotent", square + 1)
            }
            Error::OrderMismatch { left, right } => {
                write!(f, "order mismatch: {left} vs {right}")
            }
            Error::NotOrthogonal { first, second } => {
                write!(f, "squares {} and {} are not orthogonal", first + 1, second + 1)
            }
            Error::EmptyInput => write!(f, "empty square set"),
            Error::PointOutOfRange { point, n } => {
                write!(f, "point {} outside 1..={n}", point + 1)
            }
            Error::DuplicatePointInBlock { block } => {
                write!(f, "block {} lists a point twice", block + 1)
            }
            Error::InsufficientMols { available, needed } => {
                write!(f, "{needed} mutually orthogonal squares needed, only {available} available")
            }
            Error::BadTruncation { u, t } => {
                write!(f, "cannot keep {u} points of a fiber of size {t}")
            }
            Error::KeepOutOfRange { keep, max } => {
                write!(f, "must keep between 2 and {max} points of a line, got {keep}")
            }
            Error::PbdInvalid(defect) => write!(f, "invalid design: {defect}"),
            Error::MissingIngredient { size } => {
                write!(f, "no ingredient code for block size {size}")
            }
            Error::IngredientNotRipc { size } => {
                write!(f, "ingredient for block size {size} is not a regular idempotent code")
            }
            Error::BlockSizeTwo => {
                write!(f, "blocks of size 2 admit no idempotent ingredient code")
            }
            Error::NoAnchor => write!(f, "no position maps the part into itself"),
            Error::ZeroSlope => write!(f, "affine maps require a nonzero slope"),
            Error::NoAdmissibleT { n, m } => {
                write!(f, "no admissible cofactor t for n={n}, m={m}")
            }
            Error::NoPrimePowerInWindow { lo, hi, parity } => {
                write!(f, "no prime power in [{lo}, {hi}] with parity {parity}")
            }
            Error::IngredientFailure { size, cause } => {
                write!(f, "building the ingredient of length {size} failed: {cause}")
            }
        }
    }
}

impl core::error::Error for Error {}
