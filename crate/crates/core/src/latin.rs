//! Latin squares, mutually orthogonal families, and their conversion to
//! regular idempotent permutation codes.
//!
//! Over `GF(q)` the squares `L_a(x, y) = a*x + (1-a)*y` for `a` outside
//! `{0, 1}` are idempotent and pairwise orthogonal, giving `q - 2` of them;
//! dropping the idempotency constraint (`L_a(x, y) = a*x + y`, `a != 0`)
//! gives `q - 1`. The direct product carries both properties to composite
//! orders, with the floor governed by the least prime-power factor.
//!
//! Every [`MolsSet`] is validated exhaustively at construction: the latin
//! property per square, pairwise orthogonality, and idempotency when
//! claimed. Constructions are checked, never trusted.

use alloc::vec;
use alloc::vec::Vec;

use crate::arith::factor_prime_powers;
use crate::error::Error;
use crate::gf::FiniteField;
use crate::perm::{Permutation, PermutationCode};

/// An `n x n` array over symbols `0..n-1` whose rows and columns are
/// permutations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatinSquare {
    n: usize,
    cells: Vec<u16>,
}

impl LatinSquare {
    /// Validates rows and columns and builds the square.
    pub fn from_rows(rows: &[Vec<u16>]) -> Result<Self, Error> {
        let n = rows.len();
        let mut cells = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::OrderMismatch {
                    left: n,
                    right: row.len(),
                });
            }
            cells.extend_from_slice(row);
        }
        let square = LatinSquare { n, cells };
        square.validate()?;
        Ok(square)
    }

    /// Builds the square cell by cell from a function of (row, column).
    fn from_fn(n: usize, f: impl Fn(usize, usize) -> u16) -> Result<Self, Error> {
        let mut cells = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                cells.push(f(x, y));
            }
        }
        let square = LatinSquare { n, cells };
        square.validate()?;
        Ok(square)
    }

    fn validate(&self) -> Result<(), Error> {
        let n = self.n;
        let mut seen = vec![false; n];
        for x in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            for y in 0..n {
                let v = self.get(x, y) as usize;
                if v >= n || seen[v] {
                    return Err(Error::NotLatin { index: x, column: false });
                }
                seen[v] = true;
            }
        }
        for y in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            for x in 0..n {
                let v = self.get(x, y) as usize;
                if v >= n || seen[v] {
                    return Err(Error::NotLatin { index: y, column: true });
                }
                seen[v] = true;
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> u16 {
        self.cells[row * self.n + col]
    }

    pub fn row(&self, row: usize) -> &[u16] {
        &self.cells[row * self.n..(row + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u16]> {
        self.cells.chunks(self.n)
    }

    /// Whether every diagonal cell `(i, i)` holds `i`.
    pub fn is_idempotent(&self) -> bool {
        (0..self.n).all(|i| self.get(i, i) == i as u16)
    }
}

/// Whether overlaying the two squares yields all `n^2` distinct ordered
/// symbol pairs.
pub fn are_orthogonal(a: &LatinSquare, b: &LatinSquare) -> Result<bool, Error> {
    if a.n() != b.n() {
        return Err(Error::OrderMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    let n = a.n();
    let mut seen = vec![false; n * n];
    for x in 0..n {
        for y in 0..n {
            let pair = a.get(x, y) as usize * n + b.get(x, y) as usize;
            if seen[pair] {
                return Ok(false);
            }
            seen[pair] = true;
        }
    }
    Ok(true)
}

/// A family of mutually orthogonal latin squares of one order, optionally
/// all idempotent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MolsSet {
    n: usize,
    idempotent: bool,
    squares: Vec<LatinSquare>,
}

impl MolsSet {
    /// Validates order agreement, exhaustive pairwise orthogonality, and
    /// (when claimed) idempotency of every member.
    pub fn new(n: usize, squares: Vec<LatinSquare>, idempotent: bool) -> Result<Self, Error> {
        for (i, sq) in squares.iter().enumerate() {
            if sq.n() != n {
                return Err(Error::OrderMismatch {
                    left: n,
                    right: sq.n(),
                });
            }
            if idempotent && !sq.is_idempotent() {
                return Err(Error::SquareNotIdempotent { square: i });
            }
        }
        for i in 0..squares.len() {
            for j in i + 1..squares.len() {
                if !are_orthogonal(&squares[i], &squares[j])? {
                    return Err(Error::NotOrthogonal { first: i, second: j });
                }
            }
        }
        Ok(MolsSet {
            n,
            idempotent,
            squares,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.squares.len()
    }

    pub fn is_empty(&self) -> bool {
        self.squares.is_empty()
    }

    pub fn is_idempotent(&self) -> bool {
        self.idempotent
    }

    pub fn squares(&self) -> &[LatinSquare] {
        &self.squares
    }

    /// The subfamily of the first `count` squares.
    pub fn take_first(&self, count: usize) -> MolsSet {
        MolsSet {
            n: self.n,
            idempotent: self.idempotent,
            squares: self.squares[..count.min(self.squares.len())].to_vec(),
        }
    }
}

/// Builds field-based squares of order `q`: idempotent ones use slopes
/// outside `{0, 1}`, plain ones any nonzero slope, in ascending element
/// encoding, at most `limit` of them.
fn field_mols_limited(q: u64, limit: usize, idempotent: bool) -> Result<MolsSet, Error> {
    let f = FiniteField::new(q)?;
    let n = f.order() as usize;
    let first_slope = if idempotent { 2 } else { 1 };
    let mut squares = Vec::new();
    for a in first_slope..f.order() as u16 {
        if squares.len() == limit {
            break;
        }
        let square = if idempotent {
            // L_a(x, y) = a*x + (1 - a)*y
            let coeff = f.sub(1, a);
            LatinSquare::from_fn(n, |x, y| {
                f.add(f.mul(a, x as u16), f.mul(coeff, y as u16))
            })?
        } else {
            // L_a(x, y) = a*x + y
            LatinSquare::from_fn(n, |x, y| f.add(f.mul(a, x as u16), y as u16))?
        };
        squares.push(square);
    }
    MolsSet::new(n, squares, idempotent)
}

/// All `q - 2` idempotent mutually orthogonal squares of prime-power order
/// `q`. For `q = 2` the family is empty.
pub fn field_idempotent_mols(q: u64) -> Result<MolsSet, Error> {
    field_mols_limited(q, usize::MAX, true)
}

/// All `q - 1` plain mutually orthogonal squares of prime-power order `q`.
pub fn field_mols(q: u64) -> Result<MolsSet, Error> {
    field_mols_limited(q, usize::MAX, false)
}

/// Direct product: square `k` of the result pairs square `k` of each input
/// under the row-major point pairing `(x1, x2) -> x1 * n2 + x2`.
pub fn mols_product(a: &MolsSet, b: &MolsSet) -> Result<MolsSet, Error> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyInput);
    }
    let (n1, n2) = (a.n(), b.n());
    let n = n1 * n2;
    if n > u16::MAX as usize + 1 {
        return Err(Error::OrderTooLarge {
            q: n as u64,
            max: u16::MAX as u64 + 1,
        });
    }
    let count = a.len().min(b.len());
    let idempotent = a.is_idempotent() && b.is_idempotent();
    let mut squares = Vec::with_capacity(count);
    for k in 0..count {
        let (sa, sb) = (&a.squares()[k], &b.squares()[k]);
        let square = LatinSquare::from_fn(n, |x, y| {
            let (x1, x2) = (x / n2, x % n2);
            let (y1, y2) = (y / n2, y % n2);
            sa.get(x1, y1) * n2 as u16 + sb.get(x2, y2)
        })?;
        squares.push(square);
    }
    MolsSet::new(n, squares, idempotent)
}

/// MacNeish floors for order `n >= 2`: with `q` the least prime-power
/// factor of `n`, returns `(q - 1, q - 2)` — how many plain respectively
/// idempotent mutually orthogonal squares the product construction
/// guarantees.
pub fn macneish_floor(n: u64) -> (u64, u64) {
    assert!(n >= 2, "order must be at least 2");
    let q_min = factor_prime_powers(n)
        .iter()
        .map(|&(p, k)| p.pow(k))
        .min()
        .unwrap();
    (q_min - 1, q_min.saturating_sub(2))
}

/// `count` mutually orthogonal squares of order `n`, by factoring `n` into
/// prime powers and folding direct products.
pub fn mols_for_order(n: u64, count: usize) -> Result<MolsSet, Error> {
    mols_for_order_inner(n, count, false)
}

/// `count` idempotent mutually orthogonal squares of order `n`.
pub fn idempotent_mols_for_order(n: u64, count: usize) -> Result<MolsSet, Error> {
    mols_for_order_inner(n, count, true)
}

fn mols_for_order_inner(n: u64, count: usize, idempotent: bool) -> Result<MolsSet, Error> {
    assert!(n >= 2, "order must be at least 2");
    assert!(count >= 1, "at least one square must be requested");
    let (plain_floor, idem_floor) = macneish_floor(n);
    let floor = if idempotent { idem_floor } else { plain_floor };
    if (count as u64) > floor {
        return Err(Error::InsufficientMols {
            available: floor as usize,
            needed: count,
        });
    }
    let mut set: Option<MolsSet> = None;
    for (p, k) in factor_prime_powers(n) {
        let factor = field_mols_limited(p.pow(k), count, idempotent)?;
        set = Some(match set {
            None => factor,
            Some(acc) => mols_product(&acc, &factor)?,
        });
    }
    Ok(set.unwrap())
}

/// Converts mutually orthogonal idempotent squares into a regular
/// idempotent code: for symbol `i` and square `j`, the word maps `x` to
/// the column of row `x` holding `i`. Words are emitted square-major.
///
/// The result has `|squares| * n` words, each fixing exactly the symbol it
/// was built from; distinct squares contribute words agreeing in at most
/// one position by orthogonality.
pub fn mols_to_ipc(set: &MolsSet) -> Result<PermutationCode, Error> {
    let n = set.n();
    for (j, sq) in set.squares().iter().enumerate() {
        if !sq.is_idempotent() {
            return Err(Error::SquareNotIdempotent { square: j });
        }
    }
    let mut words = Vec::with_capacity(set.len() * n);
    for sq in set.squares() {
        // position of each symbol within each row
        let mut col_of = vec![0u16; n * n];
        for x in 0..n {
            for y in 0..n {
                col_of[x * n + sq.get(x, y) as usize] = y as u16;
            }
        }
        for i in 0..n {
            let word: Vec<u16> = (0..n).map(|x| col_of[x * n + i]).collect();
            words.push(Permutation::from_word(word)?);
        }
    }
    let r = set.len();
    Ok(PermutationCode::new(n, words)?
        .with_claims(Some(n.saturating_sub(1)), Some(r)))
}

/// An `n x n` array partially filled with symbols `0..n-1`, no repeats in
/// any row or column among filled cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialLatinSquare {
    n: usize,
    cells: Vec<Option<u16>>,
}

impl PartialLatinSquare {
    pub fn new(n: usize) -> Self {
        PartialLatinSquare {
            n,
            cells: vec![None; n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> Option<u16> {
        self.cells[row * self.n + col]
    }

    /// Fills one cell, rejecting an occupied cell or a row/column repeat.
    pub fn fill(&mut self, row: usize, col: usize, symbol: u16) -> Result<(), Error> {
        if self.get(row, col).is_some() {
            return Err(Error::CellConflict { row, col });
        }
        for k in 0..self.n {
            if self.get(row, k) == Some(symbol) || self.get(k, col) == Some(symbol) {
                return Err(Error::CellConflict { row, col });
            }
        }
        self.cells[row * self.n + col] = Some(symbol);
        Ok(())
    }

    pub fn filled_count(&self) -> usize {
        self.cells.iter().filter(|c| c.is_some()).count()
    }

    pub fn is_complete(&self) -> bool {
        self.cells.iter().all(|c| c.is_some())
    }

    /// Converts a completely filled square into a [`LatinSquare`].
    pub fn to_latin(&self) -> Result<LatinSquare, Error> {
        let rows: Vec<Vec<u16>> = (0..self.n)
            .map(|x| {
                (0..self.n)
                    .map(|y| self.get(x, y).ok_or(Error::CellConflict { row: x, col: y }))
                    .collect::<Result<Vec<u16>, Error>>()
            })
            .collect::<Result<Vec<_>, Error>>()?;
        LatinSquare::from_rows(&rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;

    fn sq(rows: &[&[u16]]) -> LatinSquare {
        LatinSquare::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn orthogonal_pair_of_order_three() {
        let a = sq(&[&[0, 1, 2], &[1, 2, 0], &[2, 0, 1]]);
        let b = sq(&[&[0, 1, 2], &[2, 0, 1], &[1, 2, 0]]);
        assert!(are_orthogonal(&a, &b).unwrap());
        // independent overlay count
        let mut pairs = BTreeSet::new();
        for x in 0..3 {
            for y in 0..3 {
                pairs.insert((a.get(x, y), b.get(x, y)));
            }
        }
        assert_eq!(pairs.len(), 9);
    }

    #[test]
    fn square_is_not_self_orthogonal() {
        let a = sq(&[&[0, 1, 2], &[1, 2, 0], &[2, 0, 1]]);
        assert!(!are_orthogonal(&a, &a).unwrap());
    }

    #[test]
    fn order_one_squares_are_orthogonal() {
        let a = sq(&[&[0]]);
        assert!(are_orthogonal(&a, &a).unwrap());
    }

    #[test]
    fn order_mismatch_is_an_error() {
        let a = sq(&[&[0]]);
        let b = sq(&[&[0, 1], &[1, 0]]);
        assert!(matches!(
            are_orthogonal(&a, &b),
            Err(Error::OrderMismatch { .. })
        ));
    }

    #[test]
    fn bad_rows_are_rejected() {
        assert!(matches!(
            LatinSquare::from_rows(&[vec![0, 1], vec![0, 1]]),
            Err(Error::NotLatin { column: true, .. })
        ));
        assert!(matches!(
            LatinSquare::from_rows(&[vec![0, 0], vec![1, 1]]),
            Err(Error::NotLatin { column: false, .. })
        ));
    }

    #[test]
    fn field_idempotent_families() {
        for (q, expect) in [(2u64, 0usize), (3, 1), (4, 2), (5, 3), (7, 5), (8, 6), (9, 7)] {
            let set = field_idempotent_mols(q).unwrap();
            assert_eq!(set.len(), expect, "q = {q}");
            assert!(set.is_idempotent());
            assert_eq!(set.n(), q as usize);
        }
        assert_eq!(
            field_idempotent_mols(6).unwrap_err(),
            Error::NotAPrimePower(6)
        );
    }

    #[test]
    fn order_three_square_matches_reference_ingredient() {
        // the single idempotent square of order 3, row by row
        let set = field_idempotent_mols(3).unwrap();
        let rows: Vec<&[u16]> = set.squares()[0].rows().collect();
        assert_eq!(rows, vec![&[0, 2, 1][..], &[2, 1, 0], &[1, 0, 2]]);
    }

    #[test]
    fn plain_field_families() {
        for (q, expect) in [(2u64, 1usize), (3, 2), (5, 4), (8, 7)] {
            let set = field_mols(q).unwrap();
            assert_eq!(set.len(), expect);
            assert!(!set.is_idempotent());
        }
    }

    #[test]
    fn product_of_orders_three_and_five() {
        let a = field_idempotent_mols(3).unwrap();
        let b = field_idempotent_mols(5).unwrap();
        let prod = mols_product(&a, &b).unwrap();
        assert_eq!(prod.n(), 15);
        assert_eq!(prod.len(), 1);
        assert!(prod.is_idempotent());
        assert!(prod.squares()[0].is_idempotent());
    }

    #[test]
    fn product_with_identity_factor() {
        let a = field_idempotent_mols(5).unwrap();
        let one = MolsSet::new(1, vec![sq(&[&[0]]), sq(&[&[0]]), sq(&[&[0]])], true).unwrap();
        let prod = mols_product(&a, &one).unwrap();
        assert_eq!(prod.n(), 5);
        assert_eq!(prod.len(), 3);
        for (k, square) in prod.squares().iter().enumerate() {
            assert_eq!(square, &a.squares()[k]);
        }
    }

    #[test]
    fn product_count_is_the_minimum() {
        let a = field_idempotent_mols(4).unwrap(); // 2 squares
        let b = field_idempotent_mols(3).unwrap(); // 1 square
        let prod = mols_product(&a, &b).unwrap();
        assert_eq!(prod.n(), 12);
        assert_eq!(prod.len(), 1);
    }

    #[test]
    fn product_rejects_empty_input() {
        let a = field_idempotent_mols(3).unwrap();
        let empty = field_idempotent_mols(2).unwrap();
        assert_eq!(mols_product(&a, &empty).unwrap_err(), Error::EmptyInput);
    }

    #[test]
    fn macneish_floors() {
        assert_eq!(macneish_floor(35), (4, 3));
        assert_eq!(macneish_floor(6), (1, 0));
        assert_eq!(macneish_floor(7), (6, 5));
        assert_eq!(macneish_floor(12), (2, 1));
        assert_eq!(macneish_floor(121), (120, 119));
    }

    #[test]
    fn composite_order_families() {
        let set = mols_for_order(12, 2).unwrap();
        assert_eq!(set.n(), 12);
        assert_eq!(set.len(), 2);
        assert_eq!(
            mols_for_order(12, 3).unwrap_err(),
            Error::InsufficientMols { available: 2, needed: 3 }
        );
        let idem = idempotent_mols_for_order(15, 1).unwrap();
        assert_eq!(idem.n(), 15);
        assert!(idem.is_idempotent());
    }

    #[test]
    fn ipc_from_field_squares() {
        for q in [3u64, 4, 5] {
            let set = field_idempotent_mols(q).unwrap();
            let code = mols_to_ipc(&set).unwrap();
            let n = q as usize;
            let r = n - 2;
            assert_eq!(code.len(), n * r);
            assert!(code.verify().is_ripc(r), "q = {q}");
        }
    }

    #[test]
    fn order_three_ipc_matches_square_rows() {
        let set = field_idempotent_mols(3).unwrap();
        let code = mols_to_ipc(&set).unwrap();
        let words: Vec<&[u16]> = code.words().iter().map(|w| w.word()).collect();
        assert_eq!(words, vec![&[0, 2, 1][..], &[2, 1, 0], &[1, 0, 2]]);
    }

    #[test]
    fn empty_set_gives_empty_code() {
        let set = field_idempotent_mols(2).unwrap();
        let code = mols_to_ipc(&set).unwrap();
        assert!(code.is_empty());
        assert_eq!(code.n(), 2);
    }

    #[test]
    fn product_code_of_order_fifteen() {
        let set = idempotent_mols_for_order(15, 1).unwrap();
        let code = mols_to_ipc(&set).unwrap();
        assert_eq!(code.len(), 15);
        assert!(code.verify().is_ripc(1));
    }

    #[test]
    fn partial_square_fill_conflicts() {
        let mut p = PartialLatinSquare::new(3);
        p.fill(0, 0, 2).unwrap();
        assert_eq!(
            p.fill(0, 0, 1).unwrap_err(),
            Error::CellConflict { row: 0, col: 0 }
        );
        // same symbol later in the same row
        assert_eq!(
            p.fill(0, 2, 2).unwrap_err(),
            Error::CellConflict { row: 0, col: 2 }
        );
        // same symbol in the same column
        assert_eq!(
            p.fill(2, 0, 2).unwrap_err(),
            Error::CellConflict { row: 2, col: 0 }
        );
        assert_eq!(p.filled_count(), 1);
    }

    #[test]
    fn complete_partial_square_converts() {
        let mut p = PartialLatinSquare::new(2);
        p.fill(0, 0, 0).unwrap();
        p.fill(0, 1, 1).unwrap();
        p.fill(1, 0, 1).unwrap();
        p.fill(1, 1, 0).unwrap();
        assert!(p.is_complete());
        let latin = p.to_latin().unwrap();
        assert_eq!(latin.row(0), &[0, 1]);
    }
}
