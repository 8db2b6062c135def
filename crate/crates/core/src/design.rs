//! Pairwise balanced designs: verification and two constructions — the
//! truncated transversal design from mutually orthogonal squares, and the
//! projective plane with one line partially deleted.
//!
//! Points are `0..n-1` internally; blocks are sorted point lists. The
//! verifier checks the defining property directly: every unordered pair of
//! distinct points lies in exactly one block.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::Error;
use crate::gf::FiniteField;
use crate::latin::{mols_for_order, MolsSet};

/// First failure found by the pair-coverage check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PbdDefect {
    /// A pair of points lies in no block.
    UncoveredPair(u16, u16),
    /// A pair of points lies in more than one block.
    RepeatedPair(u16, u16),
}

impl fmt::Display for PbdDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PbdDefect::UncoveredPair(a, b) => {
                write!(f, "pair ({}, {}) is uncovered", a + 1, b + 1)
            }
            PbdDefect::RepeatedPair(a, b) => {
                write!(f, "pair ({}, {}) is covered more than once", a + 1, b + 1)
            }
        }
    }
}

/// A point set `0..n-1` with blocks intended to cover every pair exactly
/// once. Blocks of size at most 1 are permitted; they cover no pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairwiseBalancedDesign {
    n: usize,
    blocks: Vec<Vec<u16>>,
}

impl PairwiseBalancedDesign {
    /// Builds a design, checking point ranges and sorting each block.
    /// Pair coverage is checked separately by [`Self::verify`].
    pub fn new(n: usize, blocks: Vec<Vec<u16>>) -> Result<Self, Error> {
        let mut blocks = blocks;
        for (b, block) in blocks.iter_mut().enumerate() {
            block.sort_unstable();
            for pair in block.windows(2) {
                if pair[0] == pair[1] {
                    return Err(Error::DuplicatePointInBlock { block: b });
                }
            }
            if let Some(&last) = block.last() {
                if last as usize >= n {
                    return Err(Error::PointOutOfRange { point: last, n });
                }
            }
        }
        Ok(PairwiseBalancedDesign { n, blocks })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<u16>] {
        &self.blocks
    }

    /// The set of occurring block sizes, ascending and deduplicated.
    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = self.blocks.iter().map(|b| b.len()).collect();
        sizes.sort_unstable();
        sizes.dedup();
        sizes
    }

    /// Checks that every pair of distinct points is covered exactly once,
    /// reporting the first repeated pair (in block order) or otherwise the
    /// first uncovered pair (lexicographic).
    pub fn verify(&self) -> Result<(), PbdDefect> {
        let n = self.n;
        let mut covered = vec![false; n * n];
        for block in &self.blocks {
            for (i, &a) in block.iter().enumerate() {
                for &b in &block[i + 1..] {
                    let idx = a as usize * n + b as usize;
                    if covered[idx] {
                        return Err(PbdDefect::RepeatedPair(a, b));
                    }
                    covered[idx] = true;
                }
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                if !covered[a * n + b] {
                    return Err(PbdDefect::UncoveredPair(a as u16, b as u16));
                }
            }
        }
        Ok(())
    }
}

/// Builds a design on `m*t + u` points from a transversal design with one
/// truncated fiber.
///
/// Points live on `m + 1` fibers of size `t`, the last cut down to `u`
/// points. Every choice of a point in fiber 0 and a point in fiber 1
/// determines one cross block through all fibers (size `m + 1`, or `m`
/// where its last-fiber point was truncated); the fibers themselves are
/// blocks of size `t` and `u` (dropped when smaller than 2). Points are
/// numbered fiber-major.
///
/// Needs `m - 1` mutually orthogonal squares of order `t`; they are built
/// from prime-power factors of `t` unless supplied.
pub fn truncated_td_pbd(
    m: usize,
    t: usize,
    u: usize,
    mols: Option<&MolsSet>,
) -> Result<PairwiseBalancedDesign, Error> {
    assert!(m >= 2, "at least two full fibers are required");
    assert!(t >= 1);
    if u > t {
        return Err(Error::BadTruncation { u, t });
    }
    if m * t + u > u16::MAX as usize {
        return Err(Error::OrderTooLarge {
            q: (m * t + u) as u64,
            max: u16::MAX as u64,
        });
    }
    let owned;
    let squares = if t == 1 {
        // a single cross block; no squares are consulted
        &[][..]
    } else {
        let set = match mols {
            Some(set) => {
                if set.n() != t {
                    return Err(Error::OrderMismatch { left: set.n(), right: t });
                }
                if set.len() < m - 1 {
                    return Err(Error::InsufficientMols {
                        available: set.len(),
                        needed: m - 1,
                    });
                }
                set
            }
            None => {
                owned = mols_for_order(t as u64, m - 1)?;
                &owned
            }
        };
        &set.squares()[..m - 1]
    };

    let n = m * t + u;
    let point = |x: usize, fiber: usize| (fiber * t + x) as u16;
    let mut blocks = Vec::with_capacity(t * t + m + 1);
    for i in 0..t {
        for j in 0..t {
            // one coordinate per fiber 0..=m; the squares steer fibers 2..=m
            let mut block = Vec::with_capacity(m + 1);
            block.push(point(i, 0));
            block.push(point(j, 1));
            for (h, square) in squares.iter().enumerate() {
                block.push(point(square.get(i, j) as usize, h + 2));
            }
            if t == 1 {
                for h in 2..=m {
                    block.push(point(0, h));
                }
            }
            debug_assert_eq!(block.len(), m + 1);
            // truncate the last-fiber coordinate if it was deleted
            let x_last = *block.last().unwrap() as usize - m * t;
            if x_last >= u {
                block.pop();
            }
            blocks.push(block);
        }
    }
    // fibers as blocks
    for h in 0..m {
        if t >= 2 {
            blocks.push((0..t).map(|x| point(x, h)).collect());
        }
    }
    if u >= 2 {
        blocks.push((0..u).map(|x| point(x, m)).collect());
    }
    PairwiseBalancedDesign::new(n, blocks)
}

/// Builds the projective plane of prime-power order `q` and deletes all but
/// `keep` points from its last line.
///
/// The plane has `q^2 + q + 1` points: the affine points `(x, y)` numbered
/// `x*q + y`, one point per slope, and one for the vertical direction. The
/// deleted points are exactly the top-numbered ones, so the survivors are
/// `0..q^2 + keep - 1`. Blocks that shrink below size 2 are dropped.
pub fn plane_truncation_pbd(q: u64, keep: usize) -> Result<PairwiseBalancedDesign, Error> {
    let f = FiniteField::new(q)?;
    let q = f.order() as usize;
    if keep < 2 || keep > q + 1 {
        return Err(Error::KeepOutOfRange { keep, max: q + 1 });
    }
    if q * q + q > u16::MAX as usize {
        return Err(Error::OrderTooLarge {
            q: (q * q + q + 1) as u64,
            max: u16::MAX as u64,
        });
    }
    let n = q * q + keep;
    let affine = |x: u16, y: u16| x * q as u16 + y;
    let slope_point = |s: u16| (q * q) as u16 + s;
    let vertical_point = (q * q + q) as u16;
    let keep_point = |p: u16| (p as usize) < n;

    let mut blocks = Vec::with_capacity(q * q + q + 1);
    // lines y = s*x + c, extended by their slope point
    for s in f.elements() {
        for c in f.elements() {
            let mut block: Vec<u16> = f
                .elements()
                .map(|x| affine(x, f.add(f.mul(s, x), c)))
                .collect();
            if keep_point(slope_point(s)) {
                block.push(slope_point(s));
            }
            blocks.push(block);
        }
    }
    // vertical lines x = c, extended by the vertical point
    for c in f.elements() {
        let mut block: Vec<u16> = f.elements().map(|y| affine(c, y)).collect();
        if keep_point(vertical_point) {
            block.push(vertical_point);
        }
        blocks.push(block);
    }
    // the line at infinity, truncated to the kept points
    let infinity: Vec<u16> = (0..q as u16)
        .map(slope_point)
        .chain([vertical_point])
        .filter(|&p| keep_point(p))
        .collect();
    if infinity.len() >= 2 {
        blocks.push(infinity);
    }
    PairwiseBalancedDesign::new(n, blocks)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Pair-counting identity: the blocks of a verified design account for
    /// every pair exactly once.
    fn assert_pair_count(d: &PairwiseBalancedDesign) {
        let total: usize = d
            .blocks()
            .iter()
            .map(|b| b.len() * b.len().saturating_sub(1) / 2)
            .sum();
        assert_eq!(total, d.n() * (d.n() - 1) / 2);
    }

    #[test]
    fn fano_plane_verifies() {
        let blocks = vec![
            vec![0, 1, 2],
            vec![0, 3, 4],
            vec![0, 5, 6],
            vec![1, 3, 5],
            vec![1, 4, 6],
            vec![2, 3, 6],
            vec![2, 4, 5],
        ];
        let d = PairwiseBalancedDesign::new(7, blocks).unwrap();
        assert_eq!(d.verify(), Ok(()));
        assert_pair_count(&d);
        assert_eq!(d.block_sizes(), vec![3]);
    }

    #[test]
    fn double_coverage_is_reported() {
        let d = PairwiseBalancedDesign::new(4, vec![vec![0, 1, 2], vec![0, 1, 3]]).unwrap();
        assert_eq!(d.verify(), Err(PbdDefect::RepeatedPair(0, 1)));
    }

    #[test]
    fn missing_coverage_is_reported() {
        let d = PairwiseBalancedDesign::new(4, vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(d.verify(), Err(PbdDefect::UncoveredPair(0, 3)));
    }

    #[test]
    fn bad_blocks_are_rejected() {
        assert!(matches!(
            PairwiseBalancedDesign::new(3, vec![vec![0, 4]]),
            Err(Error::PointOutOfRange { point: 4, .. })
        ));
        assert!(matches!(
            PairwiseBalancedDesign::new(3, vec![vec![1, 1]]),
            Err(Error::DuplicatePointInBlock { block: 0 })
        ));
    }

    #[test]
    fn truncated_td_10_points() {
        let d = truncated_td_pbd(3, 3, 1, None).unwrap();
        assert_eq!(d.n(), 10);
        assert_eq!(d.verify(), Ok(()));
        assert_eq!(d.block_sizes(), vec![3, 4]);
        assert_pair_count(&d);
    }

    #[test]
    fn truncated_td_12_points() {
        let d = truncated_td_pbd(3, 4, 0, None).unwrap();
        assert_eq!(d.n(), 12);
        assert_eq!(d.verify(), Ok(()));
        assert_eq!(d.block_sizes(), vec![3, 4]);
        assert_pair_count(&d);
    }

    #[test]
    fn truncated_td_23_points() {
        let d = truncated_td_pbd(4, 5, 3, None).unwrap();
        assert_eq!(d.n(), 23);
        assert_eq!(d.verify(), Ok(()));
        assert_eq!(d.block_sizes(), vec![3, 4, 5]);
        assert_pair_count(&d);
    }

    #[test]
    fn cross_blocks_meet_full_fibers_once() {
        let d = truncated_td_pbd(3, 4, 2, None).unwrap();
        assert_eq!(d.verify(), Ok(()));
        let t = 4;
        for block in d.blocks().iter().filter(|b| ![t, 2].contains(&b.len())) {
            for fiber in 0..3usize {
                let lo = (fiber * t) as u16;
                let hi = lo + t as u16;
                let hits = block.iter().filter(|&&p| p >= lo && p < hi).count();
                assert_eq!(hits, 1);
            }
        }
    }

    #[test]
    fn truncation_bounds_are_checked() {
        assert_eq!(
            truncated_td_pbd(3, 3, 4, None).unwrap_err(),
            Error::BadTruncation { u: 4, t: 3 }
        );
    }

    #[test]
    fn supplied_squares_must_suffice() {
        let set = crate::latin::field_mols(4).unwrap().take_first(1);
        assert_eq!(
            truncated_td_pbd(3, 4, 0, Some(&set)).unwrap_err(),
            Error::InsufficientMols { available: 1, needed: 2 }
        );
    }

    #[test]
    fn intact_plane_of_order_three() {
        let d = plane_truncation_pbd(3, 4).unwrap();
        assert_eq!(d.n(), 13);
        assert_eq!(d.verify(), Ok(()));
        assert_eq!(d.block_sizes(), vec![4]);
        assert_pair_count(&d);
    }

    #[test]
    fn truncated_plane_of_order_three() {
        let d = plane_truncation_pbd(3, 3).unwrap();
        assert_eq!(d.n(), 12);
        assert_eq!(d.verify(), Ok(()));
        assert_eq!(d.block_sizes(), vec![3, 4]);
        assert_pair_count(&d);
    }

    #[test]
    fn truncated_plane_of_order_five() {
        let d = plane_truncation_pbd(5, 3).unwrap();
        assert_eq!(d.n(), 28);
        assert_eq!(d.verify(), Ok(()));
        assert_eq!(d.block_sizes(), vec![3, 5, 6]);
        assert_pair_count(&d);
    }

    #[test]
    fn plane_parameters_are_checked() {
        assert_eq!(
            plane_truncation_pbd(6, 3).unwrap_err(),
            Error::NotAPrimePower(6)
        );
        assert_eq!(
            plane_truncation_pbd(3, 5).unwrap_err(),
            Error::KeepOutOfRange { keep: 5, max: 4 }
        );
        assert_eq!(
            plane_truncation_pbd(3, 1).unwrap_err(),
            Error::KeepOutOfRange { keep: 1, max: 4 }
        );
    }
}
