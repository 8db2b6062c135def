//! Gluing ingredient codes along the blocks of a pairwise balanced design.
//!
//! For every point `i` and every `j` up to the shared regularity `r`, the
//! output word fixes `i` and acts on each block through `i` as a relabeled
//! copy of that block size's ingredient word fixing `i`'s slot. Because the
//! design covers every pair exactly once, the word is well defined; because
//! each ingredient has minimum distance one below its length, two output
//! words agree in at most one position.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::design::PairwiseBalancedDesign;
use crate::error::Error;
use crate::perm::{Permutation, PermutationCode};

/// Composes ingredient codes over the design into a code on all `n` points.
///
/// `ingredients` maps each occurring block size `k >= 2` to an `r`-regular
/// idempotent code of length `k`. The ingredient's symbols are matched to a
/// block's points in ascending order. Output words come point-major: all
/// `r` words fixing point 0, then point 1, and so on. Blocks of size at
/// most 1 contribute nothing beyond the fixed-point rule.
pub fn compose_via_pbd(
    pbd: &PairwiseBalancedDesign,
    ingredients: &BTreeMap<usize, PermutationCode>,
    r: usize,
) -> Result<PermutationCode, Error> {
    pbd.verify().map_err(Error::PbdInvalid)?;
    let n = pbd.n();

    // Validate ingredients for every occurring size and group their words
    // by fixed point, preserving input order within each group.
    let mut grouped: BTreeMap<usize, Vec<Vec<&Permutation>>> = BTreeMap::new();
    for k in pbd.block_sizes() {
        if k < 2 {
            continue;
        }
        if k == 2 && r >= 1 {
            return Err(Error::BlockSizeTwo);
        }
        let ingredient = ingredients
            .get(&k)
            .ok_or(Error::MissingIngredient { size: k })?;
        if ingredient.n() != k || !ingredient.verify().is_ripc(r) {
            return Err(Error::IngredientNotRipc { size: k });
        }
        let mut by_fp: Vec<Vec<&Permutation>> = vec![Vec::new(); k];
        for w in ingredient.words() {
            let fp = w.fixed_points()[0] as usize;
            by_fp[fp].push(w);
        }
        debug_assert!(by_fp.iter().all(|g| g.len() == r));
        grouped.insert(k, by_fp);
    }

    let mut blocks_through: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (b, block) in pbd.blocks().iter().enumerate() {
        for &p in block {
            blocks_through[p as usize].push(b);
        }
    }

    let mut words = Vec::with_capacity(r * n);
    for i in 0..n {
        // resolve the blocks through i and i's slot in each, once per point
        let spans: Vec<(&[u16], usize, &[&Permutation])> = blocks_through[i]
            .iter()
            .filter_map(|&b| {
                let block = &pbd.blocks()[b];
                if block.len() < 2 {
                    return None;
                }
                let slot = block.iter().position(|&p| p as usize == i).unwrap();
                Some((&block[..], slot, &grouped[&block.len()][slot][..]))
            })
            .collect();
        for j in 0..r {
            let mut word = vec![0u16; n];
            word[i] = i as u16;
            for &(block, slot, templates) in &spans {
                let template = templates[j];
                for (x, &p) in block.iter().enumerate() {
                    if x != slot {
                        word[p as usize] = block[template.word()[x] as usize];
                    }
                }
            }
            words.push(Permutation::from_word(word)?);
        }
    }
    Ok(PermutationCode::new(n, words)?
        .with_claims(Some(n.saturating_sub(1)), Some(r)))
}
