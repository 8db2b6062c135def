//! Permutation codes of length `n` and minimum Hamming distance `n - 1`.
//!
//! The crate builds *r-regular idempotent* permutation codes (every word has
//! exactly one fixed point, and every symbol is the fixed point of exactly
//! `r` words), and certifies each construction with an exact brute-force
//! verifier. Constructions:
//!
//! * [`latin::mols_to_ipc`] — from mutually orthogonal idempotent latin
//!   squares, which [`latin::field_idempotent_mols`] supplies for prime-power
//!   orders and [`latin::mols_product`] extends to products of prime powers;
//! * [`compose::compose_via_pbd`] — recursive gluing of ingredient codes
//!   along the blocks of a pairwise balanced design ([`design`]);
//! * [`extend::baer_ipc`] — partition-and-extension through the additive
//!   cosets of the index-`q` subfield of `GF(q^2)`, giving codes of length
//!   `q^2 + 1`;
//! * [`sieve::synthesize_ipc`] — the full pipeline: pick a prime power `q`,
//!   split `n = q^2 t + u` by a congruence-avoidance scan, build the
//!   ingredient codes, and compose them over a truncated transversal design.
//!
//! The verification kernel in [`perm`] is deliberately plain `O(|code|^2 n)`
//! scanning; it is the oracle every construction is judged against.
//!
//! The crate is `no_std` (with `alloc`); IO, file formats and the command
//! line live in the companion `permcode-cli` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

mod arith;
pub mod compose;
pub mod design;
pub mod error;
pub mod extend;
pub mod gf;
pub mod latin;
pub mod perm;
pub mod sieve;

pub use error::Error;
