//! Gödel numbering of terms, formulas and proofs.
//!
//! An expression is flattened to a prefix (Polish) string over a 32-letter
//! alphabet where every symbol has a fixed arity, and the string
//! `d_1 ... d_n` (digits in `1..=32`) is read as the bijective base-32
//! numeral `sum d_i * 32^(n-i)`. Distinct strings get distinct codes, longer
//! strings get larger codes, and the empty string is `0`. A leading tag
//! symbol separates the three categories. See `CODING.md` for the table.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

mod decode;
mod encode;
mod symbols;

pub use decode::{decode_formula, decode_formula_digits, decode_proof, decode_term};
pub use encode::{encode_formula, encode_formula_digits, encode_formula_subst, encode_proof, encode_term, Writer};
pub use symbols::{Symbol, ALL_SYMBOLS, RADIX, SYMBOL_COUNT};

/// Bits per packed digit.
/// Version of the numbering documented in `CODING.md`.
pub const CODING_VERSION: u32 = 1;

const DIGIT_BITS: u64 = 5;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodingError {
    #[error("not a term code (fails at symbol {offset})")]
    NotATermCode { code: BigUint, offset: usize },
    #[error("not a formula code (fails at symbol {offset})")]
    NotAFormulaCode { code: BigUint, offset: usize },
    #[error("not a proof code (fails at symbol {offset})")]
    NotAProofCode { code: BigUint, offset: usize },
}

impl CodingError {
    pub fn offset(&self) -> usize {
        match self {
            CodingError::NotATermCode { offset, .. }
            | CodingError::NotAFormulaCode { offset, .. }
            | CodingError::NotAProofCode { offset, .. } => *offset,
        }
    }
}

/// `(32^n - 1) / 31`: the smallest code of a string of length `n`.
pub fn repunit(n: usize) -> BigUint {
    ((BigUint::one() << (DIGIT_BITS * n as u64)) - 1u32) / (RADIX - 1)
}

/// Packs digits given as `digit - 1` (each in `0..32`).
pub(crate) fn pack_raw(raw: &[u8]) -> BigUint {
    if raw.is_empty() {
        return BigUint::zero();
    }
    BigUint::from_radix_be(raw, RADIX).expect("packing digits are below the radix") + repunit(raw.len())
}

/// Number of symbols in the string coded by `code`.
pub fn code_len(code: &BigUint) -> usize {
    // R(n) <= code < R(n+1), and R(n) has bit length 5n - 4 for n >= 1
    let mut n = (code.bits() / DIGIT_BITS) as usize + 1;
    while n > 0 && repunit(n) > *code {
        n -= 1;
    }
    while repunit(n + 1) <= *code {
        n += 1;
    }
    n
}

/// Digits (`1..=32`) of the string coded by `code`.
pub fn unpack_digits(code: &BigUint) -> Vec<u8> {
    let n = code_len(code);
    if n == 0 {
        return Vec::new();
    }
    let rest = code - repunit(n);
    let raw = rest.to_radix_be(RADIX);
    let mut out = vec![1u8; n - raw.len()];
    out.extend(raw.iter().map(|d| d + 1));
    out
}

/// Packs a digit string (`1..=32` per entry).
pub fn pack_digits(digits: &[u8]) -> BigUint {
    let raw: Vec<u8> = digits.iter().map(|d| d - 1).collect();
    pack_raw(&raw)
}

/// Numeric order on codes.
pub fn compare_codes(a: &BigUint, b: &BigUint) -> Ordering {
    a.cmp(b)
}
