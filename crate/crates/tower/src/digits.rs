//! Symbol-string operations on codes, used both as native implementations
//! of the stage functions and directly by the stage walk.
//!
//! Every function mirrors its primitive-recursive counterpart in
//! [`crate::ir`] exactly, including on malformed input.

use std::cmp::Ordering;

use coding::Symbol;
use num_bigint::BigUint;
use num_traits::Zero;

use crate::ir::{code_canonical, code_cmp};

pub const S: u8 = Symbol::Succ as u8;
pub const Z: u8 = Symbol::Zero as u8;
pub const VAR: u8 = Symbol::Var as u8;
pub const TAG_F: u8 = Symbol::TagFormula as u8;
pub const NOT: u8 = Symbol::Not as u8;

/// Position of the first stage numeral in a host code.
pub const NUM1_AT: usize = 15;
/// Position where the left disjunct's formula starts in a host code.
pub const LEFT_AT: usize = 6;
/// Offset of the second stage numeral from the end of the left disjunct's formula.
pub const NUM2_FROM_LEFT_END: usize = 20;
/// Offset of a policy numeral from the end of the stage numeral before it.
pub const PNUM_FROM_NUM_END: usize = 11;

/// Digits of the unary numeral `S^g 0`.
pub fn unary_digits(g: usize) -> Vec<u8> {
    let mut d = vec![S; g];
    d.push(Z);
    d
}

fn digit_block(d: u8) -> [u8; 6] {
    use Symbol::*;
    let s = |x: Symbol| x as u8;
    match d {
        0 => [s(Times), s(Zero), s(Succ), s(Succ), s(Succ), s(Zero)],
        1 => [s(Succ), s(Times), s(Zero), s(Succ), s(Succ), s(Zero)],
        2 => [s(Times), s(Succ), s(Zero), s(Succ), s(Succ), s(Zero)],
        _ => [s(Plus), s(Succ), s(Succ), s(Succ), s(Zero), s(Zero)],
    }
}

const HORNER_PREFIX: [u8; 7] = [Symbol::Plus as u8, Symbol::Times as u8, S, S, S, S, Z];

/// Code digits of the efficient numeral of `x`.
pub fn efficient_digits(x: &BigUint) -> Vec<u8> {
    let ds = if x.is_zero() { vec![0] } else { x.to_radix_be(4) };
    let m = ds.len();
    let mut out = Vec::with_capacity(7 * (m - 1) + 6 * m);
    for _ in 1..m {
        out.extend_from_slice(&HORNER_PREFIX);
    }
    for d in ds {
        out.extend_from_slice(&digit_block(d));
    }
    out
}

fn is_bit(d: u8) -> bool {
    d == Symbol::Bit0 as u8 || d == Symbol::Bit1 as u8
}

/// Whether an occurrence of the variable `a` (the bare `VAR`) starts at `p`.
pub(crate) fn var_a_at(d: &[u8], p: usize) -> bool {
    d[p] == VAR && (p == 0 || !is_bit(d[p - 1]))
}

/// Replaces every occurrence of the variable `a` in `d` by `t`.
pub fn subst_a(d: &[u8], t: &[u8]) -> Vec<u8> {
    let hits = (0..d.len()).filter(|&p| var_a_at(d, p)).count();
    let mut out = Vec::with_capacity(d.len() + hits * t.len());
    for (p, &x) in d.iter().enumerate() {
        if var_a_at(d, p) {
            out.extend_from_slice(t);
        } else {
            out.push(x);
        }
    }
    out
}

/// Diagonalization on digits: `a := efficient numeral of the code itself`.
pub fn diag_digits(d: &[u8]) -> Vec<u8> {
    let me = coding::pack_digits(d);
    subst_a(d, &efficient_digits(&me))
}

fn arity(d: u8) -> i64 {
    Symbol::from_digit(d).map_or(0, |s| s.arity() as i64)
}

/// `expr_end` on digits, clipped like the library function.
pub(crate) fn expr_end(d: &[u8], i: usize) -> usize {
    let mut sum = 0i64;
    for m in 1..=d.len() {
        let k = i.saturating_add(m - 1);
        sum += d.get(k).map_or(0, |&x| arity(x));
        if sum + 1 == m as i64 {
            return i + m;
        }
    }
    i.saturating_add(d.len() + 1)
}

fn sub(d: &[u8], i: usize, j: usize) -> &[u8] {
    let i = i.min(d.len());
    let j = j.min(d.len() - i);
    &d[i..i + j]
}

/// Whether the encoded policy `m` negates the stage with code `g`: bit 0
/// is the default, bit `g + 1` flips it, and the highest bit is a sentinel.
pub fn policy_neg(g: usize, m: &BigUint) -> bool {
    let g = g as u64;
    m.bit(0) ^ (m.bit(g + 1) && m.bits() >= g + 3)
}

/// The encoded policy `m` restricted to exceptions at stages below the one
/// with code `g`. The default bit and the sentinel stay.
pub fn mask_policy(m: &BigUint, g: &BigUint) -> BigUint {
    let mut out = m.clone();
    for i in 1..m.bits().saturating_sub(1) {
        if m.bit(i) {
            let h = BigUint::from(i - 1);
            if !(code_canonical(&h) && code_cmp(&h, g) == Ordering::Less) {
                out.set_bit(i, false);
            }
        }
    }
    out
}

/// The host code `a` with both stage numerals replaced by `S^g 0` and both
/// policy numerals by the efficient numeral of `m`.
pub fn splice_digits(a: &[u8], g: usize, m: &BigUint) -> Vec<u8> {
    let e1 = expr_end(a, NUM1_AT);
    let p1 = e1 + PNUM_FROM_NUM_END;
    let e2 = expr_end(a, p1);
    let n2 = expr_end(a, LEFT_AT) + NUM2_FROM_LEFT_END;
    let e3 = expr_end(a, n2);
    let p2 = e3 + PNUM_FROM_NUM_END;
    let e4 = expr_end(a, p2);
    let num = unary_digits(g);
    let pol = efficient_digits(m);
    let mut out = Vec::with_capacity(a.len() + 2 * g + 2 * pol.len());
    out.extend_from_slice(sub(a, 0, NUM1_AT));
    out.extend_from_slice(&num);
    out.extend_from_slice(sub(a, e1, p1.saturating_sub(e1)));
    out.extend_from_slice(&pol);
    out.extend_from_slice(sub(a, e2, n2.saturating_sub(e2)));
    out.extend_from_slice(&num);
    out.extend_from_slice(sub(a, e3, p2.saturating_sub(e3)));
    out.extend_from_slice(&pol);
    out.extend_from_slice(sub(a, e4, a.len()));
    out
}

/// `TAG NOT` followed by the code without its tag.
pub fn neg_digits(q: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(q.len() + 1);
    out.push(TAG_F);
    out.push(NOT);
    out.extend_from_slice(sub(q, 1, q.len()));
    out
}

/// Digits of the stage axiom for `g`, computed from the host code `a` of
/// any stage above it, whose policy numeral is `m`.
pub fn qtilde_digits(g: usize, a: &[u8], m: &BigUint) -> Vec<u8> {
    let q = diag_digits(&splice_digits(a, g, &mask_policy(m, &BigUint::from(g))));
    if policy_neg(g, m) {
        neg_digits(&q)
    } else {
        q
    }
}
