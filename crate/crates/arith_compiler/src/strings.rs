//! Operations on codes read as symbol strings (bijective base 32).
//!
//! Every function is total: positions past the end read as digit 0, and
//! out-of-range substrings are clipped. Natives mirror the bodies exactly,
//! including on malformed input.

use coding::{pack_digits, repunit, unpack_digits, Symbol};
use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::arith::*;
use crate::build::*;
use crate::lib_fn;

fn n(v: usize) -> BigUint {
    BigUint::from(v)
}

fn idx(v: &BigUint) -> usize {
    v.to_usize().unwrap_or(usize::MAX)
}

fn digits(x: &BigUint) -> Vec<u8> {
    unpack_digits(x)
}

fn digit_at(d: &[u8], i: usize) -> u8 {
    d.get(i).copied().unwrap_or(0)
}

/// Arity of symbol digit `s`; 0 for digits outside the table.
pub fn arity_of(s: u8) -> u8 {
    Symbol::from_digit(s).map_or(0, |x| x.arity() as u8)
}

fn arity_table() -> BigUint {
    // base-4 digits: entry d is the arity of symbol digit d
    let mut t = BigUint::zero();
    for d in (0..=32u8).rev() {
        t = t * 4u32 + arity_of(d) as u32;
    }
    t
}

fn min2(a: Pr, b: Pr) -> Pr {
    call(&monus(), &[a.clone(), call(&monus(), &[a, b])])
}

lib_fn!(
    /// `32^n`.
    pow32, 1, Some(|a| BigUint::from(32u32).pow(a[0].to_u32().expect("exponent beyond u32"))), None,
    |c| call(&pow(), &[c.num(32), c.arg(0)])
);

lib_fn!(
    /// Smallest code of length `n`: `(32^n - 1) / 31`.
    rep, 1, Some(|a| repunit(idx(&a[0]))), None,
    |c| call(&div(), &[call(&monus(), &[call(&pow32(), &[c.arg(0)]), c.num(1)]), c.num(31)])
);

lib_fn!(
    /// Number of symbols.
    len, 1, Some(|a| n(coding::code_len(&a[0]))), None,
    |_c| search(call(&lt_c(), &[proj(2, 1), call(&rep(), &[call(&succ(), &[proj(2, 0)])])]), proj(1, 0))
);

lib_fn!(
    /// Plain base-32 value of the digits minus one, given the length.
    raw_n, 2, Some(|a| &a[0] - repunit(idx(&a[1]))), None,
    |c| call(&monus(), &[c.arg(0), call(&rep(), &[c.arg(1)])])
);

lib_fn!(
    /// Digit `i` (from the left, from 0) of `x`, given `n = len(x)`.
    digit_n, 3,
    Some(|a| {
        let d = digits(&a[0]);
        BigUint::from(digit_at(&d, idx(&a[1])))
    }),
    None,
    |c| {
        let (x, i, len) = (c.arg(0), c.arg(1), c.arg(2));
        let shift = call(&pow32(), &[call(&monus(), &[len.clone(), call(&succ(), &[i.clone()])])]);
        let d = call(&succ(), &[call(&modulo(), &[call(&div(), &[call(&raw_n(), &[x, len.clone()]), shift]), c.num(32)])]);
        call(&cond(), &[call(&lt_c(), &[i, len]), d, c.num(0)])
    }
);

lib_fn!(
    /// Digit `i` of `x`, or 0 past the end.
    digit, 2,
    Some(|a| BigUint::from(digit_at(&digits(&a[0]), idx(&a[1])))),
    None,
    |c| call(&digit_n(), &[c.arg(0), c.arg(1), call(&len(), &[c.arg(0)])])
);

lib_fn!(
    /// Concatenation: `x * 32^len(y) + y`.
    cat, 2,
    Some(|a| {
        let mut d = digits(&a[0]);
        d.extend(digits(&a[1]));
        pack_digits(&d)
    }),
    None,
    |c| call(&add(), &[call(&mult(), &[c.arg(0), call(&pow32(), &[call(&len(), &[c.arg(1)])])]), c.arg(1)])
);

fn substring(x: &BigUint, i: &BigUint, j: &BigUint) -> BigUint {
    let d = digits(x);
    let i = idx(i).min(d.len());
    let j = idx(j).min(d.len() - i);
    pack_digits(&d[i..i + j])
}

lib_fn!(
    /// Substring of raw value `r` and length `n` at `i` of length `j`,
    /// assuming `i + j <= n`.
    sub_core, 4, None, None,
    |c| {
        let (r, len, i, j) = (c.arg(0), c.arg(1), c.arg(2), c.arg(3));
        let shift = call(&pow32(), &[call(&monus(), &[len, call(&add(), &[i, j.clone()])])]);
        call(
            &add(),
            &[call(&rep(), &[j.clone()]), call(&modulo(), &[call(&div(), &[r, shift]), call(&pow32(), &[j])])],
        )
    }
);

lib_fn!(
    /// `sub_n` with the start already clipped.
    sub_clipped, 4, None, None,
    |c| {
        let (x, i, j, len) = (c.arg(0), c.arg(1), c.arg(2), c.arg(3));
        let j2 = min2(j, call(&monus(), &[len.clone(), i.clone()]));
        call(&sub_core(), &[call(&raw_n(), &[x, len.clone()]), len, i, j2])
    }
);

lib_fn!(
    /// Substring given `n = len(x)`.
    sub_n, 4, Some(|a| substring(&a[0], &a[1], &a[2])), None,
    |c| {
        let (x, i, j, len) = (c.arg(0), c.arg(1), c.arg(2), c.arg(3));
        call(&sub_clipped(), &[x, min2(i, len.clone()), j, len])
    }
);

lib_fn!(
    /// The `j` symbols of `x` starting at `i`, clipped to the string.
    sub, 3, Some(|a| substring(&a[0], &a[1], &a[2])), None,
    |c| call(&sub_n(), &[c.arg(0), c.arg(1), c.arg(2), call(&len(), &[c.arg(0)])])
);

lib_fn!(
    /// Arity of the symbol with digit `s`.
    arity, 1, Some(|a| BigUint::from(a[0].to_u8().map_or(0, arity_of))), None,
    |c| call(&modulo(), &[call(&div(), &[c.big(&arity_table()), call(&pow(), &[c.num(4), c.arg(0)])]), c.num(4)])
);

lib_fn!(
    /// Sum of the arities of the `m` symbols of `x` from position `i`.
    arity_sum, 3, None, None,
    |_c| rec(
        zero(2),
        call(
            &add(),
            &[proj(4, 1), call(&arity(), &[call(&digit(), &[proj(4, 2), call(&add(), &[proj(4, 3), proj(4, 0)])])])]
        )
    )
);

/// End offset past the expression at `i`, or `i + len + 1` if none ends.
fn expr_end_digits(d: &[u8], i: usize) -> usize {
    let mut sum = 0i64;
    for m in 1..=d.len() {
        let k = i.saturating_add(m - 1);
        sum += arity_of(digit_at(d, k)) as i64;
        if sum + 1 == m as i64 {
            return i + m;
        }
    }
    i.saturating_add(d.len() + 1)
}

fn expr_end_native(a: &[BigUint]) -> BigUint {
    let d = digits(&a[0]);
    let i = idx(&a[1]);
    if i >= d.len() {
        // every symbol past the end reads as 0, whose arity is 0
        return &a[1] + 1u32;
    }
    n(expr_end_digits(&d, i))
}

lib_fn!(
    /// Position just past the expression starting at `i` (counter scan).
    /// If no expression ends within `len(x)` symbols: `i + len(x) + 1`.
    expr_end, 2, Some(expr_end_native), None,
    |c| {
        let m = proj(3, 0);
        let found = call(
            &and_c(),
            &[
                call(&sg(), &[m.clone()]),
                call(&eq_c(), &[call(&succ(), &[call(&arity_sum(), &[m.clone(), proj(3, 1), proj(3, 2)])]), m]),
            ],
        );
        call(&add(), &[c.arg(1), call(&search(found, call(&len(), &[proj(2, 0)])), &[c.arg(0), c.arg(1)])])
    }
);

lib_fn!(
    /// The expression starting at position `i`.
    expr_at, 2,
    Some(|a| {
        let e = expr_end_native(a);
        let j = if e > a[1] { &e - &a[1] } else { BigUint::zero() };
        substring(&a[0], &a[1], &j)
    }),
    None,
    |c| call(&sub(), &[c.arg(0), c.arg(1), call(&monus(), &[call(&expr_end(), &[c.arg(0), c.arg(1)]), c.arg(1)])])
);

fn is_bit_digit(d: u8) -> bool {
    d == Symbol::Bit0.digit() || d == Symbol::Bit1.digit()
}

lib_fn!(
    /// 1 for `BIT0` and `BIT1`.
    is_bit, 1, Some(|a| BigUint::from(a[0].to_u8().is_some_and(is_bit_digit) as u8)), None,
    |c| call(
        &or_c(),
        &[
            call(&eq_c(), &[c.arg(0), c.num(Symbol::Bit0.digit() as u64)]),
            call(&eq_c(), &[c.arg(0), c.num(Symbol::Bit1.digit() as u64)]),
        ]
    )
);

fn var_start_native(d: &[u8], p: usize) -> bool {
    let s = digit_at(d, p);
    (s == Symbol::Var.digit() || is_bit_digit(s)) && (p == 0 || !is_bit_digit(digit_at(d, p - 1)))
}

lib_fn!(
    /// 1 if a variable starts at position `p` of `x`.
    var_start, 2,
    Some(|a| BigUint::from(var_start_native(&digits(&a[0]), idx(&a[1])) as u8)),
    None,
    |c| {
        let d = call(&digit(), &[c.arg(0), c.arg(1)]);
        let prev = call(&digit(), &[c.arg(0), call(&pred(), &[c.arg(1)])]);
        call(
            &and_c(),
            &[
                call(&or_c(), &[call(&eq_c(), &[d.clone(), c.num(Symbol::Var.digit() as u64)]), call(&is_bit(), &[d])]),
                call(&or_c(), &[call(&nsg(), &[c.arg(1)]), call(&nsg(), &[call(&is_bit(), &[prev])])]),
            ],
        )
    }
);

/// Whether the variable string `v` occurs at position `p` of `d`.
fn occ_native(d: &[u8], v: &[u8], p: usize) -> bool {
    if !var_start_native(d, p) {
        return false;
    }
    let e = expr_end_digits(d, p).min(d.len());
    &d[p.min(d.len())..e.max(p.min(d.len()))] == v
}

lib_fn!(
    /// 1 if the variable `v` occurs at position `p` of `x`.
    occ_at, 3,
    Some(|a| BigUint::from(occ_native(&digits(&a[0]), &digits(&a[1]), idx(&a[2])) as u8)),
    None,
    |c| call(
        &and_c(),
        &[
            call(&var_start(), &[c.arg(0), c.arg(2)]),
            call(&eq_c(), &[call(&expr_at(), &[c.arg(0), c.arg(2)]), c.arg(1)]),
        ]
    )
);

fn occurs_native(d: &[u8], v: &[u8]) -> bool {
    (0..d.len()).any(|p| occ_native(d, v, p))
}

lib_fn!(
    /// 1 if the variable `v` occurs anywhere in `x`, bound or free.
    occurs_var, 2,
    Some(|a| BigUint::from(occurs_native(&digits(&a[0]), &digits(&a[1])) as u8)),
    None,
    |c| {
        let hit = search(call(&occ_at(), &[proj(3, 1), proj(3, 2), proj(3, 0)]), call(&len(), &[proj(2, 0)]));
        call(&le_c(), &[call(&hit, &[c.arg(0), c.arg(1)]), call(&len(), &[c.arg(0)])])
    }
);

fn is_quant_digit(d: u8) -> bool {
    d == Symbol::ForAll.digit() || d == Symbol::Exists.digit()
}

lib_fn!(
    /// 1 for `ALL` and `EX`.
    is_quant, 1, Some(|a| BigUint::from(a[0].to_u8().is_some_and(is_quant_digit) as u8)), None,
    |c| call(
        &or_c(),
        &[
            call(&eq_c(), &[c.arg(0), c.num(Symbol::ForAll.digit() as u64)]),
            call(&eq_c(), &[c.arg(0), c.num(Symbol::Exists.digit() as u64)]),
        ]
    )
);

/// Variables bound by quantifiers of `d`, as digit strings.
fn binders(d: &[u8]) -> Vec<Vec<u8>> {
    let code = pack_digits(d);
    (0..d.len())
        .filter(|&p| is_quant_digit(d[p]))
        .map(|p| digits(&crate::ir::eval_pr(&expr_at(), &[code.clone(), n(p + 1)]).expect("arity")))
        .collect()
}

lib_fn!(
    /// 1 if `x` has a quantifier binding the variable `v`.
    binds, 2,
    Some(|a| {
        let v = digits(&a[1]);
        BigUint::from(binders(&digits(&a[0])).iter().any(|b| *b == v) as u8)
    }),
    None,
    |c| {
        // p, x, v
        let q = call(
            &and_c(),
            &[
                call(&is_quant(), &[call(&digit(), &[proj(3, 1), proj(3, 0)])]),
                call(&eq_c(), &[call(&expr_at(), &[proj(3, 1), call(&succ(), &[proj(3, 0)])]), proj(3, 2)]),
            ],
        );
        let hit = search(q, call(&len(), &[proj(2, 0)]));
        call(&le_c(), &[call(&hit, &[c.arg(0), c.arg(1)]), call(&len(), &[c.arg(0)])])
    }
);

lib_fn!(
    /// 1 if some quantifier of `x` binds a variable occurring in `t`.
    binds_any_of, 2,
    Some(|a| {
        let t = digits(&a[1]);
        BigUint::from(binders(&digits(&a[0])).iter().any(|b| occurs_native(&t, b)) as u8)
    }),
    None,
    |c| {
        // p, x, t
        let q = call(
            &and_c(),
            &[
                call(&is_quant(), &[call(&digit(), &[proj(3, 1), proj(3, 0)])]),
                call(&occurs_var(), &[proj(3, 2), call(&expr_at(), &[proj(3, 1), call(&succ(), &[proj(3, 0)])])]),
            ],
        );
        let hit = search(q, call(&len(), &[proj(2, 0)]));
        call(&le_c(), &[call(&hit, &[c.arg(0), c.arg(1)]), call(&len(), &[c.arg(0)])])
    }
);

lib_fn!(
    /// 1 if substituting `t` for `x` in `a` needs no renaming: `x` is not
    /// bound in `a` and no variable of `t` is.
    substitutable, 3,
    Some(|a| {
        let bs = binders(&digits(&a[0]));
        let (x, t) = (digits(&a[1]), digits(&a[2]));
        BigUint::from(!bs.iter().any(|b| *b == x || occurs_native(&t, b)) as u8)
    }),
    None,
    |c| call(
        &and_c(),
        &[
            call(&nsg(), &[call(&binds(), &[c.arg(0), c.arg(1)])]),
            call(&nsg(), &[call(&binds_any_of(), &[c.arg(0), c.arg(2)])]),
        ]
    )
);

lib_fn!(
    /// 1 if position `p` lies inside an occurrence of `v` in `x`.
    covered, 3, None, None,
    |c| {
        // q, x, v, p
        let q = call(
            &and_c(),
            &[
                call(&occ_at(), &[proj(4, 1), proj(4, 2), proj(4, 0)]),
                call(&lt_c(), &[proj(4, 3), call(&add(), &[proj(4, 0), call(&len(), &[proj(4, 2)])])]),
            ],
        );
        let hit = search(q, proj(3, 2));
        call(&le_c(), &[call(&hit, &[c.arg(0), c.arg(1), c.arg(2)]), c.arg(2)])
    }
);

fn subst_native(a: &[BigUint]) -> BigUint {
    let d = digits(&a[0]);
    let v = digits(&a[1]);
    let t = digits(&a[2]);
    let mut out = Vec::with_capacity(d.len());
    let mut p = 0;
    while p < d.len() {
        if occ_native(&d, &v, p) {
            out.extend_from_slice(&t);
            p += v.len();
        } else {
            out.push(d[p]);
            p += 1;
        }
    }
    pack_digits(&out)
}

lib_fn!(
    /// Replaces every occurrence of the variable `v` in `x` by `t`.
    subst, 3, Some(subst_native), None,
    |c| {
        // step(p, out, x, v, t)
        let (p, out, x, v, t) = (proj(5, 0), proj(5, 1), proj(5, 2), proj(5, 3), proj(5, 4));
        let keep = call(&cond(), &[call(&covered(), &[x.clone(), v.clone(), p.clone()]), konst(5, 0u32), call(&digit(), &[x.clone(), p.clone()])]);
        let emit = call(&cond(), &[call(&occ_at(), &[x, v, p]), t, keep]);
        let h = rec(zero(3), call(&cat(), &[out, emit]));
        call(&h, &[call(&len(), &[c.arg(0)]), c.arg(0), c.arg(1), c.arg(2)])
    }
);

/// Code of the one-symbol string `s`.
pub fn sym(s: Symbol) -> BigUint {
    BigUint::from(s.digit())
}

/// Code of a symbol string.
pub fn syms(s: &[Symbol]) -> BigUint {
    pack_digits(&s.iter().map(|x| x.digit()).collect::<Vec<_>>())
}
