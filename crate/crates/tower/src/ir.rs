//! The stage functions as primitive-recursive IR.
//!
//! The axiom decider of a stage with ordinal code `o` takes the stage's own
//! host code `a` and the encoded sign policy `m` as parameters. It
//! recomputes every earlier stage axiom from `a` by replacing the stage
//! numerals and diagonalizing, so no stage axiom is embedded as a constant.

use std::cmp::Ordering;

use arith_compiler::arith::*;
use arith_compiler::build::*;
use arith_compiler::checker::{neg_code, stage0_decider};
use arith_compiler::lib_fn;
use arith_compiler::strings::{cat, expr_end, len, pow32, rep, sub, subst};
use coding::{pack_digits, unpack_digits};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::digits::{self, LEFT_AT, NUM1_AT, NUM2_FROM_LEFT_END, PNUM_FROM_NUM_END};

fn b(v: bool) -> BigUint {
    BigUint::from(v as u8)
}

fn small(v: &BigUint) -> usize {
    v.to_usize().expect("argument beyond the machine word")
}

/// `(x, y, z)` with `code = 1 + pair(x, pair(y, z))`, for nonzero codes.
fn parts(code: &BigUint) -> (BigUint, BigUint, BigUint) {
    let (e, inner) = ordinals::unpair(&(code - 1u32));
    let (k, rest) = ordinals::unpair(&inner);
    (e, k, rest)
}

/// Structural comparison of ordinal codes: exponent, then coefficient, then
/// the rest. Agrees with ordinal order on canonical codes.
pub fn code_cmp(x: &BigUint, y: &BigUint) -> Ordering {
    match (x.is_zero(), y.is_zero()) {
        (true, true) => Ordering::Equal,
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        _ => {
            let (ex, kx, rx) = parts(x);
            let (ey, ky, ry) = parts(y);
            code_cmp(&ex, &ey).then_with(|| kx.cmp(&ky)).then_with(|| code_cmp(&rx, &ry))
        }
    }
}

/// Whether `g` is the code of a notation in Cantor normal form.
pub fn code_canonical(g: &BigUint) -> bool {
    if g.is_zero() {
        return true;
    }
    let (e, _, r) = parts(g);
    code_canonical(&e)
        && code_canonical(&r)
        && (r.is_zero() || code_cmp(&parts(&r).0, &e) == Ordering::Less)
}

fn cmp_digit(o: Ordering) -> u8 {
    match o {
        Ordering::Less => 0,
        Ordering::Equal => 1,
        Ordering::Greater => 2,
    }
}

/// Digit `i` of `t` in base `k`.
fn digit_in(k: u64, t: Pr, i: Pr, ar: usize) -> Pr {
    call(&modulo(), &[call(&div(), &[t, call(&pow(), &[konst(ar, k), i])]), konst(ar, k)])
}

fn ife(c: Pr, t: Pr, e: Pr) -> Pr {
    call(&cond(), &[c, t, e])
}

fn eq(a: Pr, b: Pr) -> Pr {
    call(&eq_c(), &[a, b])
}

fn is0(a: Pr) -> Pr {
    call(&nsg(), &[a])
}

fn l(x: Pr) -> Pr {
    call(&unpair_l(), &[x])
}

fn r(x: Pr) -> Pr {
    call(&unpair_r(), &[x])
}

lib_fn!(
    /// One entry of the comparison table: the entry at `z = pair(x, y)`
    /// given the table `t` of all smaller entries (base 4).
    ord_cmp_step, 2, None, None,
    |c| {
        let (z, t) = (c.arg(0), c.arg(1));
        let (x, y) = (l(z.clone()), r(z));
        let (xm, ym) = (call(&pred(), &[x.clone()]), call(&pred(), &[y.clone()]));
        let at = |u: Pr, v: Pr| digit_in(4, t.clone(), call(&pair(), &[u, v]), 2);
        let ce = at(l(xm.clone()), l(ym.clone()));
        let cr = at(r(r(xm.clone())), r(r(ym.clone())));
        let (kx, ky) = (l(r(xm)), l(r(ym)));
        let ck = ife(call(&lt_c(), &[kx.clone(), ky.clone()]), c.num(0), ife(call(&lt_c(), &[ky, kx]), c.num(2), cr));
        let inner = ife(eq(ce.clone(), c.num(1)), ck, ce);
        ife(is0(x), ife(is0(y.clone()), c.num(1), c.num(0)), ife(is0(y), c.num(2), inner))
    }
);

lib_fn!(
    /// The first `n` entries of the comparison table, as base-4 digits.
    ord_cmp_table, 1, None, None,
    |_c| rec(
        zero(0),
        call(&add(), &[proj(2, 1), call(&mult(), &[call(&pow(), &[konst(2, 4u32), proj(2, 0)]), call(&ord_cmp_step(), &[proj(2, 0), proj(2, 1)])])])
    )
);

lib_fn!(
    /// Comparison of ordinal codes: 0 below, 1 equal, 2 above.
    ord_cmp, 2, Some(|a| BigUint::from(cmp_digit(code_cmp(&a[0], &a[1])))), None,
    |c| {
        let z = call(&pair(), &[c.arg(0), c.arg(1)]);
        digit_in(4, call(&ord_cmp_table(), &[call(&succ(), &[z.clone()])]), z, 2)
    }
);

lib_fn!(
    /// One entry of the canonicity table (base 2).
    canonical_step, 2, None, None,
    |c| {
        let (g, t) = (c.arg(0), c.arg(1));
        let gm = call(&pred(), &[g.clone()]);
        let (e, rest) = (l(gm.clone()), r(r(gm)));
        let bit = |i: Pr| digit_in(2, t.clone(), i, 2);
        let lead = l(call(&pred(), &[rest.clone()]));
        let decreasing = call(&or_c(), &[is0(rest.clone()), eq(call(&ord_cmp(), &[lead, e.clone()]), c.num(0))]);
        let ok = call(&and_c(), &[bit(e), call(&and_c(), &[bit(rest), decreasing])]);
        ife(is0(g), c.num(1), ok)
    }
);

lib_fn!(
    /// The first `n` entries of the canonicity table.
    canonical_table, 1, None, None,
    |_c| rec(
        zero(0),
        call(&add(), &[proj(2, 1), call(&mult(), &[call(&pow(), &[konst(2, 2u32), proj(2, 0)]), call(&canonical_step(), &[proj(2, 0), proj(2, 1)])])])
    )
);

lib_fn!(
    /// 1 if `g` is the code of a notation in Cantor normal form.
    canonical, 1, Some(|a| b(code_canonical(&a[0]))), None,
    |c| digit_in(2, call(&canonical_table(), &[call(&succ(), &[c.arg(0)])]), c.arg(0), 1)
);

lib_fn!(
    /// Code of the unary numeral `S^g 0` as a term string.
    unary, 1, Some(|a| pack_digits(&digits::unary_digits(small(&a[0])))), None,
    |c| call(&cat(), &[call(&mult(), &[c.num(digits::S as u64), call(&rep(), &[c.arg(0)])]), c.num(digits::Z as u64)])
);

lib_fn!(
    /// Number of base-4 digits of `x`, at least 1.
    base4_len, 1, Some(|a| BigUint::from(if a[0].is_zero() { 1 } else { a[0].to_radix_be(4).len() })), None,
    |c| {
        let above = call(&lt_c(), &[proj(2, 1), call(&pow(), &[konst(2, 4u32), proj(2, 0)])]);
        call(&add(), &[call(&search(above, proj(1, 0)), &[c.arg(0)]), is0(c.arg(0))])
    }
);

fn block_code(d: u8) -> BigUint {
    let x = digits::efficient_digits(&BigUint::from(d));
    pack_digits(&x)
}

lib_fn!(
    /// Code of the six-symbol digit term for base-4 digit `d`.
    digit_block, 1, None, None,
    |c| {
        let v = |d: u8| c.big(&block_code(d));
        ife(eq(c.arg(0), c.num(0)), v(0), ife(eq(c.arg(0), c.num(1)), v(1), ife(eq(c.arg(0), c.num(2)), v(2), v(3))))
    }
);

lib_fn!(
    /// The digit terms of the lowest `n` base-4 digits of `x`, most
    /// significant first.
    digit_blocks, 2, None, None,
    |_c| {
        // step(i, acc, x)
        let block = call(&digit_block(), &[digit_in(4, proj(3, 2), proj(3, 0), 3)]);
        let shift = call(&pow32(), &[call(&mult(), &[konst(3, 6u32), proj(3, 0)])]);
        rec(zero(1), call(&add(), &[proj(3, 1), call(&mult(), &[block, shift])]))
    }
);

fn horner_prefix_code() -> BigUint {
    // the numeral of 4 is one prefix followed by two digit terms
    let d = digits::efficient_digits(&BigUint::from(4u32));
    pack_digits(&d[..7])
}

lib_fn!(
    /// Code of the efficient numeral of `x`.
    efficient_numeral_code, 1, Some(|a| pack_digits(&digits::efficient_digits(&a[0]))), None,
    |c| {
        let m = call(&base4_len(), &[c.arg(0)]);
        let unit = (BigUint::from(32u32).pow(7) - 1u32).to_u64().unwrap();
        let reps = call(&div(), &[call(&monus(), &[call(&pow32(), &[call(&mult(), &[c.num(7), call(&pred(), &[m.clone()])])]), c.num(1)]), c.num(unit)]);
        let prefix = call(&mult(), &[c.big(&horner_prefix_code()), reps]);
        let shifted = call(&mult(), &[prefix, call(&pow32(), &[call(&mult(), &[c.num(6), m.clone()])])]);
        call(&add(), &[shifted, call(&digit_blocks(), &[m, c.arg(0)])])
    }
);

lib_fn!(
    /// Diagonalization: the formula code `x` with every occurrence of the
    /// variable `a` replaced by the efficient numeral of `x`. This is
    /// substitution when `a` is never bound, as in host formulas.
    diag, 1, Some(|a| pack_digits(&digits::diag_digits(&unpack_digits(&a[0])))), None,
    |c| call(&subst(), &[c.arg(0), c.num(digits::VAR as u64), call(&efficient_numeral_code(), &[c.arg(0)])])
);

fn cat_all(parts: Vec<Pr>) -> Pr {
    parts.into_iter().reduce(|acc, p| call(&cat(), &[acc, p])).expect("nonempty")
}

lib_fn!(
    /// Whether the encoded policy `m` negates the stage with code `g`.
    policy_neg, 2, Some(|a| b(digits::policy_neg(small(&a[0]), &a[1]))), None,
    |c| {
        let (g, m) = (c.arg(0), c.arg(1));
        let flip = call(&and_c(), &[digit_in(2, m.clone(), call(&succ(), &[g.clone()]), 2), call(&le_c(), &[call(&pow(), &[c.num(2), call(&add(), &[g, c.num(2)])]), m.clone()])]);
        let default = digit_in(2, m, c.num(0), 2);
        // exclusive or of two bits
        call(&monus(), &[call(&add(), &[default.clone(), flip.clone()]), call(&mult(), &[c.num(2), call(&and_c(), &[default, flip])])])
    }
);

lib_fn!(
    /// Number of binary digits of `m`.
    bit_len, 1, Some(|a| BigUint::from(a[0].bits())), None,
    |c| call(&search(call(&lt_c(), &[proj(2, 1), call(&pow(), &[konst(2, 2u32), proj(2, 0)])]), proj(1, 0)), &[c.arg(0)])
);

lib_fn!(
    /// The exception bits of `m` that [`mask_policy`] clears, below bit `n`.
    /// Arguments `(n, m, g)`.
    mask_dropped, 3, None, None,
    |_c| rec(zero(2), {
        // step(i, acc, m, g)
        let (i, acc, m, g) = (proj(4, 0), proj(4, 1), proj(4, 2), proj(4, 3));
        let h = call(&pred(), &[i.clone()]);
        let exception = call(&and_c(), &[
            call(&le_c(), &[konst(4, 1u32), i.clone()]),
            call(&and_c(), &[call(&le_c(), &[call(&pow(), &[konst(4, 2u32), call(&succ(), &[i.clone()])]), m.clone()]), digit_in(2, m, i.clone(), 4)]),
        ]);
        let below = call(&and_c(), &[call(&canonical(), &[h.clone()]), eq(call(&ord_cmp(), &[h, g]), konst(4, 0u32))]);
        let drop = call(&and_c(), &[exception, is0(below)]);
        call(&add(), &[acc, call(&mult(), &[drop, call(&pow(), &[konst(4, 2u32), i])])])
    })
);

lib_fn!(
    /// The encoded policy `m` restricted to exceptions at stages below the
    /// one with code `g`.
    mask_policy, 2, Some(|a| digits::mask_policy(&a[0], &a[1])), None,
    |c| {
        let (m, g) = (c.arg(0), c.arg(1));
        let dropped = call(&mask_dropped(), &[call(&bit_len(), &[m.clone()]), m.clone(), g]);
        call(&monus(), &[m, dropped])
    }
);

lib_fn!(
    /// The host code `a` with both stage numerals replaced by the unary
    /// numeral of `g` and both policy numerals by the efficient numeral of `m`.
    splice, 3,
    Some(|a| pack_digits(&digits::splice_digits(&unpack_digits(&a[0]), small(&a[1]), &a[2]))),
    None,
    |c| {
        let (a, g, m) = (c.arg(0), c.arg(1), c.arg(2));
        let end = |p: Pr| call(&expr_end(), &[a.clone(), p]);
        let plus = |p: Pr, k: usize| call(&add(), &[p, c.num(k as u64)]);
        let piece = |from: Pr, to: Pr| call(&sub(), &[a.clone(), from.clone(), call(&monus(), &[to, from])]);
        let e1 = end(c.num(NUM1_AT as u64));
        let p1 = plus(e1.clone(), PNUM_FROM_NUM_END);
        let e2 = end(p1.clone());
        let n2 = plus(end(c.num(LEFT_AT as u64)), NUM2_FROM_LEFT_END);
        let e3 = end(n2.clone());
        let p2 = plus(e3.clone(), PNUM_FROM_NUM_END);
        let e4 = end(p2.clone());
        let num = call(&unary(), &[g]);
        let pol = call(&efficient_numeral_code(), &[m]);
        cat_all(vec![
            call(&sub(), &[a.clone(), c.num(0), c.num(NUM1_AT as u64)]),
            num.clone(),
            piece(e1, p1),
            pol.clone(),
            piece(e2, n2),
            num,
            piece(e3, p2),
            pol,
            call(&sub(), &[a.clone(), e4, call(&len(), &[a])]),
        ])
    }
);

lib_fn!(
    /// Code of the stage axiom for `g`, from the host code `a` of a stage
    /// above it whose policy numeral is `m`.
    stage_axiom_code, 3,
    Some(|a| {
        let d = unpack_digits(&a[1]);
        pack_digits(&digits::qtilde_digits(small(&a[0]), &d, &a[2]))
    }),
    None,
    |c| {
        let (g, a, m) = (c.arg(0), c.arg(1), c.arg(2));
        let masked = call(&mask_policy(), &[m.clone(), g.clone()]);
        let q = call(&diag(), &[call(&splice(), &[a, g.clone(), masked])]);
        ife(call(&policy_neg(), &[g, m]), call(&neg_code(), &[q.clone()]), q)
    }
);

/// Count of `S` digits starting at `at`, if they end in `0`.
fn unary_run(d: &[u8], at: usize) -> Option<usize> {
    let run = d.get(at..)?.iter().take_while(|&&x| x == digits::S).count();
    (d.get(at + run) == Some(&digits::Z)).then_some(run)
}

fn stage_match(g: usize, r: &[u8], a: &[u8], o: &BigUint, m: &BigUint) -> bool {
    let gb = BigUint::from(g);
    code_canonical(&gb) && code_cmp(&gb, o) == Ordering::Less && digits::qtilde_digits(g, a, m) == r
}

/// Native for [`stage_decider`]. A candidate `g` always leaves its unary
/// numeral in the result, so `g < len(r)`, which is at most `r`. When the
/// host prefix holds no occurrence of `a`, the numeral sits at a fixed
/// place and names the only candidates directly.
fn stage_decider_native(x: &[BigUint]) -> BigUint {
    let (r, a, o, m) = (&x[0], &x[1], &x[2], &x[3]);
    if arith_compiler::eval_pr(&stage0_decider(), &[r.clone()]).expect("arity").is_one() {
        return BigUint::one();
    }
    let rd = unpack_digits(r);
    let ad = unpack_digits(a);
    let prefix_clean = ad.len() >= NUM1_AT && (0..NUM1_AT).all(|q| !digits::var_a_at(&ad, q));
    let found = if prefix_clean {
        let mut cands = Vec::new();
        if rd.get(..NUM1_AT) == Some(&ad[..NUM1_AT]) {
            cands.extend(unary_run(&rd, NUM1_AT).filter(|&g| !digits::policy_neg(g, m)));
        }
        if rd.get(..2) == Some(&[digits::TAG_F, digits::NOT][..]) && rd.get(2..NUM1_AT + 1) == Some(&ad[1..NUM1_AT]) {
            cands.extend(unary_run(&rd, NUM1_AT + 1).filter(|&g| digits::policy_neg(g, m)));
        }
        cands.into_iter().any(|g| stage_match(g, &rd, &ad, o, m))
    } else {
        (0..rd.len()).any(|g| stage_match(g, &rd, &ad, o, m))
    };
    b(found)
}

lib_fn!(
    /// Nonlogical-axiom decider of a stage: `r` is an arithmetic axiom, or
    /// the stage axiom of some `g <= r` that is canonical and below `o`.
    /// Parameters: host code `a`, stage code `o`, encoded policy `m`.
    stage_decider, 4, Some(stage_decider_native), None,
    |c| {
        // pred(g, r, a, o, m)
        let (g, rr, a, o, m) = (proj(5, 0), proj(5, 1), proj(5, 2), proj(5, 3), proj(5, 4));
        let below = eq(call(&ord_cmp(), &[g.clone(), o]), konst(5, 0u32));
        let hit = eq(call(&stage_axiom_code(), &[g.clone(), a, m]), rr);
        let pred = call(&and_c(), &[call(&canonical(), &[g]), call(&and_c(), &[below, hit])]);
        let first = call(&search(pred, proj(4, 0)), &[c.arg(0), c.arg(1), c.arg(2), c.arg(3)]);
        call(&or_c(), &[call(&stage0_decider(), &[c.arg(0)]), call(&le_c(), &[first, c.arg(0)])])
    }
);
