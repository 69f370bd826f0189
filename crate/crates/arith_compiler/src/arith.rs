//! Arithmetic library: each function has a primitive-recursive body, a
//! native implementation, and where possible a compact graph template.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use syntax::{numeral, Formula, Term, Var};

use crate::build::*;
use crate::ir::Template;
use crate::lib_fn;

fn b(v: bool) -> BigUint {
    BigUint::from(v as u32)
}

fn one() -> Term {
    numeral(1)
}

fn eq(a: &Term, b: &Term) -> Formula {
    Formula::eq(a.clone(), b.clone())
}

fn le(a: &Term, b: &Term) -> Formula {
    Formula::le(a.clone(), b.clone())
}

fn s(a: &Term) -> Term {
    Term::succ(a.clone())
}

fn plus(a: &Term, b: &Term) -> Term {
    Term::plus(a.clone(), b.clone())
}

fn times(a: &Term, b: &Term) -> Term {
    Term::times(a.clone(), b.clone())
}

fn or(a: Formula, b: Formula) -> Formula {
    Formula::or(a, b)
}

fn and(a: Formula, b: Formula) -> Formula {
    Formula::and(a, b)
}

fn not(a: Formula) -> Formula {
    Formula::not(a)
}

/// `(c & o = 1) | (~c & o = 0)` for a test `c` with negation `nc`.
fn boolean(c: Formula, nc: Formula, o: &Term) -> Formula {
    or(and(c, eq(o, &one())), and(nc, eq(o, &Term::zero())))
}

fn bounded_exists(v: Var, bound: &Term, body: Formula) -> Formula {
    Formula::exists(v, and(le(&Term::var(v), bound), body))
}

lib_fn!(
    /// `x + y`.
    add, 2, Some(|a| &a[0] + &a[1]), Some(Template::Term(|t| plus(&t[0], &t[1]))),
    |_c| rec(proj(1, 0), call(&succ(), &[proj(3, 1)]))
);

lib_fn!(
    /// `x * y`.
    mult, 2, Some(|a| &a[0] * &a[1]), Some(Template::Term(|t| times(&t[0], &t[1]))),
    |_c| rec(zero(1), call(&add(), &[proj(3, 1), proj(3, 2)]))
);

lib_fn!(
    /// Predecessor, with `pred(0) = 0`.
    pred, 1,
    Some(|a| if a[0].is_zero() { BigUint::zero() } else { &a[0] - 1u32 }),
    Some(Template::Graph(|t, o, _| or(eq(&t[0], &s(o)), and(eq(&t[0], &Term::zero()), eq(o, &Term::zero()))))),
    |_c| rec(zero(0), proj(2, 0))
);

fn monus_by() -> Pr {
    // h(n, x) = x - n
    rec(proj(1, 0), call(&pred(), &[proj(3, 1)]))
}

lib_fn!(
    /// Truncated subtraction.
    monus, 2,
    Some(|a| if a[0] > a[1] { &a[0] - &a[1] } else { BigUint::zero() }),
    Some(Template::Graph(|t, o, _| or(eq(&t[0], &plus(&t[1], o)), and(le(&t[0], &t[1]), eq(o, &Term::zero()))))),
    |c| call(&monus_by(), &[c.arg(1), c.arg(0)])
);

lib_fn!(
    /// 1 if `x > 0`, else 0.
    sg, 1, Some(|a| b(!a[0].is_zero())),
    Some(Template::Graph(|t, o, _| boolean(not(eq(&t[0], &Term::zero())), eq(&t[0], &Term::zero()), o))),
    |_c| rec(zero(0), konst(2, 1u32))
);

lib_fn!(
    /// 1 if `x = 0`, else 0.
    nsg, 1, Some(|a| b(a[0].is_zero())),
    Some(Template::Graph(|t, o, _| boolean(eq(&t[0], &Term::zero()), not(eq(&t[0], &Term::zero())), o))),
    |_c| rec(konst(0, 1u32), zero(2))
);

lib_fn!(
    /// Characteristic function of `x = y`.
    eq_c, 2, Some(|a| b(a[0] == a[1])),
    Some(Template::Graph(|t, o, _| boolean(eq(&t[0], &t[1]), not(eq(&t[0], &t[1])), o))),
    |c| call(&nsg(), &[call(&add(), &[call(&monus(), &[c.arg(0), c.arg(1)]), call(&monus(), &[c.arg(1), c.arg(0)])])])
);

lib_fn!(
    /// Characteristic function of `x < y`.
    lt_c, 2, Some(|a| b(a[0] < a[1])),
    Some(Template::Graph(|t, o, _| boolean(le(&s(&t[0]), &t[1]), le(&t[1], &t[0]), o))),
    |c| call(&sg(), &[call(&monus(), &[c.arg(1), c.arg(0)])])
);

lib_fn!(
    /// Characteristic function of `x <= y`.
    le_c, 2, Some(|a| b(a[0] <= a[1])),
    Some(Template::Graph(|t, o, _| boolean(le(&t[0], &t[1]), le(&s(&t[1]), &t[0]), o))),
    |c| call(&nsg(), &[call(&monus(), &[c.arg(0), c.arg(1)])])
);

lib_fn!(
    /// `if c != 0 then x else y`.
    cond, 3, Some(|a| if a[0].is_zero() { a[2].clone() } else { a[1].clone() }),
    Some(Template::Graph(|t, o, _| {
        let z = Term::zero();
        or(and(not(eq(&t[0], &z)), eq(o, &t[1])), and(eq(&t[0], &z), eq(o, &t[2])))
    })),
    |c| call(
        &add(),
        &[
            call(&mult(), &[c.arg(1), call(&sg(), &[c.arg(0)])]),
            call(&mult(), &[c.arg(2), call(&nsg(), &[c.arg(0)])]),
        ]
    )
);

lib_fn!(
    /// Boolean conjunction of truth values (nonzero is true).
    and_c, 2, Some(|a| b(!a[0].is_zero() && !a[1].is_zero())),
    Some(Template::Graph(|t, o, _| {
        let z = Term::zero();
        boolean(
            and(not(eq(&t[0], &z)), not(eq(&t[1], &z))),
            or(eq(&t[0], &z), eq(&t[1], &z)),
            o,
        )
    })),
    |c| call(&sg(), &[call(&mult(), &[c.arg(0), c.arg(1)])])
);

lib_fn!(
    /// Boolean disjunction of truth values.
    or_c, 2, Some(|a| b(!a[0].is_zero() || !a[1].is_zero())),
    Some(Template::Graph(|t, o, _| {
        let z = Term::zero();
        boolean(
            or(not(eq(&t[0], &z)), not(eq(&t[1], &z))),
            and(eq(&t[0], &z), eq(&t[1], &z)),
            o,
        )
    })),
    |c| call(&sg(), &[call(&add(), &[c.arg(0), c.arg(1)])])
);

lib_fn!(
    /// Quotient; `div(x, 0) = x + 1` (the search falls through).
    div, 2,
    Some(|a| if a[1].is_zero() { &a[0] + 1u32 } else { &a[0] / &a[1] }),
    Some(Template::Graph(|t, o, _| {
        let (x, y) = (&t[0], &t[1]);
        let z = Term::zero();
        or(
            and(not(eq(y, &z)), and(le(&times(o, y), x), le(&s(x), &times(&s(o), y)))),
            and(eq(y, &z), eq(o, &s(x))),
        )
    })),
    |_c| search(
        call(&lt_c(), &[proj(3, 1), call(&mult(), &[call(&succ(), &[proj(3, 0)]), proj(3, 2)])]),
        proj(2, 0)
    )
);

lib_fn!(
    /// Remainder; `modulo(x, 0) = x`.
    modulo, 2,
    Some(|a| if a[1].is_zero() { a[0].clone() } else { &a[0] % &a[1] }),
    Some(Template::Graph(|t, o, v| {
        let (x, y) = (&t[0], &t[1]);
        let z = Term::zero();
        let q = Term::var(v);
        or(
            and(not(eq(y, &z)), and(le(&s(o), y), bounded_exists(v, x, eq(x, &plus(&times(&q, y), o))))),
            and(eq(y, &z), eq(o, x)),
        )
    })),
    |c| call(&monus(), &[c.arg(0), call(&mult(), &[c.arg(1), call(&div(), &[c.arg(0), c.arg(1)])])])
);

lib_fn!(
    /// `x ^ y`.
    pow, 2,
    Some(|a| {
        let e = a[1].to_u32().expect("exponent beyond u32 is not evaluable");
        a[0].pow(e)
    }),
    None,
    |c| call(&rec(konst(1, 1u32), call(&mult(), &[proj(3, 1), proj(3, 2)])), &[c.arg(1), c.arg(0)])
);

lib_fn!(
    /// Triangular number `0 + 1 + ... + n`.
    tri, 1, Some(|a| (&a[0] * (&a[0] + 1u32)) >> 1),
    Some(Template::Graph(|t, o, _| eq(&plus(o, o), &times(&t[0], &s(&t[0]))))),
    |_c| rec(zero(0), call(&add(), &[proj(2, 1), call(&succ(), &[proj(2, 0)])]))
);

pub fn cantor_pair(x: &BigUint, y: &BigUint) -> BigUint {
    let s = x + y;
    ((&s * (&s + 1u32)) >> 1) + y
}

pub fn cantor_unpair(z: &BigUint) -> (BigUint, BigUint) {
    // w = floor((sqrt(8z + 1) - 1) / 2)
    let r: BigUint = (z << 3u32) + 1u32;
    let w = (r.sqrt() - 1u32) >> 1u32;
    let t = (&w * (&w + 1u32)) >> 1;
    let y = z - t;
    (&w - &y, y)
}

fn pair_graph(x: &Term, y: &Term, z: &Term) -> Formula {
    let sum = plus(x, y);
    eq(&plus(z, z), &plus(&times(&sum, &s(&sum)), &plus(y, y)))
}

lib_fn!(
    /// Cantor pairing `(x + y)(x + y + 1)/2 + y`.
    pair, 2, Some(|a| cantor_pair(&a[0], &a[1])),
    Some(Template::Graph(|t, o, _| pair_graph(&t[0], &t[1], o))),
    |c| call(&add(), &[call(&tri(), &[call(&add(), &[c.arg(0), c.arg(1)])]), c.arg(1)])
);

lib_fn!(
    /// Diagonal index of `z`: the largest `w` with `tri(w) <= z`.
    diag_index, 1, Some(|a| cantor_unpair(&a[0]).0 + cantor_unpair(&a[0]).1), None,
    |_c| search(call(&lt_c(), &[proj(2, 1), call(&tri(), &[call(&succ(), &[proj(2, 0)])])]), proj(1, 0))
);

lib_fn!(
    /// Second component of the pair coded by `z`.
    unpair_r, 1, Some(|a| cantor_unpair(&a[0]).1),
    Some(Template::Graph(|t, o, v| bounded_exists(v, &t[0], pair_graph(&Term::var(v), o, &t[0])))),
    |c| call(&monus(), &[c.arg(0), call(&tri(), &[call(&diag_index(), &[c.arg(0)])])])
);

lib_fn!(
    /// First component of the pair coded by `z`.
    unpair_l, 1, Some(|a| cantor_unpair(&a[0]).0),
    Some(Template::Graph(|t, o, v| bounded_exists(v, &t[0], pair_graph(o, &Term::var(v), &t[0])))),
    |c| call(&monus(), &[call(&diag_index(), &[c.arg(0)]), call(&unpair_r(), &[c.arg(0)])])
);

lib_fn!(
    /// 1 if `d` divides `x` (with `0 | 0`).
    divides, 2, Some(|a| b(if a[0].is_zero() { a[1].is_zero() } else { a[1].is_multiple_of(&a[0]) })), None,
    |c| call(
        &le_c(),
        &[
            search(call(&eq_c(), &[call(&mult(), &[proj(3, 0), proj(3, 1)]), proj(3, 2)]), proj(2, 1)),
            c.arg(1),
        ]
    )
);

fn is_prime(n: &BigUint) -> bool {
    let n = n.to_u64().expect("primality beyond u64");
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

lib_fn!(
    /// 1 if `x` is prime, by bounded search for a proper divisor.
    prime, 1, Some(|a| b(is_prime(&a[0]))), None,
    |c| {
        // has_divisor(x) = least d <= x with 2 <= d < x and d | x, else x + 1
        let z = proj(2, 0);
        let x = proj(2, 1);
        let cand = call(
            &and_c(),
            &[
                call(&le_c(), &[konst(2, 2u32), z.clone()]),
                call(&and_c(), &[call(&lt_c(), &[z.clone(), x.clone()]), call(&divides(), &[z, x])]),
            ],
        );
        let first = search(cand, proj(1, 0));
        call(
            &and_c(),
            &[call(&le_c(), &[c.num(2), c.arg(0)]), call(&lt_c(), &[c.arg(0), first])],
        )
    }
);
