//! The proof predicate as a primitive-recursive function on codes.
//!
//! `proof_predicate_pr(dec)` has arity `2 + p` for a nonlogical-axiom
//! decider `dec` of arity `1 + p`: `pp(a, b, ps..)` is 1 iff `a` is a formula
//! code, `b` is a proof code, and the decoded proof checks against the
//! decoded formula with `dec(code, ps..)` deciding nonlogical axioms. It
//! agrees with decoding followed by `calculus::check_proof` on every input.
//!
//! Well-formedness is a table-driven stack automaton that reads a code left
//! to right, mirroring the decoder's typing rules exactly.

use std::collections::HashSet;
use std::sync::OnceLock;

use coding::{encode_formula, unpack_digits, Symbol};
use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::arith::*;
use crate::build::*;
use crate::lib_fn;
use crate::strings::*;

/// Expected categories on the automaton stack (base-32 digits). Digit 1 is
/// the bottom marker and 0 the dead state.
mod cat {
    pub const TERM: u8 = 2;
    pub const FORMULA: u8 = 3;
    pub const VAR: u8 = 4;
    pub const VAR_TAIL: u8 = 5;
    pub const NAT: u8 = 6;
    pub const NAT_TAIL: u8 = 7;
    pub const ITEMS: u8 = 8;
    pub const ITEM: u8 = 9;
    pub const STEPS: u8 = 10;
    pub const STEP: u8 = 11;
    pub const JUST: u8 = 12;
    // schema numbers 1..=16: `Z*` have read `1` then only zeros, `G*` have
    // read a later one; the suffix is the number of bits read
    pub const SCHEMA: u8 = 13;
    pub const Z1: u8 = 14;
    pub const Z2: u8 = 15;
    pub const Z3: u8 = 16;
    pub const Z4: u8 = 17;
    pub const Z5: u8 = 18;
    pub const G2: u8 = 19;
    pub const G3: u8 = 20;
    pub const G4: u8 = 21;
}

/// Categories replacing `top` after reading digit `s`, deepest first; `None`
/// rejects.
fn transition(top: u8, s: u8) -> Option<&'static [u8]> {
    use cat::*;
    use Symbol as S;
    let s = Symbol::from_digit(s)?;
    Some(match (top, s) {
        (TERM, S::Zero) | (TERM, S::Var) => &[],
        (TERM, S::Succ) => &[TERM],
        (TERM, S::Plus | S::Times) => &[TERM, TERM],
        (TERM, S::Bit1) => &[VAR_TAIL],
        (FORMULA, S::Eq | S::Le) => &[TERM, TERM],
        (FORMULA, S::Not) => &[FORMULA],
        (FORMULA, S::Or | S::And | S::Implies) => &[FORMULA, FORMULA],
        (FORMULA, S::ForAll | S::Exists) => &[FORMULA, VAR],
        (VAR, S::Var) => &[],
        (VAR, S::Bit1) => &[VAR_TAIL],
        (VAR_TAIL, S::Bit0 | S::Bit1) => &[VAR_TAIL],
        (VAR_TAIL, S::Var) => &[],
        (NAT, S::Nat) => &[],
        (NAT, S::Bit1) => &[NAT_TAIL],
        (NAT_TAIL, S::Bit0 | S::Bit1) => &[NAT_TAIL],
        (NAT_TAIL, S::Nat) => &[],
        (ITEMS, S::Nil) => &[],
        (ITEMS, S::Cons) => &[ITEMS, ITEM],
        (ITEM, S::TagTerm) => &[TERM],
        (ITEM, S::TagFormula) => &[FORMULA],
        (ITEM, S::Var) => &[],
        (ITEM, S::Bit1) => &[VAR_TAIL],
        (STEPS, S::Nil) => &[],
        (STEPS, S::Cons) => &[STEPS, STEP],
        (STEP, S::Step) => &[JUST, FORMULA],
        (JUST, S::AxiomNonLogical) => &[],
        (JUST, S::AxiomLogical) => &[ITEMS, SCHEMA],
        (SCHEMA, S::Bit1) => &[Z1],
        (Z1, S::Bit0) => &[Z2],
        (Z1, S::Bit1) => &[G2],
        (Z2, S::Bit0) => &[Z3],
        (Z2, S::Bit1) => &[G3],
        (G2, S::Bit0 | S::Bit1) => &[G3],
        (Z3, S::Bit0) => &[Z4],
        (Z3, S::Bit1) => &[G4],
        (G3, S::Bit0 | S::Bit1) => &[G4],
        (Z4, S::Bit0) => &[Z5],
        (Z1 | Z2 | Z3 | Z4 | Z5 | G2 | G3 | G4, S::Nat) => &[],
        (JUST, S::ModusPonens) => &[NAT, NAT],
        (JUST, S::Generalization) => &[VAR, NAT],
        _ => return None,
    })
}

const STACK_BASE: u64 = 32;
const TABLE_ROW: usize = 33;
const TABLE_TOPS: usize = 22;

/// `ok + 2 * count + 8 * pushed` for one (top, digit) pair.
fn entry(top: u8, s: u8) -> u32 {
    match transition(top, s) {
        None => 0,
        Some(push) => {
            let e = push.iter().fold(0u32, |e, &c| e * STACK_BASE as u32 + c as u32);
            1 + 2 * push.len() as u32 + 8 * e
        }
    }
}

fn step_native(st: &BigUint, s: &BigUint) -> BigUint {
    let top = (st % STACK_BASE).to_u8().expect("digit");
    let push = match s.to_u8().and_then(|s| transition(top, s)) {
        Some(p) => p,
        None => return BigUint::zero(),
    };
    let mut out = st / STACK_BASE;
    for &c in push {
        out = out * STACK_BASE + c;
    }
    out
}

lib_fn!(
    /// Table entry for top category `t` and digit `s`.
    wf_entry, 2,
    Some(|a| {
        let (t, s) = (a[0].to_usize().unwrap_or(usize::MAX), a[1].to_usize().unwrap_or(usize::MAX));
        if t < TABLE_TOPS && s < TABLE_ROW {
            BigUint::from(entry(t as u8, s as u8))
        } else {
            BigUint::zero()
        }
    }),
    None,
    |c| {
        // a case split per category; digits with equal entries share a test
        (2..TABLE_TOPS as u8).rev().fold(c.num(0), |rest, top| {
            let mut groups: Vec<(u32, Vec<u8>)> = Vec::new();
            for s in 0..TABLE_ROW as u8 {
                let e = entry(top, s);
                if e == 0 {
                    continue;
                }
                match groups.iter_mut().find(|(g, _)| *g == e) {
                    Some((_, ss)) => ss.push(s),
                    None => groups.push((e, vec![s])),
                }
            }
            let row = groups.into_iter().rev().fold(c.num(0), |rest, (e, ss)| {
                let test = ss
                    .iter()
                    .map(|&s| call(&eq_c(), &[c.arg(1), c.num(s as u64)]))
                    .reduce(|a, b| call(&or_c(), &[a, b]))
                    .expect("nonempty group");
                call(&cond(), &[test, c.num(e as u64), rest])
            });
            call(&cond(), &[call(&eq_c(), &[c.arg(0), c.num(top as u64)]), row, rest])
        })
    }
);

lib_fn!(
    /// Automaton stack after reading digit `s` in state `st`.
    wf_step, 2, Some(|a| step_native(&a[0], &a[1])), None,
    |c| call(&wf_apply(), &[c.arg(0), call(&wf_entry(), &[call(&modulo(), &[c.arg(0), c.num(STACK_BASE)]), c.arg(1)])])
);

lib_fn!(
    /// Applies table entry `e` to stack `st`.
    wf_apply, 2, None, None,
    |c| {
        let e = c.arg(1);
        let ok = call(&modulo(), &[e.clone(), c.num(2)]);
        let cnt = call(&modulo(), &[call(&div(), &[e.clone(), c.num(2)]), c.num(4)]);
        let pushed = call(&div(), &[e, c.num(8)]);
        let base = call(&mult(), &[call(&div(), &[c.arg(0), c.num(STACK_BASE)]), call(&pow(), &[c.num(STACK_BASE), cnt])]);
        call(&cond(), &[ok, call(&add(), &[base, pushed]), c.num(0)])
    }
);

fn run_native(m: usize, x: &[u8], st: &BigUint) -> BigUint {
    let mut st = st.clone();
    for p in 1..=m {
        st = step_native(&st, &BigUint::from(x.get(p).copied().unwrap_or(0)));
    }
    st
}

lib_fn!(
    /// Stack after reading positions `1..=m` of `x` from stack `st`.
    wf_run, 3,
    Some(|a| run_native(a[0].to_usize().expect("run length"), &unpack_digits(&a[1]), &a[2])),
    None,
    |_c| rec(proj(2, 1), call(&wf_step(), &[proj(4, 1), call(&digit(), &[proj(4, 2), call(&succ(), &[proj(4, 0)])])]))
);

/// Length of the current run of bit symbols, saturating at 33.
const LONG_CHAIN: u64 = 33;

fn long_chain_native(d: &[u8]) -> bool {
    let mut run = 0;
    for &s in d {
        if s == Symbol::Bit0.digit() || s == Symbol::Bit1.digit() {
            run += 1;
            if run >= LONG_CHAIN {
                return true;
            }
        } else {
            run = 0;
        }
    }
    false
}

lib_fn!(
    /// Bit-run state after the first `m` symbols of `x`.
    chain_run, 2, None, None,
    |_c| {
        // step(p, r, x)
        let r = proj(3, 1);
        let full = call(&eq_c(), &[r.clone(), konst(3, LONG_CHAIN)]);
        let bit = call(&is_bit(), &[call(&digit(), &[proj(3, 2), proj(3, 0)])]);
        let grow = call(&cond(), &[bit, call(&succ(), &[r]), konst(3, 0u32)]);
        rec(zero(1), call(&cond(), &[full, konst(3, LONG_CHAIN), grow]))
    }
);

lib_fn!(
    /// 1 if `x` has a run of 33 consecutive bit symbols.
    long_chain, 1, Some(|a| BigUint::from(long_chain_native(&unpack_digits(&a[0])) as u8)), None,
    |c| call(&eq_c(), &[call(&chain_run(), &[call(&len(), &[c.arg(0)]), c.arg(0)]), c.num(LONG_CHAIN)])
);

fn accepts_native(x: &BigUint, tag: Symbol, start: u8) -> bool {
    let d = unpack_digits(x);
    d.first() == Some(&tag.digit())
        && run_native(d.len() - 1, &d, &BigUint::from(STACK_BASE + start as u64)) == BigUint::from(1u32)
        && !long_chain_native(&d)
}

fn accepts_body(c: Ctx, tag: Symbol, start: u8) -> Pr {
    let x = c.arg(0);
    let tag_ok = call(&eq_c(), &[call(&digit(), &[x.clone(), c.num(0)]), c.num(tag.digit() as u64)]);
    let run = call(&wf_run(), &[call(&pred(), &[call(&len(), &[x.clone()])]), x.clone(), c.num(STACK_BASE + start as u64)]);
    let empty = call(&eq_c(), &[run, c.num(1)]);
    call(&and_c(), &[tag_ok, call(&and_c(), &[empty, call(&nsg(), &[call(&long_chain(), &[x])])])])
}

lib_fn!(
    /// 1 iff `x` is the code of a formula.
    wf_formula, 1, Some(|a| BigUint::from(accepts_native(&a[0], Symbol::TagFormula, cat::FORMULA) as u8)), None,
    |c| accepts_body(c, Symbol::TagFormula, cat::FORMULA)
);

lib_fn!(
    /// 1 iff `x` is the code of a proof (possibly empty).
    wf_proof, 1, Some(|a| BigUint::from(accepts_native(&a[0], Symbol::TagProof, cat::STEPS) as u8)), None,
    |c| accepts_body(c, Symbol::TagProof, cat::STEPS)
);

fn d(s: Symbol) -> u64 {
    s.digit() as u64
}

lib_fn!(
    /// Position of the `k`-th step cell (`CONS`) of proof code `b`.
    cell, 2, None, None,
    |_c| rec(konst(1, 1u32), call(&expr_end(), &[proj(3, 2), call(&succ(), &[proj(3, 1)])]))
);

lib_fn!(
    /// Number of steps of proof code `b`.
    nsteps, 1, None, None,
    |c| {
        let not_cons = call(
            &nsg(),
            &[call(&eq_c(), &[call(&digit(), &[proj(2, 1), call(&cell(), &[proj(2, 0), proj(2, 1)])]), konst(2, d(Symbol::Cons))])],
        );
        call(&search(not_cons, call(&len(), &[proj(1, 0)])), &[c.arg(0)])
    }
);

lib_fn!(
    /// Formula of step `k` (without tag).
    step_formula, 2, None, None,
    |c| call(&expr_at(), &[c.arg(1), call(&add(), &[call(&cell(), &[c.arg(0), c.arg(1)]), c.num(2)])])
);

lib_fn!(
    /// Position of the justification of step `k`.
    just_pos, 2, None, None,
    |c| call(&expr_end(), &[c.arg(1), call(&add(), &[call(&cell(), &[c.arg(0), c.arg(1)]), c.num(2)])])
);

lib_fn!(
    /// Binary value of the first `m` bits at position `p` of `b`.
    nat_bits, 3, None, None,
    |_c| {
        // step(m, v, b, p)
        let bit = call(
            &eq_c(),
            &[call(&digit(), &[proj(4, 2), call(&add(), &[proj(4, 3), proj(4, 0)])]), konst(4, d(Symbol::Bit1))],
        );
        rec(zero(2), call(&add(), &[call(&add(), &[proj(4, 1), proj(4, 1)]), bit]))
    }
);

lib_fn!(
    /// Value of the natural (or variable index) chain at position `p`.
    nat_value, 2, None, None,
    |c| {
        let width = call(&monus(), &[call(&expr_end(), &[c.arg(0), c.arg(1)]), call(&succ(), &[c.arg(1)])]);
        call(&nat_bits(), &[width, c.arg(0), c.arg(1)])
    }
);

fn cat2(a: Pr, b: Pr) -> Pr {
    call(&cat(), &[a, b])
}

/// `sym x` for a prefix symbol of arity 1.
fn un(k: usize, s: Symbol, x: Pr) -> Pr {
    cat2(konst(k, d(s)), x)
}

/// `sym x y` for a prefix symbol of arity 2.
fn bin(k: usize, s: Symbol, x: Pr, y: Pr) -> Pr {
    cat2(cat2(konst(k, d(s)), x), y)
}

lib_fn!(
    /// Modus ponens check given step `k`, proof `b`, premise `i`, implication `j`.
    mp_check, 4, None, None,
    |c| {
        let (k, b, i, j) = (c.arg(0), c.arg(1), c.arg(2), c.arg(3));
        let fi = call(&step_formula(), &[i.clone(), b.clone()]);
        let fj = call(&step_formula(), &[j.clone(), b.clone()]);
        let fk = call(&step_formula(), &[k.clone(), b]);
        let shape = call(&eq_c(), &[fj, bin(4, Symbol::Implies, fi, fk)]);
        call(&and_c(), &[call(&and_c(), &[call(&lt_c(), &[i, k.clone()]), call(&lt_c(), &[j, k])]), shape])
    }
);

lib_fn!(
    /// Modus ponens check of step `k` whose justification is at `jp`.
    mp_at, 3, None, None,
    |c| {
        let p1 = call(&succ(), &[c.arg(2)]);
        let i = call(&nat_value(), &[c.arg(1), p1.clone()]);
        let j = call(&nat_value(), &[c.arg(1), call(&expr_end(), &[c.arg(1), p1])]);
        call(&mp_check(), &[c.arg(0), c.arg(1), i, j])
    }
);

lib_fn!(
    /// Generalization check given step `k`, proof `b`, premise `i`, variable `v`.
    gen_check, 4, None, None,
    |c| {
        let (k, b, i, v) = (c.arg(0), c.arg(1), c.arg(2), c.arg(3));
        let fi = call(&step_formula(), &[i.clone(), b.clone()]);
        let fk = call(&step_formula(), &[k.clone(), b]);
        call(&and_c(), &[call(&lt_c(), &[i, k]), call(&eq_c(), &[fk, bin(4, Symbol::ForAll, v, fi)])])
    }
);

lib_fn!(
    /// Generalization check of step `k` whose justification is at `jp`.
    gen_at, 3, None, None,
    |c| {
        let p1 = call(&succ(), &[c.arg(2)]);
        let i = call(&nat_value(), &[c.arg(1), p1.clone()]);
        let v = call(&expr_at(), &[c.arg(1), call(&expr_end(), &[c.arg(1), p1])]);
        call(&gen_check(), &[c.arg(0), c.arg(1), i, v])
    }
);

lib_fn!(
    /// Position of the `m`-th cell of the item list at `lp` in `b`.
    item_cell, 3, None, None,
    |_c| rec(proj(2, 1), call(&expr_end(), &[proj(4, 2), call(&succ(), &[proj(4, 1)])]))
);

lib_fn!(
    /// Number of items of the list at `lp`.
    item_count, 2, None, None,
    |c| {
        // pred(m, b, lp)
        let not_cons = call(
            &nsg(),
            &[call(
                &eq_c(),
                &[call(&digit(), &[proj(3, 1), call(&item_cell(), &[proj(3, 0), proj(3, 1), proj(3, 2)])]), konst(3, d(Symbol::Cons))],
            )],
        );
        call(&search(not_cons, call(&len(), &[proj(2, 0)])), &[c.arg(0), c.arg(1)])
    }
);

lib_fn!(
    /// Item `m` of the list at `lp`, with its tag.
    item_raw, 3, None, None,
    |c| call(&expr_at(), &[c.arg(0), call(&succ(), &[call(&item_cell(), &[c.arg(2), c.arg(0), c.arg(1)])])])
);

lib_fn!(
    /// Slot kind of a raw item: 1 term, 2 formula, 3 variable.
    item_kind, 1, None, None,
    |c| {
        let h = call(&digit(), &[c.arg(0), c.num(0)]);
        call(
            &cond(),
            &[
                call(&eq_c(), &[h.clone(), c.num(d(Symbol::TagTerm))]),
                c.num(1),
                call(&cond(), &[call(&eq_c(), &[h, c.num(d(Symbol::TagFormula))]), c.num(2), c.num(3)]),
            ],
        )
    }
);

lib_fn!(
    /// Item payload: the term or formula after its tag, or the variable.
    item_payload, 1, None, None,
    |c| {
        let tagged = call(&le_c(), &[call(&digit(), &[c.arg(0), c.num(0)]), c.num(d(Symbol::TagFormula))]);
        call(&cond(), &[tagged, call(&sub(), &[c.arg(0), c.num(1), call(&len(), &[c.arg(0)])]), c.arg(0)])
    }
);

fn slot_kind(s: calculus::Slot) -> u64 {
    match s {
        calculus::Slot::Term => 1,
        calculus::Slot::Formula => 2,
        calculus::Slot::Var => 3,
    }
}

/// Signature of schema `n`: slot count plus base-4 slot kinds.
fn signature(n: u32) -> u64 {
    calculus::Schema::from_id(n).map_or(0, |s| {
        let slots = s.slots();
        slots.iter().enumerate().fold(slots.len() as u64, |acc, (i, &k)| acc + (slot_kind(k) << (2 * i + 2)))
    })
}

fn signature_table() -> BigUint {
    (1..=16u32).rev().fold(BigUint::zero(), |t, n| (t << 8u32) + signature(n)) << 8u32
}

lib_fn!(
    /// Signature of schema number `n` (0 outside 1..=16).
    schema_sig, 1, None, None,
    |c| call(
        &modulo(),
        &[call(&div(), &[c.big(&signature_table()), call(&pow(), &[c.num(256), c.arg(0)])]), c.num(256)]
    )
);

lib_fn!(
    /// Signature of the item list at `lp`, given its raw first three items
    /// and count; counts above 3 never match.
    list_sig, 4, None, None,
    |c| {
        let n = c.arg(0);
        let kd = |m: u64, r: Pr| call(&cond(), &[call(&lt_c(), &[c.num(m), n.clone()]), call(&item_kind(), &[r]), c.num(0)]);
        let sum = call(
            &add(),
            &[
                n.clone(),
                call(
                    &add(),
                    &[
                        call(&mult(), &[c.num(4), kd(0, c.arg(1))]),
                        call(&add(), &[call(&mult(), &[c.num(16), kd(1, c.arg(2))]), call(&mult(), &[c.num(64), kd(2, c.arg(3))])]),
                    ],
                ),
            ],
        );
        call(&cond(), &[call(&lt_c(), &[n, c.num(4)]), sum, c.num(0)])
    }
);

/// Argument positions of `inst_check(n, f, x0, x1, x2)`.
const INST_K: usize = 5;

fn inst_branch(n: u32) -> Pr {
    use Symbol as S;
    let k = INST_K;
    let f = proj(k, 1);
    let x = |i: usize| proj(k, 2 + i);
    let imp = |a: Pr, b: Pr| bin(k, S::Implies, a, b);
    let and = |a: Pr, b: Pr| bin(k, S::And, a, b);
    let or = |a: Pr, b: Pr| bin(k, S::Or, a, b);
    let not = |a: Pr| un(k, S::Not, a);
    let all = |v: Pr, a: Pr| bin(k, S::ForAll, v, a);
    let ex = |v: Pr, a: Pr| bin(k, S::Exists, v, a);
    let sbst = |a: Pr, v: Pr, t: Pr| call(&subst(), &[a, v, t]);
    let yes = konst(k, 1u32);
    let (a, b, c) = (x(0), x(1), x(2));
    let (side, inst) = match n {
        1 => (yes, imp(a.clone(), imp(b, a))),
        2 => (yes, imp(imp(a.clone(), b.clone()), imp(imp(a.clone(), imp(b, c.clone())), imp(a, c)))),
        3 => (yes, imp(a.clone(), imp(b.clone(), and(a, b)))),
        4 => (yes, imp(and(a.clone(), b), a)),
        5 => (yes, imp(and(a, b.clone()), b)),
        6 => (yes, imp(a.clone(), or(a, b))),
        7 => (yes, imp(b.clone(), or(a, b))),
        8 => (yes, imp(imp(a.clone(), c.clone()), imp(imp(b.clone(), c.clone()), imp(or(a, b), c)))),
        9 => (yes, imp(imp(a.clone(), b.clone()), imp(imp(a.clone(), not(b)), not(a)))),
        10 => (yes, imp(not(not(a.clone())), a)),
        // [x, A, t]
        11 => (
            call(&substitutable(), &[b.clone(), a.clone(), c.clone()]),
            imp(all(a.clone(), b.clone()), sbst(b, a, c)),
        ),
        12 => (
            call(&substitutable(), &[b.clone(), a.clone(), c.clone()]),
            imp(sbst(b.clone(), a.clone(), c), ex(a, b)),
        ),
        // [x, C, A]
        13 => (
            call(&nsg(), &[call(&occurs_var(), &[b.clone(), a.clone()])]),
            imp(all(a.clone(), imp(b.clone(), c.clone())), imp(b, all(a, c))),
        ),
        // [x, A, C]
        14 => (
            call(&nsg(), &[call(&occurs_var(), &[c.clone(), a.clone()])]),
            imp(all(a.clone(), imp(b.clone(), c.clone())), imp(ex(a, b), c)),
        ),
        15 => (yes, bin(k, S::Eq, a.clone(), a)),
        16 => {
            let sx = un(k, S::Succ, a.clone());
            let base = sbst(b.clone(), a.clone(), konst(k, d(S::Zero)));
            let step = all(a.clone(), imp(b.clone(), sbst(b.clone(), a.clone(), sx.clone())));
            (call(&substitutable(), &[b.clone(), a, sx]), imp(and(base, step), b))
        }
        _ => unreachable!("schema numbers are 1..=16"),
    };
    call(&and_c(), &[side, call(&eq_c(), &[f, inst])])
}

lib_fn!(
    /// 1 iff `f` is the instance of schema `n` at payloads `x0, x1, x2`
    /// (side conditions included), for `n` in 1..=16.
    inst_check, 5, None, None,
    |c| (1..=16u32).rev().fold(c.num(0), |rest, n| {
        call(&cond(), &[call(&eq_c(), &[c.arg(0), c.num(n as u64)]), inst_branch(n), rest])
    })
);

lib_fn!(
    /// Logical-axiom check given formula `f`, schema `n`, proof `b` and
    /// item list position `lp`.
    axl_check, 4, None, None,
    |c| {
        let (f, n, b, lp) = (c.arg(0), c.arg(1), c.arg(2), c.arg(3));
        let raw = |m: u64| call(&item_raw(), &[b.clone(), lp.clone(), c.num(m)]);
        let count = call(&item_count(), &[b.clone(), lp.clone()]);
        let sig_ok = call(&eq_c(), &[call(&list_sig(), &[count, raw(0), raw(1), raw(2)]), call(&schema_sig(), &[n.clone()])]);
        let payload = |m: u64| call(&item_payload(), &[raw(m)]);
        let inst = call(&inst_check(), &[n.clone(), f, payload(0), payload(1), payload(2)]);
        let n_ok = call(&and_c(), &[call(&le_c(), &[c.num(1), n.clone()]), call(&le_c(), &[n, c.num(16)])]);
        call(&and_c(), &[n_ok, call(&and_c(), &[sig_ok, inst])])
    }
);

lib_fn!(
    /// Logical-axiom check of step `k` whose justification is at `jp`.
    axl_at, 3, None, None,
    |c| {
        let p1 = call(&succ(), &[c.arg(2)]);
        let f = call(&step_formula(), &[c.arg(0), c.arg(1)]);
        let n = call(&nat_value(), &[c.arg(1), p1.clone()]);
        call(&axl_check(), &[f, n, c.arg(1), call(&expr_end(), &[c.arg(1), p1])])
    }
);

lib_fn!(
    /// Checks of step `k` for the three justifications not involving the
    /// nonlogical decider, given the justification symbol `js` at `jp`:
    /// `step_rules(k, b, jp, js)`.
    step_rules, 4, None, None,
    |c| {
        let js = c.arg(3);
        let args = [c.arg(0), c.arg(1), c.arg(2)];
        let case = |s: Symbol, f: Pr| call(&and_c(), &[call(&eq_c(), &[js.clone(), c.num(d(s))]), call(&f, &args)]);
        call(
            &or_c(),
            &[
                case(Symbol::AxiomLogical, axl_at()),
                call(&or_c(), &[case(Symbol::ModusPonens, mp_at()), case(Symbol::Generalization, gen_at())]),
            ],
        )
    }
);

lib_fn!(
    /// Code of the negation of a formula code: `TAG NOT body`.
    neg_code, 1, None, None,
    |c| cat2(c.num(d(Symbol::TagFormula) * 32 + d(Symbol::Not)), call(&sub(), &[c.arg(0), c.num(1), call(&len(), &[c.arg(0)])]))
);

/// Shifts the projections of a parameter-only list into context `k` at
/// offset `off`.
fn params(k: usize, off: usize, p: usize) -> Vec<Pr> {
    (0..p).map(|i| proj(k, off + i)).collect()
}

/// The proof predicate `pp(a, b, ps..)` for nonlogical-axiom decider `dec`
/// (`dec(formula_code, ps..)`, arity `1 + p`).
pub fn proof_predicate_pr(dec: &Pr) -> Pr {
    let p = dec.arity().checked_sub(1).expect("decider takes the formula code first");
    let tag = dec.name().unwrap_or("decider").to_string();

    // ok_step(k, b, ps..)
    let ks = 2 + p;
    let (k, b) = (proj(ks, 0), proj(ks, 1));
    let jp = call(&just_pos(), &[k.clone(), b.clone()]);
    let js = call(&digit(), &[b.clone(), jp.clone()]);
    let mut dec_args = vec![cat2(konst(ks, d(Symbol::TagFormula)), call(&step_formula(), &[k.clone(), b.clone()]))];
    dec_args.extend(params(ks, 2, p));
    let axn = call(&and_c(), &[call(&eq_c(), &[js.clone(), konst(ks, d(Symbol::AxiomNonLogical))]), call(dec, &dec_args)]);
    let ok_step = named(
        &format!("ok_step[{tag}]"),
        call(&or_c(), &[axn, call(&step_rules(), &[k, b, jp, js])]),
        None,
        None,
    );

    // core(a, b, n, ps..) with n = nsteps(b)
    let cs = 3 + p;
    let (a, b, n) = (proj(cs, 0), proj(cs, 1), proj(cs, 2));
    // failing step search: pred(k, a, b, n, ps..)
    let fs = 4 + p;
    let mut ok_args = vec![proj(fs, 0), proj(fs, 2)];
    ok_args.extend(params(fs, 4, p));
    let fails = call(&and_c(), &[call(&lt_c(), &[proj(fs, 0), proj(fs, 3)]), call(&nsg(), &[call(&ok_step, &ok_args)])]);
    let first_fail = call(&search(fails, proj(cs, 2)), &(0..cs).map(|i| proj(cs, i)).collect::<Vec<_>>());
    let all_ok = call(&eq_c(), &[first_fail, call(&succ(), &[n.clone()])]);
    let last = cat2(konst(cs, d(Symbol::TagFormula)), call(&step_formula(), &[call(&pred(), &[n.clone()]), b]));
    let core = named(
        &format!("pp_core[{tag}]"),
        call(&and_c(), &[call(&sg(), &[n]), call(&and_c(), &[call(&eq_c(), &[last, a]), all_ok])]),
        None,
        None,
    );

    let ts = 2 + p;
    let (a, b) = (proj(ts, 0), proj(ts, 1));
    let mut core_args = vec![a.clone(), b.clone(), call(&nsteps(), &[b.clone()])];
    core_args.extend(params(ts, 2, p));
    let body = call(
        &and_c(),
        &[call(&wf_formula(), &[a]), call(&and_c(), &[call(&wf_proof(), &[b]), call(&core, &core_args)])],
    );
    named(&format!("proof_predicate[{tag}]"), body, None, None)
}

fn axiom_codes() -> &'static HashSet<BigUint> {
    static S: OnceLock<HashSet<BigUint>> = OnceLock::new();
    S.get_or_init(|| calculus::arithmetic_axioms().iter().map(encode_formula).collect())
}

lib_fn!(
    /// Nonlogical-axiom decider of the base system: 1 iff the argument is
    /// the code of one of the fixed arithmetic axioms.
    stage0_decider, 1, Some(|a| BigUint::from(axiom_codes().contains(&a[0]) as u8)), None,
    |c| {
        let mut codes: Vec<BigUint> = calculus::arithmetic_axioms().iter().map(encode_formula).collect();
        codes.sort();
        codes.into_iter().fold(c.num(0), |acc, code| call(&or_c(), &[call(&eq_c(), &[c.arg(0), c.big(&code)]), acc]))
    }
);

/// `pp_neg(a, b, ps..) = pp(neg(a), b, ps..)`: `b` proves the negation of
/// the formula coded by `a`.
pub fn negation_variant(dec: &Pr) -> Pr {
    let pp = proof_predicate_pr(dec);
    let k = pp.arity();
    let mut args = vec![call(&neg_code(), &[proj(k, 0)])];
    args.extend((1..k).map(|i| proj(k, i)));
    let tag = dec.name().unwrap_or("decider").to_string();
    named(&format!("proof_of_negation[{tag}]"), call(&pp, &args), None, None)
}
