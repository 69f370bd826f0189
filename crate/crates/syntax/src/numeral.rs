use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::visit::term_postorder;
use crate::{Term, TermKind, Var};

/// Constants up to this value are written in unary by [`numeral_above`].
pub const DEFAULT_NUMERAL_THRESHOLD: u64 = 64;

/// `S...S0` with `n` successors.
pub fn numeral(n: u64) -> Term {
    let mut t = Term::zero();
    for _ in 0..n {
        t = Term::succ(t);
    }
    t
}

/// The six-symbol closed term used for a base-4 digit.
///
/// All four digits have the same flattened length, so the length of an
/// efficient numeral depends only on the number of base-4 digits.
pub fn digit_term(d: u8) -> Term {
    let z = Term::zero;
    match d {
        0 => Term::times(z(), numeral(3)),
        1 => Term::succ(Term::times(z(), numeral(2))),
        2 => Term::times(numeral(1), numeral(2)),
        3 => Term::plus(numeral(3), z()),
        _ => panic!("base-4 digit out of range: {d}"),
    }
}

/// Base-4 Horner form: `n = 4*q + d` becomes `(SSSS0*E(q))+D(d)`, with a
/// lone digit term for `n < 4`. Size is linear in the bit length of `n`.
pub fn efficient_numeral(n: &BigUint) -> Term {
    let digits = n.to_radix_be(4);
    let four = numeral(4);
    let mut it = digits.into_iter();
    let mut t = digit_term(it.next().unwrap_or(0));
    for d in it {
        t = Term::plus(Term::times(four.clone(), t), digit_term(d));
    }
    t
}

/// Unary numeral up to `threshold`, efficient numeral above it.
pub fn numeral_above(n: &BigUint, threshold: u64) -> Term {
    match n.to_u64() {
        Some(k) if k <= threshold => numeral(k),
        _ => efficient_numeral(n),
    }
}

/// Standard-model value of `t` under `env`; `None` if a variable is unassigned.
pub fn denote(t: &Term, env: &HashMap<Var, BigUint>) -> Option<BigUint> {
    if t.is_closed() {
        if let TermKind::Zero = t.kind() {
            return Some(BigUint::zero());
        }
    }
    let order = term_postorder([t]);
    let mut val: HashMap<u64, BigUint> = HashMap::with_capacity(order.len());
    for s in &order {
        let v = match s.kind() {
            TermKind::Var(x) => env.get(x)?.clone(),
            TermKind::Zero => BigUint::zero(),
            TermKind::Succ(a) => &val[&a.id()] + 1u32,
            TermKind::Plus(a, b) => &val[&a.id()] + &val[&b.id()],
            TermKind::Times(a, b) => &val[&a.id()] * &val[&b.id()],
        };
        val.insert(s.id(), v);
    }
    val.remove(&t.id())
}
