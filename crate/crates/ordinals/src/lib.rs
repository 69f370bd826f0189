//! Cantor-normal-form ordinal notations below epsilon-zero.
//!
//! A notation is a strictly decreasing sum `w^e1*k1 + ... + w^en*kn` with every
//! exponent itself a notation and every coefficient at least one. The empty
//! sum is zero. Values are immutable and cheap to share.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

mod parse;

pub use parse::parse_ordinal;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrdinalError {
    #[error("syntax error at offset {pos}: expected {expected}")]
    Syntax { pos: usize, expected: &'static str },
    #[error("{0} is not a limit ordinal")]
    NotALimit(String),
}

/// An ordinal below epsilon-zero in Cantor normal form.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    terms: Vec<(Ordinal, BigUint)>,
}

/// Shape of an ordinal: zero, a successor (with its predecessor) or a limit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Class {
    Zero,
    Successor(Ordinal),
    Limit,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn finite(n: u64) -> Self {
        Self::from_nat(BigUint::from(n))
    }

    pub fn from_nat(n: BigUint) -> Self {
        if n.is_zero() {
            Self::zero()
        } else {
            Ordinal { terms: vec![(Self::zero(), n)] }
        }
    }

    pub fn omega() -> Self {
        Self::omega_pow(Self::finite(1))
    }

    /// `w^e`.
    pub fn omega_pow(e: Ordinal) -> Self {
        Ordinal { terms: vec![(e, BigUint::one())] }
    }

    /// Builds a notation from terms, normalizing them into canonical form by
    /// ordinal addition (smaller terms before larger ones are absorbed).
    pub fn from_terms<I: IntoIterator<Item = (Ordinal, BigUint)>>(terms: I) -> Self {
        let mut acc = Ordinal::zero();
        for (e, k) in terms {
            acc.push_term(e, k);
        }
        acc
    }

    /// Adds `w^e * k` on the right, as ordinal addition.
    fn push_term(&mut self, e: Ordinal, k: BigUint) {
        if k.is_zero() {
            return;
        }
        while let Some((last, _)) = self.terms.last() {
            if *last < e {
                self.terms.pop();
            } else {
                break;
            }
        }
        match self.terms.last_mut() {
            Some((last, c)) if *last == e => *c += k,
            _ => self.terms.push((e, k)),
        }
    }

    /// Ordinal sum `self + other`.
    pub fn add(&self, other: &Ordinal) -> Ordinal {
        let mut out = self.clone();
        for (e, k) in &other.terms {
            out.push_term(e.clone(), k.clone());
        }
        out
    }

    /// Ordinal product by a natural number on the right.
    pub fn mul_nat(&self, n: &BigUint) -> Ordinal {
        if n.is_zero() || self.is_zero() {
            return Ordinal::zero();
        }
        let mut terms = self.terms.clone();
        terms[0].1 *= n;
        Ordinal { terms }
    }

    pub fn terms(&self) -> &[(Ordinal, BigUint)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value as a natural number, if finite.
    pub fn as_nat(&self) -> Option<BigUint> {
        match self.terms.as_slice() {
            [] => Some(BigUint::zero()),
            [(e, k)] if e.is_zero() => Some(k.clone()),
            _ => None,
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.terms.iter().all(|(e, k)| !k.is_zero() && e.is_canonical())
            && self.terms.windows(2).all(|w| w[0].0 > w[1].0)
    }

    pub fn classify(&self) -> Class {
        match self.terms.last() {
            None => Class::Zero,
            Some((e, k)) if e.is_zero() => {
                let mut pred = self.terms.clone();
                let one = BigUint::one();
                if *k == one {
                    pred.pop();
                } else {
                    pred.last_mut().unwrap().1 = k - one;
                }
                Class::Successor(Ordinal { terms: pred })
            }
            Some(_) => Class::Limit,
        }
    }

    /// The predecessor `self - 1` when `self` is a successor.
    pub fn checked_pred(&self) -> Option<Ordinal> {
        match self.classify() {
            Class::Successor(p) => Some(p),
            _ => None,
        }
    }

    pub fn succ(&self) -> Ordinal {
        self.add(&Ordinal::finite(1))
    }

    /// The n-th element of the fundamental sequence of a limit notation.
    ///
    /// For `b + w^(x+1)` this is `b + w^x * n`; for `b + w^x` with `x` a limit
    /// it is `b + w^(x[n])`.
    pub fn fundamental_sequence(&self, n: u64) -> Result<Ordinal, OrdinalError> {
        if self.classify() != Class::Limit {
            return Err(OrdinalError::NotALimit(self.to_string()));
        }
        let (e, k) = self.terms.last().unwrap();
        let mut prefix = self.terms.clone();
        let one = BigUint::one();
        if *k == one {
            prefix.pop();
        } else {
            prefix.last_mut().unwrap().1 = k - &one;
        }
        let mut out = Ordinal { terms: prefix };
        match e.classify() {
            Class::Successor(x) => {
                if n > 0 {
                    out.terms.push((x, BigUint::from(n)));
                }
            }
            Class::Limit => {
                out.terms.push((e.fundamental_sequence(n)?, one));
            }
            Class::Zero => unreachable!("limit has nonzero last exponent"),
        }
        Ok(out)
    }

    /// Numeric code of the notation: `0` for zero and
    /// `1 + pair(code(e), pair(k - 1, code(rest)))` for `w^e*k + rest`, with the
    /// Cantor pairing `pair(x, y) = (x + y)(x + y + 1)/2 + y`.
    pub fn code(&self) -> BigUint {
        self.code_from(0)
    }

    fn code_from(&self, i: usize) -> BigUint {
        match self.terms.get(i) {
            None => BigUint::zero(),
            Some((e, k)) => {
                let rest = self.code_from(i + 1);
                let inner = pair(&(k - BigUint::one()), &rest);
                pair(&e.code(), &inner) + BigUint::one()
            }
        }
    }

    /// Inverse of [`Ordinal::code`]; `None` when the code is not canonical.
    pub fn from_code(code: &BigUint) -> Option<Ordinal> {
        let mut terms = Vec::new();
        let mut cur = code.clone();
        while !cur.is_zero() {
            let (ec, inner) = unpair(&(&cur - BigUint::one()));
            let (k1, rest) = unpair(&inner);
            let e = Ordinal::from_code(&ec)?;
            if let Some((prev, _)) = terms.last() {
                if *prev <= e {
                    return None;
                }
            }
            terms.push((e, k1 + BigUint::one()));
            cur = rest;
        }
        Some(Ordinal { terms })
    }
}

/// Cantor pairing `(x + y)(x + y + 1)/2 + y`.
pub fn pair(x: &BigUint, y: &BigUint) -> BigUint {
    let s: BigUint = x + y;
    (&s * (&s + BigUint::one()) >> 1u32) + y
}

/// Inverse of [`pair`].
pub fn unpair(z: &BigUint) -> (BigUint, BigUint) {
    // s is the largest value with s(s+1)/2 <= z
    let eight_z_plus_one: BigUint = (z << 3u32) + BigUint::one();
    let root = eight_z_plus_one.sqrt();
    let mut s: BigUint = (root - BigUint::one()) >> 1u32;
    let tri = |s: &BigUint| (s * (s + BigUint::one())) >> 1u32;
    while tri(&s) > *z {
        s -= BigUint::one();
    }
    while tri(&(&s + BigUint::one())) <= *z {
        s += BigUint::one();
    }
    let y = z - tri(&s);
    let x = &s - &y;
    (x, y)
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ordinal {
    /// Lexicographic comparison of the term lists.
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(other.terms.iter()) {
            match a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

pub fn compare(a: &Ordinal, b: &Ordinal) -> Ordering {
    a.cmp(b)
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, k)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            if e.is_zero() {
                write!(f, "{k}")?;
                continue;
            }
            write!(f, "w")?;
            if *e != Ordinal::finite(1) {
                write!(f, "^")?;
                fmt_exponent(e, f)?;
            }
            if !k.is_one() {
                write!(f, "*{k}")?;
            }
        }
        Ok(())
    }
}

fn fmt_exponent(e: &Ordinal, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let atomic = match e.terms.as_slice() {
        [(_, k)] => k.is_one() || e.as_nat().is_some(),
        _ => false,
    };
    if atomic {
        write!(f, "{e}")
    } else {
        write!(f, "({e})")
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ordinal({self})")
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::finite(n)
    }
}

impl std::str::FromStr for Ordinal {
    type Err = OrdinalError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_ordinal(s)
    }
}
