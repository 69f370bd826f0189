//! Which of the Rosser sentence and its negation each stage adds.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use ordinals::{parse_ordinal, Ordinal};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Rosser,
    Negation,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolicyError {
    #[error("expected `<notation>=rosser|neg`, found `{0}`")]
    Syntax(String),
    #[error("bad notation in sign override: {0}")]
    Notation(String),
}

impl FromStr for Sign {
    type Err = PolicyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "rosser" => Ok(Sign::Rosser),
            "neg" => Ok(Sign::Negation),
            other => Err(PolicyError::Syntax(other.to_string())),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Rosser => "rosser",
            Sign::Negation => "neg",
        })
    }
}

/// A total map from notations to signs: a default sign everywhere except
/// at finitely many exceptions.
///
/// The arithmetized decider reads the policy as one number `m`: bit 0 is
/// one iff the default is the negation, bit `g + 1` is one iff the stage
/// with code `g` is an exception, and one more bit at an even position above
/// all of these is a sentinel. With the sentinel position fixed, masking
/// exceptions away never changes the length of `m`'s efficient numeral, so
/// every host formula carries a policy numeral of the same length.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SignPolicy {
    default: Sign,
    exceptions: BTreeMap<Ordinal, Sign>,
}

impl Default for Sign {
    fn default() -> Self {
        Sign::Rosser
    }
}

impl SignPolicy {
    /// The Rosser sentence at every stage.
    pub fn new() -> Self {
        Self::default()
    }

    /// The same sign at every stage.
    pub fn constant(sign: Sign) -> Self {
        SignPolicy { default: sign, exceptions: BTreeMap::new() }
    }

    pub fn with(mut self, alpha: Ordinal, sign: Sign) -> Self {
        self.set(alpha, sign);
        self
    }

    pub fn set(&mut self, alpha: Ordinal, sign: Sign) {
        if sign == self.default {
            self.exceptions.remove(&alpha);
        } else {
            self.exceptions.insert(alpha, sign);
        }
    }

    pub fn default_sign(&self) -> Sign {
        self.default
    }

    pub fn sign(&self, alpha: &Ordinal) -> Sign {
        self.exceptions.get(alpha).copied().unwrap_or(self.default)
    }

    fn exception_codes(&self) -> impl Iterator<Item = (&Ordinal, u64)> {
        self.exceptions.keys().map(|a| (a, u64::try_from(&a.code()).expect("exception notation code fits in 64 bits")))
    }

    /// Position of the sentinel bit: the least even number at least 2 above
    /// every exception bit.
    fn sentinel(&self) -> u64 {
        let top = self.exception_codes().map(|(_, g)| g + 2).max().unwrap_or(2);
        top + top % 2
    }

    fn encode(&self, keep: impl Fn(&Ordinal) -> bool) -> BigUint {
        let mut m = BigUint::default();
        m.set_bit(self.sentinel(), true);
        m.set_bit(0, self.default == Sign::Negation);
        for (alpha, g) in self.exception_codes() {
            if keep(alpha) {
                m.set_bit(g + 1, true);
            }
        }
        m
    }

    /// The whole policy as the number the decider reads.
    pub fn encoded(&self) -> BigUint {
        self.encode(|_| true)
    }

    /// The policy restricted to stages below `alpha`: what stage `alpha`'s
    /// own decider may depend on.
    pub fn encoded_below(&self, alpha: &Ordinal) -> BigUint {
        self.encode(|g| g < alpha)
    }

    /// Canonical text: `default=neg` when the default is the negation,
    /// then the exceptions in notation order as `α=sign`. Empty for the
    /// all-Rosser policy.
    pub fn canonical_text(&self) -> String {
        let head = (self.default == Sign::Negation).then(|| "default=neg".to_string());
        let rest = self.exceptions.iter().map(|(a, s)| format!("{a}={s}"));
        head.into_iter().chain(rest).collect::<Vec<_>>().join(",")
    }

    /// Applies one `<notation>=rosser|neg` or `default=rosser|neg` item.
    /// Setting the default clears earlier exceptions.
    pub fn apply(&mut self, text: &str) -> Result<(), PolicyError> {
        let (lhs, rhs) = text.split_once('=').ok_or_else(|| PolicyError::Syntax(text.to_string()))?;
        let sign: Sign = rhs.parse()?;
        if lhs.trim() == "default" {
            *self = SignPolicy::constant(sign);
        } else {
            let alpha = parse_ordinal(lhs.trim()).map_err(|e| PolicyError::Notation(e.to_string()))?;
            self.set(alpha, sign);
        }
        Ok(())
    }

    /// Parses a canonical text back.
    pub fn parse(text: &str) -> Result<Self, PolicyError> {
        let mut p = SignPolicy::new();
        for item in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            p.apply(item)?;
        }
        Ok(p)
    }
}
