//! The progression of stages: stage axioms, their codes, and the decision
//! procedure for axiom membership.
//!
//! Stage axioms are indexed by notation codes. `q̃(γ)` depends only on `γ`
//! and the sign policy, so one memo serves every stage. The memo keeps the
//! length and a digest of each `q̃(γ)`; the full digit strings (tens of
//! megabytes each) are recomputed on demand and a few recent ones are kept.
//!
//! The decision procedure walks notations in order of their codes. Ordinal
//! order cannot work: infinitely many finite stages lie below `ω`, so no
//! natural number `q̃(ω)` can exceed all their codes. In code order the
//! stage axiom codes grow strictly (each one contains the stage's unary
//! numeral), which is the finiteness premise the cutoff needs. It is checked
//! at every new memo entry rather than assumed.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use ordinals::{Class, Ordinal};
use sha2::{Digest as _, Sha256};
use syntax::{efficient_numeral, negate, substitute, Formula, VAR_A};

use crate::digits;
use crate::error::{Result, TowerError};
use crate::host::HostTemplate;
use crate::policy::{Sign, SignPolicy};

pub type Digest = [u8; 32];

pub fn digest(d: &[u8]) -> Digest {
    Sha256::digest(d).into()
}

/// Summary of one stage axiom code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub notation: Ordinal,
    /// Number of symbols in `q̃(γ)`.
    pub len: usize,
    /// SHA-256 of the digit string of `q̃(γ)`.
    pub digest: Digest,
}

/// Why a code is an axiom of a stage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// One of the arithmetic axioms every stage starts from.
    Base,
    /// The axiom added at stage `γ`.
    Stage(Ordinal),
}

impl fmt::Display for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Membership::Base => f.write_str("base axiom"),
            Membership::Stage(g) => write!(f, "γ = {g}"),
        }
    }
}

/// Answer of the fundamental-sequence route at a limit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitAnswer {
    pub member: Option<Membership>,
    /// Index `n` of the sequence element at which the answer was settled.
    pub settled_at: u64,
}

const HOT_ENTRIES: usize = 3;

pub struct Tower {
    policy: SignPolicy,
    encoded: BigUint,
    template: HostTemplate,
    base: HashSet<Vec<u8>>,
    memo: BTreeMap<u64, Entry>,
    hot: VecDeque<(u64, Arc<Vec<u8>>)>,
}

/// Code of a notation, for the range this implementation indexes.
pub fn stage_code(alpha: &Ordinal) -> Result<u64> {
    u64::try_from(&alpha.code()).map_err(|_| TowerError::TooLarge(alpha.clone()))
}

fn notation(code: u64) -> Option<Ordinal> {
    Ordinal::from_code(&BigUint::from(code))
}

/// Order of two digit strings as codes: shorter first, then lexicographic.
fn cmp_digits(a: &[u8], b: &[u8]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

impl Tower {
    pub fn new(policy: SignPolicy) -> Self {
        let encoded = policy.encoded();
        let base = calculus::arithmetic_axioms().iter().map(coding::encode_formula_digits).collect();
        Tower { policy, encoded, template: HostTemplate::new(), base, memo: BTreeMap::new(), hot: VecDeque::new() }
    }

    pub fn policy(&self) -> &SignPolicy {
        &self.policy
    }

    pub fn template(&self) -> &HostTemplate {
        &self.template
    }

    /// `∀b (¬A(a,b) ∨ ∃c (c ≤ b ∧ B(a,c)))` for stage `alpha`, free in `a`.
    pub fn rosser_host_formula(&self, alpha: &Ordinal) -> Result<Formula> {
        Ok(self.template.host(stage_code(alpha)?, &self.policy.encoded_below(alpha)))
    }

    /// Code of the host formula.
    pub fn q_upper(&self, alpha: &Ordinal) -> Result<BigUint> {
        Ok(coding::encode_formula(&self.rosser_host_formula(alpha)?))
    }

    /// The encoded policy, as the stage deciders read it.
    pub fn encoded_policy(&self) -> &BigUint {
        &self.encoded
    }

    /// The host formula with `a` replaced by the efficient numeral of its own code.
    pub fn rosser_sentence(&self, alpha: &Ordinal) -> Result<Formula> {
        let host = self.rosser_host_formula(alpha)?;
        let q = coding::encode_formula(&host);
        Ok(substitute(&host, VAR_A, &efficient_numeral(&q)))
    }

    /// `A(α)` and its code `q̃(α)`.
    pub fn stage_axiom(&mut self, alpha: &Ordinal) -> Result<(Formula, BigUint)> {
        let code = self.qtilde(alpha)?;
        let rosser = self.rosser_sentence(alpha)?;
        let axiom = match self.policy.sign(alpha) {
            Sign::Rosser => rosser,
            Sign::Negation => negate(&rosser),
        };
        Ok((axiom, code))
    }

    /// `q̃(α)`, checked against the memo's monotonicity.
    pub fn qtilde(&mut self, alpha: &Ordinal) -> Result<BigUint> {
        Ok(coding::pack_digits(&self.qtilde_digits(alpha)?))
    }

    /// Digit string of `q̃(α)`.
    pub fn qtilde_digits(&mut self, alpha: &Ordinal) -> Result<Arc<Vec<u8>>> {
        let g = stage_code(alpha)?;
        self.entry(g)?;
        Ok(self.materialize(g))
    }

    /// Computes `q̃` for code `g` from scratch, by the digit route.
    pub fn compute_qtilde(&self, g: u64) -> Vec<u8> {
        let gamma = notation(g).expect("canonical code");
        let host = coding::encode_formula_digits(&self.rosser_host_formula(&gamma).expect("small code"));
        digits::qtilde_digits(g as usize, &host, &self.encoded)
    }

    fn materialize(&mut self, g: u64) -> Arc<Vec<u8>> {
        if let Some(i) = self.hot.iter().position(|(k, _)| *k == g) {
            let hit = self.hot.remove(i).expect("present");
            let d = hit.1.clone();
            self.hot.push_front(hit);
            return d;
        }
        let d = Arc::new(self.compute_qtilde(g));
        self.hot.push_front((g, d.clone()));
        self.hot.truncate(HOT_ENTRIES);
        d
    }

    /// Memo entries computed so far, by notation code.
    pub fn memo(&self) -> &BTreeMap<u64, Entry> {
        &self.memo
    }

    /// Installs entries loaded from a cache. They are trusted as summaries;
    /// verification recomputes them independently.
    pub fn load_memo(&mut self, entries: BTreeMap<u64, Entry>) {
        self.memo = entries;
        self.hot.clear();
    }

    /// Overwrites the digest of one memo entry, for fault-injection tests.
    pub fn corrupt_memo_entry(&mut self, alpha: &Ordinal) -> Result<()> {
        let g = stage_code(alpha)?;
        self.entry(g)?;
        let e = self.memo.get_mut(&g).expect("just computed");
        e.digest[0] ^= 0xff;
        Ok(())
    }

    /// The memo entry for code `g`, filling in every canonical code below
    /// it first and checking that lengths and values increase.
    pub fn entry(&mut self, g: u64) -> Result<&Entry> {
        if !self.memo.contains_key(&g) {
            let start = self.memo.keys().next_back().map_or(0, |k| k + 1);
            for h in start..=g {
                let Some(gamma) = notation(h) else { continue };
                let d = Arc::new(self.compute_qtilde(h));
                if let Some((&p, prev)) = self.memo.range(..h).next_back() {
                    let increasing = match prev.len.cmp(&d.len()) {
                        Ordering::Less => true,
                        Ordering::Greater => false,
                        Ordering::Equal => *self.materialize(p) < *d,
                    };
                    if !increasing {
                        let earlier = self.memo[&p].notation.clone();
                        return Err(TowerError::MonotonicityViolation { earlier, later: gamma });
                    }
                }
                self.memo.insert(h, Entry { notation: gamma, len: d.len(), digest: digest(&d) });
                self.hot.push_front((h, d));
                self.hot.truncate(HOT_ENTRIES);
            }
        }
        self.memo.get(&g).ok_or_else(|| TowerError::TooLarge(Ordinal::finite(g)))
    }

    /// Order of `q̃` at code `g` against the code with digits `r`.
    fn cmp_qtilde(&mut self, g: u64, r: &[u8]) -> Result<Ordering> {
        let len = self.entry(g)?.len;
        Ok(match len.cmp(&r.len()) {
            Ordering::Equal => cmp_digits(&self.materialize(g), r),
            o => o,
        })
    }

    pub fn is_base_axiom(&self, r: &[u8]) -> bool {
        self.base.contains(r)
    }

    /// Every notation whose stage axiom code is at most `r`, in code order.
    /// The walk stops at the first stage axiom code above `r`.
    pub fn candidates(&mut self, r: &[u8]) -> Result<Vec<(Ordinal, Ordering)>> {
        let mut out = Vec::new();
        for g in 0.. {
            let Some(gamma) = notation(g) else { continue };
            match self.cmp_qtilde(g, r)? {
                Ordering::Greater => break,
                o => out.push((gamma, o)),
            }
        }
        Ok(out)
    }

    /// Axiom membership in stage `alpha` for the code with digits `r`.
    pub fn is_axiom_digits(&mut self, alpha: &Ordinal, r: &[u8]) -> Result<Option<Membership>> {
        if self.is_base_axiom(r) {
            return Ok(Some(Membership::Base));
        }
        let hit = self.candidates(r)?.into_iter().find(|(g, o)| *o == Ordering::Equal && g < alpha);
        Ok(hit.map(|(g, _)| Membership::Stage(g)))
    }

    pub fn is_axiom(&mut self, alpha: &Ordinal, r: &BigUint) -> Result<Option<Membership>> {
        self.is_axiom_digits(alpha, &coding::unpack_digits(r))
    }

    /// The decision procedure of stage `alpha` as a predicate on codes.
    pub fn axiom_decider(&mut self, alpha: &Ordinal) -> impl FnMut(&BigUint) -> Result<bool> + '_ {
        let alpha = alpha.clone();
        move |r| Ok(self.is_axiom(&alpha, r)?.is_some())
    }

    /// Membership at a limit by querying the deciders of the fundamental
    /// sequence `λ[0], λ[1], ..`. Only stages with code at most `r` can
    /// match, and there are finitely many; once every such stage below `λ`
    /// lies below `λ[n]`, the answer at `n` is final.
    pub fn limit_membership_via_fs(&mut self, lambda: &Ordinal, r: &[u8]) -> Result<LimitAnswer> {
        if lambda.classify() != Class::Limit {
            return Err(TowerError::NotALimit(lambda.clone()));
        }
        let below: Vec<Ordinal> = self.candidates(r)?.into_iter().map(|(g, _)| g).filter(|g| g < lambda).collect();
        for n in 0.. {
            let alpha_n = lambda.fundamental_sequence(n).expect("limit");
            let member = self.is_axiom_digits(&alpha_n, r)?;
            if member.is_some() || below.iter().all(|g| *g < alpha_n) {
                return Ok(LimitAnswer { member, settled_at: n });
            }
        }
        unreachable!("fundamental sequences are unbounded below the limit")
    }

    /// Membership by enumerating the memo directly: the base axioms, and
    /// every computed stage below `alpha` whose code equals `r`. No cutoff
    /// is used, so this is only complete when the memo covers every stage
    /// whose code could be at most `r`.
    pub fn brute_force(&mut self, alpha: &Ordinal, r: &[u8]) -> Option<Membership> {
        if calculus::arithmetic_axioms().iter().any(|ax| coding::encode_formula_digits(ax) == r) {
            return Some(Membership::Base);
        }
        let hits: Vec<(u64, Ordinal)> = self
            .memo
            .iter()
            .filter(|(_, e)| e.notation < *alpha && e.len == r.len())
            .map(|(&g, e)| (g, e.notation.clone()))
            .collect();
        hits.into_iter().find(|(g, _)| *self.materialize(*g) == r).map(|(_, n)| Membership::Stage(n))
    }
}
