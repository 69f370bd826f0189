//! The Rosser host formula `all b (~A(a,b) | exists c (c <= b & B(a,c)))`.
//!
//! `A(a, b)` says that `b` proves the diagonalization of `a` and `B(a, c)`
//! that `c` proves its negation, both in the stage system. The stage enters
//! only through two numerals, the unary numeral of its ordinal code and the
//! efficient numeral of its encoded sign policy:
//!
//! ```text
//! A(a, b) = exists o (o = NUM & exists p (p = POL & exists x (x = a & G_A(x, b, o, p))))
//! ```
//!
//! where `G_A` is the compiled graph of the proof predicate at output 1.
//! `B` is the same with `c` and the negation variant. The variable `a`
//! occurs exactly twice, so the diagonal numeral is copied only twice.

use arith_compiler::build::*;
use arith_compiler::{compile_graph, negation_variant, proof_predicate_pr, CompileOptions};
use num_bigint::BigUint;
use syntax::{efficient_numeral, numeral, Formula, Term, Var, VAR_A, VAR_B, VAR_C};

use crate::ir::{diag, stage_decider};

pub const VAR_O: Var = 3;
pub const VAR_X: Var = 4;
pub const VAR_P: Var = 5;
const FIRST_BOUND: Var = 6;

/// The stage-independent parts of every host formula.
#[derive(Clone)]
pub struct HostTemplate {
    /// `G_A(x, b, o, p)`.
    pub left_graph: Formula,
    /// `G_B(x, c, o, p)`.
    pub right_graph: Formula,
}

/// `f(x, q, o, p) = pp(diag(x), q, x, o, p)` for a proof predicate `pp`.
fn diagonal_predicate(pp: &Pr) -> Pr {
    call(pp, &[call(&diag(), &[proj(4, 0)]), proj(4, 1), proj(4, 0), proj(4, 2), proj(4, 3)])
}

impl HostTemplate {
    pub fn new() -> Self {
        let dec = stage_decider();
        let proves = diagonal_predicate(&proof_predicate_pr(&dec));
        let refutes = diagonal_predicate(&negation_variant(&dec));
        let one = Term::succ(Term::zero());
        let (x, o, p) = (Term::var(VAR_X), Term::var(VAR_O), Term::var(VAR_P));
        let opts = CompileOptions::default();
        let left_graph = compile_graph(&proves, &[x.clone(), Term::var(VAR_B), o.clone(), p.clone()], &one, FIRST_BOUND, opts);
        let right_graph = compile_graph(&refutes, &[x, Term::var(VAR_C), o, p], &one, FIRST_BOUND, opts);
        HostTemplate { left_graph, right_graph }
    }

    fn side(&self, graph: &Formula, stage_code: u64, policy: &BigUint) -> Formula {
        let var = Term::var;
        let inner = Formula::exists(VAR_X, Formula::and(Formula::eq(var(VAR_X), var(VAR_A)), graph.clone()));
        let pol = Formula::exists(VAR_P, Formula::and(Formula::eq(var(VAR_P), efficient_numeral(policy)), inner));
        Formula::exists(VAR_O, Formula::and(Formula::eq(var(VAR_O), numeral(stage_code)), pol))
    }

    /// `A(a, b)` for the stage with ordinal code `stage_code` and encoded policy `policy`.
    pub fn proves(&self, stage_code: u64, policy: &BigUint) -> Formula {
        self.side(&self.left_graph, stage_code, policy)
    }

    /// `B(a, c)` for the stage with ordinal code `stage_code` and encoded policy `policy`.
    pub fn refutes(&self, stage_code: u64, policy: &BigUint) -> Formula {
        self.side(&self.right_graph, stage_code, policy)
    }

    /// The host formula, with free variable `a`.
    pub fn host(&self, stage_code: u64, policy: &BigUint) -> Formula {
        let (b, c) = (Term::var(VAR_B), Term::var(VAR_C));
        let right = Formula::exists(VAR_C, Formula::and(Formula::le(c, b), self.refutes(stage_code, policy)));
        Formula::forall(VAR_B, Formula::or(Formula::not(self.proves(stage_code, policy)), right))
    }
}

impl Default for HostTemplate {
    fn default() -> Self {
        Self::new()
    }
}
