//! Primitive-recursive functions: an IR with an interpreter, a compiler to
//! graph formulas of arithmetic, and a bounded evaluator for closed formulas.
//!
//! The compiler emits, for `f` of arity `k`, a formula `G(x1..xk, y)` that
//! holds in the standard model iff `f(x1..xk) = y`. Composition and the
//! initial functions compile structurally, primitive recursion states the
//! existence of a β-coded value sequence, and bounded search becomes a
//! bounded quantifier. All inner existentials are bounded by one leading
//! variable, so the output is Σ₁. The evaluator rules are in `EVAL.md`.

pub mod arith;
pub mod beta;
pub mod build;
pub mod checker;
pub mod compile;
pub mod eval;
mod ir;
pub mod strings;
pub mod text;

use thiserror::Error;

pub use beta::{beta, beta_witness};
pub use compile::{compile_graph, compile_pr_graph, compile_pr_graph_with, is_delta0, is_sigma1, CompileOptions, CompiledFormula};
pub use eval::{eval_formula, eval_formula_with, EvalError, EvalRules, Truth};
pub use ir::{eval_pr, eval_pr_pure, eval_pr_with, Named, NativeFn, PrFunction, PrKind, Template};
pub use checker::{neg_code, negation_variant, proof_predicate_pr, stage0_decider};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PrError {
    #[error("arity mismatch in {context}: expected {expected}, found {found}")]
    ArityMismatch { context: &'static str, expected: usize, found: usize },
    #[error("projection index {index} out of range for arity {arity}")]
    ProjectionOutOfRange { arity: usize, index: usize },
    #[error("composition needs at least one inner function")]
    EmptyComposition,
}
