//! The base system: a Hilbert-style first-order number theory.
//!
//! Axioms are the logical schemas in [`Schema`] plus the fixed arithmetic
//! axioms in [`arithmetic_axioms`]. Rules are modus ponens and
//! generalization. Proofs are flat step lists and are only ever checked,
//! never searched for.

use std::sync::LazyLock;

use syntax::{parse_formula, Formula, Var};
use thiserror::Error;

pub mod corpus;
mod exchange;
mod schemas;

pub use exchange::{proof_from_json, proof_to_json, ExchangeError};
pub use schemas::{occurs, substitutable, Item, Schema, Slot, ALL_SCHEMAS};
pub use syntax::negate;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Justification {
    /// Instance of a logical schema with the given instantiation.
    AxiomLogical(Schema, Vec<Item>),
    /// Accepted when the nonlogical axiom decider accepts the formula.
    AxiomNonLogical,
    /// From step `i` (`A`) and step `j` (`A -> B`).
    ModusPonens(usize, usize),
    /// From step `i` (`A`) to `all x A`.
    Generalization(usize, Var),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Step {
    pub formula: Formula,
    pub justification: Justification,
}

/// Inert proof data; validity is established by [`check_proof`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Proof {
    pub steps: Vec<Step>,
}

impl Proof {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a step and returns its index.
    pub fn push(&mut self, formula: Formula, justification: Justification) -> usize {
        self.steps.push(Step { formula, justification });
        self.steps.len() - 1
    }

    pub fn conclusion(&self) -> Option<&Formula> {
        self.steps.last().map(|s| &s.formula)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CheckError {
    #[error("empty proof")]
    Empty,
    #[error("step {step}: reference to step {target} is not earlier")]
    BadReference { step: usize, target: usize },
    #[error("step {step}: instantiation does not fit schema {schema:?}")]
    BadInstantiation { step: usize, schema: Schema },
    #[error("step {step}: formula is not the schema instance")]
    NotInstance { step: usize },
    #[error("step {step}: rejected by the nonlogical axiom decider")]
    NotAxiom { step: usize },
    #[error("step {step}: modus ponens premises do not fit")]
    BadModusPonens { step: usize },
    #[error("step {step}: generalization does not fit")]
    BadGeneralization { step: usize },
    #[error("last step does not match the target")]
    WrongConclusion,
}

const ARITHMETIC_AXIOMS: [&str; 10] = [
    "Sa=Sb -> a=b",
    "~Sa=0",
    "a=b -> (a=c -> b=c)",
    "a=b -> Sa=Sb",
    "a+0=a",
    "a+Sb=S(a+b)",
    "a*0=0",
    "a*Sb=a*b+a",
    "a<=b -> exists c c+a=b",
    "c+a=b -> a<=b",
];

static ARITHMETIC: LazyLock<Vec<Formula>> = LazyLock::new(|| {
    ARITHMETIC_AXIOMS
        .iter()
        .map(|s| parse_formula(s).expect("arithmetic axiom parses"))
        .collect()
});

/// The fixed nonlogical axioms of the base system, with free variables
/// `a`, `b`, `c`.
pub fn arithmetic_axioms() -> &'static [Formula] {
    &ARITHMETIC
}

/// Nonlogical axiom decider of the base system.
pub fn is_arithmetic_axiom(phi: &Formula) -> bool {
    ARITHMETIC.contains(phi)
}

/// Instance of some logical schema, found by matching.
pub fn is_logical_axiom(phi: &Formula) -> bool {
    ALL_SCHEMAS.iter().any(|s| s.matches(phi))
}

/// Axiom of the base system: logical schema instance, equality or induction
/// instance, or one of the fixed arithmetic axioms.
pub fn is_base_axiom(phi: &Formula) -> bool {
    is_arithmetic_axiom(phi) || is_logical_axiom(phi)
}

/// Checks every step and the conclusion; the error names the first failure.
pub fn check_proof_report(
    p: &Proof,
    target: &Formula,
    axiom_decider: &dyn Fn(&Formula) -> bool,
) -> Result<(), CheckError> {
    if p.steps.is_empty() {
        return Err(CheckError::Empty);
    }
    for (k, step) in p.steps.iter().enumerate() {
        let earlier = |i: usize| {
            if i < k {
                Ok(&p.steps[i].formula)
            } else {
                Err(CheckError::BadReference { step: k, target: i })
            }
        };
        match &step.justification {
            Justification::AxiomLogical(schema, inst) => {
                let inst = schema
                    .instance(inst)
                    .ok_or(CheckError::BadInstantiation { step: k, schema: *schema })?;
                if inst != step.formula {
                    return Err(CheckError::NotInstance { step: k });
                }
            }
            Justification::AxiomNonLogical => {
                if !axiom_decider(&step.formula) {
                    return Err(CheckError::NotAxiom { step: k });
                }
            }
            Justification::ModusPonens(i, j) => {
                let a = earlier(*i)?;
                let ab = earlier(*j)?;
                if *ab != Formula::implies(a.clone(), step.formula.clone()) {
                    return Err(CheckError::BadModusPonens { step: k });
                }
            }
            Justification::Generalization(i, x) => {
                let a = earlier(*i)?;
                if step.formula != Formula::forall(*x, a.clone()) {
                    return Err(CheckError::BadGeneralization { step: k });
                }
            }
        }
    }
    if p.conclusion() != Some(target) {
        return Err(CheckError::WrongConclusion);
    }
    Ok(())
}

/// True iff `p` is a valid proof of `target` with nonlogical axioms given by
/// `axiom_decider`.
pub fn check_proof(p: &Proof, target: &Formula, axiom_decider: &dyn Fn(&Formula) -> bool) -> bool {
    check_proof_report(p, target, axiom_decider).is_ok()
}
