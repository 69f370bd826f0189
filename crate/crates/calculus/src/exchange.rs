//! JSON proof exchange format.
//!
//! ```json
//! {"steps": [
//!   {"formula": "0=0", "by": "axiom-logical", "schema": "eq-refl", "inst": [{"term": "0"}]},
//!   {"formula": "a+0=a", "by": "axiom-nonlogical"},
//!   {"formula": "...", "by": "modus-ponens", "premise": 0, "implication": 1},
//!   {"formula": "all a a+0=a", "by": "generalization", "premise": 1, "var": "a"}
//! ]}
//! ```

use serde::{Deserialize, Serialize};
use syntax::{parse_formula, parse_term, print_formula, print_term, var_name, Formula};
use thiserror::Error;

use crate::{Item, Justification, Proof, Schema, Step};

#[derive(Debug, Error)]
pub enum ExchangeError {
    #[error("malformed proof document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("step {step}: {source}")]
    Syntax { step: usize, source: syntax::SyntaxError },
    #[error("step {step}: unknown schema {name:?}")]
    UnknownSchema { step: usize, name: String },
    #[error("step {step}: bad variable {name:?}")]
    BadVar { step: usize, name: String },
}

#[derive(Serialize, Deserialize)]
struct Doc {
    steps: Vec<DocStep>,
}

#[derive(Serialize, Deserialize)]
struct DocStep {
    formula: String,
    #[serde(flatten)]
    by: DocJust,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "by", rename_all = "kebab-case")]
enum DocJust {
    AxiomLogical { schema: String, inst: Vec<DocItem> },
    AxiomNonlogical,
    ModusPonens { premise: usize, implication: usize },
    Generalization { premise: usize, var: String },
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum DocItem {
    Formula(String),
    Term(String),
    Var(String),
}

pub fn proof_to_json(p: &Proof) -> String {
    let steps = p
        .steps
        .iter()
        .map(|s| DocStep {
            formula: print_formula(&s.formula),
            by: match &s.justification {
                Justification::AxiomLogical(schema, inst) => DocJust::AxiomLogical {
                    schema: schema.name().to_string(),
                    inst: inst
                        .iter()
                        .map(|it| match it {
                            Item::Formula(f) => DocItem::Formula(print_formula(f)),
                            Item::Term(t) => DocItem::Term(print_term(t)),
                            Item::Var(v) => DocItem::Var(var_name(*v)),
                        })
                        .collect(),
                },
                Justification::AxiomNonLogical => DocJust::AxiomNonlogical,
                Justification::ModusPonens(i, j) => DocJust::ModusPonens { premise: *i, implication: *j },
                Justification::Generalization(i, v) => {
                    DocJust::Generalization { premise: *i, var: var_name(*v) }
                }
            },
        })
        .collect();
    serde_json::to_string_pretty(&Doc { steps }).expect("proof serializes")
}

fn parse_var(step: usize, name: &str) -> Result<syntax::Var, ExchangeError> {
    let bad = || ExchangeError::BadVar { step, name: name.to_string() };
    let f: Formula = parse_formula(&format!("{name}=0")).map_err(|_| bad())?;
    match f.free_vars() {
        [v] => Ok(*v),
        _ => Err(bad()),
    }
}

pub fn proof_from_json(text: &str) -> Result<Proof, ExchangeError> {
    let doc: Doc = serde_json::from_str(text)?;
    let mut p = Proof::new();
    for (k, s) in doc.steps.into_iter().enumerate() {
        let syn = |source| ExchangeError::Syntax { step: k, source };
        let formula = parse_formula(&s.formula).map_err(syn)?;
        let justification = match s.by {
            DocJust::AxiomLogical { schema, inst } => {
                let sch = Schema::from_name(&schema)
                    .ok_or(ExchangeError::UnknownSchema { step: k, name: schema })?;
                let mut items = Vec::new();
                for it in inst {
                    items.push(match it {
                        DocItem::Formula(f) => Item::Formula(parse_formula(&f).map_err(syn)?),
                        DocItem::Term(t) => Item::Term(parse_term(&t).map_err(syn)?),
                        DocItem::Var(v) => Item::Var(parse_var(k, &v)?),
                    });
                }
                Justification::AxiomLogical(sch, items)
            }
            DocJust::AxiomNonlogical => Justification::AxiomNonLogical,
            DocJust::ModusPonens { premise, implication } => Justification::ModusPonens(premise, implication),
            DocJust::Generalization { premise, var } => Justification::Generalization(premise, parse_var(k, &var)?),
        };
        p.steps.push(Step { formula, justification });
    }
    Ok(p)
}
