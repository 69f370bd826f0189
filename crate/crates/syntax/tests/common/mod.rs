#![allow(dead_code)]

use std::collections::HashMap;

use num_bigint::BigUint;
pub use syntax::random::{random_formula, random_term};
use syntax::{denote, Formula, FormulaKind, Var};

/// Truth with quantifiers ranging over `0..=dom`; terms evaluate in the
/// naturals. The substitution lemma holds for this semantics as well.
pub fn truth(f: &Formula, env: &mut HashMap<Var, BigUint>, dom: u32) -> bool {
    match f.kind() {
        FormulaKind::Eq(a, b) => denote(a, env) == denote(b, env),
        FormulaKind::Le(a, b) => denote(a, env) <= denote(b, env),
        FormulaKind::Not(a) => !truth(a, env, dom),
        FormulaKind::Or(a, b) => truth(a, env, dom) || truth(b, env, dom),
        FormulaKind::And(a, b) => truth(a, env, dom) && truth(b, env, dom),
        FormulaKind::Implies(a, b) => !truth(a, env, dom) || truth(b, env, dom),
        FormulaKind::ForAll(v, a) | FormulaKind::Exists(v, a) => {
            let universal = matches!(f.kind(), FormulaKind::ForAll(..));
            let saved = env.get(v).cloned();
            let mut result = universal;
            for x in 0..=dom {
                env.insert(*v, BigUint::from(x));
                if truth(a, env, dom) != universal {
                    result = !universal;
                    break;
                }
            }
            match saved {
                Some(s) => env.insert(*v, s),
                None => env.remove(v),
            };
            result
        }
    }
}
