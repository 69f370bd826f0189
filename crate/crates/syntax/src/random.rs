//! Seeded random terms and formulas for property tests and benchmarks.

use rand::Rng;

use crate::{Formula, Term};

/// Random term of roughly `budget` nodes over variables `0..vars`.
pub fn random_term<R: Rng>(rng: &mut R, budget: &mut i64, vars: u32) -> Term {
    *budget -= 1;
    if *budget <= 0 {
        return if rng.gen_bool(0.5) { Term::zero() } else { Term::var(rng.gen_range(0..vars)) };
    }
    match rng.gen_range(0..6) {
        0 => Term::zero(),
        1 => Term::var(rng.gen_range(0..vars)),
        2 | 3 => Term::succ(random_term(rng, budget, vars)),
        4 => {
            let a = random_term(rng, budget, vars);
            Term::plus(a, random_term(rng, budget, vars))
        }
        _ => {
            let a = random_term(rng, budget, vars);
            Term::times(a, random_term(rng, budget, vars))
        }
    }
}

/// Random formula of roughly `budget` nodes over variables `0..vars`.
pub fn random_formula<R: Rng>(rng: &mut R, budget: &mut i64, vars: u32) -> Formula {
    *budget -= 1;
    let pick = if *budget <= 0 { rng.gen_range(0..2) } else { rng.gen_range(0..9) };
    match pick {
        0 => {
            let a = random_term(rng, budget, vars);
            Formula::eq(a, random_term(rng, budget, vars))
        }
        1 => {
            let a = random_term(rng, budget, vars);
            Formula::le(a, random_term(rng, budget, vars))
        }
        2 => Formula::not(random_formula(rng, budget, vars)),
        3 => {
            let a = random_formula(rng, budget, vars);
            Formula::or(a, random_formula(rng, budget, vars))
        }
        4 => {
            let a = random_formula(rng, budget, vars);
            Formula::and(a, random_formula(rng, budget, vars))
        }
        5 => {
            let a = random_formula(rng, budget, vars);
            Formula::implies(a, random_formula(rng, budget, vars))
        }
        6 | 7 => Formula::forall(rng.gen_range(0..vars), random_formula(rng, budget, vars)),
        _ => Formula::exists(rng.gen_range(0..vars), random_formula(rng, budget, vars)),
    }
}
