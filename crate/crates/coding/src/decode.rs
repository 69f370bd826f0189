use calculus::{Item, Justification, Proof, Schema, Step};
use num_bigint::BigUint;
use syntax::{Formula, Term, Var};

use crate::{pack_digits, unpack_digits, CodingError, Symbol};

/// Partially decoded operand. `Bits` is a binary prefix chain still waiting
/// for its terminal to become a variable or a natural.
enum Val {
    Term(Term),
    Formula(Formula),
    /// (value, canonical): a leading `BIT0` makes the numeral non-canonical.
    Var(u64, bool),
    Nat(u64, bool),
    Item(Item),
    List(Vec<Item>),
    Just(Justification),
    Step(Step),
    Steps(Vec<Step>),
}

#[derive(Clone, Copy)]
enum Category {
    Term,
    Formula,
    Proof,
}

impl Category {
    fn error(self, digits: &[u8], offset: usize) -> CodingError {
        let code = pack_digits(digits);
        match self {
            Category::Term => CodingError::NotATermCode { code, offset },
            Category::Formula => CodingError::NotAFormulaCode { code, offset },
            Category::Proof => CodingError::NotAProofCode { code, offset },
        }
    }
}

fn var_of(v: u64) -> Option<Var> {
    Var::try_from(v).ok()
}

/// Parses the digit string in reverse: each symbol pops its arguments (which
/// appear to its right) and pushes its result. No recursion, so arbitrarily
/// deep expressions decode in constant stack.
fn parse(digits: &[u8], cat: Category) -> Result<Val, CodingError> {
    let tag = match cat {
        Category::Term => Symbol::TagTerm,
        Category::Formula => Symbol::TagFormula,
        Category::Proof => Symbol::TagProof,
    };
    if digits.first().copied() != Some(tag.digit()) {
        return Err(cat.error(digits, 0));
    }
    let mut stack: Vec<Val> = Vec::new();
    for pos in (1..digits.len()).rev() {
        let bad = || cat.error(digits, pos);
        let sym = Symbol::from_digit(digits[pos]).ok_or_else(bad)?;
        macro_rules! pop {
            () => {
                stack.pop().ok_or_else(bad)?
            };
        }
        let term = |v: Val| match v {
            Val::Term(t) => Some(t),
            Val::Var(v, true) => var_of(v).map(Term::var),
            _ => None,
        };
        let formula = |v: Val| match v {
            Val::Formula(f) => Some(f),
            _ => None,
        };
        let var = |v: Val| match v {
            Val::Var(v, true) => var_of(v),
            _ => None,
        };
        let nat = |v: Val| match v {
            Val::Nat(n, true) => usize::try_from(n).ok(),
            _ => None,
        };
        let out = match sym {
            Symbol::Zero => Val::Term(Term::zero()),
            Symbol::Var => Val::Var(0, true),
            Symbol::Nat => Val::Nat(0, true),
            Symbol::Bit0 | Symbol::Bit1 => {
                let bit = (sym == Symbol::Bit1) as u64;
                // the chain below has `width` digits already; prepend this one
                let (v, is_var) = match pop!() {
                    Val::Var(v, _) => (v, true),
                    Val::Nat(v, _) => (v, false),
                    _ => return Err(bad()),
                };
                let width = bit_width(&digits[pos + 1..]);
                if width >= 32 {
                    return Err(bad());
                }
                let v = v | (bit << width);
                if is_var {
                    Val::Var(v, bit == 1)
                } else {
                    Val::Nat(v, bit == 1)
                }
            }
            Symbol::Succ => Val::Term(Term::succ(term(pop!()).ok_or_else(bad)?)),
            Symbol::Plus | Symbol::Times => {
                let a = term(pop!()).ok_or_else(bad)?;
                let b = term(pop!()).ok_or_else(bad)?;
                Val::Term(if sym == Symbol::Plus { Term::plus(a, b) } else { Term::times(a, b) })
            }
            Symbol::Eq | Symbol::Le => {
                let a = term(pop!()).ok_or_else(bad)?;
                let b = term(pop!()).ok_or_else(bad)?;
                Val::Formula(if sym == Symbol::Eq { Formula::eq(a, b) } else { Formula::le(a, b) })
            }
            Symbol::Not => Val::Formula(Formula::not(formula(pop!()).ok_or_else(bad)?)),
            Symbol::Or | Symbol::And | Symbol::Implies => {
                let a = formula(pop!()).ok_or_else(bad)?;
                let b = formula(pop!()).ok_or_else(bad)?;
                Val::Formula(match sym {
                    Symbol::Or => Formula::or(a, b),
                    Symbol::And => Formula::and(a, b),
                    _ => Formula::implies(a, b),
                })
            }
            Symbol::ForAll | Symbol::Exists => {
                let v = var(pop!()).ok_or_else(bad)?;
                let a = formula(pop!()).ok_or_else(bad)?;
                Val::Formula(if sym == Symbol::ForAll { Formula::forall(v, a) } else { Formula::exists(v, a) })
            }
            Symbol::TagTerm => Val::Item(Item::Term(term(pop!()).ok_or_else(bad)?)),
            Symbol::TagFormula => Val::Item(Item::Formula(formula(pop!()).ok_or_else(bad)?)),
            Symbol::TagProof => return Err(bad()),
            Symbol::Nil => Val::List(Vec::new()),
            Symbol::Cons => {
                let head = pop!();
                let tail = pop!();
                match (head, tail) {
                    (Val::Step(s), Val::Steps(mut rest)) => {
                        rest.push(s);
                        Val::Steps(rest)
                    }
                    (Val::Step(s), Val::List(rest)) if rest.is_empty() => Val::Steps(vec![s]),
                    (Val::Item(it), Val::List(mut rest)) => {
                        rest.push(it);
                        Val::List(rest)
                    }
                    (Val::Var(v, true), Val::List(mut rest)) => {
                        rest.push(Item::Var(var_of(v).ok_or_else(bad)?));
                        Val::List(rest)
                    }
                    _ => return Err(bad()),
                }
            }
            Symbol::AxiomNonLogical => Val::Just(Justification::AxiomNonLogical),
            Symbol::AxiomLogical => {
                let id = nat(pop!()).ok_or_else(bad)?;
                let schema = u32::try_from(id).ok().and_then(Schema::from_id).ok_or_else(bad)?;
                let mut items = match pop!() {
                    Val::List(items) => items,
                    _ => return Err(bad()),
                };
                items.reverse();
                Val::Just(Justification::AxiomLogical(schema, items))
            }
            Symbol::ModusPonens => {
                let i = nat(pop!()).ok_or_else(bad)?;
                let j = nat(pop!()).ok_or_else(bad)?;
                Val::Just(Justification::ModusPonens(i, j))
            }
            Symbol::Generalization => {
                let i = nat(pop!()).ok_or_else(bad)?;
                let v = var(pop!()).ok_or_else(bad)?;
                Val::Just(Justification::Generalization(i, v))
            }
            Symbol::Step => {
                let formula = formula(pop!()).ok_or_else(bad)?;
                let justification = match pop!() {
                    Val::Just(j) => j,
                    _ => return Err(bad()),
                };
                Val::Step(Step { formula, justification })
            }
        };
        stack.push(out);
    }
    let end = digits.len();
    match (stack.pop(), stack.is_empty()) {
        (Some(v), true) => Ok(v),
        _ => Err(cat.error(digits, end)),
    }
}

/// Number of binary digits in the `BIT` chain starting at `rest[0]`.
fn bit_width(rest: &[u8]) -> u32 {
    rest.iter()
        .take_while(|&&d| d == Symbol::Bit0.digit() || d == Symbol::Bit1.digit())
        .count() as u32
}

pub fn decode_term(code: &BigUint) -> Result<Term, CodingError> {
    let code = &unpack_digits(code)[..];
    match parse(code, Category::Term)? {
        Val::Term(t) => Ok(t),
        Val::Var(v, true) => var_of(v).map(Term::var).ok_or_else(|| Category::Term.error(code, 1)),
        _ => Err(Category::Term.error(code, 1)),
    }
}

pub fn decode_formula(code: &BigUint) -> Result<Formula, CodingError> {
    decode_formula_digits(&unpack_digits(code))
}

/// [`decode_formula`] on the digit string of a code.
pub fn decode_formula_digits(code: &[u8]) -> Result<Formula, CodingError> {
    match parse(code, Category::Formula)? {
        Val::Formula(f) => Ok(f),
        _ => Err(Category::Formula.error(code, 1)),
    }
}

pub fn decode_proof(code: &BigUint) -> Result<Proof, CodingError> {
    let code = &unpack_digits(code)[..];
    match parse(code, Category::Proof)? {
        Val::Steps(mut steps) => {
            steps.reverse();
            Ok(Proof { steps })
        }
        Val::List(items) if items.is_empty() => Ok(Proof::new()),
        _ => Err(Category::Proof.error(code, 1)),
    }
}
