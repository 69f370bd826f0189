use syntax::{bound_vars, substitute, Formula, FormulaKind, Term, TermKind, Var};

/// Logical axiom schemas, numbered by their code id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Schema {
    /// `A -> (B -> A)`
    K = 1,
    /// `(A -> B) -> ((A -> (B -> C)) -> (A -> C))`
    S = 2,
    /// `A -> (B -> A & B)`
    AndIntro = 3,
    /// `A & B -> A`
    AndLeft = 4,
    /// `A & B -> B`
    AndRight = 5,
    /// `A -> A | B`
    OrLeft = 6,
    /// `B -> A | B`
    OrRight = 7,
    /// `(A -> C) -> ((B -> C) -> (A | B -> C))`
    OrElim = 8,
    /// `(A -> B) -> ((A -> ~B) -> ~A)`
    NotIntro = 9,
    /// `~~A -> A`
    DoubleNeg = 10,
    /// `all x A -> A[x:=t]`
    ForallElim = 11,
    /// `A[x:=t] -> exists x A`
    ExistsIntro = 12,
    /// `all x (C -> A) -> (C -> all x A)`, x not occurring in C
    ForallDist = 13,
    /// `all x (A -> C) -> (exists x A -> C)`, x not occurring in C
    ExistsElim = 14,
    /// `t = t`
    EqRefl = 15,
    /// `A[x:=0] & all x (A -> A[x:=Sx]) -> A`
    Induction = 16,
}

pub const ALL_SCHEMAS: [Schema; 16] = [
    Schema::K,
    Schema::S,
    Schema::AndIntro,
    Schema::AndLeft,
    Schema::AndRight,
    Schema::OrLeft,
    Schema::OrRight,
    Schema::OrElim,
    Schema::NotIntro,
    Schema::DoubleNeg,
    Schema::ForallElim,
    Schema::ExistsIntro,
    Schema::ForallDist,
    Schema::ExistsElim,
    Schema::EqRefl,
    Schema::Induction,
];

/// Kind of one instantiation slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    Formula,
    Term,
    Var,
}

/// One instantiation item.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Item {
    Formula(Formula),
    Term(Term),
    Var(Var),
}

impl Schema {
    pub fn id(self) -> u32 {
        self as u32
    }

    pub fn from_id(id: u32) -> Option<Schema> {
        ALL_SCHEMAS.get((id as usize).checked_sub(1)?).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            Schema::K => "K",
            Schema::S => "S",
            Schema::AndIntro => "and-intro",
            Schema::AndLeft => "and-left",
            Schema::AndRight => "and-right",
            Schema::OrLeft => "or-left",
            Schema::OrRight => "or-right",
            Schema::OrElim => "or-elim",
            Schema::NotIntro => "not-intro",
            Schema::DoubleNeg => "double-neg",
            Schema::ForallElim => "forall-elim",
            Schema::ExistsIntro => "exists-intro",
            Schema::ForallDist => "forall-dist",
            Schema::ExistsElim => "exists-elim",
            Schema::EqRefl => "eq-refl",
            Schema::Induction => "induction",
        }
    }

    pub fn from_name(name: &str) -> Option<Schema> {
        ALL_SCHEMAS.iter().copied().find(|s| s.name() == name)
    }

    /// Slots in instantiation order.
    pub fn slots(self) -> &'static [Slot] {
        use Slot::*;
        match self {
            Schema::K | Schema::AndIntro | Schema::AndLeft | Schema::AndRight => &[Formula, Formula],
            Schema::OrLeft | Schema::OrRight | Schema::NotIntro => &[Formula, Formula],
            Schema::S | Schema::OrElim => &[Formula, Formula, Formula],
            Schema::DoubleNeg => &[Formula],
            Schema::ForallElim | Schema::ExistsIntro => &[Var, Formula, Term],
            Schema::ForallDist | Schema::ExistsElim => &[Var, Formula, Formula],
            Schema::EqRefl => &[Term],
            Schema::Induction => &[Var, Formula],
        }
    }

    /// The instance described by `inst`, or `None` when the items do not fit
    /// the slots or a side condition fails.
    pub fn instance(self, inst: &[Item]) -> Option<Formula> {
        if inst.len() != self.slots().len() {
            return None;
        }
        let fm = |i: usize| match &inst[i] {
            Item::Formula(f) => Some(f.clone()),
            _ => None,
        };
        let tm = |i: usize| match &inst[i] {
            Item::Term(t) => Some(t.clone()),
            _ => None,
        };
        let vr = |i: usize| match &inst[i] {
            Item::Var(v) => Some(*v),
            _ => None,
        };
        let imp = Formula::implies;
        Some(match self {
            Schema::K => {
                let (a, b) = (fm(0)?, fm(1)?);
                imp(a.clone(), imp(b, a))
            }
            Schema::S => {
                let (a, b, c) = (fm(0)?, fm(1)?, fm(2)?);
                imp(
                    imp(a.clone(), b.clone()),
                    imp(imp(a.clone(), imp(b, c.clone())), imp(a, c)),
                )
            }
            Schema::AndIntro => {
                let (a, b) = (fm(0)?, fm(1)?);
                imp(a.clone(), imp(b.clone(), Formula::and(a, b)))
            }
            Schema::AndLeft => {
                let (a, b) = (fm(0)?, fm(1)?);
                imp(Formula::and(a.clone(), b), a)
            }
            Schema::AndRight => {
                let (a, b) = (fm(0)?, fm(1)?);
                imp(Formula::and(a, b.clone()), b)
            }
            Schema::OrLeft => {
                let (a, b) = (fm(0)?, fm(1)?);
                imp(a.clone(), Formula::or(a, b))
            }
            Schema::OrRight => {
                let (a, b) = (fm(0)?, fm(1)?);
                imp(b.clone(), Formula::or(a, b))
            }
            Schema::OrElim => {
                let (a, b, c) = (fm(0)?, fm(1)?, fm(2)?);
                imp(
                    imp(a.clone(), c.clone()),
                    imp(imp(b.clone(), c.clone()), imp(Formula::or(a, b), c)),
                )
            }
            Schema::NotIntro => {
                let (a, b) = (fm(0)?, fm(1)?);
                imp(
                    imp(a.clone(), b.clone()),
                    imp(imp(a.clone(), Formula::not(b)), Formula::not(a)),
                )
            }
            Schema::DoubleNeg => {
                let a = fm(0)?;
                imp(Formula::not(Formula::not(a.clone())), a)
            }
            Schema::ForallElim => {
                let (x, a, t) = (vr(0)?, fm(1)?, tm(2)?);
                if !substitutable(&a, x, &t) {
                    return None;
                }
                imp(Formula::forall(x, a.clone()), substitute(&a, x, &t))
            }
            Schema::ExistsIntro => {
                let (x, a, t) = (vr(0)?, fm(1)?, tm(2)?);
                if !substitutable(&a, x, &t) {
                    return None;
                }
                imp(substitute(&a, x, &t), Formula::exists(x, a))
            }
            Schema::ForallDist => {
                let (x, c, a) = (vr(0)?, fm(1)?, fm(2)?);
                if occurs(&c, x) {
                    return None;
                }
                imp(
                    Formula::forall(x, imp(c.clone(), a.clone())),
                    imp(c, Formula::forall(x, a)),
                )
            }
            Schema::ExistsElim => {
                let (x, a, c) = (vr(0)?, fm(1)?, fm(2)?);
                if occurs(&c, x) {
                    return None;
                }
                imp(
                    Formula::forall(x, imp(a.clone(), c.clone())),
                    imp(Formula::exists(x, a), c),
                )
            }
            Schema::EqRefl => {
                let t = tm(0)?;
                Formula::eq(t.clone(), t)
            }
            Schema::Induction => {
                let (x, a) = (vr(0)?, fm(1)?);
                let sx = Term::succ(Term::var(x));
                if !substitutable(&a, x, &sx) {
                    return None;
                }
                let base = substitute(&a, x, &Term::zero());
                let step = Formula::forall(x, imp(a.clone(), substitute(&a, x, &sx)));
                imp(Formula::and(base, step), a)
            }
        })
    }

    /// Whether `phi` is an instance of this schema, found by matching.
    pub fn matches(self, phi: &Formula) -> bool {
        use FormulaKind as F;
        let two = |f: &Formula| match f.kind() {
            F::Implies(a, b) => Some((a.clone(), b.clone())),
            _ => None,
        };
        let check = |inst: Vec<Item>| self.instance(&inst).as_ref() == Some(phi);
        let Some((lhs, rhs)) = two(phi) else {
            return match (self, phi.kind()) {
                (Schema::EqRefl, F::Eq(a, b)) => a == b,
                _ => false,
            };
        };
        match self {
            Schema::K | Schema::AndIntro | Schema::OrLeft => match rhs.kind() {
                F::Implies(b, _) if self == Schema::K || self == Schema::AndIntro => {
                    check(vec![Item::Formula(lhs), Item::Formula(b.clone())])
                }
                F::Or(_, b) => check(vec![Item::Formula(lhs), Item::Formula(b.clone())]),
                _ => false,
            },
            Schema::OrRight => match rhs.kind() {
                F::Or(a, _) => check(vec![Item::Formula(a.clone()), Item::Formula(lhs)]),
                _ => false,
            },
            Schema::S => match (lhs.kind(), rhs.kind()) {
                (F::Implies(a, b), F::Implies(_, ac)) => match ac.kind() {
                    F::Implies(_, c) => check(vec![
                        Item::Formula(a.clone()),
                        Item::Formula(b.clone()),
                        Item::Formula(c.clone()),
                    ]),
                    _ => false,
                },
                _ => false,
            },
            Schema::AndLeft | Schema::AndRight => match lhs.kind() {
                F::And(a, b) => check(vec![Item::Formula(a.clone()), Item::Formula(b.clone())]),
                _ => false,
            },
            Schema::OrElim => match (lhs.kind(), rhs.kind()) {
                (F::Implies(a, c), F::Implies(bc, _)) => match bc.kind() {
                    F::Implies(b, _) => check(vec![
                        Item::Formula(a.clone()),
                        Item::Formula(b.clone()),
                        Item::Formula(c.clone()),
                    ]),
                    _ => false,
                },
                _ => false,
            },
            Schema::NotIntro => match lhs.kind() {
                F::Implies(a, b) => check(vec![Item::Formula(a.clone()), Item::Formula(b.clone())]),
                _ => false,
            },
            Schema::DoubleNeg => check(vec![Item::Formula(rhs)]),
            Schema::ForallElim => match lhs.kind() {
                F::ForAll(x, a) => {
                    let t = find_image(a, &rhs, *x).unwrap_or_else(Term::zero);
                    check(vec![Item::Var(*x), Item::Formula(a.clone()), Item::Term(t)])
                }
                _ => false,
            },
            Schema::ExistsIntro => match rhs.kind() {
                F::Exists(x, a) => {
                    let t = find_image(a, &lhs, *x).unwrap_or_else(Term::zero);
                    check(vec![Item::Var(*x), Item::Formula(a.clone()), Item::Term(t)])
                }
                _ => false,
            },
            Schema::ForallDist => match lhs.kind() {
                F::ForAll(x, body) => match body.kind() {
                    F::Implies(c, a) => check(vec![
                        Item::Var(*x),
                        Item::Formula(c.clone()),
                        Item::Formula(a.clone()),
                    ]),
                    _ => false,
                },
                _ => false,
            },
            Schema::ExistsElim => match lhs.kind() {
                F::ForAll(x, body) => match body.kind() {
                    F::Implies(a, c) => check(vec![
                        Item::Var(*x),
                        Item::Formula(a.clone()),
                        Item::Formula(c.clone()),
                    ]),
                    _ => false,
                },
                _ => false,
            },
            Schema::EqRefl => false,
            Schema::Induction => match lhs.kind() {
                F::And(_, step) => match step.kind() {
                    F::ForAll(x, _) => check(vec![Item::Var(*x), Item::Formula(rhs)]),
                    _ => false,
                },
                _ => false,
            },
        }
    }
}

/// `x` occurs in `f`, free or bound.
pub fn occurs(f: &Formula, x: Var) -> bool {
    f.has_free(x) || bound_vars(f).contains(&x)
}

/// Side condition for `A[x:=t]`: `x` is not bound in `A` and no variable of
/// `t` is bound in `A`. Under it the substitution is a plain replacement.
pub fn substitutable(a: &Formula, x: Var, t: &Term) -> bool {
    let bound = bound_vars(a);
    !bound.contains(&x) && t.free_vars().iter().all(|v| !bound.contains(v))
}

/// The term standing at the first occurrence of `x` in `a` within `b`, if
/// `b` has the same shape as `a` up to that occurrence.
fn find_image(a: &Formula, b: &Formula, x: Var) -> Option<Term> {
    use FormulaKind as F;
    match (a.kind(), b.kind()) {
        (F::Eq(s1, t1), F::Eq(s2, t2)) | (F::Le(s1, t1), F::Le(s2, t2)) => {
            term_image(s1, s2, x).or_else(|| term_image(t1, t2, x))
        }
        (F::Not(a1), F::Not(b1)) => find_image(a1, b1, x),
        (F::Or(a1, a2), F::Or(b1, b2))
        | (F::And(a1, a2), F::And(b1, b2))
        | (F::Implies(a1, a2), F::Implies(b1, b2)) => {
            find_image(a1, b1, x).or_else(|| find_image(a2, b2, x))
        }
        (F::ForAll(_, a1), F::ForAll(_, b1)) | (F::Exists(_, a1), F::Exists(_, b1)) => {
            find_image(a1, b1, x)
        }
        _ => None,
    }
}

fn term_image(s: &Term, t: &Term, x: Var) -> Option<Term> {
    if !s.has_free(x) {
        return None;
    }
    match (s.kind(), t.kind()) {
        (TermKind::Var(v), _) if *v == x => Some(t.clone()),
        (TermKind::Succ(a), TermKind::Succ(b)) => term_image(a, b, x),
        (TermKind::Plus(a1, a2), TermKind::Plus(b1, b2))
        | (TermKind::Times(a1, a2), TermKind::Times(b1, b2)) => {
            term_image(a1, b1, x).or_else(|| term_image(a2, b2, x))
        }
        _ => None,
    }
}
