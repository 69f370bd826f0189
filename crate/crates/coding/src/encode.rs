use calculus::{Item, Justification, Proof};
use num_bigint::BigUint;
use syntax::{Formula, FormulaKind, Term, TermKind, Var};

use crate::{pack_raw, Symbol};

/// Flattens expressions straight into packing digits (`digit - 1`, one byte
/// per symbol), so a code is built without an intermediate symbol tree.
#[derive(Default)]
pub struct Writer {
    raw: Vec<u8>,
}

enum Job<'a> {
    Term(&'a Term),
    /// Formula, and whether the streamed substitution still applies inside it.
    Formula(&'a Formula, bool),
}

impl Writer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.raw.len()
    }

    pub fn is_empty(&self) -> bool {
        self.raw.is_empty()
    }

    pub fn finish(self) -> BigUint {
        pack_raw(&self.raw)
    }

    /// The written string as digits (`1..=32`), without packing.
    pub fn into_digits(self) -> Vec<u8> {
        let mut d = self.raw;
        d.iter_mut().for_each(|x| *x += 1);
        d
    }

    pub fn symbol(&mut self, s: Symbol) {
        self.raw.push(s.digit() - 1);
    }

    /// Binary digits MSB first as `BIT0`/`BIT1` prefixes closed by `end`;
    /// zero is the bare terminal.
    pub fn natural(&mut self, n: u64, end: Symbol) {
        if n > 0 {
            for k in (0..64 - n.leading_zeros()).rev() {
                self.symbol(if (n >> k) & 1 == 1 { Symbol::Bit1 } else { Symbol::Bit0 });
            }
        }
        self.symbol(end);
    }

    pub fn var(&mut self, v: Var) {
        self.natural(v as u64, Symbol::Var);
    }

    pub fn term(&mut self, t: &Term) {
        self.run(vec![Job::Term(t)], None);
    }

    pub fn formula(&mut self, phi: &Formula) {
        self.run(vec![Job::Formula(phi, false)], None);
    }

    /// Writes `phi[x := t]` for closed `t` without building the substituted
    /// formula. Agrees with `syntax::substitute`, which never renames a
    /// binder when the replacement is closed.
    pub fn formula_subst(&mut self, phi: &Formula, x: Var, t: &Term) {
        assert!(t.is_closed(), "streamed substitution needs a closed replacement");
        self.run(vec![Job::Formula(phi, true)], Some((x, t)));
    }

    fn run<'a>(&mut self, mut stack: Vec<Job<'a>>, subst: Option<(Var, &'a Term)>) {
        while let Some(job) = stack.pop() {
            match job {
                Job::Term(t) => match t.kind() {
                    TermKind::Var(v) => match subst {
                        Some((x, r)) if *v == x => stack.push(Job::Term(r)),
                        _ => self.var(*v),
                    },
                    TermKind::Zero => self.symbol(Symbol::Zero),
                    TermKind::Succ(a) => {
                        self.symbol(Symbol::Succ);
                        stack.push(Job::Term(a));
                    }
                    TermKind::Plus(a, b) => {
                        self.symbol(Symbol::Plus);
                        stack.push(Job::Term(b));
                        stack.push(Job::Term(a));
                    }
                    TermKind::Times(a, b) => {
                        self.symbol(Symbol::Times);
                        stack.push(Job::Term(b));
                        stack.push(Job::Term(a));
                    }
                },
                Job::Formula(phi, live) => {
                    let live = live && subst.is_some_and(|(x, _)| phi.has_free(x));
                    let sub = if live { subst } else { None };
                    match phi.kind() {
                        FormulaKind::Eq(a, b) | FormulaKind::Le(a, b) => {
                            let s = if matches!(phi.kind(), FormulaKind::Eq(..)) { Symbol::Eq } else { Symbol::Le };
                            self.symbol(s);
                            // flushed now so the terms see exactly this scope's substitution
                            self.run(vec![Job::Term(b), Job::Term(a)], sub);
                        }
                        FormulaKind::Not(a) => {
                            self.symbol(Symbol::Not);
                            stack.push(Job::Formula(a, live));
                        }
                        FormulaKind::Or(a, b) | FormulaKind::And(a, b) | FormulaKind::Implies(a, b) => {
                            self.symbol(match phi.kind() {
                                FormulaKind::Or(..) => Symbol::Or,
                                FormulaKind::And(..) => Symbol::And,
                                _ => Symbol::Implies,
                            });
                            stack.push(Job::Formula(b, live));
                            stack.push(Job::Formula(a, live));
                        }
                        FormulaKind::ForAll(v, a) | FormulaKind::Exists(v, a) => {
                            let s = if matches!(phi.kind(), FormulaKind::ForAll(..)) { Symbol::ForAll } else { Symbol::Exists };
                            self.symbol(s);
                            self.var(*v);
                            stack.push(Job::Formula(a, live));
                        }
                    }
                }
            }
        }
    }

    pub fn item(&mut self, it: &Item) {
        match it {
            Item::Formula(f) => {
                self.symbol(Symbol::TagFormula);
                self.formula(f);
            }
            Item::Term(t) => {
                self.symbol(Symbol::TagTerm);
                self.term(t);
            }
            Item::Var(v) => self.var(*v),
        }
    }

    pub fn justification(&mut self, j: &Justification) {
        match j {
            Justification::AxiomLogical(s, inst) => {
                self.symbol(Symbol::AxiomLogical);
                self.natural(s.id() as u64, Symbol::Nat);
                for it in inst {
                    self.symbol(Symbol::Cons);
                    self.item(it);
                }
                self.symbol(Symbol::Nil);
            }
            Justification::AxiomNonLogical => self.symbol(Symbol::AxiomNonLogical),
            Justification::ModusPonens(i, k) => {
                self.symbol(Symbol::ModusPonens);
                self.natural(*i as u64, Symbol::Nat);
                self.natural(*k as u64, Symbol::Nat);
            }
            Justification::Generalization(i, v) => {
                self.symbol(Symbol::Generalization);
                self.natural(*i as u64, Symbol::Nat);
                self.var(*v);
            }
        }
    }

    /// Proof body: a `CONS`/`NIL` list of `STEP formula justification`.
    pub fn proof(&mut self, p: &Proof) {
        for s in &p.steps {
            self.symbol(Symbol::Cons);
            self.symbol(Symbol::Step);
            self.formula(&s.formula);
            self.justification(&s.justification);
        }
        self.symbol(Symbol::Nil);
    }
}

pub fn encode_term(t: &Term) -> BigUint {
    let mut w = Writer::new();
    w.symbol(Symbol::TagTerm);
    w.term(t);
    w.finish()
}

/// Digits of [`encode_formula`], without packing.
pub fn encode_formula_digits(phi: &Formula) -> Vec<u8> {
    let mut w = Writer::new();
    w.symbol(Symbol::TagFormula);
    w.formula(phi);
    w.into_digits()
}

pub fn encode_formula(phi: &Formula) -> BigUint {
    let mut w = Writer::new();
    w.symbol(Symbol::TagFormula);
    w.formula(phi);
    w.finish()
}

/// Code of `phi[x := t]` for closed `t`, streamed from `phi`.
pub fn encode_formula_subst(phi: &Formula, x: Var, t: &Term) -> BigUint {
    let mut w = Writer::new();
    w.symbol(Symbol::TagFormula);
    w.formula_subst(phi, x, t);
    w.finish()
}

pub fn encode_proof(p: &Proof) -> BigUint {
    let mut w = Writer::new();
    w.symbol(Symbol::TagProof);
    w.proof(p);
    w.finish()
}
