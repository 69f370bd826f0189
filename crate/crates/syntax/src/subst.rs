use std::collections::{BTreeMap, HashMap};

use crate::{Formula, FormulaKind, Term, TermKind, Var};

/// Simultaneous substitution of terms for free variables.
pub type Substitution = BTreeMap<Var, Term>;

/// `phi[v := t]`, renaming bound variables when `t` would be captured.
///
/// A renamed binder becomes the least variable index that is not free in the
/// quantified body, not free in any substituted term, and not substituted for.
pub fn substitute(phi: &Formula, v: Var, t: &Term) -> Formula {
    let mut sigma = Substitution::new();
    sigma.insert(v, t.clone());
    Subst::default().formula(phi, &sigma)
}

/// Simultaneous substitution in a term.
pub fn substitute_term(t: &Term, sigma: &Substitution) -> Term {
    Subst::default().term(t, sigma)
}

#[derive(Default)]
struct Subst {
    sigma_ids: HashMap<Vec<(Var, u64)>, usize>,
    terms: HashMap<(u64, usize), Term>,
    formulas: HashMap<(u64, usize), Formula>,
}

impl Subst {
    fn sigma_id(&mut self, sigma: &Substitution) -> usize {
        let key: Vec<(Var, u64)> = sigma.iter().map(|(v, t)| (*v, t.id())).collect();
        let next = self.sigma_ids.len();
        *self.sigma_ids.entry(key).or_insert(next)
    }

    fn restrict(sigma: &Substitution, free: &[Var]) -> Substitution {
        sigma
            .iter()
            .filter(|(v, _)| free.binary_search(v).is_ok())
            .map(|(v, t)| (*v, t.clone()))
            .collect()
    }

    fn term(&mut self, t: &Term, sigma: &Substitution) -> Term {
        let sigma = Self::restrict(sigma, t.free_vars());
        if sigma.is_empty() {
            return t.clone();
        }
        let sid = self.sigma_id(&sigma);
        self.term_with(t, &sigma, sid)
    }

    fn term_with(&mut self, t: &Term, sigma: &Substitution, sid: usize) -> Term {
        if !sigma.keys().any(|v| t.has_free(*v)) {
            return t.clone();
        }
        if let Some(r) = self.terms.get(&(t.id(), sid)) {
            return r.clone();
        }
        let r = stacker::maybe_grow(64 * 1024, 16 * 1024 * 1024, || match t.kind() {
            TermKind::Var(v) => sigma[v].clone(),
            TermKind::Zero => t.clone(),
            TermKind::Succ(a) => Term::succ(self.term_with(a, sigma, sid)),
            TermKind::Plus(a, b) => {
                let a = self.term_with(a, sigma, sid);
                Term::plus(a, self.term_with(b, sigma, sid))
            }
            TermKind::Times(a, b) => {
                let a = self.term_with(a, sigma, sid);
                Term::times(a, self.term_with(b, sigma, sid))
            }
        });
        self.terms.insert((t.id(), sid), r.clone());
        r
    }

    fn formula(&mut self, f: &Formula, sigma: &Substitution) -> Formula {
        let sigma = Self::restrict(sigma, f.free_vars());
        if sigma.is_empty() {
            return f.clone();
        }
        let sid = self.sigma_id(&sigma);
        if let Some(r) = self.formulas.get(&(f.id(), sid)) {
            return r.clone();
        }
        let r = stacker::maybe_grow(64 * 1024, 16 * 1024 * 1024, || match f.kind() {
            FormulaKind::Eq(a, b) => {
                let a = self.term_with(a, &sigma, sid);
                Formula::eq(a, self.term_with(b, &sigma, sid))
            }
            FormulaKind::Le(a, b) => {
                let a = self.term_with(a, &sigma, sid);
                Formula::le(a, self.term_with(b, &sigma, sid))
            }
            FormulaKind::Not(a) => Formula::not(self.formula(a, &sigma)),
            FormulaKind::Or(a, b) => {
                let a = self.formula(a, &sigma);
                Formula::or(a, self.formula(b, &sigma))
            }
            FormulaKind::And(a, b) => {
                let a = self.formula(a, &sigma);
                Formula::and(a, self.formula(b, &sigma))
            }
            FormulaKind::Implies(a, b) => {
                let a = self.formula(a, &sigma);
                Formula::implies(a, self.formula(b, &sigma))
            }
            FormulaKind::ForAll(y, body) => {
                let (z, b) = self.binder(*y, body, &sigma);
                Formula::forall(z, b)
            }
            FormulaKind::Exists(y, body) => {
                let (z, b) = self.binder(*y, body, &sigma);
                Formula::exists(z, b)
            }
        });
        self.formulas.insert((f.id(), sid), r.clone());
        r
    }

    fn binder(&mut self, y: Var, body: &Formula, sigma: &Substitution) -> (Var, Formula) {
        let mut inner = Self::restrict(sigma, body.free_vars());
        inner.remove(&y);
        if inner.is_empty() {
            return (y, body.clone());
        }
        let captured = inner.values().any(|t| t.has_free(y));
        if !captured {
            return (y, self.formula(body, &inner));
        }
        let mut z: Var = 0;
        loop {
            let clash = body.has_free(z)
                || inner.contains_key(&z)
                || inner.values().any(|t| t.has_free(z));
            if !clash {
                break;
            }
            z += 1;
        }
        inner.insert(y, Term::var(z));
        (z, self.formula(body, &inner))
    }
}
