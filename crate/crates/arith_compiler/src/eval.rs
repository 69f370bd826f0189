//! Bounded evaluation of closed formulas in the standard model.
//!
//! A goal-directed solver: a formula is a list of goals over logic
//! variables, solved depth-first with chronological backtracking. The rules
//! are normative and documented in `EVAL.md`.

use std::collections::HashMap;
use std::rc::Rc;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use syntax::{Formula, FormulaKind, Term, TermKind, Var};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truth {
    True,
    False,
    BudgetExceeded,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("formula is not closed; free variables {0:?}")]
    NotClosed(Vec<Var>),
}

/// Optional rules beyond plain bounded search; both default to on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalRules {
    /// Sequence quantifiers used only through β-atoms become a finite store.
    pub sequence_store: bool,
    /// A variable used only as the bound of positive bounded existentials is
    /// taken to be arbitrarily large.
    pub witness_bound: bool,
}

impl Default for EvalRules {
    fn default() -> Self {
        EvalRules { sequence_store: true, witness_bound: true }
    }
}

pub fn eval_formula(phi: &Formula, budget: u64) -> Result<Truth, EvalError> {
    eval_formula_with(phi, budget, EvalRules::default())
}

pub fn eval_formula_with(phi: &Formula, budget: u64, rules: EvalRules) -> Result<Truth, EvalError> {
    if !phi.is_closed() {
        return Err(EvalError::NotClosed(phi.free_vars().to_vec()));
    }
    let mut s = Solver::new(budget, rules);
    let goals = cons(Goal::F(phi.clone(), Scope::default()), None);
    Ok(match s.solve(goals) {
        Ok(true) => Truth::True,
        Ok(false) => Truth::False,
        Err(OutOfBudget) => Truth::BudgetExceeded,
    })
}

type Lv = usize;

#[derive(Clone, Debug)]
enum Val {
    Free,
    Num(BigUint),
    /// Larger than anything the search will meet.
    Top,
    /// A sequence variable; the payload is the store index.
    Store(usize),
}

#[derive(Clone, Default)]
struct Scope(Option<Rc<ScopeNode>>);

struct ScopeNode {
    var: Var,
    lv: Lv,
    next: Scope,
}

impl Scope {
    fn bind(&self, var: Var, lv: Lv) -> Scope {
        Scope(Some(Rc::new(ScopeNode { var, lv, next: self.clone() })))
    }

    fn lookup(&self, v: Var) -> Option<Lv> {
        let mut cur = &self.0;
        while let Some(n) = cur {
            if n.var == v {
                return Some(n.lv);
            }
            cur = &n.next.0;
        }
        None
    }
}

#[derive(Clone)]
enum Goal {
    F(Formula, Scope),
    /// Remaining instances `next..=last` of a bounded universal.
    Range { var: Var, body: Formula, scope: Scope, next: BigUint, last: BigUint },
    /// `β(store, i) = v`.
    Beta { store: usize, i: Term, v: Term, scope: Scope },
    /// `t = val`.
    EqVal { t: Term, scope: Scope, val: BigUint },
}

type GList = Option<Rc<GNode>>;

struct GNode {
    goal: Goal,
    next: GList,
}

fn cons(goal: Goal, next: GList) -> GList {
    Some(Rc::new(GNode { goal, next }))
}

#[derive(Debug)]
struct OutOfBudget;

enum Undo {
    Bind(Lv),
    Put(usize, BigUint),
}

enum Alt {
    Goal(Goal),
    Enum { lv: Lv, next: BigUint, last: Option<BigUint> },
}

struct ChoicePoint {
    trail: usize,
    lvs: usize,
    stores: usize,
    rest: GList,
    alt: Alt,
}

enum Class {
    /// Replace the goal by these goals (effects already performed).
    Det(Vec<Goal>),
    Fail,
    Choice(BigUint, Choice),
    /// Not ready; optionally an unbound variable that could be enumerated.
    Delay(Option<Lv>),
}

enum Choice {
    Or(Goal, Goal),
    Enum { lv: Lv, last: BigUint },
}

enum TV {
    Num(BigUint),
    Top,
    Open,
}

struct Solver {
    vals: Vec<Val>,
    trail: Vec<Undo>,
    stores: Vec<HashMap<BigUint, BigUint>>,
    steps: u64,
    budget: u64,
    rules: EvalRules,
    closed_terms: HashMap<u64, BigUint>,
    guard_memo: HashMap<(u64, Var), bool>,
    seq_memo: HashMap<(u64, Var, Var, bool, bool), bool>,
}

fn var_of(t: &Term) -> Option<Var> {
    match t.kind() {
        TermKind::Var(v) => Some(*v),
        _ => None,
    }
}

/// Recognizes the β-atom shape emitted by the compiler:
/// `∃q (q ≤ C ∧ C = q·S(S(I)·D) + V ∧ S(V) ≤ S(S(I)·D))`.
/// Returns `(C, D, I, V)`.
pub(crate) fn beta_shape(phi: &Formula) -> Option<(Var, Var, Term, Term)> {
    let FormulaKind::Exists(q, body) = phi.kind() else { return None };
    let FormulaKind::And(g, rest) = body.kind() else { return None };
    let FormulaKind::Le(gq, gc) = g.kind() else { return None };
    let (gq, c) = (var_of(gq)?, var_of(gc)?);
    let FormulaKind::And(e, l) = rest.kind() else { return None };
    let FormulaKind::Eq(ec, sum) = e.kind() else { return None };
    let FormulaKind::Le(sv, m2) = l.kind() else { return None };
    let TermKind::Plus(prod, v) = sum.kind() else { return None };
    let TermKind::Times(tq, m) = prod.kind() else { return None };
    let TermKind::Succ(sv_inner) = sv.kind() else { return None };
    if gq != *q || var_of(ec)? != c || var_of(tq)? != *q || sv_inner != v || m != m2 {
        return None;
    }
    let TermKind::Succ(md) = m.kind() else { return None };
    let TermKind::Times(si, d) = md.kind() else { return None };
    let TermKind::Succ(i) = si.kind() else { return None };
    let d = var_of(d)?;
    if *q == c || *q == d || i.has_free(*q) || v.has_free(*q) {
        return None;
    }
    Some((c, d, i.clone(), v.clone()))
}

impl Solver {
    fn new(budget: u64, rules: EvalRules) -> Self {
        Solver {
            vals: Vec::new(),
            trail: Vec::new(),
            stores: Vec::new(),
            steps: 0,
            budget,
            rules,
            closed_terms: HashMap::new(),
            guard_memo: HashMap::new(),
            seq_memo: HashMap::new(),
        }
    }

    fn tick(&mut self) -> Result<(), OutOfBudget> {
        self.steps += 1;
        if self.steps > self.budget {
            Err(OutOfBudget)
        } else {
            Ok(())
        }
    }

    fn fresh(&mut self, v: Val) -> Lv {
        self.vals.push(v);
        self.vals.len() - 1
    }

    fn bind(&mut self, lv: Lv, n: BigUint) {
        self.vals[lv] = Val::Num(n);
        self.trail.push(Undo::Bind(lv));
    }

    fn undo_to(&mut self, trail: usize, lvs: usize, stores: usize) {
        while self.trail.len() > trail {
            match self.trail.pop().expect("nonempty") {
                Undo::Bind(lv) => {
                    if lv < self.vals.len() {
                        self.vals[lv] = Val::Free;
                    }
                }
                Undo::Put(s, k) => {
                    if s < self.stores.len() {
                        self.stores[s].remove(&k);
                    }
                }
            }
        }
        self.vals.truncate(lvs);
        self.stores.truncate(stores);
    }

    // ---- terms ----

    fn lv_of(&self, v: Var, scope: &Scope) -> Lv {
        scope.lookup(v).expect("closed formulas have no free variables")
    }

    fn eval_term(&mut self, t: &Term, scope: &Scope) -> TV {
        if t.is_closed() {
            return TV::Num(self.closed_value(t));
        }
        if let TermKind::Var(v) = t.kind() {
            return match &self.vals[self.lv_of(*v, scope)] {
                Val::Num(n) => TV::Num(n.clone()),
                Val::Top => TV::Top,
                _ => TV::Open,
            };
        }
        match self.eval_open(t, scope, None) {
            Some(n) => TV::Num(n),
            None => TV::Open,
        }
    }

    fn closed_value(&mut self, t: &Term) -> BigUint {
        if let Some(n) = self.closed_terms.get(&t.id()) {
            return n.clone();
        }
        let n = syntax::denote(t, &HashMap::new()).expect("closed term");
        self.closed_terms.insert(t.id(), n.clone());
        n
    }

    /// Value of `t`, with `over` giving a trial value for one variable.
    fn eval_open(&mut self, t: &Term, scope: &Scope, over: Option<(Lv, &BigUint)>) -> Option<BigUint> {
        if t.is_closed() {
            return Some(self.closed_value(t));
        }
        Some(match t.kind() {
            TermKind::Var(v) => {
                let lv = self.lv_of(*v, scope);
                if let Some((o, val)) = over {
                    if o == lv {
                        return Some(val.clone());
                    }
                }
                match &self.vals[lv] {
                    Val::Num(n) => n.clone(),
                    _ => return None,
                }
            }
            TermKind::Zero => BigUint::zero(),
            TermKind::Succ(a) => self.eval_open(a, scope, over)? + 1u32,
            TermKind::Plus(a, b) => self.eval_open(a, scope, over)? + self.eval_open(b, scope, over)?,
            TermKind::Times(a, b) => {
                let x = self.eval_open(a, scope, over)?;
                if x.is_zero() {
                    return Some(x);
                }
                x * self.eval_open(b, scope, over)?
            }
        })
    }

    /// Distinct unbound logic variables of `t`.
    fn open_vars(&self, t: &Term, scope: &Scope, out: &mut Vec<Lv>) {
        for v in t.free_vars() {
            let lv = self.lv_of(*v, scope);
            if !matches!(self.vals[lv], Val::Num(_)) && !out.contains(&lv) {
                out.push(lv);
            }
        }
    }

    fn is_free_lv(&self, lv: Lv) -> bool {
        matches!(self.vals[lv], Val::Free)
    }

    /// Solves `s(X) = target` for the single unbound `x` of `s`.
    fn solve_eq(&mut self, s: &Term, scope: &Scope, x: Lv, target: &BigUint) -> Result<Class, OutOfBudget> {
        let zero = BigUint::zero();
        let one = BigUint::one();
        let s0 = self.eval_open(s, scope, Some((x, &zero))).expect("single unknown");
        let s1 = self.eval_open(s, scope, Some((x, &one))).expect("single unknown");
        if s0 == s1 {
            // s does not depend on x
            return Ok(if &s0 == target { Class::Det(vec![]) } else { Class::Fail });
        }
        if &s0 > target {
            return Ok(Class::Fail);
        }
        // strictly increasing: s(X) >= X, so the root lies in [0, target]
        let (mut lo, mut hi) = (BigUint::zero(), target.clone());
        while lo < hi {
            self.tick()?;
            let mid: BigUint = (&lo + &hi) >> 1;
            let v = self.eval_open(s, scope, Some((x, &mid))).expect("single unknown");
            if &v < target {
                lo = mid + 1u32;
            } else {
                hi = mid;
            }
        }
        let v = self.eval_open(s, scope, Some((x, &lo))).expect("single unknown");
        if &v == target {
            self.bind(x, lo);
            Ok(Class::Det(vec![]))
        } else {
            Ok(Class::Fail)
        }
    }

    /// Largest `X` with `s(X) <= bound`, for increasing `s`; `None` if even
    /// `s(0)` exceeds it. `Some(None)` means `s` is constant.
    fn max_below(&mut self, s: &Term, scope: &Scope, x: Lv, bound: &BigUint) -> Result<Option<Option<BigUint>>, OutOfBudget> {
        let zero = BigUint::zero();
        let one = BigUint::one();
        let s0 = self.eval_open(s, scope, Some((x, &zero))).expect("single unknown");
        if &s0 > bound {
            return Ok(None);
        }
        let s1 = self.eval_open(s, scope, Some((x, &one))).expect("single unknown");
        if s0 == s1 {
            return Ok(Some(None));
        }
        let (mut lo, mut hi) = (BigUint::zero(), bound.clone());
        while lo < hi {
            self.tick()?;
            let mid: BigUint = (&lo + &hi + 1u32) >> 1;
            let v = self.eval_open(s, scope, Some((x, &mid))).expect("single unknown");
            if &v <= bound {
                lo = mid;
            } else {
                hi = mid - 1u32;
            }
        }
        Ok(Some(Some(lo)))
    }

    // ---- atoms ----

    fn class_eq(&mut self, a: &Term, b: &Term, scope: &Scope) -> Result<Class, OutOfBudget> {
        let (ta, tb) = (self.eval_term(a, scope), self.eval_term(b, scope));
        match (ta, tb) {
            (TV::Num(x), TV::Num(y)) => Ok(if x == y { Class::Det(vec![]) } else { Class::Fail }),
            (TV::Open, TV::Num(y)) => self.eq_to(a, scope, &y),
            (TV::Num(x), TV::Open) => self.eq_to(b, scope, &x),
            _ => {
                let mut vs = Vec::new();
                self.open_vars(a, scope, &mut vs);
                self.open_vars(b, scope, &mut vs);
                Ok(Class::Delay(vs.into_iter().find(|&l| self.is_free_lv(l))))
            }
        }
    }

    fn eq_to(&mut self, t: &Term, scope: &Scope, target: &BigUint) -> Result<Class, OutOfBudget> {
        let mut vs = Vec::new();
        self.open_vars(t, scope, &mut vs);
        match vs.as_slice() {
            [x] if self.is_free_lv(*x) => {
                if let TermKind::Var(_) = t.kind() {
                    self.bind(*x, target.clone());
                    return Ok(Class::Det(vec![]));
                }
                self.solve_eq(t, scope, *x, target)
            }
            _ => Ok(Class::Delay(vs.into_iter().find(|&l| self.is_free_lv(l)))),
        }
    }

    fn class_le(&mut self, a: &Term, b: &Term, scope: &Scope) -> Result<Class, OutOfBudget> {
        let (ta, tb) = (self.eval_term(a, scope), self.eval_term(b, scope));
        match (ta, tb) {
            (_, TV::Top) => Ok(Class::Det(vec![])),
            (TV::Num(x), TV::Num(y)) => Ok(if x <= y { Class::Det(vec![]) } else { Class::Fail }),
            (TV::Open, TV::Num(y)) => {
                let mut vs = Vec::new();
                self.open_vars(a, scope, &mut vs);
                match vs.as_slice() {
                    [x] if self.is_free_lv(*x) => match self.max_below(a, scope, *x, &y)? {
                        None => Ok(Class::Fail),
                        Some(None) => Ok(Class::Det(vec![])),
                        Some(Some(hi)) => Ok(Class::Choice(&hi + 1u32, Choice::Enum { lv: *x, last: hi })),
                    },
                    _ => Ok(Class::Delay(vs.into_iter().find(|&l| self.is_free_lv(l)))),
                }
            }
            _ => {
                let mut vs = Vec::new();
                self.open_vars(a, scope, &mut vs);
                self.open_vars(b, scope, &mut vs);
                Ok(Class::Delay(vs.into_iter().find(|&l| self.is_free_lv(l))))
            }
        }
    }

    /// Truth of an atom or negated atom whose terms are all known.
    fn quick(&mut self, phi: &Formula, scope: &Scope) -> Option<bool> {
        match phi.kind() {
            FormulaKind::Eq(a, b) => match (self.eval_term(a, scope), self.eval_term(b, scope)) {
                (TV::Num(x), TV::Num(y)) => Some(x == y),
                _ => None,
            },
            FormulaKind::Le(a, b) => match (self.eval_term(a, scope), self.eval_term(b, scope)) {
                (TV::Num(x), TV::Num(y)) => Some(x <= y),
                (_, TV::Top) => Some(true),
                _ => None,
            },
            FormulaKind::Not(a) if matches!(a.kind(), FormulaKind::Eq(..) | FormulaKind::Le(..)) => {
                self.quick(a, scope).map(|t| !t)
            }
            _ => None,
        }
    }

    /// Whether every free variable of `phi` has a value.
    fn ground(&self, phi: &Formula, scope: &Scope) -> Result<(), Option<Lv>> {
        for v in phi.free_vars() {
            let lv = self.lv_of(*v, scope);
            match self.vals[lv] {
                Val::Num(_) => {}
                Val::Free => return Err(Some(lv)),
                _ => return Err(None),
            }
        }
        Ok(())
    }

    /// Solves `phi` as an independent problem, leaving no bindings behind.
    fn subsolve(&mut self, phi: &Formula, scope: &Scope) -> Result<bool, OutOfBudget> {
        let (t, l, s) = (self.trail.len(), self.vals.len(), self.stores.len());
        let r = self.solve(cons(Goal::F(phi.clone(), scope.clone()), None));
        self.undo_to(t, l, s);
        r
    }

    // ---- structural rules ----

    /// `w` occurs in `phi` only as the bound `z ≤ w` of positive bounded
    /// existentials.
    fn only_witness_bound(&mut self, phi: &Formula, w: Var) -> bool {
        if !phi.has_free(w) {
            return true;
        }
        if let Some(&r) = self.guard_memo.get(&(phi.id(), w)) {
            return r;
        }
        let r = match phi.kind() {
            FormulaKind::Eq(..) | FormulaKind::Le(..) | FormulaKind::Not(_) => false,
            FormulaKind::And(a, b) | FormulaKind::Or(a, b) => self.only_witness_bound(a, w) && self.only_witness_bound(b, w),
            FormulaKind::Implies(a, b) => !a.has_free(w) && self.only_witness_bound(b, w),
            FormulaKind::ForAll(x, body) => *x == w || self.only_witness_bound(body, w),
            FormulaKind::Exists(z, body) => {
                if *z == w {
                    true
                } else {
                    match body.kind() {
                        FormulaKind::And(g, rest) if Self::is_guard(g, *z, w) => self.only_witness_bound(rest, w),
                        _ => self.only_witness_bound(body, w),
                    }
                }
            }
        };
        self.guard_memo.insert((phi.id(), w), r);
        r
    }

    fn is_guard(g: &Formula, z: Var, w: Var) -> bool {
        matches!(g.kind(), FormulaKind::Le(l, r) if var_of(l) == Some(z) && var_of(r) == Some(w))
    }

    /// `c` and `d` occur in `phi` only as the sequence pair of positive
    /// β-atoms, whose index and value terms mention neither.
    fn only_sequence(&mut self, phi: &Formula, c: Var, d: Var, live_c: bool, live_d: bool) -> bool {
        let touches = |f: &Formula| (live_c && f.has_free(c)) || (live_d && f.has_free(d));
        if !touches(phi) {
            return true;
        }
        let key = (phi.id(), c, d, live_c, live_d);
        if let Some(&r) = self.seq_memo.get(&key) {
            return r;
        }
        let r = match phi.kind() {
            FormulaKind::Eq(..) | FormulaKind::Le(..) | FormulaKind::Not(_) => false,
            FormulaKind::And(a, b) | FormulaKind::Or(a, b) => {
                self.only_sequence(a, c, d, live_c, live_d) && self.only_sequence(b, c, d, live_c, live_d)
            }
            FormulaKind::Implies(a, b) => !touches(a) && self.only_sequence(b, c, d, live_c, live_d),
            FormulaKind::ForAll(x, body) | FormulaKind::Exists(x, body) => {
                if let (true, Some((bc, bd, i, v))) = (matches!(phi.kind(), FormulaKind::Exists(..)), beta_shape(phi)) {
                    live_c
                        && live_d
                        && bc == c
                        && bd == d
                        && !i.has_free(c)
                        && !i.has_free(d)
                        && !v.has_free(c)
                        && !v.has_free(d)
                } else {
                    let (lc, ld) = (live_c && *x != c, live_d && *x != d);
                    self.only_sequence(body, c, d, lc, ld)
                }
            }
        };
        self.seq_memo.insert(key, r);
        r
    }

    fn resolves_top(&self, t: &Term, scope: &Scope) -> bool {
        match var_of(t).and_then(|v| scope.lookup(v)) {
            Some(lv) => matches!(self.vals[lv], Val::Top),
            None => false,
        }
    }

    /// Strips a guard `x ≤ W` with `W` arbitrarily large.
    fn strip_top_guard<'a>(&self, x: Var, body: &'a Formula, scope: &Scope) -> &'a Formula {
        if let FormulaKind::And(g, rest) = body.kind() {
            if let FormulaKind::Le(l, r) = g.kind() {
                if var_of(l) == Some(x) && self.resolves_top(r, scope) {
                    return rest;
                }
            }
        }
        body
    }

    fn class_exists(&mut self, phi: &Formula, x: Var, body: &Formula, scope: &Scope) -> Class {
        // β-atom over a sequence store
        if let Some((c, d, i, v)) = beta_shape(phi) {
            if let (Some(lc), Some(ld)) = (scope.lookup(c), scope.lookup(d)) {
                if let (Val::Store(s1), Val::Store(s2)) = (&self.vals[lc], &self.vals[ld]) {
                    if s1 == s2 {
                        return Class::Det(vec![Goal::Beta { store: *s1, i, v, scope: scope.clone() }]);
                    }
                }
            }
        }
        if self.rules.sequence_store {
            let b1 = self.strip_top_guard(x, body, scope);
            if let FormulaKind::Exists(d, b2) = b1.kind() {
                if *d != x {
                    let b3 = self.strip_top_guard(*d, b2, scope).clone();
                    if self.only_sequence(&b3, x, *d, true, true) {
                        self.stores.push(HashMap::new());
                        let s = self.stores.len() - 1;
                        let lc = self.fresh(Val::Store(s));
                        let ld = self.fresh(Val::Store(s));
                        let sc = scope.bind(x, lc).bind(*d, ld);
                        return Class::Det(vec![Goal::F(b3, sc)]);
                    }
                }
            }
        }
        if self.rules.witness_bound && self.only_witness_bound(body, x) {
            let lv = self.fresh(Val::Top);
            return Class::Det(vec![Goal::F(body.clone(), scope.bind(x, lv))]);
        }
        let lv = self.fresh(Val::Free);
        Class::Det(vec![Goal::F(body.clone(), scope.bind(x, lv))])
    }

    fn classify(&mut self, goal: &Goal) -> Result<Class, OutOfBudget> {
        match goal {
            Goal::F(phi, scope) => self.class_formula(phi, scope),
            Goal::Range { var, body, scope, next, last } => {
                if next > last {
                    return Ok(Class::Det(vec![]));
                }
                let lv = self.fresh(Val::Num(next.clone()));
                Ok(Class::Det(vec![
                    Goal::F(body.clone(), scope.bind(*var, lv)),
                    Goal::Range { var: *var, body: body.clone(), scope: scope.clone(), next: next + 1u32, last: last.clone() },
                ]))
            }
            Goal::Beta { store, i, v, scope } => {
                let key = match self.eval_term(i, scope) {
                    TV::Num(k) => k,
                    _ => {
                        let mut vs = Vec::new();
                        self.open_vars(i, scope, &mut vs);
                        return Ok(Class::Delay(vs.into_iter().find(|&l| self.is_free_lv(l))));
                    }
                };
                if let Some(val) = self.stores[*store].get(&key).cloned() {
                    return Ok(match self.eval_term(v, scope) {
                        TV::Num(n) => {
                            if n == val {
                                Class::Det(vec![])
                            } else {
                                Class::Fail
                            }
                        }
                        _ => Class::Det(vec![Goal::EqVal { t: v.clone(), scope: scope.clone(), val }]),
                    });
                }
                match self.eval_term(v, scope) {
                    TV::Num(n) => {
                        self.stores[*store].insert(key.clone(), n);
                        self.trail.push(Undo::Put(*store, key));
                        Ok(Class::Det(vec![]))
                    }
                    _ => {
                        let mut vs = Vec::new();
                        self.open_vars(v, scope, &mut vs);
                        Ok(Class::Delay(vs.into_iter().find(|&l| self.is_free_lv(l))))
                    }
                }
            }
            Goal::EqVal { t, scope, val } => match self.eval_term(t, scope) {
                TV::Num(n) => Ok(if &n == val { Class::Det(vec![]) } else { Class::Fail }),
                _ => self.eq_to(t, scope, val),
            },
        }
    }

    fn class_formula(&mut self, phi: &Formula, scope: &Scope) -> Result<Class, OutOfBudget> {
        Ok(match phi.kind() {
            FormulaKind::Eq(a, b) => return self.class_eq(a, b, scope),
            FormulaKind::Le(a, b) => return self.class_le(a, b, scope),
            FormulaKind::And(a, b) => Class::Det(vec![Goal::F(a.clone(), scope.clone()), Goal::F(b.clone(), scope.clone())]),
            FormulaKind::Not(a) => {
                if let Some(t) = self.quick(phi, scope) {
                    return Ok(if t { Class::Det(vec![]) } else { Class::Fail });
                }
                match self.ground(a, scope) {
                    Ok(()) => {
                        if self.subsolve(a, scope)? {
                            Class::Fail
                        } else {
                            Class::Det(vec![])
                        }
                    }
                    Err(lv) => Class::Delay(lv),
                }
            }
            FormulaKind::Or(a, b) => {
                match self.quick(a, scope) {
                    Some(true) => return Ok(Class::Det(vec![])),
                    Some(false) => return Ok(Class::Det(vec![Goal::F(b.clone(), scope.clone())])),
                    None => {}
                }
                match self.quick(b, scope) {
                    Some(true) => return Ok(Class::Det(vec![])),
                    Some(false) => return Ok(Class::Det(vec![Goal::F(a.clone(), scope.clone())])),
                    None => {}
                }
                Class::Choice(
                    BigUint::from(2u32),
                    Choice::Or(Goal::F(a.clone(), scope.clone()), Goal::F(b.clone(), scope.clone())),
                )
            }
            FormulaKind::Implies(a, b) => {
                let known = match self.quick(a, scope) {
                    Some(t) => Some(t),
                    None if self.ground(a, scope).is_ok() => Some(self.subsolve(a, scope)?),
                    None => None,
                };
                match known {
                    Some(true) => Class::Det(vec![Goal::F(b.clone(), scope.clone())]),
                    Some(false) => Class::Det(vec![]),
                    None => Class::Choice(
                        BigUint::from(2u32),
                        Choice::Or(Goal::F(Formula::not(a.clone()), scope.clone()), Goal::F(b.clone(), scope.clone())),
                    ),
                }
            }
            FormulaKind::Exists(x, body) => self.class_exists(phi, *x, body, scope),
            FormulaKind::ForAll(x, body) => {
                if let FormulaKind::Implies(g, rest) = body.kind() {
                    if let FormulaKind::Le(l, t) = g.kind() {
                        if var_of(l) == Some(*x) && !t.has_free(*x) {
                            match self.eval_term(t, scope) {
                                TV::Num(last) => {
                                    return Ok(Class::Det(vec![Goal::Range {
                                        var: *x,
                                        body: rest.clone(),
                                        scope: scope.clone(),
                                        next: BigUint::zero(),
                                        last,
                                    }]))
                                }
                                TV::Open => {
                                    let mut vs = Vec::new();
                                    self.open_vars(t, scope, &mut vs);
                                    return Ok(Class::Delay(vs.into_iter().find(|&l| self.is_free_lv(l))));
                                }
                                TV::Top => {}
                            }
                        }
                    }
                }
                // unbounded: a counterexample search up to the budget
                match self.ground(phi, scope) {
                    Ok(()) => {
                        let mut n = BigUint::zero();
                        loop {
                            self.tick()?;
                            let lv = self.fresh(Val::Num(n.clone()));
                            let sc = scope.bind(*x, lv);
                            if !self.subsolve(body, &sc)? {
                                self.vals.truncate(lv);
                                return Ok(Class::Fail);
                            }
                            self.vals.truncate(lv);
                            n += 1u32;
                        }
                    }
                    Err(lv) => Class::Delay(lv),
                }
            }
        })
    }

    // ---- search ----

    fn solve(&mut self, goals: GList) -> Result<bool, OutOfBudget> {
        let mut stack: Vec<ChoicePoint> = Vec::new();
        let mut goals = goals;
        loop {
            self.tick()?;
            match self.step(&goals)? {
                Step::Solved => return Ok(true),
                Step::Next(g) => goals = g,
                Step::Fail => match self.backtrack(&mut stack)? {
                    Some(g) => goals = g,
                    None => return Ok(false),
                },
                Step::Branch(rest, first, alt) => {
                    let cp = ChoicePoint { trail: self.trail.len(), lvs: self.vals.len(), stores: self.stores.len(), rest: rest.clone(), alt };
                    stack.push(cp);
                    goals = self.take(first, rest);
                }
            }
        }
    }

    fn take(&mut self, first: First, rest: GList) -> GList {
        match first {
            First::Goal(g) => cons(g, rest),
            First::Value(lv, n) => {
                self.bind(lv, n);
                rest
            }
        }
    }

    fn backtrack(&mut self, stack: &mut Vec<ChoicePoint>) -> Result<Option<GList>, OutOfBudget> {
        while let Some(cp) = stack.pop() {
            self.undo_to(cp.trail, cp.lvs, cp.stores);
            match cp.alt {
                Alt::Goal(g) => return Ok(Some(cons(g, cp.rest))),
                Alt::Enum { lv, next, last } => {
                    if last.as_ref().is_some_and(|l| &next > l) {
                        continue;
                    }
                    let rest = cp.rest.clone();
                    stack.push(ChoicePoint {
                        alt: Alt::Enum { lv, next: &next + 1u32, last },
                        rest: cp.rest,
                        ..cp
                    });
                    self.bind(lv, next);
                    return Ok(Some(rest));
                }
            }
        }
        Ok(None)
    }

    fn step(&mut self, goals: &GList) -> Result<Step, OutOfBudget> {
        let Some(_) = goals else { return Ok(Step::Solved) };
        let mut prefix: Vec<Goal> = Vec::new();
        let mut best: Option<(BigUint, usize, Choice)> = None;
        let mut flounder: Option<Lv> = None;
        let mut cur = goals.clone();
        let mut idx = 0usize;
        while let Some(node) = cur {
            match self.classify(&node.goal)? {
                Class::Det(new) => {
                    let mut rest = node.next.clone();
                    for g in new.into_iter().rev() {
                        rest = cons(g, rest);
                    }
                    for g in prefix.into_iter().rev() {
                        rest = cons(g, rest);
                    }
                    return Ok(Step::Next(rest));
                }
                Class::Fail => return Ok(Step::Fail),
                Class::Choice(size, ch) => {
                    if best.as_ref().map_or(true, |(s, _, _)| &size < s) {
                        best = Some((size, idx, ch));
                    }
                }
                Class::Delay(lv) => {
                    if flounder.is_none() {
                        flounder = lv;
                    }
                }
            }
            prefix.push(node.goal.clone());
            cur = node.next.clone();
            idx += 1;
        }
        if let Some((_, at, ch)) = best {
            // rebuild the list without the chosen goal
            let mut rest: GList = None;
            let mut all = prefix;
            all.remove(at);
            for g in all.into_iter().rev() {
                rest = cons(g, rest);
            }
            return Ok(match ch {
                Choice::Or(a, b) => Step::Branch(rest, First::Goal(a), Alt::Goal(b)),
                // the bounding goal stays and is rechecked once lv is bound
                Choice::Enum { lv, last } => Step::Branch(
                    goals.clone(),
                    First::Value(lv, BigUint::zero()),
                    Alt::Enum { lv, next: BigUint::one(), last: Some(last) },
                ),
            });
        }
        match flounder {
            Some(lv) => Ok(Step::Branch(goals.clone(), First::Value(lv, BigUint::zero()), Alt::Enum { lv, next: BigUint::one(), last: None })),
            // nothing can move: no conclusion within the rules
            None => Err(OutOfBudget),
        }
    }
}

enum First {
    Goal(Goal),
    Value(Lv, BigUint),
}

enum Step {
    Solved,
    Next(GList),
    Fail,
    Branch(GList, First, Alt),
}
