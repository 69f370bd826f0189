//! First-order arithmetic over `0`, `S`, `+`, `*` with `=` and `<=`.
//!
//! Terms and formulas are hash-consed: every structurally distinct node is
//! live at most once, so equality is pointer identity. The interning table is
//! a single mutex-guarded pool shared by all threads. It holds weak handles,
//! so nodes are freed when the last formula using them is dropped. Node ids
//! are never reused.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, LazyLock, Mutex, Weak};

mod numeral;
#[cfg(feature = "random")]
pub mod random;
mod parse;
mod print;
mod subst;
mod visit;

pub use numeral::{
    denote, digit_term, efficient_numeral, numeral, numeral_above, DEFAULT_NUMERAL_THRESHOLD,
};
pub use parse::{parse_formula, parse_term, SyntaxError};
pub use print::{print_formula, print_term, var_name};
pub use subst::{substitute, substitute_term, Substitution};
pub use visit::{bound_vars, formula_postorder, max_var, term_postorder};

/// Variable index. Indices 0..=20 print as `a`..`u`, larger ones as `v<i-21>`.
pub type Var = u32;

pub const VAR_A: Var = 0;
pub const VAR_B: Var = 1;
pub const VAR_C: Var = 2;

#[derive(Debug)]
pub enum TermKind {
    Var(Var),
    Zero,
    Succ(Term),
    Plus(Term, Term),
    Times(Term, Term),
}

#[derive(Debug)]
pub enum FormulaKind {
    Eq(Term, Term),
    Le(Term, Term),
    Not(Formula),
    Or(Formula, Formula),
    And(Formula, Formula),
    Implies(Formula, Formula),
    ForAll(Var, Formula),
    Exists(Var, Formula),
}

#[derive(Debug)]
pub struct TermNode {
    kind: TermKind,
    id: u64,
    free: Box<[Var]>,
}

#[derive(Debug)]
pub struct FormulaNode {
    kind: FormulaKind,
    id: u64,
    free: Box<[Var]>,
}

/// Shared handle to an interned term.
#[derive(Clone)]
pub struct Term(Arc<TermNode>);

/// Shared handle to an interned formula.
#[derive(Clone)]
pub struct Formula(Arc<FormulaNode>);

#[derive(PartialEq, Eq, Hash)]
enum Key {
    Var(Var),
    Zero,
    Succ(u64),
    Plus(u64, u64),
    Times(u64, u64),
    Eq(u64, u64),
    Le(u64, u64),
    Not(u64),
    Or(u64, u64),
    And(u64, u64),
    Implies(u64, u64),
    ForAll(Var, u64),
    Exists(Var, u64),
}

#[derive(Default)]
struct Pool {
    next_id: u64,
    terms: HashMap<Key, Weak<TermNode>>,
    formulas: HashMap<Key, Weak<FormulaNode>>,
    /// Table size at which dead entries are next swept.
    sweep_at: usize,
}

impl Pool {
    fn maybe_sweep(&mut self) {
        let size = self.terms.len() + self.formulas.len();
        if size < self.sweep_at {
            return;
        }
        self.terms.retain(|_, w| w.strong_count() > 0);
        self.formulas.retain(|_, w| w.strong_count() > 0);
        self.sweep_at = (2 * (self.terms.len() + self.formulas.len())).max(1 << 16);
    }
}

static POOL: LazyLock<Mutex<Pool>> = LazyLock::new(|| Mutex::new(Pool::default()));

/// Number of live interned nodes (terms and formulas).
pub fn pool_size() -> usize {
    let mut pool = POOL.lock().unwrap();
    pool.terms.retain(|_, w| w.strong_count() > 0);
    pool.formulas.retain(|_, w| w.strong_count() > 0);
    pool.terms.len() + pool.formulas.len()
}

fn union(a: &[Var], b: &[Var]) -> Box<[Var]> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out.into_boxed_slice()
}

fn without(a: &[Var], v: Var) -> Box<[Var]> {
    a.iter().copied().filter(|&x| x != v).collect()
}

fn intern_term(key: Key, make: impl FnOnce() -> (TermKind, Box<[Var]>)) -> Term {
    let mut pool = POOL.lock().unwrap();
    if let Some(t) = pool.terms.get(&key).and_then(Weak::upgrade) {
        return Term(t);
    }
    let (kind, free) = make();
    let id = pool.next_id;
    pool.next_id += 1;
    let t = Arc::new(TermNode { kind, id, free });
    pool.terms.insert(key, Arc::downgrade(&t));
    pool.maybe_sweep();
    Term(t)
}

fn intern_formula(key: Key, make: impl FnOnce() -> (FormulaKind, Box<[Var]>)) -> Formula {
    let mut pool = POOL.lock().unwrap();
    if let Some(f) = pool.formulas.get(&key).and_then(Weak::upgrade) {
        return Formula(f);
    }
    let (kind, free) = make();
    let id = pool.next_id;
    pool.next_id += 1;
    let f = Arc::new(FormulaNode { kind, id, free });
    pool.formulas.insert(key, Arc::downgrade(&f));
    pool.maybe_sweep();
    Formula(f)
}

/// Children released by a dropped node, freed iteratively so that deep
/// terms (long numerals, long conjunctions) never recurse on the stack.
#[derive(Default)]
struct Orphans {
    terms: Vec<Term>,
    formulas: Vec<Formula>,
}

impl Orphans {
    fn take_term(&mut self, kind: &mut TermKind) {
        match std::mem::replace(kind, TermKind::Zero) {
            TermKind::Succ(a) => self.terms.push(a),
            TermKind::Plus(a, b) | TermKind::Times(a, b) => {
                self.terms.push(a);
                self.terms.push(b);
            }
            TermKind::Var(_) | TermKind::Zero => {}
        }
    }

    fn take_formula(&mut self, kind: &mut FormulaKind) {
        let placeholder = FormulaKind::ForAll(0, PLACEHOLDER.clone());
        match std::mem::replace(kind, placeholder) {
            FormulaKind::Eq(a, b) | FormulaKind::Le(a, b) => {
                self.terms.push(a);
                self.terms.push(b);
            }
            FormulaKind::Not(a) | FormulaKind::ForAll(_, a) | FormulaKind::Exists(_, a) => self.formulas.push(a),
            FormulaKind::Or(a, b) | FormulaKind::And(a, b) | FormulaKind::Implies(a, b) => {
                self.formulas.push(a);
                self.formulas.push(b);
            }
        }
    }

    fn drain(&mut self) {
        loop {
            if let Some(t) = self.terms.pop() {
                if let Ok(mut node) = Arc::try_unwrap(t.0) {
                    self.take_term(&mut node.kind);
                }
            } else if let Some(f) = self.formulas.pop() {
                if let Ok(mut node) = Arc::try_unwrap(f.0) {
                    self.take_formula(&mut node.kind);
                }
            } else {
                break;
            }
        }
    }
}

/// A permanent leaf used to fill the child slot of a formula being freed.
static PLACEHOLDER: LazyLock<Formula> = LazyLock::new(|| Formula::eq(Term::zero(), Term::zero()));

impl Drop for TermNode {
    fn drop(&mut self) {
        if matches!(self.kind, TermKind::Var(_) | TermKind::Zero) {
            return;
        }
        let mut o = Orphans::default();
        o.take_term(&mut self.kind);
        o.drain();
    }
}

impl Drop for FormulaNode {
    fn drop(&mut self) {
        if let FormulaKind::ForAll(_, a) = &self.kind {
            if Arc::ptr_eq(&a.0, &PLACEHOLDER.0) {
                return;
            }
        }
        let mut o = Orphans::default();
        o.take_formula(&mut self.kind);
        o.drain();
    }
}

impl Term {
    pub fn var(v: Var) -> Term {
        intern_term(Key::Var(v), || (TermKind::Var(v), vec![v].into_boxed_slice()))
    }

    pub fn zero() -> Term {
        intern_term(Key::Zero, || (TermKind::Zero, Box::new([])))
    }

    pub fn succ(t: Term) -> Term {
        intern_term(Key::Succ(t.id()), || {
            let free = t.0.free.clone();
            (TermKind::Succ(t), free)
        })
    }

    pub fn plus(a: Term, b: Term) -> Term {
        intern_term(Key::Plus(a.id(), b.id()), || {
            let free = union(&a.0.free, &b.0.free);
            (TermKind::Plus(a, b), free)
        })
    }

    pub fn times(a: Term, b: Term) -> Term {
        intern_term(Key::Times(a.id(), b.id()), || {
            let free = union(&a.0.free, &b.0.free);
            (TermKind::Times(a, b), free)
        })
    }

    pub fn kind(&self) -> &TermKind {
        &self.0.kind
    }

    /// Unique node identity within this process.
    pub fn id(&self) -> u64 {
        self.0.id
    }

    /// Free variables in increasing order.
    pub fn free_vars(&self) -> &[Var] {
        &self.0.free
    }

    pub fn is_closed(&self) -> bool {
        self.0.free.is_empty()
    }

    pub fn has_free(&self, v: Var) -> bool {
        self.0.free.binary_search(&v).is_ok()
    }

    /// Number of nodes of the tree obtained by unfolding shared subterms.
    pub fn tree_size(&self) -> u128 {
        visit::term_tree_size(self)
    }
}

impl Formula {
    pub fn eq(a: Term, b: Term) -> Formula {
        intern_formula(Key::Eq(a.id(), b.id()), || {
            let free = union(&a.0.free, &b.0.free);
            (FormulaKind::Eq(a, b), free)
        })
    }

    pub fn le(a: Term, b: Term) -> Formula {
        intern_formula(Key::Le(a.id(), b.id()), || {
            let free = union(&a.0.free, &b.0.free);
            (FormulaKind::Le(a, b), free)
        })
    }

    pub fn not(a: Formula) -> Formula {
        intern_formula(Key::Not(a.id()), || {
            let free = a.0.free.clone();
            (FormulaKind::Not(a), free)
        })
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        intern_formula(Key::Or(a.id(), b.id()), || {
            let free = union(&a.0.free, &b.0.free);
            (FormulaKind::Or(a, b), free)
        })
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        intern_formula(Key::And(a.id(), b.id()), || {
            let free = union(&a.0.free, &b.0.free);
            (FormulaKind::And(a, b), free)
        })
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        intern_formula(Key::Implies(a.id(), b.id()), || {
            let free = union(&a.0.free, &b.0.free);
            (FormulaKind::Implies(a, b), free)
        })
    }

    pub fn forall(v: Var, a: Formula) -> Formula {
        intern_formula(Key::ForAll(v, a.id()), || {
            let free = without(&a.0.free, v);
            (FormulaKind::ForAll(v, a), free)
        })
    }

    pub fn exists(v: Var, a: Formula) -> Formula {
        intern_formula(Key::Exists(v, a.id()), || {
            let free = without(&a.0.free, v);
            (FormulaKind::Exists(v, a), free)
        })
    }

    /// Conjunction of a list, associated to the left; `0=0` when empty.
    pub fn and_all<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        let mut it = items.into_iter();
        match it.next() {
            None => Formula::eq(Term::zero(), Term::zero()),
            Some(first) => it.fold(first, Formula::and),
        }
    }

    pub fn kind(&self) -> &FormulaKind {
        &self.0.kind
    }

    pub fn id(&self) -> u64 {
        self.0.id
    }

    pub fn free_vars(&self) -> &[Var] {
        &self.0.free
    }

    pub fn is_closed(&self) -> bool {
        self.0.free.is_empty()
    }

    pub fn has_free(&self, v: Var) -> bool {
        self.0.free.binary_search(&v).is_ok()
    }

    /// Number of distinct formula and term nodes reachable from this one.
    pub fn dag_size(&self) -> usize {
        visit::dag_size(self)
    }

    /// Number of nodes of the unfolded tree (saturating).
    pub fn tree_size(&self) -> u128 {
        visit::formula_tree_size(self)
    }
}

/// Syntactic negation: always wraps in `Not`, never simplifies.
pub fn negate(f: &Formula) -> Formula {
    Formula::not(f.clone())
}

macro_rules! identity_traits {
    ($t:ty) => {
        impl PartialEq for $t {
            fn eq(&self, other: &Self) -> bool {
                Arc::ptr_eq(&self.0, &other.0)
            }
        }
        impl Eq for $t {}
        impl Hash for $t {
            fn hash<H: Hasher>(&self, state: &mut H) {
                self.0.id.hash(state)
            }
        }
    };
}

identity_traits!(Term);
identity_traits!(Formula);

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_term(self))
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Term({})", print_term(self))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(self))
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Formula({})", print_formula(self))
    }
}
