//! Compilation of IR functions to graph formulas.

use std::collections::HashMap;

use num_bigint::BigUint;
use syntax::{numeral_above, substitute, Formula, FormulaKind, Term, TermKind, Var, DEFAULT_NUMERAL_THRESHOLD};

use crate::ir::{PrFunction, PrKind, Template};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompileOptions {
    /// Use hand-written graphs of library functions instead of their bodies.
    pub templates: bool,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions { templates: true }
    }
}

/// A graph formula with its designated variables.
#[derive(Clone, Debug)]
pub struct CompiledFormula {
    pub formula: Formula,
    pub inputs: Vec<Var>,
    pub output: Var,
}

impl CompiledFormula {
    /// The closed sentence "f(args) = y".
    pub fn instantiate(&self, args: &[BigUint], y: &BigUint) -> Formula {
        let mut phi = self.formula.clone();
        for (x, v) in self.inputs.iter().zip(args) {
            phi = substitute(&phi, *x, &numeral_above(v, DEFAULT_NUMERAL_THRESHOLD));
        }
        substitute(&phi, self.output, &numeral_above(y, DEFAULT_NUMERAL_THRESHOLD))
    }
}

/// Compiles `f` with inputs `a, b, ...` (variables `0..k`) and output
/// variable `k`.
pub fn compile_pr_graph(f: &PrFunction) -> CompiledFormula {
    compile_pr_graph_with(f, CompileOptions::default())
}

pub fn compile_pr_graph_with(f: &PrFunction, opts: CompileOptions) -> CompiledFormula {
    let k = f.arity() as Var;
    let inputs: Vec<Var> = (0..k).collect();
    let ins: Vec<Term> = inputs.iter().map(|&v| Term::var(v)).collect();
    let formula = compile_graph(f, &ins, &Term::var(k), k + 1, opts);
    CompiledFormula { formula, inputs, output: k }
}

/// Compiles "f(inputs) = output" for arbitrary input and output terms.
/// Bound variables are numbered from `first_free`; the caller guarantees
/// that no variable of the terms is `>= first_free`.
pub fn compile_graph(f: &PrFunction, inputs: &[Term], output: &Term, first_free: Var, opts: CompileOptions) -> Formula {
    assert_eq!(inputs.len(), f.arity(), "compile_graph: input count");
    let mut c = Compiler { opts, w: first_free, used_w: false };
    let body = c.graph(f, inputs, output, first_free + 1);
    if c.used_w {
        Formula::exists(first_free, body)
    } else {
        body
    }
}

struct Compiler {
    opts: CompileOptions,
    w: Var,
    used_w: bool,
}

fn var(v: Var) -> Term {
    Term::var(v)
}

/// `∃q (q ≤ c ∧ c = q·M + v ∧ S(v) ≤ M)` with `M = S(S(i)·d)`: `β(c,d,i) = v`.
pub fn beta_atom(c: Var, d: Var, i: &Term, v: &Term, q: Var) -> Formula {
    let m = Term::succ(Term::times(Term::succ(i.clone()), var(d)));
    Formula::exists(
        q,
        Formula::and(
            Formula::le(var(q), var(c)),
            Formula::and(
                Formula::eq(var(c), Term::plus(Term::times(var(q), m.clone()), v.clone())),
                Formula::le(Term::succ(v.clone()), m),
            ),
        ),
    )
}

/// Arguments larger than this are bound to a variable before inlining.
const INLINE_TERM_LIMIT: u128 = 8;

/// One quantifier scope of a graph: named bodies are inlined into it,
/// repeated calls are shared, and the calls of each recursion or search
/// node are collected so that a single copy of its graph serves them all.
struct Scope {
    next: Var,
    binders: Vec<Var>,
    conj: Vec<Formula>,
    memo: HashMap<(usize, Vec<u64>), Term>,
    heavy: Vec<(PrFunction, Vec<(Vec<Term>, Term)>)>,
}

impl Scope {
    fn new(depth: Var) -> Self {
        Scope { next: depth, binders: Vec::new(), conj: Vec::new(), memo: HashMap::new(), heavy: Vec::new() }
    }

    fn alloc(&mut self) -> Var {
        let v = self.next;
        self.next += 1;
        self.binders.push(v);
        v
    }

    fn add_heavy(&mut self, f: &PrFunction, args: Vec<Term>, out: Term) {
        match self.heavy.iter_mut().find(|(g, _)| g.ptr_id() == f.ptr_id()) {
            Some((_, calls)) => calls.push((args, out)),
            None => self.heavy.push((f.clone(), vec![(args, out)])),
        }
    }
}

impl Compiler {
    fn ex(&mut self, z: Var, body: Formula) -> Formula {
        self.used_w = true;
        Formula::exists(z, Formula::and(Formula::le(var(z), var(self.w)), body))
    }

    fn term_of(&self, f: &PrFunction, ins: &[Term]) -> Option<Term> {
        match f.kind() {
            PrKind::Zero => Some(Term::zero()),
            PrKind::Succ => Some(Term::succ(ins[0].clone())),
            PrKind::Proj(i) => Some(ins[*i].clone()),
            PrKind::Const(c) => Some(numeral_above(c, DEFAULT_NUMERAL_THRESHOLD)),
            PrKind::Compose(h, gs) => {
                let ts = gs.iter().map(|g| self.term_of(g, ins)).collect::<Option<Vec<_>>>()?;
                self.term_of(h, &ts)
            }
            PrKind::PrimRec(..) | PrKind::BoundedSearch(..) => None,
            PrKind::Named(n) => match (self.opts.templates, n.template) {
                (true, Some(Template::Term(t))) => Some(t(ins)),
                (true, Some(Template::Graph(_))) => None,
                _ => self.term_of(&n.body, ins),
            },
        }
    }

    /// The graph `f(ins) = out` in a fresh scope whose variables start at
    /// `depth`.
    fn graph(&mut self, f: &PrFunction, ins: &[Term], out: &Term, depth: Var) -> Formula {
        stacker::maybe_grow(64 * 1024, 4 * 1024 * 1024, || {
            let mut sc = Scope::new(depth);
            self.flat_into(f, ins, out, &mut sc);
            self.close(sc)
        })
    }

    /// Adds `f(ins) = out` to the scope.
    fn flat_into(&mut self, f: &PrFunction, ins: &[Term], out: &Term, sc: &mut Scope) {
        match f.kind() {
            PrKind::PrimRec(..) | PrKind::BoundedSearch(..) => {
                let args = self.bind_args(ins, sc);
                sc.add_heavy(f, args, out.clone())
            }
            PrKind::Named(n) if !(self.opts.templates && n.template.is_some()) => {
                let args = self.bind_args(ins, sc);
                self.flat_into(&n.body, &args, out, sc)
            }
            PrKind::Named(n) if matches!(n.template, Some(Template::Graph(_))) => {
                let Some(Template::Graph(g)) = n.template else { unreachable!() };
                let args = self.bind_args(ins, sc);
                sc.conj.push(g(&args, out, sc.next));
            }
            _ => {
                let t = self.flat(f, ins, sc);
                sc.conj.push(Formula::eq(out.clone(), t));
            }
        }
    }

    fn bind_args(&mut self, ins: &[Term], sc: &mut Scope) -> Vec<Term> {
        ins.iter()
            .map(|t| {
                if t.tree_size() <= INLINE_TERM_LIMIT {
                    return t.clone();
                }
                let key = (usize::MAX, vec![t.id()]);
                if let Some(v) = sc.memo.get(&key) {
                    return v.clone();
                }
                let z = var(sc.alloc());
                sc.conj.push(Formula::eq(z.clone(), t.clone()));
                sc.memo.insert(key, z.clone());
                z
            })
            .collect()
    }

    /// A term for `f(ins)`, adding constraints for intermediate values.
    fn flat(&mut self, f: &PrFunction, ins: &[Term], sc: &mut Scope) -> Term {
        match f.kind() {
            PrKind::Zero => Term::zero(),
            PrKind::Succ => Term::succ(ins[0].clone()),
            PrKind::Proj(i) => ins[*i].clone(),
            PrKind::Const(c) => numeral_above(c, DEFAULT_NUMERAL_THRESHOLD),
            PrKind::Compose(h, gs) => {
                let args: Vec<Term> = gs.iter().map(|g| self.flat(g, ins, sc)).collect();
                self.flat(h, &args, sc)
            }
            _ => {
                if let (PrKind::Named(n), true) = (f.kind(), self.opts.templates) {
                    if let Some(Template::Term(t)) = n.template {
                        return t(ins);
                    }
                }
                let key = (f.ptr_id(), ins.iter().map(|t| t.id()).collect::<Vec<_>>());
                if let Some(t) = sc.memo.get(&key) {
                    return t.clone();
                }
                let t = match f.kind() {
                    PrKind::Named(n) if !(self.opts.templates && n.template.is_some()) => {
                        let args = self.bind_args(ins, sc);
                        self.flat(&n.body, &args, sc)
                    }
                    _ => {
                        let z = var(sc.alloc());
                        self.flat_into(f, ins, &z, sc);
                        z
                    }
                };
                sc.memo.insert(key, t.clone());
                t
            }
        }
    }

    /// Emits the collected recursion and search calls and quantifies the
    /// scope's variables.
    fn close(&mut self, mut sc: Scope) -> Formula {
        let base = sc.next;
        for (f, calls) in std::mem::take(&mut sc.heavy) {
            let phi = if calls.len() == 1 {
                let (args, out) = &calls[0];
                self.heavy(&f, args, out, base)
            } else {
                self.multiplexed(&f, &calls, base)
            };
            sc.conj.push(phi);
        }
        let mut body = Formula::and_all(sc.conj);
        for z in sc.binders.into_iter().rev() {
            body = self.ex(z, body);
        }
        body
    }

    /// `∀s ≤ k-1 ∃x̄ ∃y (⋀_j (s = j → x̄ = ā_j ∧ y = o_j)) ∧ f(x̄) = y`:
    /// one copy of the graph of `f` for `k` calls. Argument positions that
    /// agree across all calls are passed through.
    fn multiplexed(&mut self, f: &PrFunction, calls: &[(Vec<Term>, Term)], base: Var) -> Formula {
        let s = base;
        let arity = f.arity();
        let mut next = base + 1;
        let mut formal = Vec::with_capacity(arity);
        let mut varying = Vec::new();
        for i in 0..arity {
            let first = &calls[0].0[i];
            if calls.iter().all(|(a, _)| a[i] == *first) {
                formal.push(first.clone());
            } else {
                formal.push(var(next));
                varying.push((i, next));
                next += 1;
            }
        }
        let y = next;
        let graph = self.heavy(f, &formal, &var(y), y + 1);
        let cases = calls.iter().enumerate().map(|(j, (args, out))| {
            let mut eqs: Vec<Formula> = varying.iter().map(|&(i, x)| Formula::eq(var(x), args[i].clone())).collect();
            eqs.push(Formula::eq(var(y), out.clone()));
            let sel = numeral_above(&BigUint::from(j), DEFAULT_NUMERAL_THRESHOLD);
            Formula::implies(Formula::eq(var(s), sel), Formula::and_all(eqs))
        });
        let mut body = Formula::and(Formula::and_all(cases.collect::<Vec<_>>()), graph);
        body = self.ex(y, body);
        for &(_, x) in varying.iter().rev() {
            body = self.ex(x, body);
        }
        let last = numeral_above(&BigUint::from(calls.len() - 1), DEFAULT_NUMERAL_THRESHOLD);
        Formula::forall(s, Formula::implies(Formula::le(var(s), last), body))
    }

    /// Graph of one recursion or search node.
    fn heavy(&mut self, f: &PrFunction, ins: &[Term], out: &Term, depth: Var) -> Formula {
        match f.kind() {
            PrKind::PrimRec(base, step) => {
                let n = &ins[0];
                let xs = &ins[1..];
                let (c, d, next) = (depth, depth + 1, depth + 2);
                // β(c,d,0) = base(xs)
                let first = match self.term_of(base, xs) {
                    Some(t) => beta_atom(c, d, &Term::zero(), &t, next),
                    None => {
                        let u = next;
                        let g = self.graph(base, xs, &var(u), next + 1);
                        let b = beta_atom(c, d, &Term::zero(), &var(u), next + 1);
                        self.ex(u, Formula::and(g, b))
                    }
                };
                // ∀i ≤ n (i = n ∨ ∃u (β(c,d,i) = u ∧ step(i, u, xs) = β(c,d,i+1)))
                let (i, u, w, inner) = (next, next + 1, next + 2, next + 3);
                let mut step_args = vec![var(i), var(u)];
                step_args.extend_from_slice(xs);
                let here = beta_atom(c, d, &var(i), &var(u), inner);
                let succ_i = Term::succ(var(i));
                let body = match self.term_of(step, &step_args) {
                    Some(t) => self.ex(u, Formula::and(here, beta_atom(c, d, &succ_i, &t, w))),
                    None => {
                        let g = self.graph(step, &step_args, &var(w), inner);
                        let there = beta_atom(c, d, &succ_i, &var(w), inner);
                        let inner_ex = self.ex(w, Formula::and(g, there));
                        self.ex(u, Formula::and(here, inner_ex))
                    }
                };
                let lp = Formula::forall(
                    i,
                    Formula::implies(Formula::le(var(i), n.clone()), Formula::or(Formula::eq(var(i), n.clone()), body)),
                );
                let last = beta_atom(c, d, n, out, next);
                let core = Formula::and_all([first, lp, last]);
                let dd = self.ex(d, core);
                self.ex(c, dd)
            }
            PrKind::BoundedSearch(pred, bound) => {
                let (bt, next, mvar) = match self.term_of(bound, ins) {
                    Some(t) => (t, depth, None),
                    None => (var(depth), depth + 1, Some(depth)),
                };
                let sb = Term::succ(bt.clone());
                // ∀z ≤ out: pred(z) = 0 below out, and pred(out) ≠ 0 unless out = S(bound)
                let (z, r) = (next, next + 1);
                let mut z_args = vec![var(z)];
                z_args.extend_from_slice(ins);
                let at_out = Formula::eq(var(z), out.clone());
                let shape = |val: Term| {
                    let zero = Formula::eq(val, Term::zero());
                    Formula::and(
                        Formula::or(at_out.clone(), zero.clone()),
                        Formula::implies(at_out.clone(), Formula::or(Formula::eq(out.clone(), sb.clone()), Formula::not(zero))),
                    )
                };
                let each = match self.term_of(pred, &z_args) {
                    Some(t) => shape(t),
                    None => {
                        let g = self.graph(pred, &z_args, &var(r), r + 1);
                        self.ex(r, Formula::and(g, shape(var(r))))
                    }
                };
                let all = Formula::forall(z, Formula::implies(Formula::le(var(z), out.clone()), each));
                let core = Formula::and(Formula::le(out.clone(), sb.clone()), all);
                match mvar {
                    Some(m) => {
                        let g = self.graph(bound, ins, &var(m), m + 1);
                        self.ex(m, Formula::and(g, core))
                    }
                    None => core,
                }
            }
            _ => unreachable!("only recursion and search nodes are heavy"),
        }
    }
}

/// Exactly one leading block of existentials over a Δ₀ matrix.
pub fn is_sigma1(phi: &Formula) -> bool {
    let mut m = phi;
    while let FormulaKind::Exists(_, body) = m.kind() {
        m = body;
    }
    is_delta0(m)
}

/// Every quantifier is bounded: `∃x (x ≤ t ∧ ψ)` or `∀x (x ≤ t → ψ)` with
/// `x` not in `t`.
pub fn is_delta0(phi: &Formula) -> bool {
    let mut memo: HashMap<u64, bool> = HashMap::new();
    delta0(phi, &mut memo)
}

fn bounded_guard(x: Var, g: &Formula) -> bool {
    match g.kind() {
        FormulaKind::Le(l, t) => matches!(l.kind(), TermKind::Var(v) if *v == x) && !t.has_free(x),
        _ => false,
    }
}

fn delta0(phi: &Formula, memo: &mut HashMap<u64, bool>) -> bool {
    if let Some(&r) = memo.get(&phi.id()) {
        return r;
    }
    let r = match phi.kind() {
        FormulaKind::Eq(..) | FormulaKind::Le(..) => true,
        FormulaKind::Not(a) => delta0(a, memo),
        FormulaKind::Or(a, b) | FormulaKind::And(a, b) | FormulaKind::Implies(a, b) => delta0(a, memo) && delta0(b, memo),
        FormulaKind::Exists(x, body) => match body.kind() {
            FormulaKind::And(g, rest) => bounded_guard(*x, g) && delta0(rest, memo),
            _ => false,
        },
        FormulaKind::ForAll(x, body) => match body.kind() {
            FormulaKind::Implies(g, rest) => bounded_guard(*x, g) && delta0(rest, memo),
            _ => false,
        },
    };
    memo.insert(phi.id(), r);
    r
}
