//! The primitive-recursive function IR and its interpreter.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use syntax::{Formula, Term, Var};

use crate::PrError;

/// Native implementation of a named function. It must agree with the body
/// on every input; the test suite checks this on small inputs.
pub type NativeFn = fn(&[BigUint]) -> BigUint;

/// A hand-written graph used by the compiler instead of the body.
#[derive(Clone, Copy)]
pub enum Template {
    /// The function is a term in its arguments.
    Term(fn(&[Term]) -> Term),
    /// A bounded graph `phi(inputs, output)`. Bound variables must be taken
    /// from the given index upwards.
    Graph(fn(&[Term], &Term, Var) -> Formula),
}

pub struct Named {
    pub name: String,
    pub body: PrFunction,
    pub native: Option<NativeFn>,
    pub template: Option<Template>,
}

#[derive(Clone)]
pub enum PrKind {
    Zero,
    Succ,
    Proj(usize),
    /// Constant function; an extension for large literals such as codes.
    Const(BigUint),
    Compose(PrFunction, Vec<PrFunction>),
    /// `h(0, xs) = f(xs)`, `h(n+1, xs) = g(n, h(n, xs), xs)`.
    PrimRec(PrFunction, PrFunction),
    /// Least `z <= bound(xs)` with `pred(z, xs) != 0`, else `bound(xs) + 1`.
    BoundedSearch(PrFunction, PrFunction),
    Named(Arc<Named>),
}

struct Node {
    arity: usize,
    kind: PrKind,
}

#[derive(Clone)]
pub struct PrFunction(Arc<Node>);

impl PrFunction {
    fn mk(arity: usize, kind: PrKind) -> Self {
        PrFunction(Arc::new(Node { arity, kind }))
    }

    pub fn arity(&self) -> usize {
        self.0.arity
    }

    pub fn kind(&self) -> &PrKind {
        &self.0.kind
    }

    /// Address of the shared node; stable for the lifetime of the value.
    pub fn ptr_id(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    pub fn zero(arity: usize) -> Self {
        Self::mk(arity, PrKind::Zero)
    }

    pub fn succ() -> Self {
        Self::mk(1, PrKind::Succ)
    }

    pub fn proj(arity: usize, i: usize) -> Result<Self, PrError> {
        if i >= arity {
            return Err(PrError::ProjectionOutOfRange { arity, index: i });
        }
        Ok(Self::mk(arity, PrKind::Proj(i)))
    }

    pub fn constant(arity: usize, value: BigUint) -> Self {
        Self::mk(arity, PrKind::Const(value))
    }

    pub fn compose(f: PrFunction, gs: Vec<PrFunction>) -> Result<Self, PrError> {
        if gs.len() != f.arity() {
            return Err(PrError::ArityMismatch { context: "compose outer", expected: f.arity(), found: gs.len() });
        }
        let Some(first) = gs.first() else {
            return Err(PrError::EmptyComposition);
        };
        let k = first.arity();
        if let Some(g) = gs.iter().find(|g| g.arity() != k) {
            return Err(PrError::ArityMismatch { context: "compose inner", expected: k, found: g.arity() });
        }
        Ok(Self::mk(k, PrKind::Compose(f, gs)))
    }

    pub fn prim_rec(base: PrFunction, step: PrFunction) -> Result<Self, PrError> {
        if step.arity() != base.arity() + 2 {
            return Err(PrError::ArityMismatch {
                context: "primitive recursion step",
                expected: base.arity() + 2,
                found: step.arity(),
            });
        }
        Ok(Self::mk(base.arity() + 1, PrKind::PrimRec(base, step)))
    }

    pub fn bounded_search(pred: PrFunction, bound: PrFunction) -> Result<Self, PrError> {
        if pred.arity() != bound.arity() + 1 {
            return Err(PrError::ArityMismatch {
                context: "bounded search predicate",
                expected: bound.arity() + 1,
                found: pred.arity(),
            });
        }
        Ok(Self::mk(bound.arity(), PrKind::BoundedSearch(pred, bound)))
    }

    pub fn named(name: &str, body: PrFunction, native: Option<NativeFn>, template: Option<Template>) -> Self {
        let arity = body.arity();
        Self::mk(arity, PrKind::Named(Arc::new(Named { name: name.to_string(), body, native, template })))
    }

    pub fn name(&self) -> Option<&str> {
        match self.kind() {
            PrKind::Named(n) => Some(&n.name),
            _ => None,
        }
    }

    /// Number of IR nodes with named functions expanded once per use.
    pub fn expanded_size(&self) -> u128 {
        match self.kind() {
            PrKind::Zero | PrKind::Succ | PrKind::Proj(_) | PrKind::Const(_) => 1,
            PrKind::Compose(f, gs) => 1 + f.expanded_size() + gs.iter().map(|g| g.expanded_size()).sum::<u128>(),
            PrKind::PrimRec(f, g) | PrKind::BoundedSearch(f, g) => 1 + f.expanded_size() + g.expanded_size(),
            PrKind::Named(n) => n.body.expanded_size(),
        }
    }
}

impl fmt::Debug for PrFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::text::print_pr(self))
    }
}

/// Evaluates `f` on `args`, using native implementations of named functions.
pub fn eval_pr(f: &PrFunction, args: &[BigUint]) -> Result<BigUint, PrError> {
    check_args(f, args)?;
    Ok(Interp { natives: &|_| true }.eval(f, args))
}

/// Evaluates `f` by its primitive-recursive definition alone.
pub fn eval_pr_pure(f: &PrFunction, args: &[BigUint]) -> Result<BigUint, PrError> {
    check_args(f, args)?;
    Ok(Interp { natives: &|_| false }.eval(f, args))
}

/// Evaluates `f`, using the native implementation of a named function only
/// where `use_native(name)` holds.
pub fn eval_pr_with(f: &PrFunction, args: &[BigUint], use_native: &dyn Fn(&str) -> bool) -> Result<BigUint, PrError> {
    check_args(f, args)?;
    Ok(Interp { natives: use_native }.eval(f, args))
}

fn check_args(f: &PrFunction, args: &[BigUint]) -> Result<(), PrError> {
    if args.len() != f.arity() {
        return Err(PrError::ArityMismatch { context: "arguments", expected: f.arity(), found: args.len() });
    }
    Ok(())
}

struct Interp<'a> {
    natives: &'a dyn Fn(&str) -> bool,
}

impl Interp<'_> {
    fn eval(&self, f: &PrFunction, args: &[BigUint]) -> BigUint {
        stacker::maybe_grow(64 * 1024, 4 * 1024 * 1024, || self.eval_inner(f, args))
    }

    /// Short-circuits conditionals and connectives. Sound because every
    /// function is total, so skipping an argument changes nothing but time.
    fn lazy(&self, h: &PrFunction, gs: &[PrFunction], args: &[BigUint]) -> Option<BigUint> {
        let name = h.name()?;
        if !(self.natives)(name) {
            return None;
        }
        let id = h.ptr_id();
        if id == crate::arith::cond().ptr_id() {
            let c = self.eval(&gs[0], args);
            Some(self.eval(&gs[if c.is_zero() { 2 } else { 1 }], args))
        } else if id == crate::arith::and_c().ptr_id() {
            let ok = !self.eval(&gs[0], args).is_zero() && !self.eval(&gs[1], args).is_zero();
            Some(BigUint::from(ok as u8))
        } else if id == crate::arith::or_c().ptr_id() {
            let ok = !self.eval(&gs[0], args).is_zero() || !self.eval(&gs[1], args).is_zero();
            Some(BigUint::from(ok as u8))
        } else {
            None
        }
    }

    fn eval_inner(&self, f: &PrFunction, args: &[BigUint]) -> BigUint {
        match f.kind() {
            PrKind::Zero => BigUint::zero(),
            PrKind::Succ => &args[0] + 1u32,
            PrKind::Proj(i) => args[*i].clone(),
            PrKind::Const(c) => c.clone(),
            PrKind::Compose(h, gs) => {
                if let Some(v) = self.lazy(h, gs, args) {
                    return v;
                }
                let inner: Vec<BigUint> = gs.iter().map(|g| self.eval(g, args)).collect();
                self.eval(h, &inner)
            }
            PrKind::PrimRec(base, step) => {
                let n = args[0].to_u64().expect("recursion depth beyond u64 is not evaluable");
                let mut acc = self.eval(base, &args[1..]);
                let mut buf = Vec::with_capacity(args.len() + 1);
                for i in 0..n {
                    buf.clear();
                    buf.push(BigUint::from(i));
                    buf.push(acc);
                    buf.extend_from_slice(&args[1..]);
                    acc = self.eval(step, &buf);
                }
                acc
            }
            PrKind::BoundedSearch(pred, bound) => {
                let b = self.eval(bound, args);
                let mut buf = Vec::with_capacity(args.len() + 1);
                buf.push(BigUint::zero());
                buf.extend_from_slice(args);
                let mut z = BigUint::zero();
                while z <= b {
                    buf[0] = z.clone();
                    if !self.eval(pred, &buf).is_zero() {
                        return z;
                    }
                    z += 1u32;
                }
                b + BigUint::one()
            }
            PrKind::Named(n) => match n.native {
                Some(native) if (self.natives)(&n.name) => native(args),
                _ => self.eval(&n.body, args),
            },
        }
    }
}
