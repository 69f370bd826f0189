//! Terse constructors for writing library functions. They panic on arity
//! errors, which in library code are programming mistakes.

use num_bigint::BigUint;

use crate::ir::{NativeFn, PrFunction, Template};

pub type Pr = PrFunction;

pub fn zero(k: usize) -> Pr {
    Pr::zero(k)
}

pub fn succ() -> Pr {
    Pr::succ()
}

pub fn proj(k: usize, i: usize) -> Pr {
    Pr::proj(k, i).expect("projection index")
}

pub fn konst(k: usize, v: impl Into<BigUint>) -> Pr {
    Pr::constant(k, v.into())
}

pub fn call(f: &Pr, args: &[Pr]) -> Pr {
    match Pr::compose(f.clone(), args.to_vec()) {
        Ok(p) => p,
        Err(e) => panic!("composing {}: {e}", f.name().unwrap_or("<anonymous>")),
    }
}

pub fn rec(base: Pr, step: Pr) -> Pr {
    Pr::prim_rec(base, step).expect("primitive recursion arity")
}

pub fn search(pred: Pr, bound: Pr) -> Pr {
    Pr::bounded_search(pred, bound).expect("bounded search arity")
}

pub fn named(name: &str, body: Pr, native: Option<NativeFn>, template: Option<Template>) -> Pr {
    Pr::named(name, body, native, template)
}

/// Argument context of a function body with `k` arguments.
#[derive(Clone, Copy)]
pub struct Ctx(pub usize);

impl Ctx {
    pub fn arg(self, i: usize) -> Pr {
        proj(self.0, i)
    }

    pub fn num(self, v: u64) -> Pr {
        konst(self.0, v)
    }

    pub fn big(self, v: &BigUint) -> Pr {
        konst(self.0, v.clone())
    }
}

/// Defines a cached library function: `lib_fn!(name, "text name", native, template, |c| body)`.
#[macro_export]
macro_rules! lib_fn {
    ($(#[$m:meta])* $f:ident, $k:expr, $native:expr, $template:expr, |$c:ident| $body:expr) => {
        $(#[$m])*
        pub fn $f() -> $crate::PrFunction {
            static CELL: std::sync::OnceLock<$crate::PrFunction> = std::sync::OnceLock::new();
            CELL.get_or_init(|| {
                let $c = $crate::build::Ctx($k);
                let body: $crate::PrFunction = $body;
                assert_eq!(body.arity(), $k, "arity of {}", stringify!($f));
                $crate::build::named(stringify!($f), body, $native, $template)
            })
            .clone()
        }
    };
}
