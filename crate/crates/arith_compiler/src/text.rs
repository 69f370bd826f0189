//! Structured text format for IR programs.
//!
//! ```text
//! ; comments run to end of line
//! (def double (comp add (proj 1 0) (proj 1 0)))
//! (comp succ double)
//! ```
//!
//! Expressions: `succ`, `(zero K)`, `(proj K I)`, `(const K N)`,
//! `(comp F G1 .. Gm)`, `(rec BASE STEP)`, `(search PRED BOUND)`, or a name.
//! Names resolve to earlier `def`s, then to the built-in library. The value
//! of a program is its last expression, or its last definition.

use std::collections::{HashMap, HashSet};
use std::fmt::Write;

use num_bigint::BigUint;
use thiserror::Error;

use crate::ir::{PrFunction, PrKind};
use crate::{arith, strings, PrError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TextError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown function name `{0}`")]
    UnknownName(String),
    #[error("{0}")]
    Arity(#[from] PrError),
    #[error("empty program")]
    Empty,
}

/// The built-in functions available by name.
pub fn library() -> Vec<PrFunction> {
    vec![
        arith::add(),
        arith::mult(),
        arith::pred(),
        arith::monus(),
        arith::sg(),
        arith::nsg(),
        arith::eq_c(),
        arith::lt_c(),
        arith::le_c(),
        arith::cond(),
        arith::and_c(),
        arith::or_c(),
        arith::div(),
        arith::modulo(),
        arith::pow(),
        arith::tri(),
        arith::pair(),
        arith::unpair_l(),
        arith::unpair_r(),
        arith::divides(),
        arith::prime(),
        strings::len(),
        strings::digit(),
        strings::cat(),
        strings::sub(),
        strings::expr_end(),
    ]
}

fn library_lookup(name: &str) -> Option<PrFunction> {
    library().into_iter().find(|f| f.name() == Some(name))
}

#[derive(Debug, Clone, PartialEq)]
enum Sexp {
    Atom(String, usize),
    List(Vec<Sexp>, usize),
}

fn tokenize(src: &str) -> Result<Vec<Sexp>, TextError> {
    let bytes = src.as_bytes();
    let mut stack: Vec<(Vec<Sexp>, usize)> = vec![(Vec::new(), 0)];
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b';' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            b'(' => {
                stack.push((Vec::new(), i));
                i += 1;
            }
            b')' => {
                let (items, start) = stack.pop().expect("stack has a root");
                let parent = stack.last_mut().ok_or(TextError::Syntax { pos: i, msg: "unbalanced `)`".into() })?;
                parent.0.push(Sexp::List(items, start));
                i += 1;
            }
            c if c.is_ascii_whitespace() => i += 1,
            _ => {
                let start = i;
                while i < bytes.len() && !bytes[i].is_ascii_whitespace() && !b"();".contains(&bytes[i]) {
                    i += 1;
                }
                stack.last_mut().expect("root").0.push(Sexp::Atom(src[start..i].to_string(), start));
            }
        }
    }
    if stack.len() != 1 {
        let pos = stack.last().map(|s| s.1).unwrap_or(0);
        return Err(TextError::Syntax { pos, msg: "unclosed `(`".into() });
    }
    Ok(stack.pop().expect("root").0)
}

fn number(s: &Sexp) -> Result<BigUint, TextError> {
    match s {
        Sexp::Atom(a, pos) => {
            a.parse::<BigUint>().map_err(|_| TextError::Syntax { pos: *pos, msg: format!("expected a number, found `{a}`") })
        }
        Sexp::List(_, pos) => Err(TextError::Syntax { pos: *pos, msg: "expected a number".into() }),
    }
}

fn small(s: &Sexp) -> Result<usize, TextError> {
    let n = number(s)?;
    let pos = match s {
        Sexp::Atom(_, p) | Sexp::List(_, p) => *p,
    };
    usize::try_from(n).map_err(|_| TextError::Syntax { pos, msg: "number too large".into() })
}

struct Env {
    defs: HashMap<String, PrFunction>,
}

impl Env {
    fn expr(&self, s: &Sexp) -> Result<PrFunction, TextError> {
        match s {
            Sexp::Atom(a, _) if a == "succ" => Ok(PrFunction::succ()),
            Sexp::Atom(a, _) => self
                .defs
                .get(a)
                .cloned()
                .or_else(|| library_lookup(a))
                .ok_or_else(|| TextError::UnknownName(a.clone())),
            Sexp::List(items, pos) => {
                let Some(Sexp::Atom(head, _)) = items.first() else {
                    return Err(TextError::Syntax { pos: *pos, msg: "expected an operator".into() });
                };
                let args = &items[1..];
                let want = |n: usize| -> Result<(), TextError> {
                    if args.len() == n {
                        Ok(())
                    } else {
                        Err(TextError::Syntax { pos: *pos, msg: format!("`{head}` takes {n} arguments") })
                    }
                };
                match head.as_str() {
                    "zero" => {
                        want(1)?;
                        Ok(PrFunction::zero(small(&args[0])?))
                    }
                    "proj" => {
                        want(2)?;
                        Ok(PrFunction::proj(small(&args[0])?, small(&args[1])?)?)
                    }
                    "const" => {
                        want(2)?;
                        Ok(PrFunction::constant(small(&args[0])?, number(&args[1])?))
                    }
                    "comp" => {
                        if args.is_empty() {
                            return Err(TextError::Syntax { pos: *pos, msg: "`comp` needs a function".into() });
                        }
                        let f = self.expr(&args[0])?;
                        let gs = args[1..].iter().map(|g| self.expr(g)).collect::<Result<Vec<_>, _>>()?;
                        Ok(PrFunction::compose(f, gs)?)
                    }
                    "rec" => {
                        want(2)?;
                        Ok(PrFunction::prim_rec(self.expr(&args[0])?, self.expr(&args[1])?)?)
                    }
                    "search" => {
                        want(2)?;
                        Ok(PrFunction::bounded_search(self.expr(&args[0])?, self.expr(&args[1])?)?)
                    }
                    other => Err(TextError::Syntax { pos: *pos, msg: format!("unknown operator `{other}`") }),
                }
            }
        }
    }
}

/// Parses a program and returns its value.
pub fn parse_program(src: &str) -> Result<PrFunction, TextError> {
    let mut env = Env { defs: HashMap::new() };
    let mut last = None;
    for item in tokenize(src)? {
        if let Sexp::List(items, pos) = &item {
            if let Some(Sexp::Atom(h, _)) = items.first() {
                if h == "def" {
                    let (Some(Sexp::Atom(name, _)), Some(body), 3) = (items.get(1), items.get(2), items.len()) else {
                        return Err(TextError::Syntax { pos: *pos, msg: "expected (def NAME EXPR)".into() });
                    };
                    let body = env.expr(body)?;
                    let f = PrFunction::named(name, body, None, None);
                    env.defs.insert(name.clone(), f.clone());
                    last = Some(f);
                    continue;
                }
            }
        }
        last = Some(env.expr(&item)?);
    }
    last.ok_or(TextError::Empty)
}

/// Prints an expression, with named functions by name.
pub fn print_pr(f: &PrFunction) -> String {
    let mut out = String::new();
    print_into(f, &mut out);
    out
}

fn print_into(f: &PrFunction, out: &mut String) {
    match f.kind() {
        PrKind::Zero => write!(out, "(zero {})", f.arity()).unwrap(),
        PrKind::Succ => out.push_str("succ"),
        PrKind::Proj(i) => write!(out, "(proj {} {})", f.arity(), i).unwrap(),
        PrKind::Const(c) => write!(out, "(const {} {})", f.arity(), c).unwrap(),
        PrKind::Compose(h, gs) => {
            out.push_str("(comp ");
            print_into(h, out);
            for g in gs {
                out.push(' ');
                print_into(g, out);
            }
            out.push(')');
        }
        PrKind::PrimRec(a, b) | PrKind::BoundedSearch(a, b) => {
            out.push_str(if matches!(f.kind(), PrKind::PrimRec(..)) { "(rec " } else { "(search " });
            print_into(a, out);
            out.push(' ');
            print_into(b, out);
            out.push(')');
        }
        PrKind::Named(n) => out.push_str(&n.name),
    }
}

/// Prints a self-contained program: definitions for every named function
/// that is not in the library, then the expression.
pub fn print_program(f: &PrFunction) -> String {
    let mut out = String::new();
    let mut seen = HashSet::new();
    defs_into(f, &mut seen, &mut out);
    print_into(f, &mut out);
    out.push('\n');
    out
}

fn defs_into(f: &PrFunction, seen: &mut HashSet<String>, out: &mut String) {
    match f.kind() {
        PrKind::Zero | PrKind::Succ | PrKind::Proj(_) | PrKind::Const(_) => {}
        PrKind::Compose(h, gs) => {
            defs_into(h, seen, out);
            for g in gs {
                defs_into(g, seen, out);
            }
        }
        PrKind::PrimRec(a, b) | PrKind::BoundedSearch(a, b) => {
            defs_into(a, seen, out);
            defs_into(b, seen, out);
        }
        PrKind::Named(n) => {
            if library_lookup(&n.name).is_some() || !seen.insert(n.name.clone()) {
                return;
            }
            defs_into(&n.body, seen, out);
            out.push_str(&format!("(def {} ", n.name));
            print_into(&n.body, out);
            out.push_str(")\n");
        }
    }
}
