//! Recursive-descent parser for the ASCII formula grammar.
//!
//! ```text
//! formula := or ( "->" formula )?          right associative
//! or      := and ( "|" and )*              left associative
//! and     := unary ( "&" unary )*          left associative
//! unary   := "~" unary | "all" var unary | "exists" var unary
//!          | "(" formula ")" | term ( "=" | "<=" ) term
//! term    := prod ( "+" prod )*
//! prod    := post ( "*" post )*
//! post    := "0" | "S" post | var | "(" term ")"
//! var     := one of a..u | "v" digits
//! ```

use thiserror::Error;

use crate::{Formula, Term, Var};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("syntax error at offset {pos}: expected {expected}")]
pub struct SyntaxError {
    pub pos: usize,
    pub expected: &'static str,
}

type PResult<T> = Result<T, SyntaxError>;

pub fn parse_formula(text: &str) -> PResult<Formula> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let f = p.formula()?;
    p.end()?;
    Ok(f)
}

pub fn parse_term(text: &str) -> PResult<Term> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let t = p.term()?;
    p.end()?;
    Ok(t)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, expected: &'static str) -> PResult<T> {
        Err(SyntaxError { pos: self.pos, expected })
    }

    fn ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn end(&mut self) -> PResult<()> {
        self.ws();
        if self.pos == self.src.len() {
            Ok(())
        } else {
            self.err("end of input")
        }
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.ws();
        if self.src[self.pos..].starts_with(tok.as_bytes()) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn peek_word(&mut self) -> Option<&[u8]> {
        self.ws();
        let start = self.pos;
        let mut end = start;
        if end < self.src.len() && self.src[end].is_ascii_lowercase() {
            while end < self.src.len() && self.src[end].is_ascii_alphanumeric() {
                end += 1;
            }
            Some(&self.src[start..end])
        } else {
            None
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        if self.peek_word() == Some(kw.as_bytes()) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn var(&mut self) -> PResult<Var> {
        let word = match self.peek_word() {
            Some(w) => w.to_vec(),
            None => return self.err("a variable"),
        };
        let v = match word.as_slice() {
            [c] if (b'a'..=b'u').contains(c) => Some((c - b'a') as Var),
            [b'v', digits @ ..] if !digits.is_empty() && digits.iter().all(u8::is_ascii_digit) => {
                std::str::from_utf8(digits).unwrap().parse::<Var>().ok().and_then(|n| n.checked_add(21))
            }
            _ => None,
        };
        match v {
            Some(v) => {
                self.pos += word.len();
                Ok(v)
            }
            None => self.err("a variable"),
        }
    }

    fn formula(&mut self) -> PResult<Formula> {
        let lhs = self.or()?;
        if self.eat("->") {
            let rhs = self.formula()?;
            Ok(Formula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> PResult<Formula> {
        let mut acc = self.and()?;
        while self.eat("|") {
            acc = Formula::or(acc, self.and()?);
        }
        Ok(acc)
    }

    fn and(&mut self) -> PResult<Formula> {
        let mut acc = self.unary()?;
        while self.eat("&") {
            acc = Formula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> PResult<Formula> {
        stacker::maybe_grow(64 * 1024, 16 * 1024 * 1024, || {
            if self.eat("~") {
                return Ok(Formula::not(self.unary()?));
            }
            if self.keyword("all") {
                let v = self.var()?;
                return Ok(Formula::forall(v, self.unary()?));
            }
            if self.keyword("exists") {
                let v = self.var()?;
                return Ok(Formula::exists(v, self.unary()?));
            }
            self.ws();
            if self.src.get(self.pos) == Some(&b'(') {
                let start = self.pos;
                let atom_err = match self.atom() {
                    Ok(f) => return Ok(f),
                    Err(e) => e,
                };
                self.pos = start + 1;
                let inner = self.formula();
                let paren_result = inner.and_then(|f| {
                    if self.eat(")") {
                        Ok(f)
                    } else {
                        self.err("')'")
                    }
                });
                return paren_result.map_err(|e| if e.pos >= atom_err.pos { e } else { atom_err });
            }
            self.atom()
        })
    }

    fn atom(&mut self) -> PResult<Formula> {
        let lhs = self.term()?;
        if self.eat("<=") {
            Ok(Formula::le(lhs, self.term()?))
        } else if self.eat("=") {
            Ok(Formula::eq(lhs, self.term()?))
        } else {
            self.err("'=' or '<='")
        }
    }

    fn term(&mut self) -> PResult<Term> {
        let mut acc = self.prod()?;
        while self.eat("+") {
            acc = Term::plus(acc, self.prod()?);
        }
        Ok(acc)
    }

    fn prod(&mut self) -> PResult<Term> {
        let mut acc = self.post()?;
        while self.eat("*") {
            acc = Term::times(acc, self.post()?);
        }
        Ok(acc)
    }

    fn post(&mut self) -> PResult<Term> {
        stacker::maybe_grow(64 * 1024, 16 * 1024 * 1024, || {
            if self.eat("0") {
                return Ok(Term::zero());
            }
            if self.eat("S") {
                return Ok(Term::succ(self.post()?));
            }
            if self.eat("(") {
                let t = self.term()?;
                if !self.eat(")") {
                    return self.err("')'");
                }
                return Ok(t);
            }
            match self.var() {
                Ok(v) => Ok(Term::var(v)),
                Err(_) => self.err("a term"),
            }
        })
    }
}
