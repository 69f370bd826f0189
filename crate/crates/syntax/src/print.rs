use crate::{Formula, FormulaKind, Term, TermKind, Var};

/// Canonical name: `a`..`u` for 0..=20, `v<i-21>` beyond.
pub fn var_name(v: Var) -> String {
    if v <= 20 {
        ((b'a' + v as u8) as char).to_string()
    } else {
        format!("v{}", v - 21)
    }
}

// Term levels: 1 sum, 2 product, 3 postfix atom.
fn term_into(t: &Term, level: u8, out: &mut String) {
    stacker::maybe_grow(64 * 1024, 16 * 1024 * 1024, || match t.kind() {
        TermKind::Var(v) => out.push_str(&var_name(*v)),
        TermKind::Zero => out.push('0'),
        TermKind::Succ(a) => {
            out.push('S');
            term_into(a, 3, out);
        }
        TermKind::Plus(a, b) => {
            if level > 1 {
                out.push('(');
            }
            term_into(a, 1, out);
            out.push('+');
            term_into(b, 2, out);
            if level > 1 {
                out.push(')');
            }
        }
        TermKind::Times(a, b) => {
            if level > 2 {
                out.push('(');
            }
            term_into(a, 2, out);
            out.push('*');
            term_into(b, 3, out);
            if level > 2 {
                out.push(')');
            }
        }
    })
}

pub fn print_term(t: &Term) -> String {
    let mut out = String::new();
    term_into(t, 1, &mut out);
    out
}

// Formula levels: 1 implication, 2 disjunction, 3 conjunction, 4 unary.
fn formula_into(f: &Formula, level: u8, out: &mut String) {
    stacker::maybe_grow(64 * 1024, 16 * 1024 * 1024, || {
        let binary = |a: &Formula, b: &Formula, op: &str, own: u8, la: u8, lb: u8, out: &mut String| {
            if level > own {
                out.push('(');
            }
            formula_into(a, la, out);
            out.push_str(op);
            formula_into(b, lb, out);
            if level > own {
                out.push(')');
            }
        };
        match f.kind() {
            FormulaKind::Eq(a, b) => {
                term_into(a, 1, out);
                out.push('=');
                term_into(b, 1, out);
            }
            FormulaKind::Le(a, b) => {
                term_into(a, 1, out);
                out.push_str("<=");
                term_into(b, 1, out);
            }
            FormulaKind::Not(a) => {
                out.push('~');
                formula_into(a, 4, out);
            }
            FormulaKind::ForAll(v, a) => {
                out.push_str("all ");
                out.push_str(&var_name(*v));
                out.push(' ');
                formula_into(a, 4, out);
            }
            FormulaKind::Exists(v, a) => {
                out.push_str("exists ");
                out.push_str(&var_name(*v));
                out.push(' ');
                formula_into(a, 4, out);
            }
            FormulaKind::Implies(a, b) => binary(a, b, " -> ", 1, 2, 1, out),
            FormulaKind::Or(a, b) => binary(a, b, " | ", 2, 2, 3, out),
            FormulaKind::And(a, b) => binary(a, b, " & ", 3, 3, 4, out),
        }
    })
}

pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    formula_into(f, 1, &mut out);
    out
}
