use std::collections::{BTreeSet, HashMap, HashSet};

use crate::{Formula, FormulaKind, Term, TermKind, Var};

pub(crate) fn term_children(t: &Term) -> Vec<&Term> {
    match t.kind() {
        TermKind::Var(_) | TermKind::Zero => vec![],
        TermKind::Succ(a) => vec![a],
        TermKind::Plus(a, b) | TermKind::Times(a, b) => vec![a, b],
    }
}

pub(crate) fn formula_children(f: &Formula) -> (Vec<&Formula>, Vec<&Term>) {
    match f.kind() {
        FormulaKind::Eq(a, b) | FormulaKind::Le(a, b) => (vec![], vec![a, b]),
        FormulaKind::Not(a) | FormulaKind::ForAll(_, a) | FormulaKind::Exists(_, a) => {
            (vec![a], vec![])
        }
        FormulaKind::Or(a, b) | FormulaKind::And(a, b) | FormulaKind::Implies(a, b) => {
            (vec![a, b], vec![])
        }
    }
}

/// Distinct term nodes reachable from `roots`, children before parents.
pub fn term_postorder<'a, I: IntoIterator<Item = &'a Term>>(roots: I) -> Vec<Term> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut stack: Vec<(Term, bool)> = roots.into_iter().map(|t| (t.clone(), false)).collect();
    stack.reverse();
    while let Some((t, expanded)) = stack.pop() {
        if expanded {
            out.push(t);
            continue;
        }
        if !seen.insert(t.id()) {
            continue;
        }
        stack.push((t.clone(), true));
        for c in term_children(&t).into_iter().rev() {
            if !seen.contains(&c.id()) {
                stack.push((c.clone(), false));
            }
        }
    }
    out
}

/// Distinct formula nodes reachable from `root`, children before parents.
pub fn formula_postorder(root: &Formula) -> Vec<Formula> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut stack = vec![(root.clone(), false)];
    while let Some((f, expanded)) = stack.pop() {
        if expanded {
            out.push(f);
            continue;
        }
        if !seen.insert(f.id()) {
            continue;
        }
        stack.push((f.clone(), true));
        for c in formula_children(&f).0.into_iter().rev() {
            if !seen.contains(&c.id()) {
                stack.push((c.clone(), false));
            }
        }
    }
    out
}

fn formula_atoms_terms(nodes: &[Formula]) -> Vec<Term> {
    let mut roots = Vec::new();
    for f in nodes {
        roots.extend(formula_children(f).1.into_iter().cloned());
    }
    term_postorder(roots.iter())
}

pub(crate) fn dag_size(f: &Formula) -> usize {
    let fs = formula_postorder(f);
    let ts = formula_atoms_terms(&fs);
    fs.len() + ts.len()
}

fn term_sizes(ts: &[Term]) -> HashMap<u64, u128> {
    let mut size: HashMap<u64, u128> = HashMap::with_capacity(ts.len());
    for t in ts {
        let s = term_children(t)
            .iter()
            .fold(1u128, |acc, c| acc.saturating_add(size[&c.id()]));
        size.insert(t.id(), s);
    }
    size
}

pub(crate) fn term_tree_size(t: &Term) -> u128 {
    let ts = term_postorder([t]);
    term_sizes(&ts)[&t.id()]
}

pub(crate) fn formula_tree_size(f: &Formula) -> u128 {
    let fs = formula_postorder(f);
    let ts = formula_atoms_terms(&fs);
    let tsize = term_sizes(&ts);
    let mut size: HashMap<u64, u128> = HashMap::with_capacity(fs.len());
    for g in &fs {
        let (cf, ct) = formula_children(g);
        let mut s = 1u128;
        for c in cf {
            s = s.saturating_add(size[&c.id()]);
        }
        for c in ct {
            s = s.saturating_add(tsize[&c.id()]);
        }
        size.insert(g.id(), s);
    }
    size[&f.id()]
}

/// Variables bound by some quantifier inside `f`.
pub fn bound_vars(f: &Formula) -> BTreeSet<Var> {
    formula_postorder(f)
        .iter()
        .filter_map(|g| match g.kind() {
            FormulaKind::ForAll(v, _) | FormulaKind::Exists(v, _) => Some(*v),
            _ => None,
        })
        .collect()
}

/// Largest variable index occurring free or bound in `f`.
pub fn max_var(f: &Formula) -> Option<Var> {
    let fs = formula_postorder(f);
    let mut best = bound_vars(f).into_iter().max();
    for g in &fs {
        if let Some(&m) = g.free_vars().last() {
            best = best.max(Some(m));
        }
    }
    best
}
