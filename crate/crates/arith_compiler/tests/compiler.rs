use arith_compiler::{
    arith, compile_pr_graph, compile_pr_graph_with, eval_formula, eval_pr, is_sigma1, CompileOptions, PrFunction, Truth,
};
use num_bigint::BigUint;
use syntax::{parse_formula, Var};

const BUDGET: u64 = 5_000_000;

fn corpus() -> Vec<(&'static str, PrFunction)> {
    vec![
        ("zero", PrFunction::zero(1)),
        ("succ", PrFunction::succ()),
        ("proj0", PrFunction::proj(2, 0).unwrap()),
        ("proj1", PrFunction::proj(2, 1).unwrap()),
        ("add", arith::add()),
        ("mult", arith::mult()),
        ("pred", arith::pred()),
        ("pair", arith::pair()),
        ("prime", arith::prime()),
    ]
}

fn grid(arity: usize, n: u64) -> Vec<Vec<BigUint>> {
    let mut out = vec![vec![]];
    for _ in 0..arity {
        out = out.into_iter().flat_map(|v| (0..=n).map(move |x| [v.clone(), vec![BigUint::from(x)]].concat())).collect();
    }
    out
}

/// Evaluates the compiled formula at every `x̄ ≤ n`. With `full`, every
/// `y` up to one past the largest value is tried; otherwise `y` ranges over
/// the value, its neighbours, 0 and `n`.
fn check_grid(name: &str, f: &PrFunction, opts: CompileOptions, n: u64, full: bool) {
    let c = compile_pr_graph_with(f, opts);
    assert!(is_sigma1(&c.formula), "{name} is not Σ₁");
    let mut expected: Vec<Var> = c.inputs.clone();
    expected.push(c.output);
    let fv = c.formula.free_vars().to_vec();
    assert!(fv.iter().all(|v| expected.contains(v)), "{name}: stray free variables {fv:?}");
    let inputs = grid(f.arity(), n);
    let values: Vec<BigUint> = inputs.iter().map(|x| eval_pr(f, x).unwrap()).collect();
    let top = values.iter().max().cloned().unwrap_or_default();
    let top = top.max(BigUint::from(n)) + 1u32;
    for (x, v) in inputs.iter().zip(&values) {
        let ys: Vec<BigUint> = if full {
            let top = u64::try_from(&top).expect("small grid");
            (0..=top).map(BigUint::from).collect()
        } else {
            let mut ys = vec![BigUint::from(0u32), BigUint::from(1u32), BigUint::from(n), v.clone(), v + 1u32];
            if *v > BigUint::from(0u32) {
                ys.push(v - 1u32);
            }
            ys
        };
        for y in ys {
            let phi = c.instantiate(x, &y);
            let got = eval_formula(&phi, BUDGET).unwrap();
            let want = if &y == v { Truth::True } else { Truth::False };
            assert_eq!(got, want, "{name} (templates: {}) at {x:?}, y = {y}", opts.templates);
        }
    }
}

#[test]
fn corpus_agrees_with_templates() {
    for (name, f) in corpus() {
        check_grid(name, &f, CompileOptions { templates: true }, 10, true);
    }
}

#[test]
fn corpus_agrees_from_bodies() {
    for (name, f) in corpus() {
        check_grid(name, &f, CompileOptions { templates: false }, 10, false);
    }
}

#[test]
fn structural_cases() {
    let succ = compile_pr_graph(&PrFunction::succ());
    assert_eq!(succ.formula, parse_formula("b = Sa").unwrap());
    let zero = compile_pr_graph(&PrFunction::zero(1));
    assert_eq!(zero.formula, parse_formula("b = 0").unwrap());
    let proj = compile_pr_graph(&PrFunction::proj(3, 2).unwrap());
    assert_eq!(proj.formula, parse_formula("d = c").unwrap());
}

#[test]
fn add_is_true_exactly_at_five() {
    for templates in [true, false] {
        let c = compile_pr_graph_with(&arith::add(), CompileOptions { templates });
        for y in 0u32..12 {
            let t = eval_formula(&c.instantiate(&[2u32.into(), 3u32.into()], &y.into()), BUDGET).unwrap();
            assert_eq!(t == Truth::True, y == 5, "y = {y}");
            assert_ne!(t, Truth::BudgetExceeded);
        }
    }
}

#[test]
fn library_functions_compile_to_sigma1() {
    for f in arith_compiler::text::library() {
        for templates in [true, false] {
            let c = compile_pr_graph_with(&f, CompileOptions { templates });
            assert!(is_sigma1(&c.formula), "{:?}", f.name());
        }
    }
}

#[test]
fn nested_primitive_recursion_from_bodies() {
    // pow without templates nests three recursions
    let c = compile_pr_graph_with(&arith::pow(), CompileOptions { templates: false });
    for (x, y) in [(2u32, 3u32), (3, 2), (0, 0), (1, 4)] {
        let v = eval_pr(&arith::pow(), &[x.into(), y.into()]).unwrap();
        for z in [v.clone(), v + 1u32] {
            let want = z == BigUint::from(x).pow(y);
            assert_eq!(eval_formula(&c.instantiate(&[x.into(), y.into()], &z), BUDGET).unwrap() == Truth::True, want);
        }
    }
}
