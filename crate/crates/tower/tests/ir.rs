//! The arithmetized stage functions: natives against their bodies, and
//! against the ordinals, syntax and coding crates as independent oracles.

use std::cmp::Ordering;

use arith_compiler::{eval_pr, eval_pr_with, PrFunction};
use coding::{encode_formula, encode_term, pack_digits, unpack_digits};
use num_bigint::BigUint;
use ordinals::{parse_ordinal, Ordinal};
use syntax::{efficient_numeral, parse_formula, substitute, VAR_A};
use tower::digits;
use tower::host::HostTemplate;
use tower::ir;
use tower::{Sign, SignPolicy};

fn n(v: u64) -> BigUint {
    BigUint::from(v)
}

/// Evaluates `f` twice: by its native, and by its body with every other
/// native enabled.
fn body_agrees(f: &PrFunction, args: &[BigUint]) -> BigUint {
    let name = f.name().expect("named").to_string();
    let native = eval_pr(f, args).unwrap();
    let body = eval_pr_with(f, args, &|m| m != name).unwrap();
    assert_eq!(native, body, "{name}{args:?}");
    native
}

fn cmp_digit(o: Ordering) -> BigUint {
    n(match o {
        Ordering::Less => 0,
        Ordering::Equal => 1,
        Ordering::Greater => 2,
    })
}

#[test]
fn ordinal_comparison_matches_the_ordinals_crate() {
    let canon: Vec<(u64, Ordinal)> = (0..120u64).filter_map(|c| Ordinal::from_code(&n(c)).map(|o| (c, o))).collect();
    for (x, a) in &canon {
        for (y, b) in &canon {
            let want = cmp_digit(a.cmp(b));
            assert_eq!(eval_pr(&ir::ord_cmp(), &[n(*x), n(*y)]).unwrap(), want, "{a} vs {b}");
        }
    }
    for x in 0..9u64 {
        for y in 0..9u64 {
            body_agrees(&ir::ord_cmp(), &[n(x), n(y)]);
        }
    }
}

#[test]
fn canonicity_matches_the_ordinals_crate() {
    for c in 0..400u64 {
        let want = n(Ordinal::from_code(&n(c)).is_some() as u64);
        assert_eq!(eval_pr(&ir::canonical(), &[n(c)]).unwrap(), want, "code {c}");
    }
    for c in 0..30u64 {
        body_agrees(&ir::canonical(), &[n(c)]);
    }
}

#[test]
fn numeral_codes_match_the_encoder() {
    for x in [0u64, 1, 2, 3, 4, 5, 15, 16, 17, 63, 64, 1000, 123_456_789] {
        let want = pack_digits(&unpack_digits(&encode_term(&efficient_numeral(&n(x))))[1..]);
        assert_eq!(body_agrees(&ir::efficient_numeral_code(), &[n(x)]), want, "{x}");
    }
    for g in 0..12u64 {
        let want = pack_digits(&unpack_digits(&encode_term(&syntax::numeral(g)))[1..]);
        assert_eq!(body_agrees(&ir::unary(), &[n(g)]), want);
    }
    for x in 0..70u64 {
        body_agrees(&ir::base4_len(), &[n(x)]);
    }
}

#[test]
fn diagonalization_matches_substitution() {
    // on formulas that never bind `a`; the digit route replaces every occurrence
    for text in ["a = a", "all b (a <= b | ~(b = Sa))", "exists c (c + a = SS0) & ~(a = 0)", "0 = 0", "b = a"] {
        let phi = parse_formula(text).unwrap();
        let q = encode_formula(&phi);
        let want = encode_formula(&substitute(&phi, VAR_A, &efficient_numeral(&q)));
        assert_eq!(body_agrees(&ir::diag(), std::slice::from_ref(&q)), want, "{text}");
    }
}

fn host_codes(policy: &SignPolicy) -> (HostTemplate, Vec<(Ordinal, BigUint)>) {
    let t = HostTemplate::new();
    let stages = ["0", "1", "2", "w", "w+1", "w^2"].iter().map(|s| parse_ordinal(s).unwrap());
    let codes = stages.map(|a| {
        let c = u64::try_from(&a.code()).unwrap();
        let code = encode_formula(&t.host(c, &policy.encoded_below(&a)));
        (a, code)
    });
    (t.clone(), codes.collect())
}

fn flipped_policy() -> SignPolicy {
    SignPolicy::new().with(Ordinal::zero(), Sign::Negation).with(parse_ordinal("w").unwrap(), Sign::Negation)
}

#[test]
fn policy_bits_match_the_sign_policy() {
    let stages: Vec<Ordinal> = (0..40u64).filter_map(|c| Ordinal::from_code(&n(c))).collect();
    for policy in [SignPolicy::new(), flipped_policy(), SignPolicy::constant(Sign::Negation).with(parse_ordinal("1").unwrap(), Sign::Rosser)] {
        let m = policy.encoded();
        for g in &stages {
            let neg = body_agrees(&ir::policy_neg(), &[g.code(), m.clone()]);
            assert_eq!(neg == n(1), policy.sign(g) == Sign::Negation, "{g} under {}", policy.canonical_text());
            let masked = body_agrees(&ir::mask_policy(), &[m.clone(), g.code()]);
            assert_eq!(masked, policy.encoded_below(g), "{g} under {}", policy.canonical_text());
        }
    }
    // the sentinel keeps every masked policy numeral the same length
    let m = flipped_policy().encoded();
    let len = digits::efficient_digits(&m).len();
    for g in &stages {
        assert_eq!(digits::efficient_digits(&flipped_policy().encoded_below(g)).len(), len);
    }
    for x in 0..40u64 {
        body_agrees(&ir::bit_len(), &[n(x)]);
    }
}

#[test]
fn splicing_the_stage_numerals_yields_the_other_host() {
    for policy in [SignPolicy::new(), flipped_policy()] {
        let (_, hosts) = host_codes(&policy);
        for (alpha, code) in &hosts {
            for (gamma, want) in &hosts {
                let m = policy.encoded_below(gamma);
                let got = body_agrees(&ir::splice(), &[code.clone(), gamma.code(), m]);
                assert!(got == *want, "splice host({alpha}) to {gamma}");
            }
        }
    }
}

#[test]
fn host_layout_puts_the_numerals_at_the_documented_offsets() {
    let t = HostTemplate::new();
    let m = flipped_policy().encoded();
    let pol = digits::efficient_digits(&m);
    for c in [0u64, 3, 9] {
        let d = unpack_digits(&encode_formula(&t.host(c, &m)));
        let unary_at = |at: usize| {
            assert_eq!(&d[at..at + c as usize], &vec![digits::S; c as usize][..]);
            assert_eq!(d[at + c as usize], digits::Z);
            at + c as usize + 1
        };
        let e1 = unary_at(digits::NUM1_AT);
        let p1 = e1 + digits::PNUM_FROM_NUM_END;
        assert_eq!(&d[p1..p1 + pol.len()], &pol[..]);
        // the left disjunct is the negated proof side; the second stage
        // numeral follows its end at a fixed distance
        let proves = unpack_digits(&encode_formula(&t.proves(c, &m)));
        let left_end = digits::LEFT_AT + proves.len() - 1;
        assert_eq!(&d[digits::LEFT_AT..left_end], &proves[1..]);
        let e3 = unary_at(left_end + digits::NUM2_FROM_LEFT_END);
        let p2 = e3 + digits::PNUM_FROM_NUM_END;
        assert_eq!(&d[p2..p2 + pol.len()], &pol[..]);
    }
}

#[test]
fn stage_axiom_code_native_matches_body_and_sign() {
    let policy = flipped_policy();
    let (_, hosts) = host_codes(&policy);
    let (top, a) = hosts.last().unwrap().clone();
    let m = policy.encoded_below(&top);
    for (gamma, _) in &hosts[..hosts.len() - 1] {
        let q = body_agrees(&ir::stage_axiom_code(), &[gamma.code(), a.clone(), m.clone()]);
        let d = unpack_digits(&q);
        assert_eq!(d[1] == digits::NOT, policy.sign(gamma) == Sign::Negation, "sign of {gamma}");
    }
}

#[test]
fn stage_decider_native_matches_body_on_small_codes() {
    let t = HostTemplate::new();
    let m = SignPolicy::new().encoded();
    let a = encode_formula(&t.host(3, &m));
    for r in 0..24u64 {
        assert_eq!(body_agrees(&ir::stage_decider(), &[n(r), a.clone(), n(3), m.clone()]), n(0), "r = {r}");
    }
}
