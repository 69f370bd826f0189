use std::cmp::Ordering;

use calculus::corpus::{random_proof, valid_proofs, ProofBuilder};
use calculus::{Item, Proof, Schema};
use coding::*;
use num_bigint::BigUint;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use syntax::random::{random_formula, random_term};
use syntax::{efficient_numeral, negate, parse_formula, substitute, Formula, FormulaKind, Term, VAR_A};

fn f(s: &str) -> Formula {
    parse_formula(s).unwrap()
}

/// Bijective base-32 value of a digit string, by Horner's rule.
fn horner(digits: &[u32]) -> BigUint {
    digits.iter().fold(BigUint::from(0u32), |acc, &d| acc * 32u32 + d)
}

fn one_step_proof() -> Proof {
    let mut b = ProofBuilder::new();
    b.schema(Schema::EqRefl, vec![Item::Term(Term::zero())]);
    b.finish()
}

#[test]
fn zero_equals_zero_has_the_tabulated_code() {
    // TAG_FORMULA=2, EQ=11, ZERO=4, ZERO=4
    let expected = horner(&[2, 11, 4, 4]);
    assert_eq!(expected, BigUint::from(2u32 * 32768 + 11 * 1024 + 4 * 32 + 4));
    assert_eq!(encode_formula(&f("0=0")), expected);
    assert_eq!(decode_formula(&expected).unwrap(), f("0=0"));
}

#[test]
fn variables_and_proofs_follow_the_table() {
    // all c c=0: ALL, BIT1 VAR (index 2 = binary 10 -> BIT1 BIT0 VAR) ...
    let phi = f("all c c=0");
    let expected = horner(&[2, 17, 10, 9, 8, 11, 10, 9, 8, 4]);
    assert_eq!(encode_formula(&phi), expected);
    // one-step proof: TAG_PROOF CONS STEP EQ ZERO ZERO AXL BIT1 BIT1 BIT1 BIT1 NAT CONS TAG_TERM ZERO NIL NIL
    let expected = horner(&[3, 25, 19, 11, 4, 4, 20, 10, 10, 10, 10, 24, 25, 1, 4, 26, 26]);
    assert_eq!(encode_proof(&one_step_proof()), expected);
}

#[test]
fn symbol_table_is_consistent() {
    for (i, s) in ALL_SYMBOLS.iter().enumerate() {
        assert_eq!(s.digit() as usize, i + 1);
        assert_eq!(Symbol::from_digit(s.digit()), Some(*s));
    }
    assert_eq!(Symbol::from_digit(0), None);
    assert_eq!(Symbol::from_digit(27), None);
    assert!(SYMBOL_COUNT as u32 <= RADIX);
}

#[test]
fn packing_matches_horner_and_lengths() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..2000 {
        let n = rng.gen_range(0..40);
        let digits: Vec<u8> = (0..n).map(|_| rng.gen_range(1..=32)).collect();
        let code = pack_digits(&digits);
        let wide: Vec<u32> = digits.iter().map(|&d| d as u32).collect();
        assert_eq!(code, horner(&wide));
        assert_eq!(code_len(&code), n);
        assert_eq!(unpack_digits(&code), digits);
        assert!(repunit(n) <= code && code < repunit(n + 1));
    }
    assert_eq!(code_len(&BigUint::from(0u32)), 0);
}

#[test]
fn decode_zero_is_not_a_proof() {
    let zero = BigUint::from(0u32);
    assert!(matches!(decode_proof(&zero), Err(CodingError::NotAProofCode { offset: 0, .. })));
    assert!(decode_formula(&zero).is_err());
}

#[test]
fn one_step_proof_round_trips() {
    let p = one_step_proof();
    assert_eq!(decode_proof(&encode_proof(&p)).unwrap(), p);
    assert_eq!(decode_proof(&encode_proof(&Proof::new())).unwrap(), Proof::new());
}

#[test]
fn proof_code_exceeds_its_first_formula_code() {
    let mut b = ProofBuilder::new();
    let a = b.schema(Schema::EqRefl, vec![Item::Term(Term::zero())]);
    let k = b.schema(Schema::K, vec![Item::Formula(f("0=0")), Item::Formula(f("0<=0"))]);
    b.mp(a, k);
    let mut p = b.finish();
    p.steps.truncate(2);
    assert!(encode_proof(&p) > encode_formula(&p.steps[0].formula));
    for e in valid_proofs() {
        assert!(encode_proof(&e.proof) > encode_formula(&e.proof.steps[0].formula));
    }
}

#[test]
fn malformed_codes_report_offsets() {
    // TAG_FORMULA EQ ZERO: EQ is missing an argument
    let g = horner(&[2, 11, 4]);
    let e = decode_formula(&g).unwrap_err();
    assert!(matches!(e, CodingError::NotAFormulaCode { offset: 1, .. }), "{e:?}");
    // trailing junk after a complete formula
    let g = horner(&[2, 11, 4, 4, 4]);
    assert!(matches!(decode_formula(&g), Err(CodingError::NotAFormulaCode { .. })));
    // reserved digit
    let g = horner(&[2, 30]);
    assert_eq!(decode_formula(&g).unwrap_err().offset(), 1);
    // leading zero bit in a variable index is not canonical
    let g = horner(&[2, 17, 9, 8, 11, 4, 4]);
    assert!(decode_formula(&g).is_err());
}

#[test]
fn categories_are_disjoint() {
    let phi_code = encode_formula(&f("0=0"));
    assert!(decode_proof(&phi_code).is_err());
    assert!(decode_term(&phi_code).is_err());
    let p_code = encode_proof(&one_step_proof());
    assert!(decode_formula(&p_code).is_err());
    let t_code = encode_term(&Term::zero());
    assert!(decode_formula(&t_code).is_err());
    assert_eq!(decode_term(&t_code).unwrap(), Term::zero());
}

#[test]
fn ten_thousand_formula_and_term_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..10_000 {
        let mut budget = rng.gen_range(1..60);
        let phi = random_formula(&mut rng, &mut budget, 25);
        assert_eq!(decode_formula(&encode_formula(&phi)).unwrap(), phi);
        let mut budget = rng.gen_range(1..30);
        let t = random_term(&mut rng, &mut budget, 25);
        assert_eq!(decode_term(&encode_term(&t)).unwrap(), t);
    }
}

#[test]
fn ten_thousand_proof_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10_000 {
        let p = random_proof(&mut rng, 4, 12);
        assert_eq!(decode_proof(&encode_proof(&p)).unwrap(), p);
    }
    for e in valid_proofs() {
        assert_eq!(decode_proof(&encode_proof(&e.proof)).unwrap(), e.proof);
    }
}

#[test]
fn encoding_is_injective_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..10_000 {
        let (mut b1, mut b2) = (rng.gen_range(1..12), rng.gen_range(1..12));
        let phi = random_formula(&mut rng, &mut b1, 4);
        let psi = random_formula(&mut rng, &mut b2, 4);
        if phi != psi {
            assert_ne!(encode_formula(&phi), encode_formula(&psi));
        } else {
            assert_eq!(compare_codes(&encode_formula(&phi), &encode_formula(&psi)), Ordering::Equal);
        }
    }
}

fn immediate_subformulas(phi: &Formula) -> Vec<Formula> {
    match phi.kind() {
        FormulaKind::Eq(..) | FormulaKind::Le(..) => vec![],
        FormulaKind::Not(a) | FormulaKind::ForAll(_, a) | FormulaKind::Exists(_, a) => vec![a.clone()],
        FormulaKind::Or(a, b) | FormulaKind::And(a, b) | FormulaKind::Implies(a, b) => vec![a.clone(), b.clone()],
    }
}

#[test]
fn strict_subformulas_have_smaller_codes() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    while checked < 1000 {
        let mut budget = 40;
        let psi = random_formula(&mut rng, &mut budget, 6);
        let mut frontier = immediate_subformulas(&psi);
        while let Some(phi) = frontier.pop() {
            assert_eq!(compare_codes(&encode_formula(&phi), &encode_formula(&psi)), Ordering::Less);
            checked += 1;
            frontier.extend(immediate_subformulas(&phi));
        }
    }
}

#[test]
fn negation_changes_the_code() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..100 {
        let mut budget = 30;
        let phi = random_formula(&mut rng, &mut budget, 6);
        assert_ne!(encode_formula(&negate(&phi)), encode_formula(&phi));
    }
}

#[test]
fn streamed_substitution_matches_materialized() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 0..500u32 {
        let mut budget = 30;
        let phi = random_formula(&mut rng, &mut budget, 4);
        let t = efficient_numeral(&BigUint::from(n * 7919));
        let want = encode_formula(&substitute(&phi, VAR_A, &t));
        assert_eq!(encode_formula_subst(&phi, VAR_A, &t), want);
    }
}

#[test]
fn deep_formulas_round_trip() {
    let big = BigUint::from(7u32).pow(20_000);
    let phi = Formula::eq(Term::var(VAR_A), efficient_numeral(&big));
    let code = encode_formula(&phi);
    assert_eq!(decode_formula(&code).unwrap(), phi);
}

#[test]
fn decoding_is_canonical_on_random_codes() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut hits = 0;
    for _ in 0..20_000 {
        let n = rng.gen_range(1..10);
        let mut digits: Vec<u8> = (0..n).map(|_| rng.gen_range(1..=26)).collect();
        digits[0] = 2;
        let g = pack_digits(&digits);
        if let Ok(phi) = decode_formula(&g) {
            hits += 1;
            assert_eq!(encode_formula(&phi), g);
        }
    }
    assert!(hits > 0);
}

proptest! {
    #[test]
    fn longer_strings_have_larger_codes(a in prop::collection::vec(1u8..=32, 0..30), b in prop::collection::vec(1u8..=32, 0..30)) {
        let (ca, cb) = (pack_digits(&a), pack_digits(&b));
        if a.len() < b.len() {
            prop_assert!(ca < cb);
        }
        prop_assert_eq!(ca == cb, a == b);
    }
}

#[test]
fn digit_entry_points_agree_with_packed_ones() {
    let phi = syntax::parse_formula("all b (~(b = a) | exists c (c <= b & Sc = b))").unwrap();
    let d = coding::encode_formula_digits(&phi);
    assert_eq!(coding::pack_digits(&d), coding::encode_formula(&phi));
    assert_eq!(coding::decode_formula_digits(&d).unwrap(), phi);
    assert!(coding::decode_formula_digits(&d[1..]).is_err());
}
