use std::cmp::Ordering;

use num_bigint::BigUint;
use ordinals::{compare, pair, parse_ordinal, unpair, Class, Ordinal, OrdinalError};
use proptest::prelude::*;

fn o(s: &str) -> Ordinal {
    parse_ordinal(s).unwrap()
}

fn n(v: u64) -> BigUint {
    BigUint::from(v)
}

/// Ordinals below w^w as coefficient vectors indexed by finite exponent.
/// Comparison runs from the highest exponent down; independent of the CNF code.
fn below_ww_vector(a: &Ordinal) -> Vec<u64> {
    let mut v = vec![0u64; 8];
    for (e, k) in a.terms() {
        let e: usize = e.as_nat().expect("finite exponent").try_into().unwrap();
        v[e] = k.try_into().unwrap();
    }
    v.reverse();
    v
}

#[test]
fn parse_zero() {
    assert_eq!(o("0"), Ordinal::zero());
    assert!(o("0").terms().is_empty());
}

#[test]
fn parse_finite_sum() {
    let a = o("w*2+3");
    assert_eq!(a.terms(), &[(Ordinal::finite(1), n(2)), (Ordinal::zero(), n(3))]);
}

#[test]
fn parse_nested_exponents() {
    let a = o("w^w+w^2*3+1");
    // independent normalizer: build each summand separately and require the
    // exact term list the normal form prescribes
    let expected = vec![(Ordinal::omega(), n(1)), (Ordinal::finite(2), n(3)), (Ordinal::zero(), n(1))];
    assert_eq!(a.terms(), expected.as_slice());
    assert_eq!(a.to_string(), "w^w+w^2*3+1");
}

#[test]
fn non_canonical_input_is_normalized() {
    assert_eq!(o("1+w"), Ordinal::omega());
    assert_eq!(o("w+w^2"), o("w^2"));
    assert_eq!(o("w*2+w"), o("w*3"));
    assert_eq!(o("(w+1)*2"), o("w*2+1"));
    assert_eq!(o("w^0"), Ordinal::finite(1));
    assert_eq!(o("w^1*4").to_string(), "w*4");
}

#[test]
fn syntax_errors_report_position() {
    match parse_ordinal("w^") {
        Err(OrdinalError::Syntax { pos, .. }) => assert_eq!(pos, 2),
        other => panic!("unexpected {other:?}"),
    }
    assert!(matches!(parse_ordinal("w+*"), Err(OrdinalError::Syntax { pos: 2, .. })));
    assert!(matches!(parse_ordinal("w w"), Err(OrdinalError::Syntax { .. })));
}

#[test]
fn compare_examples() {
    assert_eq!(compare(&Ordinal::omega(), &Ordinal::omega()), Ordering::Equal);
    assert_eq!(compare(&Ordinal::finite(5), &Ordinal::omega()), Ordering::Less);
    let a = o("w^2");
    let b = o("w*7+4");
    assert_eq!(compare(&a, &b), Ordering::Greater);
    assert_eq!(below_ww_vector(&a).cmp(&below_ww_vector(&b)), Ordering::Greater);
}

#[test]
fn classify_examples() {
    assert_eq!(Ordinal::zero().classify(), Class::Zero);
    assert_eq!(o("w+1").classify(), Class::Successor(Ordinal::omega()));
    assert_eq!(o("w^2+w*3").classify(), Class::Limit);
    assert_eq!(o("w*2+3").classify(), Class::Successor(o("w*2+2")));
}

#[test]
fn fundamental_sequence_examples() {
    for k in 0..10 {
        assert_eq!(Ordinal::omega().fundamental_sequence(k).unwrap(), Ordinal::finite(k));
    }
    assert_eq!(o("w^2").fundamental_sequence(3).unwrap(), o("w*3"));
    assert_eq!(o("w^w").fundamental_sequence(2).unwrap(), o("w^2"));
    assert_eq!(o("w^w*2").fundamental_sequence(1).unwrap(), o("w^w+w"));
    assert_eq!(o("w^(w+1)").fundamental_sequence(2).unwrap(), o("w^w*2"));
    assert!(matches!(Ordinal::zero().fundamental_sequence(0), Err(OrdinalError::NotALimit(_))));
    assert!(matches!(o("w+1").fundamental_sequence(0), Err(OrdinalError::NotALimit(_))));
}

#[test]
fn fundamental_sequence_of_omega_omega_is_cofinal() {
    // every sampled beta below w^w (as a coefficient vector) is passed by some
    // element of the sequence
    let lim = o("w^w");
    let mut seed = 7u64;
    for _ in 0..300 {
        let mut terms = Vec::new();
        for e in (0..6u64).rev() {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let k = (seed >> 33) % 4;
            if k > 0 {
                terms.push((Ordinal::finite(e), n(k)));
            }
        }
        let beta = Ordinal::from_terms(terms);
        assert!(beta < lim);
        let found = (0..10).any(|m| {
            let am = lim.fundamental_sequence(m).unwrap();
            below_ww_vector(&beta) < below_ww_vector(&am)
        });
        assert!(found, "{beta} not below any element");
    }
}

#[test]
fn codes_of_small_notations() {
    assert_eq!(Ordinal::zero().code(), n(0));
    assert_eq!(Ordinal::finite(1).code(), n(1));
    assert_eq!(Ordinal::omega().code(), n(2));
    assert_eq!(Ordinal::finite(2).code(), n(3));
    assert_eq!(o("w*2").code(), n(5));
    assert_eq!(o("w^2").code(), n(7));
    assert_eq!(o("w*3").code(), n(14));
    assert_eq!(o("w*4").code(), n(35));
    assert_eq!(o("w+1").code(), n(9));
    assert_eq!(o("w*2+1").code(), n(20));
    // non-canonical: 6 decodes to 1+1
    assert_eq!(Ordinal::from_code(&n(6)), None);
}

#[test]
fn pairing_matches_polynomial() {
    for x in 0..30u64 {
        for y in 0..30u64 {
            let z = pair(&n(x), &n(y));
            assert_eq!(z, n((x + y) * (x + y + 1) / 2 + y));
            assert_eq!(unpair(&z), (n(x), n(y)));
        }
    }
}

fn arb_ordinal() -> impl Strategy<Value = Ordinal> {
    let leaf = (0u64..5).prop_map(Ordinal::finite);
    leaf.prop_recursive(3, 24, 4, |inner| {
        prop::collection::vec((inner, 1u64..4), 1..4)
            .prop_map(|ts| Ordinal::from_terms(ts.into_iter().map(|(e, k)| (e, BigUint::from(k)))))
    })
}

fn arb_shallow() -> impl Strategy<Value = Ordinal> {
    let leaf = (0u64..3).prop_map(Ordinal::finite);
    leaf.prop_recursive(2, 12, 3, |inner| {
        prop::collection::vec((inner, 1u64..3), 1..3)
            .prop_map(|ts| Ordinal::from_terms(ts.into_iter().map(|(e, k)| (e, BigUint::from(k)))))
    })
}

fn arb_limit() -> impl Strategy<Value = Ordinal> {
    arb_ordinal().prop_filter_map("limit", |a| {
        let l = a.add(&Ordinal::omega_pow(Ordinal::finite(1)));
        (l.classify() == Class::Limit).then_some(l)
    })
}

proptest! {
    #[test]
    fn generated_values_are_canonical(a in arb_ordinal()) {
        prop_assert!(a.is_canonical());
    }

    #[test]
    fn trichotomy_and_antisymmetry(a in arb_ordinal(), b in arb_ordinal()) {
        let ab = compare(&a, &b);
        prop_assert_eq!(ab, compare(&b, &a).reverse());
        prop_assert_eq!(ab == Ordering::Equal, a == b);
    }

    #[test]
    fn transitivity(a in arb_ordinal(), b in arb_ordinal(), c in arb_ordinal()) {
        if a <= b && b <= c {
            prop_assert!(a <= c);
        }
    }

    #[test]
    fn print_parse_identity(a in arb_ordinal()) {
        let printed = a.to_string();
        let back = parse_ordinal(&printed).unwrap();
        prop_assert_eq!(&back, &a);
        prop_assert_eq!(back.to_string(), printed);
    }

    #[test]
    fn code_round_trip(a in arb_ordinal()) {
        prop_assert_eq!(Ordinal::from_code(&a.code()), Some(a));
    }

    #[test]
    fn fundamental_sequences_increase(l in arb_limit(), i in 0u64..6, j in 0u64..6) {
        let (i, j) = if i <= j { (i, j + 1) } else { (j, i) };
        let ai = l.fundamental_sequence(i).unwrap();
        let aj = l.fundamental_sequence(j).unwrap();
        prop_assert_eq!(compare(&ai, &aj), Ordering::Less);
        prop_assert_eq!(compare(&aj, &l), Ordering::Less);
        prop_assert!(ai.is_canonical());
    }

    #[test]
    fn descending_chains_terminate(a in arb_shallow(), picks in prop::collection::vec(0u64..3, 64)) {
        let mut cur = a;
        let mut steps = 0usize;
        let mut idx = 0usize;
        loop {
            match cur.classify() {
                Class::Zero => break,
                Class::Successor(p) => cur = p,
                Class::Limit => {
                    let next = cur.fundamental_sequence(picks[idx % picks.len()]).unwrap();
                    prop_assert!(next < cur);
                    idx += 1;
                    cur = next;
                }
            }
            steps += 1;
            prop_assert!(steps < 200_000, "chain too long");
        }
    }
}
