use arith_compiler::checker::{wf_formula, wf_proof};
use arith_compiler::{eval_pr, proof_predicate_pr, stage0_decider};
use calculus::corpus::{corruptions, negation_proof, valid_proofs};
use calculus::{check_proof, is_arithmetic_axiom, Proof};
use coding::{decode_formula, decode_proof, encode_formula, encode_proof};
use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use syntax::Formula;

fn pp_holds(p: &Proof, target: &Formula) -> bool {
    let pp = proof_predicate_pr(&stage0_decider());
    eval_pr(&pp, &[encode_formula(target), encode_proof(p)]).unwrap().is_one()
}

#[test]
fn corpus_proofs_are_accepted() {
    for e in valid_proofs() {
        assert!(check_proof(&e.proof, &e.target, &is_arithmetic_axiom), "{}", e.name);
        assert!(pp_holds(&e.proof, &e.target), "{}", e.name);
    }
    let n = negation_proof();
    assert_eq!(pp_holds(&n.proof, &n.target), check_proof(&n.proof, &n.target, &is_arithmetic_axiom));
}

#[test]
fn corruptions_agree_with_checker() {
    let mut total = 0;
    for (i, e) in valid_proofs().iter().enumerate() {
        for (p, target) in corruptions(e, 1000 + i as u64, 12) {
            let want = check_proof(&p, &target, &is_arithmetic_axiom);
            assert_eq!(pp_holds(&p, &target), want, "{} corrupted: {:?}", e.name, p);
            total += 1;
        }
    }
    assert!(total >= 200);
}

#[test]
fn wrong_target_is_rejected() {
    let es = valid_proofs();
    for w in es.windows(2) {
        if w[0].target != w[1].target {
            assert!(!pp_holds(&w[0].proof, &w[1].target));
        }
    }
}

#[test]
fn well_formedness_matches_decoder_on_mutated_codes() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let es = valid_proofs();
    for _ in 0..400 {
        let e = &es[rng.gen_range(0..es.len())];
        let mut d = coding::unpack_digits(&encode_proof(&e.proof));
        let mut f = coding::unpack_digits(&encode_formula(&e.target));
        for digits in [&mut d, &mut f] {
            match rng.gen_range(0..3) {
                0 => {
                    let i = rng.gen_range(0..digits.len());
                    digits[i] = rng.gen_range(1..=32);
                }
                1 => {
                    let i = rng.gen_range(0..digits.len());
                    digits.remove(i);
                }
                _ => {
                    let i = rng.gen_range(0..=digits.len());
                    digits.insert(i, rng.gen_range(1..=32));
                }
            }
        }
        let (pc, fc) = (coding::pack_digits(&d), coding::pack_digits(&f));
        let wp = eval_pr(&wf_proof(), &[pc.clone()]).unwrap().is_one();
        let wf = eval_pr(&wf_formula(), &[fc.clone()]).unwrap().is_one();
        assert_eq!(wp, decode_proof(&pc).is_ok(), "proof digits {d:?}");
        assert_eq!(wf, decode_formula(&fc).is_ok(), "formula digits {f:?}");
    }
}

#[test]
fn long_bit_chains_are_rejected() {
    use coding::Symbol::*;
    for width in [31usize, 32, 33, 34] {
        let mut d = vec![TagFormula.digit(), Eq.digit(), Bit1.digit()];
        d.extend(std::iter::repeat(Bit0.digit()).take(width - 1));
        d.push(Var.digit());
        d.push(Zero.digit());
        let c = coding::pack_digits(&d);
        let wf = eval_pr(&wf_formula(), &[c.clone()]).unwrap().is_one();
        assert_eq!(wf, decode_formula(&c).is_ok(), "width {width}");
        assert_eq!(wf, width <= 32);
    }
}

#[test]
fn small_numbers_are_not_codes() {
    for n in 0u32..2000 {
        let c = BigUint::from(n);
        assert_eq!(eval_pr(&wf_formula(), &[c.clone()]).unwrap().is_one(), decode_formula(&c).is_ok(), "{n}");
        assert_eq!(eval_pr(&wf_proof(), &[c.clone()]).unwrap().is_one(), decode_proof(&c).is_ok(), "{n}");
    }
}

#[test]
fn one_step_proof_of_zero_equals_zero() {
    let e = &valid_proofs()[0];
    assert_eq!(e.target, syntax::parse_formula("0=0").unwrap());
    assert_eq!(e.proof.steps.len(), 1);
    assert!(pp_holds(&e.proof, &e.target));
}

#[test]
fn negation_variant_accepts_proof_of_negation() {
    use arith_compiler::negation_variant;
    let e = negation_proof();
    assert!(check_proof(&e.proof, &e.target, &is_arithmetic_axiom));
    let syntax::FormulaKind::Not(inner) = e.target.kind() else { panic!("target is a negation") };
    let nv = negation_variant(&stage0_decider());
    let code = |phi: &Formula| encode_formula(phi);
    assert!(eval_pr(&nv, &[code(inner), encode_proof(&e.proof)]).unwrap().is_one());
    // the plain predicate rejects the same pair; the variant rejects the negation itself
    let pp = proof_predicate_pr(&stage0_decider());
    assert!(!eval_pr(&pp, &[code(inner), encode_proof(&e.proof)]).unwrap().is_one());
    assert!(!eval_pr(&nv, &[code(&e.target), encode_proof(&e.proof)]).unwrap().is_one());
}
