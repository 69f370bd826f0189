//! Every native implementation agrees with its primitive-recursive body.
//! Each function's body is evaluated with every other native enabled, so
//! the checks compose into agreement of the fully pure evaluation.

use arith_compiler::{arith, checker, eval_pr, eval_pr_pure, eval_pr_with, strings, PrFunction};
use calculus::corpus::valid_proofs;
use coding::{encode_formula, encode_proof, pack_digits, unpack_digits};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn n(v: u64) -> BigUint {
    BigUint::from(v)
}

fn body_agrees(f: &PrFunction, args: &[BigUint]) {
    let name = f.name().expect("library functions are named").to_string();
    let native = eval_pr(f, args).unwrap();
    let body = eval_pr_with(f, args, &|m| m != name).unwrap();
    assert_eq!(native, body, "{name}{args:?}");
}

#[test]
fn arithmetic_bodies_fully_pure() {
    let fs = [arith::add(), arith::mult(), arith::monus(), arith::eq_c(), arith::lt_c(), arith::le_c(), arith::and_c(), arith::or_c(), arith::div(), arith::modulo(), arith::pow(), arith::pair(), arith::divides()];
    for f in &fs {
        for x in 0..6u64 {
            for y in 0..6u64 {
                assert_eq!(eval_pr(f, &[n(x), n(y)]).unwrap(), eval_pr_pure(f, &[n(x), n(y)]).unwrap(), "{:?} {x} {y}", f.name());
            }
        }
    }
    for f in [arith::pred(), arith::sg(), arith::nsg(), arith::tri(), arith::diag_index(), arith::unpair_l(), arith::unpair_r(), arith::prime()] {
        for x in 0..30u64 {
            assert_eq!(eval_pr(&f, &[n(x)]).unwrap(), eval_pr_pure(&f, &[n(x)]).unwrap(), "{:?} {x}", f.name());
        }
    }
    let c = arith::cond();
    for x in 0..3u64 {
        assert_eq!(eval_pr_pure(&c, &[n(x), n(7), n(9)]).unwrap(), n(if x == 0 { 9 } else { 7 }));
    }
}

#[test]
fn arithmetic_bodies_on_larger_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let bin = [arith::add(), arith::mult(), arith::monus(), arith::eq_c(), arith::lt_c(), arith::le_c(), arith::div(), arith::modulo(), arith::pair(), arith::divides()];
    for _ in 0..200 {
        let (x, y) = (rng.gen_range(0..400u64), rng.gen_range(0..60u64));
        for f in &bin {
            body_agrees(f, &[n(x), n(y)]);
        }
        body_agrees(&arith::pow(), &[n(x % 9), n(y % 7)]);
        body_agrees(&arith::cond(), &[n(x % 2), n(x), n(y)]);
        for f in [arith::pred(), arith::sg(), arith::nsg(), arith::tri(), arith::diag_index(), arith::unpair_l(), arith::unpair_r(), arith::prime()] {
            body_agrees(&f, &[n(x)]);
        }
    }
}

/// Strings drawn from real codes, their pieces, and random digit strings.
fn string_pool() -> Vec<BigUint> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut pool = vec![n(0), n(1), n(8), n(9 * 32 + 8), n(10 * 32 + 8)];
    for e in valid_proofs().iter().take(6) {
        for code in [encode_formula(&e.target), encode_proof(&e.proof)] {
            let d = unpack_digits(&code);
            pool.push(pack_digits(&d[1..]));
            for _ in 0..3 {
                let i = rng.gen_range(0..d.len());
                let j = rng.gen_range(i..=d.len().min(i + 12));
                pool.push(pack_digits(&d[i..j]));
            }
        }
    }
    for _ in 0..20 {
        let len = rng.gen_range(0..7);
        let d: Vec<u8> = (0..len).map(|_| rng.gen_range(1..=32)).collect();
        pool.push(pack_digits(&d));
    }
    pool.retain(|c| unpack_digits(c).len() <= 24);
    pool
}

fn pick(rng: &mut ChaCha8Rng, pool: &[BigUint]) -> BigUint {
    pool[rng.gen_range(0..pool.len())].clone()
}

#[test]
fn string_bodies() {
    let pool = string_pool();
    let vars: Vec<BigUint> = [vec![8u8], vec![10, 8], vec![10, 9, 8], vec![10, 10, 8]].iter().map(|d| pack_digits(d)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..60 {
        let x = pick(&mut rng, &pool);
        let y = pick(&mut rng, &pool);
        let v = if rng.gen_bool(0.8) { vars[rng.gen_range(0..vars.len())].clone() } else { pick(&mut rng, &pool) };
        let l = unpack_digits(&x).len() as u64;
        let i = n(rng.gen_range(0..=l + 2));
        let j = n(rng.gen_range(0..=l + 2));
        body_agrees(&strings::pow32(), &[n(l)]);
        body_agrees(&strings::rep(), &[n(l)]);
        body_agrees(&strings::len(), &[x.clone()]);
        body_agrees(&strings::raw_n(), &[x.clone(), n(l)]);
        body_agrees(&strings::digit_n(), &[x.clone(), i.clone(), n(l)]);
        body_agrees(&strings::digit(), &[x.clone(), i.clone()]);
        body_agrees(&strings::cat(), &[x.clone(), y.clone()]);
        body_agrees(&strings::sub_n(), &[x.clone(), i.clone(), j.clone(), n(l)]);
        body_agrees(&strings::sub(), &[x.clone(), i.clone(), j.clone()]);
        body_agrees(&strings::arity(), &[n(rng.gen_range(0..40))]);
        body_agrees(&strings::expr_end(), &[x.clone(), i.clone()]);
        body_agrees(&strings::expr_at(), &[x.clone(), i.clone()]);
        body_agrees(&strings::is_bit(), &[n(rng.gen_range(0..33))]);
        body_agrees(&strings::is_quant(), &[n(rng.gen_range(0..33))]);
        body_agrees(&strings::var_start(), &[x.clone(), i.clone()]);
        body_agrees(&strings::occ_at(), &[x.clone(), v.clone(), i.clone()]);
        body_agrees(&strings::occurs_var(), &[x.clone(), v.clone()]);
        body_agrees(&strings::binds(), &[x.clone(), v.clone()]);
        body_agrees(&strings::binds_any_of(), &[x.clone(), y.clone()]);
        body_agrees(&strings::substitutable(), &[x.clone(), v.clone(), y.clone()]);
        body_agrees(&strings::subst(), &[x.clone(), v.clone(), y.clone()]);
    }
}

#[test]
fn automaton_bodies() {
    let pool = string_pool();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for t in 0..24u64 {
        for s in 0..34u64 {
            body_agrees(&checker::wf_entry(), &[n(t), n(s)]);
            body_agrees(&checker::wf_step(), &[n(t + 32 * rng.gen_range(0..40)), n(s)]);
        }
    }
    for _ in 0..40 {
        let x = pick(&mut rng, &pool);
        let d = unpack_digits(&x);
        let mut tagged = vec![rng.gen_range(1..4u8)];
        tagged.extend(&d);
        let t = pack_digits(&tagged);
        body_agrees(&checker::wf_run(), &[n(d.len() as u64), t.clone(), n(32 + rng.gen_range(2..14))]);
        body_agrees(&checker::long_chain(), &[x.clone()]);
        body_agrees(&checker::wf_formula(), &[t.clone()]);
        body_agrees(&checker::wf_proof(), &[t]);
    }
    let mut chain = vec![2u8, 11];
    chain.extend(std::iter::repeat(9).take(34));
    body_agrees(&checker::long_chain(), &[pack_digits(&chain)]);
    chain.truncate(30);
    body_agrees(&checker::long_chain(), &[pack_digits(&chain)]);
}

#[test]
fn stage0_decider_body() {
    for ax in calculus::arithmetic_axioms() {
        body_agrees(&checker::stage0_decider(), &[encode_formula(ax)]);
    }
    for e in valid_proofs() {
        body_agrees(&checker::stage0_decider(), &[encode_formula(&e.target)]);
    }
}
