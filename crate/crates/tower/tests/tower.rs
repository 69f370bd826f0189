//! Stage construction, the decision procedure, the limit route, the
//! verification harness and the memo cache.
//!
//! Every test holds one shared lock: the stage objects are large, and
//! running them one at a time bounds memory.

use std::collections::BTreeMap;
use std::sync::{LazyLock, Mutex, MutexGuard};

use arith_compiler::eval_pr;
use coding::{decode_formula, encode_formula, pack_digits};
use num_bigint::BigUint;
use ordinals::{parse_ordinal, Ordinal};
use syntax::{efficient_numeral, negate, substitute, FormulaKind, TermKind, VAR_A, VAR_B, VAR_C};
use tower::verify::{verify_tower, Grid};
use tower::{cache, CacheError, Membership, Sign, SignPolicy, Tower, TowerError};

static SHARED: LazyLock<Mutex<Tower>> = LazyLock::new(|| Mutex::new(Tower::new(SignPolicy::new())));

fn shared() -> MutexGuard<'static, Tower> {
    SHARED.lock().unwrap_or_else(|e| e.into_inner())
}

fn o(s: &str) -> Ordinal {
    parse_ordinal(s).unwrap()
}

#[test]
fn host_formula_has_the_rosser_shape() {
    let t = shared();
    for alpha in ["0", "w+1"] {
        let host = t.rosser_host_formula(&o(alpha)).unwrap();
        assert_eq!(host.free_vars(), &[VAR_A]);
        let FormulaKind::ForAll(b, body) = host.kind() else { panic!("not a universal") };
        assert_eq!(*b, VAR_B);
        let FormulaKind::Or(left, right) = body.kind() else { panic!("not a disjunction") };
        assert!(matches!(left.kind(), FormulaKind::Not(_)));
        let FormulaKind::Exists(c, conj) = right.kind() else { panic!("right disjunct not existential") };
        assert_eq!(*c, VAR_C);
        let FormulaKind::And(guard, _) = conj.kind() else { panic!("not a conjunction") };
        let FormulaKind::Le(x, y) = guard.kind() else { panic!("not headed by c <= b") };
        assert!(matches!(x.kind(), TermKind::Var(v) if *v == VAR_C));
        assert!(matches!(y.kind(), TermKind::Var(v) if *v == VAR_B));
    }
}

#[test]
fn hosts_of_different_stages_are_distinct_nodes() {
    let t = shared();
    let h0 = t.rosser_host_formula(&o("0")).unwrap();
    let h1 = t.rosser_host_formula(&o("1")).unwrap();
    assert_ne!(h0, h1);
    assert_ne!(h0.id(), h1.id());
}

#[test]
fn rosser_sentence_is_the_closed_self_substitution() {
    let t = shared();
    let alpha = o("1");
    let rosser = t.rosser_sentence(&alpha).unwrap();
    assert!(rosser.is_closed());
    let q = t.q_upper(&alpha).unwrap();
    let host = decode_formula(&q).unwrap();
    assert_eq!(rosser, substitute(&host, VAR_A, &efficient_numeral(&q)));
}

#[test]
fn host_code_is_reproduced_from_scratch() {
    let t = shared();
    let fresh = Tower::new(SignPolicy::new());
    assert_eq!(fresh.q_upper(&o("0")).unwrap(), t.q_upper(&o("0")).unwrap());
}

#[test]
fn default_stage_axiom_is_the_rosser_sentence() {
    let mut t = shared();
    let (axiom, code) = t.stage_axiom(&o("0")).unwrap();
    assert_eq!(axiom, t.rosser_sentence(&o("0")).unwrap());
    assert_eq!(code, encode_formula(&axiom));
    let q1 = t.qtilde(&o("1")).unwrap();
    assert!(code < q1);
}

#[test]
fn flipping_the_sign_at_zero_negates_the_stage_axiom() {
    let mut t = shared();
    let (a0, q0) = t.stage_axiom(&o("0")).unwrap();
    drop(t);
    let mut flipped = Tower::new(SignPolicy::new().with(o("0"), Sign::Negation));
    let (b0, p0) = flipped.stage_axiom(&o("0")).unwrap();
    assert_eq!(b0, negate(&a0));
    assert_ne!(p0, q0);
    assert_eq!(p0, encode_formula(&b0));
}

#[test]
fn decider_examples() {
    let mut t = shared();
    let a3 = t.qtilde(&o("3")).unwrap();
    assert_eq!(t.is_axiom(&o("w"), &a3).unwrap(), Some(Membership::Stage(o("3"))));
    assert!(t.axiom_decider(&o("w"))(&a3).unwrap());
    let a5 = t.qtilde(&o("5")).unwrap();
    assert!(!t.axiom_decider(&o("2"))(&a5).unwrap());
    let ax = encode_formula(&calculus::arithmetic_axioms()[0]);
    assert_eq!(t.is_axiom(&o("0"), &ax).unwrap(), Some(Membership::Base));
}

#[test]
fn decider_matches_brute_force_up_to_omega_two() {
    let mut t = shared();
    let mut grid = Grid::new(vec![o("w*2+1")]);
    grid.bound = Some(o("w*2"));
    let report = verify_tower(&mut t, &o("w*2+1"), &grid);
    let decider = report.records.iter().find(|r| r.check == "decider").unwrap();
    assert!(decider.passed && decider.cases >= 100, "{decider:?}");
    assert!(report.passed(), "{}", report.to_human());
}

#[test]
fn limit_examples() {
    let mut t = shared();
    let q2 = t.qtilde_digits(&o("2")).unwrap();
    let got = t.limit_membership_via_fs(&o("w"), &q2).unwrap();
    assert_eq!(got.member, Some(Membership::Stage(o("2"))));
    assert_eq!(got.settled_at, 3);
    // below every stage axiom code and every base axiom code
    for r in [vec![], vec![2u8], vec![2, 4]] {
        let got = t.limit_membership_via_fs(&o("w"), &r).unwrap();
        assert_eq!(got.member, None);
    }
    assert!(matches!(t.limit_membership_via_fs(&o("3"), &q2), Err(TowerError::NotALimit(_))));
}

#[test]
fn arithmetized_decider_agrees_with_the_walk() {
    let mut t = shared();
    for alpha in [o("3"), o("w+1")] {
        let host = t.q_upper(&alpha).unwrap();
        let m = t.policy().encoded_below(&alpha);
        for gamma in ["0", "2", "3", "w", "w+1"] {
            let r = t.qtilde(&o(gamma)).unwrap();
            let walk = t.is_axiom(&alpha, &r).unwrap().is_some();
            let ir = eval_pr(&tower::ir::stage_decider(), &[r, host.clone(), alpha.code(), m.clone()]).unwrap();
            assert_eq!(ir == BigUint::from(1u32), walk, "A({gamma}) at {alpha}");
            assert_eq!(walk, o(gamma) < alpha);
        }
    }
}

#[test]
fn verification_up_to_three_passes_and_is_deterministic() {
    let mut t = shared();
    let grid = Grid::new(Grid::default_stages());
    let first = verify_tower(&mut t, &o("3"), &grid);
    assert!(first.passed(), "{}", first.to_human());
    assert_eq!(first.stages, ["0", "1", "2", "3"]);
    let second = verify_tower(&mut t, &o("3"), &grid);
    assert_eq!(first.to_structured(), second.to_structured());
    let empty = verify_tower(&mut t, &o("3"), &Grid::new(vec![]));
    assert!(empty.passed() && empty.records.is_empty());
}

#[test]
fn corrupted_memo_entry_is_flagged_at_its_stage_only() {
    let _guard = shared();
    let mut t = Tower::new(SignPolicy::new());
    t.corrupt_memo_entry(&o("2")).unwrap();
    let report = verify_tower(&mut t, &o("3"), &Grid::new(vec![o("0"), o("1"), o("2"), o("3")]));
    let failed: Vec<(&str, &str)> = report.failures().map(|r| (r.check.as_str(), r.stage.as_str())).collect();
    assert_eq!(failed, [("diagonal", "2")]);
}

#[test]
fn decreasing_codes_raise_a_monotonicity_violation() {
    let _guard = shared();
    let mut t = Tower::new(SignPolicy::new());
    let entry = tower::Entry { notation: o("0"), len: usize::MAX, digest: [0; 32] };
    t.load_memo(BTreeMap::from([(0, entry)]));
    let err = t.qtilde(&o("1")).unwrap_err();
    assert!(matches!(err, TowerError::MonotonicityViolation { ref earlier, ref later } if *earlier == o("0") && *later == o("1")));
    let report = verify_tower(&mut t, &o("1"), &Grid::new(vec![o("1")]));
    let failed: Vec<&str> = report.failures().map(|r| r.check.as_str()).collect();
    assert_eq!(failed, ["monotone"]);
}

#[test]
fn constant_negation_policy_passes_verification() {
    let _guard = shared();
    let mut t = Tower::new(SignPolicy::constant(Sign::Negation));
    let report = verify_tower(&mut t, &o("w"), &Grid::new(vec![o("0"), o("1"), o("w")]));
    assert!(report.passed(), "{}", report.to_human());
    let q = t.qtilde_digits(&o("1")).unwrap();
    assert_eq!(q[1], tower::digits::NOT);
}

#[test]
fn policy_text_round_trips() {
    for text in ["", "0=neg", "default=neg", "default=neg,w=rosser,w^2+1=rosser", "3=neg,w*2=neg"] {
        let p = SignPolicy::parse(text).unwrap();
        assert_eq!(p.canonical_text(), text);
        assert_eq!(SignPolicy::parse(&p.canonical_text()).unwrap(), p);
    }
    assert!(SignPolicy::parse("w=maybe").is_err());
    assert!(SignPolicy::parse("w+=neg").is_err());
    assert!(SignPolicy::parse("w").is_err());
    assert_eq!(SignPolicy::parse("1=rosser").unwrap(), SignPolicy::new());
}

fn tempdir(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("tower-test-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

#[test]
fn cache_round_trip_and_refusals() {
    let mut t = shared();
    t.qtilde(&o("3")).unwrap();
    let dir = tempdir("cache");
    let policy = SignPolicy::new();
    assert!(cache::load(&dir, &policy).unwrap().is_none());
    let path = cache::store(&dir, &policy, t.memo()).unwrap();
    let loaded = cache::load(&dir, &policy).unwrap().unwrap();
    assert_eq!(&loaded, t.memo());
    // a different policy has a different address
    assert!(cache::load(&dir, &SignPolicy::new().with(o("0"), Sign::Negation)).unwrap().is_none());

    let text = std::fs::read_to_string(&path).unwrap();
    let tampered = text.replacen("\"len\": ", "\"len\": 1", 1);
    std::fs::write(&path, tampered).unwrap();
    assert!(matches!(cache::load(&dir, &policy), Err(CacheError::Integrity(_))));
    std::fs::write(&path, text.replace("\"version\": 1", "\"version\": 99")).unwrap();
    assert!(matches!(cache::load(&dir, &policy), Err(CacheError::Version { .. })));
    std::fs::write(&path, "not json").unwrap();
    assert!(matches!(cache::load(&dir, &policy), Err(CacheError::Malformed(_))));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn warm_memo_gives_the_same_report() {
    let mut t = shared();
    let grid = Grid::new(vec![o("0"), o("1"), o("w")]);
    let cold = verify_tower(&mut t, &o("w"), &grid);
    let mut warm = Tower::new(SignPolicy::new());
    warm.load_memo(t.memo().clone());
    assert_eq!(verify_tower(&mut warm, &o("w"), &grid).to_structured(), cold.to_structured());
    assert_eq!(pack_digits(&warm.qtilde_digits(&o("w")).unwrap()), t.qtilde(&o("w")).unwrap());
}
