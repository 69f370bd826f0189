//! The verification harness: decision procedure against brute force, the
//! limit route against the direct decider, the diagonal identity and the
//! growth of stage axiom codes, over a configured grid.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use ordinals::{parse_ordinal, Class, Ordinal};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use syntax::{efficient_numeral, negate, VAR_A};

use crate::digits;
use crate::error::{Result, TowerError};
use crate::policy::Sign;
use crate::stage::{digest, stage_code, Membership, Tower};

/// Version of the structured report layout.
pub const REPORT_SCHEMA: u32 = 1;

/// How the diagonal identity is checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DiagonalLevel {
    /// Stream the code of `host[a := numeral(code(host))]` and compare it
    /// with the memo.
    Stream,
    /// Additionally build the Rosser sentence as a formula DAG and compare
    /// it with the decoded stage axiom code.
    Formula,
}

#[derive(Clone, Debug)]
pub struct Grid {
    /// Stages to check.
    pub stages: Vec<Ordinal>,
    /// Codes are sampled up to `q̃(bound)`; by default the grid stage with
    /// the largest notation code.
    pub bound: Option<Ordinal>,
    /// Random short codes added to the structured sample.
    pub random_samples: usize,
    pub seed: u64,
    pub diagonal: DiagonalLevel,
}

impl Grid {
    pub fn new(stages: Vec<Ordinal>) -> Self {
        Grid { stages, bound: None, random_samples: 72, seed: 1, diagonal: DiagonalLevel::Stream }
    }

    /// Stages 0 to 3, `ω`, `ω+1`, `ω·2` and `ω²`.
    pub fn default_stages() -> Vec<Ordinal> {
        ["0", "1", "2", "3", "w", "w+1", "w*2", "w^2"].iter().map(|s| parse_ordinal(s).expect("notation")).collect()
    }
}

/// One pass/fail entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Record {
    pub check: String,
    pub stage: String,
    pub passed: bool,
    /// Number of cases the entry covers.
    pub cases: usize,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub stages: Vec<String>,
    pub policy: String,
    pub samples: usize,
    pub records: Vec<Record>,
}

#[derive(Serialize)]
struct Header<'a> {
    schema: u32,
    kind: &'static str,
    stages: &'a [String],
    policy: &'a str,
    samples: usize,
}

#[derive(Serialize)]
struct Line<'a> {
    schema: u32,
    kind: &'static str,
    #[serde(flatten)]
    record: &'a Record,
}

#[derive(Serialize)]
struct Summary {
    schema: u32,
    kind: &'static str,
    passed: bool,
    checks: usize,
    failed: usize,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| !r.passed)
    }

    /// Line-delimited JSON: a header, one line per record, a summary.
    pub fn to_structured(&self) -> String {
        let mut out = String::new();
        let header = Header { schema: REPORT_SCHEMA, kind: "header", stages: &self.stages, policy: &self.policy, samples: self.samples };
        out.push_str(&serde_json::to_string(&header).expect("serializes"));
        out.push('\n');
        for record in &self.records {
            out.push_str(&serde_json::to_string(&Line { schema: REPORT_SCHEMA, kind: "check", record }).expect("serializes"));
            out.push('\n');
        }
        let failed = self.failures().count();
        let summary = Summary { schema: REPORT_SCHEMA, kind: "summary", passed: failed == 0, checks: self.records.len(), failed };
        out.push_str(&serde_json::to_string(&summary).expect("serializes"));
        out.push('\n');
        out
    }

    pub fn to_human(&self) -> String {
        let mut out = format!("stages: {}\npolicy: {}\nsample: {} codes\n", self.stages.join(", "), display_policy(&self.policy), self.samples);
        for r in &self.records {
            let mark = if r.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{mark} {:<10} {:<8} {:>5} cases  {}\n", r.check, r.stage, r.cases, r.detail));
        }
        let failed = self.failures().count();
        out.push_str(&format!("{} checks, {failed} failed\n", self.records.len()));
        out
    }
}

fn display_policy(p: &str) -> &str {
    if p.is_empty() {
        "default (rosser everywhere)"
    } else {
        p
    }
}

/// A sampled code, described so that it can be rebuilt on demand.
#[derive(Clone, Debug)]
enum Sample {
    Base(usize),
    Axiom(u64),
    /// The stage axiom with the other sign.
    Flipped(u64),
    /// The stage axiom with its last symbol changed.
    Bumped(u64),
    /// The host formula's code.
    Host(u64),
    Random(Vec<u8>),
}

impl Sample {
    fn describe(&self, tower: &Tower) -> String {
        let name = |g: u64| tower.memo().get(&g).map_or_else(|| g.to_string(), |e| e.notation.to_string());
        match self {
            Sample::Base(i) => format!("base axiom #{i}"),
            Sample::Axiom(g) => format!("A({})", name(*g)),
            Sample::Flipped(g) => format!("A({}) with flipped sign", name(*g)),
            Sample::Bumped(g) => format!("A({}) with last symbol changed", name(*g)),
            Sample::Host(g) => format!("host({})", name(*g)),
            Sample::Random(d) => format!("random code of {} symbols", d.len()),
        }
    }

    fn digits(&self, tower: &mut Tower) -> Result<Vec<u8>> {
        let stage = |tower: &mut Tower, g: u64| -> Result<Vec<u8>> {
            let alpha = tower.memo()[&g].notation.clone();
            Ok(tower.qtilde_digits(&alpha)?.to_vec())
        };
        Ok(match self {
            Sample::Base(i) => coding::encode_formula_digits(&calculus::arithmetic_axioms()[*i]),
            Sample::Axiom(g) => stage(tower, *g)?,
            Sample::Flipped(g) => {
                let q = stage(tower, *g)?;
                if q.get(1) == Some(&digits::NOT) {
                    [&[digits::TAG_F][..], &q[2..]].concat()
                } else {
                    digits::neg_digits(&q)
                }
            }
            Sample::Bumped(g) => {
                let mut q = stage(tower, *g)?;
                let last = q.last_mut().expect("nonempty");
                *last = *last % 32 + 1;
                q
            }
            Sample::Host(g) => {
                let alpha = tower.memo()[&g].notation.clone();
                tower.q_upper(&alpha).map(|q| coding::unpack_digits(&q))?
            }
            Sample::Random(d) => d.clone(),
        })
    }
}

fn sample(tower: &Tower, bound_code: u64, grid: &Grid) -> Vec<Sample> {
    let mut out: Vec<Sample> = (0..calculus::arithmetic_axioms().len()).map(Sample::Base).collect();
    let codes: Vec<u64> = tower.memo().range(..=bound_code).map(|(&g, _)| g).collect();
    for &g in &codes {
        out.push(Sample::Axiom(g));
        if g < bound_code {
            out.extend([Sample::Flipped(g), Sample::Bumped(g), Sample::Host(g)]);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(grid.seed);
    for _ in 0..grid.random_samples {
        let len = rng.gen_range(1..=40);
        let mut d: Vec<u8> = (0..len).map(|_| rng.gen_range(1..=32u8)).collect();
        if rng.gen_bool(0.5) {
            d[0] = digits::TAG_F;
        }
        out.push(Sample::Random(d));
    }
    out
}

#[derive(Default)]
struct Tally {
    cases: usize,
    first_failure: Option<String>,
    failures: usize,
}

impl Tally {
    fn add(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            self.first_failure.get_or_insert_with(what);
        }
    }

    fn record(self, check: &str, stage: &Ordinal, ok_detail: &str) -> Record {
        let detail = match &self.first_failure {
            None => ok_detail.to_string(),
            Some(f) => format!("{} mismatches; first: {f}", self.failures),
        };
        Record { check: check.into(), stage: stage.to_string(), passed: self.failures == 0, cases: self.cases, detail }
    }
}

fn show(m: &Option<Membership>) -> String {
    match m {
        None => "not an axiom".into(),
        Some(m) => m.to_string(),
    }
}

/// Runs every check for the grid stages `γ <= up_to`. Errors from the
/// stage construction become failing records, and the run stops there.
pub fn verify_tower(tower: &mut Tower, up_to: &Ordinal, grid: &Grid) -> Report {
    let stages: Vec<Ordinal> = grid.stages.iter().filter(|s| *s <= up_to).cloned().collect();
    let mut report = Report {
        stages: stages.iter().map(|s| s.to_string()).collect(),
        policy: tower.policy().canonical_text(),
        samples: 0,
        records: Vec::new(),
    };
    if let Err(e) = run_checks(tower, &stages, grid, &mut report) {
        let stage = match &e {
            TowerError::MonotonicityViolation { later, .. } => later.to_string(),
            TowerError::TooLarge(a) | TowerError::NotALimit(a) => a.to_string(),
            TowerError::Cache(_) => "-".into(),
        };
        let check = if matches!(e, TowerError::MonotonicityViolation { .. }) { "monotone" } else { "construct" };
        report.records.push(Record { check: check.into(), stage, passed: false, cases: 1, detail: e.to_string() });
    }
    report
}

fn run_checks(tower: &mut Tower, stages: &[Ordinal], grid: &Grid, report: &mut Report) -> Result<()> {
    if stages.is_empty() {
        return Ok(());
    }
    let bound = match &grid.bound {
        Some(b) => b.clone(),
        None => stages.iter().max_by_key(|s| s.code()).expect("nonempty").clone(),
    };
    let bound_code = stage_code(&bound)?;
    let top = stages.iter().map(stage_code).try_fold(bound_code, |m, c| c.map(|c| m.max(c)))?;
    tower.entry(top)?;

    // growth of stage axiom codes, in code order
    let codes: Vec<u64> = tower.memo().range(..=top).map(|(&g, _)| g).collect();
    for w in codes.windows(2) {
        let (e0, e1) = (tower.memo()[&w[0]].clone(), tower.memo()[&w[1]].clone());
        let ok = match e0.len.cmp(&e1.len) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => *tower.qtilde_digits(&e0.notation)? < *tower.qtilde_digits(&e1.notation)?,
        };
        let detail = format!("{} symbols after {} symbols at {}", e1.len, e0.len, e0.notation);
        report.records.push(Record { check: "monotone".into(), stage: e1.notation.to_string(), passed: ok, cases: 1, detail });
    }

    let samples = sample(tower, bound_code, grid);
    report.samples = samples.len();
    let mut decider: BTreeMap<&Ordinal, Tally> = stages.iter().map(|s| (s, Tally::default())).collect();
    let mut extension: BTreeMap<&Ordinal, Tally> = stages.iter().map(|s| (s, Tally::default())).collect();
    let limits: Vec<&Ordinal> = stages.iter().filter(|s| s.classify() == Class::Limit).collect();
    let mut limit: BTreeMap<&Ordinal, Tally> = limits.iter().map(|&s| (s, Tally::default())).collect();
    for s in &samples {
        let r = s.digits(tower)?;
        let mut answers: Vec<(&Ordinal, Option<Membership>)> = Vec::new();
        for alpha in stages {
            let got = tower.is_axiom_digits(alpha, &r)?;
            let want = tower.brute_force(alpha, &r);
            let what = || format!("{} at {alpha}: decider says {}, brute force says {}", s.describe(tower), show(&got), show(&want));
            decider.get_mut(alpha).expect("stage").add(got == want, what);
            answers.push((alpha, got));
        }
        for (alpha, got) in &answers {
            let tally = extension.get_mut(alpha).expect("stage");
            for (beta, lower) in &answers {
                if beta < alpha && lower.is_some() {
                    tally.add(got.is_some(), || format!("{} is an axiom at {beta} but not at {alpha}", s.describe(tower)));
                }
            }
        }
        for &lambda in &limits {
            let via = tower.limit_membership_via_fs(lambda, &r)?;
            let direct = answers.iter().find(|(a, _)| *a == lambda).map(|(_, m)| m.clone()).expect("stage");
            let what = || format!("{}: sequence route says {} (n = {}), decider says {}", s.describe(tower), show(&via.member), via.settled_at, show(&direct));
            limit.get_mut(lambda).expect("limit").add(via.member == direct, what);
        }
    }
    for alpha in stages {
        let t = decider.remove(alpha).expect("stage");
        report.records.push(t.record("decider", alpha, "agrees with brute force"));
    }
    for alpha in stages {
        let t = extension.remove(alpha).expect("stage");
        report.records.push(t.record("extension", alpha, "contains every axiom of the lower grid stages"));
    }
    for lambda in limits {
        let t = limit.remove(lambda).expect("limit");
        report.records.push(t.record("limit", lambda, "sequence route agrees with the decider"));
    }
    for alpha in stages {
        report.records.push(diagonal(tower, alpha, grid.diagonal)?);
    }
    Ok(())
}

/// Rebuilds the stage axiom by substitution into the host formula and
/// compares it with the memo entry computed by the digit route.
fn diagonal(tower: &mut Tower, alpha: &Ordinal, level: DiagonalLevel) -> Result<Record> {
    let g = stage_code(alpha)?;
    let entry = tower.entry(g)?.clone();
    let host = tower.rosser_host_formula(alpha)?;
    let numeral = efficient_numeral(&coding::encode_formula(&host));
    let negated = tower.policy().sign(alpha) == Sign::Negation;
    let mut w = coding::Writer::new();
    w.symbol(coding::Symbol::TagFormula);
    if negated {
        w.symbol(coding::Symbol::Not);
    }
    w.formula_subst(&host, VAR_A, &numeral);
    let streamed = w.into_digits();
    let mut ok = streamed.len() == entry.len && digest(&streamed) == entry.digest;
    let mut detail = if ok { "substituted code matches the memo".to_string() } else { "substituted code differs from the memo".to_string() };
    drop(streamed);
    if ok && level == DiagonalLevel::Formula {
        let rosser = tower.rosser_sentence(alpha)?;
        let axiom = if negated { negate(&rosser) } else { rosser };
        let decoded = coding::decode_formula_digits(&tower.qtilde_digits(alpha)?);
        ok = decoded.as_ref() == Ok(&axiom) && axiom.is_closed();
        detail = if ok { "closed, and equal to the decoded memo code as a formula".into() } else { "formula differs from the decoded memo code".into() };
    }
    Ok(Record { check: "diagonal".into(), stage: alpha.to_string(), passed: ok, cases: 1, detail })
}
