//! Hand-built proofs used by tests and the acceptance suite.

use syntax::{parse_formula, parse_term, Formula, FormulaKind, Term, Var, VAR_A, VAR_B, VAR_C};

use crate::{Item, Justification, Proof, Schema};

fn f(s: &str) -> Formula {
    parse_formula(s).expect("corpus formula parses")
}

fn t(s: &str) -> Term {
    parse_term(s).expect("corpus term parses")
}

/// Appends steps whose formulas are computed from their justifications.
#[derive(Default)]
pub struct ProofBuilder {
    pub proof: Proof,
}

impl ProofBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    fn formula(&self, i: usize) -> Formula {
        self.proof.steps[i].formula.clone()
    }

    pub fn schema(&mut self, s: Schema, inst: Vec<Item>) -> usize {
        let phi = s.instance(&inst).expect("instantiation fits schema");
        self.proof.push(phi, Justification::AxiomLogical(s, inst))
    }

    pub fn axiom(&mut self, phi: Formula) -> usize {
        self.proof.push(phi, Justification::AxiomNonLogical)
    }

    pub fn mp(&mut self, i: usize, j: usize) -> usize {
        let conclusion = match self.formula(j).kind() {
            FormulaKind::Implies(_, b) => b.clone(),
            _ => panic!("step {j} is not an implication"),
        };
        self.proof.push(conclusion, Justification::ModusPonens(i, j))
    }

    pub fn gen(&mut self, i: usize, x: Var) -> usize {
        let phi = Formula::forall(x, self.formula(i));
        self.proof.push(phi, Justification::Generalization(i, x))
    }

    /// From step `i` proving `all x A`, derive `A[x:=t]`.
    pub fn inst(&mut self, i: usize, term: Term) -> usize {
        let (x, a) = match self.formula(i).kind() {
            FormulaKind::ForAll(x, a) => (*x, a.clone()),
            _ => panic!("step {i} is not universal"),
        };
        let ax = self.schema(Schema::ForallElim, vec![Item::Var(x), Item::Formula(a), Item::Term(term)]);
        self.mp(i, ax)
    }

    /// From step `i` proving a formula with free `x`, derive the instance at `t`.
    pub fn specialize(&mut self, i: usize, x: Var, term: Term) -> usize {
        let g = self.gen(i, x);
        self.inst(g, term)
    }

    /// From `a=b` at step `i`, derive `b=a`.
    pub fn symm(&mut self, i: usize) -> usize {
        let (l, r) = match self.formula(i).kind() {
            FormulaKind::Eq(l, r) => (l.clone(), r.clone()),
            _ => panic!("step {i} is not an equation"),
        };
        let trans = self.arith_instance("a=b -> (a=c -> b=c)", &[(VAR_A, l.clone()), (VAR_B, r), (VAR_C, l.clone())]);
        let refl = self.schema(Schema::EqRefl, vec![Item::Term(l)]);
        let step = self.mp(i, trans);
        self.mp(refl, step)
    }

    /// From `x=y` at `i` and `y=z` at `j`, derive `x=z`.
    pub fn trans(&mut self, i: usize, j: usize) -> usize {
        let yx = self.symm(i);
        let (y, x) = match self.formula(yx).kind() {
            FormulaKind::Eq(l, r) => (l.clone(), r.clone()),
            _ => unreachable!(),
        };
        let z = match self.formula(j).kind() {
            FormulaKind::Eq(_, r) => r.clone(),
            _ => panic!("step {j} is not an equation"),
        };
        let ax = self.arith_instance("a=b -> (a=c -> b=c)", &[(VAR_A, y), (VAR_B, x), (VAR_C, z)]);
        let step = self.mp(yx, ax);
        self.mp(j, step)
    }

    /// Arithmetic axiom `text` with its free variables instantiated in order
    /// (each closed instance is reached by generalizing and instantiating).
    pub fn arith_instance(&mut self, text: &str, values: &[(Var, Term)]) -> usize {
        let mut cur = self.axiom(f(text));
        for (x, _) in values.iter().rev() {
            cur = self.gen(cur, *x);
        }
        for (_, v) in values {
            cur = self.inst(cur, v.clone());
        }
        cur
    }

    pub fn finish(self) -> Proof {
        self.proof
    }
}

/// A named proof with its target.
pub struct CorpusEntry {
    pub name: &'static str,
    pub proof: Proof,
    pub target: Formula,
}

fn entry(name: &'static str, b: ProofBuilder) -> CorpusEntry {
    let proof = b.finish();
    let target = proof.conclusion().expect("nonempty").clone();
    CorpusEntry { name, proof, target }
}

/// Valid proofs in the base system (nonlogical axioms: the arithmetic ones).
pub fn valid_proofs() -> Vec<CorpusEntry> {
    use Item::{Formula as F, Term as T, Var as V};
    let mut out = Vec::new();

    let mut b = ProofBuilder::new();
    b.schema(Schema::EqRefl, vec![T(Term::zero())]);
    out.push(entry("refl-zero", b));

    let mut b = ProofBuilder::new();
    b.schema(Schema::K, vec![F(f("0=0")), F(f("0<=0"))]);
    out.push(entry("k-instance", b));

    let mut b = ProofBuilder::new();
    let a = b.schema(Schema::EqRefl, vec![T(Term::zero())]);
    let k = b.schema(Schema::K, vec![F(f("0=0")), F(f("0<=0"))]);
    b.mp(a, k);
    out.push(entry("mp-weakening", b));

    // A -> A from S and K
    let mut b = ProofBuilder::new();
    let a = f("a<=b");
    let aa = Formula::implies(a.clone(), a.clone());
    let s = b.schema(Schema::S, vec![F(a.clone()), F(aa.clone()), F(a.clone())]);
    let k1 = b.schema(Schema::K, vec![F(a.clone()), F(a.clone())]);
    let m = b.mp(k1, s);
    let k2 = b.schema(Schema::K, vec![F(a.clone()), F(aa.clone())]);
    b.mp(k2, m);
    out.push(entry("identity", b));

    let mut b = ProofBuilder::new();
    let h = b.axiom(f("a+0=a"));
    b.specialize(h, VAR_A, t("S0"));
    out.push(entry("plus-zero-instance", b));

    let mut b = ProofBuilder::new();
    b.schema(Schema::Induction, vec![V(VAR_A), F(f("a=a"))]);
    out.push(entry("induction-instance", b));

    let mut b = ProofBuilder::new();
    b.schema(Schema::Induction, vec![V(VAR_A), F(f("a+0=a"))]);
    out.push(entry("induction-plus-zero", b));

    let mut b = ProofBuilder::new();
    let h = b.axiom(f("~Sa=0"));
    b.specialize(h, VAR_A, Term::zero());
    out.push(entry("succ-not-zero", b));

    let mut b = ProofBuilder::new();
    let r = b.schema(Schema::EqRefl, vec![T(Term::zero())]);
    let e = b.schema(Schema::ExistsIntro, vec![V(VAR_A), F(f("a=a")), T(Term::zero())]);
    b.mp(r, e);
    out.push(entry("exists-witness", b));

    let mut b = ProofBuilder::new();
    let r = b.schema(Schema::EqRefl, vec![T(Term::zero())]);
    let ai = b.schema(Schema::AndIntro, vec![F(f("0=0")), F(f("0=0"))]);
    let m = b.mp(r, ai);
    b.mp(r, m);
    out.push(entry("conjunction", b));

    let mut b = ProofBuilder::new();
    let r = b.schema(Schema::EqRefl, vec![T(Term::zero())]);
    let o = b.schema(Schema::OrLeft, vec![F(f("0=0")), F(f("S0=0"))]);
    b.mp(r, o);
    out.push(entry("disjunction", b));

    let mut b = ProofBuilder::new();
    b.schema(Schema::DoubleNeg, vec![F(f("a<=Sb"))]);
    out.push(entry("double-negation", b));

    let mut b = ProofBuilder::new();
    b.schema(Schema::NotIntro, vec![F(f("a=0")), F(f("b=0"))]);
    out.push(entry("not-intro", b));

    let mut b = ProofBuilder::new();
    b.schema(Schema::ForallDist, vec![V(VAR_A), F(f("0=0")), F(f("a<=a"))]);
    out.push(entry("forall-dist", b));

    let mut b = ProofBuilder::new();
    b.schema(Schema::ExistsElim, vec![V(VAR_B), F(f("a=b")), F(f("a=a"))]);
    out.push(entry("exists-elim", b));

    let mut b = ProofBuilder::new();
    let r = b.schema(Schema::EqRefl, vec![T(Term::var(VAR_A))]);
    b.gen(r, VAR_A);
    out.push(entry("generalized-refl", b));

    let mut b = ProofBuilder::new();
    let h = b.axiom(f("a*0=0"));
    b.specialize(h, VAR_A, t("SS0"));
    out.push(entry("times-zero-instance", b));

    let mut b = ProofBuilder::new();
    b.schema(Schema::OrElim, vec![F(f("a=0")), F(f("~a=0")), F(f("0<=a"))]);
    out.push(entry("or-elim", b));

    let mut b = ProofBuilder::new();
    let x = b.arith_instance("a=b -> Sa=Sb", &[(VAR_A, t("0+0")), (VAR_B, Term::zero())]);
    let h = b.arith_instance("a+0=a", &[(VAR_A, Term::zero())]);
    b.mp(h, x);
    out.push(entry("congruence", b));

    // S0+S0 = SS0 by the recursion equations
    let mut b = ProofBuilder::new();
    let rec = b.arith_instance("a+Sb=S(a+b)", &[(VAR_A, t("S0")), (VAR_B, Term::zero())]);
    let base = b.arith_instance("a+0=a", &[(VAR_A, t("S0"))]);
    let cong = b.arith_instance("a=b -> Sa=Sb", &[(VAR_A, t("S0+0")), (VAR_B, t("S0"))]);
    let s = b.mp(base, cong);
    b.trans(rec, s);
    out.push(entry("one-plus-one", b));

    let mut b = ProofBuilder::new();
    let h = b.arith_instance("c+a=b -> a<=b", &[(VAR_C, Term::zero()), (VAR_A, Term::zero()), (VAR_B, Term::zero())]);
    let z = b.arith_instance("a+0=a", &[(VAR_A, Term::zero())]);
    b.mp(z, h);
    out.push(entry("zero-le-zero", b));

    let mut b = ProofBuilder::new();
    b.schema(Schema::AndRight, vec![F(f("all a a=a")), F(f("exists b b<=c"))]);
    out.push(entry("and-right", b));

    out
}

/// A valid proof of a negated formula, for the negation variant of the
/// proof predicate.
pub fn negation_proof() -> CorpusEntry {
    let mut b = ProofBuilder::new();
    let h = b.axiom(f("~Sa=0"));
    b.specialize(h, VAR_A, t("S0"));
    entry("negation", b)
}

/// Deterministic single-point mutations of `entry`, most of them invalid.
///
/// Each result pairs a proof with the target it should be checked against.
/// Some mutations can happen to stay valid (e.g. swapping identical steps);
/// callers compare against the checker rather than assuming rejection.
pub fn corruptions(entry: &CorpusEntry, seed: u64, count: usize) -> Vec<(Proof, Formula)> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let n = entry.proof.steps.len();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut p = entry.proof.clone();
        let mut target = entry.target.clone();
        let k = rng.gen_range(0..n);
        match rng.gen_range(0..8) {
            0 => target = Formula::not(target),
            1 => {
                p.steps.pop();
            }
            2 => p.steps[k].formula = Formula::not(p.steps[k].formula.clone()),
            3 => p.steps[k].justification = Justification::AxiomNonLogical,
            4 => {
                let i = rng.gen_range(0..n + 1);
                let j = rng.gen_range(0..n + 1);
                p.steps[k].justification = Justification::ModusPonens(i, j);
            }
            5 => {
                let i = rng.gen_range(0..n + 1);
                p.steps[k].justification = Justification::Generalization(i, rng.gen_range(0..4));
            }
            6 => {
                let s = crate::ALL_SCHEMAS[rng.gen_range(0..crate::ALL_SCHEMAS.len())];
                let inst = match &p.steps[k].justification {
                    Justification::AxiomLogical(_, inst) => inst.clone(),
                    _ => vec![Item::Term(Term::zero())],
                };
                p.steps[k].justification = Justification::AxiomLogical(s, inst);
            }
            _ => {
                let j = rng.gen_range(0..n);
                p.steps.swap(k, j);
            }
        }
        out.push((p, target));
    }
    out
}

/// Structurally random proof (not usually valid) with up to `max_steps`
/// steps, for coding round-trips.
pub fn random_proof<R: rand::Rng>(rng: &mut R, max_steps: usize, budget: i64) -> Proof {
    use syntax::random::{random_formula, random_term};
    let n = rng.gen_range(1..=max_steps);
    let mut p = Proof::new();
    for _ in 0..n {
        let mut b = budget;
        let formula = random_formula(rng, &mut b, 6);
        let justification = match rng.gen_range(0..4) {
            0 => {
                let s = crate::ALL_SCHEMAS[rng.gen_range(0..crate::ALL_SCHEMAS.len())];
                let inst = (0..rng.gen_range(0..4))
                    .map(|_| {
                        let mut b = budget / 2;
                        match rng.gen_range(0..3) {
                            0 => Item::Formula(random_formula(rng, &mut b, 6)),
                            1 => Item::Term(random_term(rng, &mut b, 6)),
                            _ => Item::Var(rng.gen_range(0..40)),
                        }
                    })
                    .collect();
                Justification::AxiomLogical(s, inst)
            }
            1 => Justification::AxiomNonLogical,
            2 => Justification::ModusPonens(rng.gen_range(0..1000), rng.gen_range(0..1000)),
            _ => Justification::Generalization(rng.gen_range(0..1000), rng.gen_range(0..40)),
        };
        p.push(formula, justification);
    }
    p
}
