//! The staged extension `P₀, P₁, …` along a stage's history.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::polyfrac::PolyFrac;
use super::ProbError;
use crate::construction::Stage;
use crate::model::{all_elements, random_elem, AxiomTally, Elem};

/// Exact field used for atom weights.
pub trait Weight: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    /// `None` on division by zero.
    fn div(&self, o: &Self) -> Option<Self>;
    fn is_zero(&self) -> bool;
}

impl Weight for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Option<Self> {
        (!Zero::is_zero(o)).then(|| self / o)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl Weight for PolyFrac {
    fn zero() -> Self {
        PolyFrac::constant(Zero::zero())
    }
    fn one() -> Self {
        PolyFrac::constant(One::one())
    }
    fn add(&self, o: &Self) -> Self {
        PolyFrac::add(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        PolyFrac::mul(self, o)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        PolyFrac::div(self, o)
    }
    fn is_zero(&self) -> bool {
        PolyFrac::is_zero(self)
    }
}

/// Atom weights of one stage.
#[derive(Clone, Debug, PartialEq)]
pub struct Valuation<W> {
    pub level: usize,
    pub weights: Vec<W>,
}

impl<W: Weight> Valuation<W> {
    /// `P(A) = Σ_{ω ∈ A} P(ω)`.
    pub fn measure(&self, a: &Elem) -> Result<W, ProbError> {
        if a.universe_size() != self.weights.len() {
            return Err(ProbError::StageMismatch { expected: self.weights.len(), found: a.universe_size() });
        }
        Ok(a.ones().fold(W::zero(), |s, i| s.add(&self.weights[i])))
    }

    pub fn total(&self) -> W {
        self.weights.iter().fold(W::zero(), |s, w| s.add(w))
    }
}

/// `P₀(ω) = π(⋀ τ_ω)`: stage-0 atoms are indexed like Σ.
pub fn p0_from_table<W: Weight>(stage: &Stage, table: Vec<W>) -> Result<Valuation<W>, ProbError> {
    if table.len() != stage.size_at(0) {
        return Err(ProbError::TableSize { expected: stage.size_at(0), found: table.len() });
    }
    Ok(Valuation { level: 0, weights: table })
}

/// `P_{n+1}` from `P_n` and the advance recorded at `p.level`.
pub fn extend_step<W: Weight>(stage: &Stage, p: &Valuation<W>) -> Result<Valuation<W>, ProbError> {
    let n = p.level;
    let adv = stage.history().get(n).ok_or(ProbError::NoAdvance(n))?;
    if p.weights.len() != stage.size_at(n) {
        return Err(ProbError::StageMismatch { expected: stage.size_at(n), found: p.weights.len() });
    }
    let mut block_mass = Vec::with_capacity(adv.data.parts.len());
    for part in &adv.data.parts {
        block_mass.push((p.measure(&part.pi)?, p.measure(&part.gamma)?));
    }
    let next = stage.level(n + 1);
    let mut weights = Vec::with_capacity(next.size);
    for j in 0..next.size {
        let (x, y, i) = (next.parent[j], next.second[j], next.part[j]);
        let (mpi, mgamma) = &block_mass[i];
        let num = p.weights[x].mul(&p.weights[y]);
        // (ω, ω′) with ω ∈ Π(i) divides by P(Γ(i)); the swapped pair by P(Π(i)).
        let den = if adv.data.parts[i].pi.contains(x) { mgamma } else { mpi };
        weights.push(num.div(den).ok_or(ProbError::ZeroDenominator { level: n, part: i })?);
    }
    Ok(Valuation { level: n + 1, weights })
}

/// `P₀ … P_n` for the whole history of `stage`.
#[derive(Clone, Debug)]
pub struct Extension<W> {
    pub levels: Vec<Valuation<W>>,
}

impl<W: Weight> Extension<W> {
    pub fn new(stage: &Stage, table: Vec<W>) -> Result<Extension<W>, ProbError> {
        let mut levels = vec![p0_from_table(stage, table)?];
        for _ in 0..stage.index() {
            let next = extend_step(stage, levels.last().expect("nonempty"))?;
            levels.push(next);
        }
        Ok(Extension { levels })
    }

    pub fn last(&self) -> &Valuation<W> {
        self.levels.last().expect("nonempty")
    }

    /// `P_∞` on an element of the final stage.
    pub fn measure(&self, a: &Elem) -> Result<W, ProbError> {
        self.last().measure(a)
    }
}

#[derive(Clone, Debug)]
pub struct LemmaOptions {
    /// Exhaustive over all elements up to this many atoms, sampled beyond.
    pub exhaustive_atoms: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for LemmaOptions {
    fn default() -> Self {
        LemmaOptions { exhaustive_atoms: 16, samples: 4096, seed: 0x1e44a }
    }
}

/// Per-transition identities of the extension.
#[derive(Clone, Debug)]
pub struct LemmaReport {
    /// `(n, atoms of stage n + 1)`.
    pub transitions: Vec<(usize, usize)>,
    pub checks: Vec<AxiomTally>,
}

impl LemmaReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(AxiomTally::ok)
    }

    pub fn get(&self, name: &str) -> Option<&AxiomTally> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for LemmaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

fn elements(n: usize, opts: &LemmaOptions, salt: u64) -> Vec<Elem> {
    if n <= opts.exhaustive_atoms {
        all_elements(n).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ salt);
        let mut v = vec![Elem::empty(n), Elem::full(n)];
        v.extend((0..opts.samples).map(|_| random_elem(n, &mut rng)));
        v
    }
}

/// Total mass, pushforward (`P_{n+1}(μ(A)) = P_n(A)`) and the block and
/// factorization identities at every transition.
pub fn check_lemmas<W: Weight>(stage: &Stage, ext: &Extension<W>, opts: &LemmaOptions) -> LemmaReport {
    let mut total = AxiomTally::new("total");
    let mut push = AxiomTally::new("pushforward");
    let mut block = AxiomTally::new("block-mass");
    let mut pos = AxiomTally::new("factor-mu");
    let mut neg = AxiomTally::new("factor-not-mu");
    let mut transitions = Vec::new();
    for p in &ext.levels {
        let t = p.total();
        total.record(t == W::one(), || format!("P_{}(Ω) = {t}", p.level));
    }
    for n in 0..ext.levels.len().saturating_sub(1) {
        let (p, q) = (&ext.levels[n], &ext.levels[n + 1]);
        let adv = &stage.history()[n];
        transitions.push((n, q.weights.len()));
        let m = |v: &Valuation<W>, e: &Elem| v.measure(e).expect("stage-sized element");
        for a in elements(p.weights.len(), opts, n as u64) {
            let lifted = stage.lift_once(n, &a);
            let (lhs, rhs) = (m(q, &lifted), m(p, &a));
            push.record(lhs == rhs, || format!("stage {n}, A = {a}: {lhs} vs {rhs}"));
        }
        let pb = m(p, &adv.data.b);
        let pnb = m(p, &adv.data.b.complement());
        for (i, part) in adv.data.parts.iter().enumerate() {
            let (mpi, mg) = (m(p, &part.pi), m(p, &part.gamma));
            let sum = mpi.add(&mg);
            let r1 = mpi.div(&pb);
            let r2 = mg.div(&pnb);
            let holds = r1.as_ref() == Some(&sum) && r2.as_ref() == Some(&sum);
            block.record(holds, || format!("stage {n}, block {i}: {sum}, {r1:?}, {r2:?}"));
        }
        let mu = &adv.positive;
        let nmu = mu.complement();
        let (pmu, pnmu) = (m(q, mu), m(q, &nmu));
        for a in elements(q.weights.len(), opts, 0x100 + n as u64) {
            for (cond, pc, tally) in [(mu, &pmu, &mut pos), (&nmu, &pnmu, &mut neg)] {
                match stage.apply_f_at(n + 1, &a, cond) {
                    Some(fa) => {
                        let lhs = m(q, &cond.inter(&a));
                        let rhs = pc.mul(&m(q, &fa));
                        tally.record(lhs == rhs, || format!("stage {}, A = {a}: {lhs} vs {rhs}", n + 1));
                    }
                    None => tally.skip(),
                }
            }
        }
    }
    LemmaReport { transitions, checks: vec![total, push, block, pos, neg] }
}
