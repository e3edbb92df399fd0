//! Extending a conditioned probability versus conditioning the extension.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{classical_formulas, prob_of_formula, truth_table, ClassicalProbability, Pipeline, ProbError};
use crate::construction::{build_for_formulas, Stage};
use crate::model::AxiomTally;
use crate::syntax::{Formula, Theta};

#[derive(Clone, Debug, PartialEq)]
pub struct LewisRow {
    pub delta: Formula,
    /// `π̄_φ(δ)`: extend `π(· | φ)`, then evaluate.
    pub extended_conditioned: BigRational,
    /// The value above needed the ε route (`π(· | φ)` has zeros).
    pub via_epsilon: bool,
    /// `π̄(δ ∧ φ) / π̄(φ)`.
    pub conditioned_extension: BigRational,
}

impl LewisRow {
    pub fn differs(&self) -> bool {
        self.extended_conditioned != self.conditioned_extension
    }
}

impl fmt::Display for LewisRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<24} extended-conditioned={}{} conditioned-extension={}{}",
            self.delta.to_string(),
            self.extended_conditioned,
            if self.via_epsilon { " (ε)" } else { "" },
            self.conditioned_extension,
            if self.differs() { "  DIFFERENT" } else { "" }
        )
    }
}

#[derive(Clone, Debug)]
pub struct LewisReport {
    pub phi: Formula,
    pub rows: Vec<LewisRow>,
    /// Classical `δ` agree on both routes.
    pub classical: AxiomTally,
}

impl LewisReport {
    pub fn witnesses(&self) -> impl Iterator<Item = &LewisRow> {
        self.rows.iter().filter(|r| r.differs())
    }
}

impl fmt::Display for LewisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "conditioning on {}", self.phi)?;
        for r in &self.rows {
            writeln!(f, "  {r}")?;
        }
        writeln!(f, "  witnesses: {}", self.witnesses().count())?;
        writeln!(f, "  {}", self.classical)
    }
}

fn check_pre(pi: &ClassicalProbability, phi: &Formula) -> Result<BigRational, ProbError> {
    if !pi.is_strictly_positive() {
        return Err(ProbError::Undefined("the separation needs a strictly positive probability".into()));
    }
    let z = pi.prob(phi)?;
    if z.is_zero() || z >= BigRational::from_integer(1.into()) {
        return Err(ProbError::Undefined(format!("need 0 < π({phi}) < 1, got {z}")));
    }
    Ok(z)
}

/// Stages built per class of conditions, shared across the search.
struct Stages<'t> {
    theta: &'t Theta,
    budget: usize,
    cache: BTreeMap<u64, Stage>,
}

impl Stages<'_> {
    fn for_condition(&mut self, cond: &Formula) -> Result<Stage, ProbError> {
        let key = truth_table(cond, self.theta).ok_or_else(|| ProbError::NotClassical(cond.to_string()))?;
        if let Some(s) = self.cache.get(&key) {
            return Ok(s.clone());
        }
        let probe = Formula::cond(self.theta.atom(0), cond.clone());
        let out = build_for_formulas(self.theta, &[probe], self.budget).map_err(|e| ProbError::Undefined(e.to_string()))?;
        self.cache.insert(key, out.stage.clone());
        Ok(out.stage)
    }
}

fn row(
    stage: &Stage,
    pi: &ClassicalProbability,
    pi_phi: &ClassicalProbability,
    phi: &Formula,
    z: &BigRational,
    delta: &Formula,
) -> Result<LewisRow, ProbError> {
    let (a, via_epsilon) = prob_of_formula(stage, pi_phi, delta)?;
    let mut pl = Pipeline::direct(stage.clone(), pi)?;
    let b = pl.prob(&Formula::and(delta.clone(), phi.clone()))? / z;
    Ok(LewisRow { delta: delta.clone(), extended_conditioned: a, via_epsilon, conditioned_extension: b })
}

/// Compares both routes for every `(ψ′|φ′)` with classical `ψ′, φ′` of depth
/// at most 1, and for the classical formulas of depth at most 1.
pub fn lewis_separation(theta: &Theta, pi: &ClassicalProbability, phi: &Formula, budget: usize) -> Result<LewisReport, ProbError> {
    let z = check_pre(pi, phi)?;
    let pi_phi = pi.conditioned(phi)?;
    let base = classical_formulas(theta, 1);
    let mut stages = Stages { theta, budget, cache: BTreeMap::new() };
    let mut rows = Vec::new();
    for cond in &base {
        let stage = stages.for_condition(cond)?;
        for cons in &base {
            rows.push(row(&stage, pi, &pi_phi, phi, &z, &Formula::cond(cons.clone(), cond.clone()))?);
        }
    }
    let stage0 = Stage::new(theta).map_err(|e| ProbError::Undefined(e.to_string()))?;
    let mut classical = AxiomTally::new("classical");
    for delta in &base {
        let r = row(&stage0, pi, &pi_phi, phi, &z, delta)?;
        classical.record(!r.differs(), || r.to_string());
    }
    Ok(LewisReport { phi: phi.clone(), rows, classical })
}

/// One `C` of the case split.
#[derive(Clone, Debug, PartialEq)]
pub struct LewisCase {
    pub c: Formula,
    pub weight: BigRational,
    /// `π(ψ | C ∧ φ)`, the value forced by assuming both routes agree.
    pub assumed: BigRational,
    pub extended_conditioned: BigRational,
    pub conditioned_extension: BigRational,
}

/// The case split on `C ∈ {ψ, ¬ψ}` for `δ = (ψ|φ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LewisArithmetic {
    pub psi: Formula,
    pub phi: Formula,
    /// `π(ψ | φ) = π̄((ψ|φ))`.
    pub direct: BigRational,
    /// `π(ψ)`.
    pub prior: BigRational,
    /// `Σ_C π(ψ | C ∧ φ) π(C)`.
    pub forced: BigRational,
    /// `Σ_C (π̄(δ ∧ C) / π(C)) π(C)`.
    pub total_conditioned: BigRational,
    pub cases: Vec<LewisCase>,
}

impl LewisArithmetic {
    /// The agreement assumption turns `π(ψ|φ)` into `π(ψ)`.
    pub fn forces_collapse(&self) -> bool {
        self.forced == self.prior
    }

    /// The extension keeps `π(ψ|φ)` because the routes disagree.
    pub fn escapes(&self) -> bool {
        self.total_conditioned == self.direct
            && self.direct != self.prior
            && self.cases.iter().any(|c| c.extended_conditioned != c.conditioned_extension)
    }
}

impl fmt::Display for LewisArithmetic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = Formula::cond(self.psi.clone(), self.phi.clone());
        writeln!(f, "π̄({d}) = π({} | {}) = {}", self.psi, self.phi, self.direct)?;
        for c in &self.cases {
            writeln!(
                f,
                "  C = {}: π(C) = {}, assumed π(ψ | C ∧ φ) = {}, extended-conditioned = {}, conditioned-extension = {}",
                c.c, c.weight, c.assumed, c.extended_conditioned, c.conditioned_extension
            )?;
        }
        writeln!(f, "  assuming agreement: π̄({d}) = {} = π({}) = {}", self.forced, self.psi, self.prior)?;
        writeln!(f, "  conditioning the extension: Σ = {}", self.total_conditioned)?;
        writeln!(f, "  collapse forced: {}; escaped: {}", self.forces_collapse(), self.escapes())
    }
}

pub fn lewis_arithmetic(
    theta: &Theta,
    pi: &ClassicalProbability,
    psi: &Formula,
    phi: &Formula,
    budget: usize,
) -> Result<LewisArithmetic, ProbError> {
    if !pi.is_strictly_positive() {
        return Err(ProbError::Undefined("the demonstration needs a strictly positive probability".into()));
    }
    let delta = Formula::cond(psi.clone(), phi.clone());
    let stage = build_for_formulas(theta, &[delta.clone()], budget).map_err(|e| ProbError::Undefined(e.to_string()))?.stage;
    let and = |a: &Formula, b: &Formula| Formula::and(a.clone(), b.clone());
    let pphi = pi.prob(phi)?;
    let direct = pi.prob(&and(psi, phi))? / &pphi;
    let prior = pi.prob(psi)?;
    let mut pl = Pipeline::direct(stage.clone(), pi)?;
    let mut cases = Vec::new();
    for c in [psi.clone(), Formula::not(psi.clone())] {
        let weight = pi.prob(&c)?;
        let cphi = pi.prob(&and(&c, phi))?;
        if !cphi.is_positive() {
            return Err(ProbError::NullCondition(and(&c, phi).to_string()));
        }
        let assumed = pi.prob(&and(psi, &and(&c, phi)))? / cphi;
        let (extended_conditioned, _) = prob_of_formula(&stage, &pi.conditioned(&c)?, &delta)?;
        let conditioned_extension = pl.prob(&and(&delta, &c))? / &weight;
        cases.push(LewisCase { c, weight, assumed, extended_conditioned, conditioned_extension });
    }
    let forced = cases.iter().map(|c| &c.assumed * &c.weight).sum();
    let total_conditioned = cases.iter().map(|c| &c.conditioned_extension * &c.weight).sum();
    Ok(LewisArithmetic { psi: psi.clone(), phi: phi.clone(), direct, prior, forced, total_conditioned, cases })
}

#[cfg(test)]
mod tests {
    use super::super::polyfrac::ratio;
    use super::*;
    use crate::syntax::parse;

    fn setup() -> (Theta, ClassicalProbability) {
        let th = Theta::new(&["a", "b"]).unwrap();
        let pi = ClassicalProbability::parse(&th, "a /\\ b : 1/2\na /\\ !b : 1/4\n!a /\\ b : 1/8\n!a /\\ !b : 1/8\n").unwrap();
        (th, pi)
    }

    #[test]
    fn separation_on_documented_instance() {
        let (th, pi) = setup();
        let rep = lewis_separation(&th, &pi, &th.atom(1), 64).unwrap();
        assert_eq!(rep.rows.len(), 64);
        assert!(rep.classical.ok() && rep.classical.checked == 8);
        let ba = parse("(b | a)", &th).unwrap();
        let r = rep.rows.iter().find(|r| r.delta == ba).unwrap();
        // π(· | b) gives b probability 1, so (b | a) extends to 1.
        assert_eq!(r.extended_conditioned, ratio(1, 1));
        assert!(r.differs());
    }

    #[test]
    fn conditioning_on_top_changes_nothing() {
        let (th, pi) = setup();
        let top = th.top();
        let pi_top = pi.conditioned(&top).unwrap();
        assert_eq!(pi_top, pi);
        let ba = parse("(b | a)", &th).unwrap();
        let stage = build_for_formulas(&th, &[ba.clone()], 64).unwrap().stage;
        let r = row(&stage, &pi, &pi_top, &top, &ratio(1, 1), &ba).unwrap();
        assert!(!r.differs());
    }

    #[test]
    fn arithmetic_collapse() {
        let (th, pi) = setup();
        let demo = lewis_arithmetic(&th, &pi, &th.atom(0), &th.atom(1), 64).unwrap();
        assert_eq!(demo.direct, ratio(4, 5));
        assert_eq!(demo.prior, ratio(3, 4));
        assert!(demo.forces_collapse());
        assert!(demo.escapes());
        assert_eq!(demo.cases[0].assumed, ratio(1, 1));
        assert_eq!(demo.cases[1].assumed, ratio(0, 1));
    }

    #[test]
    fn preconditions() {
        let (th, pi) = setup();
        assert!(lewis_separation(&th, &pi, &th.top(), 64).is_err());
        let zero = ClassicalProbability::parse(&th, "a /\\ b : 1\n").unwrap();
        assert!(lewis_separation(&th, &zero, &th.atom(0), 64).is_err());
    }
}
