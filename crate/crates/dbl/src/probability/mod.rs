//! Exact probabilities on stage atoms: the staged extension of a classical
//! `π`, formula probabilities `π̄`, and the identities they satisfy.

mod checks;
mod classical;
mod extension;
mod lewis;
mod polyfrac;

use num_rational::BigRational;
use thiserror::Error;

pub use checks::{
    bayes_identity, check_additivity, check_bayes, check_multiplicativity, check_non_distortion, classical_formulas,
    default_multiplicative_pairs, epsilon_extension, truth_table, BayesCheck, EpsilonReport,
};
pub use classical::{classical_truth, sigma_formula, sigma_label, ClassicalProbability};
pub use extension::{
    check_lemmas, extend_step, p0_from_table, Extension, LemmaOptions, LemmaReport, Valuation, Weight,
};
pub use lewis::{lewis_arithmetic, lewis_separation, LewisArithmetic, LewisReport, LewisRow};
pub use polyfrac::{Poly, PolyFrac};

use crate::construction::Stage;
use crate::model::Assignment;
use crate::syntax::Formula;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum ProbError {
    #[error("probability table has {found} entries, expected {expected}")]
    TableSize { expected: usize, found: usize },
    #[error("negative probability for {0}")]
    Negative(String),
    #[error("probabilities sum to {0}, not 1")]
    Total(BigRational),
    #[error("{0} is given twice")]
    Duplicate(String),
    #[error("`{0}` does not denote a single complete conjunction")]
    NotSigmaAtom(String),
    #[error("`{0}` is not classical")]
    NotClassical(String),
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("{0}")]
    Parse(String),
    #[error("conditioning on `{0}`, which has probability 0")]
    NullCondition(String),
    #[error("element has {found} atoms, valuation has {expected}")]
    StageMismatch { expected: usize, found: usize },
    #[error("no advance recorded after stage {0}")]
    NoAdvance(usize),
    #[error("zero denominator at stage {level}, block {part}: the probability is not strictly positive; use ε-mode")]
    ZeroDenominator { level: usize, part: usize },
    #[error("atom sets differ between probability and model")]
    ThetaMismatch,
    #[error("{0}")]
    Undefined(String),
    #[error("ε-limit of `{0}` is unbounded")]
    Unbounded(String),
}

/// A stage together with the extension of one `π` along it: `π̄` at the
/// current truncation.
#[derive(Clone, Debug)]
pub struct Pipeline<W> {
    pub stage: Stage,
    pub ext: Extension<W>,
    asg: Assignment,
}

impl<W: Weight> Pipeline<W> {
    pub fn with_table(stage: Stage, table: Vec<W>) -> Result<Pipeline<W>, ProbError> {
        let ext = Extension::new(&stage, table)?;
        let asg = stage.canonical_assignment();
        Ok(Pipeline { stage, ext, asg })
    }

    /// `π̄(φ) = P_n(h̄(φ))`.
    pub fn prob(&mut self, f: &Formula) -> Result<W, ProbError> {
        let e = self.asg.eval(&self.stage, f).map_err(|u| ProbError::Undefined(format!("{f}: {u}")))?;
        self.ext.measure(&e)
    }
}

impl Pipeline<BigRational> {
    pub fn direct(stage: Stage, pi: &ClassicalProbability) -> Result<Pipeline<BigRational>, ProbError> {
        if stage.theta() != pi.theta() {
            return Err(ProbError::ThetaMismatch);
        }
        Pipeline::with_table(stage, pi.table().to_vec())
    }
}

impl Pipeline<PolyFrac> {
    /// Runs on `π_e` instead of `π`.
    pub fn epsilon(stage: Stage, pi: &ClassicalProbability) -> Result<Pipeline<PolyFrac>, ProbError> {
        if stage.theta() != pi.theta() {
            return Err(ProbError::ThetaMismatch);
        }
        Pipeline::with_table(stage, pi.perturbed())
    }

    /// `lim_{e→0⁺} π̄_e(φ)`.
    pub fn limit(&mut self, f: &Formula) -> Result<BigRational, ProbError> {
        self.prob(f)?.limit().ok_or_else(|| ProbError::Unbounded(f.to_string()))
    }
}

/// `π̄(φ)` directly when every denominator is positive, else as an ε-limit.
/// The flag tells which route was taken.
pub fn prob_of_formula(stage: &Stage, pi: &ClassicalProbability, f: &Formula) -> Result<(BigRational, bool), ProbError> {
    match Pipeline::direct(stage.clone(), pi) {
        Ok(mut p) => Ok((p.prob(f)?, false)),
        Err(ProbError::ZeroDenominator { .. }) => Ok((Pipeline::epsilon(stage.clone(), pi)?.limit(f)?, true)),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::polyfrac::ratio;
    use super::*;
    use crate::construction::build_for_formulas;
    use crate::syntax::{parse, Theta};

    #[test]
    fn uniform_conditional_is_one_half() {
        let th = Theta::new(&["a", "b"]).unwrap();
        let f = parse("(b | a)", &th).unwrap();
        let out = build_for_formulas(&th, &[f.clone()], 64).unwrap();
        let pi = ClassicalProbability::uniform(&th);
        let mut pl = Pipeline::direct(out.stage.clone(), &pi).unwrap();
        assert_eq!(pl.prob(&f).unwrap(), ratio(1, 2));
        assert_eq!(pl.prob(&th.bot()).unwrap(), ratio(0, 1));
        // oracle: π(a ∧ b) / π(a)
        let direct = pi.prob(&parse("a /\\ b", &th).unwrap()).unwrap() / pi.prob(&parse("a", &th).unwrap()).unwrap();
        assert_eq!(pl.prob(&f).unwrap(), direct);
        assert_eq!(prob_of_formula(&out.stage, &pi, &f).unwrap(), (ratio(1, 2), false));
    }

    #[test]
    fn theta_mismatch() {
        let th = Theta::new(&["a", "b"]).unwrap();
        let other = Theta::new(&["a"]).unwrap();
        let s = Stage::new(&th).unwrap();
        assert_eq!(Pipeline::direct(s, &ClassicalProbability::uniform(&other)).unwrap_err(), ProbError::ThetaMismatch);
    }

    #[test]
    fn zero_denominators_fall_back_to_epsilon() {
        let th = Theta::new(&["a", "b"]).unwrap();
        let f = parse("(b | a)", &th).unwrap();
        let out = build_for_formulas(&th, &[f.clone()], 64).unwrap();
        let pi = ClassicalProbability::parse(&th, "a /\\ b : 1/4\na /\\ !b : 3/4\n").unwrap();
        let (v, eps) = prob_of_formula(&out.stage, &pi, &f).unwrap();
        assert!(eps);
        assert_eq!(v, ratio(1, 4));
    }
}
