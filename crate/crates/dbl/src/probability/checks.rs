//! Formula-level identities of `π̄`: Bayes, multiplicativity, additivity,
//! non-distortion, and the ε-mode limits.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed};

use super::classical::classical_truth;
use super::{ClassicalProbability, Pipeline, PolyFrac, ProbError, Weight};
use crate::construction::Stage;
use crate::model::AxiomTally;
use crate::syntax::{Formula, Theta};

/// Classical formulas built from atoms with `!` and `->`, up to `depth`.
pub fn classical_formulas(theta: &Theta, depth: usize) -> Vec<Formula> {
    let mut all: Vec<Formula> = (0..theta.len()).map(|i| theta.atom(i)).collect();
    for _ in 0..depth {
        let prev = all.clone();
        let mut next = prev.clone();
        next.extend(prev.iter().map(|a| Formula::not(a.clone())));
        for a in &prev {
            for b in &prev {
                next.push(Formula::implies(a.clone(), b.clone()));
            }
        }
        next.sort();
        next.dedup();
        all = next;
    }
    all
}

/// Bit `ω` set when the classical `f` holds on Σ-atom `ω`.
pub fn truth_table(f: &Formula, theta: &Theta) -> Option<u64> {
    let mut t = 0;
    for w in 0..1usize << theta.len() {
        if classical_truth(f, theta, w)? {
            t |= 1 << w;
        }
    }
    Some(t)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BayesCheck<W> {
    /// `π̄((ψ|φ)) · π̄(φ)`.
    pub lhs: W,
    /// `π̄(φ ∧ ψ)`.
    pub rhs: W,
    pub equal: bool,
}

pub fn bayes_identity<W: Weight>(pl: &mut Pipeline<W>, phi: &Formula, psi: &Formula) -> Result<BayesCheck<W>, ProbError> {
    let c = pl.prob(&Formula::cond(psi.clone(), phi.clone()))?;
    let p = pl.prob(phi)?;
    let rhs = pl.prob(&Formula::and(phi.clone(), psi.clone()))?;
    let lhs = c.mul(&p);
    let equal = lhs == rhs;
    Ok(BayesCheck { lhs, rhs, equal })
}

/// Bayes over all pairs of `formulas`.  One stage is built per class of
/// conditions, advancing on that condition only.
pub fn check_bayes(theta: &Theta, pi: &ClassicalProbability, formulas: &[Formula], budget: usize) -> Result<AxiomTally, ProbError> {
    let mut tally = AxiomTally::new("bayes");
    let mut by_class: BTreeMap<u64, Vec<&Formula>> = BTreeMap::new();
    for f in formulas {
        let t = truth_table(f, theta).ok_or_else(|| ProbError::NotClassical(f.to_string()))?;
        by_class.entry(t).or_default().push(f);
    }
    for phis in by_class.values() {
        let probe = Formula::cond(theta.atom(0), phis[0].clone());
        let out = crate::construction::build_for_formulas(theta, &[probe], budget)
            .map_err(|e| ProbError::Undefined(e.to_string()))?;
        let mut pl = Pipeline::direct(out.stage, pi)?;
        for phi in phis {
            for psi in formulas {
                let b = bayes_identity(&mut pl, phi, psi)?;
                tally.record(b.equal, || format!("φ = {phi}, ψ = {psi}: {} vs {}", b.lhs, b.rhs));
            }
        }
    }
    Ok(tally)
}

/// `(φ, (ψ|φ))`, `(⊤, ψ)` and `(⊥, ψ)` for `φ, ψ` in `formulas`; in each pair
/// the second member is independent of the first (library theorem
/// `inter-independence` and the trivial universes).
pub fn default_multiplicative_pairs(theta: &Theta, formulas: &[Formula]) -> Vec<(Formula, Formula)> {
    let mut out = Vec::new();
    for phi in formulas {
        for psi in formulas {
            out.push((phi.clone(), Formula::cond(psi.clone(), phi.clone())));
        }
    }
    for psi in formulas {
        out.push((theta.top(), psi.clone()));
        out.push((theta.bot(), psi.clone()));
    }
    out
}

/// `π̄(φ ∧ ψ) = π̄(φ) π̄(ψ)` per pair; pairs that do not evaluate are skipped.
pub fn check_multiplicativity<W: Weight>(pl: &mut Pipeline<W>, pairs: &[(Formula, Formula)]) -> AxiomTally {
    let mut tally = AxiomTally::new("multiplicativity");
    for (phi, psi) in pairs {
        let vals = (|| Ok::<_, ProbError>((pl.prob(&Formula::and(phi.clone(), psi.clone()))?, pl.prob(phi)?, pl.prob(psi)?)))();
        match vals {
            Ok((both, a, b)) => {
                let prod = a.mul(&b);
                tally.record(both == prod, || format!("({phi}, {psi}): {both} vs {prod}"));
            }
            Err(_) => tally.skip(),
        }
    }
    tally
}

/// `π̄(φ ∧ ψ) + π̄(φ ∨ ψ) = π̄(φ) + π̄(ψ)`.
pub fn check_additivity<W: Weight>(pl: &mut Pipeline<W>, pairs: &[(Formula, Formula)]) -> AxiomTally {
    let mut tally = AxiomTally::new("additivity");
    for (phi, psi) in pairs {
        let vals = (|| {
            Ok::<_, ProbError>((
                pl.prob(&Formula::and(phi.clone(), psi.clone()))?,
                pl.prob(&Formula::or(phi.clone(), psi.clone()))?,
                pl.prob(phi)?,
                pl.prob(psi)?,
            ))
        })();
        match vals {
            Ok((c, d, a, b)) => {
                let (l, r) = (c.add(&d), a.add(&b));
                tally.record(l == r, || format!("({phi}, {psi}): {l} vs {r}"));
            }
            Err(_) => tally.skip(),
        }
    }
    tally
}

/// `π̄(φ) = π(φ)` on classical formulas.
pub fn check_non_distortion(
    pl: &mut Pipeline<BigRational>,
    pi: &ClassicalProbability,
    formulas: &[Formula],
) -> Result<AxiomTally, ProbError> {
    let mut tally = AxiomTally::new("non-distortion");
    for f in formulas {
        let (ext, direct) = (pl.prob(f)?, pi.prob(f)?);
        tally.record(ext == direct, || format!("{f}: {ext} vs {direct}"));
    }
    Ok(tally)
}

#[derive(Clone, Debug)]
pub struct EpsilonReport {
    pub zero_atoms: Vec<usize>,
    /// `(φ, π̄_e(φ), limit)` for each requested formula.
    pub values: Vec<(Formula, PolyFrac, Option<BigRational>)>,
    /// Weights sum to 1 as a polynomial identity at every stage.
    pub total: AxiomTally,
    /// Limits of classical formulas equal `π`.
    pub classical: AxiomTally,
    /// Every limit exists and lies in `[0, 1]`.
    pub bounded: AxiomTally,
}

impl EpsilonReport {
    pub fn ok(&self) -> bool {
        self.total.ok() && self.classical.ok() && self.bounded.ok()
    }
}

/// Runs the pipeline on `π_e` and extracts limits at `e → 0⁺`.
pub fn epsilon_extension(stage: &Stage, pi: &ClassicalProbability, formulas: &[Formula]) -> Result<EpsilonReport, ProbError> {
    let mut pl = Pipeline::epsilon(stage.clone(), pi)?;
    let mut total = AxiomTally::new("eps-total");
    for v in &pl.ext.levels {
        let t = v.total();
        total.record(t == PolyFrac::one(), || format!("stage {}: {t}", v.level));
    }
    let mut classical = AxiomTally::new("eps-classical");
    let mut bounded = AxiomTally::new("eps-bounded");
    let mut values = Vec::new();
    for f in formulas {
        let v = pl.prob(f)?;
        let lim = v.limit();
        let inside = lim.as_ref().is_some_and(|l| !l.is_negative() && *l <= <BigRational as One>::one());
        bounded.record(inside, || format!("{f}: {v} → {lim:?}"));
        if f.is_classical() {
            let want = pi.prob(f)?;
            classical.record(lim.as_ref() == Some(&want), || format!("{f}: limit {lim:?}, π = {want}"));
        }
        values.push((f.clone(), v, lim));
    }
    Ok(EpsilonReport { zero_atoms: pi.zero_atoms(), values, total, classical, bounded })
}

#[cfg(test)]
mod tests {
    use super::super::polyfrac::ratio;
    use super::*;
    use crate::construction::{build_faithful, build_for_formulas, VerifyOptions};
    use crate::syntax::parse;

    fn ab() -> Theta {
        Theta::new(&["a", "b"]).unwrap()
    }

    #[test]
    fn formula_counts() {
        assert_eq!(classical_formulas(&ab(), 0).len(), 2);
        assert_eq!(classical_formulas(&ab(), 1).len(), 8);
        // 8 + 8 + 64 minus the 6 depth-1 formulas rebuilt at depth 2
        assert_eq!(classical_formulas(&ab(), 2).len(), 74);
        assert_eq!(truth_table(&parse("a -> b", &ab()).unwrap(), &ab()), Some(0b1101));
    }

    #[test]
    fn bayes_worked_value_and_degenerate_cases() {
        let th = ab();
        let (a, b) = (th.atom(0), th.atom(1));
        let out = build_for_formulas(&th, &[Formula::cond(b.clone(), a.clone())], 64).unwrap();
        let mut pl = Pipeline::direct(out.stage, &ClassicalProbability::uniform(&th)).unwrap();
        let r = bayes_identity(&mut pl, &a, &b).unwrap();
        assert_eq!((r.lhs, r.rhs.clone(), r.equal), (ratio(1, 4), ratio(1, 4), true));
        let top = bayes_identity(&mut pl, &th.top(), &b).unwrap();
        assert!(top.equal);
        assert_eq!(top.rhs, ratio(1, 2));
        let bot = bayes_identity(&mut pl, &a, &th.bot()).unwrap();
        assert_eq!((bot.lhs, bot.rhs), (ratio(0, 1), ratio(0, 1)));
    }

    #[test]
    fn multiplicativity_on_uniform_build() {
        let th = ab();
        let (a, b) = (th.atom(0), th.atom(1));
        let out = build_for_formulas(&th, &[Formula::cond(b.clone(), a.clone())], 64).unwrap();
        let mut pl = Pipeline::direct(out.stage, &ClassicalProbability::uniform(&th)).unwrap();
        let pairs = vec![(a.clone(), Formula::cond(b.clone(), a.clone())), (th.top(), b.clone()), (th.bot(), b.clone())];
        let t = check_multiplicativity(&mut pl, &pairs);
        assert_eq!((t.checked, t.failed), (3, 0));
        // a and b are independent under the uniform π as well
        let t = check_multiplicativity(&mut pl, &[(a.clone(), b.clone())]);
        assert!(t.ok());
        assert!(check_additivity(&mut pl, &pairs).ok());
    }

    #[test]
    fn epsilon_with_one_zero() {
        let th = ab();
        let pi = ClassicalProbability::parse(&th, "a /\\ !b : 1/3\n!a /\\ b : 1/3\n!a /\\ !b : 1/3\n").unwrap();
        let conds = [parse("(b | a)", &th).unwrap(), parse("(a | b)", &th).unwrap()];
        let stage = build_for_formulas(&th, &conds, 64).unwrap().stage;
        let mut fs = classical_formulas(&th, 1);
        fs.extend(conds);
        let rep = epsilon_extension(&stage, &pi, &fs).unwrap();
        assert!(rep.ok(), "{:?} {:?} {:?}", rep.total, rep.classical, rep.bounded);
        assert_eq!(rep.zero_atoms, vec![3]);
        let mut pl = Pipeline::epsilon(stage, &pi).unwrap();
        assert_eq!(pl.limit(&th.top()).unwrap(), ratio(1, 1));
        assert_eq!(pl.prob(&parse("a /\\ b", &th).unwrap()).unwrap().to_string(), "1/4·e");
    }

    #[test]
    fn epsilon_agrees_with_direct_when_positive() {
        let th = ab();
        let pi = ClassicalProbability::parse(&th, "a /\\ b : 1/2\na /\\ !b : 1/4\n!a /\\ b : 1/8\n!a /\\ !b : 1/8\n").unwrap();
        let stage = build_faithful(&th, 18, &VerifyOptions::default()).unwrap().stage;
        let mut e = Pipeline::epsilon(stage.clone(), &pi).unwrap();
        let mut d = Pipeline::direct(stage, &pi).unwrap();
        for f in classical_formulas(&th, 2) {
            assert_eq!(e.limit(&f).unwrap(), d.prob(&f).unwrap());
        }
    }
}
