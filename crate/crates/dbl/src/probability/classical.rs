//! Probabilities on the complete conjunctions Σ over Θ.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::polyfrac::{Poly, PolyFrac};
use super::ProbError;
use crate::syntax::{parse, Formula, Theta};

/// Truth value of a classical formula on the Σ-atom `omega` (bit `i` is the
/// `i`-th atom of Θ).  `None` on conditionals, metavariables or strange atoms.
pub fn classical_truth(f: &Formula, theta: &Theta, omega: usize) -> Option<bool> {
    Some(match f {
        Formula::Atom(a) => omega >> theta.index_of(a)? & 1 == 1,
        Formula::Meta(_) | Formula::Cond(..) => return None,
        Formula::Not(a) => !classical_truth(a, theta, omega)?,
        Formula::Implies(a, b) => !classical_truth(a, theta, omega)? || classical_truth(b, theta, omega)?,
    })
}

/// `π` given by its values on Σ; index `ω` as in [`classical_truth`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClassicalProbability {
    theta: Theta,
    table: Vec<BigRational>,
}

impl ClassicalProbability {
    pub fn new(theta: &Theta, table: Vec<BigRational>) -> Result<ClassicalProbability, ProbError> {
        if table.len() != 1 << theta.len() {
            return Err(ProbError::TableSize { expected: 1 << theta.len(), found: table.len() });
        }
        if let Some(i) = table.iter().position(Signed::is_negative) {
            return Err(ProbError::Negative(sigma_label(theta, i)));
        }
        let total: BigRational = table.iter().sum();
        if !total.is_one() {
            return Err(ProbError::Total(total));
        }
        Ok(ClassicalProbability { theta: theta.clone(), table })
    }

    pub fn uniform(theta: &Theta) -> ClassicalProbability {
        let n = 1usize << theta.len();
        let w = BigRational::new(BigInt::one(), BigInt::from(n));
        ClassicalProbability { theta: theta.clone(), table: vec![w; n] }
    }

    /// Integer weights in `1..=max`, normalized.
    pub fn random_positive(theta: &Theta, max: u32, rng: &mut ChaCha8Rng) -> ClassicalProbability {
        let raw: Vec<u32> = (0..1usize << theta.len()).map(|_| rng.gen_range(1..=max)).collect();
        let total: u32 = raw.iter().sum();
        let table = raw.iter().map(|&w| BigRational::new(BigInt::from(w), BigInt::from(total))).collect();
        ClassicalProbability { theta: theta.clone(), table }
    }

    /// Values given per Σ-atom formula, e.g. `("a /\ !b", 1/4)`; missing atoms get 0.
    pub fn from_named(theta: &Theta, items: &[(&str, BigRational)]) -> Result<ClassicalProbability, ProbError> {
        let mut table: Vec<Option<BigRational>> = vec![None; 1 << theta.len()];
        for (text, w) in items {
            let i = sigma_index(theta, text)?;
            if table[i].is_some() {
                return Err(ProbError::Duplicate(sigma_label(theta, i)));
            }
            table[i] = Some(w.clone());
        }
        ClassicalProbability::new(theta, table.into_iter().map(|w| w.unwrap_or_else(BigRational::zero)).collect())
    }

    /// Reads lines `conjunction : n/d`; `#` starts a comment.
    pub fn parse(theta: &Theta, text: &str) -> Result<ClassicalProbability, ProbError> {
        let mut items = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: String| ProbError::Line { line: no + 1, msg };
            let (lhs, rhs) = line.rsplit_once(':').ok_or_else(|| bad("expected `conjunction : value`".into()))?;
            let w: BigRational = rhs.trim().parse().map_err(|_| bad(format!("bad rational `{}`", rhs.trim())))?;
            items.push((lhs.trim().to_string(), w));
        }
        let refs: Vec<(&str, BigRational)> = items.iter().map(|(s, w)| (s.as_str(), w.clone())).collect();
        ClassicalProbability::from_named(theta, &refs)
    }

    pub fn theta(&self) -> &Theta {
        &self.theta
    }

    pub fn table(&self) -> &[BigRational] {
        &self.table
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.table.iter().all(Signed::is_positive)
    }

    pub fn zero_atoms(&self) -> Vec<usize> {
        (0..self.table.len()).filter(|&i| self.table[i].is_zero()).collect()
    }

    /// `π(φ)` for classical `φ`.
    pub fn prob(&self, f: &Formula) -> Result<BigRational, ProbError> {
        let mut s = BigRational::zero();
        for (i, w) in self.table.iter().enumerate() {
            if classical_truth(f, &self.theta, i).ok_or_else(|| ProbError::NotClassical(f.to_string()))? {
                s += w;
            }
        }
        Ok(s)
    }

    /// `π(· | φ)`, when `π(φ) > 0`.
    pub fn conditioned(&self, f: &Formula) -> Result<ClassicalProbability, ProbError> {
        let z = self.prob(f)?;
        if z.is_zero() {
            return Err(ProbError::NullCondition(f.to_string()));
        }
        let table = (0..self.table.len())
            .map(|i| {
                if classical_truth(f, &self.theta, i) == Some(true) {
                    &self.table[i] / &z
                } else {
                    BigRational::zero()
                }
            })
            .collect();
        Ok(ClassicalProbability { theta: self.theta.clone(), table })
    }

    /// `π_e(σ) = e / |Σ| + (1 - e) π(σ)`.
    pub fn perturbed(&self) -> Vec<PolyFrac> {
        let k = BigRational::new(BigInt::one(), BigInt::from(self.table.len()));
        self.table
            .iter()
            .map(|w| PolyFrac::poly(Poly::from_coeffs(vec![w.clone(), k.clone() - w])))
            .collect()
    }

    /// The input-file form.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, w) in self.table.iter().enumerate() {
            out.push_str(&format!("{} : {}\n", sigma_label(&self.theta, i), w));
        }
        out
    }
}

impl fmt::Display for ClassicalProbability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> =
            self.table.iter().enumerate().map(|(i, w)| format!("{}: {}", sigma_label(&self.theta, i), w)).collect();
        write!(f, "{}", items.join(", "))
    }
}

/// `a /\ !b` style name of Σ-atom `omega`.
pub fn sigma_label(theta: &Theta, omega: usize) -> String {
    theta
        .names()
        .iter()
        .enumerate()
        .map(|(i, n)| if omega >> i & 1 == 1 { n.to_string() } else { format!("!{n}") })
        .collect::<Vec<_>>()
        .join(" /\\ ")
}

/// The Σ-atom formula of `omega`.
pub fn sigma_formula(theta: &Theta, omega: usize) -> Formula {
    let lits: Vec<Formula> = (0..theta.len())
        .map(|i| if omega >> i & 1 == 1 { theta.atom(i) } else { Formula::not(theta.atom(i)) })
        .collect();
    Formula::and_all(&lits).expect("nonempty atom set")
}

/// The unique Σ-atom on which `text` holds.
fn sigma_index(theta: &Theta, text: &str) -> Result<usize, ProbError> {
    let f = parse(text, theta).map_err(|e| ProbError::Parse(e.to_string()))?;
    if !f.is_classical() {
        return Err(ProbError::NotClassical(text.to_string()));
    }
    let hits: Vec<usize> = (0..1usize << theta.len()).filter(|&i| classical_truth(&f, theta, i) == Some(true)).collect();
    match hits.as_slice() {
        [i] => Ok(*i),
        _ => Err(ProbError::NotSigmaAtom(text.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::super::polyfrac::ratio;
    use super::*;

    fn ab() -> Theta {
        Theta::new(&["a", "b"]).unwrap()
    }

    #[test]
    fn parse_and_defaults() {
        let pi = ClassicalProbability::parse(&ab(), "a /\\ b : 1/2\n# x\na /\\ !b : 1/4\n!a /\\ b : 1/4\n").unwrap();
        assert_eq!(pi.zero_atoms(), vec![0]);
        assert!(!pi.is_strictly_positive());
        assert_eq!(pi.prob(&parse("a", &ab()).unwrap()).unwrap(), ratio(3, 4));
        let back = ClassicalProbability::parse(&ab(), &pi.to_text()).unwrap();
        assert_eq!(back, pi);
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(matches!(ClassicalProbability::parse(&ab(), "a /\\ b : 99/100\n!a /\\ !b : 0\n"), Err(ProbError::Total(_))));
        assert!(matches!(ClassicalProbability::parse(&ab(), "a : 1\n"), Err(ProbError::NotSigmaAtom(_))));
        assert!(matches!(
            ClassicalProbability::parse(&ab(), "a /\\ b : 1/2\nb /\\ a : 1/2\n"),
            Err(ProbError::Duplicate(_))
        ));
        assert!(matches!(ClassicalProbability::parse(&ab(), "a /\\ b 1\n"), Err(ProbError::Line { line: 1, .. })));
    }

    #[test]
    fn conditioning() {
        let pi = ClassicalProbability::uniform(&ab());
        let c = pi.conditioned(&parse("b", &ab()).unwrap()).unwrap();
        assert_eq!(c.table(), &[ratio(0, 1), ratio(0, 1), ratio(1, 2), ratio(1, 2)]);
        assert!(pi.conditioned(&ab().bot()).is_err());
    }

    #[test]
    fn perturbation_sums_to_one() {
        let pi = ClassicalProbability::parse(&ab(), "a /\\ !b : 1/3\n!a /\\ b : 1/3\n!a /\\ !b : 1/3\n").unwrap();
        let pe = pi.perturbed();
        let total = pe.iter().skip(1).fold(pe[0].clone(), |s, w| s.add(w));
        assert_eq!(total, PolyFrac::constant(ratio(1, 1)));
        // the zero atom a /\ b is index 3
        assert_eq!(pe[3], PolyFrac::poly(Poly::from_coeffs(vec![ratio(0, 1), ratio(1, 4)])));
    }
}
