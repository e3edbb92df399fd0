use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use super::{ConditionalModel, Elem};
use crate::syntax::{Formula, Theta};

/// Evaluation reached `f(B, A)` outside the defined domain.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("f undefined at consequent {consequent} under condition {condition}")]
pub struct Undefined {
    pub condition: Elem,
    pub consequent: Elem,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AssignmentError {
    #[error("atom `{0}` has no value")]
    MissingAtom(String),
    #[error("atom `{0}` is not in the declared atom set")]
    UnknownAtom(String),
    #[error("value for `{0}` lives in a universe of the wrong size")]
    WrongUniverse(String),
}

/// An atom map extended homomorphically over all formulas.
#[derive(Clone, PartialEq, Eq)]
pub struct Assignment {
    map: BTreeMap<Arc<str>, Elem>,
    memo: HashMap<Formula, Result<Elem, Undefined>>,
}

impl fmt::Debug for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.map.iter()).finish()
    }
}

impl Assignment {
    pub fn new(map: BTreeMap<Arc<str>, Elem>) -> Assignment {
        Assignment { map, memo: HashMap::new() }
    }

    /// Checks that `map` is total on `theta` and sized for `m`.
    pub fn extend<M: ConditionalModel + ?Sized>(
        m: &M,
        theta: &Theta,
        map: BTreeMap<Arc<str>, Elem>,
    ) -> Result<Assignment, AssignmentError> {
        for k in map.keys() {
            if !theta.contains(k) {
                return Err(AssignmentError::UnknownAtom(k.to_string()));
            }
        }
        for name in theta.names() {
            match map.get(name) {
                None => return Err(AssignmentError::MissingAtom(name.to_string())),
                Some(e) if e.universe_size() != m.atom_count() => {
                    return Err(AssignmentError::WrongUniverse(name.to_string()))
                }
                _ => {}
            }
        }
        Ok(Assignment::new(map))
    }

    pub fn atom_map(&self) -> &BTreeMap<Arc<str>, Elem> {
        &self.map
    }

    pub fn get(&self, name: &str) -> Option<&Elem> {
        self.map.get(name)
    }

    /// Value of `phi`; memoized per subformula.
    pub fn eval<M: ConditionalModel + ?Sized>(&mut self, m: &M, phi: &Formula) -> Result<Elem, Undefined> {
        if let Some(v) = self.memo.get(phi) {
            return v.clone();
        }
        let v = self.compute(m, phi);
        if !matches!(phi, Formula::Atom(_)) {
            self.memo.insert(phi.clone(), v.clone());
        }
        v
    }

    /// Like `eval`, without touching the cache.
    pub fn eval_fresh<M: ConditionalModel + ?Sized>(&self, m: &M, phi: &Formula) -> Result<Elem, Undefined> {
        match phi {
            Formula::Atom(a) => Ok(self.atom_value(m, a)),
            Formula::Meta(_) => Ok(m.empty()),
            Formula::Not(a) => Ok(self.eval_fresh(m, a)?.complement()),
            Formula::Implies(a, b) => {
                let x = self.eval_fresh(m, a)?;
                let y = self.eval_fresh(m, b)?;
                Ok(x.complement().union(&y))
            }
            Formula::Cond(psi, phi) => {
                let b = self.eval_fresh(m, psi)?;
                let a = self.eval_fresh(m, phi)?;
                m.cond(&b, &a).ok_or(Undefined { condition: a, consequent: b })
            }
        }
    }

    fn atom_value<M: ConditionalModel + ?Sized>(&self, m: &M, a: &str) -> Elem {
        // Atoms without a value denote the empty element; `extend` rules this
        // out for declared atom sets.
        self.map.get(a).cloned().unwrap_or_else(|| m.empty())
    }

    fn compute<M: ConditionalModel + ?Sized>(&mut self, m: &M, phi: &Formula) -> Result<Elem, Undefined> {
        match phi {
            Formula::Atom(a) => Ok(self.atom_value(m, a)),
            Formula::Meta(_) => Ok(m.empty()),
            Formula::Not(a) => Ok(self.eval(m, a)?.complement()),
            Formula::Implies(a, b) => {
                let x = self.eval(m, a)?;
                let y = self.eval(m, b)?;
                Ok(x.complement().union(&y))
            }
            Formula::Cond(psi, phi) => {
                let b = self.eval(m, psi)?;
                let a = self.eval(m, phi)?;
                m.cond(&b, &a).ok_or(Undefined { condition: a, consequent: b })
            }
        }
    }
}
