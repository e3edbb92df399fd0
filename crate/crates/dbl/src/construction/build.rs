use thiserror::Error;

use super::{select_condition, ConstructionError, SelectMode, Selection, Stage, VerifyOptions, FAITHFUL_MAX_ATOMS};
use crate::model::{Assignment, Elem};
use crate::syntax::{Formula, Theta};

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum BuildError {
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error("budget of {budget} atoms exceeded at |Ω| = {atoms}: processing condition {condition} would need {needed}")]
    Budget { budget: usize, atoms: usize, needed: usize, condition: String },
    #[error("formula mentions atom `{0}` outside the atom set")]
    UnknownAtom(String),
}

#[derive(Clone, Debug)]
pub struct BuildOutcome {
    pub stage: Stage,
    pub assignment: Assignment,
    /// Values of the input formulas at the final stage.
    pub values: Vec<Elem>,
    pub advances: usize,
}

/// Advances in targeted mode until every formula evaluates under the
/// canonical assignment.  Evaluation visits subformulas before their
/// parents, so the blocking condition is always an innermost one.
pub fn build_for_formulas(theta: &Theta, formulas: &[Formula], budget: usize) -> Result<BuildOutcome, BuildError> {
    build_with(theta, formulas, budget, &VerifyOptions::default())
}

pub fn build_with(
    theta: &Theta,
    formulas: &[Formula],
    budget: usize,
    opts: &VerifyOptions,
) -> Result<BuildOutcome, BuildError> {
    for f in formulas {
        if let Some(a) = f.atoms().into_iter().find(|a| !theta.contains(a)) {
            return Err(BuildError::UnknownAtom(a.to_string()));
        }
    }
    let mut stage = Stage::new(theta)?;
    let mut advances = 0;
    loop {
        let mut asg = stage.canonical_assignment();
        let mut blocked = None;
        let mut values = Vec::with_capacity(formulas.len());
        for f in formulas {
            match asg.eval(&stage, f) {
                Ok(v) => values.push(v),
                Err(u) => {
                    blocked = Some(u.condition);
                    break;
                }
            }
        }
        let Some(cond) = blocked else {
            return Ok(BuildOutcome { stage, assignment: asg, values, advances });
        };
        let b = match select_condition(&stage, &SelectMode::Targeted(cond.clone()))? {
            Selection::Condition(b) => b,
            Selection::Halt => unreachable!("targeted selection never halts"),
        };
        let needed = stage.partition_data(&b)?.next_size();
        if needed > budget {
            return Err(BuildError::Budget {
                budget,
                atoms: stage.size(),
                needed,
                condition: stage.describe_elem(&cond),
            });
        }
        stage = stage.advance_with(&b, opts, budget)?;
        advances += 1;
    }
}

/// Where a faithful build stopped.
#[derive(Clone, Debug)]
pub struct FaithfulOutcome {
    pub stage: Stage,
    /// `f` became total.
    pub halted: bool,
    /// Size of the next stage when the budget stopped the build.
    pub next_size: Option<usize>,
}

/// Advances in faithful mode while the next stage fits in `max_atoms`.
pub fn build_faithful(theta: &Theta, max_atoms: usize, opts: &VerifyOptions) -> Result<FaithfulOutcome, BuildError> {
    let mut stage = Stage::new(theta)?;
    loop {
        if stage.size() > FAITHFUL_MAX_ATOMS {
            return Ok(FaithfulOutcome { next_size: None, stage, halted: false });
        }
        let b = match select_condition(&stage, &SelectMode::Faithful)? {
            Selection::Condition(b) => b,
            Selection::Halt => return Ok(FaithfulOutcome { stage, halted: true, next_size: None }),
        };
        let needed = stage.partition_data(&b)?.next_size();
        if needed > max_atoms {
            return Ok(FaithfulOutcome { stage, halted: false, next_size: Some(needed) });
        }
        stage = stage.advance_with(&b, opts, max_atoms)?;
    }
}

impl Stage {
    /// `{i,j}` followed by the atom provenance.
    pub fn describe_elem(&self, e: &Elem) -> String {
        let pts: Vec<String> = e.ones().map(|i| self.atom_point(self.index(), i).to_string()).collect();
        format!("{} = {{{}}}", e.indices_text(), pts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn theta(names: &[&str]) -> Theta {
        Theta::new(names).unwrap()
    }

    #[test]
    fn top_needs_no_advance() {
        let th = theta(&["a", "b"]);
        let out = build_for_formulas(&th, &[th.top()], 64).unwrap();
        assert_eq!(out.advances, 0);
        assert!(out.values[0].is_full());
    }

    #[test]
    fn single_conditional_takes_one_advance() {
        let th = theta(&["a", "b"]);
        let f = parse("(b | a)", &th).unwrap();
        let out = build_for_formulas(&th, &[f], 64).unwrap();
        assert_eq!(out.advances, 1);
        let adv = &out.stage.history()[0];
        assert_eq!(adv.data.b, out.stage.xi(0));
    }

    #[test]
    fn faithful_sizes() {
        let one = build_faithful(&theta(&["a"]), 64, &VerifyOptions::default()).unwrap();
        assert!(one.halted);
        assert_eq!(one.stage.index(), 1);
        assert_eq!(one.stage.size(), 2);
        let two = build_faithful(&theta(&["a", "b"]), 32, &VerifyOptions::default()).unwrap();
        let sizes: Vec<usize> = (0..=two.stage.index()).map(|j| two.stage.size_at(j)).collect();
        assert_eq!(sizes, vec![4, 6, 10, 18]);
        assert_eq!(two.next_size, Some(34));
    }

    #[test]
    fn nested_conditionals_hit_the_budget() {
        let th = theta(&["a", "b"]);
        let f = parse("(((b | a) | (a | b)) | ((a | !b) | (b | !a)))", &th).unwrap();
        match build_for_formulas(&th, &[f], 8) {
            Err(BuildError::Budget { budget: 8, condition, .. }) => assert!(!condition.is_empty()),
            other => panic!("expected budget error, got {other:?}"),
        }
    }
}
