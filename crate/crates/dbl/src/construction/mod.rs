//! The staged free model.  Stage 0 is the powerset of `{0,1}^Θ`; each
//! advance picks a condition `b`, splits the atoms into blocks `Π(i)` and
//! `Γ(i)`, replaces every atom by ordered pairs, and makes `f(·, μ(b))` and
//! `f(·, ∼μ(b))` total.  Values of `f` are recomputed from the pair
//! structure and the history; nothing is tabulated.

mod build;
mod dump;
mod select;
mod verify;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::model::{Assignment, ConditionalModel, Domain, Elem};
use crate::syntax::Theta;

pub use build::{build_faithful, build_for_formulas, BuildError, BuildOutcome, FaithfulOutcome};
pub use dump::{load_stage, DumpError};
pub use select::{classify_case, select_condition, Selection, SelectMode};
pub use build::build_with;
pub use select::{lambda, normalize, FAITHFUL_MAX_ATOMS};
pub use verify::{verify_history, verify_level, verify_stage, StageReport, VerifyOptions};

/// Default cap on `|Θ|` at stage 0.
pub const DEFAULT_MAX_THETA: usize = 3;

/// Provenance of a stage atom.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum AtomPoint {
    /// Bit `i` is the truth value of the `i`-th atom of Θ.
    Base { bits: u64, width: usize },
    Pair(Box<AtomPoint>, Box<AtomPoint>),
}

impl fmt::Display for AtomPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AtomPoint::Base { bits, width } => {
                for i in 0..*width {
                    write!(f, "{}", bits >> i & 1)?;
                }
                Ok(())
            }
            AtomPoint::Pair(a, b) => write!(f, "({a},{b})"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Case {
    /// First processing of the condition pair.
    Case1,
    /// Re-processing; `nu` is the latest earlier stage that chose it.
    Case0 { nu: usize },
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Case::Case1 => write!(f, "case1"),
            Case::Case0 { nu } => write!(f, "case0({nu})"),
        }
    }
}

/// One block pair `(Π(i), Γ(i))`, as elements of the stage being left.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Part {
    pub pi: Elem,
    pub gamma: Elem,
}

/// The data that fixes one advance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionData {
    pub b: Elem,
    pub case: Case,
    pub parts: Vec<Part>,
}

impl PartitionData {
    /// `2 Σ |Π(i)||Γ(i)|`.
    pub fn next_size(&self) -> usize {
        2 * self.parts.iter().map(|p| p.pi.len() * p.gamma.len()).sum::<usize>()
    }
}

/// Record of the advance from stage `n` to `n + 1`.
#[derive(Clone, Debug)]
pub struct Advance {
    pub n: usize,
    pub data: PartitionData,
    /// `μ(b)` at stage `n + 1`.
    pub positive: Elem,
}

/// Atoms of one stage.  For `n ≥ 1` atom `j` is the pair
/// `(parent[j], second[j])` of stage-`(n-1)` atoms.
#[derive(Clone, Debug)]
pub struct Level {
    pub size: usize,
    pub parent: Vec<usize>,
    pub second: Vec<usize>,
    pub swap: Vec<usize>,
    /// Index into the advance's parts.
    pub part: Vec<usize>,
}

/// Per-condition bookkeeping: the row `f(·, A)` was made total at stage
/// `k + 1`, with `A` the image of `μ_k(b_k)` when `positive`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Row {
    pub k: usize,
    pub positive: bool,
}

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum ConstructionError {
    #[error("atom set of size {0} exceeds the stage-0 limit {1}")]
    ThetaTooLarge(usize, usize),
    #[error("condition must not be empty or the full universe")]
    TrivialCondition,
    #[error("element belongs to a universe of {found} atoms, stage has {expected}")]
    WrongUniverse { expected: usize, found: usize },
    #[error("case 0 needs f({consequent}, {condition}) which is undefined")]
    CaseZeroUndefined { condition: String, consequent: String },
    #[error("next stage would have {0} atoms, limit is {1}")]
    TooLarge(usize, usize),
    #[error("stage verification failed:\n{0}")]
    Verification(String),
}

/// A finite partial conditional model together with its full history.
#[derive(Clone, Debug)]
pub struct Stage {
    theta: Theta,
    levels: Vec<Level>,
    history: Vec<Advance>,
    /// `rows[j]` describes the defined rows of `f_j`.
    rows: Vec<HashMap<Elem, Row>>,
}

impl Stage {
    /// Stage 0 over `{0,1}^Θ`.
    pub fn new(theta: &Theta) -> Result<Stage, ConstructionError> {
        Stage::with_limit(theta, DEFAULT_MAX_THETA)
    }

    pub fn with_limit(theta: &Theta, max_theta: usize) -> Result<Stage, ConstructionError> {
        if theta.len() > max_theta || theta.len() > 20 {
            return Err(ConstructionError::ThetaTooLarge(theta.len(), max_theta.min(20)));
        }
        let size = 1usize << theta.len();
        Ok(Stage {
            theta: theta.clone(),
            levels: vec![Level { size, parent: vec![], second: vec![], swap: vec![], part: vec![] }],
            history: Vec::new(),
            rows: vec![HashMap::new()],
        })
    }

    pub fn theta(&self) -> &Theta {
        &self.theta
    }

    /// Current stage index `n`.
    pub fn index(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn size(&self) -> usize {
        self.size_at(self.index())
    }

    pub fn size_at(&self, level: usize) -> usize {
        self.levels[level].size
    }

    pub fn level(&self, j: usize) -> &Level {
        &self.levels[j]
    }

    pub fn history(&self) -> &[Advance] {
        &self.history
    }

    pub fn rows_at(&self, level: usize) -> &HashMap<Elem, Row> {
        &self.rows[level]
    }

    pub fn atom_point(&self, level: usize, i: usize) -> AtomPoint {
        if level == 0 {
            AtomPoint::Base { bits: i as u64, width: self.theta.len() }
        } else {
            let l = &self.levels[level];
            AtomPoint::Pair(
                Box::new(self.atom_point(level - 1, l.parent[i])),
                Box::new(self.atom_point(level - 1, l.second[i])),
            )
        }
    }

    /// `μ_j(A)` for `A` at stage `j`.
    pub fn lift_once(&self, j: usize, a: &Elem) -> Elem {
        let next = &self.levels[j + 1];
        Elem::from_indices(next.size, (0..next.size).filter(|&y| a.contains(next.parent[y])))
    }

    /// Image of `a` (at stage `from`) in stage `to`.
    pub fn lift(&self, from: usize, to: usize, a: &Elem) -> Elem {
        let mut e = a.clone();
        for j in from..to {
            e = self.lift_once(j, &e);
        }
        e
    }

    /// Preimage under `μ_{j-1}` of an element at stage `j`, if it is an image.
    pub fn descend_once(&self, j: usize, b: &Elem) -> Option<Elem> {
        let l = &self.levels[j];
        let pre = Elem::from_indices(self.levels[j - 1].size, b.ones().map(|y| l.parent[y]));
        if self.lift_once(j - 1, &pre) == *b {
            Some(pre)
        } else {
            None
        }
    }

    /// Preimage of `b` (at stage `from`) in stage `to ≤ from`.
    pub fn descend(&self, from: usize, to: usize, b: &Elem) -> Option<Elem> {
        let mut e = b.clone();
        for j in (to + 1..=from).rev() {
            e = self.descend_once(j, &e)?;
        }
        Some(e)
    }

    /// The first stage at which `b` (living at `level`) has a preimage.
    pub fn rank_at(&self, level: usize, b: &Elem) -> usize {
        let mut e = b.clone();
        let mut j = level;
        while j > 0 {
            match self.descend_once(j, &e) {
                Some(p) => {
                    e = p;
                    j -= 1;
                }
                None => break,
            }
        }
        j
    }

    pub fn rank(&self, b: &Elem) -> usize {
        self.rank_at(self.index(), b)
    }

    /// `T` on a stage-`level` element (`level ≥ 1`).
    pub fn swap_elem(&self, level: usize, c: &Elem) -> Elem {
        let l = &self.levels[level];
        Elem::from_indices(l.size, c.ones().map(|x| l.swap[x]))
    }

    /// `f_level(b, a)`.
    pub fn apply_f_at(&self, level: usize, b: &Elem, a: &Elem) -> Option<Elem> {
        if a.is_trivial() {
            return Some(b.clone());
        }
        let row = *self.rows[level].get(a)?;
        let k1 = row.k + 1;
        let c = self.descend(level, k1, b)?;
        let pos = &self.history[row.k].positive;
        let region = if row.positive { pos.clone() } else { pos.complement() };
        let kept = c.inter(&region);
        let value = kept.union(&self.swap_elem(k1, &kept));
        Some(self.lift(k1, level, &value))
    }

    /// `f_n(b, a)` at the current stage.
    pub fn apply_f(&self, b: &Elem, a: &Elem) -> Option<Elem> {
        self.apply_f_at(self.index(), b, a)
    }

    pub fn domain_at(&self, level: usize, a: &Elem) -> Domain {
        if a.is_trivial() {
            return Domain::All;
        }
        match self.rows[level].get(a) {
            None => Domain::Empty,
            Some(row) if row.k + 1 == level => Domain::All,
            Some(row) => {
                let k1 = row.k + 1;
                let n0 = self.levels[k1].size;
                Domain::Blocks((0..n0).map(|i| self.lift(k1, level, &Elem::singleton(n0, i))).collect())
            }
        }
    }

    pub fn conditions_at(&self, level: usize) -> Vec<Elem> {
        let n = self.levels[level].size;
        let mut out = vec![Elem::empty(n), Elem::full(n)];
        let mut rest: Vec<Elem> = self.rows[level].keys().cloned().collect();
        rest.sort();
        out.extend(rest);
        out
    }

    /// `ξ_θ = {ω ∈ Ω₀ : δ_θ(ω) = 1}`.
    pub fn xi(&self, atom: usize) -> Elem {
        let size = self.levels[0].size;
        Elem::from_indices(size, (0..size).filter(|p| p >> atom & 1 == 1))
    }

    /// `θ ↦` image of `ξ_θ` at the current stage.
    pub fn canonical_map(&self) -> BTreeMap<Arc<str>, Elem> {
        self.theta
            .names()
            .iter()
            .enumerate()
            .map(|(i, name)| (name.clone(), self.lift(0, self.index(), &self.xi(i))))
            .collect()
    }

    pub fn canonical_assignment(&self) -> Assignment {
        Assignment::new(self.canonical_map())
    }

    /// Read-only view of an earlier stage.
    pub fn view(&self, level: usize) -> LevelView<'_> {
        LevelView { stage: self, level }
    }

    fn check_universe(&self, level: usize, e: &Elem) -> Result<(), ConstructionError> {
        let expected = self.levels[level].size;
        if e.universe_size() != expected {
            return Err(ConstructionError::WrongUniverse { expected, found: e.universe_size() });
        }
        Ok(())
    }

    /// Computes `I`, `Π` and `Γ` for condition `b` at the current stage.
    pub fn partition_data(&self, b: &Elem) -> Result<PartitionData, ConstructionError> {
        let n = self.index();
        self.check_universe(n, b)?;
        if b.is_trivial() {
            return Err(ConstructionError::TrivialCondition);
        }
        let case = classify_case(self, b);
        // Case 0 keeps the orientation of the earlier choice.
        let b = match case {
            Case::Case0 { nu } => self.lift(nu, n, &self.history[nu].data.b),
            Case::Case1 => b.clone(),
        };
        let b = &b;
        let parts = match case {
            Case::Case1 => vec![Part { pi: b.clone(), gamma: b.complement() }],
            Case::Case0 { nu } => {
                let nb = b.complement();
                let pos = &self.history[nu].positive;
                let top = nu + 1;
                let width = self.levels[top].size;
                let lifted: Vec<Elem> =
                    (0..width).map(|i| self.lift(top, n, &Elem::singleton(width, i))).collect();
                let mut parts = Vec::new();
                let mut pi_cache: HashMap<usize, Elem> = HashMap::new();
                let mut gamma_cache: HashMap<usize, Elem> = HashMap::new();
                for w in pos.ones() {
                    for w2 in pos.complement().ones() {
                        let f_neg = match pi_cache.get(&w2) {
                            Some(v) => v.clone(),
                            None => {
                                let v = self.apply_f(&lifted[w2], &nb).ok_or_else(|| {
                                    ConstructionError::CaseZeroUndefined {
                                        condition: nb.to_string(),
                                        consequent: lifted[w2].to_string(),
                                    }
                                })?;
                                pi_cache.insert(w2, v.clone());
                                v
                            }
                        };
                        let f_pos = match gamma_cache.get(&w) {
                            Some(v) => v.clone(),
                            None => {
                                let v = self.apply_f(&lifted[w], b).ok_or_else(|| {
                                    ConstructionError::CaseZeroUndefined {
                                        condition: b.to_string(),
                                        consequent: lifted[w].to_string(),
                                    }
                                })?;
                                gamma_cache.insert(w, v.clone());
                                v
                            }
                        };
                        let pi = f_neg.inter(&lifted[w]);
                        let gamma = f_pos.inter(&lifted[w2]);
                        if !pi.is_empty() || !gamma.is_empty() {
                            parts.push(Part { pi, gamma });
                        }
                    }
                }
                parts
            }
        };
        Ok(PartitionData { b: b.clone(), case, parts })
    }

    /// Advances with condition `b`, then verifies the new stage.
    pub fn advance(&self, b: &Elem) -> Result<Stage, ConstructionError> {
        self.advance_with(b, &VerifyOptions::default(), usize::MAX)
    }

    pub fn advance_with(
        &self,
        b: &Elem,
        opts: &VerifyOptions,
        max_atoms: usize,
    ) -> Result<Stage, ConstructionError> {
        let data = self.partition_data(b)?;
        let size = data.next_size();
        if size > max_atoms {
            return Err(ConstructionError::TooLarge(size, max_atoms));
        }
        let next = self.advance_from(data);
        let report = verify_stage(&next, opts);
        if !report.ok() {
            return Err(ConstructionError::Verification(report.to_string()));
        }
        Ok(next)
    }

    /// Builds the next stage from explicit partition data without checks.
    pub fn advance_from(&self, data: PartitionData) -> Stage {
        let n = self.index();
        let mut pairs: Vec<(usize, usize, usize)> = Vec::new();
        for (i, p) in data.parts.iter().enumerate() {
            for x in p.pi.ones() {
                for y in p.gamma.ones() {
                    pairs.push((x, y, i));
                    pairs.push((y, x, i));
                }
            }
        }
        pairs.sort();
        let size = pairs.len();
        let index: HashMap<(usize, usize), usize> =
            pairs.iter().enumerate().map(|(j, &(x, y, _))| ((x, y), j)).collect();
        let level = Level {
            size,
            parent: pairs.iter().map(|p| p.0).collect(),
            second: pairs.iter().map(|p| p.1).collect(),
            swap: pairs.iter().enumerate().map(|(j, &(x, y, _))| *index.get(&(y, x)).unwrap_or(&j)).collect(),
            part: pairs.iter().map(|p| p.2).collect(),
        };
        let mut next = self.clone();
        next.levels.push(level);
        let positive = next.lift_once(n, &data.b);
        let mut rows: HashMap<Elem, Row> =
            self.rows[n].iter().map(|(a, r)| (next.lift_once(n, a), *r)).collect();
        rows.insert(positive.clone(), Row { k: n, positive: true });
        rows.insert(positive.complement(), Row { k: n, positive: false });
        next.rows.push(rows);
        next.history.push(Advance { n, data, positive });
        next
    }
}

/// A stage seen at one of its levels.
#[derive(Clone, Copy)]
pub struct LevelView<'s> {
    pub stage: &'s Stage,
    pub level: usize,
}

impl<'s> ConditionalModel for LevelView<'s> {
    fn atom_count(&self) -> usize {
        self.stage.size_at(self.level)
    }

    fn cond(&self, b: &Elem, a: &Elem) -> Option<Elem> {
        self.stage.apply_f_at(self.level, b, a)
    }

    fn conditions(&self) -> Vec<Elem> {
        self.stage.conditions_at(self.level)
    }

    fn domain(&self, a: &Elem) -> Domain {
        self.stage.domain_at(self.level, a)
    }

    fn atom_label(&self, i: usize) -> String {
        self.stage.atom_point(self.level, i).to_string()
    }
}

impl ConditionalModel for Stage {
    fn atom_count(&self) -> usize {
        self.size()
    }

    fn cond(&self, b: &Elem, a: &Elem) -> Option<Elem> {
        self.apply_f(b, a)
    }

    fn conditions(&self) -> Vec<Elem> {
        self.conditions_at(self.index())
    }

    fn domain(&self, a: &Elem) -> Domain {
        self.domain_at(self.index(), a)
    }

    fn atom_label(&self, i: usize) -> String {
        self.atom_point(self.index(), i).to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> Stage {
        Stage::new(&Theta::new(&["a"]).unwrap()).unwrap()
    }

    #[test]
    fn stage_zero_sizes() {
        assert_eq!(one().size(), 2);
        let s = Stage::new(&Theta::new(&["a", "b"]).unwrap()).unwrap();
        assert_eq!(s.size(), 4);
        assert!(Stage::new(&Theta::new(&["a", "b", "c", "d"]).unwrap()).is_err());
    }

    #[test]
    fn one_atom_walkthrough() {
        let s0 = one();
        let u = Elem::singleton(2, 0);
        let s1 = s0.advance(&u).unwrap();
        assert_eq!(s1.size(), 2);
        // atoms sorted by (first, second): (u,v) then (v,u)
        assert_eq!(s1.atom_point(1, 0).to_string(), "(0,1)");
        assert_eq!(s1.atom_point(1, 1).to_string(), "(1,0)");
        let uv = Elem::singleton(2, 0);
        let vu = Elem::singleton(2, 1);
        assert_eq!(s1.lift(0, 1, &u), uv);
        assert_eq!(s1.apply_f(&uv, &uv), Some(Elem::full(2)));
        assert_eq!(s1.apply_f(&vu, &uv), Some(Elem::empty(2)));
        assert_eq!(s1.apply_f(&Elem::full(2), &uv), Some(Elem::full(2)));
        assert_eq!(s1.apply_f(&vu, &vu), Some(Elem::full(2)));
        assert_eq!(s1.canonical_map().get("a"), Some(&vu));
    }

    #[test]
    fn two_atoms_first_advance_has_eight_atoms_for_half_condition() {
        let s0 = Stage::new(&Theta::new(&["a", "b"]).unwrap()).unwrap();
        let b = s0.xi(0);
        let data = s0.partition_data(&b).unwrap();
        assert_eq!(data.case, Case::Case1);
        assert_eq!(data.next_size(), 8);
        let s1 = s0.advance(&b).unwrap();
        assert_eq!(s1.size(), 8);
    }

    #[test]
    fn ranks_follow_first_occurrence() {
        let s0 = Stage::new(&Theta::new(&["a", "b"]).unwrap()).unwrap();
        let s1 = s0.advance(&s0.xi(0)).unwrap();
        assert_eq!(s1.rank(&s1.lift(0, 1, &s0.xi(1))), 0);
        assert_eq!(s1.rank(&Elem::singleton(8, 0)), 1);
    }
}
