use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::beta::{random_elem, random_in};
use super::{CheckMode, ConditionalModel, Elem, Assignment};
use crate::syntax::Sequent;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    /// A falsifying atom map.
    Fails(Vec<(String, Elem)>),
    /// Every visited assignment was skipped.
    Undecided,
}

#[derive(Clone, Debug)]
pub struct EntailReport {
    pub verdict: Verdict,
    pub checked: u64,
    pub skipped: u64,
    pub mode: CheckMode,
}

impl EntailReport {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    pub fn fails(&self) -> bool {
        matches!(self.verdict, Verdict::Fails(_))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("exhaustive entailment needs {needed} assignments, budget is {budget}")]
pub struct BudgetExceeded {
    pub needed: u128,
    pub budget: u128,
}

/// Default cap on enumerated assignments.
pub const DEFAULT_BUDGET: u128 = 1 << 22;

pub fn entails<M: ConditionalModel + ?Sized>(
    m: &M,
    s: &Sequent,
    mode: CheckMode,
) -> Result<EntailReport, BudgetExceeded> {
    entails_with(m, s, mode, DEFAULT_BUDGET)
}

/// Decides `Γ ⊨ Δ` over the visited assignments: whenever every antecedent
/// is `Ω`, some succedent must be `Ω`.  Assignments where any formula is
/// undefined are skipped.
pub fn entails_with<M: ConditionalModel + ?Sized>(
    m: &M,
    s: &Sequent,
    mode: CheckMode,
    budget: u128,
) -> Result<EntailReport, BudgetExceeded> {
    let atoms: Vec<Arc<str>> = s.atoms();
    let n = m.atom_count();
    let mut checked = 0u64;
    let mut skipped = 0u64;

    let mut visit = |map: BTreeMap<Arc<str>, Elem>| -> Option<Verdict> {
        let mut h = Assignment::new(map);
        let mut ante_undefined = false;
        for g in &s.ante {
            match h.eval(m, g) {
                Ok(v) if v.is_full() => {}
                Ok(_) => {
                    checked += 1;
                    return None;
                }
                Err(_) => ante_undefined = true,
            }
        }
        if ante_undefined {
            skipped += 1;
            return None;
        }
        let mut any_undefined = false;
        for d in &s.succ {
            match h.eval(m, d) {
                Ok(v) if v.is_full() => {
                    checked += 1;
                    return None;
                }
                Ok(_) => {}
                Err(_) => any_undefined = true,
            }
        }
        if any_undefined {
            skipped += 1;
            return None;
        }
        checked += 1;
        let w = h.atom_map().iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
        Some(Verdict::Fails(w))
    };

    let mut failure = None;
    match mode {
        CheckMode::Exhaustive => {
            let per = 1u128 << n.min(100);
            let needed = per.checked_pow(atoms.len() as u32).unwrap_or(u128::MAX);
            if n >= 64 || needed > budget {
                return Err(BudgetExceeded { needed, budget });
            }
            let per = per as u64;
            let k = atoms.len();
            let mut digits = vec![0u64; k];
            'outer: loop {
                let map = atoms
                    .iter()
                    .zip(&digits)
                    .map(|(a, &p)| (a.clone(), Elem::from_pattern(n, p)))
                    .collect();
                if let Some(v) = visit(map) {
                    failure = Some(v);
                    break;
                }
                let mut i = 0;
                loop {
                    if i == k {
                        break 'outer;
                    }
                    digits[i] += 1;
                    if digits[i] < per {
                        break;
                    }
                    digits[i] = 0;
                    i += 1;
                }
            }
        }
        CheckMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let conds: Vec<Elem> = m.conditions();
            let nontrivial: Vec<Elem> = conds.iter().filter(|c| !c.is_trivial()).cloned().collect();
            for _ in 0..samples {
                let map = atoms
                    .iter()
                    .map(|a| (a.clone(), sample_value(m, n, &conds, &nontrivial, &mut rng)))
                    .collect();
                if let Some(v) = visit(map) {
                    failure = Some(v);
                    break;
                }
            }
        }
    }
    let verdict = match failure {
        Some(v) => v,
        None if checked == 0 => Verdict::Undecided,
        None => Verdict::Holds,
    };
    Ok(EntailReport { verdict, checked, skipped, mode })
}

/// Mixes conditions, members of defined rows and uniform elements so that
/// nested conditionals are often defined.
fn sample_value<M: ConditionalModel + ?Sized>(
    m: &M,
    n: usize,
    conds: &[Elem],
    nontrivial: &[Elem],
    rng: &mut ChaCha8Rng,
) -> Elem {
    let r: f64 = rng.gen();
    if r < 0.4 && !conds.is_empty() {
        conds[rng.gen_range(0..conds.len())].clone()
    } else if r < 0.75 && !nontrivial.is_empty() {
        let a = &nontrivial[rng.gen_range(0..nontrivial.len())];
        random_in(n, &m.domain(a), rng).unwrap_or_else(|| random_elem(n, rng))
    } else {
        random_elem(n, rng)
    }
}

#[derive(Clone, Debug)]
pub struct SoundnessEntry {
    pub name: String,
    pub sequent: Sequent,
    pub report: EntailReport,
}

#[derive(Clone, Debug, Default)]
pub struct SoundnessReport {
    pub entries: Vec<SoundnessEntry>,
    /// Sequents that could not be checked exhaustively within budget.
    pub over_budget: Vec<String>,
}

impl SoundnessReport {
    pub fn violations(&self) -> Vec<&SoundnessEntry> {
        self.entries.iter().filter(|e| e.report.fails()).collect()
    }

    pub fn total_skips(&self) -> u64 {
        self.entries.iter().map(|e| e.report.skipped).sum()
    }
}

impl fmt::Display for SoundnessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            let v = match &e.report.verdict {
                Verdict::Holds => "holds".to_string(),
                Verdict::Undecided => "undecided".to_string(),
                Verdict::Fails(w) => format!(
                    "FAILS at {}",
                    w.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
                ),
            };
            writeln!(f, "  {:<32} {} (checked {}, skipped {})", e.name, v, e.report.checked, e.report.skipped)?;
        }
        for o in &self.over_budget {
            writeln!(f, "  {o:<32} over budget")?;
        }
        Ok(())
    }
}

/// Runs `entails` on each named sequent.
pub fn check_soundness<M: ConditionalModel + ?Sized>(
    m: &M,
    sequents: &[(String, Sequent)],
    mode: CheckMode,
) -> SoundnessReport {
    let mut out = SoundnessReport::default();
    for (name, s) in sequents {
        match entails(m, s, mode) {
            Ok(report) => out.entries.push(SoundnessEntry { name: name.clone(), sequent: s.clone(), report }),
            Err(_) => out.over_budget.push(name.clone()),
        }
    }
    out
}
