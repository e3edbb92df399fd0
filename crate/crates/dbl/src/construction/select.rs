use super::{Case, ConstructionError, Stage};
use crate::model::{all_elements, Elem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SelectMode {
    /// Minimize the age score over all elements.
    Faithful,
    /// Use the given condition.
    Targeted(Elem),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Selection {
    Condition(Elem),
    /// `f` is total; nothing left to process.
    Halt,
}

/// Faithful selection enumerates the powerset; beyond this many atoms it
/// refuses.
pub const FAITHFUL_MAX_ATOMS: usize = 22;

/// `λ(B) = r(B) + min{ r(A) : f(A, B) undefined }`, `None` for `∞`.
pub fn lambda(s: &Stage, b: &Elem) -> Option<usize> {
    if b.is_trivial() {
        return None;
    }
    let n = s.index();
    let rb = s.rank(b);
    match s.rows_at(n).get(b) {
        None => Some(rb),
        Some(row) => {
            // Undefined partners are exactly the elements first created
            // after stage k + 1.
            (row.k + 2..=n).find(|&j| s.size_at(j) > s.size_at(j - 1)).map(|j| rb + j)
        }
    }
}

/// The latest earlier advance whose condition pair matches `{b, ∼b}`.
fn matching_advance(s: &Stage, b: &Elem) -> Option<(usize, Elem)> {
    let n = s.index();
    let nb = b.complement();
    s.history().iter().rev().find_map(|adv| {
        let img = s.lift(adv.n, n, &adv.data.b);
        (img == *b || img == nb).then_some((adv.n, img))
    })
}

/// Replaces `b` by the image of an earlier choice when they agree up to
/// complement.
pub fn normalize(s: &Stage, b: &Elem) -> Elem {
    match matching_advance(s, b) {
        Some((_, img)) => img,
        None => b.clone(),
    }
}

pub fn classify_case(s: &Stage, b: &Elem) -> Case {
    match matching_advance(s, b) {
        Some((nu, _)) => Case::Case0 { nu },
        None => Case::Case1,
    }
}

pub fn select_condition(s: &Stage, mode: &SelectMode) -> Result<Selection, ConstructionError> {
    match mode {
        SelectMode::Targeted(e) => {
            if e.universe_size() != s.size() {
                return Err(ConstructionError::WrongUniverse { expected: s.size(), found: e.universe_size() });
            }
            if e.is_trivial() {
                return Err(ConstructionError::TrivialCondition);
            }
            Ok(Selection::Condition(normalize(s, e)))
        }
        SelectMode::Faithful => {
            if s.size() > FAITHFUL_MAX_ATOMS {
                return Err(ConstructionError::TooLarge(s.size(), FAITHFUL_MAX_ATOMS));
            }
            let mut best: Option<(usize, Elem)> = None;
            for b in all_elements(s.size()) {
                let Some(l) = lambda(s, &b) else { continue };
                let better = match &best {
                    None => true,
                    Some((bl, be)) => l < *bl || (l == *bl && b < *be),
                };
                if better {
                    best = Some((l, b));
                }
            }
            Ok(match best {
                None => Selection::Halt,
                Some((_, b)) => Selection::Condition(normalize(s, &b)),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Theta;

    #[test]
    fn one_atom_faithful_picks_u_then_halts() {
        let s0 = Stage::new(&Theta::new(&["a"]).unwrap()).unwrap();
        let b0 = match select_condition(&s0, &SelectMode::Faithful).unwrap() {
            Selection::Condition(b) => b,
            Selection::Halt => panic!("stage 0 cannot halt"),
        };
        assert_eq!(b0, Elem::singleton(2, 0));
        assert_eq!(classify_case(&s0, &b0), Case::Case1);
        let s1 = s0.advance(&b0).unwrap();
        assert_eq!(select_condition(&s1, &SelectMode::Faithful).unwrap(), Selection::Halt);
    }

    #[test]
    fn coherence_flips_to_earlier_orientation() {
        let s0 = Stage::new(&Theta::new(&["a", "b"]).unwrap()).unwrap();
        let b0 = s0.xi(0);
        let s1 = s0.advance(&b0).unwrap();
        let img = s1.lift(0, 1, &b0);
        let sel = select_condition(&s1, &SelectMode::Targeted(img.complement())).unwrap();
        assert_eq!(sel, Selection::Condition(img.clone()));
        assert_eq!(classify_case(&s1, &img), Case::Case0 { nu: 0 });
    }

    #[test]
    fn trivial_target_rejected() {
        let s0 = Stage::new(&Theta::new(&["a"]).unwrap()).unwrap();
        assert_eq!(
            select_condition(&s0, &SelectMode::Targeted(Elem::full(2))),
            Err(ConstructionError::TrivialCondition)
        );
    }
}
