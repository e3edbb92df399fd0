//! Classical leaves: sequents that are propositional tautologies once every
//! maximal conditional subformula is read as a fresh variable.

use std::collections::HashMap;

use thiserror::Error;

use crate::syntax::{Formula, Sequent};

/// Truth tables beyond this many variables are refused.
pub const MAX_LEAF_VARIABLES: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LeafError {
    #[error("a classical leaf has at most one succedent, found {0}")]
    MultiSuccedent(usize),
    #[error("{0} propositional variables exceed the limit of {MAX_LEAF_VARIABLES}")]
    TooManyVariables(usize),
    #[error("not a tautology")]
    NotTautology,
}

/// The formula a leaf must make valid: `(/\G) -> d`, `d` alone when `G`
/// is empty, and `!(/\G)` when the succedent is empty.
fn leaf_formula(target: &Sequent) -> Result<Option<Formula>, LeafError> {
    if target.succ.len() > 1 {
        return Err(LeafError::MultiSuccedent(target.succ.len()));
    }
    let ante = Formula::and_all(&target.ante);
    Ok(match (ante, target.succ.first()) {
        (None, None) => None,
        (None, Some(d)) => Some(d.clone()),
        (Some(a), Some(d)) => Some(Formula::implies(a, d.clone())),
        (Some(a), None) => Some(Formula::not(a)),
    })
}

/// Variables of an abstracted formula: atoms, metavariables and maximal
/// conditionals.  Structurally equal conditionals share a variable.
#[derive(Default)]
struct Vars {
    index: HashMap<Formula, usize>,
}

impl Vars {
    fn var(&mut self, f: &Formula) -> usize {
        let n = self.index.len();
        *self.index.entry(f.clone()).or_insert(n)
    }
}

#[derive(Debug)]
enum Prop {
    Var(usize),
    Not(Box<Prop>),
    Implies(Box<Prop>, Box<Prop>),
}

fn abstract_prop(f: &Formula, vars: &mut Vars) -> Prop {
    match f {
        Formula::Atom(_) | Formula::Meta(_) | Formula::Cond(..) => Prop::Var(vars.var(f)),
        Formula::Not(a) => Prop::Not(Box::new(abstract_prop(a, vars))),
        Formula::Implies(a, b) => Prop::Implies(Box::new(abstract_prop(a, vars)), Box::new(abstract_prop(b, vars))),
    }
}

/// The leaf formula of `target` with its variables in first-seen order.
pub fn abstract_sequent(target: &Sequent) -> Result<Option<(Formula, Vec<Formula>)>, LeafError> {
    let Some(f) = leaf_formula(target)? else { return Ok(None) };
    let mut vars = Vars::default();
    abstract_prop(&f, &mut vars);
    let mut list: Vec<(usize, Formula)> = vars.index.into_iter().map(|(f, i)| (i, f)).collect();
    list.sort_by_key(|p| p.0);
    Ok(Some((f, list.into_iter().map(|p| p.1).collect())))
}

/// Column of variable `v` in 64-row chunk `chunk`.
fn column(v: usize, chunk: usize) -> u64 {
    const PATTERNS: [u64; 6] = [
        0xAAAA_AAAA_AAAA_AAAA,
        0xCCCC_CCCC_CCCC_CCCC,
        0xF0F0_F0F0_F0F0_F0F0,
        0xFF00_FF00_FF00_FF00,
        0xFFFF_0000_FFFF_0000,
        0xFFFF_FFFF_0000_0000,
    ];
    if v < 6 {
        PATTERNS[v]
    } else if (chunk >> (v - 6)) & 1 == 1 {
        u64::MAX
    } else {
        0
    }
}

fn eval_chunk(p: &Prop, chunk: usize) -> u64 {
    match p {
        Prop::Var(v) => column(*v, chunk),
        Prop::Not(a) => !eval_chunk(a, chunk),
        Prop::Implies(a, b) => !eval_chunk(a, chunk) | eval_chunk(b, chunk),
    }
}

fn tautology(p: &Prop, nvars: usize) -> bool {
    let rows = 1usize << nvars;
    let mask = if rows >= 64 { u64::MAX } else { (1u64 << rows) - 1 };
    let chunks = rows.div_ceil(64);
    (0..chunks).all(|c| eval_chunk(p, c) & mask == mask)
}

/// True when `f` is valid with conditionals read as variables.
pub fn is_abstract_tautology(f: &Formula) -> Result<bool, LeafError> {
    let mut vars = Vars::default();
    let p = abstract_prop(f, &mut vars);
    let n = vars.index.len();
    if n > MAX_LEAF_VARIABLES {
        return Err(LeafError::TooManyVariables(n));
    }
    Ok(tautology(&p, n))
}

pub fn classical_leaf_check(target: &Sequent) -> Result<(), LeafError> {
    match leaf_formula(target)? {
        // The empty sequent is never valid.
        None => Err(LeafError::NotTautology),
        Some(f) => {
            if is_abstract_tautology(&f)? {
                Ok(())
            } else {
                Err(LeafError::NotTautology)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::syntax::{parse_sequent, Theta};

    fn th() -> Theta {
        Theta::new(&["a", "b", "c", "d"]).unwrap()
    }

    fn ok(s: &str) -> bool {
        classical_leaf_check(&parse_sequent(s, &th()).unwrap()).is_ok()
    }

    #[test]
    fn basic_leaves() {
        assert!(ok("a |- a"));
        assert!(ok("a, a -> b |- b"));
        assert!(ok("|- (a | b) \\/ !(a | b)"));
        assert!(ok("|- ((b | a) -> c) -> ((b | a) -> c)"));
        assert!(ok("a, !a |-"));
        assert!(!ok("a |- b"));
        assert!(!ok("|- (a | b) -> (b | a)"));
        assert!(!ok("|-"));
    }

    #[test]
    fn multi_succedent_rejected() {
        let s = parse_sequent("a |- a, b", &th()).unwrap();
        assert_eq!(classical_leaf_check(&s), Err(LeafError::MultiSuccedent(2)));
    }

    #[test]
    fn conditionals_are_opaque() {
        // (a | b) and (a | b /\ b) differ syntactically.
        assert!(!ok("(a | b) |- (a | b /\\ b)"));
        assert!(ok("(a | b), (a | b) -> (c | d) |- (c | d)"));
    }

    // Row-by-row evaluation, used as the oracle.
    fn naive(f: &Formula) -> bool {
        let mut vars = Vars::default();
        let p = abstract_prop(f, &mut vars);
        let n = vars.index.len();
        fn ev(p: &Prop, row: usize) -> bool {
            match p {
                Prop::Var(v) => (row >> v) & 1 == 1,
                Prop::Not(a) => !ev(a, row),
                Prop::Implies(a, b) => !ev(a, row) || ev(b, row),
            }
        }
        (0..1usize << n).all(|r| ev(&p, r))
    }

    fn formula() -> impl Strategy<Value = Formula> {
        let leaf = prop_oneof![
            Just("a"), Just("b"), Just("c"), Just("d"), Just("e"), Just("f"), Just("g"), Just("h")
        ]
        .prop_map(Formula::atom);
        leaf.prop_recursive(6, 48, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(Formula::not),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
                (inner.clone(), inner).prop_map(|(a, b)| Formula::cond(a, b)),
            ]
        })
    }

    proptest! {
        #[test]
        fn bit_parallel_matches_naive(f in formula()) {
            prop_assert_eq!(is_abstract_tautology(&f).unwrap(), naive(&f));
        }

        #[test]
        fn excluded_middle_of_anything(f in formula()) {
            prop_assert!(is_abstract_tautology(&Formula::or(f.clone(), Formula::not(f))).unwrap());
        }
    }

    #[test]
    fn wide_table() {
        // Seven variables spill into a second chunk.
        let names = ["a", "b", "c", "d", "e", "f", "g"];
        let conj = Formula::and_all(&names.iter().map(|n| Formula::atom(n)).collect::<Vec<_>>()).unwrap();
        let f = Formula::implies(conj.clone(), Formula::atom("g"));
        assert!(is_abstract_tautology(&f).unwrap());
        assert!(!is_abstract_tautology(&conj).unwrap());
    }
}
