//! Conditional models: a powerset algebra over a finite atom list together
//! with a partial conditional operator `f(B, A)`.

mod beta;
mod elem;
mod entails;
mod eval;

use std::collections::HashMap;

pub use beta::{check_beta_axioms, AxiomTally, BetaReport};
pub(crate) use beta::{random_elem, random_in};
pub use elem::{all_elements, unions_of, Elem};
pub use entails::{
    check_soundness, entails, entails_with, EntailReport, SoundnessEntry, SoundnessReport, Verdict,
};
pub use eval::{Assignment, Undefined};

/// Where `f(·, A)` is defined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Domain {
    /// Every element.
    All,
    /// Exactly the unions of these pairwise disjoint blocks.
    Blocks(Vec<Elem>),
    /// Nowhere.
    Empty,
}

impl Domain {
    pub fn contains(&self, b: &Elem) -> bool {
        match self {
            Domain::All => true,
            Domain::Empty => false,
            Domain::Blocks(blocks) => blocks.iter().all(|k| k.is_subset(b) || k.is_disjoint(b)),
        }
    }

    /// log2 of the domain size.
    pub fn log_size(&self, atoms: usize) -> usize {
        match self {
            Domain::All => atoms,
            Domain::Blocks(b) => b.len(),
            Domain::Empty => 0,
        }
    }
}

/// A Boolean algebra of atom subsets with a partial conditional operator.
pub trait ConditionalModel {
    fn atom_count(&self) -> usize;

    /// `f(b, a)`, or `None` where undefined.
    fn cond(&self, b: &Elem, a: &Elem) -> Option<Elem>;

    /// Every condition `A` whose row `f(·, A)` is defined somewhere,
    /// including the trivial ones.
    fn conditions(&self) -> Vec<Elem>;

    fn domain(&self, a: &Elem) -> Domain;

    fn atom_label(&self, i: usize) -> String {
        format!("w{i}")
    }

    fn empty(&self) -> Elem {
        Elem::empty(self.atom_count())
    }

    fn full(&self) -> Elem {
        Elem::full(self.atom_count())
    }

    fn describe(&self, e: &Elem) -> String {
        let v: Vec<String> = e.ones().map(|i| self.atom_label(i)).collect();
        format!("{{{}}}", v.join(", "))
    }
}

/// A model given by an explicit table of rows.  Rows are total on their
/// condition; `f(B, ∅)` and `f(B, Ω)` are always `B`.
#[derive(Clone, Debug)]
pub struct TableModel {
    atoms: usize,
    rows: HashMap<Elem, HashMap<Elem, Elem>>,
}

impl TableModel {
    pub fn new(atoms: usize) -> TableModel {
        TableModel { atoms, rows: HashMap::new() }
    }

    pub fn set(&mut self, b: Elem, a: Elem, value: Elem) {
        self.rows.entry(a).or_default().insert(b, value);
    }

    /// Copies every defined row of `m` with at most `2^max_log` entries.
    pub fn tabulate<M: ConditionalModel + ?Sized>(m: &M, max_log: usize) -> TableModel {
        let n = m.atom_count();
        let mut t = TableModel::new(n);
        for a in m.conditions() {
            if a.is_trivial() {
                continue;
            }
            let dom = m.domain(&a);
            let blocks = match &dom {
                Domain::All => (0..n).map(|i| Elem::singleton(n, i)).collect(),
                Domain::Blocks(b) => b.clone(),
                Domain::Empty => continue,
            };
            if blocks.len() > max_log {
                continue;
            }
            for b in unions_of(n, &blocks) {
                if let Some(v) = m.cond(&b, &a) {
                    t.set(b, a.clone(), v);
                }
            }
        }
        t
    }
}

impl ConditionalModel for TableModel {
    fn atom_count(&self) -> usize {
        self.atoms
    }

    fn cond(&self, b: &Elem, a: &Elem) -> Option<Elem> {
        if a.is_trivial() {
            return Some(b.clone());
        }
        self.rows.get(a).and_then(|r| r.get(b)).cloned()
    }

    fn conditions(&self) -> Vec<Elem> {
        let mut out = vec![self.empty(), self.full()];
        let mut rest: Vec<Elem> = self.rows.keys().cloned().collect();
        rest.sort();
        out.extend(rest);
        out
    }

    fn domain(&self, a: &Elem) -> Domain {
        if a.is_trivial() {
            return Domain::All;
        }
        match self.rows.get(a) {
            None => Domain::Empty,
            Some(r) if r.len() == 1 << self.atoms => Domain::All,
            Some(r) => {
                // Atoms of the row's Boolean subalgebra.
                let n = self.atoms;
                let mut blocks: Vec<Elem> = Vec::new();
                let mut covered = Elem::empty(n);
                for i in 0..n {
                    if covered.contains(i) {
                        continue;
                    }
                    let mut block = Elem::full(n);
                    for b in r.keys() {
                        block = if b.contains(i) { block.inter(b) } else { block.minus(b) };
                    }
                    covered.union_with(&block);
                    blocks.push(block);
                }
                Domain::Blocks(blocks)
            }
        }
    }
}

/// Wraps a model and replaces selected values of `f`.
pub struct Overridden<'m, M: ConditionalModel + ?Sized> {
    pub inner: &'m M,
    pub patches: HashMap<(Elem, Elem), Elem>,
}

impl<'m, M: ConditionalModel + ?Sized> Overridden<'m, M> {
    pub fn new(inner: &'m M) -> Self {
        Overridden { inner, patches: HashMap::new() }
    }

    /// Sets `f(b, a) = value`.
    pub fn patch(mut self, b: Elem, a: Elem, value: Elem) -> Self {
        self.patches.insert((b, a), value);
        self
    }
}

impl<'m, M: ConditionalModel + ?Sized> ConditionalModel for Overridden<'m, M> {
    fn atom_count(&self) -> usize {
        self.inner.atom_count()
    }

    fn cond(&self, b: &Elem, a: &Elem) -> Option<Elem> {
        if let Some(v) = self.patches.get(&(b.clone(), a.clone())) {
            return Some(v.clone());
        }
        self.inner.cond(b, a)
    }

    fn conditions(&self) -> Vec<Elem> {
        self.inner.conditions()
    }

    fn domain(&self, a: &Elem) -> Domain {
        self.inner.domain(a)
    }

    fn atom_label(&self, i: usize) -> String {
        self.inner.atom_label(i)
    }
}

/// How many cases a check visits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckMode {
    Exhaustive,
    Sampled { samples: usize, seed: u64 },
}

impl CheckMode {
    pub fn seed(&self) -> Option<u64> {
        match self {
            CheckMode::Exhaustive => None,
            CheckMode::Sampled { seed, .. } => Some(*seed),
        }
    }
}
