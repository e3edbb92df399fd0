use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{all_elements, unions_of, CheckMode, ConditionalModel, Domain, Elem};

/// Pass/fail/skip counts for one property.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AxiomTally {
    pub name: String,
    pub checked: u64,
    pub failed: u64,
    pub skipped: u64,
    pub counterexample: Option<String>,
}

impl AxiomTally {
    pub fn new(name: &str) -> AxiomTally {
        AxiomTally { name: name.to_string(), ..Default::default() }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    pub fn record(&mut self, holds: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !holds {
            self.failed += 1;
            if self.counterexample.is_none() {
                self.counterexample = Some(witness());
            }
        }
    }

    pub fn skip(&mut self) {
        self.skipped += 1;
    }
}

impl fmt::Display for AxiomTally {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<10} {:>4} checked={} failed={} skipped={}",
            self.name,
            if self.ok() { "ok" } else { "FAIL" },
            self.checked,
            self.failed,
            self.skipped
        )?;
        if let Some(c) = &self.counterexample {
            write!(f, " first counterexample: {c}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct BetaReport {
    pub mode: CheckMode,
    pub axioms: Vec<AxiomTally>,
    /// Full β5, measured but not required.
    pub extra_beta5: AxiomTally,
}

impl BetaReport {
    pub fn ok(&self) -> bool {
        self.axioms.iter().all(AxiomTally::ok)
    }

    pub fn get(&self, name: &str) -> Option<&AxiomTally> {
        self.axioms.iter().find(|a| a.name == name)
    }
}

impl fmt::Display for BetaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.mode {
            CheckMode::Exhaustive => writeln!(f, "beta axioms (exhaustive)")?,
            CheckMode::Sampled { samples, seed } => {
                writeln!(f, "beta axioms (sampled, {samples} per axiom, seed {seed})")?
            }
        }
        for a in &self.axioms {
            writeln!(f, "  {a}")?;
        }
        writeln!(f, "  extra: {}", self.extra_beta5)
    }
}

pub(crate) fn random_elem(n: usize, rng: &mut ChaCha8Rng) -> Elem {
    Elem::from_indices(n, (0..n).filter(|_| rng.gen_bool(0.5)))
}

pub(crate) fn random_in(n: usize, dom: &Domain, rng: &mut ChaCha8Rng) -> Option<Elem> {
    match dom {
        Domain::All => Some(random_elem(n, rng)),
        Domain::Empty => None,
        Domain::Blocks(blocks) => {
            let mut e = Elem::empty(n);
            for b in blocks {
                if rng.gen_bool(0.5) {
                    e.union_with(b);
                }
            }
            Some(e)
        }
    }
}

fn domain_elements(n: usize, dom: &Domain) -> Vec<Elem> {
    match dom {
        Domain::All => all_elements(n).collect(),
        Domain::Empty => Vec::new(),
        Domain::Blocks(b) => unions_of(n, b).collect(),
    }
}

/// Checks β1–β4, β5w, the intersection identity β6 and the trivial rows on
/// the defined domain of `m`.  Pairs outside the domain are skipped.
pub fn check_beta_axioms<M: ConditionalModel + ?Sized>(m: &M, mode: CheckMode) -> BetaReport {
    let n = m.atom_count();
    let conds: Vec<Elem> = m.conditions();
    let mut t_triv = AxiomTally::new("trivial");
    let mut t1 = AxiomTally::new("beta1");
    let mut t2 = AxiomTally::new("beta2");
    let mut t3 = AxiomTally::new("beta3");
    let mut t4 = AxiomTally::new("beta4");
    let mut t5w = AxiomTally::new("beta5w");
    let mut t6 = AxiomTally::new("beta6");
    let mut t5 = AxiomTally::new("beta5");

    let d = |e: &Elem| m.describe(e);

    let mut unary = |a: &Elem, b: &Elem| {
        let fb = m.cond(b, a);
        // β1
        if a.is_subset(b) && !a.is_empty() {
            match &fb {
                Some(v) => t1.record(v.is_full(), || format!("f({}, {}) = {}", d(b), d(a), d(v))),
                None => t1.skip(),
            }
        }
        // β3
        match &fb {
            Some(v) => t3.record(a.inter(v).is_subset(b), || {
                format!("A = {}, B = {}, f(B,A) = {}", d(a), d(b), d(v))
            }),
            None => t3.skip(),
        }
        // β4
        match (&fb, m.cond(&b.complement(), a)) {
            (Some(v), Some(w)) => t4.record(w == v.complement(), || {
                format!("A = {}, B = {}, f(B,A) = {}, f(~B,A) = {}", d(a), d(b), d(v), d(&w))
            }),
            _ => t4.skip(),
        }
        // β5w
        match &fb {
            Some(v) if v == b => match m.cond(b, &a.complement()) {
                Some(w) => t5w.record(&w == b, || {
                    format!("A = {}, B = {}, f(B,~A) = {}", d(a), d(b), d(&w))
                }),
                None => t5w.skip(),
            },
            Some(_) => {}
            None => t5w.skip(),
        }
        // β5, measured only
        match &fb {
            Some(v) if v == b => match m.cond(a, b) {
                Some(w) => t5.record(&w == a, || format!("A = {}, B = {}, f(A,B) = {}", d(a), d(b), d(&w))),
                None => t5.skip(),
            },
            _ => {}
        }
    };

    let mut binary = |a: &Elem, b: &Elem, c: &Elem| {
        let fb = m.cond(b, a);
        let fc = m.cond(c, a);
        match (&fb, &fc, m.cond(&b.union(c), a)) {
            (Some(x), Some(y), Some(z)) => t2.record(z.is_subset(&x.union(y)), || {
                format!("A = {}, B = {}, C = {}, f(B|C,A) = {}", d(a), d(b), d(c), d(&z))
            }),
            _ => t2.skip(),
        }
        match (&fb, &fc, m.cond(&b.inter(c), a)) {
            (Some(x), Some(y), Some(z)) => t6.record(z == x.inter(y), || {
                format!("A = {}, B = {}, C = {}, f(B&C,A) = {}", d(a), d(b), d(c), d(&z))
            }),
            _ => t6.skip(),
        }
    };

    match mode {
        CheckMode::Exhaustive => {
            for b in all_elements(n) {
                for a in [m.empty(), m.full()] {
                    match m.cond(&b, &a) {
                        Some(v) => t_triv.record(v == b, || format!("f({}, {}) = {}", d(&b), d(&a), d(&v))),
                        None => t_triv.record(false, || format!("f({}, {}) undefined", d(&b), d(&a))),
                    }
                }
            }
            for a in &conds {
                let elems = domain_elements(n, &m.domain(a));
                for b in &elems {
                    unary(a, b);
                }
                for b in &elems {
                    for c in &elems {
                        binary(a, b, c);
                    }
                }
            }
        }
        CheckMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let b = random_elem(n, &mut rng);
                let a = if rng.gen_bool(0.5) { m.empty() } else { m.full() };
                match m.cond(&b, &a) {
                    Some(v) => t_triv.record(v == b, || format!("f({}, {}) = {}", d(&b), d(&a), d(&v))),
                    None => t_triv.record(false, || format!("f({}, {}) undefined", d(&b), d(&a))),
                }
            }
            if !conds.is_empty() {
                for _ in 0..samples {
                    let a = &conds[rng.gen_range(0..conds.len())];
                    let dom = m.domain(a);
                    let Some(b) = random_in(n, &dom, &mut rng) else { continue };
                    let Some(c) = random_in(n, &dom, &mut rng) else { continue };
                    unary(a, &b);
                    binary(a, &b, &c);
                }
            }
        }
    }

    BetaReport { mode, axioms: vec![t_triv, t1, t2, t3, t4, t5w, t6], extra_beta5: t5 }
}
