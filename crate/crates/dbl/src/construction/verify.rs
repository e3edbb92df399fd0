use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Stage;
use crate::model::{
    all_elements, check_beta_axioms, random_elem, random_in, unions_of, AxiomTally, BetaReport, CheckMode,
    ConditionalModel, Domain, Elem,
};

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Exhaustive checks up to this many atoms, sampling beyond.
    pub exhaustive_atoms: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { exhaustive_atoms: 8, samples: 10_000, seed: 0x5eed }
    }
}

impl VerifyOptions {
    fn mode_for(&self, atoms: usize, salt: u64) -> CheckMode {
        if atoms <= self.exhaustive_atoms {
            CheckMode::Exhaustive
        } else {
            CheckMode::Sampled { samples: self.samples, seed: self.seed ^ salt }
        }
    }
}

#[derive(Clone, Debug)]
pub struct StageReport {
    pub level: usize,
    pub atoms: usize,
    pub checks: Vec<AxiomTally>,
    pub beta: BetaReport,
}

impl StageReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(AxiomTally::ok) && self.beta.ok()
    }

    pub fn violations(&self) -> u64 {
        self.checks.iter().map(|c| c.failed).sum::<u64>() + self.beta.axioms.iter().map(|c| c.failed).sum::<u64>()
    }

    pub fn get(&self, name: &str) -> Option<&AxiomTally> {
        self.checks.iter().find(|c| c.name == name).or_else(|| self.beta.get(name))
    }
}

impl fmt::Display for StageReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "stage {} ({} atoms): {}", self.level, self.atoms, if self.ok() { "ok" } else { "FAILED" })?;
        for c in &self.checks {
            writeln!(f, "  {c}")?;
        }
        write!(f, "{}", self.beta)
    }
}

/// Checks the current stage and the advance that produced it.
pub fn verify_stage(s: &Stage, opts: &VerifyOptions) -> StageReport {
    verify_level(s, s.index(), opts)
}

/// Elements to visit at one level: everything when small, samples otherwise.
fn visit_elements(n: usize, opts: &VerifyOptions, rng: &mut ChaCha8Rng) -> Vec<Elem> {
    if n <= opts.exhaustive_atoms {
        all_elements(n).collect()
    } else {
        (0..opts.samples).map(|_| random_elem(n, rng)).collect()
    }
}

fn visit_domain(n: usize, dom: &Domain, opts: &VerifyOptions, rng: &mut ChaCha8Rng) -> Vec<Elem> {
    let small = dom.log_size(n) <= opts.exhaustive_atoms;
    match dom {
        Domain::Empty => Vec::new(),
        Domain::All if small => all_elements(n).collect(),
        Domain::Blocks(b) if small => unions_of(n, b).collect(),
        _ => (0..opts.samples).filter_map(|_| random_in(n, dom, rng)).collect(),
    }
}

pub fn verify_level(s: &Stage, level: usize, opts: &VerifyOptions) -> StageReport {
    let view = s.view(level);
    let size = s.size_at(level);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ (level as u64) << 32);
    let mut checks = Vec::new();

    if level > 0 {
        let n = level - 1;
        let adv = &s.history()[n];
        let data = &adv.data;
        let prev = s.size_at(n);
        let b = &data.b;
        let lv = s.level(level);

        let mut t = AxiomTally::new("b-nontrivial");
        t.record(!b.is_trivial(), || format!("b = {b}"));
        checks.push(t);

        let mut t = AxiomTally::new("cardinality");
        t.record(size == data.next_size(), || format!("|Ω| = {size}, formula gives {}", data.next_size()));
        checks.push(t);

        let mut union_pi = Elem::empty(prev);
        let mut union_gamma = Elem::empty(prev);
        for p in &data.parts {
            union_pi.union_with(&p.pi);
            union_gamma.union_with(&p.gamma);
        }
        let mut t = AxiomTally::new("lemma-pi");
        t.record(union_pi == *b, || format!("⋃Π = {union_pi}, b = {b}"));
        checks.push(t);
        let mut t = AxiomTally::new("lemma-gamma");
        t.record(union_gamma == b.complement(), || format!("⋃Γ = {union_gamma}, ∼b = {}", b.complement()));
        checks.push(t);

        let mut t = AxiomTally::new("lemma-disjoint");
        for (i, p) in data.parts.iter().enumerate() {
            for (j, q) in data.parts.iter().enumerate() {
                t.record(p.pi.is_disjoint(&q.gamma), || format!("Π({i}) meets Γ({j})"));
                if i < j {
                    t.record(p.pi.is_disjoint(&q.pi), || format!("Π({i}) meets Π({j})"));
                    t.record(p.gamma.is_disjoint(&q.gamma), || format!("Γ({i}) meets Γ({j})"));
                }
            }
        }
        checks.push(t);

        // μ(b) = ⋃ Π(i)×Γ(i) and ∼μ(b) = T(μ(b)).
        let pi_side = Elem::from_indices(
            size,
            (0..size).filter(|&y| data.parts.get(lv.part[y]).is_some_and(|p| p.pi.contains(lv.parent[y]))),
        );
        let mut t = AxiomTally::new("corollary");
        t.record(adv.positive == pi_side, || format!("μ(b) = {}, ⋃Π×Γ = {pi_side}", adv.positive));
        let swapped = s.swap_elem(level, &adv.positive);
        t.record(swapped == adv.positive.complement(), || format!("T(μ(b)) = {swapped}"));
        checks.push(t);

        let mut t = AxiomTally::new("alpha1-blocks");
        let mut cover = Elem::empty(size);
        for x in 0..prev {
            let blk = s.lift_once(n, &Elem::singleton(prev, x));
            t.record(!blk.is_empty(), || format!("block of atom {x} is empty"));
            t.record(blk.is_disjoint(&cover), || format!("block of atom {x} overlaps"));
            cover.union_with(&blk);
        }
        t.record(cover.is_full(), || "blocks do not cover".to_string());
        checks.push(t);

        let mut t = AxiomTally::new("alpha1-morphism");
        let mu = |a: &Elem| s.lift_once(n, a);
        t.record(mu(&Elem::empty(prev)).is_empty(), || "μ(∅) ≠ ∅".into());
        t.record(mu(&Elem::full(prev)).is_full(), || "μ(Ω) ≠ Ω".into());
        let pairs: Vec<(Elem, Elem)> = if prev <= opts.exhaustive_atoms {
            let all: Vec<Elem> = all_elements(prev).collect();
            let mut v = Vec::with_capacity(all.len() * all.len());
            for a in &all {
                for c in &all {
                    v.push((a.clone(), c.clone()));
                }
            }
            v
        } else {
            (0..opts.samples).map(|_| (random_elem(prev, &mut rng), random_elem(prev, &mut rng))).collect()
        };
        for (a, c) in &pairs {
            let (ma, mc) = (mu(a), mu(c));
            t.record(mu(&a.union(c)) == ma.union(&mc), || format!("μ(A∪B) at A = {a}, B = {c}"));
            t.record(mu(&a.inter(c)) == ma.inter(&mc), || format!("μ(A∩B) at A = {a}, B = {c}"));
            t.record(mu(&a.complement()) == ma.complement(), || format!("μ(∼A) at A = {a}"));
            t.record(a == c || ma != mc, || format!("μ not injective at A = {a}, B = {c}"));
        }
        checks.push(t);

        let mut t = AxiomTally::new("alpha2");
        let old = s.view(n);
        for a in old.conditions() {
            let ma = mu(&a);
            for bb in visit_domain(prev, &old.domain(&a), opts, &mut rng) {
                let Some(v) = old.cond(&bb, &a) else {
                    t.skip();
                    continue;
                };
                match view.cond(&mu(&bb), &ma) {
                    Some(w) => t.record(w == mu(&v), || format!("A = {a}, B = {bb}")),
                    None => t.record(false, || format!("f(μB, μA) undefined at A = {a}, B = {bb}")),
                }
            }
        }
        checks.push(t);

        let mut t = AxiomTally::new("ranks");
        for a in visit_elements(prev, opts, &mut rng) {
            let ra = s.rank_at(n, &a);
            let rm = s.rank_at(level, &mu(&a));
            t.record(ra == rm, || format!("r(μ({a})) = {rm}, r({a}) = {ra}"));
        }
        for c in visit_elements(size, opts, &mut rng) {
            if s.descend_once(level, &c).is_none() {
                let r = s.rank_at(level, &c);
                t.record(r == level, || format!("new element {c} has rank {r}"));
            }
        }
        checks.push(t);
    }

    let mut t = AxiomTally::new("idempotence");
    for a in view.conditions() {
        if a.is_trivial() {
            continue;
        }
        let na = a.complement();
        for bb in visit_domain(size, &view.domain(&a), opts, &mut rng) {
            let Some(v) = view.cond(&bb, &a) else { continue };
            match (view.cond(&v, &a), view.cond(&v, &na)) {
                (Some(x), Some(y)) => t.record(x == v && y == v, || format!("A = {a}, B = {bb}")),
                _ => t.skip(),
            }
        }
    }
    checks.push(t);

    let beta = check_beta_axioms(&view, opts.mode_for(size, 0xbe7a ^ level as u64));
    StageReport { level, atoms: size, checks, beta }
}

/// Re-verifies every level of `s`.
pub fn verify_history(s: &Stage, opts: &VerifyOptions) -> Vec<StageReport> {
    (0..=s.index()).map(|j| verify_level(s, j, opts)).collect()
}
