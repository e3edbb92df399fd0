//! `dbl prob`.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use dbl::model::AxiomTally;
use dbl::probability::{
    bayes_identity, check_additivity, check_bayes, check_lemmas, check_multiplicativity, check_non_distortion,
    classical_formulas, default_multiplicative_pairs, epsilon_extension, lewis_arithmetic, lewis_separation,
    sigma_label, ClassicalProbability, Extension, LemmaOptions, Pipeline, PolyFrac, ProbError,
};
use dbl::syntax::{parse, Formula};

use crate::config::RunConfig;
use crate::model::build;
use crate::Report;

#[derive(Args, Debug)]
pub struct ProbArgs {
    #[command(flatten)]
    pub config: RunConfig,
    /// Probability file: `conjunction : n/d` per line, missing atoms are 0.
    #[arg(long, required_unless_present = "uniform")]
    pub prob: Option<PathBuf>,
    /// Use the uniform probability instead of a file.
    #[arg(long, conflicts_with = "prob")]
    pub uniform: bool,
    /// Extend `π_e` and report limits at `e → 0` when `π` has zeros.  With a
    /// strictly positive `π` the limits are compared with the direct values.
    #[arg(long)]
    pub epsilon: bool,
    /// Reject any `π` with a zero atom, even with `--epsilon`.
    #[arg(long)]
    pub strict_positive: bool,
    /// Compare conditioning before and after extending.
    #[arg(long)]
    pub lewis: bool,
    /// Condition of the `--lewis` run (default: the last atom).
    #[arg(long)]
    pub phi: Option<String>,
    /// Consequent of the `--lewis` case split (default: the first atom).
    #[arg(long)]
    pub psi: Option<String>,
    /// Depth of the generated classical formulas used by the identity checks.
    #[arg(long, default_value_t = 1)]
    pub depth: usize,
}

/// Per-condition stages of the Bayes and `--lewis` checks may grow to at
/// least this many atoms, whatever `--max-atoms` says.
const AUX_BUDGET: usize = 64;

fn tally_line(out: &mut String, t: &AxiomTally, ok: &mut bool) -> Result<()> {
    *ok &= t.ok();
    writeln!(out, "{t}")?;
    Ok(())
}

pub fn run(args: &ProbArgs) -> Result<Report> {
    let cfg = &args.config;
    cfg.validate()?;
    let th = &cfg.theta;
    let inputs = cfg.inputs()?;
    if !inputs.sequents.is_empty() {
        bail!("`prob` evaluates formulas, not sequents");
    }
    let pi = match &args.prob {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            ClassicalProbability::parse(th, &text).with_context(|| format!("{}", path.display()))?
        }
        None => ClassicalProbability::uniform(th),
    };
    let zeros: Vec<String> = pi.zero_atoms().iter().map(|&i| sigma_label(th, i)).collect();
    if !zeros.is_empty() && (args.strict_positive || !args.epsilon) {
        bail!(
            "π is 0 on {}: the direct extension needs a strictly positive probability{}",
            zeros.join(", "),
            if args.strict_positive { "" } else { "; rerun with --epsilon for the ε-extension" }
        );
    }
    let mut text = cfg.header("prob");
    text.push_str(&pi.to_text());
    let stage = build(cfg, &inputs.formulas, &mut text)?;
    let sizes: Vec<String> = (0..=stage.index()).map(|j| stage.size_at(j).to_string()).collect();
    writeln!(text, "sizes {}", sizes.join(" -> "))?;

    let mut classical: Vec<Formula> = inputs.formulas.iter().filter(|f| f.is_classical()).cloned().collect();
    if classical.is_empty() {
        classical = classical_formulas(th, args.depth);
    }
    let lemma_opts = LemmaOptions { samples: cfg.samples.unwrap_or(4096), seed: cfg.seed, ..LemmaOptions::default() };
    let mut ok = true;

    if !zeros.is_empty() {
        writeln!(text, "ε-mode: π is 0 on {}", zeros.join(", "))?;
        let mut formulas = inputs.formulas.clone();
        formulas.extend(classical.iter().cloned());
        let rep = epsilon_extension(&stage, &pi, &formulas)?;
        for (f, v, l) in &rep.values {
            let lim = l.as_ref().map_or("unbounded".to_string(), |x| x.to_string());
            writeln!(text, "P({f}) = {v} -> {lim}")?;
        }
        for t in [&rep.total, &rep.classical, &rep.bounded] {
            tally_line(&mut text, t, &mut ok)?;
        }
        let ext = Extension::<PolyFrac>::new(&stage, pi.perturbed())?;
        for t in &check_lemmas(&stage, &ext, &lemma_opts).checks {
            tally_line(&mut text, t, &mut ok)?;
        }
        let mut pl = Pipeline::epsilon(stage.clone(), &pi)?;
        let mut bayes = AxiomTally::new("bayes");
        for phi in &classical {
            for psi in &classical {
                match bayes_identity(&mut pl, phi, psi) {
                    Ok(c) => bayes.record(c.equal, || format!("{phi}, {psi}: {} vs {}", c.lhs, c.rhs)),
                    Err(ProbError::Undefined(_)) => bayes.skip(),
                    Err(e) => return Err(e.into()),
                }
            }
        }
        tally_line(&mut text, &bayes, &mut ok)?;
    } else {
        let mut pl = match Pipeline::direct(stage.clone(), &pi) {
            Ok(p) => p,
            Err(e @ ProbError::ZeroDenominator { .. }) => bail!("{e} (rerun with --epsilon)"),
            Err(e) => return Err(e.into()),
        };
        for f in &inputs.formulas {
            match pl.prob(f) {
                Ok(v) => writeln!(text, "P({f}) = {v}")?,
                Err(e) => writeln!(text, "P({f}) undefined: {e}")?,
            }
        }
        for t in &check_lemmas(&stage, &pl.ext, &lemma_opts).checks {
            tally_line(&mut text, t, &mut ok)?;
        }
        tally_line(&mut text, &check_bayes(th, &pi, &classical, cfg.max_atoms.max(AUX_BUDGET))?, &mut ok)?;
        let pairs = default_multiplicative_pairs(th, &classical);
        tally_line(&mut text, &check_multiplicativity(&mut pl, &pairs), &mut ok)?;
        let mut sums = Vec::new();
        for a in inputs.formulas.iter().chain(&classical) {
            for b in inputs.formulas.iter().chain(&classical) {
                sums.push((a.clone(), b.clone()));
            }
        }
        tally_line(&mut text, &check_additivity(&mut pl, &sums), &mut ok)?;
        tally_line(&mut text, &check_non_distortion(&mut pl, &pi, &classical)?, &mut ok)?;
        if args.epsilon {
            // reported, not asserted
            let mut eps = Pipeline::epsilon(stage.clone(), &pi)?;
            let (mut same, mut total) = (0, 0);
            for f in inputs.formulas.iter().chain(&classical) {
                if let (Ok(d), Ok(l)) = (pl.prob(f), eps.limit(f)) {
                    total += 1;
                    if d == l {
                        same += 1;
                    } else {
                        writeln!(text, "ε-limit of {f} is {l}, direct value {d}")?;
                    }
                }
            }
            writeln!(text, "ε-limits equal the direct values on {same} of {total} formulas")?;
        }
    }

    if args.lewis {
        let pick = |given: &Option<String>, default: Formula| -> Result<Formula> {
            Ok(match given {
                Some(s) => parse(s, th).with_context(|| format!("`{s}`"))?,
                None => default,
            })
        };
        let phi = pick(&args.phi, th.atom(th.len() - 1))?;
        let psi = pick(&args.psi, th.atom(0))?;
        let budget = cfg.max_atoms.max(AUX_BUDGET);
        let rep = lewis_separation(th, &pi, &phi, budget)?;
        write!(text, "{rep}")?;
        ok &= rep.classical.ok();
        write!(text, "{}", lewis_arithmetic(th, &pi, &psi, &phi, budget)?)?;
    }
    writeln!(text, "{}", if ok { "all checks passed" } else { "some checks FAILED" })?;
    Ok(Report { text, ok })
}
