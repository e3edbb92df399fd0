//! Options shared by `model` and `prob`, and formula input.

use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use dbl::construction::VerifyOptions;
use dbl::model::CheckMode;
use dbl::syntax::{parse, parse_sequent, Formula, Sequent, Theta};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Process every condition in priority order.
    Faithful,
    /// Advance only on conditions the input formulas need.
    Targeted,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Faithful => "faithful",
            Mode::Targeted => "targeted",
        }
    }
}

#[derive(Args, Debug)]
pub struct RunConfig {
    /// Ordered atom set, e.g. `a,b`.  The first atom fixes `T`.
    #[arg(long, value_parser = parse_theta)]
    pub theta: Theta,
    #[arg(long, value_enum, default_value_t = Mode::Faithful)]
    pub mode: Mode,
    /// Largest stage the build may reach.
    #[arg(long, default_value_t = 32)]
    pub max_atoms: usize,
    /// Seed for every sampled check.
    #[arg(long, default_value_t = 0x5eed)]
    pub seed: u64,
    /// Check exhaustively at every size.
    #[arg(long, conflicts_with = "samples")]
    pub exhaustive: bool,
    /// Samples per sampled check.
    #[arg(long)]
    pub samples: Option<usize>,
    /// File with one formula or sequent per line (`#` starts a comment).
    #[arg(long)]
    pub formulas: Option<PathBuf>,
    /// A formula or sequent; repeatable.
    #[arg(short = 'f', long = "formula")]
    pub formula: Vec<String>,
}

/// Sizes up to which checks are exhaustive by default.
const EXHAUSTIVE_ATOMS: usize = 8;
const STAGE_SAMPLES: usize = 10_000;
const ENTAIL_SAMPLES: usize = 1_000;

fn parse_theta(s: &str) -> Result<Theta, String> {
    Theta::parse_list(s).map_err(|e| e.to_string())
}

/// Formulas and sequents read from `--formulas` and `-f`, in that order.
#[derive(Default)]
pub struct Inputs {
    pub formulas: Vec<Formula>,
    pub sequents: Vec<Sequent>,
}

impl Inputs {
    /// Every formula, including those occurring in sequents.
    pub fn all_formulas(&self) -> Vec<Formula> {
        let mut out = self.formulas.clone();
        for s in &self.sequents {
            out.extend(s.ante.iter().chain(&s.succ).cloned());
        }
        out
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let sigma = 1usize << self.theta.len();
        if self.max_atoms < sigma {
            bail!("--max-atoms {} is below |Σ| = {sigma}", self.max_atoms);
        }
        Ok(())
    }

    pub fn verify_options(&self) -> VerifyOptions {
        VerifyOptions {
            exhaustive_atoms: if self.exhaustive { usize::MAX } else { EXHAUSTIVE_ATOMS },
            samples: self.samples.unwrap_or(STAGE_SAMPLES),
            seed: self.seed,
        }
    }

    pub fn entail_mode(&self, atoms: usize) -> CheckMode {
        if self.exhaustive || (self.samples.is_none() && atoms <= EXHAUSTIVE_ATOMS) {
            CheckMode::Exhaustive
        } else {
            CheckMode::Sampled { samples: self.samples.unwrap_or(ENTAIL_SAMPLES), seed: self.seed }
        }
    }

    pub fn header(&self, command: &str) -> String {
        let sampling = match (self.exhaustive, self.samples) {
            (true, _) => "exhaustive".to_string(),
            (false, Some(n)) => format!("samples={n}"),
            (false, None) => "default-sampling".to_string(),
        };
        format!(
            "# dbl {command} theta={} mode={} max-atoms={} seed={} {sampling}\n",
            self.theta.names().join(","),
            self.mode.name(),
            self.max_atoms,
            self.seed
        )
    }

    pub fn inputs(&self) -> Result<Inputs> {
        let mut lines: Vec<(String, String)> = Vec::new();
        if let Some(path) = &self.formulas {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            for (i, l) in text.lines().enumerate() {
                let l = l.split('#').next().unwrap_or("").trim();
                if !l.is_empty() {
                    lines.push((format!("{}:{}", path.display(), i + 1), l.to_string()));
                }
            }
        }
        for (i, f) in self.formula.iter().enumerate() {
            lines.push((format!("-f #{}", i + 1), f.clone()));
        }
        let mut out = Inputs::default();
        for (at, l) in lines {
            if l.contains("|-") {
                out.sequents.push(parse_sequent(&l, &self.theta).with_context(|| format!("{at}: `{l}`"))?);
            } else {
                out.formulas.push(parse(&l, &self.theta).with_context(|| format!("{at}: `{l}`"))?);
            }
        }
        Ok(out)
    }
}
