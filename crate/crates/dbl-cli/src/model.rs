//! `dbl model`.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use dbl::construction::{build_faithful, build_with, load_stage, verify_history, Stage};
use dbl::model::{entails, Verdict};

use crate::config::{Mode, RunConfig};
use crate::Report;

#[derive(Args, Debug)]
pub struct ModelArgs {
    #[command(flatten)]
    pub config: RunConfig,
    /// Replay a stage dump instead of building.
    #[arg(long, conflicts_with = "mode")]
    pub load: Option<PathBuf>,
    /// Write the stage dump here instead of into the report.
    #[arg(long)]
    pub dump: Option<PathBuf>,
}

/// Builds the stage for `config`: faithful up to the atom budget, or
/// targeted at `formulas`.
pub fn build(config: &RunConfig, formulas: &[dbl::syntax::Formula], out: &mut String) -> Result<Stage> {
    let opts = config.verify_options();
    match config.mode {
        Mode::Faithful => {
            let o = build_faithful(&config.theta, config.max_atoms, &opts)?;
            let why = if o.halted {
                "f is total".to_string()
            } else if let Some(n) = o.next_size {
                format!("next stage would have {n} atoms")
            } else {
                "largest stage built".to_string()
            };
            writeln!(out, "built faithful stage {} with {} atoms ({why})", o.stage.index(), o.stage.size())?;
            Ok(o.stage)
        }
        Mode::Targeted => {
            let o = build_with(&config.theta, formulas, config.max_atoms, &opts)?;
            writeln!(out, "built targeted stage {} with {} atoms ({} advances)", o.stage.index(), o.stage.size(), o.advances)?;
            Ok(o.stage)
        }
    }
}

pub fn run(args: &ModelArgs) -> Result<Report> {
    let cfg = &args.config;
    cfg.validate()?;
    let inputs = cfg.inputs()?;
    let mut text = cfg.header("model");
    let stage = match &args.load {
        Some(path) => {
            let dump = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let s = load_stage(&dump).with_context(|| format!("loading {}", path.display()))?;
            if s.theta() != &cfg.theta {
                bail!("{} was built over a different atom set", path.display());
            }
            writeln!(text, "loaded stage {} with {} atoms", s.index(), s.size())?;
            s
        }
        None => build(cfg, &inputs.all_formulas(), &mut text)?,
    };
    let sizes: Vec<String> = (0..=stage.index()).map(|j| stage.size_at(j).to_string()).collect();
    writeln!(text, "sizes {}", sizes.join(" -> "))?;

    let reports = verify_history(&stage, &cfg.verify_options());
    let violations: u64 = reports.iter().map(|r| r.violations()).sum();
    for r in &reports {
        write!(text, "{r}")?;
    }
    writeln!(text, "violations {violations}")?;

    let mut asg = stage.canonical_assignment();
    for f in &inputs.formulas {
        match asg.eval(&stage, f) {
            Ok(v) => writeln!(text, "value {f} = {}", stage.describe_elem(&v))?,
            Err(u) => writeln!(text, "value {f} undefined: {u}")?,
        }
    }
    for s in &inputs.sequents {
        let mode = cfg.entail_mode(stage.size());
        let r = entails(&stage, s, mode).map_err(|e| anyhow::anyhow!("{s}: {e:?}"))?;
        let verdict = match &r.verdict {
            Verdict::Holds => "holds".to_string(),
            Verdict::Undecided => "undecided".to_string(),
            Verdict::Fails(w) => {
                let wit: Vec<String> = w.iter().map(|(k, v)| format!("{k}={v}")).collect();
                format!("fails at {}", wit.join(" "))
            }
        };
        writeln!(text, "sequent {s}: {verdict} (checked {}, skipped {})", r.checked, r.skipped)?;
    }

    let dump = stage.dump();
    match &args.dump {
        Some(path) => {
            fs::write(path, &dump).with_context(|| format!("writing {}", path.display()))?;
            writeln!(text, "dump written to {}", path.display())?;
        }
        None => text.push_str(&dump),
    }
    Ok(Report { text, ok: violations == 0 })
}
