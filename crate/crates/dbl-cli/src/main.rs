//! `dbl`: check derivation files, build staged models, extend probabilities.

mod check;
mod config;
mod model;
mod prob;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "dbl", version, about = "Deterministic Bayesian Logic workbench")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check derivation files and report conclusions with their axiom flags.
    Check(check::CheckArgs),
    /// Build a stage, verify it, evaluate formulas and check sequents.
    Model(model::ModelArgs),
    /// Extend a classical probability along a stage and check its identities.
    Prob(prob::ProbArgs),
}

/// What a command found: the report text and whether anything failed.
pub struct Report {
    pub text: String,
    pub ok: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Check(a) => check::run(&a),
        Cmd::Model(a) => model::run(&a),
        Cmd::Prob(a) => prob::run(&a),
    };
    match result {
        Ok(r) => {
            let mut out = std::io::stdout().lock();
            // a closed pipe is not worth a panic
            let _ = out.write_all(r.text.as_bytes());
            if r.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
