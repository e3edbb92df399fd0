//! `dbl check`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::Args;
use dbl::proof::{check_group_flags, flags_text, parse_theorems_as, theorem_library, Checker, FileError, System, Theorem};

use crate::Report;

#[derive(Args, Debug)]
pub struct CheckArgs {
    /// Derivation files, or directories whose `.dbl` files are checked together.
    #[arg(required = true)]
    pub paths: Vec<PathBuf>,
    /// Check every theorem in this system instead of the one it names.
    #[arg(long, value_parser = parse_system)]
    pub system: Option<System>,
    /// Let derivations `USE` the bundled library.
    #[arg(long)]
    pub with_library: bool,
}

fn parse_system(s: &str) -> Result<System, String> {
    System::parse(s).ok_or_else(|| format!("unknown system `{s}` (classical, dbl, dblstar)"))
}

fn collect(paths: &[PathBuf]) -> Result<Vec<(String, String)>> {
    let mut files: Vec<PathBuf> = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut found: Vec<PathBuf> = fs::read_dir(p)
                .with_context(|| format!("reading {}", p.display()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.extension().is_some_and(|x| x == "dbl"))
                .collect();
            found.sort();
            files.extend(found);
        } else {
            files.push(p.clone());
        }
    }
    files
        .iter()
        .map(|f| {
            let text = fs::read_to_string(f).with_context(|| format!("reading {}", f.display()))?;
            Ok((display(f), text))
        })
        .collect()
}

fn display(p: &Path) -> String {
    p.display().to_string()
}

/// Files may use theorems of other files, so they are retried until no
/// file makes progress.  The error of the first stuck file is returned.
fn check_all(
    sources: &[(String, String)],
    lemmas: &mut BTreeMap<String, Theorem>,
    checker: &Checker,
    system: Option<System>,
) -> Result<Vec<String>, FileError> {
    let mut pending: Vec<&(String, String)> = sources.iter().collect();
    let mut order = Vec::new();
    while !pending.is_empty() {
        let mut stuck = Vec::new();
        let mut first_err = None;
        for src in &pending {
            let mut trial = lemmas.clone();
            match parse_theorems_as(&src.0, &src.1, &mut trial, checker, system) {
                Ok(names) => {
                    *lemmas = trial;
                    order.extend(names);
                }
                Err(e) => {
                    first_err.get_or_insert(e);
                    stuck.push(*src);
                }
            }
        }
        if stuck.len() == pending.len() {
            return Err(first_err.expect("a stuck file has an error"));
        }
        pending = stuck;
    }
    Ok(order)
}

pub fn run(args: &CheckArgs) -> Result<Report> {
    let sources = collect(&args.paths)?;
    let checker = Checker::new();
    let mut lemmas = BTreeMap::new();
    if args.with_library {
        let lib = theorem_library().context("bundled library")?;
        for t in lib.theorems {
            lemmas.insert(t.name.clone(), t);
        }
    }
    let mut text = String::new();
    let system = args.system.map_or("as declared".to_string(), |s| s.to_string());
    writeln!(text, "# dbl check system={system} files={}", sources.len())?;
    let order = match check_all(&sources, &mut lemmas, &checker, args.system) {
        Ok(o) => o,
        Err(e) => {
            writeln!(text, "FAIL {e}")?;
            return Ok(Report { text, ok: false });
        }
    };
    let theorems: Vec<Theorem> = order.iter().map(|n| lemmas[n].clone()).collect();
    for t in &theorems {
        writeln!(
            text,
            "ok {} [{}] group={} flags={{{}}} declared={{{}}} nodes={}{}",
            t.name,
            t.system,
            t.group,
            flags_text(&t.checked.flags),
            flags_text(&t.declared),
            t.checked.nodes,
            if t.quarantine { " quarantined" } else { "" }
        )?;
        let hyps: Vec<String> = t.checked.hyps.iter().map(|h| format!("[{h}]")).collect();
        writeln!(text, "   {}{}", t.statement, if hyps.is_empty() { String::new() } else { format!(" from {}", hyps.join(" ")) })?;
    }
    if let Err(e) = check_group_flags(&theorems) {
        writeln!(text, "FAIL {e}")?;
        return Ok(Report { text, ok: false });
    }
    writeln!(text, "{} theorems checked", theorems.len())?;
    Ok(Report { text, ok: true })
}
