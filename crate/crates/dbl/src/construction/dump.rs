//! Text dump of a stage.  Only the history is needed to rebuild it; atom
//! lists and blocks are written so the loader can confirm the replay.
//!
//! ```text
//! dbl-stage v1
//! theta a, b
//! advance 0 case1 b = {0}
//! level 1 atoms (0,1) (0,2) (0,3) (1,0) (2,0) (3,0)
//! blocks 1 {0,1,2} {3} {4} {5}
//! rows 1 {0,1,2}:0+ {3,4,5}:0-
//! ```

use std::fmt::Write as _;

use thiserror::Error;

use super::{Case, ConstructionError, Stage};
use crate::model::Elem;
use crate::syntax::{Theta, ThetaError};

#[derive(Debug, Error)]
pub enum DumpError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("bad atom set: {0}")]
    Theta(#[from] ThetaError),
    #[error("replay failed: {0}")]
    Replay(#[from] ConstructionError),
    #[error("line {line}: replay disagrees with the dump ({msg})")]
    Mismatch { line: usize, msg: String },
}

fn elem_text(e: &Elem) -> String {
    e.indices_text()
}

fn parse_elem(text: &str, size: usize, line: usize) -> Result<Elem, DumpError> {
    let t = text.trim();
    let inner = t
        .strip_prefix('{')
        .and_then(|r| r.strip_suffix('}'))
        .ok_or_else(|| DumpError::Syntax { line, msg: format!("expected {{..}}, found `{t}`") })?;
    let mut e = Elem::empty(size);
    for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let i: usize = part.parse().map_err(|_| DumpError::Syntax { line, msg: format!("bad index `{part}`") })?;
        if i >= size {
            return Err(DumpError::Syntax { line, msg: format!("index {i} outside {size} atoms") });
        }
        e.insert(i);
    }
    Ok(e)
}

impl Stage {
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let names: Vec<&str> = self.theta().names().iter().map(|n| n.as_ref()).collect();
        let _ = writeln!(out, "dbl-stage v1");
        let _ = writeln!(out, "theta {}", names.join(", "));
        let sizes: Vec<String> = (0..=self.index()).map(|j| self.size_at(j).to_string()).collect();
        let _ = writeln!(out, "sizes {}", sizes.join(" "));
        for adv in self.history() {
            let _ = writeln!(out, "advance {} {} b = {}", adv.n, adv.data.case, elem_text(&adv.data.b));
            let j = adv.n + 1;
            let level = self.level(j);
            let atoms: Vec<String> =
                (0..level.size).map(|y| format!("({},{})", level.parent[y], level.second[y])).collect();
            let _ = writeln!(out, "level {j} atoms {}", atoms.join(" "));
            let prev = self.size_at(adv.n);
            let blocks: Vec<String> =
                (0..prev).map(|x| elem_text(&self.lift_once(adv.n, &Elem::singleton(prev, x)))).collect();
            let _ = writeln!(out, "blocks {j} {}", blocks.join(" "));
            let mut rows: Vec<(&Elem, &super::Row)> = self.rows_at(j).iter().collect();
            rows.sort_by(|a, b| a.0.cmp(b.0));
            let rows: Vec<String> = rows
                .iter()
                .map(|(e, r)| format!("{}:{}{}", elem_text(e), r.k, if r.positive { '+' } else { '-' }))
                .collect();
            let _ = writeln!(out, "rows {j} {}", rows.join(" "));
        }
        out
    }
}

/// Rebuilds a stage from its dump by replaying the recorded conditions.
pub fn load_stage(text: &str) -> Result<Stage, DumpError> {
    let mut stage: Option<Stage> = None;
    let mut saw_header = false;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        if !saw_header {
            if l != "dbl-stage v1" {
                return Err(DumpError::Syntax { line, msg: "missing `dbl-stage v1` header".into() });
            }
            saw_header = true;
            continue;
        }
        let (head, rest) = l.split_once(' ').unwrap_or((l, ""));
        match head {
            "theta" => {
                let th = Theta::parse_list(rest)?;
                stage = Some(Stage::with_limit(&th, th.len())?);
            }
            "sizes" => {}
            "advance" => {
                let s = stage.as_ref().ok_or_else(|| DumpError::Syntax { line, msg: "advance before theta".into() })?;
                let (lhs, b_text) = rest
                    .split_once("b =")
                    .ok_or_else(|| DumpError::Syntax { line, msg: "expected `b = {..}`".into() })?;
                let mut words = lhs.split_whitespace();
                let n: usize = words
                    .next()
                    .and_then(|w| w.parse().ok())
                    .ok_or_else(|| DumpError::Syntax { line, msg: "missing stage index".into() })?;
                if n != s.index() {
                    return Err(DumpError::Mismatch { line, msg: format!("expected stage {}, found {n}", s.index()) });
                }
                let b = parse_elem(b_text, s.size(), line)?;
                let data = s.partition_data(&b)?;
                if data.b != b {
                    return Err(DumpError::Mismatch { line, msg: "condition orientation differs".into() });
                }
                let case_text = words.next().unwrap_or("");
                let expected = match data.case {
                    Case::Case1 => "case1".to_string(),
                    Case::Case0 { nu } => format!("case0({nu})"),
                };
                if case_text != expected {
                    return Err(DumpError::Mismatch { line, msg: format!("case {case_text} vs replay {expected}") });
                }
                stage = Some(s.advance_from(data));
            }
            "level" => {
                let s = stage.as_ref().ok_or_else(|| DumpError::Syntax { line, msg: "level before theta".into() })?;
                let mut words = rest.split_whitespace();
                let j: usize = words
                    .next()
                    .and_then(|w| w.parse().ok())
                    .ok_or_else(|| DumpError::Syntax { line, msg: "missing level".into() })?;
                if words.next() != Some("atoms") || j != s.index() {
                    return Err(DumpError::Mismatch { line, msg: format!("unexpected level line for {j}") });
                }
                let lv = s.level(j);
                let replayed: Vec<String> =
                    (0..lv.size).map(|y| format!("({},{})", lv.parent[y], lv.second[y])).collect();
                let listed: Vec<&str> = words.collect();
                if listed != replayed {
                    return Err(DumpError::Mismatch { line, msg: "atom list differs".into() });
                }
            }
            "blocks" | "rows" => {}
            other => return Err(DumpError::Syntax { line, msg: format!("unknown directive `{other}`") }),
        }
    }
    stage.ok_or(DumpError::Syntax { line: 0, msg: "no theta line".into() })
}
