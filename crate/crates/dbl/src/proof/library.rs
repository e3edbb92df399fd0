//! The bundled theorem library.

use std::collections::{BTreeMap, BTreeSet};

use super::{flags_text, parse_theorems, Checker, FileError, Flag, Theorem};
use crate::syntax::{Sequent, Theta};

/// Library files in load order.  Later files may use theorems of earlier ones.
pub const LIBRARY_SOURCES: &[(&str, &str)] = &[
    ("basic.dbl", include_str!("../../library/basic.dbl")),
    ("universes.dbl", include_str!("../../library/universes.dbl")),
    ("independence.dbl", include_str!("../../library/independence.dbl")),
    ("right.dbl", include_str!("../../library/right.dbl")),
    ("triviality.dbl", include_str!("../../library/triviality.dbl")),
    ("vcu.dbl", include_str!("../../library/vcu.dbl")),
];

pub fn library_theta() -> Theta {
    Theta::new(&["t", "x", "y", "z", "w"]).expect("fixed atom set")
}

#[derive(Clone, Debug)]
pub struct Library {
    pub theta: Theta,
    /// In load order.
    pub theorems: Vec<Theorem>,
    pub leaves: usize,
}

impl Library {
    pub fn get(&self, name: &str) -> Option<&Theorem> {
        self.theorems.iter().find(|t| t.name == name)
    }

    pub fn groups(&self) -> BTreeMap<&str, Vec<&Theorem>> {
        let mut out: BTreeMap<&str, Vec<&Theorem>> = BTreeMap::new();
        for t in &self.theorems {
            out.entry(t.group.as_str()).or_default().push(t);
        }
        out
    }

    /// Flags the derivations of a group actually use.
    pub fn group_flags(&self, group: &str) -> BTreeSet<Flag> {
        self.theorems.iter().filter(|t| t.group == group).flat_map(|t| t.checked.flags.iter().copied()).collect()
    }

    /// Plain sequents (no hypotheses), with their names.
    pub fn sequents(&self) -> Vec<(String, Sequent)> {
        self.theorems.iter().filter(|t| t.is_sequent()).map(|t| (t.name.clone(), t.statement.clone())).collect()
    }
}

/// Loads and checks the given sources, then checks that every group uses
/// exactly the flags it declares.
pub fn load_library(sources: &[(&str, &str)]) -> Result<Library, FileError> {
    let checker = Checker::new();
    let theta = library_theta();
    let mut lemmas = BTreeMap::new();
    let mut order = Vec::new();
    for (file, text) in sources {
        order.extend(parse_theorems(file, text, &mut lemmas, &checker)?);
    }
    let theorems: Vec<Theorem> = order.iter().map(|n| lemmas[n].clone()).collect();
    check_group_flags(&theorems)?;
    Ok(Library { theta, theorems, leaves: checker.cached_leaves() })
}

/// Members of a group declare the same flags and together use exactly them.
pub fn check_group_flags(theorems: &[Theorem]) -> Result<(), FileError> {
    let mut groups: BTreeMap<&str, Vec<&Theorem>> = BTreeMap::new();
    for t in theorems {
        groups.entry(t.group.as_str()).or_default().push(t);
    }
    for (group, members) in groups {
        let declared = &members[0].declared;
        let err = |msg: String| FileError {
            file: members[0].source.clone(),
            line: 0,
            theorem: Some(members[0].name.clone()),
            node: None,
            msg,
        };
        if let Some(t) = members.iter().find(|t| t.declared != *declared) {
            return Err(err(format!("group {group}: {} declares different flags", t.name)));
        }
        let used: BTreeSet<Flag> = members.iter().flat_map(|t| t.checked.flags.iter().copied()).collect();
        if used != *declared {
            return Err(err(format!(
                "group {group} declares [{}] but its derivations use [{}]",
                flags_text(declared),
                flags_text(&used)
            )));
        }
    }
    Ok(())
}

/// Loads the bundled library.
pub fn theorem_library() -> Result<Library, FileError> {
    load_library(LIBRARY_SOURCES)
}
