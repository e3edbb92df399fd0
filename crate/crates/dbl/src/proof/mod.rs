//! Sequent systems, derivation trees and the checker.
//!
//! A derivation is a tree of axiom instances, CUT, STRUCT, classical
//! leaves, derived rules and references to earlier theorems.  Checking a
//! node yields its conclusion together with the axiom schemas and `b5`
//! variants it depends on.

mod file;
mod leaf;
mod library;
mod rules;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

use crate::syntax::{format_sequent, parse_sequent_in, substitute, Formula, Scope, Sequent, Style, Theta};

pub use file::{parse_theorems, parse_theorems_as, FileError};
pub use leaf::{abstract_sequent, classical_leaf_check, is_abstract_tautology, LeafError, MAX_LEAF_VARIABLES};
pub use library::{check_group_flags, library_theta, load_library, theorem_library, Library, LIBRARY_SOURCES};
pub use rules::{apply_derived_rule, expand_derived_rule, DerivedRule, RuleError};

pub type Binding = BTreeMap<String, Formula>;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum System {
    Classical,
    Dbl,
    DblStar,
}

impl System {
    pub fn name(self) -> &'static str {
        match self {
            System::Classical => "classical",
            System::Dbl => "dbl",
            System::DblStar => "dbl*",
        }
    }

    pub fn parse(s: &str) -> Option<System> {
        match s.trim().to_ascii_lowercase().as_str() {
            "classical" | "c" => Some(System::Classical),
            "dbl" | "b" => Some(System::Dbl),
            "dbl*" | "dblstar" | "b*" => Some(System::DblStar),
            _ => None,
        }
    }

    pub fn admits(self, ax: AxiomId) -> bool {
        use AxiomId::*;
        match ax {
            Mp | C1 | C2 | C3 => true,
            B1 | B2 | B3 | B4 => self != System::Classical,
            B5 => self == System::Dbl,
            B5WeakA1 | B5WeakA2 | B5WeakB => self == System::DblStar,
        }
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The optional axioms a derivation may depend on.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Flag {
    B5,
    B5WeakA,
    B5WeakB,
    /// The rejected axiom `((eta|psi)|phi) <-> (eta|phi/\psi)`.
    Star,
}

impl Flag {
    pub fn name(self) -> &'static str {
        match self {
            Flag::B5 => "b5",
            Flag::B5WeakA => "b5.weak.A",
            Flag::B5WeakB => "b5.weak.B",
            Flag::Star => "star",
        }
    }

    pub fn parse(s: &str) -> Option<Flag> {
        match s.trim() {
            "b5" => Some(Flag::B5),
            "b5.weak.A" | "wA" => Some(Flag::B5WeakA),
            "b5.weak.B" | "wB" => Some(Flag::B5WeakB),
            "star" | "*" => Some(Flag::Star),
            _ => None,
        }
    }
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn flags_text(flags: &BTreeSet<Flag>) -> String {
    if flags.is_empty() {
        return "-".into();
    }
    flags.iter().map(|f| f.name()).collect::<Vec<_>>().join(",")
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum AxiomId {
    Mp,
    C1,
    C2,
    C3,
    B1,
    B2,
    B3,
    B4,
    B5,
    B5WeakA1,
    B5WeakA2,
    B5WeakB,
}

impl AxiomId {
    pub const ALL: [AxiomId; 12] = [
        AxiomId::Mp,
        AxiomId::C1,
        AxiomId::C2,
        AxiomId::C3,
        AxiomId::B1,
        AxiomId::B2,
        AxiomId::B3,
        AxiomId::B4,
        AxiomId::B5,
        AxiomId::B5WeakA1,
        AxiomId::B5WeakA2,
        AxiomId::B5WeakB,
    ];

    pub fn name(self) -> &'static str {
        use AxiomId::*;
        match self {
            Mp => "mp",
            C1 => "c1",
            C2 => "c2",
            C3 => "c3",
            B1 => "b1",
            B2 => "b2",
            B3 => "b3",
            B4 => "b4",
            B5 => "b5",
            B5WeakA1 => "b5.weak.A.1",
            B5WeakA2 => "b5.weak.A.2",
            B5WeakB => "b5.weak.B",
        }
    }

    pub fn parse(s: &str) -> Option<AxiomId> {
        AxiomId::ALL.iter().copied().find(|a| a.name() == s.trim())
    }

    pub fn flag(self) -> Option<Flag> {
        match self {
            AxiomId::B5 => Some(Flag::B5),
            AxiomId::B5WeakA1 | AxiomId::B5WeakA2 => Some(Flag::B5WeakA),
            AxiomId::B5WeakB => Some(Flag::B5WeakB),
            _ => None,
        }
    }

    /// True for the `b*` schemas, which mention the conditional.
    pub fn is_bayesian(self) -> bool {
        !matches!(self, AxiomId::Mp | AxiomId::C1 | AxiomId::C2 | AxiomId::C3)
    }

    fn schema_text(self) -> &'static str {
        use AxiomId::*;
        match self {
            Mp => "?phi, ?phi -> ?psi |- ?psi",
            C1 => "|- ?phi -> (?psi -> ?phi)",
            C2 => "|- (?eta -> (?phi -> ?psi)) -> ((?eta -> ?phi) -> (?eta -> ?psi))",
            C3 => "|- (!?phi -> !?psi) -> ((!?phi -> ?psi) -> ?phi)",
            B1 => "?phi -> ?psi |- !?phi, (?psi | ?phi)",
            B2 => "|- (?psi -> ?eta | ?phi) -> ((?psi | ?phi) -> (?eta | ?phi))",
            B3 => "|- (?psi | ?phi) -> (?phi -> ?psi)",
            B4 => "|- !(!?psi | ?phi) <-> (?psi | ?phi)",
            B5 => "?psi >< ?phi |- ?phi >< ?psi",
            B5WeakA1 => "?psi >< !?phi |- ?psi >< ?phi",
            B5WeakA2 => "?psi >< ?phi |- ?psi >< !?phi",
            B5WeakB => "?psi <-> ?eta |- (?phi | ?psi) <-> (?phi | ?eta)",
        }
    }

    /// The schema as a sequent over metavariables.
    pub fn schema(self) -> &'static Sequent {
        static SCHEMAS: OnceLock<HashMap<AxiomId, Sequent>> = OnceLock::new();
        &SCHEMAS.get_or_init(|| {
            AxiomId::ALL.iter().map(|&a| (a, parse_schema_sequent(a.schema_text()))).collect()
        })[&self]
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

const STAR_SCHEMA: &str = "|- ((?eta | ?psi) | ?phi) <-> (?eta | ?phi /\\ ?psi)";

fn parse_schema_sequent(text: &str) -> Sequent {
    let theta = Theta::new(&["t"]).expect("fixed atom set");
    let scope = Scope { theta: &theta, macros: None, allow_meta: true };
    parse_sequent_in(text, &scope).expect("built-in schema parses")
}

pub fn star_schema() -> &'static Sequent {
    static S: OnceLock<Sequent> = OnceLock::new();
    S.get_or_init(|| parse_schema_sequent(STAR_SCHEMA))
}

fn instantiate_schema(schema: &Sequent, binding: &Binding) -> Result<Sequent, CheckErrorKind> {
    let mut metas = BTreeSet::new();
    for f in schema.formulas() {
        metas.extend(f.metas().into_iter().map(|m| m.to_string()));
    }
    if let Some(k) = binding.keys().find(|k| !metas.contains(k.as_str())) {
        return Err(CheckErrorKind::UnexpectedBinding(k.clone()));
    }
    let sub = |fs: &[Formula]| -> Result<Vec<Formula>, CheckErrorKind> {
        fs.iter()
            .map(|f| substitute(f, binding).map_err(|e| CheckErrorKind::Unbound(e.to_string())))
            .collect()
    };
    Ok(Sequent { ante: sub(&schema.ante)?, succ: sub(&schema.succ)? })
}

/// Instance of an axiom schema, after checking that `system` admits it.
pub fn instantiate_axiom(system: System, ax: AxiomId, binding: &Binding) -> Result<Sequent, CheckErrorKind> {
    if !system.admits(ax) {
        return Err(CheckErrorKind::NotAdmissible { axiom: ax.name().into(), system });
    }
    instantiate_schema(ax.schema(), binding)
}

/// CUT: `G |- D, c` and `L, c |- S` give `G, L |- D, S`.  The cut formula
/// is the last succedent of the left premise; the first occurrence in the
/// right antecedent is removed.
pub fn apply_cut(left: &Sequent, right: &Sequent, cut: &Formula) -> Result<Sequent, CheckErrorKind> {
    if left.succ.last() != Some(cut) {
        return Err(CheckErrorKind::CutNotLast { cut: cut.to_string() });
    }
    let Some(pos) = right.ante.iter().position(|f| f == cut) else {
        return Err(CheckErrorKind::CutMissing { cut: cut.to_string() });
    };
    let mut ante = left.ante.clone();
    ante.extend(right.ante.iter().enumerate().filter(|&(i, _)| i != pos).map(|(_, f)| f.clone()));
    let mut succ = left.succ[..left.succ.len() - 1].to_vec();
    succ.extend(right.succ.iter().cloned());
    Ok(Sequent { ante, succ })
}

/// STRUCT: accepts `target` when every premise antecedent is in the target
/// antecedent or is `T`, and every premise succedent is in the target
/// succedent or is `F`.
pub fn apply_struct(premise: &Sequent, target: &Sequent, theta: &Theta) -> Result<Sequent, CheckErrorKind> {
    let top = theta.top();
    let bot = theta.bot();
    if let Some(f) = premise.ante.iter().find(|f| **f != top && !target.ante.contains(f)) {
        return Err(CheckErrorKind::StructDropsAntecedent(f.to_string()));
    }
    if let Some(f) = premise.succ.iter().find(|f| **f != bot && !target.succ.contains(f)) {
        return Err(CheckErrorKind::StructDropsSuccedent(f.to_string()));
    }
    Ok(target.clone())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Derivation {
    Axiom { schema: AxiomId, binding: Binding },
    /// Instance of the rejected axiom; only in quarantined theorems.
    Star { binding: Binding },
    Cut { left: Arc<Derivation>, right: Arc<Derivation>, cut: Formula },
    Struct { premise: Arc<Derivation>, target: Sequent },
    ClassicalLeaf { target: Sequent },
    Derived { rule: DerivedRule, premises: Vec<Arc<Derivation>>, arg: Option<Formula> },
    /// An earlier library theorem with atoms renamed.
    Use { theorem: String, renaming: Binding },
    /// An assumption; a theorem with hypotheses is a derived rule.
    Hyp { target: Sequent },
}

impl Derivation {
    pub fn kind(&self) -> &'static str {
        match self {
            Derivation::Axiom { .. } => "AX",
            Derivation::Star { .. } => "STAR",
            Derivation::Cut { .. } => "CUT",
            Derivation::Struct { .. } => "STRUCT",
            Derivation::ClassicalLeaf { .. } => "LEAF",
            Derivation::Derived { rule, .. } => rule.name(),
            Derivation::Use { .. } => "USE",
            Derivation::Hyp { .. } => "HYP",
        }
    }
}

/// What a checked node establishes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Checked {
    pub conclusion: Sequent,
    pub flags: BTreeSet<Flag>,
    pub axioms: BTreeSet<AxiomId>,
    pub lemmas: BTreeSet<String>,
    pub hyps: Vec<Sequent>,
    /// Base nodes after expanding derived rules (lemmas count once).
    pub nodes: usize,
}

impl Checked {
    fn absorb(&mut self, o: &Checked) {
        self.flags.extend(o.flags.iter().copied());
        self.axioms.extend(o.axioms.iter().copied());
        self.lemmas.extend(o.lemmas.iter().cloned());
        for h in &o.hyps {
            if !self.hyps.contains(h) {
                self.hyps.push(h.clone());
            }
        }
        self.nodes += o.nodes;
    }
}

/// A checked library entry.
#[derive(Clone, Debug)]
pub struct Theorem {
    pub name: String,
    pub system: System,
    pub group: String,
    /// Flags of the group, as annotated.
    pub declared: BTreeSet<Flag>,
    pub quarantine: bool,
    /// Axiom schema this theorem derives (with `phi, psi, eta` as `x, y, z`).
    pub proves: Option<AxiomId>,
    pub statement: Sequent,
    pub derivation: Arc<Derivation>,
    pub checked: Checked,
    pub source: String,
}

impl Theorem {
    /// True when the entry proves a plain sequent (no hypotheses).
    pub fn is_sequent(&self) -> bool {
        self.checked.hyps.is_empty()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CheckErrorKind {
    #[error("axiom {axiom} is not admissible in {system}")]
    NotAdmissible { axiom: String, system: System },
    #[error("{0}")]
    Unbound(String),
    #[error("binding for `{0}` does not match any metavariable")]
    UnexpectedBinding(String),
    #[error("cut formula {cut} is not the last succedent of the left premise")]
    CutNotLast { cut: String },
    #[error("cut formula {cut} does not occur in the right antecedent")]
    CutMissing { cut: String },
    #[error("STRUCT drops antecedent {0}")]
    StructDropsAntecedent(String),
    #[error("STRUCT drops succedent {0}")]
    StructDropsSuccedent(String),
    #[error("classical leaf rejected: {0}")]
    Leaf(#[from] LeafError),
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error("rule expansion concluded {found}, macro gives {expected}")]
    ExpansionMismatch { expected: String, found: String },
    #[error("axiom (*) is only usable in quarantined theorems")]
    StarOutsideQuarantine,
    #[error("unknown theorem `{0}`")]
    UnknownLemma(String),
    #[error("theorem `{name}` cannot be used here: {why}")]
    IncompatibleLemma { name: String, why: String },
    #[error("renaming of `{0}` is not allowed: {1}")]
    BadRenaming(String, String),
    #[error("hypotheses are not allowed here")]
    HypothesisNotAllowed,
    #[error("formula {0} is outside the classical language")]
    NotClassical(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{}{kind}", path_prefix(.path))]
pub struct CheckError {
    /// From the root to the failing node.
    pub path: Vec<String>,
    pub kind: CheckErrorKind,
}

fn path_prefix(path: &[String]) -> String {
    if path.is_empty() {
        String::new()
    } else {
        format!("at {}: ", path.join("/"))
    }
}

impl CheckError {
    fn at(kind: CheckErrorKind) -> CheckError {
        CheckError { path: Vec::new(), kind }
    }

    fn under(mut self, step: &str) -> CheckError {
        self.path.insert(0, step.to_string());
        self
    }
}

/// Checking context of one theorem.
#[derive(Clone, Copy)]
pub struct Context<'a> {
    pub system: System,
    pub theta: &'a Theta,
    pub quarantine: bool,
    pub allow_hyps: bool,
    pub lemmas: &'a BTreeMap<String, Theorem>,
}

impl<'a> Context<'a> {
    pub fn new(system: System, theta: &'a Theta, lemmas: &'a BTreeMap<String, Theorem>) -> Context<'a> {
        Context { system, theta, quarantine: false, allow_hyps: false, lemmas }
    }
}

/// Derivation checker.  Classical-leaf verdicts are cached; the cache is
/// shared across threads.
#[derive(Default)]
pub struct Checker {
    leaf_cache: Mutex<HashMap<Sequent, Result<(), LeafError>>>,
}

type Memo = HashMap<usize, Checked>;

impl Checker {
    pub fn new() -> Checker {
        Checker::default()
    }

    pub fn check(&self, ctx: &Context, d: &Derivation) -> Result<Checked, CheckError> {
        let mut memo = Memo::new();
        self.check_memo(ctx, d, &mut memo)
    }

    fn leaf(&self, target: &Sequent) -> Result<(), LeafError> {
        if let Some(v) = self.leaf_cache.lock().expect("leaf cache").get(target) {
            return v.clone();
        }
        let v = classical_leaf_check(target);
        self.leaf_cache.lock().expect("leaf cache").insert(target.clone(), v.clone());
        v
    }

    pub fn cached_leaves(&self) -> usize {
        self.leaf_cache.lock().expect("leaf cache").len()
    }

    pub(crate) fn check_memo(&self, ctx: &Context, d: &Derivation, memo: &mut Memo) -> Result<Checked, CheckError> {
        let key = d as *const Derivation as usize;
        if let Some(c) = memo.get(&key) {
            return Ok(c.clone());
        }
        let out = self.check_node(ctx, d, memo)?;
        if ctx.system == System::Classical {
            if let Some(f) = out.conclusion.formulas().find(|f| !f.is_classical()) {
                return Err(CheckError::at(CheckErrorKind::NotClassical(f.to_string())));
            }
        }
        memo.insert(key, out.clone());
        Ok(out)
    }

    fn check_node(&self, ctx: &Context, d: &Derivation, memo: &mut Memo) -> Result<Checked, CheckError> {
        let leaf_node = |conclusion: Sequent| Checked { conclusion, nodes: 1, ..Checked::default() };
        match d {
            Derivation::Axiom { schema, binding } => {
                let conclusion = instantiate_axiom(ctx.system, *schema, binding).map_err(CheckError::at)?;
                let mut c = leaf_node(conclusion);
                c.axioms.insert(*schema);
                c.flags.extend(schema.flag());
                Ok(c)
            }
            Derivation::Star { binding } => {
                if !ctx.quarantine {
                    return Err(CheckError::at(CheckErrorKind::StarOutsideQuarantine));
                }
                let conclusion = instantiate_schema(star_schema(), binding).map_err(CheckError::at)?;
                let mut c = leaf_node(conclusion);
                c.flags.insert(Flag::Star);
                Ok(c)
            }
            Derivation::Cut { left, right, cut } => {
                let l = self.check_memo(ctx, left, memo).map_err(|e| e.under("cut.left"))?;
                let r = self.check_memo(ctx, right, memo).map_err(|e| e.under("cut.right"))?;
                let conclusion = apply_cut(&l.conclusion, &r.conclusion, cut).map_err(CheckError::at)?;
                let mut c = leaf_node(conclusion);
                c.absorb(&l);
                c.absorb(&r);
                Ok(c)
            }
            Derivation::Struct { premise, target } => {
                let p = self.check_memo(ctx, premise, memo).map_err(|e| e.under("struct"))?;
                let conclusion = apply_struct(&p.conclusion, target, ctx.theta).map_err(CheckError::at)?;
                let mut c = leaf_node(conclusion);
                c.absorb(&p);
                Ok(c)
            }
            Derivation::ClassicalLeaf { target } => {
                self.leaf(target).map_err(|e| CheckError::at(e.into()))?;
                Ok(leaf_node(target.clone()))
            }
            Derivation::Derived { rule, premises, arg } => {
                let mut checked = Vec::with_capacity(premises.len());
                for (i, p) in premises.iter().enumerate() {
                    let step = format!("{}.{i}", rule.name());
                    checked.push(self.check_memo(ctx, p, memo).map_err(|e| e.under(&step))?);
                }
                let concls: Vec<Sequent> = checked.iter().map(|c| c.conclusion.clone()).collect();
                let conclusion =
                    apply_derived_rule(*rule, &concls, arg.as_ref(), ctx.theta).map_err(|e| CheckError::at(e.into()))?;
                // Check the expansion with the premises as assumptions.
                let holes: Vec<Arc<Derivation>> =
                    concls.iter().map(|s| Arc::new(Derivation::Hyp { target: s.clone() })).collect();
                let expansion = expand_derived_rule(*rule, &holes, &concls, arg.as_ref(), ctx.theta)
                    .map_err(|e| CheckError::at(e.into()))?;
                let sub = Context { allow_hyps: true, ..*ctx };
                let e = self.check(&sub, &expansion).map_err(|e| e.under(&format!("{}.expansion", rule.name())))?;
                if e.conclusion != conclusion {
                    return Err(CheckError::at(CheckErrorKind::ExpansionMismatch {
                        expected: conclusion.to_string(),
                        found: e.conclusion.to_string(),
                    }));
                }
                let mut c = Checked { conclusion, ..Checked::default() };
                c.flags = e.flags;
                c.axioms = e.axioms;
                c.nodes = e.nodes;
                for p in &checked {
                    c.absorb(p);
                }
                Ok(c)
            }
            Derivation::Use { theorem, renaming } => self.check_use(ctx, theorem, renaming).map_err(CheckError::at),
            Derivation::Hyp { target } => {
                if !ctx.allow_hyps {
                    return Err(CheckError::at(CheckErrorKind::HypothesisNotAllowed));
                }
                let mut c = Checked { conclusion: target.clone(), ..Checked::default() };
                c.hyps.push(target.clone());
                Ok(c)
            }
        }
    }

    fn check_use(&self, ctx: &Context, name: &str, renaming: &Binding) -> Result<Checked, CheckErrorKind> {
        let lemma = ctx.lemmas.get(name).ok_or_else(|| CheckErrorKind::UnknownLemma(name.to_string()))?;
        let incompatible = |why: String| CheckErrorKind::IncompatibleLemma { name: name.to_string(), why };
        if lemma.quarantine && !ctx.quarantine {
            return Err(incompatible("it is quarantined".into()));
        }
        if !lemma.is_sequent() {
            return Err(incompatible("it has hypotheses".into()));
        }
        let first = ctx.theta.first().to_string();
        for k in renaming.keys() {
            if *k == first {
                return Err(CheckErrorKind::BadRenaming(k.clone(), "it fixes T and F".into()));
            }
            if !ctx.theta.contains(k) {
                return Err(CheckErrorKind::BadRenaming(k.clone(), "not an atom".into()));
            }
        }
        let mut out = Checked {
            conclusion: lemma.statement.rename_atoms(renaming),
            nodes: 1,
            ..Checked::default()
        };
        out.lemmas.insert(name.to_string());
        out.lemmas.extend(lemma.checked.lemmas.iter().cloned());
        let mut flags = lemma.checked.flags.clone();
        let mut axioms = lemma.checked.axioms.clone();
        match ctx.system {
            System::Classical => {
                if let Some(a) = axioms.iter().find(|a| a.is_bayesian()) {
                    return Err(incompatible(format!("it uses {a}")));
                }
            }
            System::DblStar => {
                if flags.contains(&Flag::B5) {
                    return Err(incompatible("it uses b5".into()));
                }
            }
            System::Dbl => {
                // b5.weak.A and b5.weak.B are replaced by their DBL derivations.
                for (flag, needed) in [
                    (Flag::B5WeakA, &[AxiomId::B5WeakA1, AxiomId::B5WeakA2][..]),
                    (Flag::B5WeakB, &[AxiomId::B5WeakB][..]),
                ] {
                    if !flags.contains(&flag) {
                        continue;
                    }
                    flags.remove(&flag);
                    for ax in needed {
                        axioms.remove(ax);
                        let bridge = ctx
                            .lemmas
                            .values()
                            .find(|t| t.proves == Some(*ax) && t.system == System::Dbl && !t.quarantine)
                            .ok_or_else(|| incompatible(format!("it uses {ax} and no DBL derivation of it is known")))?;
                        flags.extend(bridge.checked.flags.iter().copied());
                        axioms.extend(bridge.checked.axioms.iter().copied());
                        out.lemmas.insert(bridge.name.clone());
                    }
                }
            }
        }
        if flags.contains(&Flag::Star) && !ctx.quarantine {
            return Err(CheckErrorKind::StarOutsideQuarantine);
        }
        out.flags = flags;
        out.axioms = axioms;
        Ok(out)
    }
}

/// Checks a whole derivation tree in `system` with no library.
pub fn check_derivation(system: System, theta: &Theta, d: &Derivation) -> Result<Checked, CheckError> {
    let lemmas = BTreeMap::new();
    Checker::new().check(&Context::new(system, theta, &lemmas), d)
}

/// `phi, psi, eta` as the atoms `x, y, z`: the reading of `proves`.
pub fn schema_atoms() -> Binding {
    [("phi", "x"), ("psi", "y"), ("eta", "z")]
        .into_iter()
        .map(|(m, a)| (m.to_string(), Formula::atom(a)))
        .collect()
}

pub fn sequent_text(s: &Sequent, theta: &Theta) -> String {
    format_sequent(s, Style::Sugared, Some(theta))
}
