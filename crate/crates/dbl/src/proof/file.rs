//! Text format for library derivations.
//!
//! ```text
//! theta t, x, y, z, w
//!
//! theorem introspection
//! system dbl
//! group introspection
//! flags
//! statement |- !x, (x | x)
//! n1: LEAF => |- x -> x
//! n2: AX b1 [phi := x; psi := x]
//! n3: CUT n1 n2
//! conclude n3
//! end
//! ```
//!
//! `CUT l r` cuts on the last succedent of `l`.  `CHAIN r l1 l2 ..` is
//! `CUT ln (.. CUT l2 (CUT l1 r))`.  A trailing `=> sequent` is the target
//! of LEAF, HYP and STRUCT and an assertion everywhere else.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use thiserror::Error;

use super::{
    instantiate_schema, schema_atoms, sequent_text, AxiomId, Binding, Checker, Context, Derivation, DerivedRule,
    Flag, Memo, System, Theorem,
};
use crate::syntax::{parse_in, parse_sequent_in, Formula, Scope, Sequent, Theta};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{file}:{line}: {}{msg}", location(.theorem, .node))]
pub struct FileError {
    pub file: String,
    pub line: usize,
    pub theorem: Option<String>,
    pub node: Option<String>,
    pub msg: String,
}

fn location(theorem: &Option<String>, node: &Option<String>) -> String {
    match (theorem, node) {
        (Some(t), Some(n)) => format!("theorem {t}, node {n}: "),
        (Some(t), None) => format!("theorem {t}: "),
        _ => String::new(),
    }
}

struct Block {
    name: String,
    line: usize,
    system: Option<System>,
    /// Set by `parse_theorems_as`; wins over the `system` line.
    forced: Option<System>,
    group: Option<String>,
    flags: Option<BTreeSet<Flag>>,
    quarantine: bool,
    proves: Option<AxiomId>,
    statement: Option<Sequent>,
    macros: HashMap<String, Formula>,
    nodes: HashMap<String, Arc<Derivation>>,
    conclusions: HashMap<String, super::Checked>,
    memo: Memo,
    concluded: Option<String>,
}

impl Block {
    fn new(name: &str, line: usize) -> Block {
        Block {
            name: name.to_string(),
            line,
            system: None,
            forced: None,
            group: None,
            flags: None,
            quarantine: false,
            proves: None,
            statement: None,
            macros: HashMap::new(),
            nodes: HashMap::new(),
            conclusions: HashMap::new(),
            memo: Memo::new(),
            concluded: None,
        }
    }
}

fn is_ident(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-' | '\''))
}

/// Parses and checks every theorem in `text`, adding each to `lemmas` as
/// soon as it is checked.  Returns the names in file order.
pub fn parse_theorems(
    file: &str,
    text: &str,
    lemmas: &mut BTreeMap<String, Theorem>,
    checker: &Checker,
) -> Result<Vec<String>, FileError> {
    parse_theorems_as(file, text, lemmas, checker, None)
}

/// Like [`parse_theorems`], but every theorem is checked in `system` when
/// given, whatever its `system` line says.
pub fn parse_theorems_as(
    file: &str,
    text: &str,
    lemmas: &mut BTreeMap<String, Theorem>,
    checker: &Checker,
    system: Option<System>,
) -> Result<Vec<String>, FileError> {
    let mut theta: Option<Theta> = None;
    let mut block: Option<Block> = None;
    let mut names = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let l = raw.split('#').next().unwrap_or("").trim();
        if l.is_empty() {
            continue;
        }
        let err = |b: &Option<Block>, node: Option<&str>, msg: String| FileError {
            file: file.to_string(),
            line,
            theorem: b.as_ref().map(|b| b.name.clone()),
            node: node.map(str::to_string),
            msg,
        };
        let (head, rest) = l.split_once(char::is_whitespace).map(|(h, r)| (h, r.trim())).unwrap_or((l, ""));
        match (head, block.is_some()) {
            ("theta", false) => {
                theta = Some(Theta::parse_list(rest).map_err(|e| err(&block, None, e.to_string()))?);
            }
            ("theorem", false) => {
                if theta.is_none() {
                    return Err(err(&block, None, "`theta` must precede the first theorem".into()));
                }
                if !is_ident(rest) {
                    return Err(err(&block, None, format!("bad theorem name `{rest}`")));
                }
                if lemmas.contains_key(rest) {
                    return Err(err(&block, None, format!("duplicate theorem `{rest}`")));
                }
                let mut b = Block::new(rest, line);
                b.forced = system;
                block = Some(b);
            }
            (_, false) => return Err(err(&block, None, format!("unexpected `{head}` outside a theorem"))),
            (_, true) => {
                let th = theta.as_ref().expect("theta precedes theorems");
                let done = block_line(block.as_mut().expect("inside"), head, rest, th, lemmas, checker)
                    .map_err(|(node, msg)| err(&block, node.as_deref(), msg))?;
                if done {
                    let b = block.take().expect("inside");
                    let name = b.name.clone();
                    let t = finish(b, file, th).map_err(|msg| FileError { theorem: Some(name), ..err(&None, None, msg) })?;
                    names.push(t.name.clone());
                    lemmas.insert(t.name.clone(), t);
                }
            }
        }
    }
    if let Some(b) = block {
        return Err(FileError {
            file: file.to_string(),
            line: b.line,
            theorem: Some(b.name),
            node: None,
            msg: "missing `end`".into(),
        });
    }
    Ok(names)
}

type LineError = (Option<String>, String);

fn plain(msg: impl Into<String>) -> LineError {
    (None, msg.into())
}

/// Handles one line inside a theorem block; true on `end`.
fn block_line(
    b: &mut Block,
    head: &str,
    rest: &str,
    theta: &Theta,
    lemmas: &BTreeMap<String, Theorem>,
    checker: &Checker,
) -> Result<bool, LineError> {
    match head {
        "system" => {
            let named = System::parse(rest).ok_or_else(|| plain(format!("unknown system `{rest}`")))?;
            b.system = Some(b.forced.unwrap_or(named));
        }
        "group" => b.group = Some(rest.to_string()),
        "flags" => {
            let mut set = BTreeSet::new();
            for w in rest.split([',', ' ']).map(str::trim).filter(|w| !w.is_empty()) {
                set.insert(Flag::parse(w).ok_or_else(|| plain(format!("unknown flag `{w}`")))?);
            }
            b.flags = Some(set);
        }
        "quarantine" => b.quarantine = true,
        "proves" => {
            b.proves = Some(AxiomId::parse(rest).ok_or_else(|| plain(format!("unknown axiom `{rest}`")))?);
        }
        "statement" => {
            let scope = Scope { theta, macros: Some(&b.macros), allow_meta: false };
            b.statement = Some(parse_sequent_in(rest, &scope).map_err(|e| plain(e.to_string()))?);
        }
        "let" => {
            let (name, body) = rest.split_once('=').ok_or_else(|| plain("expected `let NAME = formula`"))?;
            let name = name.trim();
            if !is_ident(name) || theta.contains(name) {
                return Err(plain(format!("bad macro name `{name}`")));
            }
            let scope = Scope { theta, macros: Some(&b.macros), allow_meta: false };
            let f = parse_in(body.trim(), &scope).map_err(|e| plain(e.to_string()))?;
            b.macros.insert(name.to_string(), f);
        }
        "conclude" => {
            if !b.nodes.contains_key(rest) {
                return Err(plain(format!("unknown node `{rest}`")));
            }
            b.concluded = Some(rest.to_string());
        }
        "end" => return Ok(true),
        _ => {
            let Some(id) = head.strip_suffix(':') else {
                return Err(plain(format!("unknown directive `{head}`")));
            };
            node_line(b, id, rest, theta, lemmas, checker).map_err(|m| (Some(id.to_string()), m))?;
        }
    }
    Ok(false)
}

fn parse_bindings(text: &str, scope: &Scope) -> Result<Binding, String> {
    let mut out = Binding::new();
    for item in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item.split_once(":=").ok_or_else(|| format!("expected `key := formula`, found `{item}`"))?;
        let k = k.trim();
        let f = parse_in(v.trim(), scope).map_err(|e| format!("in binding for {k}: {e}"))?;
        if out.insert(k.to_string(), f).is_some() {
            return Err(format!("`{k}` bound twice"));
        }
    }
    Ok(out)
}

fn node_line(
    b: &mut Block,
    id: &str,
    rest: &str,
    theta: &Theta,
    lemmas: &BTreeMap<String, Theorem>,
    checker: &Checker,
) -> Result<(), String> {
    if !is_ident(id) {
        return Err(format!("bad node id `{id}`"));
    }
    if b.nodes.contains_key(id) {
        return Err("node defined twice".into());
    }
    let system = b.system.ok_or("`system` must precede the first node")?;
    let scope = Scope { theta, macros: Some(&b.macros), allow_meta: false };

    let (body, target) = match rest.split_once("=>") {
        Some((l, r)) => (l.trim(), Some(parse_sequent_in(r.trim(), &scope).map_err(|e| e.to_string())?)),
        None => (rest.trim(), None),
    };
    let (words, binding) = match body.find('[') {
        Some(open) => {
            let close = body.rfind(']').filter(|&c| c > open).ok_or("unclosed `[`")?;
            if !body[close + 1..].trim().is_empty() {
                return Err("text after `]`".into());
            }
            (&body[..open], Some(parse_bindings(&body[open + 1..close], &scope)?))
        }
        None => (body, None),
    };
    let mut words = words.split_whitespace();
    let rule = words.next().ok_or("missing rule")?;
    let args: Vec<&str> = words.collect();
    let child = |n: &str| -> Result<Arc<Derivation>, String> {
        b.nodes.get(n).cloned().ok_or_else(|| format!("unknown node `{n}`"))
    };
    let arity = |n: usize| -> Result<(), String> {
        if args.len() == n {
            Ok(())
        } else {
            Err(format!("{rule} takes {n} node arguments, found {}", args.len()))
        }
    };
    let no_binding = || -> Result<(), String> {
        if binding.is_some() {
            Err(format!("{rule} takes no bindings"))
        } else {
            Ok(())
        }
    };
    let last_succ = |n: &str| -> Result<Formula, String> {
        let c = b.conclusions.get(n).ok_or_else(|| format!("unknown node `{n}`"))?;
        c.conclusion.succ.last().cloned().ok_or_else(|| format!("node `{n}` has an empty succedent"))
    };
    let need_target = || target.clone().ok_or_else(|| format!("{rule} needs `=> sequent`"));

    let mut target_is_assertion = true;
    let d: Derivation = match rule {
        "AX" | "MP" => {
            let (schema, extra) = if rule == "MP" {
                (AxiomId::Mp, 0)
            } else {
                let name = args.first().ok_or("AX needs an axiom name")?;
                (AxiomId::parse(name).ok_or_else(|| format!("unknown axiom `{name}`"))?, 1)
            };
            arity(extra)?;
            Derivation::Axiom { schema, binding: binding.unwrap_or_default() }
        }
        "STAR" => {
            arity(0)?;
            Derivation::Star { binding: binding.unwrap_or_default() }
        }
        "LEAF" | "HYP" => {
            arity(0)?;
            no_binding()?;
            target_is_assertion = false;
            let t = need_target()?;
            if rule == "LEAF" {
                Derivation::ClassicalLeaf { target: t }
            } else {
                Derivation::Hyp { target: t }
            }
        }
        "STRUCT" => {
            arity(1)?;
            no_binding()?;
            target_is_assertion = false;
            Derivation::Struct { premise: child(args[0])?, target: need_target()? }
        }
        "CUT" => {
            arity(2)?;
            no_binding()?;
            Derivation::Cut { left: child(args[0])?, right: child(args[1])?, cut: last_succ(args[0])? }
        }
        "CHAIN" => {
            if args.len() < 2 {
                return Err("CHAIN needs a right premise and at least one left premise".into());
            }
            no_binding()?;
            let mut acc = child(args[0])?;
            for l in &args[1..] {
                acc = Arc::new(Derivation::Cut { left: child(l)?, right: acc, cut: last_succ(l)? });
            }
            Arc::try_unwrap(acc).unwrap_or_else(|a| (*a).clone())
        }
        "USE" => {
            let name = args.first().ok_or("USE needs a theorem name")?;
            arity(1)?;
            Derivation::Use { theorem: name.to_string(), renaming: binding.unwrap_or_default() }
        }
        other => {
            let r = DerivedRule::parse(other).ok_or_else(|| format!("unknown rule `{other}`"))?;
            let premises = args.iter().map(|a| child(a)).collect::<Result<Vec<_>, _>>()?;
            let arg = match binding {
                None => None,
                Some(bd) => {
                    let key = if r == DerivedRule::I { "phi" } else { "psi" };
                    if bd.len() != 1 || !bd.contains_key(key) {
                        return Err(format!("{other} takes a single binding `{key} := formula`"));
                    }
                    bd.into_values().next()
                }
            };
            Derivation::Derived { rule: r, premises, arg }
        }
    };
    let arc = Arc::new(d);
    let ctx = context(b, system, theta, lemmas);
    let checked = checker.check_memo(&ctx, &arc, &mut b.memo).map_err(|e| e.to_string())?;
    if target_is_assertion {
        if let Some(t) = &target {
            if *t != checked.conclusion {
                return Err(format!(
                    "asserted {} but derived {}",
                    sequent_text(t, theta),
                    sequent_text(&checked.conclusion, theta)
                ));
            }
        }
    }
    b.nodes.insert(id.to_string(), arc);
    b.conclusions.insert(id.to_string(), checked);
    Ok(())
}

fn context<'a>(b: &Block, system: System, theta: &'a Theta, lemmas: &'a BTreeMap<String, Theorem>) -> Context<'a> {
    Context { system, theta, quarantine: b.quarantine, allow_hyps: true, lemmas }
}

fn finish(b: Block, file: &str, theta: &Theta) -> Result<Theorem, String> {
    let system = b.system.ok_or("missing `system`")?;
    let statement = b.statement.ok_or("missing `statement`")?;
    let root = b.concluded.ok_or("missing `conclude`")?;
    let declared = b.flags.ok_or("missing `flags`")?;
    let checked = b.conclusions[&root].clone();
    if checked.conclusion != statement {
        return Err(format!(
            "node {root} derives {}, statement is {}",
            sequent_text(&checked.conclusion, theta),
            sequent_text(&statement, theta)
        ));
    }
    if let Some(f) = checked.flags.iter().find(|f| !declared.contains(f)) {
        return Err(format!("derivation uses {f}, which is not among the declared flags"));
    }
    if let Some(ax) = b.proves {
        let metas: BTreeSet<String> = ax.schema().formulas().flat_map(|f| f.metas()).map(|m| m.to_string()).collect();
        let mut binding = schema_atoms();
        binding.retain(|k, _| metas.contains(k));
        let want = instantiate_schema(ax.schema(), &binding).map_err(|e| e.to_string())?;
        if want != statement {
            return Err(format!("`proves {ax}` expects {}", sequent_text(&want, theta)));
        }
        if !checked.hyps.is_empty() {
            return Err(format!("`proves {ax}` needs a derivation without hypotheses"));
        }
    }
    Ok(Theorem {
        group: b.group.unwrap_or_else(|| b.name.clone()),
        name: b.name,
        system,
        declared,
        quarantine: b.quarantine,
        proves: b.proves,
        statement,
        derivation: b.nodes[&root].clone(),
        checked,
        source: file.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
theta t, x, y
theorem intro
system dbl
flags
statement |- !x, (x | x)
n1: LEAF => |- x -> x
n2: AX b1 [phi := x; psi := x]
n3: CUT n1 n2 => |- !x, (x | x)
conclude n3
end

theorem intro-twice
system dbl
flags
statement |- !y, (y | y)
u: USE intro [x := y]
conclude u
end
";

    fn load(text: &str) -> Result<BTreeMap<String, Theorem>, FileError> {
        let mut lemmas = BTreeMap::new();
        parse_theorems("sample.dbl", text, &mut lemmas, &Checker::new())?;
        Ok(lemmas)
    }

    #[test]
    fn sample_checks() {
        let lemmas = load(SAMPLE).unwrap();
        assert_eq!(lemmas.len(), 2);
        assert!(lemmas["intro"].checked.axioms.contains(&AxiomId::B1));
        assert!(lemmas["intro-twice"].checked.lemmas.contains("intro"));
    }

    #[test]
    fn wrong_assertion_names_the_node() {
        let bad = SAMPLE.replace("n3: CUT n1 n2 => |- !x, (x | x)", "n3: CUT n1 n2 => |- (x | x)");
        let e = load(&bad).unwrap_err();
        assert_eq!(e.node.as_deref(), Some("n3"));
        assert_eq!(e.line, 8);
        assert!(e.msg.contains("asserted"), "{e}");
    }

    #[test]
    fn bad_leaf_rejected() {
        let bad = SAMPLE.replace("n1: LEAF => |- x -> x", "n1: LEAF => |- x -> y");
        let e = load(&bad).unwrap_err();
        assert_eq!(e.node.as_deref(), Some("n1"));
    }

    #[test]
    fn undeclared_flag_rejected() {
        let text = "\
theta t, x, y
theorem flip
system dbl
flags
statement y >< x |- x >< y
a: AX b5 [phi := x; psi := y]
conclude a
end
";
        let e = load(text).unwrap_err();
        assert!(e.msg.contains("declared flags"), "{e}");
        assert!(load(&text.replace("flags\n", "flags b5\n")).is_ok());
    }

    #[test]
    fn classical_host_rejects_bayesian_lemma() {
        let text = format!("{SAMPLE}\ntheorem host\nsystem classical\nflags\nstatement |- !y, (y | y)\nu: USE intro [x := y]\nconclude u\nend\n");
        let e = load(&text).unwrap_err();
        assert_eq!(e.node.as_deref(), Some("u"));
    }

    #[test]
    fn chain_is_nested_cut() {
        let text = "\
theta t, x, y
theorem ch
system classical
flags
statement x |- y -> x
a: LEAF => x |- y -> x
b: LEAF => y -> x |- y -> x
c: CHAIN b a => x |- y -> x
conclude c
end
";
        assert!(load(text).is_ok());
    }
}
