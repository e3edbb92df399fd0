//! Formulas, sequents, the surface grammar and the printer.
//!
//! The core tree has four constructors: atoms, negation, implication and the
//! conditional `(consequent | condition)`.  Disjunction, conjunction,
//! biconditional, independence and the constants are definitional sugar:
//!
//! | sugar      | core                         |
//! |------------|------------------------------|
//! | `a \/ b`   | `!a -> b`                    |
//! | `a /\ b`   | `!(!a \/ !b)`                |
//! | `a <-> b`  | `(a -> b) /\ (b -> a)`       |
//! | `a >< b`   | `(a | b) <-> a`              |
//! | `T`        | `t1 -> t1` (first atom)      |
//! | `F`        | `!T`                         |
//!
//! Precedence from loosest to tightest: `<->`, `->`, `><`, `\/`, `/\`, `!`.
//! `<->` and `->` associate to the right, the others to the left.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Formula tree.  `Meta` only occurs in axiom schemas; the parser never
/// produces it unless asked to read a schema.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Formula {
    Atom(Arc<str>),
    Meta(Arc<str>),
    Not(Arc<Formula>),
    Implies(Arc<Formula>, Arc<Formula>),
    /// `Cond(consequent, condition)` is `(consequent | condition)`.
    Cond(Arc<Formula>, Arc<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(Arc::from(name))
    }

    pub fn meta(name: &str) -> Formula {
        Formula::Meta(Arc::from(name))
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Arc::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Arc::new(a), Arc::new(b))
    }

    pub fn cond(consequent: Formula, condition: Formula) -> Formula {
        Formula::Cond(Arc::new(consequent), Arc::new(condition))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::implies(Formula::not(a), b)
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::not(Formula::or(Formula::not(a), Formula::not(b)))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(
            Formula::implies(a.clone(), b.clone()),
            Formula::implies(b, a),
        )
    }

    /// `psi >< phi`, i.e. `(psi | phi) <-> psi`.
    pub fn indep(psi: Formula, phi: Formula) -> Formula {
        Formula::iff(Formula::cond(psi.clone(), phi), psi)
    }

    /// Left-nested conjunction of a nonempty list.
    pub fn and_all(items: &[Formula]) -> Option<Formula> {
        let mut it = items.iter().cloned();
        let first = it.next()?;
        Some(it.fold(first, Formula::and))
    }

    /// Depth of the core tree; atoms have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Meta(_) => 0,
            Formula::Not(a) => 1 + a.depth(),
            Formula::Implies(a, b) | Formula::Cond(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Meta(_) => 1,
            Formula::Not(a) => 1 + a.size(),
            Formula::Implies(a, b) | Formula::Cond(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// True when no conditional occurs.
    pub fn is_classical(&self) -> bool {
        match self {
            Formula::Atom(_) | Formula::Meta(_) => true,
            Formula::Not(a) => a.is_classical(),
            Formula::Implies(a, b) => a.is_classical() && b.is_classical(),
            Formula::Cond(..) => false,
        }
    }

    pub fn has_meta(&self) -> bool {
        match self {
            Formula::Atom(_) => false,
            Formula::Meta(_) => true,
            Formula::Not(a) => a.has_meta(),
            Formula::Implies(a, b) | Formula::Cond(a, b) => a.has_meta() || b.has_meta(),
        }
    }

    /// Atom names in first-occurrence order.
    pub fn atoms(&self) -> Vec<Arc<str>> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut Vec<Arc<str>>) {
        match self {
            Formula::Atom(a) => {
                if !out.contains(a) {
                    out.push(a.clone());
                }
            }
            Formula::Meta(_) => {}
            Formula::Not(a) => a.collect_atoms(out),
            Formula::Implies(a, b) | Formula::Cond(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    pub fn metas(&self) -> BTreeSet<Arc<str>> {
        let mut out = BTreeSet::new();
        self.collect_metas(&mut out);
        out
    }

    fn collect_metas(&self, out: &mut BTreeSet<Arc<str>>) {
        match self {
            Formula::Atom(_) => {}
            Formula::Meta(m) => {
                out.insert(m.clone());
            }
            Formula::Not(a) => a.collect_metas(out),
            Formula::Implies(a, b) | Formula::Cond(a, b) => {
                a.collect_metas(out);
                b.collect_metas(out);
            }
        }
    }

    /// Simultaneous replacement of atoms by formulas.  Unmapped atoms stay.
    pub fn rename_atoms(&self, map: &BTreeMap<String, Formula>) -> Formula {
        match self {
            Formula::Atom(a) => match map.get(a.as_ref()) {
                Some(f) => f.clone(),
                None => self.clone(),
            },
            Formula::Meta(_) => self.clone(),
            Formula::Not(a) => Formula::not(a.rename_atoms(map)),
            Formula::Implies(a, b) => Formula::implies(a.rename_atoms(map), b.rename_atoms(map)),
            Formula::Cond(a, b) => Formula::cond(a.rename_atoms(map), b.rename_atoms(map)),
        }
    }
}

/// The declared, ordered atom set.  Its first atom fixes `T` and `F`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Theta {
    names: Vec<Arc<str>>,
}

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum ThetaError {
    #[error("atom set must not be empty")]
    Empty,
    #[error("duplicate atom `{0}`")]
    Duplicate(String),
    #[error("`{0}` is not a valid atom name")]
    BadName(String),
}

impl Theta {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Theta, ThetaError> {
        if names.is_empty() {
            return Err(ThetaError::Empty);
        }
        let mut out: Vec<Arc<str>> = Vec::with_capacity(names.len());
        for n in names {
            let n = n.as_ref().trim();
            if !is_ident(n) || n == "T" || n == "F" {
                return Err(ThetaError::BadName(n.to_string()));
            }
            if out.iter().any(|o| o.as_ref() == n) {
                return Err(ThetaError::Duplicate(n.to_string()));
            }
            out.push(Arc::from(n));
        }
        Ok(Theta { names: out })
    }

    /// Parses a comma or whitespace separated list such as `a,b` or `a b`.
    pub fn parse_list(text: &str) -> Result<Theta, ThetaError> {
        let names: Vec<&str> = text
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .collect();
        Theta::new(&names)
    }

    pub fn names(&self) -> &[Arc<str>] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn first(&self) -> &Arc<str> {
        &self.names[0]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n.as_ref() == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index_of(name).is_some()
    }

    pub fn atom(&self, i: usize) -> Formula {
        Formula::Atom(self.names[i].clone())
    }

    pub fn top(&self) -> Formula {
        let t = Formula::Atom(self.first().clone());
        Formula::implies(t.clone(), t)
    }

    pub fn bot(&self) -> Formula {
        Formula::not(self.top())
    }
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// A pair of formula sequences `G1, G2 |- D1, D2`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Sequent {
    pub ante: Vec<Formula>,
    pub succ: Vec<Formula>,
}

impl Sequent {
    pub fn new(ante: Vec<Formula>, succ: Vec<Formula>) -> Sequent {
        Sequent { ante, succ }
    }

    pub fn ante_set(&self) -> BTreeSet<&Formula> {
        self.ante.iter().collect()
    }

    pub fn succ_set(&self) -> BTreeSet<&Formula> {
        self.succ.iter().collect()
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.ante.iter().chain(self.succ.iter())
    }

    pub fn atoms(&self) -> Vec<Arc<str>> {
        let mut out: Vec<Arc<str>> = Vec::new();
        for f in self.formulas() {
            for a in f.atoms() {
                if !out.contains(&a) {
                    out.push(a);
                }
            }
        }
        out
    }

    pub fn rename_atoms(&self, map: &BTreeMap<String, Formula>) -> Sequent {
        Sequent {
            ante: self.ante.iter().map(|f| f.rename_atoms(map)).collect(),
            succ: self.succ.iter().map(|f| f.rename_atoms(map)).collect(),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum ParseError {
    #[error("lexical error at offset {pos}: unexpected character `{ch}`")]
    Lexical { pos: usize, ch: char },
    #[error("unknown atom `{name}` at offset {pos}")]
    UnknownAtom { name: String, pos: usize },
    #[error("unbalanced parentheses at offset {pos}")]
    Unbalanced { pos: usize },
    #[error("dangling operator `{op}` at offset {pos}")]
    Dangling { op: String, pos: usize },
    #[error("unexpected {found} at offset {pos}")]
    Unexpected { found: String, pos: usize },
    #[error("empty input")]
    Empty,
}

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum SubstError {
    #[error("unbound metavariable `{0}`")]
    Unbound(String),
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Tok {
    Ident(String),
    Meta(String),
    Top,
    Bot,
    LParen,
    RParen,
    Bar,
    Not,
    And,
    Or,
    Imp,
    Iff,
    Indep,
    Comma,
    Turnstile,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Meta(s) => format!("metavariable `?{s}`"),
            Tok::Top => "`T`".into(),
            Tok::Bot => "`F`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Not => "`!`".into(),
            Tok::And => "`/\\`".into(),
            Tok::Or => "`\\/`".into(),
            Tok::Imp => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::Indep => "`><`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Turnstile => "`|-`".into(),
        }
    }

    fn is_binary(&self) -> bool {
        matches!(self, Tok::And | Tok::Or | Tok::Imp | Tok::Iff | Tok::Indep)
    }

    fn op_text(&self) -> &'static str {
        match self {
            Tok::And => "/\\",
            Tok::Or => "\\/",
            Tok::Imp => "->",
            Tok::Iff => "<->",
            Tok::Indep => "><",
            Tok::Not => "!",
            _ => "",
        }
    }
}

fn lex(text: &str, allow_meta: bool) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let rest = &text[i..];
        let (tok, len) = if rest.starts_with("<->") {
            (Tok::Iff, 3)
        } else if rest.starts_with("->") {
            (Tok::Imp, 2)
        } else if rest.starts_with("/\\") {
            (Tok::And, 2)
        } else if rest.starts_with("\\/") {
            (Tok::Or, 2)
        } else if rest.starts_with("><") {
            (Tok::Indep, 2)
        } else if rest.starts_with("|-") {
            (Tok::Turnstile, 2)
        } else if c == '|' {
            (Tok::Bar, 1)
        } else if c == '!' {
            (Tok::Not, 1)
        } else if c == '(' {
            (Tok::LParen, 1)
        } else if c == ')' {
            (Tok::RParen, 1)
        } else if c == ',' {
            (Tok::Comma, 1)
        } else if c == '?' && allow_meta {
            let len = ident_len(&rest[1..]);
            if len == 0 {
                return Err(ParseError::Lexical { pos: i, ch: c });
            }
            (Tok::Meta(rest[1..1 + len].to_string()), 1 + len)
        } else if c.is_ascii_alphabetic() || c == '_' {
            let len = ident_len(rest);
            let word = &rest[..len];
            let tok = match word {
                "T" => Tok::Top,
                "F" => Tok::Bot,
                _ => Tok::Ident(word.to_string()),
            };
            (tok, len)
        } else {
            let ch = rest.chars().next().unwrap_or(c);
            return Err(ParseError::Lexical { pos: i, ch });
        };
        out.push((tok, i));
        i += len;
    }
    Ok(out)
}

fn ident_len(s: &str) -> usize {
    let mut len = 0;
    for (k, c) in s.char_indices() {
        let ok = if k == 0 {
            c.is_ascii_alphabetic() || c == '_'
        } else {
            c.is_ascii_alphanumeric() || c == '_' || c == '\''
        };
        if !ok {
            break;
        }
        len = k + c.len_utf8();
    }
    len
}

/// Name resolution context for the parser.
pub struct Scope<'a> {
    pub theta: &'a Theta,
    /// Named abbreviations expanded at parse time.
    pub macros: Option<&'a HashMap<String, Formula>>,
    pub allow_meta: bool,
}

impl<'a> Scope<'a> {
    pub fn new(theta: &'a Theta) -> Scope<'a> {
        Scope { theta, macros: None, allow_meta: false }
    }
}

struct Parser<'s, 'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    scope: &'s Scope<'a>,
    depth: usize,
}

const MAX_NESTING: usize = 2000;

impl<'s, 'a> Parser<'s, 'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn prev_op(&self) -> Option<&Tok> {
        if self.pos == 0 {
            return None;
        }
        self.toks.get(self.pos - 1).map(|(t, _)| t)
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.imp()?;
        if self.peek() == Some(&Tok::Iff) {
            self.bump();
            let rhs = self.iff()?;
            return Ok(Formula::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.indep()?;
        if self.peek() == Some(&Tok::Imp) {
            self.bump();
            let rhs = self.imp()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn indep(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.or()?;
        while self.peek() == Some(&Tok::Indep) {
            self.bump();
            let rhs = self.or()?;
            lhs = Formula::indep(lhs, rhs);
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.peek() == Some(&Tok::Or) {
            self.bump();
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Tok::And) {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if self.peek() == Some(&Tok::Not) {
            self.bump();
            self.depth += 1;
            if self.depth > MAX_NESTING {
                return Err(ParseError::Unexpected { found: "nesting too deep".into(), pos: self.offset() });
            }
            let inner = self.unary()?;
            self.depth -= 1;
            return Ok(Formula::not(inner));
        }
        self.primary()
    }

    fn missing_operand(&self) -> ParseError {
        let pos = self.offset();
        match self.prev_op() {
            Some(op) if op.is_binary() || *op == Tok::Not => {
                ParseError::Dangling { op: op.op_text().to_string(), pos }
            }
            _ => match self.peek() {
                None => ParseError::Empty,
                Some(t) if t.is_binary() => {
                    ParseError::Dangling { op: t.op_text().to_string(), pos }
                }
                Some(Tok::RParen) => ParseError::Unbalanced { pos },
                Some(t) => ParseError::Unexpected { found: t.describe(), pos },
            },
        }
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        let pos = self.offset();
        match self.peek().cloned() {
            Some(Tok::Ident(name)) => {
                self.bump();
                if self.scope.theta.contains(&name) {
                    let i = self.scope.theta.index_of(&name).unwrap_or(0);
                    return Ok(self.scope.theta.atom(i));
                }
                if let Some(m) = self.scope.macros.and_then(|m| m.get(&name)) {
                    return Ok(m.clone());
                }
                Err(ParseError::UnknownAtom { name, pos })
            }
            Some(Tok::Meta(name)) => {
                self.bump();
                Ok(Formula::meta(&name))
            }
            Some(Tok::Top) => {
                self.bump();
                Ok(self.scope.theta.top())
            }
            Some(Tok::Bot) => {
                self.bump();
                Ok(self.scope.theta.bot())
            }
            Some(Tok::LParen) => {
                self.bump();
                self.depth += 1;
                if self.depth > MAX_NESTING {
                    return Err(ParseError::Unexpected { found: "nesting too deep".into(), pos });
                }
                let inner = self.iff()?;
                let out = match self.peek() {
                    Some(Tok::RParen) => {
                        self.bump();
                        inner
                    }
                    Some(Tok::Bar) => {
                        self.bump();
                        let cond = self.iff()?;
                        match self.peek() {
                            Some(Tok::RParen) => {
                                self.bump();
                                Formula::cond(inner, cond)
                            }
                            None => return Err(ParseError::Unbalanced { pos }),
                            Some(t) => {
                                return Err(ParseError::Unexpected { found: t.describe(), pos: self.offset() })
                            }
                        }
                    }
                    None => return Err(ParseError::Unbalanced { pos }),
                    Some(t) => {
                        return Err(ParseError::Unexpected { found: t.describe(), pos: self.offset() })
                    }
                };
                self.depth -= 1;
                Ok(out)
            }
            _ => Err(self.missing_operand()),
        }
    }

    fn formula_list(&mut self, stop: &[Tok]) -> Result<Vec<Formula>, ParseError> {
        let mut out = Vec::new();
        match self.peek() {
            None => return Ok(out),
            Some(t) if stop.contains(t) => return Ok(out),
            _ => {}
        }
        loop {
            out.push(self.iff()?);
            match self.peek() {
                Some(Tok::Comma) => {
                    self.bump();
                }
                _ => return Ok(out),
            }
        }
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(Tok::RParen) => Err(ParseError::Unbalanced { pos: self.offset() }),
            Some(t) => Err(ParseError::Unexpected { found: t.describe(), pos: self.offset() }),
        }
    }
}

fn parser<'s, 'a>(text: &str, scope: &'s Scope<'a>) -> Result<Parser<'s, 'a>, ParseError> {
    let toks = lex(text, scope.allow_meta)?;
    Ok(Parser { toks, pos: 0, end: text.len(), scope, depth: 0 })
}

/// Parses a formula over `theta`, expanding all sugar.
pub fn parse(text: &str, theta: &Theta) -> Result<Formula, ParseError> {
    parse_in(text, &Scope::new(theta))
}

pub fn parse_in(text: &str, scope: &Scope) -> Result<Formula, ParseError> {
    let mut p = parser(text, scope)?;
    if p.toks.is_empty() {
        return Err(ParseError::Empty);
    }
    let f = p.iff()?;
    p.finish()?;
    Ok(f)
}

/// Parses a schema where `?name` denotes a metavariable.
pub fn parse_schema(text: &str, theta: &Theta) -> Result<Formula, ParseError> {
    let scope = Scope { theta, macros: None, allow_meta: true };
    parse_in(text, &scope)
}

/// Parses `G1, G2 |- D1, D2`; either side may be empty.
pub fn parse_sequent(text: &str, theta: &Theta) -> Result<Sequent, ParseError> {
    parse_sequent_in(text, &Scope::new(theta))
}

pub fn parse_sequent_in(text: &str, scope: &Scope) -> Result<Sequent, ParseError> {
    let mut p = parser(text, scope)?;
    let ante = p.formula_list(&[Tok::Turnstile])?;
    match p.bump() {
        Some(Tok::Turnstile) => {}
        None => return Err(ParseError::Unexpected { found: "end of input (expected `|-`)".into(), pos: text.len() }),
        Some(t) => {
            let pos = p.toks.get(p.pos - 1).map(|(_, q)| *q).unwrap_or(0);
            return Err(ParseError::Unexpected { found: t.describe(), pos });
        }
    }
    let succ = p.formula_list(&[])?;
    p.finish()?;
    Ok(Sequent { ante, succ })
}

/// Replaces every metavariable by its binding.
pub fn substitute(schema: &Formula, binding: &BTreeMap<String, Formula>) -> Result<Formula, SubstError> {
    Ok(match schema {
        Formula::Atom(_) => schema.clone(),
        Formula::Meta(m) => binding
            .get(m.as_ref())
            .cloned()
            .ok_or_else(|| SubstError::Unbound(m.to_string()))?,
        Formula::Not(a) => Formula::not(substitute(a, binding)?),
        Formula::Implies(a, b) => Formula::implies(substitute(a, binding)?, substitute(b, binding)?),
        Formula::Cond(a, b) => Formula::cond(substitute(a, binding)?, substitute(b, binding)?),
    })
}

/// Printer style.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Style {
    Core,
    Sugared,
}

const P_IFF: u8 = 1;
const P_IMP: u8 = 2;
const P_INDEP: u8 = 3;
const P_OR: u8 = 4;
const P_AND: u8 = 5;
const P_NOT: u8 = 6;
const P_ATOM: u8 = 7;

enum View<'f> {
    Atom(String),
    Not(&'f Formula),
    Bin(u8, &'static str, &'f Formula, &'f Formula),
    Cond(&'f Formula, &'f Formula),
}

fn match_or(f: &Formula) -> Option<(&Formula, &Formula)> {
    if let Formula::Implies(a, b) = f {
        if let Formula::Not(a) = a.as_ref() {
            return Some((a, b));
        }
    }
    None
}

fn match_and(f: &Formula) -> Option<(&Formula, &Formula)> {
    if let Formula::Not(inner) = f {
        if let Some((na, nb)) = match_or(inner) {
            if let (Formula::Not(a), Formula::Not(b)) = (na, nb) {
                return Some((a, b));
            }
        }
    }
    None
}

fn match_iff(f: &Formula) -> Option<(&Formula, &Formula)> {
    let (l, r) = match_and(f)?;
    if let (Formula::Implies(a, b), Formula::Implies(c, d)) = (l, r) {
        if a == d && b == c {
            return Some((a, b));
        }
    }
    None
}

fn match_indep(f: &Formula) -> Option<(&Formula, &Formula)> {
    let (l, r) = match_iff(f)?;
    if let Formula::Cond(psi, phi) = l {
        if psi.as_ref() == r {
            return Some((psi, phi));
        }
    }
    None
}

fn is_top(f: &Formula, theta: &Theta) -> bool {
    if let Formula::Implies(a, b) = f {
        if let (Formula::Atom(x), Formula::Atom(y)) = (a.as_ref(), b.as_ref()) {
            return x == theta.first() && y == theta.first();
        }
    }
    false
}

fn view<'f>(f: &'f Formula, style: Style, theta: Option<&Theta>) -> View<'f> {
    if style == Style::Sugared {
        if let Some(th) = theta {
            if is_top(f, th) {
                return View::Atom("T".into());
            }
            if let Formula::Not(a) = f {
                if is_top(a, th) {
                    return View::Atom("F".into());
                }
            }
        }
        if let Some((a, b)) = match_indep(f) {
            return View::Bin(P_INDEP, "><", a, b);
        }
        if let Some((a, b)) = match_iff(f) {
            return View::Bin(P_IFF, "<->", a, b);
        }
        if let Some((a, b)) = match_and(f) {
            return View::Bin(P_AND, "/\\", a, b);
        }
        if let Some((a, b)) = match_or(f) {
            return View::Bin(P_OR, "\\/", a, b);
        }
    }
    match f {
        Formula::Atom(a) => View::Atom(a.to_string()),
        Formula::Meta(m) => View::Atom(format!("?{m}")),
        Formula::Not(a) => View::Not(a),
        Formula::Implies(a, b) => View::Bin(P_IMP, "->", a, b),
        Formula::Cond(a, b) => View::Cond(a, b),
    }
}

fn prec(v: &View) -> u8 {
    match v {
        View::Atom(_) | View::Cond(..) => P_ATOM,
        View::Not(_) => P_NOT,
        View::Bin(p, ..) => *p,
    }
}

fn write_formula(out: &mut String, f: &Formula, style: Style, theta: Option<&Theta>, min_prec: u8) {
    let v = view(f, style, theta);
    let p = prec(&v);
    let paren = p < min_prec;
    if paren {
        out.push('(');
    }
    match v {
        View::Atom(s) => out.push_str(&s),
        View::Not(a) => {
            out.push('!');
            write_formula(out, a, style, theta, P_NOT);
        }
        View::Cond(a, b) => {
            out.push('(');
            write_formula(out, a, style, theta, 0);
            out.push_str(" | ");
            write_formula(out, b, style, theta, 0);
            out.push(')');
        }
        View::Bin(p, op, a, b) => {
            let right_assoc = p == P_IMP || p == P_IFF;
            let (lp, rp) = if right_assoc { (p + 1, p) } else { (p, p + 1) };
            write_formula(out, a, style, theta, lp);
            out.push(' ');
            out.push_str(op);
            out.push(' ');
            write_formula(out, b, style, theta, rp);
        }
    }
    if paren {
        out.push(')');
    }
}

/// Prints a formula.  `theta` is needed to recognize `T` and `F` in the
/// sugared style; without it they print expanded.
pub fn format(f: &Formula, style: Style, theta: Option<&Theta>) -> String {
    let mut out = String::new();
    write_formula(&mut out, f, style, theta, 0);
    out
}

pub fn format_sequent(s: &Sequent, style: Style, theta: Option<&Theta>) -> String {
    let side = |fs: &[Formula]| -> String {
        fs.iter().map(|f| format(f, style, theta)).collect::<Vec<_>>().join(", ")
    };
    let a = side(&s.ante);
    let d = side(&s.succ);
    match (a.is_empty(), d.is_empty()) {
        (true, true) => "|-".to_string(),
        (true, false) => format!("|- {d}"),
        (false, true) => format!("{a} |-"),
        (false, false) => format!("{a} |- {d}"),
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format(self, Style::Sugared, None))
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_sequent(self, Style::Sugared, None))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Theta {
        Theta::new(&["a", "b"]).unwrap()
    }

    #[test]
    fn implication_is_a_direct_constructor() {
        let th = ab();
        assert_eq!(parse("a -> b", &th).unwrap(), Formula::implies(Formula::atom("a"), Formula::atom("b")));
    }

    #[test]
    fn independence_sugar_expands() {
        let th = ab();
        let a = Formula::atom("a");
        let b = Formula::atom("b");
        let c = Formula::cond(a.clone(), b);
        let expected = Formula::and(
            Formula::implies(c.clone(), a.clone()),
            Formula::implies(a, c),
        );
        assert_eq!(parse("a >< b", &th).unwrap(), expected);
    }

    #[test]
    fn top_uses_first_atom() {
        let th = ab();
        let a = Formula::atom("a");
        assert_eq!(parse("T", &th).unwrap(), Formula::implies(a.clone(), a));
        assert_eq!(parse("T", &th).unwrap(), parse("T", &th).unwrap());
        assert_eq!(parse("F", &th).unwrap(), Formula::not(th.top()));
    }

    #[test]
    fn parse_errors() {
        let th = ab();
        assert!(matches!(parse("a -> ", &th), Err(ParseError::Dangling { .. })));
        assert!(matches!(parse("a /\\", &th), Err(ParseError::Dangling { .. })));
        assert!(matches!(parse("!", &th), Err(ParseError::Dangling { .. })));
        assert!(matches!(parse("a & b", &th), Err(ParseError::Lexical { ch: '&', .. })));
        assert!(matches!(parse("c", &th), Err(ParseError::UnknownAtom { .. })));
        assert!(matches!(parse("(a -> b", &th), Err(ParseError::Unbalanced { .. })));
        assert!(matches!(parse("a -> b)", &th), Err(ParseError::Unbalanced { .. })));
        assert!(matches!(parse("(b | a", &th), Err(ParseError::Unbalanced { .. })));
        assert!(matches!(parse("", &th), Err(ParseError::Empty)));
        assert!(matches!(parse("a b", &th), Err(ParseError::Unexpected { .. })));
    }

    #[test]
    fn printer_examples() {
        let th = ab();
        let a = Formula::atom("a");
        let b = Formula::atom("b");
        assert_eq!(format(&Formula::not(a.clone()), Style::Core, Some(&th)), "!a");
        assert_eq!(format(&Formula::cond(b.clone(), a.clone()), Style::Core, Some(&th)), "(b | a)");
        let or = Formula::or(a, b);
        assert_eq!(format(&or, Style::Sugared, Some(&th)), "a \\/ b");
        assert_eq!(format(&or, Style::Core, Some(&th)), "!a -> b");
    }

    #[test]
    fn precedence_and_associativity() {
        let th = ab();
        let a = Formula::atom("a");
        let b = Formula::atom("b");
        let f = parse("a -> b -> a", &th).unwrap();
        assert_eq!(f, Formula::implies(a.clone(), Formula::implies(b.clone(), a.clone())));
        let g = parse("!a /\\ b \\/ a", &th).unwrap();
        assert_eq!(g, Formula::or(Formula::and(Formula::not(a.clone()), b.clone()), a.clone()));
        let h = parse("a >< b -> a", &th).unwrap();
        assert_eq!(h, Formula::implies(Formula::indep(a.clone(), b.clone()), a.clone()));
        let k = parse("a \\/ b >< a", &th).unwrap();
        assert_eq!(k, Formula::indep(Formula::or(a.clone(), b.clone()), a));
    }

    #[test]
    fn sequents() {
        let th = ab();
        let s = parse_sequent("a, a -> b |- b", &th).unwrap();
        assert_eq!(s.ante.len(), 2);
        assert_eq!(s.succ.len(), 1);
        let e = parse_sequent("|- a", &th).unwrap();
        assert!(e.ante.is_empty());
        let r = parse_sequent("a |-", &th).unwrap();
        assert!(r.succ.is_empty());
        let m = parse_sequent("a -> b |- !a, (b | a)", &th).unwrap();
        assert_eq!(m.succ[1], Formula::cond(Formula::atom("b"), Formula::atom("a")));
        assert_eq!(format_sequent(&m, Style::Sugared, Some(&th)), "a -> b |- !a, (b | a)");
        assert!(parse_sequent("a", &th).is_err());
    }

    #[test]
    fn substitution() {
        let th = ab();
        let schema = parse_schema("?phi -> (?psi -> ?phi)", &th).unwrap();
        let mut bind = BTreeMap::new();
        bind.insert("phi".to_string(), Formula::atom("a"));
        bind.insert("psi".to_string(), Formula::atom("b"));
        assert_eq!(substitute(&schema, &bind).unwrap(), parse("a -> (b -> a)", &th).unwrap());

        let id = Formula::meta("phi");
        let mut one = BTreeMap::new();
        one.insert("phi".to_string(), parse("(b | a)", &th).unwrap());
        assert_eq!(substitute(&id, &one).unwrap(), parse("(b|a)", &th).unwrap());

        let partial = parse_schema("?phi -> ?psi", &th).unwrap();
        let mut only_phi = BTreeMap::new();
        only_phi.insert("phi".to_string(), Formula::atom("a"));
        assert_eq!(substitute(&partial, &only_phi), Err(SubstError::Unbound("psi".into())));
    }

    #[test]
    fn theta_validation() {
        assert_eq!(Theta::new::<&str>(&[]), Err(ThetaError::Empty));
        assert!(matches!(Theta::new(&["a", "a"]), Err(ThetaError::Duplicate(_))));
        assert!(matches!(Theta::new(&["T"]), Err(ThetaError::BadName(_))));
        assert_eq!(Theta::parse_list("a, b").unwrap().len(), 2);
    }

    #[test]
    fn macros_expand() {
        let th = ab();
        let mut m = HashMap::new();
        m.insert("P".to_string(), parse("(b | a)", &th).unwrap());
        let scope = Scope { theta: &th, macros: Some(&m), allow_meta: false };
        assert_eq!(parse_in("P -> a", &scope).unwrap(), parse("(b | a) -> a", &th).unwrap());
    }
}
