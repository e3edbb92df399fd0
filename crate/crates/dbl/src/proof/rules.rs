//! Derived sequent rules.  Each one is a macro over CUT, STRUCT, classical
//! leaves and `mp`; the checker re-derives the macro conclusion from the
//! expansion every time a rule is used.
//!
//! The principal formula of a premise is its first succedent, or its last
//! antecedent for rules acting on the left.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use super::{AxiomId, Binding, Derivation};
use crate::syntax::{Formula, Sequent, Theta};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum DerivedRule {
    I,
    AndL,
    OrR,
    AndR,
    ImpL,
    NotL,
    OrL,
    ImpR,
    NotR,
}

impl DerivedRule {
    pub const ALL: [DerivedRule; 9] = [
        DerivedRule::I,
        DerivedRule::AndL,
        DerivedRule::OrR,
        DerivedRule::AndR,
        DerivedRule::ImpL,
        DerivedRule::NotL,
        DerivedRule::OrL,
        DerivedRule::ImpR,
        DerivedRule::NotR,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DerivedRule::I => "I",
            DerivedRule::AndL => "ANDL",
            DerivedRule::OrR => "ORR",
            DerivedRule::AndR => "ANDR",
            DerivedRule::ImpL => "IMPL",
            DerivedRule::NotL => "NOTL",
            DerivedRule::OrL => "ORL",
            DerivedRule::ImpR => "IMPR",
            DerivedRule::NotR => "NOTR",
        }
    }

    pub fn parse(s: &str) -> Option<DerivedRule> {
        DerivedRule::ALL.iter().copied().find(|r| r.name() == s)
    }

    /// False for the rules that do not hold in DBL.
    pub fn is_derivable(self) -> bool {
        !matches!(self, DerivedRule::OrL | DerivedRule::ImpR | DerivedRule::NotR)
    }

    fn arity(self) -> usize {
        match self {
            DerivedRule::I => 0,
            DerivedRule::AndR | DerivedRule::ImpL | DerivedRule::OrL => 2,
            _ => 1,
        }
    }

    fn takes_arg(self) -> bool {
        matches!(self, DerivedRule::I | DerivedRule::AndL | DerivedRule::OrR)
    }
}

impl fmt::Display for DerivedRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RuleError {
    #[error("{0} is not derivable in DBL")]
    NotDerivable(DerivedRule),
    #[error("{rule} takes {expected} premises, found {found}")]
    Arity { rule: DerivedRule, expected: usize, found: usize },
    #[error("{0} needs a formula argument")]
    MissingArgument(DerivedRule),
    #[error("{0} takes no formula argument")]
    UnexpectedArgument(DerivedRule),
    #[error("premise {index} of {rule} has no principal {side}")]
    NoPrincipal { rule: DerivedRule, index: usize, side: &'static str },
}

fn checks(rule: DerivedRule, premises: &[Sequent], arg: Option<&Formula>) -> Result<(), RuleError> {
    if !rule.is_derivable() {
        return Err(RuleError::NotDerivable(rule));
    }
    if premises.len() != rule.arity() {
        return Err(RuleError::Arity { rule, expected: rule.arity(), found: premises.len() });
    }
    match (rule.takes_arg(), arg.is_some()) {
        (true, false) => return Err(RuleError::MissingArgument(rule)),
        (false, true) => return Err(RuleError::UnexpectedArgument(rule)),
        _ => {}
    }
    let need = |index: usize, side: &'static str| {
        let p: &Sequent = &premises[index];
        let empty = if side == "succedent" { p.succ.is_empty() } else { p.ante.is_empty() };
        if empty {
            Err(RuleError::NoPrincipal { rule, index, side })
        } else {
            Ok(())
        }
    };
    match rule {
        DerivedRule::AndL => need(0, "antecedent"),
        DerivedRule::OrR | DerivedRule::NotL => need(0, "succedent"),
        DerivedRule::AndR => need(0, "succedent").and(need(1, "succedent")),
        DerivedRule::ImpL => need(0, "succedent").and(need(1, "antecedent")),
        _ => Ok(()),
    }
}

fn first_rest(v: &[Formula]) -> (Formula, Vec<Formula>) {
    (v[0].clone(), v[1..].to_vec())
}

fn init_last(v: &[Formula]) -> (Vec<Formula>, Formula) {
    (v[..v.len() - 1].to_vec(), v[v.len() - 1].clone())
}

fn cat(parts: &[&[Formula]]) -> Vec<Formula> {
    parts.iter().flat_map(|p| p.iter().cloned()).collect()
}

/// Conclusion of `rule` applied to `premises`.
pub fn apply_derived_rule(
    rule: DerivedRule,
    premises: &[Sequent],
    arg: Option<&Formula>,
    _theta: &Theta,
) -> Result<Sequent, RuleError> {
    checks(rule, premises, arg)?;
    Ok(match rule {
        DerivedRule::I => {
            let phi = arg.expect("checked").clone();
            Sequent::new(vec![phi.clone()], vec![phi])
        }
        DerivedRule::AndL => {
            let p = &premises[0];
            let (gamma, phi) = init_last(&p.ante);
            let psi = arg.expect("checked").clone();
            Sequent::new(cat(&[&gamma, &[Formula::and(phi, psi)]]), p.succ.clone())
        }
        DerivedRule::OrR => {
            let p = &premises[0];
            let (phi, delta) = first_rest(&p.succ);
            let psi = arg.expect("checked").clone();
            Sequent::new(p.ante.clone(), cat(&[&[Formula::or(phi, psi)], &delta]))
        }
        DerivedRule::AndR => {
            let (p, q) = (&premises[0], &premises[1]);
            let (phi, delta) = first_rest(&p.succ);
            let (psi, pi) = first_rest(&q.succ);
            Sequent::new(cat(&[&p.ante, &q.ante]), cat(&[&[Formula::and(phi, psi)], &delta, &pi]))
        }
        DerivedRule::ImpL => {
            let (p, q) = (&premises[0], &premises[1]);
            let (phi, delta) = first_rest(&p.succ);
            let (sigma, psi) = init_last(&q.ante);
            Sequent::new(cat(&[&p.ante, &sigma, &[Formula::implies(phi, psi)]]), cat(&[&delta, &q.succ]))
        }
        DerivedRule::NotL => {
            let p = &premises[0];
            let (phi, delta) = first_rest(&p.succ);
            Sequent::new(cat(&[&p.ante, &[Formula::not(phi)]]), delta)
        }
        DerivedRule::OrL | DerivedRule::ImpR | DerivedRule::NotR => unreachable!("rejected above"),
    })
}

fn leaf(ante: Vec<Formula>, succ: Vec<Formula>) -> Arc<Derivation> {
    Arc::new(Derivation::ClassicalLeaf { target: Sequent::new(ante, succ) })
}

fn structure(premise: Arc<Derivation>, ante: Vec<Formula>, succ: Vec<Formula>) -> Arc<Derivation> {
    Arc::new(Derivation::Struct { premise, target: Sequent::new(ante, succ) })
}

fn cut(left: Arc<Derivation>, right: Arc<Derivation>, f: &Formula) -> Arc<Derivation> {
    Arc::new(Derivation::Cut { left, right, cut: f.clone() })
}

/// Expansion of `rule` into base steps, with `premises[i]` proving
/// `concls[i]`.
pub fn expand_derived_rule(
    rule: DerivedRule,
    premises: &[Arc<Derivation>],
    concls: &[Sequent],
    arg: Option<&Formula>,
    theta: &Theta,
) -> Result<Derivation, RuleError> {
    let target = apply_derived_rule(rule, concls, arg, theta)?;
    let d: Arc<Derivation> = match rule {
        DerivedRule::I => leaf(target.ante.clone(), target.succ.clone()),
        DerivedRule::AndL => {
            let p = &concls[0];
            let (_, phi) = init_last(&p.ante);
            let conj = target.ante.last().expect("principal").clone();
            let c = cut(leaf(vec![conj], vec![phi.clone()]), premises[0].clone(), &phi);
            structure(c, target.ante.clone(), target.succ.clone())
        }
        DerivedRule::OrR => {
            let p = &concls[0];
            let (phi, delta) = first_rest(&p.succ);
            let disj = target.succ[0].clone();
            let s = structure(premises[0].clone(), p.ante.clone(), cat(&[&delta, &[phi.clone()]]));
            let c = cut(s, leaf(vec![phi.clone()], vec![disj]), &phi);
            structure(c, target.ante.clone(), target.succ.clone())
        }
        DerivedRule::AndR => {
            let (p, q) = (&concls[0], &concls[1]);
            let (phi, delta) = first_rest(&p.succ);
            let (psi, pi) = first_rest(&q.succ);
            let conj = target.succ[0].clone();
            let both = leaf(vec![phi.clone(), psi.clone()], vec![conj]);
            let s1 = structure(premises[0].clone(), p.ante.clone(), cat(&[&delta, &[phi.clone()]]));
            let c1 = cut(s1, both, &phi);
            let s2 = structure(premises[1].clone(), q.ante.clone(), cat(&[&pi, &[psi.clone()]]));
            let c2 = cut(s2, c1, &psi);
            structure(c2, target.ante.clone(), target.succ.clone())
        }
        DerivedRule::ImpL => {
            let (p, q) = (&concls[0], &concls[1]);
            let (phi, delta) = first_rest(&p.succ);
            let (_, psi) = init_last(&q.ante);
            let binding: Binding = [("phi".to_string(), phi.clone()), ("psi".to_string(), psi.clone())].into();
            let mp = Arc::new(Derivation::Axiom { schema: AxiomId::Mp, binding });
            let c1 = cut(mp, premises[1].clone(), &psi);
            let s1 = structure(premises[0].clone(), p.ante.clone(), cat(&[&delta, &[phi.clone()]]));
            let c2 = cut(s1, c1, &phi);
            structure(c2, target.ante.clone(), target.succ.clone())
        }
        DerivedRule::NotL => {
            let p = &concls[0];
            let (phi, delta) = first_rest(&p.succ);
            let neg = Formula::not(phi.clone());
            let absurd = leaf(vec![phi.clone(), neg.clone()], vec![theta.bot()]);
            let dropped = structure(absurd, vec![phi.clone(), neg], vec![]);
            let s1 = structure(premises[0].clone(), p.ante.clone(), cat(&[&delta, &[phi.clone()]]));
            cut(s1, dropped, &phi)
        }
        DerivedRule::OrL | DerivedRule::ImpR | DerivedRule::NotR => unreachable!("rejected above"),
    };
    Ok(Arc::try_unwrap(d).unwrap_or_else(|a| (*a).clone()))
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use proptest::prelude::*;

    use super::super::{Checker, Context, System};
    use super::*;
    use crate::syntax::parse_sequent;

    fn th() -> Theta {
        Theta::new(&["t", "a", "b", "c", "d"]).unwrap()
    }

    fn seq(s: &str) -> Sequent {
        parse_sequent(s, &th()).unwrap()
    }

    fn run(rule: DerivedRule, premises: &[Sequent], arg: Option<Formula>) -> Result<Sequent, String> {
        let t = th();
        let lemmas = BTreeMap::new();
        let ctx = Context { allow_hyps: true, ..Context::new(System::Dbl, &t, &lemmas) };
        let holes: Vec<Arc<Derivation>> =
            premises.iter().map(|s| Arc::new(Derivation::Hyp { target: s.clone() })).collect();
        let d = Derivation::Derived { rule, premises: holes, arg };
        Checker::new().check(&ctx, &d).map(|c| c.conclusion).map_err(|e| e.to_string())
    }

    #[test]
    fn and_left() {
        let out = run(DerivedRule::AndL, &[seq("c, a |- d")], Some(Formula::atom("b"))).unwrap();
        assert_eq!(out, seq("c, a /\\ b |- d"));
    }

    #[test]
    fn implication_left() {
        let out = run(DerivedRule::ImpL, &[seq("c |- a, d"), seq("b |- (a | b)")], None).unwrap();
        assert_eq!(out, seq("c, a -> b |- d, (a | b)"));
    }

    #[test]
    fn underivable_rules_rejected() {
        for r in [DerivedRule::OrL, DerivedRule::ImpR, DerivedRule::NotR] {
            let err = run(r, &[seq("a |- b"), seq("c |- b")], None).unwrap_err();
            assert!(err.contains("not derivable"), "{err}");
        }
    }

    #[test]
    fn missing_principal() {
        assert!(run(DerivedRule::NotL, &[seq("a |-")], None).is_err());
    }

    fn formula() -> impl Strategy<Value = Formula> {
        let leaf = prop_oneof![Just("a"), Just("b"), Just("c"), Just("d")].prop_map(Formula::atom);
        leaf.prop_recursive(3, 12, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(Formula::not),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
                (inner.clone(), inner).prop_map(|(a, b)| Formula::cond(a, b)),
            ]
        })
    }

    fn side() -> impl Strategy<Value = Vec<Formula>> {
        proptest::collection::vec(formula(), 0..3)
    }

    fn nonempty() -> impl Strategy<Value = Vec<Formula>> {
        proptest::collection::vec(formula(), 1..3)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn expansions_match_macro_conclusions(
            g in side(), d in nonempty(), g2 in nonempty(), d2 in nonempty(), extra in formula(), which in 0usize..6
        ) {
            let rule = [DerivedRule::I, DerivedRule::AndL, DerivedRule::OrR, DerivedRule::AndR, DerivedRule::ImpL, DerivedRule::NotL][which];
            let p0 = Sequent::new(if rule == DerivedRule::AndL { g2.clone() } else { g.clone() }, d.clone());
            let premises: Vec<Sequent> = match rule {
                DerivedRule::I => vec![],
                DerivedRule::AndR => vec![p0, Sequent::new(g.clone(), d2.clone())],
                DerivedRule::ImpL => vec![p0, Sequent::new(g2.clone(), d2.clone())],
                _ => vec![p0],
            };
            let arg = rule.takes_arg().then(|| extra.clone());
            let expected = apply_derived_rule(rule, &premises, arg.as_ref(), &th()).unwrap();
            let got = run(rule, &premises, arg);
            prop_assert_eq!(got, Ok(expected));
        }
    }
}
