//! Left-hand-side evaluation: enumerate consistent variable bindings
//! against the store, then fold the expression tree into a belief interval.

use std::collections::BTreeSet;

use crate::ast::{Atom, Binding, LhsExpr, Rule};
use crate::interval::{conjoin, disjoin, Correlation, Interval};
use crate::kb::KnowledgeBase;

/// One grounded instance of a rule's left-hand side.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundedLhs {
    pub binding: Binding,
    pub interval: Interval,
}

/// Evaluates a rule's left-hand side for every consistent binding, in
/// binding order.
///
/// Bindings come from unifying each variable-bearing condition pattern
/// (including those under `not`) against stored atoms and joining the
/// consistent results; a rule without variables yields exactly one empty
/// binding. A variable pattern with no stored matches yields no instances.
/// Each instance is then evaluated bottom-up: conditions look up their
/// instantiated atom (absent atoms read as `[0, 1]`), `not` negates, and
/// `and`/`or` combine children under the rule's correlation.
pub fn evaluate_lhs(kb: &KnowledgeBase, rule: &Rule) -> Vec<GroundedLhs> {
    enumerate_bindings(kb, &rule.lhs)
        .into_iter()
        .map(|binding| GroundedLhs {
            interval: eval_expr(kb, &rule.lhs, &binding, rule.corr),
            binding,
        })
        .collect()
}

fn enumerate_bindings(kb: &KnowledgeBase, lhs: &LhsExpr) -> Vec<Binding> {
    let mut acc: BTreeSet<Binding> = BTreeSet::new();
    acc.insert(Binding::new());
    for pattern in lhs.patterns().into_iter().filter(|p| p.has_variables()) {
        let matches = kb.candidates(pattern);
        let mut next = BTreeSet::new();
        for partial in &acc {
            for (candidate, _) in &matches {
                if let Some(merged) = merge(partial, candidate) {
                    next.insert(merged);
                }
            }
        }
        acc = next;
        if acc.is_empty() {
            break;
        }
    }
    acc.into_iter().collect()
}

fn merge(a: &Binding, b: &Binding) -> Option<Binding> {
    let mut merged = a.clone();
    for (var, value) in b {
        match merged.get(var) {
            Some(existing) if existing != value => return None,
            Some(_) => {}
            None => {
                merged.insert(var.clone(), value.clone());
            }
        }
    }
    Some(merged)
}

/// Evaluates an expression tree under a fixed binding.
pub fn eval_expr(kb: &KnowledgeBase, expr: &LhsExpr, binding: &Binding, corr: Correlation) -> Interval {
    match expr {
        LhsExpr::Cond(pattern) => {
            let atom = pattern
                .instantiate(binding)
                .expect("binding covers every left-hand-side variable");
            kb.lookup(&atom)
        }
        LhsExpr::Not(inner) => eval_expr(kb, inner, binding, corr).negate(),
        LhsExpr::And(children) => {
            let items: Vec<Interval> = children
                .iter()
                .map(|child| eval_expr(kb, child, binding, corr))
                .collect();
            conjoin(&items, corr)
        }
        LhsExpr::Or(children) => {
            let items: Vec<Interval> = children
                .iter()
                .map(|child| eval_expr(kb, child, binding, corr))
                .collect();
            disjoin(&items, corr)
        }
    }
}

/// The ground atoms a rule instance reads while evaluating its conditions,
/// in condition order, deduplicated.
pub fn condition_atoms(rule: &Rule, binding: &Binding) -> Vec<Atom> {
    let mut out = Vec::new();
    for pattern in rule.lhs.patterns() {
        if let Some(atom) = pattern.instantiate(binding) {
            if !out.contains(&atom) {
                out.push(atom);
            }
        }
    }
    out
}
