//! Typed syntax for rules, facts, patterns and bindings.
//!
//! `Display` renders every node back to its canonical s-expression text, so
//! `parse(x.to_string())` reproduces `x`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::interval::{Correlation, Interval};

/// Assignment of match variables to constant symbols.
pub type Binding = BTreeMap<String, String>;

/// An argument position in a pattern: a constant symbol or a `?`-prefixed
/// match variable (the name is stored without the prefix).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Constant(String),
    Variable(String),
}

impl Term {
    pub fn is_variable(&self) -> bool {
        matches!(self, Term::Variable(_))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Constant(s) => write!(f, "{s}"),
            Term::Variable(v) => write!(f, "?{v}"),
        }
    }
}

/// A predicate applied to terms; may contain match variables.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pattern {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Pattern {
    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.args.iter().filter_map(|t| match t {
            Term::Variable(v) => Some(v.as_str()),
            Term::Constant(_) => None,
        })
    }

    pub fn has_variables(&self) -> bool {
        self.args.iter().any(Term::is_variable)
    }

    /// Grounds the pattern under a binding; `None` if a variable is unbound.
    pub fn instantiate(&self, binding: &Binding) -> Option<Atom> {
        let mut args = Vec::with_capacity(self.args.len());
        for term in &self.args {
            match term {
                Term::Constant(c) => args.push(c.clone()),
                Term::Variable(v) => args.push(binding.get(v)?.clone()),
            }
        }
        Some(Atom {
            predicate: self.predicate.clone(),
            args,
        })
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.predicate)?;
        for arg in &self.args {
            write!(f, " {arg}")?;
        }
        write!(f, ")")
    }
}

/// A fully ground proposition. Ordering is by predicate, then arguments.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<String>,
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.predicate)?;
        for arg in &self.args {
            write!(f, " {arg}")?;
        }
        write!(f, ")")
    }
}

/// Left-hand-side expression tree of a rule.
#[derive(Debug, Clone, PartialEq)]
pub enum LhsExpr {
    Cond(Pattern),
    Not(Box<LhsExpr>),
    And(Vec<LhsExpr>),
    Or(Vec<LhsExpr>),
}

impl LhsExpr {
    /// All condition patterns in depth-first order, including those under
    /// negation.
    pub fn patterns(&self) -> Vec<&Pattern> {
        let mut out = Vec::new();
        self.collect_patterns(&mut out);
        out
    }

    fn collect_patterns<'a>(&'a self, out: &mut Vec<&'a Pattern>) {
        match self {
            LhsExpr::Cond(p) => out.push(p),
            LhsExpr::Not(inner) => inner.collect_patterns(out),
            LhsExpr::And(children) | LhsExpr::Or(children) => {
                for child in children {
                    child.collect_patterns(out);
                }
            }
        }
    }

    /// Every match variable mentioned anywhere in the tree.
    pub fn variables(&self) -> BTreeSet<&str> {
        self.patterns().into_iter().flat_map(|p| p.variables()).collect()
    }
}

impl fmt::Display for LhsExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LhsExpr::Cond(p) => write!(f, "{p}"),
            LhsExpr::Not(inner) => write!(f, "(not {inner})"),
            LhsExpr::And(children) | LhsExpr::Or(children) => {
                let op = if matches!(self, LhsExpr::And(_)) { "and" } else { "or" };
                write!(f, "({op}")?;
                for child in children {
                    write!(f, " {child}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// One inference rule.
///
/// `corr` applies at every connective of this rule's tree (default `0`,
/// statistical independence). `source` names the knowledge source the rule
/// interprets; by default each rule is its own source, so evidence from
/// distinct rules pools as independent.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub id: String,
    pub lhs: LhsExpr,
    pub conclusion: Pattern,
    pub strength: Interval,
    pub corr: Correlation,
    pub source: String,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({} (if {}) (then (infer {} with {}))",
            self.id, self.lhs, self.conclusion, self.strength
        )?;
        if self.corr.value() != 0.0 {
            write!(f, " (corr {})", self.corr.value())?;
        }
        if self.source != self.id {
            write!(f, " (source {})", self.source)?;
        }
        write!(f, ")")
    }
}

/// A declared base fact: a ground atom with its belief interval.
#[derive(Debug, Clone, PartialEq)]
pub struct FactDecl {
    pub atom: Atom,
    pub belief: Interval,
}

impl fmt::Display for FactDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(fact {} {})", self.atom, self.belief)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pattern(pred: &str, args: &[Term]) -> Pattern {
        Pattern {
            predicate: pred.into(),
            args: args.to_vec(),
        }
    }

    #[test]
    fn rendering_is_canonical() {
        let rule = Rule {
            id: "r1".into(),
            lhs: LhsExpr::Cond(pattern("tall", &[Term::Variable("x".into())])),
            conclusion: pattern("strong", &[Term::Variable("x".into())]),
            strength: Interval::new(0.5, 0.9),
            corr: Correlation::default(),
            source: "r1".into(),
        };
        assert_eq!(
            rule.to_string(),
            "(r1 (if (tall ?x)) (then (infer (strong ?x) with (0.5 0.9))))"
        );
    }

    #[test]
    fn non_default_clauses_are_rendered() {
        let rule = Rule {
            id: "r1".into(),
            lhs: LhsExpr::And(vec![
                LhsExpr::Cond(pattern("cloudy-sky", &[])),
                LhsExpr::Cond(pattern("humid", &[])),
            ]),
            conclusion: pattern("rain", &[]),
            strength: Interval::new(0.4, 0.9),
            corr: Correlation::new(0.5),
            source: "wx".into(),
        };
        assert_eq!(
            rule.to_string(),
            "(r1 (if (and (cloudy-sky) (humid))) (then (infer (rain) with (0.4 0.9))) (corr 0.5) (source wx))"
        );
    }

    #[test]
    fn fact_rendering() {
        let fact = FactDecl {
            atom: Atom {
                predicate: "cloudy-sky".into(),
                args: vec![],
            },
            belief: Interval::new(0.88, 0.90),
        };
        assert_eq!(fact.to_string(), "(fact (cloudy-sky) (0.88 0.9))");
    }

    #[test]
    fn patterns_are_collected_under_negation() {
        let lhs = LhsExpr::And(vec![
            LhsExpr::Not(Box::new(LhsExpr::Cond(pattern(
                "tall",
                &[Term::Variable("x".into())],
            )))),
            LhsExpr::Cond(pattern("heavy", &[Term::Variable("x".into())])),
        ]);
        let names: Vec<&str> = lhs.patterns().iter().map(|p| p.predicate.as_str()).collect();
        assert_eq!(names, ["tall", "heavy"]);
        assert_eq!(lhs.variables().into_iter().collect::<Vec<_>>(), ["x"]);
    }

    #[test]
    fn instantiate_requires_every_variable() {
        let p = pattern("likes", &[Term::Variable("x".into()), Term::Constant("tea".into())]);
        let mut binding = Binding::new();
        assert_eq!(p.instantiate(&binding), None);
        binding.insert("x".into(), "mary".into());
        let atom = p.instantiate(&binding).unwrap();
        assert_eq!(atom.to_string(), "(likes mary tea)");
    }
}
