//! Ground-atom store with open-world lookup semantics.
//!
//! Atoms absent from the store are treated as completely unknown: lookup
//! returns `[0, 1]` instead of failing or defaulting to false.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::ast::{Atom, Binding, FactDecl, Pattern, Term};
use crate::interval::Interval;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KbError {
    #[error("duplicate fact for atom {0}")]
    DuplicateFact(String),
}

/// Base facts plus engine-derived beliefs, indexed by predicate. Derived
/// values shadow base facts on lookup.
#[derive(Debug, Clone, Default)]
pub struct KnowledgeBase {
    base: BTreeMap<Atom, Interval>,
    derived: BTreeMap<Atom, Interval>,
    index: BTreeMap<String, BTreeSet<Atom>>,
}

impl KnowledgeBase {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_facts(facts: &[FactDecl]) -> Result<Self, KbError> {
        let mut kb = Self::new();
        for fact in facts {
            kb.assert_base(fact.atom.clone(), fact.belief)?;
        }
        Ok(kb)
    }

    /// Declares a base fact. Redeclaring an atom is an error.
    pub fn assert_base(&mut self, atom: Atom, belief: Interval) -> Result<(), KbError> {
        if self.base.contains_key(&atom) {
            return Err(KbError::DuplicateFact(atom.to_string()));
        }
        self.index
            .entry(atom.predicate.clone())
            .or_default()
            .insert(atom.clone());
        self.base.insert(atom, belief);
        Ok(())
    }

    /// Writes a derived belief, overwriting any previous one.
    pub fn set_derived(&mut self, atom: Atom, belief: Interval) {
        self.index
            .entry(atom.predicate.clone())
            .or_default()
            .insert(atom.clone());
        self.derived.insert(atom, belief);
    }

    /// Replaces the whole derived layer.
    pub fn replace_derived(&mut self, derived: BTreeMap<Atom, Interval>) {
        self.derived = derived;
        self.index.clear();
        for atom in self.base.keys().chain(self.derived.keys()) {
            self.index
                .entry(atom.predicate.clone())
                .or_default()
                .insert(atom.clone());
        }
    }

    pub fn base_belief(&self, atom: &Atom) -> Option<Interval> {
        self.base.get(atom).copied()
    }

    pub fn derived_beliefs(&self) -> &BTreeMap<Atom, Interval> {
        &self.derived
    }

    /// Current belief in an atom: derived value if present, else its base
    /// fact, else full ignorance. Total; never fails for absent atoms.
    pub fn lookup(&self, atom: &Atom) -> Interval {
        self.derived
            .get(atom)
            .or_else(|| self.base.get(atom))
            .copied()
            .unwrap_or(Interval::IGNORANCE)
    }

    /// All stored atoms unifying with the pattern, with the induced
    /// bindings, ordered by atom.
    pub fn candidates(&self, pattern: &Pattern) -> Vec<(Binding, Atom)> {
        let Some(atoms) = self.index.get(&pattern.predicate) else {
            return Vec::new();
        };
        atoms
            .iter()
            .filter_map(|atom| unify(pattern, atom).map(|binding| (binding, atom.clone())))
            .collect()
    }

    /// Final belief map: base facts overlaid with derived values.
    pub fn beliefs(&self) -> BTreeMap<Atom, Interval> {
        let mut out = self.base.clone();
        for (atom, belief) in &self.derived {
            out.insert(atom.clone(), *belief);
        }
        out
    }
}

/// Matches a pattern against a ground atom, yielding the variable binding
/// when they unify. Repeated variables must bind consistently.
pub fn unify(pattern: &Pattern, atom: &Atom) -> Option<Binding> {
    if pattern.predicate != atom.predicate || pattern.args.len() != atom.args.len() {
        return None;
    }
    let mut binding = Binding::new();
    for (term, constant) in pattern.args.iter().zip(&atom.args) {
        match term {
            Term::Constant(c) => {
                if c != constant {
                    return None;
                }
            }
            Term::Variable(v) => match binding.get(v) {
                Some(bound) if bound != constant => return None,
                Some(_) => {}
                None => {
                    binding.insert(v.clone(), constant.clone());
                }
            },
        }
    }
    Some(binding)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom(pred: &str, args: &[&str]) -> Atom {
        Atom {
            predicate: pred.into(),
            args: args.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn pattern(pred: &str, args: &[Term]) -> Pattern {
        Pattern {
            predicate: pred.into(),
            args: args.to_vec(),
        }
    }

    #[test]
    fn lookup_defaults_to_ignorance() {
        let kb = KnowledgeBase::new();
        assert_eq!(kb.lookup(&atom("anything", &["x"])), Interval::IGNORANCE);
    }

    #[test]
    fn base_facts_and_derived_values_layer() {
        let mut kb = KnowledgeBase::new();
        kb.assert_base(atom("high-pressure", &[]), Interval::new(0.32, 0.34)).unwrap();
        assert_eq!(kb.lookup(&atom("high-pressure", &[])), Interval::new(0.32, 0.34));

        kb.set_derived(atom("rain", &[]), Interval::new(0.67, 0.84));
        assert_eq!(kb.lookup(&atom("rain", &[])), Interval::new(0.67, 0.84));

        // Derived values shadow base ones and later writes overwrite.
        kb.set_derived(atom("high-pressure", &[]), Interval::new(0.4, 0.5));
        assert_eq!(kb.lookup(&atom("high-pressure", &[])), Interval::new(0.4, 0.5));
        kb.set_derived(atom("high-pressure", &[]), Interval::new(0.6, 0.7));
        assert_eq!(kb.lookup(&atom("high-pressure", &[])), Interval::new(0.6, 0.7));
    }

    #[test]
    fn duplicate_base_fact_is_an_error() {
        let mut kb = KnowledgeBase::new();
        kb.assert_base(atom("humid", &[]), Interval::new(0.88, 0.90)).unwrap();
        let e = kb.assert_base(atom("humid", &[]), Interval::new(0.1, 0.2)).unwrap_err();
        assert_eq!(e, KbError::DuplicateFact("(humid)".into()));
    }

    #[test]
    fn candidates_unify_in_atom_order() {
        let mut kb = KnowledgeBase::new();
        kb.assert_base(atom("tall", &["mary"]), Interval::new(0.9, 1.0)).unwrap();
        kb.assert_base(atom("tall", &["john"]), Interval::new(0.5, 0.8)).unwrap();
        let matches = kb.candidates(&pattern("tall", &[Term::Variable("x".into())]));
        let names: Vec<&str> = matches.iter().map(|(b, _)| b["x"].as_str()).collect();
        assert_eq!(names, ["john", "mary"]);
    }

    #[test]
    fn zero_arity_candidates_require_storage() {
        let mut kb = KnowledgeBase::new();
        assert!(kb.candidates(&pattern("rain", &[])).is_empty());
        kb.set_derived(atom("rain", &[]), Interval::new(0.5, 0.6));
        let matches = kb.candidates(&pattern("rain", &[]));
        assert_eq!(matches.len(), 1);
        assert!(matches[0].0.is_empty());
    }

    #[test]
    fn repeated_variables_must_agree() {
        let mut kb = KnowledgeBase::new();
        kb.assert_base(atom("p", &["a", "b"]), Interval::IGNORANCE).unwrap();
        kb.assert_base(atom("p", &["c", "c"]), Interval::IGNORANCE).unwrap();
        let var = Term::Variable("x".into());
        let matches = kb.candidates(&pattern("p", &[var.clone(), var]));
        assert_eq!(matches.len(), 1);
        assert_eq!(matches[0].0["x"], "c");
    }

    #[test]
    fn replace_derived_drops_stale_atoms() {
        let mut kb = KnowledgeBase::new();
        kb.set_derived(atom("rain", &[]), Interval::new(0.5, 0.6));
        kb.replace_derived(BTreeMap::new());
        assert_eq!(kb.lookup(&atom("rain", &[])), Interval::IGNORANCE);
        assert!(kb.candidates(&pattern("rain", &[])).is_empty());
    }

    #[test]
    fn candidates_match_a_brute_force_matcher() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let constants = ["a", "b", "c"];
        for _ in 0..500 {
            let mut kb = KnowledgeBase::new();
            let mut stored = Vec::new();
            for _ in 0..rng.gen_range(0..=6) {
                let arity = rng.gen_range(0..=2);
                let args: Vec<&str> = (0..arity)
                    .map(|_| constants[rng.gen_range(0..constants.len())])
                    .collect();
                let a = atom(["p", "q"][rng.gen_range(0..2)], &args);
                if kb.assert_base(a.clone(), Interval::IGNORANCE).is_ok() {
                    stored.push(a);
                }
            }
            let arity = rng.gen_range(0..=2);
            let args: Vec<Term> = (0..arity)
                .map(|_| {
                    if rng.gen_bool(0.5) {
                        Term::Variable(["x", "y"][rng.gen_range(0..2)].into())
                    } else {
                        Term::Constant(constants[rng.gen_range(0..constants.len())].into())
                    }
                })
                .collect();
            let pat = pattern(["p", "q"][rng.gen_range(0..2)], &args);

            let got: Vec<Atom> = kb.candidates(&pat).into_iter().map(|(_, a)| a).collect();
            let mut expect: Vec<Atom> = stored
                .iter()
                .filter(|a| unify(&pat, a).is_some())
                .cloned()
                .collect();
            expect.sort();
            expect.dedup();
            assert_eq!(got, expect);
        }
    }
}
