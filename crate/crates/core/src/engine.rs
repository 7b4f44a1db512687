//! Forward-chaining driver.
//!
//! Each round evaluates every rule against a snapshot of the store,
//! applies the configured firing function, pools the fired evidence per
//! concluded atom (with the atom's base fact joining as its own knowledge
//! source unless facts are frozen) and writes the pooled beliefs back as
//! the derived layer. Derived beliefs become visible to rule conditions in
//! the next round, which is what allows chaining. The contribution set is
//! rebuilt from scratch every round, so a rule that stops firing also
//! stops contributing; the run ends when no derived belief moves by more
//! than the convergence threshold in either bound.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::ast::{Atom, Binding, FactDecl, Pattern, Rule};
use crate::combine::{pool, CombineError, EvidenceItem};
use crate::eval::evaluate_lhs;
use crate::interval::Interval;
use crate::kb::{unify, KbError, KnowledgeBase};
use crate::mp::{self, MpConfig, MpOutcome};

/// Engine-level configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct EngineConfig {
    pub mp: MpConfig,
    /// Hard cap on evaluation rounds before reporting non-convergence.
    pub max_rounds: usize,
    /// A derived bound moving by no more than this counts as unchanged.
    pub convergence_eps: f64,
    /// When set, atoms with a base fact keep it: rule evidence neither
    /// pools with nor overrides declared facts.
    pub freeze_facts: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            mp: MpConfig::default(),
            max_rounds: 100,
            convergence_eps: 1e-9,
            freeze_facts: false,
        }
    }
}

/// One rule-instance evaluation, as recorded per round.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceEntry {
    pub round: usize,
    pub rule_id: String,
    pub binding: Binding,
    /// The instantiated conclusion this instance targets.
    pub atom: Atom,
    pub lhs: Interval,
    pub outcome: MpOutcome,
}

/// Result of a run: final beliefs (base facts overlaid with derived
/// values), the full evaluation trace and the number of rounds that
/// changed something.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub beliefs: BTreeMap<Atom, Interval>,
    pub trace: Vec<TraceEntry>,
    pub rounds: usize,
}

impl RunOutcome {
    /// The entries of the last evaluated round: the settled status of
    /// every rule instance.
    pub fn final_entries(&self) -> Vec<&TraceEntry> {
        let Some(last) = self.trace.last().map(|e| e.round) else {
            return Vec::new();
        };
        self.trace.iter().filter(|e| e.round == last).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("duplicate rule id `{0}`")]
    DuplicateRuleId(String),
    #[error(transparent)]
    Fact(#[from] KbError),
    #[error(transparent)]
    Combine(#[from] CombineError),
    #[error("no fixpoint after {rounds} rounds; still changing: {atoms:?}")]
    NonConvergence { rounds: usize, atoms: Vec<String> },
}

/// Runs the rules over the facts to a fixpoint. Deterministic: identical
/// inputs produce identical traces and beliefs.
pub fn run(rules: &[Rule], facts: &[FactDecl], cfg: &EngineConfig) -> Result<RunOutcome, EngineError> {
    for (i, rule) in rules.iter().enumerate() {
        if rules[..i].iter().any(|r| r.id == rule.id) {
            return Err(EngineError::DuplicateRuleId(rule.id.clone()));
        }
    }
    let mut kb = KnowledgeBase::from_facts(facts)?;
    let mut trace = Vec::new();
    let mut previous: BTreeMap<Atom, Interval> = BTreeMap::new();
    let mut effective_rounds = 0;
    let mut last_changed: Vec<String> = Vec::new();
    let mut converged = false;

    for round in 1..=cfg.max_rounds.max(1) {
        let mut items: Vec<EvidenceItem> = Vec::new();
        for rule in rules {
            for grounded in evaluate_lhs(&kb, rule) {
                let atom = rule
                    .conclusion
                    .instantiate(&grounded.binding)
                    .expect("conclusion variables are bound (range restriction)");
                let outcome = mp::apply(&cfg.mp, grounded.interval, rule.strength);
                if let MpOutcome::Fired(interval) = outcome {
                    items.push(EvidenceItem {
                        rule_id: rule.id.clone(),
                        binding: grounded.binding.clone(),
                        atom: atom.clone(),
                        interval,
                        source: rule.source.clone(),
                    });
                }
                trace.push(TraceEntry {
                    round,
                    rule_id: rule.id.clone(),
                    binding: grounded.binding,
                    atom,
                    lhs: grounded.interval,
                    outcome,
                });
            }
        }

        let mut by_atom: BTreeMap<Atom, Vec<EvidenceItem>> = BTreeMap::new();
        for item in items {
            by_atom.entry(item.atom.clone()).or_default().push(item);
        }
        let mut derived: BTreeMap<Atom, Interval> = BTreeMap::new();
        for (atom, atom_items) in by_atom {
            let base = kb.base_belief(&atom);
            if cfg.freeze_facts && base.is_some() {
                continue;
            }
            derived.insert(atom, pool(&atom_items, base)?);
        }

        let changed = changed_atoms(&previous, &derived, cfg.convergence_eps);
        kb.replace_derived(derived.clone());
        previous = derived;
        if changed.is_empty() {
            converged = true;
            break;
        }
        effective_rounds += 1;
        last_changed = changed;
    }

    if !converged {
        return Err(EngineError::NonConvergence {
            rounds: cfg.max_rounds,
            atoms: last_changed,
        });
    }
    Ok(RunOutcome {
        beliefs: kb.beliefs(),
        trace,
        rounds: effective_rounds,
    })
}

fn changed_atoms(
    previous: &BTreeMap<Atom, Interval>,
    current: &BTreeMap<Atom, Interval>,
    eps: f64,
) -> Vec<String> {
    let mut changed = Vec::new();
    for (atom, belief) in current {
        match previous.get(atom) {
            Some(old)
                if (old.lower() - belief.lower()).abs() <= eps
                    && (old.upper() - belief.upper()).abs() <= eps => {}
            _ => changed.push(atom.to_string()),
        }
    }
    for atom in previous.keys() {
        if !current.contains_key(atom) {
            changed.push(atom.to_string());
        }
    }
    changed.sort();
    changed
}

/// All atoms in a belief map matching a pattern, in atom order.
pub fn query(beliefs: &BTreeMap<Atom, Interval>, pattern: &Pattern) -> Vec<(Atom, Interval)> {
    beliefs
        .iter()
        .filter(|(atom, _)| unify(pattern, atom).is_some())
        .map(|(atom, belief)| (atom.clone(), *belief))
        .collect()
}
