//! Report rendering: the per-atom evidence table and its JSON equivalent.
//!
//! The table shows, per inferred atom, the base facts its rules read, one
//! row per rule instance (evidence interval at two decimals, or "not
//! fired") and the pooled overall belief. JSON carries the same content at
//! full precision; rounding the JSON values to two decimals reproduces the
//! table.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use credal::{condition_atoms, unify, Atom, FactDecl, Interval, MpOutcome, Pattern, Rule, RunOutcome, TraceEntry};

pub struct Report<'a> {
    blocks: Vec<AtomBlock<'a>>,
    trace: &'a [TraceEntry],
    rounds: usize,
}

struct AtomBlock<'a> {
    atom: Atom,
    overall: Interval,
    fact_rows: Vec<(Atom, Interval)>,
    contributions: Vec<&'a TraceEntry>,
}

impl<'a> Report<'a> {
    pub fn build(
        rules: &[Rule],
        facts: &[FactDecl],
        outcome: &'a RunOutcome,
        query: Option<&Pattern>,
    ) -> Self {
        let rule_by_id: BTreeMap<&str, &Rule> = rules.iter().map(|r| (r.id.as_str(), r)).collect();
        let mut by_atom: BTreeMap<Atom, Vec<&TraceEntry>> = BTreeMap::new();
        for entry in outcome.final_entries() {
            by_atom.entry(entry.atom.clone()).or_default().push(entry);
        }
        if let Some(pattern) = query {
            by_atom.retain(|atom, _| unify(pattern, atom).is_some());
            // Atoms the query matches that no rule concluded still report
            // their final belief.
            for (atom, _) in credal::query(&outcome.beliefs, pattern) {
                by_atom.entry(atom).or_default();
            }
        }

        let blocks = by_atom
            .into_iter()
            .map(|(atom, contributions)| {
                let mut read: Vec<Atom> = Vec::new();
                for entry in &contributions {
                    if let Some(rule) = rule_by_id.get(entry.rule_id.as_str()) {
                        for cond in condition_atoms(rule, &entry.binding) {
                            if !read.contains(&cond) {
                                read.push(cond);
                            }
                        }
                    }
                }
                let fact_rows = facts
                    .iter()
                    .filter(|f| read.contains(&f.atom))
                    .map(|f| (f.atom.clone(), f.belief))
                    .collect();
                let overall = outcome
                    .beliefs
                    .get(&atom)
                    .copied()
                    .unwrap_or(Interval::IGNORANCE);
                AtomBlock {
                    atom,
                    overall,
                    fact_rows,
                    contributions,
                }
            })
            .collect();
        Report {
            blocks,
            trace: &outcome.trace,
            rounds: outcome.rounds,
        }
    }

    pub fn to_table(&self, with_trace: bool) -> String {
        let mut out = String::new();
        for (i, block) in self.blocks.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            let mut rows: Vec<(String, String)> = Vec::new();
            for (atom, belief) in &block.fact_rows {
                rows.push((atom.to_string(), two_decimals(*belief)));
            }
            for entry in &block.contributions {
                let label = format!("evidence {} {}", entry.rule_id, entry.atom);
                let value = match &entry.outcome {
                    MpOutcome::Fired(interval) => two_decimals(*interval),
                    MpOutcome::NotFired(_) => "not fired".to_string(),
                };
                rows.push((label, value));
            }
            rows.push((
                format!("overall evidence {}", block.atom),
                two_decimals(block.overall),
            ));
            let width = rows.iter().map(|(label, _)| label.len()).max().unwrap_or(0);
            out.push_str(&format!("Inferring {}\n", block.atom));
            for (label, value) in rows {
                out.push_str(&format!("  {label:<width$}  {value}\n"));
            }
        }
        if with_trace {
            out.push_str("\nTrace\n");
            for entry in self.trace {
                out.push_str(&format!(
                    "  round {}  {} {}{} lhs {}  {}\n",
                    entry.round,
                    entry.rule_id,
                    entry.atom,
                    binding_suffix(entry),
                    entry.lhs,
                    match &entry.outcome {
                        MpOutcome::Fired(interval) => format!("fired {interval}"),
                        MpOutcome::NotFired(reason) => format!("not fired: {reason}"),
                    }
                ));
            }
        }
        out
    }

    pub fn to_json(&self, with_trace: bool) -> Value {
        let atoms: Vec<Value> = self
            .blocks
            .iter()
            .map(|block| {
                let contributions: Vec<Value> = block
                    .contributions
                    .iter()
                    .map(|entry| contribution_json(entry))
                    .collect();
                let facts: Vec<Value> = block
                    .fact_rows
                    .iter()
                    .map(|(atom, belief)| {
                        json!({
                            "atom": atom.to_string(),
                            "lower": belief.lower(),
                            "upper": belief.upper(),
                        })
                    })
                    .collect();
                json!({
                    "atom": block.atom.to_string(),
                    "lower": block.overall.lower(),
                    "upper": block.overall.upper(),
                    "facts": facts,
                    "contributions": contributions,
                })
            })
            .collect();
        let mut value = json!({ "atoms": atoms, "rounds": self.rounds });
        if with_trace {
            let trace: Vec<Value> = self
                .trace
                .iter()
                .map(|entry| {
                    let mut v = json!({
                        "round": entry.round,
                        "rule": entry.rule_id,
                        "atom": entry.atom.to_string(),
                        "lhs_lower": entry.lhs.lower(),
                        "lhs_upper": entry.lhs.upper(),
                    });
                    merge_outcome(&mut v, &entry.outcome);
                    if !entry.binding.is_empty() {
                        v["binding"] = binding_json(entry);
                    }
                    v
                })
                .collect();
            value["trace"] = Value::Array(trace);
        }
        value
    }
}

fn contribution_json(entry: &TraceEntry) -> Value {
    let mut v = json!({ "rule": entry.rule_id });
    merge_outcome(&mut v, &entry.outcome);
    if !entry.binding.is_empty() {
        v["binding"] = binding_json(entry);
    }
    v
}

fn merge_outcome(value: &mut Value, outcome: &MpOutcome) {
    match outcome {
        MpOutcome::Fired(interval) => {
            value["fired"] = json!(true);
            value["lower"] = json!(interval.lower());
            value["upper"] = json!(interval.upper());
        }
        MpOutcome::NotFired(reason) => {
            value["fired"] = json!(false);
            value["reason"] = json!(reason);
        }
    }
}

fn binding_json(entry: &TraceEntry) -> Value {
    Value::Object(
        entry
            .binding
            .iter()
            .map(|(var, val)| (format!("?{var}"), json!(val)))
            .collect(),
    )
}

fn binding_suffix(entry: &TraceEntry) -> String {
    if entry.binding.is_empty() {
        String::new()
    } else {
        let pairs: Vec<String> = entry
            .binding
            .iter()
            .map(|(var, val)| format!("?{var}={val}"))
            .collect();
        format!(" [{}]", pairs.join(" "))
    }
}

fn two_decimals(interval: Interval) -> String {
    format!("({:.2} {:.2})", interval.lower(), interval.upper())
}
