//! Interval-valued belief calculus with a correlation-aware rule engine.
//!
//! Propositions carry belief intervals `[a, b]` (the probability is at
//! least `a` and at most `b`) instead of single numbers, so "unknown" is
//! representable as `[0, 1]` and the reliability of evidence is part of
//! the value. On top of the calculus sits a small rule language: rules
//! declare a correlation for their conditions, fire through a gated
//! conditional-probability function (or one of three implication
//! readings), and their per-atom evidence is pooled by knowledge source —
//! a weighted vote within a source, Dempster-style reinforcement across
//! sources.
//!
//! ```
//! use credal::{engine, parse_facts, parse_pattern, parse_rules, EngineConfig};
//!
//! let rules = parse_rules(
//!     "(r1 (if (and (cloudy-sky) (humid))) (then (infer (rain) with (0.4 0.9))) (corr 0.5))",
//! )?;
//! let facts = parse_facts("(fact (cloudy-sky) (0.88 0.90)) (fact (humid) (0.88 0.90))")?;
//! let outcome = engine::run(&rules, &facts, &EngineConfig::default()).unwrap();
//! let results = engine::query(&outcome.beliefs, &parse_pattern("(rain)")?);
//! assert_eq!(results.len(), 1);
//! # Ok::<(), credal::ParseError>(())
//! ```

pub mod ast;
pub mod combine;
pub mod engine;
pub mod eval;
pub mod interval;
pub mod kb;
pub mod mp;
pub mod parse;

pub use ast::{Atom, Binding, FactDecl, LhsExpr, Pattern, Rule, Term};
pub use combine::{mscomb, pool, sscomb, CombineError, EvidenceItem};
pub use engine::{query, run, EngineConfig, EngineError, RunOutcome, TraceEntry};
pub use eval::{condition_atoms, evaluate_lhs, GroundedLhs};
pub use interval::{conjoin, disjoin, Correlation, Interval, IntervalError};
pub use kb::{unify, KbError, KnowledgeBase};
pub use mp::{MpConfig, MpInterpretation, MpOutcome};
pub use parse::{parse_facts, parse_interval, parse_mixed, parse_pattern, parse_rules, ParseError};
