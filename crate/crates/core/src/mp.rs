//! Rule firing: given the left-hand side's belief interval `[a, b]` and the
//! rule strength `[c, d]`, decide whether the rule fires and compute its
//! evidence contribution.
//!
//! Four interpretations of a rule's strength are supported. The default,
//! [`MpInterpretation::Conditional`], reads `[c, d]` as bounds on the
//! conditional probability of the conclusion given the premise and gates
//! firing on the premise's mean value and uncertainty. The three
//! implication readings treat `[c, d]` as bounds on the probability of the
//! material implication, computed under best-case, independent and
//! worst-case correlation respectively; their guards are intrinsic to the
//! formulas and ignore the gate thresholds.

use crate::interval::Interval;

/// Which reading of a rule's strength interval to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MpInterpretation {
    /// Strength bounds the conditional probability of the conclusion.
    Conditional,
    /// Strength bounds the implication probability; best-case correlation.
    ImplicationCorr1,
    /// Strength bounds the implication probability; independence.
    ImplicationCorr0,
    /// Strength bounds the implication probability; worst-case correlation.
    ImplicationCorrNeg1,
}

/// Firing configuration: the interpretation plus the gate thresholds used
/// by the conditional reading.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MpConfig {
    pub interpretation: MpInterpretation,
    /// The premise's mean value must strictly exceed this to fire.
    pub theta: f64,
    /// The premise's uncertainty must be strictly below this to fire.
    pub psi: f64,
}

impl MpConfig {
    pub const DEFAULT_THETA: f64 = 0.55;
    pub const DEFAULT_PSI: f64 = 0.85;
}

impl Default for MpConfig {
    fn default() -> Self {
        MpConfig {
            interpretation: MpInterpretation::Conditional,
            theta: Self::DEFAULT_THETA,
            psi: Self::DEFAULT_PSI,
        }
    }
}

/// Result of attempting to fire a rule. A failed guard is a normal
/// outcome, not an error.
#[derive(Debug, Clone, PartialEq)]
pub enum MpOutcome {
    Fired(Interval),
    NotFired(String),
}

impl MpOutcome {
    pub fn is_fired(&self) -> bool {
        matches!(self, MpOutcome::Fired(_))
    }

    pub fn interval(&self) -> Option<Interval> {
        match self {
            MpOutcome::Fired(interval) => Some(*interval),
            MpOutcome::NotFired(_) => None,
        }
    }
}

/// Applies the configured interpretation.
pub fn apply(cfg: &MpConfig, lhs: Interval, strength: Interval) -> MpOutcome {
    match cfg.interpretation {
        MpInterpretation::Conditional => conditional(lhs, strength, cfg.theta, cfg.psi),
        MpInterpretation::ImplicationCorr1 => implication_corr1(lhs, strength),
        MpInterpretation::ImplicationCorr0 => implication_corr0(lhs, strength),
        MpInterpretation::ImplicationCorrNeg1 => implication_corr_neg1(lhs, strength),
    }
}

/// Conditional-probability reading.
///
/// Fires iff `mv(lhs) > theta` and `unc(lhs) < psi` (both strict). The
/// evidence interval is
///
/// ```text
/// lower = min(c*a + (1-d)*(1-a), c*b + (1-d)*(1-b))
/// upper = min(1, max(d*a + (1-c)*(1-a), d*b + (1-c)*(1-b)))
/// ```
///
/// clamped into `[0, 1]`. With a certain premise `[1, 1]` this returns the
/// strength itself, matching MYCIN-style scalar certainty propagation on
/// intervals of the form `[x, 1]` or `[0, x]`.
pub fn conditional(lhs: Interval, strength: Interval, theta: f64, psi: f64) -> MpOutcome {
    let mv = lhs.mean_value();
    if mv <= theta {
        return MpOutcome::NotFired(format!("mean value {mv} not above theta {theta}"));
    }
    let unc = lhs.uncertainty();
    if unc >= psi {
        return MpOutcome::NotFired(format!("uncertainty {unc} not below psi {psi}"));
    }
    let (a, b) = (lhs.lower(), lhs.upper());
    let (c, d) = (strength.lower(), strength.upper());
    let lower = (c * a + (1.0 - d) * (1.0 - a)).min(c * b + (1.0 - d) * (1.0 - b));
    let upper = (d * a + (1.0 - c) * (1.0 - a)).max(d * b + (1.0 - c) * (1.0 - b)).min(1.0);
    MpOutcome::Fired(Interval::clamped(lower, upper))
}

/// Implication reading under best-case correlation.
///
/// Fires iff `1 - a <= d`; yields `[c, d]` when `1 - a < c`, else `[0, d]`.
pub fn implication_corr1(lhs: Interval, strength: Interval) -> MpOutcome {
    let a = lhs.lower();
    let (c, d) = (strength.lower(), strength.upper());
    if 1.0 - a > d {
        return MpOutcome::NotFired(format!(
            "premise too weak: 1 - {a} exceeds the strength upper bound {d}"
        ));
    }
    if 1.0 - a < c {
        MpOutcome::Fired(strength)
    } else {
        MpOutcome::Fired(Interval::clamped(0.0, d))
    }
}

/// Implication reading under independence.
///
/// Fires iff `a != 0`, `c + a >= 1` and `b + d >= 1`; yields
/// `[(c + a - 1) / a, (b + d - 1) / b]`. Given valid operand intervals the
/// raw bounds are already ordered.
pub fn implication_corr0(lhs: Interval, strength: Interval) -> MpOutcome {
    let (a, b) = (lhs.lower(), lhs.upper());
    let (c, d) = (strength.lower(), strength.upper());
    if a == 0.0 {
        return MpOutcome::NotFired("premise lower bound is zero".into());
    }
    if c + a < 1.0 {
        return MpOutcome::NotFired(format!("{c} + {a} < 1"));
    }
    if b + d < 1.0 {
        return MpOutcome::NotFired(format!("{b} + {d} < 1"));
    }
    let lower = (c + a - 1.0) / a;
    let upper = (b + d - 1.0) / b;
    debug_assert!(lower <= upper);
    MpOutcome::Fired(Interval::clamped(lower, upper))
}

/// Implication reading under worst-case correlation.
///
/// Fires iff `a + c >= 1`; yields `[c + a - 1, b + d - 1]`. Given valid
/// operand intervals the raw bounds are already ordered.
pub fn implication_corr_neg1(lhs: Interval, strength: Interval) -> MpOutcome {
    let (a, b) = (lhs.lower(), lhs.upper());
    let (c, d) = (strength.lower(), strength.upper());
    if a + c < 1.0 {
        return MpOutcome::NotFired(format!("{a} + {c} < 1"));
    }
    let lower = c + a - 1.0;
    let upper = b + d - 1.0;
    debug_assert!(lower <= upper);
    MpOutcome::Fired(Interval::clamped(lower, upper))
}
