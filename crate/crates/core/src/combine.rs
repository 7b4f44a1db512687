//! Evidence pooling: combining several belief intervals for the same atom.
//!
//! Two combiners with different independence assumptions:
//!
//! * [`mscomb`] assumes the operands come from independent knowledge
//!   sources. It is Dempster's combination rule restricted to a binary
//!   frame, so agreeing evidence reinforces:
//!   `mscomb([0.9 1], [0.9 1]) = [0.99 1]`.
//! * [`sscomb`] assumes the operands are different readings of the same
//!   knowledge source. It is an uncertainty-weighted vote, so agreeing
//!   evidence averages instead of reinforcing:
//!   `sscomb([0.9 1], [0.9 1]) = [0.925 0.975]`.
//!
//! [`pool`] applies both: items are grouped by source, folded with
//! [`sscomb`] within a group and with [`mscomb`] across groups.

use thiserror::Error;

use crate::ast::{Atom, Binding};
use crate::interval::Interval;

/// Below this combination denominator two pieces of evidence are treated
/// as totally contradictory.
pub const CONFLICT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CombineError {
    #[error("total conflict combining {left} with {right}")]
    TotalConflict { left: Interval, right: Interval },
    #[error("total conflict pooling evidence for {atom} (rules {rules:?})")]
    PoolConflict { atom: String, rules: Vec<String> },
    #[error("no evidence to pool")]
    NoEvidence,
}

/// One rule firing's contribution to an atom's belief.
#[derive(Debug, Clone, PartialEq)]
pub struct EvidenceItem {
    pub rule_id: String,
    pub binding: Binding,
    pub atom: Atom,
    pub interval: Interval,
    pub source: String,
}

/// Combines evidence from independent knowledge sources.
///
/// ```text
/// mscomb([l1 u1], [l2 u2]) = [ (l1*u2 + l2*u1 - l1*l2) / k, (u1*u2) / k ]
/// k = 1 - l1*(1 - u2) - l2*(1 - u1)
/// ```
///
/// Errors when `k` vanishes, which happens only for contradictory certain
/// evidence such as `[1 1]` against `[0 0]`.
pub fn mscomb(i1: Interval, i2: Interval) -> Result<Interval, CombineError> {
    let (l1, u1) = (i1.lower(), i1.upper());
    let (l2, u2) = (i2.lower(), i2.upper());
    let k = 1.0 - (l1 * (1.0 - u2) + l2 * (1.0 - u1));
    if k <= CONFLICT_TOLERANCE {
        return Err(CombineError::TotalConflict { left: i1, right: i2 });
    }
    let lower = ((l1 * u2 + l2 * u1) - l1 * l2) / k;
    let upper = (u1 * u2) / k;
    Ok(Interval::clamped(lower, upper))
}

/// Combines evidence obtained from the same knowledge source.
///
/// With `tau = unc(i1) + unc(i2)`, the combined mean value and uncertainty
/// are
///
/// ```text
/// tau = 2:      mv = 0.5                                     unc = 1
/// 1 < tau < 2:  mv = (cert1*mv1 + cert2*mv2) / (cert1+cert2) unc = unc1*unc2
/// 0 < tau <= 1: mv = (unc2*mv1 + unc1*mv2) / tau             unc = unc1*unc2 / tau
/// tau = 0:      mv = (mv1 + mv2) / 2                         unc = 0
/// ```
///
/// and the result is the symmetric interval around `mv`, clamped into
/// `[0, 1]`. In the cross-weighted branch the weight on each mean is the
/// other interval's uncertainty, so more certain evidence counts more; a
/// point interval absorbs any non-point operand.
pub fn sscomb(i1: Interval, i2: Interval) -> Interval {
    let (unc1, unc2) = (i1.uncertainty(), i2.uncertainty());
    let (mv1, mv2) = (i1.mean_value(), i2.mean_value());
    let tau = unc1 + unc2;
    let (mv, unc) = if tau == 0.0 {
        ((mv1 + mv2) / 2.0, 0.0)
    } else if tau == 2.0 {
        (0.5, 1.0)
    } else if tau <= 1.0 {
        ((unc2 * mv1 + unc1 * mv2) / tau, (unc1 * unc2) / tau)
    } else {
        let (cert1, cert2) = (i1.certainty(), i2.certainty());
        ((cert1 * mv1 + cert2 * mv2) / (cert1 + cert2), unc1 * unc2)
    };
    Interval::clamped(mv - unc / 2.0, mv + unc / 2.0)
}

/// Pools every evidence item for one atom, with an optional prior belief
/// (a base fact) joining the pool as its own knowledge source.
///
/// Items are grouped by source; each group is folded with [`sscomb`] in
/// (rule id, binding) order, then the group results are folded with
/// [`mscomb`] in source-name order (the prior pools under the reserved
/// source name `__facts__`). A total conflict is reported with the atom
/// and the contributing rules.
pub fn pool(items: &[EvidenceItem], prior: Option<Interval>) -> Result<Interval, CombineError> {
    use std::collections::BTreeMap;

    if items.is_empty() && prior.is_none() {
        return Err(CombineError::NoEvidence);
    }
    debug_assert!(
        items.windows(2).all(|w| w[0].atom == w[1].atom),
        "pool expects evidence for a single atom"
    );

    let mut by_source: BTreeMap<&str, Vec<&EvidenceItem>> = BTreeMap::new();
    for item in items {
        by_source.entry(&item.source).or_default().push(item);
    }

    let mut pooled: BTreeMap<&str, Interval> = BTreeMap::new();
    if let Some(prior) = prior {
        pooled.insert("__facts__", prior);
    }
    for (source, mut group) in by_source {
        group.sort_by(|a, b| (&a.rule_id, &a.binding).cmp(&(&b.rule_id, &b.binding)));
        let mut acc = group[0].interval;
        for item in &group[1..] {
            acc = sscomb(acc, item.interval);
        }
        pooled.insert(source, acc);
    }

    let mut values = pooled.into_values();
    let mut acc = values.next().expect("at least one evidence group");
    for value in values {
        acc = mscomb(acc, value).map_err(|_| CombineError::PoolConflict {
            atom: items
                .first()
                .map(|i| i.atom.to_string())
                .unwrap_or_else(|| "(unknown)".into()),
            rules: items.iter().map(|i| i.rule_id.clone()).collect(),
        })?;
    }
    Ok(acc)
}
