//! Belief intervals and the connective calculus over them.
//!
//! A belief interval `[a, b]` states that a proposition's probability is at
//! least `a` and at most `b`. The lower bound is the probability mass
//! committed to the proposition, `1 - b` is the mass committed against it,
//! and the width `b - a` is uncommitted. `[0, 1]` is total ignorance; a
//! point interval `[a, a]` carries no uncertainty.
//!
//! Conjunction and disjunction are parameterized by a [`Correlation`]
//! between the operands: `1` is the best case (componentwise min/max), `0`
//! is statistical independence (product / probabilistic sum) and `-1` is
//! the worst case (Lukasiewicz-style bounds). Any other correlation
//! interpolates linearly between the two adjacent cases, componentwise on
//! the n-ary case results.

use std::fmt;

use thiserror::Error;

/// Errors raised when building calculus values from unchecked input.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntervalError {
    /// Interval bounds must satisfy `0 <= lower <= upper <= 1`.
    #[error("invalid interval ({lower} {upper}): need 0 <= lower <= upper <= 1")]
    InvalidBounds { lower: f64, upper: f64 },
    /// Correlations live in `[-1, 1]`.
    #[error("correlation {0} is outside [-1, 1]")]
    CorrelationOutOfRange(f64),
    /// Scalar certainty factors live in `[-1, 1]`.
    #[error("certainty factor {0} is outside [-1, 1]")]
    CertaintyFactorOutOfRange(f64),
}

/// A closed subinterval of `[0, 1]` bounding a proposition's probability.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Interval {
    lower: f64,
    upper: f64,
}

impl Interval {
    /// Total ignorance: nothing is known about the proposition.
    pub const IGNORANCE: Interval = Interval { lower: 0.0, upper: 1.0 };

    /// Creates an interval, panicking on invalid bounds.
    pub fn new(lower: f64, upper: f64) -> Self {
        Self::try_new(lower, upper).unwrap_or_else(|e| panic!("{e}"))
    }

    /// Creates an interval, rejecting NaN and out-of-order or out-of-range
    /// bounds.
    pub fn try_new(lower: f64, upper: f64) -> Result<Self, IntervalError> {
        if 0.0 <= lower && lower <= upper && upper <= 1.0 {
            Ok(Interval { lower, upper })
        } else {
            Err(IntervalError::InvalidBounds { lower, upper })
        }
    }

    /// A point interval `[p, p]`.
    pub fn point(p: f64) -> Self {
        Self::new(p, p)
    }

    /// Builds an interval from arithmetic results, absorbing floating-point
    /// spill: bounds are clamped into `[0, 1]` and ordered.
    pub fn clamped(lower: f64, upper: f64) -> Self {
        debug_assert!(lower.is_finite() && upper.is_finite());
        let upper = upper.clamp(0.0, 1.0);
        let lower = lower.clamp(0.0, 1.0).min(upper);
        Interval { lower, upper }
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    /// Probability mass committed to the proposition.
    pub fn confirmation(&self) -> f64 {
        self.lower
    }

    /// Probability mass committed against the proposition.
    pub fn disconfirmation(&self) -> f64 {
        1.0 - self.upper
    }

    /// Width of the interval: the uncommitted probability mass.
    pub fn uncertainty(&self) -> f64 {
        self.upper - self.lower
    }

    /// Complement of the uncertainty.
    pub fn certainty(&self) -> f64 {
        1.0 - self.uncertainty()
    }

    /// Midpoint of the interval.
    pub fn mean_value(&self) -> f64 {
        (self.lower + self.upper) / 2.0
    }

    /// Belief in the negated proposition: `[1 - b, 1 - a]`. Involutive.
    pub fn negate(&self) -> Self {
        Interval {
            lower: 1.0 - self.upper,
            upper: 1.0 - self.lower,
        }
    }

    /// Converts a MYCIN-style scalar certainty factor in `[-1, 1]` into an
    /// interval: nonnegative factors map to `[(cf + 1) / 2, 1]`, negative
    /// ones to `[0, (cf + 1) / 2]`. Zero takes the nonnegative branch.
    pub fn from_mycin_cf(cf: f64) -> Result<Self, IntervalError> {
        if !(-1.0..=1.0).contains(&cf) {
            return Err(IntervalError::CertaintyFactorOutOfRange(cf));
        }
        Ok(if cf >= 0.0 {
            Interval {
                lower: (cf + 1.0) / 2.0,
                upper: 1.0,
            }
        } else {
            Interval {
                lower: 0.0,
                upper: (cf + 1.0) / 2.0,
            }
        })
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {})", self.lower, self.upper)
    }
}

/// Degree of correlation between the operands of a connective.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Correlation(f64);

impl Correlation {
    /// Maximally positively correlated operands.
    pub const BEST_CASE: Correlation = Correlation(1.0);
    /// Statistically independent operands.
    pub const INDEPENDENT: Correlation = Correlation(0.0);
    /// Maximally negatively correlated operands.
    pub const WORST_CASE: Correlation = Correlation(-1.0);

    /// Creates a correlation, panicking outside `[-1, 1]`.
    pub fn new(value: f64) -> Self {
        Self::try_new(value).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn try_new(value: f64) -> Result<Self, IntervalError> {
        if (-1.0..=1.0).contains(&value) {
            Ok(Correlation(value))
        } else {
            Err(IntervalError::CorrelationOutOfRange(value))
        }
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

impl Default for Correlation {
    fn default() -> Self {
        Correlation::INDEPENDENT
    }
}

/// Lukasiewicz-style worst-case bound for a conjunction of probabilities:
/// `max(0, 1 - sum(1 - v_i))`.
fn worst_case_bound(values: impl Iterator<Item = f64>) -> f64 {
    let slack: f64 = values.map(|v| 1.0 - v).sum();
    (1.0 - slack).max(0.0)
}

/// Conjunction of one or more intervals under the given correlation.
///
/// At correlation `1` this is the componentwise minimum, at `0` the
/// componentwise product and at `-1` the componentwise worst-case bound.
/// Interpolated correlations mix the two adjacent case results linearly,
/// n-ary (the cases are computed over the whole operand list, not folded
/// pairwise). Panics on an empty operand list.
pub fn conjoin(items: &[Interval], corr: Correlation) -> Interval {
    assert!(!items.is_empty(), "conjoin needs at least one interval");
    let independent = (
        items.iter().map(|i| i.lower()).product::<f64>(),
        items.iter().map(|i| i.upper()).product::<f64>(),
    );
    let c = corr.value();
    let (lower, upper) = if c >= 0.0 {
        let best = (
            items.iter().map(|i| i.lower()).fold(1.0, f64::min),
            items.iter().map(|i| i.upper()).fold(1.0, f64::min),
        );
        (
            c * best.0 + (1.0 - c) * independent.0,
            c * best.1 + (1.0 - c) * independent.1,
        )
    } else {
        let worst = (
            worst_case_bound(items.iter().map(|i| i.lower())),
            worst_case_bound(items.iter().map(|i| i.upper())),
        );
        let w = -c;
        (
            (1.0 - w) * independent.0 + w * worst.0,
            (1.0 - w) * independent.1 + w * worst.1,
        )
    };
    Interval::clamped(lower, upper)
}

/// Disjunction of one or more intervals under the given correlation,
/// computed as the De Morgan dual of [`conjoin`] (complements share the
/// operands' correlation). At correlation `1` this is the componentwise
/// maximum, at `0` the probabilistic sum and at `-1` `min(1, sum)`.
/// Panics on an empty operand list.
pub fn disjoin(items: &[Interval], corr: Correlation) -> Interval {
    assert!(!items.is_empty(), "disjoin needs at least one interval");
    let negated: Vec<Interval> = items.iter().map(Interval::negate).collect();
    conjoin(&negated, corr).negate()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12
    }

    fn random_interval(rng: &mut impl Rng) -> Interval {
        // 53-bit dyadic rationals so that 1 - x is exact.
        let grain = (1u64 << 53) as f64;
        let a = rng.gen_range(0..=(1u64 << 53)) as f64 / grain;
        let b = rng.gen_range(0..=(1u64 << 53)) as f64 / grain;
        Interval::new(a.min(b), a.max(b))
    }

    #[test]
    fn measures_on_the_running_example() {
        let i = Interval::new(0.40, 0.99);
        assert!(close(i.confirmation(), 0.40));
        assert!(close(i.disconfirmation(), 0.01));
        assert!(close(i.uncertainty(), 0.59));
        assert!(close(i.certainty(), 0.41));
    }

    #[test]
    fn measures_on_ignorance_and_points() {
        assert!(close(Interval::IGNORANCE.confirmation(), 0.0));
        assert!(close(Interval::IGNORANCE.disconfirmation(), 0.0));
        assert!(close(Interval::IGNORANCE.certainty(), 0.0));
        assert!(close(Interval::IGNORANCE.mean_value(), 0.5));
        assert!(close(Interval::point(1.0).confirmation(), 1.0));
        assert!(close(Interval::point(0.0).disconfirmation(), 1.0));
    }

    #[test]
    fn mean_value_is_the_midpoint() {
        assert!(close(Interval::new(0.35, 0.86).mean_value(), 0.605));
    }

    #[test]
    fn measures_partition_the_probability_mass() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10_000 {
            let i = random_interval(&mut rng);
            let total = i.confirmation() + i.disconfirmation() + i.uncertainty();
            assert!(close(total, 1.0), "conf+disconf+unc = {total} for {i}");
        }
    }

    #[test]
    fn negate_examples() {
        let i = Interval::new(0.32, 0.34).negate();
        assert!(close(i.lower(), 0.66) && close(i.upper(), 0.68));
        assert_eq!(Interval::IGNORANCE.negate(), Interval::IGNORANCE);
        assert_eq!(Interval::point(1.0).negate(), Interval::point(0.0));
    }

    #[test]
    fn negate_is_involutive_on_representable_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..10_000 {
            let i = random_interval(&mut rng);
            assert_eq!(i.negate().negate(), i);
        }
    }

    #[test]
    fn invalid_bounds_are_rejected() {
        assert!(Interval::try_new(0.6, 0.5).is_err());
        assert!(Interval::try_new(-0.1, 0.5).is_err());
        assert!(Interval::try_new(0.5, 1.1).is_err());
        assert!(Interval::try_new(f64::NAN, 0.5).is_err());
    }

    #[test]
    fn conjoin_independent_example() {
        let out = conjoin(
            &[Interval::new(0.4, 0.9), Interval::new(0.8, 0.9)],
            Correlation::INDEPENDENT,
        );
        assert_eq!(out.lower(), 0.4 * 0.8);
        assert_eq!(out.upper(), 0.9 * 0.9);
        assert!((out.lower() - 0.32).abs() <= 1e-15);
        assert!((out.upper() - 0.81).abs() <= 1e-15);
    }

    #[test]
    fn conjoin_best_case_example() {
        let out = conjoin(
            &[Interval::new(0.4, 0.9), Interval::new(0.8, 0.9)],
            Correlation::BEST_CASE,
        );
        assert_eq!(out, Interval::new(0.4, 0.9));
    }

    #[test]
    fn conjoin_interpolates_between_adjacent_cases() {
        let i = Interval::new(0.88, 0.90);
        let out = conjoin(&[i, i], Correlation::new(0.5));
        assert!(close(out.lower(), 0.8272), "lower {}", out.lower());
        assert!(close(out.upper(), 0.855), "upper {}", out.upper());
    }

    #[test]
    fn conjoin_worst_case_uses_lukasiewicz_bound() {
        let out = conjoin(
            &[Interval::new(0.7, 0.9), Interval::new(0.6, 0.8)],
            Correlation::WORST_CASE,
        );
        assert!(close(out.lower(), 0.3), "lower {}", out.lower());
        assert!(close(out.upper(), 0.7), "upper {}", out.upper());
        // Bound saturates at zero.
        let low = conjoin(
            &[Interval::new(0.2, 0.3), Interval::new(0.2, 0.3)],
            Correlation::WORST_CASE,
        );
        assert_eq!(low.lower(), 0.0);
        assert_eq!(low.upper(), 0.0);
    }

    #[test]
    fn disjoin_examples() {
        let a = Interval::new(0.4, 0.9);
        let b = Interval::new(0.8, 0.9);
        let best = disjoin(&[a, b], Correlation::BEST_CASE);
        assert!(close(best.lower(), 0.8) && close(best.upper(), 0.9));
        let indep = disjoin(&[a, b], Correlation::INDEPENDENT);
        assert!(close(indep.lower(), 0.88), "lower {}", indep.lower());
        assert!(close(indep.upper(), 0.99), "upper {}", indep.upper());
        let ignorant = disjoin(&[Interval::IGNORANCE, Interval::IGNORANCE], Correlation::INDEPENDENT);
        assert_eq!(ignorant, Interval::IGNORANCE);
    }

    #[test]
    fn conjunction_cases_dominate_in_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..10_000 {
            let n = rng.gen_range(1..=4);
            let items: Vec<Interval> = (0..n).map(|_| random_interval(&mut rng)).collect();
            let best = conjoin(&items, Correlation::BEST_CASE);
            let indep = conjoin(&items, Correlation::INDEPENDENT);
            let worst = conjoin(&items, Correlation::WORST_CASE);
            assert!(best.lower() >= indep.lower() && indep.lower() >= worst.lower());
            assert!(best.upper() >= indep.upper() && indep.upper() >= worst.upper());
        }
    }

    #[test]
    fn connectives_return_valid_intervals_for_any_correlation() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..10_000 {
            let n = rng.gen_range(1..=4);
            let items: Vec<Interval> = (0..n).map(|_| random_interval(&mut rng)).collect();
            let corr = Correlation::new(rng.gen_range(-1.0..=1.0));
            for out in [conjoin(&items, corr), disjoin(&items, corr)] {
                assert!(0.0 <= out.lower() && out.lower() <= out.upper() && out.upper() <= 1.0);
            }
        }
    }

    #[test]
    fn conjoin_is_commutative() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for _ in 0..2_000 {
            let items: Vec<Interval> = (0..3).map(|_| random_interval(&mut rng)).collect();
            let rev: Vec<Interval> = items.iter().rev().copied().collect();
            let corr = Correlation::new(rng.gen_range(-1.0..=1.0));
            let a = conjoin(&items, corr);
            let b = conjoin(&rev, corr);
            assert!(close(a.lower(), b.lower()) && close(a.upper(), b.upper()));
        }
    }

    #[test]
    fn conjoin_associates_at_the_three_exact_correlations() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        for corr in [
            Correlation::BEST_CASE,
            Correlation::INDEPENDENT,
            Correlation::WORST_CASE,
        ] {
            for _ in 0..2_000 {
                let items: Vec<Interval> = (0..3).map(|_| random_interval(&mut rng)).collect();
                let flat = conjoin(&items, corr);
                let folded = conjoin(&[conjoin(&items[..2], corr), items[2]], corr);
                assert!(
                    close(flat.lower(), folded.lower()) && close(flat.upper(), folded.upper()),
                    "corr {} items {items:?}",
                    corr.value()
                );
            }
        }
    }

    #[test]
    fn de_morgan_matches_the_closed_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..5_000 {
            let items: Vec<Interval> = (0..3).map(|_| random_interval(&mut rng)).collect();
            let max = disjoin(&items, Correlation::BEST_CASE);
            assert!(close(max.lower(), items.iter().map(|i| i.lower()).fold(0.0, f64::max)));
            assert!(close(max.upper(), items.iter().map(|i| i.upper()).fold(0.0, f64::max)));
            let prob_sum = disjoin(&items, Correlation::INDEPENDENT);
            let expect_l = 1.0 - items.iter().map(|i| 1.0 - i.lower()).product::<f64>();
            let expect_u = 1.0 - items.iter().map(|i| 1.0 - i.upper()).product::<f64>();
            assert!(close(prob_sum.lower(), expect_l) && close(prob_sum.upper(), expect_u));
            let bounded = disjoin(&items, Correlation::WORST_CASE);
            let cap_l = items.iter().map(|i| i.lower()).sum::<f64>().min(1.0);
            let cap_u = items.iter().map(|i| i.upper()).sum::<f64>().min(1.0);
            assert!(close(bounded.lower(), cap_l) && close(bounded.upper(), cap_u));
        }
    }

    #[test]
    fn mycin_factor_conversion() {
        assert_eq!(Interval::from_mycin_cf(1.0).unwrap(), Interval::point(1.0));
        assert_eq!(Interval::from_mycin_cf(-1.0).unwrap(), Interval::point(0.0));
        assert_eq!(Interval::from_mycin_cf(0.6).unwrap(), Interval::new(0.8, 1.0));
        assert_eq!(Interval::from_mycin_cf(0.0).unwrap(), Interval::new(0.5, 1.0));
        assert_eq!(Interval::from_mycin_cf(-0.5).unwrap(), Interval::new(0.0, 0.25));
        assert!(Interval::from_mycin_cf(1.5).is_err());
        assert!(Interval::from_mycin_cf(-2.0).is_err());
    }

    #[test]
    fn display_is_compact() {
        assert_eq!(Interval::new(0.88, 0.9).to_string(), "(0.88 0.9)");
        assert_eq!(Interval::IGNORANCE.to_string(), "(0 1)");
    }
}
