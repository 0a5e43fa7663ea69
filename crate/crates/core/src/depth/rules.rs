//! Interval inference rules. Each rule records itself in the certificate of
//! its output.

use crate::depth::interval::{Bounds, DepthInterval, MnBound, Operator, RuleStep};
use crate::error::Result;
use crate::rational::{self, Rational};

/// Starting interval for a function whose depth is only known through a
/// construction of the given hidden depth in ℝⁿ.
pub fn interval_from_construction(depth: usize, n: usize) -> Result<DepthInterval> {
    DepthInterval::derive(RuleStep::ExpressionUpper { depth, n }, &[])
}

/// `αf` for a scalar `α`.
pub fn rule_scale(i: &DepthInterval, alpha: &Rational) -> Result<DepthInterval> {
    DepthInterval::derive(
        RuleStep::ScaleCompose {
            input: i.bounds(),
            operator: Operator::Scalar {
                alpha: rational::format(alpha),
            },
        },
        &[i],
    )
}

/// `f ∘ φ` for an affine map `φ` of ℝⁿ.
pub fn rule_compose(i: &DepthInterval, invertible: bool) -> Result<DepthInterval> {
    DepthInterval::derive(
        RuleStep::ScaleCompose {
            input: i.bounds(),
            operator: Operator::Affine { invertible },
        },
        &[i],
    )
}

/// `f₁ + f₂`.
pub fn rule_sum(a: &DepthInterval, b: &DepthInterval) -> Result<DepthInterval> {
    DepthInterval::derive(
        RuleStep::Sum {
            left: a.bounds(),
            right: b.bounds(),
        },
        &[a, b],
    )
}

/// `max(f₁, f₂)` in ℝⁿ.
pub fn rule_max(a: &DepthInterval, b: &DepthInterval, mn: &MnBound) -> Result<DepthInterval> {
    DepthInterval::derive(
        RuleStep::Max {
            left: a.bounds(),
            right: b.bounds(),
            n: mn.n,
        },
        &[a, b],
    )
}

/// `αf₁ + f₂` where `f₁, f₂` share the exact depth of `shared` and `f₁ + f₂`
/// has the smaller exact depth of `sum`.
pub fn rule_perturb_sum(
    shared: &DepthInterval,
    sum: &DepthInterval,
    alpha: &Rational,
) -> Result<DepthInterval> {
    DepthInterval::derive(
        RuleStep::PerturbSum {
            shared: shared.bounds(),
            sum: sum.bounds(),
            alpha: rational::format(alpha),
        },
        &[shared, sum],
    )
}

/// A `p`-affine max function in ℝⁿ.
pub fn rule_affine_max(p: usize, independent: bool, mn: &MnBound) -> Result<DepthInterval> {
    DepthInterval::derive(
        RuleStep::AffineMax {
            p,
            independent,
            n: mn.n,
            conjecture: mn.conjecture_mode,
        },
        &[],
    )
}

/// Nonzero, non-positive function with compact support built with two hidden
/// layers in ℝ² or ℝ³.
pub fn rule_compact_support(n: usize) -> Result<DepthInterval> {
    DepthInterval::derive(RuleStep::CompactSupport { n }, &[])
}

/// Carries an interval over to a function shown pointwise equal to it.
pub fn rule_identity(i: &DepthInterval) -> Result<DepthInterval> {
    DepthInterval::derive(RuleStep::PointwiseIdentity { input: i.bounds() }, &[i])
}

/// Interval taken as given, e.g. from the command line.
pub fn assumed_interval(b: Bounds) -> Result<DepthInterval> {
    DepthInterval::derive(RuleStep::Assumed { bounds: b }, &[])
}
