//! Minimal-depth intervals and their replayable certificates.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, ceil_log2};

/// Closed integer interval `[lower, upper]` of candidate minimal depths.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bounds {
    pub lower: usize,
    pub upper: usize,
}

impl Bounds {
    pub fn new(lower: usize, upper: usize) -> Self {
        debug_assert!(lower <= upper);
        Bounds { lower, upper }
    }

    pub fn exact(m: usize) -> Self {
        Bounds::new(m, m)
    }

    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }

    pub fn contains(&self, m: usize) -> bool {
        self.lower <= m && m <= self.upper
    }

    pub fn disjoint_below(&self, other: &Bounds) -> bool {
        self.upper < other.lower
    }
}

impl fmt::Display for Bounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lower, self.upper)
    }
}

pub(crate) fn clog2(p: usize) -> usize {
    ceil_log2(p) as usize
}

/// Range of the minimum depth sufficient for every CPWL function on ℝⁿ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MnBound {
    pub n: usize,
    pub lower: usize,
    pub upper: usize,
    pub conjecture_mode: bool,
}

impl MnBound {
    pub fn new(n: usize, conjecture_mode: bool) -> Result<Self> {
        if n == 0 {
            return Err(Error::OutOfRange {
                what: "dimension",
                value: 0,
                min: 1,
                max: usize::MAX,
            });
        }
        let upper = clog2(n + 1);
        let lower = if n <= 3 || conjecture_mode { upper } else { 2 };
        Ok(MnBound {
            n,
            lower,
            upper,
            conjecture_mode,
        })
    }

    pub fn bounds(&self) -> Bounds {
        Bounds::new(self.lower, self.upper)
    }

    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }

    /// Exactness holds only because conjecture mode was assumed.
    pub fn is_conditional(&self) -> bool {
        self.n >= 4 && self.conjecture_mode
    }
}

/// Second operand of the scalar/affine invariance rule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Operator {
    Scalar { alpha: String },
    Affine { invertible: bool },
}

/// One inference rule together with all of its inputs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", content = "inputs", rename_all = "snake_case")]
pub enum RuleStep {
    ScaleCompose { input: Bounds, operator: Operator },
    Sum { left: Bounds, right: Bounds },
    Max { left: Bounds, right: Bounds, n: usize },
    PerturbSum { shared: Bounds, sum: Bounds, alpha: String },
    AffineMax { p: usize, independent: bool, n: usize, conjecture: bool },
    CompactSupport { n: usize },
    ExpressionUpper { depth: usize, n: usize },
    PointwiseIdentity { input: Bounds },
    Assumed { bounds: Bounds },
}

pub const ANCHOR_INVARIANCE: &str = "invariance under nonzero scaling and invertible affine maps";
pub const ANCHOR_SUM_DIFFERENT: &str = "sum of functions with different minimal depths";
pub const ANCHOR_SUM_NECESSARY: &str = "necessary condition on the minimal depth of a sum";
pub const ANCHOR_MAX: &str = "minimal depth bound for the max of two functions";
pub const ANCHOR_PERTURB: &str = "perturbing one summand of a depth-dropping sum";
pub const ANCHOR_AFFINE_MAX_INDEPENDENT: &str =
    "affine max functions with affinely independent arguments share minimal depth";
pub const ANCHOR_AFFINE_MAX_LADDER: &str =
    "dropping one argument of an affine max lowers minimal depth by at most one";
pub const ANCHOR_AFFINE_MAX_DEPENDENT: &str = "sufficient depth of a balanced max tree";
pub const ANCHOR_COMPACT_SUPPORT: &str =
    "one hidden layer cannot represent a nonzero function with compact support";
pub const ANCHOR_EXPRESSION: &str = "sufficient depth of scaling, composition, sum and max";
pub const ANCHOR_IDENTITY: &str = "pointwise identity of CPWL functions";
pub const ANCHOR_ASSUMED: &str = "interval supplied as input";

impl RuleStep {
    /// Re-executes the rule: result bounds, anchor and conditional flag.
    pub fn apply(&self) -> Result<(Bounds, &'static str, bool)> {
        match self {
            RuleStep::ScaleCompose { input, operator } => {
                let out = match operator {
                    Operator::Scalar { alpha } => {
                        if rational::parse(alpha)?.is_zero() {
                            Bounds::exact(0)
                        } else {
                            *input
                        }
                    }
                    Operator::Affine { invertible: true } => *input,
                    Operator::Affine { invertible: false } => Bounds::new(0, input.upper),
                };
                Ok((out, ANCHOR_INVARIANCE, false))
            }
            RuleStep::Sum { left, right } => Ok(sum_bounds(left, right)),
            RuleStep::Max { left, right, n } => {
                let mn = MnBound::new(*n, false)?;
                let upper = (left.upper.max(right.upper) + 1).min(mn.upper);
                Ok((Bounds::new(0, upper), ANCHOR_MAX, false))
            }
            RuleStep::PerturbSum { shared, sum, alpha } => {
                let alpha = rational::parse(alpha)?;
                if !shared.is_exact() || !sum.is_exact() || sum.upper >= shared.lower {
                    return Err(Error::RuleNotApplicable(format!(
                        "needs exact summand depth m1 and exact sum depth m < m1, got {shared} and {sum}"
                    )));
                }
                if alpha.is_one() {
                    Ok((*sum, ANCHOR_PERTURB, false))
                } else {
                    Ok((*shared, ANCHOR_PERTURB, false))
                }
            }
            RuleStep::AffineMax {
                p,
                independent,
                n,
                conjecture,
            } => affine_max_bounds(*p, *independent, *n, *conjecture),
            RuleStep::CompactSupport { n } => {
                if *n == 2 || *n == 3 {
                    Ok((Bounds::exact(2), ANCHOR_COMPACT_SUPPORT, false))
                } else {
                    Err(Error::RuleNotApplicable(format!(
                        "compact-support lower bound is only available for n = 2, 3 (n = {n})"
                    )))
                }
            }
            RuleStep::ExpressionUpper { depth, n } => {
                let mn = MnBound::new(*n, false)?;
                Ok((Bounds::new(0, (*depth).min(mn.upper)), ANCHOR_EXPRESSION, false))
            }
            RuleStep::PointwiseIdentity { input } => Ok((*input, ANCHOR_IDENTITY, false)),
            RuleStep::Assumed { bounds } => {
                if bounds.lower > bounds.upper {
                    return Err(Error::InvalidArgument(format!(
                        "interval lower {} exceeds upper {}",
                        bounds.lower, bounds.upper
                    )));
                }
                Ok((*bounds, ANCHOR_ASSUMED, false))
            }
        }
    }
}

fn sum_bounds(a: &Bounds, b: &Bounds) -> (Bounds, &'static str, bool) {
    let top = a.upper.max(b.upper);
    if a.is_exact() && b.is_exact() {
        if a.lower != b.lower {
            return (Bounds::exact(top), ANCHOR_SUM_DIFFERENT, false);
        }
        return (Bounds::new(0, top), ANCHOR_SUM_NECESSARY, false);
    }
    if a.disjoint_below(b) {
        return (*b, ANCHOR_SUM_DIFFERENT, false);
    }
    if b.disjoint_below(a) {
        return (*a, ANCHOR_SUM_DIFFERENT, false);
    }
    (Bounds::new(0, top), ANCHOR_SUM_NECESSARY, false)
}

fn affine_max_bounds(
    p: usize,
    independent: bool,
    n: usize,
    conjecture: bool,
) -> Result<(Bounds, &'static str, bool)> {
    let mn = MnBound::new(n, conjecture)?;
    if p == 0 {
        return Err(Error::EmptyInput("affine max arguments"));
    }
    if p == 1 {
        return Ok((Bounds::exact(0), ANCHOR_AFFINE_MAX_INDEPENDENT, false));
    }
    if !independent {
        let upper = clog2(p).min(mn.upper);
        return Ok((Bounds::new(0, upper), ANCHOR_AFFINE_MAX_DEPENDENT, false));
    }
    if p > n + 1 {
        return Err(Error::InvalidArgument(format!(
            "{p} affine functions in dimension {n} cannot be affinely independent"
        )));
    }
    match p {
        2 => Ok((Bounds::exact(1), ANCHOR_AFFINE_MAX_INDEPENDENT, false)),
        3 => Ok((Bounds::exact(2), ANCHOR_AFFINE_MAX_INDEPENDENT, false)),
        _ if p == n + 1 => Ok((mn.bounds(), ANCHOR_AFFINE_MAX_INDEPENDENT, mn.is_conditional())),
        _ => {
            let top = clog2(p);
            if conjecture {
                Ok((Bounds::exact(top), ANCHOR_AFFINE_MAX_LADDER, true))
            } else {
                Ok((Bounds::new(2, top), ANCHOR_AFFINE_MAX_LADDER, false))
            }
        }
    }
}

/// A recorded rule application.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleApplication {
    #[serde(flatten)]
    pub step: RuleStep,
    pub paper_anchor: String,
    pub conditional: bool,
    pub result: Bounds,
}

/// Ordered list of rule applications; the last one yields the interval.
pub type Certificate = Vec<RuleApplication>;

/// Minimal-depth interval with its derivation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthInterval {
    pub lower: usize,
    pub upper: usize,
    pub certificate: Certificate,
}

impl DepthInterval {
    /// Runs `step` and appends it to the concatenation of the operand
    /// certificates.
    pub fn derive(step: RuleStep, operands: &[&DepthInterval]) -> Result<Self> {
        let (result, anchor, own_conditional) = step.apply()?;
        let mut certificate: Certificate = Vec::new();
        for op in operands {
            certificate.extend(op.certificate.iter().cloned());
        }
        let conditional = own_conditional || operands.iter().any(|o| o.is_conditional());
        certificate.push(RuleApplication {
            step,
            paper_anchor: anchor.to_string(),
            conditional,
            result,
        });
        Ok(DepthInterval {
            lower: result.lower,
            upper: result.upper,
            certificate,
        })
    }

    pub fn bounds(&self) -> Bounds {
        Bounds::new(self.lower, self.upper)
    }

    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }

    pub fn contains(&self, m: usize) -> bool {
        self.bounds().contains(m)
    }

    /// True iff some step depends on assuming the conjecture.
    pub fn is_conditional(&self) -> bool {
        self.certificate.iter().any(|s| s.conditional)
    }

    /// Re-executes every step and checks the recorded results.
    pub fn replay(&self) -> Result<Bounds> {
        let last = replay_certificate(&self.certificate)?;
        if last != self.bounds() {
            return Err(Error::ReplayMismatch {
                step: self.certificate.len().saturating_sub(1),
                reason: format!("certificate yields {last}, interval says {}", self.bounds()),
            });
        }
        Ok(last)
    }
}

impl fmt::Display for DepthInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bounds())
    }
}

/// Replays a certificate and returns the final step's bounds.
pub fn replay_certificate(cert: &[RuleApplication]) -> Result<Bounds> {
    let mut last = None;
    for (i, app) in cert.iter().enumerate() {
        let (result, anchor, own_conditional) = app.step.apply().map_err(|e| Error::ReplayMismatch {
            step: i,
            reason: e.to_string(),
        })?;
        if result != app.result {
            return Err(Error::ReplayMismatch {
                step: i,
                reason: format!("recomputed {result}, recorded {}", app.result),
            });
        }
        if anchor != app.paper_anchor {
            return Err(Error::ReplayMismatch {
                step: i,
                reason: format!("anchor {:?} does not match rule", app.paper_anchor),
            });
        }
        if own_conditional && !app.conditional {
            return Err(Error::ReplayMismatch {
                step: i,
                reason: "conditional step recorded as unconditional".into(),
            });
        }
        last = Some(result);
    }
    last.ok_or(Error::EmptyInput("certificate"))
}
