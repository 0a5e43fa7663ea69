//! Generators for max examples with prescribed operand and result depths,
//! depth-dropping sums and their perturbations, and functions of maximal
//! depth obtained by adding a shallow function to a full affine max.

use num_traits::{One, Zero};

use crate::cpwl::{evaluate, CpwlExpr};
use crate::depth::interval::{Bounds, DepthInterval, MnBound};
use crate::depth::rules::{
    interval_from_construction, rule_affine_max, rule_identity, rule_perturb_sum, rule_scale,
    rule_sum,
};
use crate::depth::witness::{coordinate_max, exact_witness, max_form_pair, zero_max_pair};
use crate::error::{Error, Result};
use crate::point::Point;
use crate::rational::{int, Rational};
use crate::relu::depth_bound;
use crate::sample::{sample_set, DEFAULT_SAMPLES, DEFAULT_SEED};

/// Options shared by the generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenOptions {
    pub conjecture: bool,
    pub samples: usize,
    pub seed: u64,
}

impl Default for GenOptions {
    fn default() -> Self {
        GenOptions {
            conjecture: false,
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
        }
    }
}

/// Which construction produced a max example.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MaxCase {
    /// `m₁ = m₂ = m`, `m* = m + 1`: `f₂ = 2f₁`, `f₃ = max(f₁, 0) + f₁`.
    EqualRaise,
    /// `m₁ = m₂ = m*`: `f₂ = f₁`.
    EqualSame,
    /// `m₁ = m₂`, `m* < m₁`: shift a depth-`m₁` max pair by `f₃ − f′`.
    EqualDrop,
    /// `m₁ < m₂`, `m* = m₁`: `f₂ = f₁ − f` with `f = max(g, 0) ≥ 0`.
    KeepLower,
    /// `m₁ < m₂`, `m* = m₂`: `f₂ = f + f₁`.
    KeepUpper,
    /// `m₁ < m₂`, `m* = m₂ + 1`: `f₂ = f₁ + g`, `f₃ = max(g, 0) + f₁`.
    RaiseUpper,
    /// `m* < m₁ < m₂`: `fᵢ = f̂ᵢ + f₃` with a zero-max pair.
    BelowBoth,
    /// `m₁ < m* < m₂`: `f₁` given, `f₃ = f₁ − f̂₁`, `f₂ = f̂₂ + f₃` with a
    /// zero-max pair of depths `(m*, m₂)`.
    Between,
}

impl MaxCase {
    pub fn describe(&self) -> &'static str {
        match self {
            MaxCase::EqualRaise => "equal depths, result one deeper",
            MaxCase::EqualSame => "equal depths, result unchanged",
            MaxCase::EqualDrop => "equal depths, result shallower",
            MaxCase::KeepLower => "result at the lower operand depth",
            MaxCase::KeepUpper => "result at the upper operand depth",
            MaxCase::RaiseUpper => "result one above the upper operand depth",
            MaxCase::BelowBoth => "result below both operands (zero-max pair)",
            MaxCase::Between => "result strictly between the operands (zero-max pair)",
        }
    }
}

#[derive(Clone, Debug)]
pub struct MaxExample {
    pub n: usize,
    pub depths: (usize, usize, usize),
    pub case: MaxCase,
    pub f1: CpwlExpr,
    pub f2: CpwlExpr,
    pub f3: CpwlExpr,
    pub i1: DepthInterval,
    pub i2: DepthInterval,
    pub i3: DepthInterval,
    /// Interval of `max(f₁, f₂)`, carried over from `f₃`.
    pub max_interval: DepthInterval,
    pub zero_pair: Option<(CpwlExpr, CpwlExpr)>,
    pub points_checked: usize,
}

impl MaxExample {
    pub fn is_conditional(&self) -> bool {
        [&self.i1, &self.i2, &self.max_interval]
            .iter()
            .any(|i| i.is_conditional())
    }
}

/// Small integer grid around the origin and the bump centre.
pub fn probe_points(n: usize) -> Vec<Point> {
    let k = n.min(3);
    let vals = [-3i64, -2, -1, 0, 1];
    let mut out = Vec::new();
    let total = vals.len().pow(k as u32);
    for code in 0..total {
        let mut c = code;
        let mut coords = vec![0i64; n];
        for slot in coords.iter_mut().take(k) {
            *slot = vals[c % vals.len()];
            c /= vals.len();
        }
        out.push(Point::from_ints(&coords));
    }
    out
}

fn add(a: &CpwlExpr, b: &CpwlExpr) -> CpwlExpr {
    CpwlExpr::sum(vec![a.clone(), b.clone()])
}

fn sub(a: &CpwlExpr, b: &CpwlExpr) -> CpwlExpr {
    CpwlExpr::sub(a.clone(), b.clone())
}

fn neg_interval(i: &DepthInterval) -> Result<DepthInterval> {
    rule_scale(i, &int(-1))
}

/// Checks `lhs ≡ rhs` exactly on the sample set and returns the number of
/// points compared.
pub fn check_identity(
    lhs: &CpwlExpr,
    rhs: &CpwlExpr,
    n: usize,
    opts: &GenOptions,
    what: &str,
) -> Result<usize> {
    let pts = sample_set(n, opts.samples, opts.seed, &probe_points(n));
    for p in &pts {
        let (a, b) = (evaluate(lhs, p)?, evaluate(rhs, p)?);
        if a != b {
            return Err(Error::VerificationFailed(format!(
                "{what} fails at {p}: {a} ≠ {b}"
            )));
        }
    }
    Ok(pts.len())
}

/// Builds `f₁, f₂` of exact minimal depths `m₁, m₂` with `max(f₁, f₂) = f₃` of
/// exact minimal depth `m*` in ℝⁿ, and checks the identity exactly.
pub fn generate_max_example(
    m1: usize,
    m2: usize,
    m_star: usize,
    n: usize,
    opts: &GenOptions,
) -> Result<MaxExample> {
    if m1 > m2 {
        let mut ex = generate_max_example(m2, m1, m_star, n, opts)?;
        std::mem::swap(&mut ex.f1, &mut ex.f2);
        std::mem::swap(&mut ex.i1, &mut ex.i2);
        ex.depths = (m1, m2, m_star);
        return Ok(ex);
    }
    let mn = MnBound::new(n, opts.conjecture)?;
    if m2 > mn.upper {
        return Err(Error::NotConstructible(format!(
            "depth {m2} exceeds the sufficient depth {} in dimension {n}",
            mn.upper
        )));
    }
    if m_star > (m2 + 1).min(mn.upper) {
        return Err(Error::NotConstructible(format!(
            "max of depths {m1} and {m2} has depth at most {}",
            (m2 + 1).min(mn.upper)
        )));
    }

    let mut zero_pair = None;
    let (case, f1, f2, f3, i1, i2, i3) = if m1 == m2 {
        let m = m1;
        if m_star == m + 1 {
            // f₁ with max(f₁, 0) one deeper; f₂ = 2f₁
            let (g, ig, h, ih) = max_form_pair(m + 1, &mn)?;
            let f2 = CpwlExpr::scale(int(2), g.clone());
            let i2 = rule_scale(&ig, &int(2))?;
            let f3 = add(&h, &g);
            let i3 = rule_sum(&ih, &ig)?;
            (MaxCase::EqualRaise, g, f2, f3, ig, i2, i3)
        } else if m_star == m {
            let (f, i) = exact_witness(m, &mn)?;
            let i2 = rule_identity(&i)?;
            let i3 = rule_identity(&i)?;
            (MaxCase::EqualSame, f.clone(), f.clone(), f, i, i2, i3)
        } else {
            // f′ = max(g, 0) + g = max(g, 2g); shift both arguments by f₃ − f′
            let (g, ig, h, ih) = max_form_pair(m, &mn)?;
            let (f3, i3) = exact_witness(m_star, &mn)?;
            let fp = add(&h, &g);
            let ifp = rule_sum(&ih, &ig)?;
            let shift = sub(&f3, &fp);
            let i_shift = rule_sum(&i3, &neg_interval(&ifp)?)?;
            let f1 = add(&g, &shift);
            let i1 = rule_sum(&ig, &i_shift)?;
            let g2 = CpwlExpr::scale(int(2), g.clone());
            let f2 = add(&g2, &shift);
            let i2 = rule_sum(&rule_scale(&ig, &int(2))?, &i_shift)?;
            (MaxCase::EqualDrop, f1, f2, f3, i1, i2, i3)
        }
    } else if m_star == m1 {
        let (f1, i1) = exact_witness(m1, &mn)?;
        let (_, _, f, i_f) = max_form_pair(m2, &mn)?;
        let f2 = sub(&f1, &f);
        let i2 = rule_sum(&i1, &neg_interval(&i_f)?)?;
        let i3 = rule_identity(&i1)?;
        (MaxCase::KeepLower, f1.clone(), f2, f1, i1, i2, i3)
    } else if m_star == m2 {
        let (f1, i1) = exact_witness(m1, &mn)?;
        let (_, _, f, i_f) = max_form_pair(m2, &mn)?;
        let f2 = add(&f, &f1);
        let i2 = rule_sum(&i_f, &i1)?;
        let i3 = rule_identity(&i2)?;
        (MaxCase::KeepUpper, f1, f2.clone(), f2, i1, i2, i3)
    } else if m_star == m2 + 1 {
        let (f1, i1) = exact_witness(m1, &mn)?;
        let (g, ig, f, i_f) = max_form_pair(m2 + 1, &mn)?;
        let f2 = add(&f1, &g);
        let i2 = rule_sum(&i1, &ig)?;
        let f3 = add(&f, &f1);
        let i3 = rule_sum(&i_f, &i1)?;
        (MaxCase::RaiseUpper, f1, f2, f3, i1, i2, i3)
    } else if m_star < m1 {
        let z = zero_max_pair(m1, m2, &mn)?;
        let (f3, i3) = exact_witness(m_star, &mn)?;
        let f1 = add(&z.low, &f3);
        let i1 = rule_sum(&z.low_interval, &i3)?;
        let f2 = add(&z.high, &f3);
        let i2 = rule_sum(&z.high_interval, &i3)?;
        zero_pair = Some((z.low, z.high));
        (MaxCase::BelowBoth, f1, f2, f3, i1, i2, i3)
    } else {
        // m₁ < m* < m₂
        let z = zero_max_pair(m_star, m2, &mn)?;
        let (f1, i1) = exact_witness(m1, &mn)?;
        let f3 = sub(&f1, &z.low);
        let i3 = rule_sum(&i1, &neg_interval(&z.low_interval)?)?;
        let f2 = add(&z.high, &f3);
        let i2 = rule_sum(&z.high_interval, &i3)?;
        zero_pair = Some((z.low, z.high));
        (MaxCase::Between, f1, f2, f3, i1, i2, i3)
    };

    for (i, m, name) in [(&i1, m1, "f1"), (&i2, m2, "f2"), (&i3, m_star, "f3")] {
        if i.bounds() != Bounds::exact(m) {
            return Err(Error::VerificationFailed(format!(
                "{name} was derived in {i}, expected exactly {m}"
            )));
        }
    }

    let lhs = CpwlExpr::max(vec![f1.clone(), f2.clone()]);
    let mut points_checked = check_identity(&lhs, &f3, n, opts, "max(f1, f2) = f3")?;
    if let Some((a, b)) = &zero_pair {
        let zm = CpwlExpr::max(vec![a.clone(), b.clone()]);
        points_checked += check_identity(&zm, &CpwlExpr::zero(n), n, opts, "max(f̂1, f̂2) = 0")?;
    }
    let max_interval = rule_identity(&i3)?;

    Ok(MaxExample {
        n,
        depths: (m1, m2, m_star),
        case,
        f1,
        f2,
        f3,
        i1,
        i2,
        i3,
        max_interval,
        zero_pair,
        points_checked,
    })
}

/// All `(m₁, m₂, m*)` with `m₁ ≤ m₂ ≤ Mₙ` and `m* ≤ min(m₂ + 1, Mₙ)` for which
/// a construction succeeds in ℝⁿ.
pub fn constructible_triples(n: usize, opts: &GenOptions) -> Result<Vec<(usize, usize, usize)>> {
    let mn = MnBound::new(n, opts.conjecture)?;
    let mut out = Vec::new();
    for m2 in 0..=mn.upper {
        for m1 in 0..=m2 {
            for ms in 0..=(m2 + 1).min(mn.upper) {
                if generate_max_example(m1, m2, ms, n, &GenOptions { samples: 0, ..*opts }).is_ok() {
                    out.push((m1, m2, ms));
                }
            }
        }
    }
    Ok(out)
}

/// `f₁, f₂` of exact depth `m₁` whose sum drops to depth `m₁ − 1`, and the
/// perturbed sum `αf₁ + f₂`.
#[derive(Clone, Debug)]
pub struct PerturbedSum {
    pub f1: CpwlExpr,
    pub f2: CpwlExpr,
    pub sum: CpwlExpr,
    pub perturbed: CpwlExpr,
    pub shared: DepthInterval,
    pub sum_interval: DepthInterval,
    pub interval: DepthInterval,
}

/// `f₁ = max(g, 0)`, `f₂ = g − max(g, 0)` with `g` of depth `m₁ − 1`, so that
/// `f₁ + f₂ = g`.
pub fn perturbed_sum(n: usize, m1: usize, alpha: &Rational, opts: &GenOptions) -> Result<PerturbedSum> {
    let mn = MnBound::new(n, opts.conjecture)?;
    let (g, ig, f1, i1) = max_form_pair(m1, &mn)?;
    let f2 = sub(&g, &f1);
    let i2 = rule_sum(&ig, &neg_interval(&i1)?)?;
    if i2.bounds() != i1.bounds() {
        return Err(Error::VerificationFailed(format!(
            "second summand derived in {i2}, expected {i1}"
        )));
    }
    let sum = add(&f1, &f2);
    check_identity(&sum, &g, n, opts, "f1 + f2 = g")?;
    let sum_interval = rule_identity(&ig)?;
    let perturbed = add(&CpwlExpr::scale(alpha.clone(), f1.clone()), &f2);
    let interval = rule_perturb_sum(&i1, &sum_interval, alpha)?;
    Ok(PerturbedSum {
        f1,
        f2,
        sum,
        perturbed,
        shared: i1,
        sum_interval,
        interval,
    })
}

/// `f = max(x₁, …, xₙ, 0) + f₂` for `f₂` built with fewer hidden layers than
/// the proven lower bound on `Mₙ`.
pub fn conj_expand_family(
    n: usize,
    f2: &CpwlExpr,
    opts: &GenOptions,
) -> Result<(CpwlExpr, DepthInterval)> {
    let mn = MnBound::new(n, opts.conjecture)?;
    let d = f2.dim()?;
    if d != n {
        return Err(Error::DimensionMismatch { expected: n, found: d });
    }
    let i2 = interval_from_construction(depth_bound(f2)?, n)?;
    if i2.upper >= mn.lower {
        return Err(Error::RuleNotApplicable(format!(
            "second summand is only certified in {i2}; needs upper below {}",
            mn.lower
        )));
    }
    let f1 = coordinate_max(n, n, true);
    let i1 = rule_affine_max(n + 1, true, &mn)?;
    let f = add(&f1, f2);
    Ok((f, rule_sum(&i1, &i2)?))
}

/// `α = 1 + 1/k` for `k = 1, 2, …`: a sequence approaching the unperturbed
/// sum.
pub fn approaching_alphas(count: usize) -> Vec<Rational> {
    (1..=count as i64)
        .map(|k| Rational::one() + Rational::new(1.into(), k.into()))
        .filter(|a| !a.is_zero())
        .collect()
}
