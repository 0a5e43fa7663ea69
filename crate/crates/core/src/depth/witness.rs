//! Concrete functions with certified minimal-depth intervals.

use serde::{Deserialize, Serialize};

use crate::cpwl::{AffineFn, CpwlExpr};
use crate::depth::interval::{clog2, Bounds, DepthInterval, MnBound};
use crate::depth::rules::{rule_affine_max, rule_compact_support, rule_scale};
use crate::error::{Error, Result};
use crate::rational::int;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Provenance {
    Proven { citation: String },
    ConjectureConditional,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessEntry {
    pub name: String,
    pub function: CpwlExpr,
    pub dim: usize,
    pub interval: DepthInterval,
    pub provenance: Provenance,
}

impl WitnessEntry {
    fn new(name: String, function: CpwlExpr, dim: usize, interval: DepthInterval) -> Self {
        let provenance = if interval.is_conditional() {
            Provenance::ConjectureConditional
        } else {
            Provenance::Proven {
                citation: interval
                    .certificate
                    .last()
                    .map(|s| s.paper_anchor.clone())
                    .unwrap_or_default(),
            }
        };
        WitnessEntry {
            name,
            function,
            dim,
            interval,
            provenance,
        }
    }

    pub fn is_proven(&self) -> bool {
        matches!(self.provenance, Provenance::Proven { .. })
    }
}

/// `max(x₁, …, x_p)`, or `max(x₁, …, x_p, 0)` with `with_zero`.
pub fn coordinate_max(n: usize, p: usize, with_zero: bool) -> CpwlExpr {
    let mut args: Vec<CpwlExpr> = (0..p).map(|i| CpwlExpr::var(n, i)).collect();
    if with_zero {
        args.push(CpwlExpr::zero(n));
    }
    if args.len() == 1 {
        return args.pop().expect("one argument");
    }
    CpwlExpr::max(args)
}

fn coordinate_max_name(p: usize, with_zero: bool) -> String {
    let vars: Vec<String> = (1..=p).map(|i| format!("x{i}")).collect();
    match (p, with_zero) {
        (1, false) => "x1".into(),
        (1, true) => "relu(x1)".into(),
        (_, false) => format!("max({})", vars.join(",")),
        (_, true) => format!("max({},0)", vars.join(",")),
    }
}

/// `−max(0, 1 − |x₁ + 2| − |x₂| [− |x₃|])`: non-positive, supported in the
/// open cross-polytope around `(−2, 0, …)` and hence inside `{x₁ ≤ −1}`.
pub fn bump(n: usize) -> Result<CpwlExpr> {
    if n != 2 && n != 3 {
        return Err(Error::NotConstructible(format!(
            "the compact-support bump is defined for n = 2, 3 (n = {n})"
        )));
    }
    let mut terms = vec![CpwlExpr::constant(n, int(1))];
    let mut shifted = AffineFn::var(n, 0);
    shifted.constant = int(2);
    terms.push(CpwlExpr::neg(CpwlExpr::abs(CpwlExpr::affine(shifted))));
    for i in 1..n {
        terms.push(CpwlExpr::neg(CpwlExpr::abs(CpwlExpr::var(n, i))));
    }
    let inner = CpwlExpr::sum(terms);
    Ok(CpwlExpr::neg(CpwlExpr::max(vec![
        CpwlExpr::zero(n),
        inner,
    ])))
}

fn coordinate_max_interval(n: usize, p: usize, with_zero: bool, conjecture: bool) -> Result<DepthInterval> {
    let mn = MnBound::new(n, conjecture)?;
    rule_affine_max(p + usize::from(with_zero), true, &mn)
}

/// All registered witnesses in ℝⁿ. Ladder entries whose exact value needs the
/// conjecture appear twice: once with the proven interval and once as a
/// conjecture-conditional exact entry.
pub fn witness_registry(n: usize) -> Result<Vec<WitnessEntry>> {
    MnBound::new(n, false)?;
    let mut out = Vec::new();
    for p in 1..=n {
        for with_zero in [false, true] {
            let name = coordinate_max_name(p, with_zero);
            let f = coordinate_max(n, p, with_zero);
            let proven = coordinate_max_interval(n, p, with_zero, false)?;
            let exact = proven.is_exact();
            out.push(WitnessEntry::new(name.clone(), f.clone(), n, proven));
            if !exact {
                let cond = coordinate_max_interval(n, p, with_zero, true)?;
                out.push(WitnessEntry::new(name, f, n, cond));
            }
        }
    }
    if n == 2 || n == 3 {
        out.push(WitnessEntry::new("bump".into(), bump(n)?, n, rule_compact_support(n)?));
    }
    Ok(out)
}

/// Entries usable without assuming the conjecture.
pub fn unconditional_witnesses(n: usize) -> Result<Vec<WitnessEntry>> {
    Ok(witness_registry(n)?
        .into_iter()
        .filter(WitnessEntry::is_proven)
        .collect())
}

fn require_exact(i: &DepthInterval, m: usize, what: &str) -> Result<()> {
    if i.bounds() == Bounds::exact(m) {
        Ok(())
    } else {
        Err(Error::NotConstructible(format!(
            "{what} is only known to lie in {i}, not exactly {m}; try conjecture mode"
        )))
    }
}

/// A function of exact minimal depth `m` in ℝⁿ.
pub fn exact_witness(m: usize, mn: &MnBound) -> Result<(CpwlExpr, DepthInterval)> {
    if m == 0 {
        return Ok((
            coordinate_max(mn.n, 1, false),
            coordinate_max_interval(mn.n, 1, false, mn.conjecture_mode)?,
        ));
    }
    let (_, _, f, i) = max_form_pair(m, mn)?;
    Ok((f, i))
}

/// `(g, i_g, f, i_f)` with `f = max(g, 0)` of exact depth `m` and `g` of exact
/// depth `m − 1`: `g = max(x₁, …, x_p)` with `p = 2^{m−1}`.
pub fn max_form_pair(
    m: usize,
    mn: &MnBound,
) -> Result<(CpwlExpr, DepthInterval, CpwlExpr, DepthInterval)> {
    if m == 0 {
        return Err(Error::NotConstructible("no max-form witness of depth 0".into()));
    }
    if m > mn.upper {
        return Err(Error::NotConstructible(format!(
            "depth {m} exceeds the sufficient depth {} in dimension {}",
            mn.upper, mn.n
        )));
    }
    let p = 1usize << (m - 1);
    if p > mn.n {
        return Err(Error::NotConstructible(format!(
            "a depth-{m} max-form witness needs at least {p} coordinates"
        )));
    }
    debug_assert_eq!(clog2(p + 1), m);
    let g = coordinate_max(mn.n, p, false);
    let ig = coordinate_max_interval(mn.n, p, false, mn.conjecture_mode)?;
    let f = CpwlExpr::relu(g.clone())?;
    let i_f = coordinate_max_interval(mn.n, p, true, mn.conjecture_mode)?;
    require_exact(&ig, m - 1, &coordinate_max_name(p, false))?;
    require_exact(&i_f, m, &coordinate_max_name(p, true))?;
    Ok((g, ig, f, i_f))
}

/// Pair `(f̂₁, f̂₂)` of exact depths `lo < hi` with `max(f̂₁, f̂₂) = 0`.
pub struct ZeroMaxPair {
    pub low: CpwlExpr,
    pub high: CpwlExpr,
    pub low_interval: DepthInterval,
    pub high_interval: DepthInterval,
}

pub fn zero_max_pair(lo: usize, hi: usize, mn: &MnBound) -> Result<ZeroMaxPair> {
    if lo >= hi {
        return Err(Error::InvalidArgument(format!("zero-max pair needs lo < hi, got ({lo}, {hi})")));
    }
    if lo == 0 {
        let (low, low_interval) = exact_witness(0, mn)?;
        let low = CpwlExpr::scale(int(0), low);
        let low_interval = rule_scale(&low_interval, &int(0))?;
        let (_, _, f, i_f) = max_form_pair(hi, mn)?;
        return Ok(ZeroMaxPair {
            low,
            high: CpwlExpr::neg(f),
            low_interval,
            high_interval: rule_scale(&i_f, &int(-1))?,
        });
    }
    if lo == 1 && hi == 2 && (mn.n == 2 || mn.n == 3) {
        let (_, _, h, ih) = max_form_pair(1, mn)?;
        return Ok(ZeroMaxPair {
            low: CpwlExpr::neg(h),
            high: bump(mn.n)?,
            low_interval: rule_scale(&ih, &int(-1))?,
            high_interval: rule_compact_support(mn.n)?,
        });
    }
    Err(Error::NotConstructible(format!(
        "no zero-max pair with depths ({lo}, {hi}) is available in dimension {}",
        mn.n
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cpwl::evaluate;
    use crate::point::Point;
    use crate::rational::{ratio, Rational};
    use crate::relu::depth_bound;
    use crate::sample::sample_set;

    #[test]
    fn registry_small_dimensions() {
        let r1 = witness_registry(1).unwrap();
        let names: Vec<&str> = r1.iter().map(|e| e.name.as_str()).collect();
        assert_eq!(names, vec!["x1", "relu(x1)"]);
        assert_eq!(r1[0].interval.bounds(), Bounds::exact(0));
        assert_eq!(r1[1].interval.bounds(), Bounds::exact(1));

        let r2 = witness_registry(2).unwrap();
        let f = r2.iter().find(|e| e.name == "max(x1,x2,0)").unwrap();
        assert_eq!(f.interval.bounds(), Bounds::exact(2));
        assert!(f.is_proven());
        let b = r2.iter().find(|e| e.name == "bump").unwrap();
        assert_eq!(b.interval.bounds(), Bounds::exact(2));
        assert!(r2.iter().all(WitnessEntry::is_proven));
    }

    #[test]
    fn registry_dimension_four() {
        let r = witness_registry(4).unwrap();
        let top: Vec<&WitnessEntry> = r.iter().filter(|e| e.name == "max(x1,x2,x3,x4,0)").collect();
        assert_eq!(top.len(), 2);
        assert_eq!(top[0].interval.bounds(), Bounds::new(2, 3));
        assert!(top[0].is_proven());
        assert_eq!(top[1].interval.bounds(), Bounds::exact(3));
        assert_eq!(top[1].provenance, Provenance::ConjectureConditional);
        assert!(unconditional_witnesses(4).unwrap().iter().all(|e| !e.interval.is_conditional()));
    }

    #[test]
    fn witness_upper_bounds_match_constructions() {
        for n in 1..=5 {
            for e in witness_registry(n).unwrap() {
                assert!(depth_bound(&e.function).unwrap() >= e.interval.lower, "{}", e.name);
                assert!(e.interval.replay().is_ok());
            }
        }
    }

    #[test]
    fn bump_is_supported_left_of_the_axis() {
        let b = bump(2).unwrap();
        assert_eq!(evaluate(&b, &Point::from_ints(&[-2, 0])).unwrap(), int(-1));
        assert_eq!(evaluate(&b, &Point(vec![ratio(-5, 2), Rational::from_integer(0.into())])).unwrap(), ratio(-1, 2));
        for p in sample_set(2, 500, 3, &[]) {
            let v = evaluate(&b, &p).unwrap();
            assert!(v <= int(0));
            if p.0[0] > int(-1) {
                assert_eq!(v, int(0));
            }
        }
    }

    #[test]
    fn zero_max_pairs_vanish() {
        for n in [2, 3] {
            let mn = MnBound::new(n, false).unwrap();
            for (lo, hi) in [(0, 1), (0, 2), (1, 2)] {
                let z = zero_max_pair(lo, hi, &mn).unwrap();
                assert_eq!(z.low_interval.bounds(), Bounds::exact(lo));
                assert_eq!(z.high_interval.bounds(), Bounds::exact(hi));
                let m = CpwlExpr::max(vec![z.low.clone(), z.high.clone()]);
                for p in sample_set(n, 300, 1, &[Point::zeros(n)]) {
                    assert_eq!(evaluate(&m, &p).unwrap(), int(0));
                }
            }
        }
        assert!(zero_max_pair(1, 2, &MnBound::new(4, false).unwrap()).is_err());
    }

    #[test]
    fn max_form_pairs_need_conjecture_above_two() {
        let mn = MnBound::new(4, false).unwrap();
        assert!(max_form_pair(2, &mn).is_ok());
        assert!(max_form_pair(3, &mn).is_err());
        let conj = MnBound::new(4, true).unwrap();
        let (_, ig, _, i_f) = max_form_pair(3, &conj).unwrap();
        assert_eq!(ig.bounds(), Bounds::exact(2));
        assert_eq!(i_f.bounds(), Bounds::exact(3));
        assert!(i_f.is_conditional());
    }
}
