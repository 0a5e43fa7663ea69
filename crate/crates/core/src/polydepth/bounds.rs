//! Depth bounds for polytopes: each fired rule contributes a lower or upper
//! bound and the interval is their intersection.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::depth::Bounds;
use crate::error::{Error, Result};
use crate::geom::{convex_hull, graph, max_clique, Polytope};
use crate::point::Point;
use crate::polydepth::expr::{realize, PolytopeExpr};
use crate::polydepth::families::Provenance;
use crate::polydepth::zonotope::{asymmetric_two_face, is_zonotope};
use crate::rational::ceil_log2;
use crate::sample::Sampler;

fn clog2(p: usize) -> usize {
    ceil_log2(p) as usize
}

/// Polytopes whose minimal depth is known exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KnownPolytope {
    Simplex { dim: usize },
    TriangularBipyramid,
    Neighborly { vertices: usize },
    ZonotopeBasedPyramid { dim: usize },
}

impl KnownPolytope {
    pub fn depth(&self) -> usize {
        match self {
            KnownPolytope::Simplex { dim } => clog2(dim + 1),
            KnownPolytope::TriangularBipyramid => 3,
            KnownPolytope::Neighborly { vertices } => clog2(*vertices),
            KnownPolytope::ZonotopeBasedPyramid { .. } => 2,
        }
    }

    fn citation(&self) -> &'static str {
        match self {
            KnownPolytope::Simplex { .. } => "minimal depth of simplices",
            KnownPolytope::TriangularBipyramid => "minimal depth of the triangular bipyramid",
            KnownPolytope::Neighborly { .. } => {
                "minimal depth of 2-neighbourly polytopes (cyclic polytopes: log2(p), not log2(p+1))"
            }
            KnownPolytope::ZonotopeBasedPyramid { .. } => {
                "minimal depth of (bi)pyramids over zonotopes"
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", content = "inputs", rename_all = "snake_case")]
pub enum PolyRule {
    VertexSplit { vertices: usize },
    Zonotope { generators: usize },
    NotZonotope { asymmetric_face: Vec<usize> },
    Clique { size: usize },
    Polygon,
    Prism { base: Bounds },
    Pyramid { base: Bounds },
    Bipyramid { base: Bounds },
    Expression { depth: usize },
    Known { entry: KnownPolytope },
    Decomposition { left: usize, right: usize },
}

impl PolyRule {
    /// Lower and upper bound contributed by the rule.
    pub fn claim(&self) -> Result<(Option<usize>, Option<usize>)> {
        Ok(match self {
            PolyRule::VertexSplit { vertices } => {
                if *vertices == 0 {
                    return Err(Error::RuleNotApplicable("polytope without vertices".into()));
                }
                (Some(usize::from(*vertices >= 2)), Some(clog2(*vertices)))
            }
            PolyRule::Zonotope { generators } => (None, Some((*generators).min(1))),
            PolyRule::NotZonotope { .. } => (Some(2), None),
            PolyRule::Clique { size } => {
                if *size < 2 {
                    return Err(Error::RuleNotApplicable(format!(
                        "clique bound needs at least 2 vertices, got {size}"
                    )));
                }
                (Some(clog2(*size)), None)
            }
            PolyRule::Polygon => (None, Some(2)),
            PolyRule::Prism { base } => (Some(base.lower), Some(base.upper.max(1))),
            PolyRule::Pyramid { base } => (Some(base.lower), Some(base.upper + 1)),
            PolyRule::Bipyramid { base } => (None, Some(base.upper.max(1) + 1)),
            PolyRule::Expression { depth } => (None, Some(*depth)),
            PolyRule::Known { entry } => (Some(entry.depth()), Some(entry.depth())),
            PolyRule::Decomposition { left, right } => (None, Some(*left.max(right))),
        })
    }

    pub fn anchor(&self) -> String {
        match self {
            PolyRule::VertexSplit { .. } => "hull of p points lies in depth ceil(log2 p)".into(),
            PolyRule::Zonotope { .. } => "depth-one polytopes are the zonotopes".into(),
            PolyRule::NotZonotope { .. } => {
                "a 2-face without central symmetry excludes depth one".into()
            }
            PolyRule::Clique { .. } => "complete subgraph on q vertices forces depth ceil(log2 q)".into(),
            PolyRule::Polygon => "every polygon lies in depth two".into(),
            PolyRule::Prism { .. } => "prism keeps the depth of its base".into(),
            PolyRule::Pyramid { .. } => "pyramid adds at most one to its base".into(),
            PolyRule::Bipyramid { .. } => "hull of base and apex segment".into(),
            PolyRule::Expression { .. } => "construction tree depth".into(),
            PolyRule::Known { entry } => format!("known result: {}", entry.citation()),
            PolyRule::Decomposition { .. } => {
                "convex decomposition bounds the support function".into()
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyRuleApplication {
    #[serde(flatten)]
    pub rule: PolyRule,
    pub paper_anchor: String,
    pub lower: Option<usize>,
    pub upper: Option<usize>,
}

impl PolyRuleApplication {
    pub fn new(rule: PolyRule) -> Result<Self> {
        let (lower, upper) = rule.claim()?;
        Ok(PolyRuleApplication {
            paper_anchor: rule.anchor(),
            rule,
            lower,
            upper,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyDepthInterval {
    pub lower: usize,
    pub upper: usize,
    pub certificate: Vec<PolyRuleApplication>,
}

fn aggregate(cert: &[PolyRuleApplication]) -> Result<Bounds> {
    let lower = cert.iter().filter_map(|a| a.lower).max().unwrap_or(0);
    let upper = cert
        .iter()
        .filter_map(|a| a.upper)
        .min()
        .ok_or_else(|| Error::InvalidArgument("certificate has no upper bound".into()))?;
    if lower > upper {
        return Err(Error::VerificationFailed(format!(
            "inconsistent polytope bounds [{lower}, {upper}]"
        )));
    }
    Ok(Bounds::new(lower, upper))
}

impl PolyDepthInterval {
    pub fn from_rules(rules: Vec<PolyRule>) -> Result<Self> {
        let certificate = rules
            .into_iter()
            .map(PolyRuleApplication::new)
            .collect::<Result<Vec<_>>>()?;
        let b = aggregate(&certificate)?;
        Ok(PolyDepthInterval {
            lower: b.lower,
            upper: b.upper,
            certificate,
        })
    }

    pub fn bounds(&self) -> Bounds {
        Bounds::new(self.lower, self.upper)
    }

    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }

    /// Recomputes every rule's contribution and the final intersection.
    pub fn replay(&self) -> Result<Bounds> {
        for (step, app) in self.certificate.iter().enumerate() {
            let (lower, upper) = app.rule.claim()?;
            if (lower, upper) != (app.lower, app.upper) || app.paper_anchor != app.rule.anchor() {
                return Err(Error::ReplayMismatch {
                    step,
                    reason: format!("recorded contribution of {:?} does not match", app.rule),
                });
            }
        }
        let b = aggregate(&self.certificate)?;
        if b != self.bounds() {
            return Err(Error::ReplayMismatch {
                step: self.certificate.len(),
                reason: format!("final interval {b} differs from recorded {}", self.bounds()),
            });
        }
        Ok(b)
    }

    pub fn fired(&self) -> impl Iterator<Item = &PolyRule> {
        self.certificate.iter().map(|a| &a.rule)
    }
}

impl fmt::Display for PolyDepthInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lower, self.upper)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundsOptions {
    pub known_results: bool,
}

impl Default for BoundsOptions {
    fn default() -> Self {
        BoundsOptions {
            known_results: true,
        }
    }
}

pub fn depth_bounds(p: &Polytope) -> PolyDepthInterval {
    depth_bounds_with(p, &Provenance::Raw, &BoundsOptions::default())
}

/// Best interval from the generic rules, the construction record (when it
/// matches `p`) and, optionally, the known-results table.
pub fn depth_bounds_with(p: &Polytope, prov: &Provenance, opts: &BoundsOptions) -> PolyDepthInterval {
    let mut rules = vec![PolyRule::VertexSplit {
        vertices: p.num_vertices(),
    }];
    let d = p.intrinsic_dim();
    if d >= 1 {
        match is_zonotope(p) {
            Some(gens) => rules.push(PolyRule::Zonotope {
                generators: gens.len(),
            }),
            None => rules.push(PolyRule::NotZonotope {
                asymmetric_face: asymmetric_two_face(p).expect("non-zonotope has such a face"),
            }),
        }
    }
    let g = graph(p);
    let clique = max_clique(&g).len();
    if clique >= 2 {
        rules.push(PolyRule::Clique { size: clique });
    }
    if d == 2 {
        rules.push(PolyRule::Polygon);
    }

    let consistent = !matches!(prov, Provenance::Raw) && prov.is_consistent(p);
    let mut known = Vec::new();
    if consistent {
        let base_bounds = |base: &[Point]| -> Option<(Polytope, Bounds)> {
            let q = convex_hull(base).ok()?;
            let b = depth_bounds_with(&q, &Provenance::Raw, opts).bounds();
            Some((q, b))
        };
        match prov {
            Provenance::Prism { base, .. } => {
                if let Some((_, b)) = base_bounds(base) {
                    rules.push(PolyRule::Prism { base: b });
                }
            }
            Provenance::Pyramid { base, .. } | Provenance::Bipyramid { base, .. } => {
                if let Some((q, b)) = base_bounds(base) {
                    rules.push(if matches!(prov, Provenance::Pyramid { .. }) {
                        PolyRule::Pyramid { base: b }
                    } else {
                        PolyRule::Bipyramid { base: b }
                    });
                    if d >= 3 && q.intrinsic_dim() >= 1 && is_zonotope(&q).is_some() {
                        known.push(KnownPolytope::ZonotopeBasedPyramid { dim: d });
                    }
                }
            }
            Provenance::FromExpr(e) => rules.push(PolyRule::Expression {
                depth: e.structural_depth(),
            }),
            _ => {}
        }
    }

    if opts.known_results {
        let n = p.num_vertices();
        if d >= 1 && n == d + 1 {
            known.insert(0, KnownPolytope::Simplex { dim: d });
        } else if d == 3 && p.lattice().f_vector()[..3] == [5, 9, 6] {
            known.insert(0, KnownPolytope::TriangularBipyramid);
        } else if n >= 3 && g.is_complete() {
            known.insert(0, KnownPolytope::Neighborly { vertices: n });
        }
        rules.extend(known.into_iter().map(|entry| PolyRule::Known { entry }));
    }

    PolyDepthInterval::from_rules(rules).expect("sound rules give a consistent interval")
}

/// Upper bound `max(d(e₁), d(e₂))` for the support function of `p` from the
/// decomposition `ℱp = ℱ(e₁) − ℱ(e₂) + linear`, checked at facet normals,
/// coordinate directions and `samples` seeded random directions.
pub fn check_single_decomposition_upper(
    p: &Polytope,
    e1: &PolytopeExpr,
    e2: &PolytopeExpr,
    samples: usize,
    seed: u64,
) -> Result<PolyDepthInterval> {
    let (q1, q2) = (realize(e1)?, realize(e2)?);
    let n = p.dim();
    crate::error::check_dim(n, q1.dim())?;
    crate::error::check_dim(n, q2.dim())?;
    let gap = |x: &Point| -> Result<crate::rational::Rational> {
        Ok(q1.support(x)? - q2.support(x)? - p.support(x)?)
    };
    let linear = Point(
        (0..n)
            .map(|i| gap(&Point::unit(n, i)))
            .collect::<Result<Vec<_>>>()?,
    );
    let mut dirs: Vec<Point> = (0..n).map(|i| -&Point::unit(n, i)).collect();
    for poly in [p, &q1, &q2] {
        dirs.extend(poly.facets().iter().map(|f| f.normal.clone()));
    }
    dirs.extend(Sampler::new(seed).points(n, samples));
    for x in &dirs {
        if gap(x)? != linear.dot(x) {
            return Err(Error::VerificationFailed(format!(
                "decomposition identity fails in direction {x}"
            )));
        }
    }
    PolyDepthInterval::from_rules(vec![PolyRule::Decomposition {
        left: e1.structural_depth(),
        right: e2.structural_depth(),
    }])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polydepth::expr::vertex_split_expr;
    use crate::polydepth::families::{
        cyclic_standard, generic_zonotope, octahedron, pyramid, simplex, triangular_bipyramid,
    };

    fn pts(cs: &[&[i64]]) -> Vec<Point> {
        cs.iter().map(|c| Point::from_ints(c)).collect()
    }

    #[test]
    fn simplex_four() {
        let s = simplex(4).unwrap();
        let i = depth_bounds(&s.polytope);
        assert_eq!(i.bounds(), Bounds::exact(3));
        assert!(i.fired().any(|r| *r == PolyRule::Clique { size: 5 }));
        assert!(i.fired().any(|r| *r == PolyRule::VertexSplit { vertices: 5 }));
        assert_eq!(i.replay().unwrap(), Bounds::exact(3));
    }

    #[test]
    fn octahedron_depth_two() {
        let o = octahedron().unwrap();
        let i = depth_bounds_with(&o.polytope, &o.provenance, &BoundsOptions::default());
        assert_eq!(i.bounds(), Bounds::exact(2));
        assert_eq!(depth_bounds(&o.polytope).bounds(), Bounds::new(2, 3));
    }

    #[test]
    fn triangular_bipyramid_known_entry() {
        let tb = triangular_bipyramid().unwrap();
        let with = depth_bounds_with(&tb.polytope, &tb.provenance, &BoundsOptions::default());
        assert_eq!(with.bounds(), Bounds::exact(3));
        let without = depth_bounds_with(
            &tb.polytope,
            &tb.provenance,
            &BoundsOptions {
                known_results: false,
            },
        );
        assert_eq!(without.bounds(), Bounds::new(2, 3));
        without.replay().unwrap();
    }

    #[test]
    fn points_segments_zonotopes() {
        let pt = convex_hull(&pts(&[&[1, 1]])).unwrap();
        assert_eq!(depth_bounds(&pt).bounds(), Bounds::exact(0));
        let seg = convex_hull(&pts(&[&[0, 0], &[1, 2]])).unwrap();
        assert_eq!(depth_bounds(&seg).bounds(), Bounds::exact(1));
        let z = generic_zonotope(3, 5, 7).unwrap();
        assert_eq!(depth_bounds(&z.polytope).bounds(), Bounds::exact(1));
    }

    #[test]
    fn polygon_depth_two() {
        let pent = convex_hull(&pts(&[&[0, 0], &[2, 0], &[3, 2], &[1, 3], &[-1, 1]])).unwrap();
        assert_eq!(depth_bounds(&pent).bounds(), Bounds::exact(2));
    }

    #[test]
    fn cyclic_exact() {
        for p in 5..=8 {
            let c = cyclic_standard(4, p).unwrap();
            let i = depth_bounds(&c.polytope);
            assert_eq!(i.bounds(), Bounds::exact(clog2(p)), "p = {p}");
        }
    }

    #[test]
    fn pyramid_over_square_is_two() {
        let sq = convex_hull(&pts(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[1, 1, 0]])).unwrap();
        let py = pyramid(&sq, &Point::from_ints(&[0, 0, 1])).unwrap();
        let i = depth_bounds_with(&py.polytope, &py.provenance, &BoundsOptions::default());
        assert_eq!(i.bounds(), Bounds::exact(2));
    }

    #[test]
    fn tampered_certificate_rejected() {
        let mut i = depth_bounds(&simplex(3).unwrap().polytope);
        i.certificate[0].upper = Some(1);
        assert!(i.replay().is_err());
    }

    #[test]
    fn single_decomposition() {
        let tri = convex_hull(&pts(&[&[1, 0], &[0, 1], &[0, 0]])).unwrap();
        let origin = PolytopeExpr::point(Point::zeros(2));
        let e = vertex_split_expr(tri.vertices()).unwrap();
        let i = check_single_decomposition_upper(&tri, &e, &origin, 200, 0).unwrap();
        assert_eq!(i.upper, 2);

        let shifted = vertex_split_expr(&pts(&[&[2, 1], &[1, 2], &[1, 1]])).unwrap();
        assert!(check_single_decomposition_upper(&tri, &shifted, &origin, 200, 0).is_ok());

        let wrong = vertex_split_expr(&pts(&[&[2, 0], &[0, 1], &[0, 0]])).unwrap();
        assert!(check_single_decomposition_upper(&tri, &wrong, &origin, 200, 0).is_err());
    }
}
