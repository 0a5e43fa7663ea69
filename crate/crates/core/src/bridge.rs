//! Correspondence between linear max functions and polytopes: support
//! functions, Newton polytopes, the semiring identities and the compilation
//! of polytope construction trees into ReLU networks.

use std::collections::VecDeque;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::cpwl::{affinely_independent, AffineFn, MaxAffine};
use crate::depth::{rule_affine_max, Bounds, MnBound};
use crate::error::{check_dim, Error, Result};
use crate::geom::{conv_union, convex_hull, minkowski_sum, Polytope};
use crate::point::Point;
use crate::polydepth::{
    depth_bounds_with, realize, vertex_split_expr, BoundsOptions, PolytopeExpr, Provenance,
};
use crate::rational::Rational;
use crate::relu::{eval_net, net_linear_combination, net_max_pair, ReluNetwork};
use crate::sample::Sampler;

/// Linear max function `x ↦ max_i aᵢ · x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportFn {
    inner: MaxAffine,
}

impl SupportFn {
    pub fn new(inner: MaxAffine) -> Result<Self> {
        if !inner.is_linear() {
            return Err(Error::InvalidArgument(
                "support functions have zero constant terms".into(),
            ));
        }
        Ok(SupportFn { inner })
    }

    pub fn from_coefficients(coeffs: Vec<Point>) -> Result<Self> {
        Self::new(MaxAffine::new(coeffs.into_iter().map(AffineFn::linear).collect())?)
    }

    pub fn dim(&self) -> usize {
        self.inner.dim()
    }

    pub fn eval(&self, x: &Point) -> Rational {
        self.inner.eval(x)
    }

    pub fn as_max_affine(&self) -> &MaxAffine {
        &self.inner
    }

    pub fn coefficients(&self) -> Vec<Point> {
        self.inner.args().iter().map(|l| l.coeffs.clone()).collect()
    }

    /// Same function with its terms reduced to the hull vertices, sorted.
    pub fn canonical(&self) -> Result<SupportFn> {
        Ok(support_function(&newton_polytope(self)?))
    }
}

/// One linear term per vertex of `p`.
pub fn support_function(p: &Polytope) -> SupportFn {
    SupportFn::from_coefficients(p.vertices().to_vec()).expect("vertices share a dimension")
}

pub fn newton_polytope(f: &SupportFn) -> Result<Polytope> {
    convex_hull(&f.coefficients())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Identity {
    Sum,
    Conv,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomomorphismCheck {
    pub holds: bool,
    pub directions_checked: usize,
    pub failed_identity: Option<Identity>,
    #[serde(serialize_with = "crate::io::ser_opt_point")]
    pub witness: Option<Point>,
}

/// Facet normals of `P` and `Q` followed by `random` seeded directions.
pub fn homomorphism_directions(p: &Polytope, q: &Polytope, random: usize, seed: u64) -> Vec<Point> {
    let mut dirs: Vec<Point> = p
        .facets()
        .iter()
        .chain(q.facets())
        .map(|f| f.normal.clone())
        .collect();
    dirs.extend(Sampler::new(seed).points(p.dim(), random));
    dirs
}

/// `ℱ(P+Q) = ℱP + ℱQ` and `ℱ conv(P ∪ Q) = max(ℱP, ℱQ)` at the facet normals
/// of both polytopes and `random` seeded directions.
pub fn check_semiring_homomorphism(
    p: &Polytope,
    q: &Polytope,
    random: usize,
    seed: u64,
) -> Result<HomomorphismCheck> {
    check_dim(p.dim(), q.dim())?;
    let sum = minkowski_sum(p, q)?;
    let hull = conv_union(&[p.clone(), q.clone()])?;
    check_homomorphism_candidates(p, q, &sum, &hull, &homomorphism_directions(p, q, random, seed))
}

/// Checks candidate polytopes for `P + Q` and `conv(P ∪ Q)` against the two
/// identities at the given directions.
pub fn check_homomorphism_candidates(
    p: &Polytope,
    q: &Polytope,
    sum: &Polytope,
    hull: &Polytope,
    directions: &[Point],
) -> Result<HomomorphismCheck> {
    let (fp, fq) = (support_function(p), support_function(q));
    let (fs, fh) = (support_function(sum), support_function(hull));
    for x in directions {
        check_dim(p.dim(), x.dim())?;
        let (a, b) = (fp.eval(x), fq.eval(x));
        let failed = if fs.eval(x) != &a + &b {
            Some(Identity::Sum)
        } else if fh.eval(x) != a.max(b) {
            Some(Identity::Conv)
        } else {
            None
        };
        if failed.is_some() {
            return Ok(HomomorphismCheck {
                holds: false,
                directions_checked: directions.len(),
                failed_identity: failed,
                witness: Some(x.clone()),
            });
        }
    }
    Ok(HomomorphismCheck {
        holds: true,
        directions_checked: directions.len(),
        failed_identity: None,
        witness: None,
    })
}

/// Network computing the support function of `realize(e)`: leaves become
/// linear maps, sums add networks, hulls merge pairwise by the max gadget.
/// The hidden depth equals the structural depth of `e`.
pub fn compile_polytope_expr(e: &PolytopeExpr) -> Result<ReluNetwork> {
    e.dim()?;
    compile_rec(e)
}

fn compile_rec(e: &PolytopeExpr) -> Result<ReluNetwork> {
    match e {
        PolytopeExpr::Point(a) => ReluNetwork::affine(&[AffineFn::linear(a.clone())]),
        PolytopeExpr::Sum(cs) => {
            let parts = cs
                .iter()
                .map(|c| Ok((Rational::one(), compile_rec(c)?)))
                .collect::<Result<Vec<_>>>()?;
            net_linear_combination(&parts)
        }
        PolytopeExpr::Conv(cs) => {
            let mut nets = cs.iter().map(compile_rec).collect::<Result<Vec<_>>>()?;
            nets.sort_by_key(ReluNetwork::hidden_depth);
            let mut queue: VecDeque<ReluNetwork> = nets.into();
            while queue.len() > 1 {
                let a = queue.pop_front().expect("two entries");
                let b = queue.pop_front().expect("two entries");
                let merged = net_max_pair(&a, &b)?;
                let d = merged.hidden_depth();
                let pos = queue
                    .iter()
                    .position(|x| x.hidden_depth() > d)
                    .unwrap_or(queue.len());
                queue.insert(pos, merged);
            }
            queue.pop_front().ok_or(Error::EmptyInput("hull of expressions"))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConsistencyCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessNetwork {
    pub name: String,
    pub structural_depth: usize,
    pub network_depth: usize,
    pub points_checked: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConsistencyReport {
    pub polytope: Bounds,
    pub function: Bounds,
    /// Polytope interval after raising its lower end to the function's.
    pub transferred: Bounds,
    pub conditional: bool,
    pub checks: Vec<ConsistencyCheck>,
    pub witnesses: Vec<WitnessNetwork>,
}

impl ConsistencyReport {
    pub fn is_consistent(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Compares the polytope interval of `p` with the interval of its support
/// function as an affine max, and checks every available construction tree
/// compiles to a network of the expected depth computing `ℱp`.
pub fn poly_depth_consistency(
    p: &Polytope,
    prov: &Provenance,
    conjecture: bool,
    samples: usize,
    seed: u64,
) -> Result<ConsistencyReport> {
    let n = p.dim();
    let poly = depth_bounds_with(p, prov, &BoundsOptions::default()).bounds();
    let f = support_function(p);
    let mn = MnBound::new(n, conjecture)?;
    let independent = affinely_independent(f.as_max_affine().args());
    let fi = rule_affine_max(f.as_max_affine().len(), independent, &mn)?;
    let function = fi.bounds();
    let transferred = Bounds::new(poly.lower.max(function.lower), poly.upper);

    let mut checks = vec![ConsistencyCheck {
        name: "function lower bound within polytope upper bound".into(),
        passed: function.lower <= poly.upper,
        detail: format!("function {function}, polytope {poly}"),
    }];
    if poly.is_exact() {
        checks.push(ConsistencyCheck {
            name: "transferred lower bound agrees with exact polytope depth".into(),
            passed: transferred == poly,
            detail: format!("transferred {transferred}"),
        });
    }

    let mut trees = vec![("vertex split".to_string(), vertex_split_expr(p.vertices())?)];
    if let Provenance::FromExpr(e) = prov {
        if realize(e)? == *p {
            trees.push(("construction tree".to_string(), e.clone()));
        }
    }
    let pts = Sampler::new(seed).points(n, samples);
    let mut witnesses = Vec::new();
    for (name, e) in trees {
        let net = compile_polytope_expr(&e)?;
        let mismatch = pts
            .iter()
            .find(|x| eval_net(&net, x).map(|v| v != f.eval(x)).unwrap_or(true));
        let d = net.hidden_depth();
        checks.push(ConsistencyCheck {
            name: format!("{name} network computes the support function"),
            passed: mismatch.is_none(),
            detail: mismatch.map_or_else(|| format!("{} points", pts.len()), |x| format!("differs at {x}")),
        });
        checks.push(ConsistencyCheck {
            name: format!("{name} network depth respects the function lower bound"),
            passed: d == e.structural_depth() && d >= function.lower,
            detail: format!("network depth {d}, structural depth {}", e.structural_depth()),
        });
        witnesses.push(WitnessNetwork {
            name,
            structural_depth: e.structural_depth(),
            network_depth: d,
            points_checked: pts.len(),
        });
    }
    Ok(ConsistencyReport {
        polytope: poly,
        function,
        transferred,
        conditional: fi.is_conditional(),
        checks,
        witnesses,
    })
}

/// `f(λx) = λ f(x)`.
pub fn positively_homogeneous_at(f: &SupportFn, x: &Point, lambda: &Rational) -> bool {
    lambda < &Rational::zero() || f.eval(&x.scale(lambda)) == lambda * f.eval(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polydepth::simplex;
    use crate::rational::{int, ratio};

    fn hull(cs: &[&[i64]]) -> Polytope {
        convex_hull(&cs.iter().map(|c| Point::from_ints(c)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn support_examples() {
        let o = hull(&[&[0, 0]]);
        let f = support_function(&o);
        assert_eq!(f.eval(&Point::from_ints(&[3, -4])), int(0));
        let tri = hull(&[&[1, 0], &[0, 1], &[0, 0]]);
        let f = support_function(&tri);
        for x in Sampler::new(0).points(2, 100) {
            let expect = x[0].clone().max(x[1].clone()).max(int(0));
            assert_eq!(f.eval(&x), expect);
        }
        assert_eq!(newton_polytope(&f).unwrap(), tri);
    }

    #[test]
    fn canonicalization_drops_interior_terms() {
        let f = SupportFn::from_coefficients(vec![
            Point::from_ints(&[2, 0]),
            Point::from_ints(&[0, 0]),
            Point::from_ints(&[1, 0]),
        ])
        .unwrap();
        let c = f.canonical().unwrap();
        assert_eq!(c.coefficients().len(), 2);
        for x in Sampler::new(3).points(2, 50) {
            assert_eq!(c.eval(&x), f.eval(&x));
        }
        assert!(SupportFn::new(MaxAffine::new(vec![AffineFn::from_ints(&[1], 1)]).unwrap()).is_err());
    }

    #[test]
    fn homomorphism_square_triangle() {
        let sq = hull(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let tri = hull(&[&[1, 0], &[0, 1], &[0, 0]]);
        let r = check_semiring_homomorphism(&sq, &tri, 200, 0).unwrap();
        assert!(r.holds);
        assert_eq!(r.directions_checked, 4 + 3 + 200);

        let pt = hull(&[&[2, 2]]);
        assert!(check_semiring_homomorphism(&pt, &pt, 10, 0).unwrap().holds);

        let bad_sum = hull(&[&[0, 0], &[2, 0], &[0, 2], &[2, 1], &[1, 3]]);
        let good_hull = conv_union(&[sq.clone(), tri.clone()]).unwrap();
        let dirs = homomorphism_directions(&sq, &tri, 50, 1);
        let r = check_homomorphism_candidates(&sq, &tri, &bad_sum, &good_hull, &dirs).unwrap();
        assert!(!r.holds);
        assert_eq!(r.failed_identity, Some(Identity::Sum));
        assert!(r.witness.is_some());
    }

    #[test]
    fn compile_leaves_and_pairs() {
        let leaf = PolytopeExpr::point(Point::from_ints(&[2, -1]));
        let net = compile_polytope_expr(&leaf).unwrap();
        assert_eq!(net.hidden_depth(), 0);
        let seg = PolytopeExpr::segment(Point::from_ints(&[1, 0]), Point::from_ints(&[0, 1]));
        let net = compile_polytope_expr(&seg).unwrap();
        assert_eq!(net.hidden_depth(), 1);
        let x = Point::from_ints(&[3, 5]);
        assert_eq!(eval_net(&net, &x).unwrap(), int(5));
    }

    #[test]
    fn compile_simplex_split_tree() {
        let s = simplex(4).unwrap().polytope;
        let e = vertex_split_expr(s.vertices()).unwrap();
        let net = compile_polytope_expr(&e).unwrap();
        assert_eq!(net.hidden_depth(), 3);
        let f = support_function(&s);
        for x in Sampler::new(9).points(4, 1000) {
            assert_eq!(eval_net(&net, &x).unwrap(), f.eval(&x));
        }
    }

    #[test]
    fn consistency_examples() {
        let tri = hull(&[&[1, 0], &[0, 1], &[0, 0]]);
        let r = poly_depth_consistency(&tri, &Provenance::Raw, false, 100, 0).unwrap();
        assert_eq!(r.function, Bounds::exact(2));
        assert_eq!(r.polytope, Bounds::exact(2));
        assert!(r.is_consistent());

        let seg = hull(&[&[0, 0], &[1, 0]]);
        let r = poly_depth_consistency(&seg, &Provenance::Raw, false, 100, 0).unwrap();
        assert_eq!((r.function, r.polytope), (Bounds::exact(1), Bounds::exact(1)));

        let s4 = simplex(4).unwrap();
        let r = poly_depth_consistency(&s4.polytope, &s4.provenance, true, 100, 0).unwrap();
        assert_eq!(r.function, Bounds::exact(3));
        assert!(r.conditional);
        assert_eq!(r.transferred, Bounds::exact(3));
        assert!(r.is_consistent());
        let r = poly_depth_consistency(&s4.polytope, &s4.provenance, false, 100, 0).unwrap();
        assert_eq!(r.function, Bounds::new(2, 3));
        assert_eq!(r.polytope, Bounds::exact(3));
    }

    #[test]
    fn homogeneity() {
        let f = support_function(&hull(&[&[1, 2], &[-3, 0], &[0, -1]]));
        for x in Sampler::new(4).points(2, 50) {
            for l in [int(0), ratio(1, 2), int(2), int(7)] {
                assert!(positively_homogeneous_at(&f, &x, &l));
            }
        }
    }
}
