//! Polytope families with a record of how each was built.

use num_traits::Zero;

use crate::error::{check_dim, Error, Result};
use crate::geom::{affine_rank, convex_hull, minkowski_sum, AffineChart, Polytope};
use crate::point::Point;
use crate::polydepth::expr::{realize, PolytopeExpr};
use crate::polydepth::zonotope::generic_generators;
use crate::rational::{int, Rational};

/// How a polytope was constructed; lets construction-specific bounds fire.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Raw,
    Simplex { n: usize },
    Cyclic { n: usize, params: Vec<Rational> },
    Zonotope { generators: Vec<Point> },
    Pyramid { base: Vec<Point>, apex: Point },
    Prism { base: Vec<Point>, direction: Point },
    Bipyramid { base: Vec<Point>, apices: [Point; 2] },
    FromExpr(PolytopeExpr),
}

impl Provenance {
    pub fn name(&self) -> &'static str {
        match self {
            Provenance::Raw => "raw",
            Provenance::Simplex { .. } => "simplex",
            Provenance::Cyclic { .. } => "cyclic",
            Provenance::Zonotope { .. } => "zonotope",
            Provenance::Pyramid { .. } => "pyramid",
            Provenance::Prism { .. } => "prism",
            Provenance::Bipyramid { .. } => "bipyramid",
            Provenance::FromExpr(_) => "expression",
        }
    }

    /// Rebuilds the polytope described by the tag (`None` for raw input).
    pub fn rebuild(&self) -> Result<Option<Polytope>> {
        let p = match self {
            Provenance::Raw => return Ok(None),
            Provenance::Simplex { n } => simplex(*n)?.polytope,
            Provenance::Cyclic { n, params } => cyclic(*n, params)?.polytope,
            Provenance::Zonotope { generators } => zonotope(generators)?.polytope,
            Provenance::Pyramid { base, apex } => pyramid(&convex_hull(base)?, apex)?.polytope,
            Provenance::Prism { base, direction } => {
                prism(&convex_hull(base)?, direction)?.polytope
            }
            Provenance::Bipyramid { base, apices } => {
                bipyramid(&convex_hull(base)?, &apices[0], &apices[1])?.polytope
            }
            Provenance::FromExpr(e) => realize(e)?,
        };
        Ok(Some(p))
    }

    /// Whether the tag describes `p` exactly.
    pub fn is_consistent(&self, p: &Polytope) -> bool {
        match self.rebuild() {
            Ok(Some(q)) => q == *p,
            Ok(None) => true,
            Err(_) => false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Tagged {
    pub polytope: Polytope,
    pub provenance: Provenance,
}

/// `conv{0, e₁, …, eₙ}`.
pub fn simplex(n: usize) -> Result<Tagged> {
    let mut pts = vec![Point::zeros(n)];
    pts.extend((0..n).map(|i| Point::unit(n, i)));
    Ok(Tagged {
        polytope: convex_hull(&pts)?,
        provenance: Provenance::Simplex { n },
    })
}

/// Hull of `(t, t², …, tⁿ)` over distinct parameters.
pub fn cyclic(n: usize, params: &[Rational]) -> Result<Tagged> {
    if n == 0 || params.is_empty() {
        return Err(Error::InvalidArgument("cyclic polytope needs n ≥ 1 and a parameter".into()));
    }
    let mut sorted = params.to_vec();
    sorted.sort();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidArgument("moment curve parameters must be distinct".into()));
    }
    let pts: Vec<Point> = params
        .iter()
        .map(|t| {
            let mut c = Vec::with_capacity(n);
            let mut acc = t.clone();
            for _ in 0..n {
                c.push(acc.clone());
                acc *= t;
            }
            Point(c)
        })
        .collect();
    Ok(Tagged {
        polytope: convex_hull(&pts)?,
        provenance: Provenance::Cyclic {
            n,
            params: params.to_vec(),
        },
    })
}

/// Cyclic polytope with parameters `1, …, p`.
pub fn cyclic_standard(n: usize, p: usize) -> Result<Tagged> {
    let params: Vec<Rational> = (1..=p as i64).map(int).collect();
    cyclic(n, &params)
}

/// `∑ [0, bᵢ]`.
pub fn zonotope(generators: &[Point]) -> Result<Tagged> {
    let first = generators
        .first()
        .ok_or(Error::EmptyInput("zonotope generators"))?;
    let n = first.dim();
    let mut acc = Polytope::point(Point::zeros(n));
    for g in generators {
        check_dim(n, g.dim())?;
        let seg = convex_hull(&[Point::zeros(n), g.clone()])?;
        acc = minkowski_sum(&acc, &seg)?;
    }
    Ok(Tagged {
        polytope: acc,
        provenance: Provenance::Zonotope {
            generators: generators.to_vec(),
        },
    })
}

/// Zonotope from `p` seeded generators in general position in ℝⁿ.
pub fn generic_zonotope(n: usize, p: usize, seed: u64) -> Result<Tagged> {
    zonotope(&generic_generators(n, p, seed)?)
}

fn outside_hull_of(base: &Polytope, extra: &[Point]) -> bool {
    let mut pts = base.vertices().to_vec();
    pts.extend_from_slice(extra);
    affine_rank(&pts) == base.intrinsic_dim() + 1
}

/// `conv(Q ∪ {apex})` with the apex off the affine hull of `Q`.
pub fn pyramid(base: &Polytope, apex: &Point) -> Result<Tagged> {
    check_dim(base.dim(), apex.dim())?;
    if !outside_hull_of(base, std::slice::from_ref(apex)) {
        return Err(Error::InvalidArgument("apex lies in the affine hull of the base".into()));
    }
    let mut pts = base.vertices().to_vec();
    pts.push(apex.clone());
    Ok(Tagged {
        polytope: convex_hull(&pts)?,
        provenance: Provenance::Pyramid {
            base: base.vertices().to_vec(),
            apex: apex.clone(),
        },
    })
}

/// `Q + [0, d]` with `d` transverse to the affine hull of `Q`.
pub fn prism(base: &Polytope, direction: &Point) -> Result<Tagged> {
    check_dim(base.dim(), direction.dim())?;
    let shifted = &base.vertices()[0] + direction;
    if !outside_hull_of(base, &[shifted]) {
        return Err(Error::InvalidArgument("prism direction is parallel to the base".into()));
    }
    let seg = convex_hull(&[Point::zeros(base.dim()), direction.clone()])?;
    Ok(Tagged {
        polytope: minkowski_sum(base, &seg)?,
        provenance: Provenance::Prism {
            base: base.vertices().to_vec(),
            direction: direction.clone(),
        },
    })
}

/// Point where the line through `a` and `b` meets the affine hull of the
/// base, if it meets it in exactly one point.
fn crossing(chart: &AffineChart, a: &Point, b: &Point) -> Option<(Rational, Point)> {
    let off = |x: &Point| &chart.embed(&chart.project(x)) - x;
    let u = off(a);
    let w = &off(b) - &u;
    let i = w.0.iter().position(|c| !c.is_zero())?;
    let t = -(&u[i] / &w[i]);
    let x = &a.scale(&(Rational::from_integer(1.into()) - &t)) + &b.scale(&t);
    off(&x).is_zero().then_some((t, x))
}

/// `conv(Q ∪ {a₁, a₂})` where the segment `[a₁, a₂]` crosses the relative
/// interior of `Q`.
pub fn bipyramid(base: &Polytope, a1: &Point, a2: &Point) -> Result<Tagged> {
    check_dim(base.dim(), a1.dim())?;
    check_dim(base.dim(), a2.dim())?;
    let bad = |why: &str| Err(Error::InvalidArgument(format!("invalid bipyramid: {why}")));
    if base.intrinsic_dim() == 0 {
        return bad("base is a point");
    }
    if !outside_hull_of(base, std::slice::from_ref(a1)) || !outside_hull_of(base, &[a1.clone(), a2.clone()]) {
        return bad("apices must leave the base hyperplane in one extra dimension");
    }
    let chart = AffineChart::of(base.vertices());
    let Some((t, x)) = crossing(&chart, a1, a2) else {
        return bad("apex segment does not meet the base hull");
    };
    let zero = Rational::zero();
    let one = Rational::from_integer(1.into());
    let interior = base.contains(&x) && base.facets().iter().all(|f| f.normal.dot(&x) < f.offset);
    if t <= zero || t >= one || !interior {
        return bad("apex segment must cross the relative interior of the base");
    }
    let mut pts = base.vertices().to_vec();
    pts.push(a1.clone());
    pts.push(a2.clone());
    Ok(Tagged {
        polytope: convex_hull(&pts)?,
        provenance: Provenance::Bipyramid {
            base: base.vertices().to_vec(),
            apices: [a1.clone(), a2.clone()],
        },
    })
}

/// Bipyramid over the square `conv{±e₁, ±e₂}` with apices `±e₃`.
pub fn octahedron() -> Result<Tagged> {
    let sq = convex_hull(&[
        Point::from_ints(&[1, 0, 0]),
        Point::from_ints(&[0, 1, 0]),
        Point::from_ints(&[-1, 0, 0]),
        Point::from_ints(&[0, -1, 0]),
    ])?;
    bipyramid(&sq, &Point::from_ints(&[0, 0, 1]), &Point::from_ints(&[0, 0, -1]))
}

/// Bipyramid over a triangle centred at the origin with apices `±e₃`.
pub fn triangular_bipyramid() -> Result<Tagged> {
    let tri = convex_hull(&[
        Point::from_ints(&[1, 0, 0]),
        Point::from_ints(&[0, 1, 0]),
        Point::from_ints(&[-1, -1, 0]),
    ])?;
    bipyramid(&tri, &Point::from_ints(&[0, 0, 1]), &Point::from_ints(&[0, 0, -1]))
}
