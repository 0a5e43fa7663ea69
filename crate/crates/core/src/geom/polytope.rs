use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::One;

use crate::bitset::BitSet;
use crate::error::{check_dim, Error, Result};
use crate::geom::chart::AffineChart;
use crate::geom::hull::facets_full_dim;
use crate::geom::lattice::FaceLattice;
use crate::matrix::Matrix;
use crate::point::Point;
use crate::rational::{gcd_of, Rational};

/// Facet inequality `normal · x ≤ offset`, tight on `vertices`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Facet {
    pub normal: Point,
    pub offset: Rational,
    pub vertices: Vec<usize>,
}

/// A convex polytope in canonical V-representation.
///
/// Vertices are exactly the extreme points, sorted lexicographically. Facets
/// are computed in the intrinsic dimension and lifted to the ambient space;
/// normals are primitive integer vectors (outward, positively scaled).
#[derive(Clone, Debug)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Point>,
    intrinsic_dim: usize,
    facets: Vec<Facet>,
    lattice: OnceLock<FaceLattice>,
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.vertices == other.vertices
    }
}

impl Eq for Polytope {}

/// A full-dimensional copy of a polytope together with its chart.
#[derive(Clone, Debug)]
pub struct Restricted {
    pub polytope: Polytope,
    pub chart: AffineChart,
}

impl Polytope {
    pub fn point(p: Point) -> Polytope {
        Polytope {
            dim: p.dim(),
            vertices: vec![p],
            intrinsic_dim: 0,
            facets: Vec::new(),
            lattice: OnceLock::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn intrinsic_dim(&self) -> usize {
        self.intrinsic_dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn lattice(&self) -> &FaceLattice {
        self.lattice.get_or_init(|| FaceLattice::build(self))
    }

    /// Membership test (exact).
    pub fn contains(&self, x: &Point) -> bool {
        if x.dim() != self.dim {
            return false;
        }
        let chart = AffineChart::of(&self.vertices);
        if chart.embed(&chart.project(x)) != *x {
            return false;
        }
        self.facets.iter().all(|f| f.normal.dot(x) <= f.offset)
    }

    pub fn translate(&self, v: &Point) -> Result<Polytope> {
        check_dim(self.dim, v.dim())?;
        let pts: Vec<Point> = self.vertices.iter().map(|p| p + v).collect();
        convex_hull(&pts)
    }

    /// Translate so that the lexicographically smallest vertex is the origin.
    pub fn normalized_translation(&self) -> Polytope {
        let shift = -&self.vertices[0];
        self.translate(&shift).expect("same dimension")
    }

    pub fn eq_up_to_translation(&self, other: &Polytope) -> bool {
        self.dim == other.dim
            && self.vertices.len() == other.vertices.len()
            && self.normalized_translation() == other.normalized_translation()
    }

    /// Support value `max_v v · x` over the vertices.
    pub fn support(&self, x: &Point) -> Result<Rational> {
        check_dim(self.dim, x.dim())?;
        Ok(self
            .vertices
            .iter()
            .map(|v| v.dot(x))
            .max()
            .expect("nonempty vertex set"))
    }

    pub fn centroid_of_vertices(&self) -> Point {
        let n = Rational::from_integer(BigInt::from(self.vertices.len()));
        let mut acc = Point::zeros(self.dim);
        for v in &self.vertices {
            acc = &acc + v;
        }
        acc.scale(&n.recip())
    }
}

/// Convex hull of a nonempty point list in a common ambient dimension.
pub fn convex_hull(points: &[Point]) -> Result<Polytope> {
    let first = points.first().ok_or(Error::EmptyInput("convex_hull"))?;
    let dim = first.dim();
    for p in points {
        check_dim(dim, p.dim())?;
    }
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();

    let chart = AffineChart::of(&pts);
    let d = chart.dim();
    if d == 0 {
        return Ok(Polytope::point(pts.swap_remove(0)));
    }

    let projected: Vec<Point> = pts.iter().map(|p| chart.project(p)).collect();
    let raw = facets_full_dim(&projected, d);

    let n = pts.len();
    let mut is_vertex = vec![false; n];
    for (i, flag) in is_vertex.iter_mut().enumerate() {
        let mut face = BitSet::full(n);
        for f in raw.iter().filter(|f| f.tight.contains(i)) {
            face = face.intersection(&f.tight);
        }
        *flag = face.len() == 1;
    }
    let mut remap = vec![usize::MAX; n];
    let mut vertices = Vec::new();
    for i in 0..n {
        if is_vertex[i] {
            remap[i] = vertices.len();
            vertices.push(pts[i].clone());
        }
    }

    let mut facets: Vec<Facet> = raw
        .into_iter()
        .map(|f| {
            let g = gcd_of(&f.normal);
            let g = if g.is_one() { BigInt::one() } else { g };
            let chart_normal = Point(
                f.normal
                    .iter()
                    .map(|x| Rational::from_integer(x / &g))
                    .collect(),
            );
            let offset = Rational::new(f.offset, g);
            let verts = f
                .tight
                .iter()
                .filter(|&i| is_vertex[i])
                .map(|i| remap[i])
                .collect();
            Facet {
                normal: chart.lift_functional(&chart_normal),
                offset,
                vertices: verts,
            }
        })
        .collect();
    facets.sort();

    Ok(Polytope {
        dim,
        vertices,
        intrinsic_dim: d,
        facets,
        lattice: OnceLock::new(),
    })
}

/// `P + Q = conv{p + q}` over vertex pairs.
pub fn minkowski_sum(p: &Polytope, q: &Polytope) -> Result<Polytope> {
    check_dim(p.dim, q.dim)?;
    let sums: Vec<Point> = p
        .vertices
        .iter()
        .flat_map(|a| q.vertices.iter().map(move |b| a + b))
        .collect();
    convex_hull(&sums)
}

pub fn minkowski_sum_all(parts: &[Polytope]) -> Result<Polytope> {
    let (first, rest) = parts.split_first().ok_or(Error::EmptyInput("minkowski_sum"))?;
    rest.iter()
        .try_fold(first.clone(), |acc, p| minkowski_sum(&acc, p))
}

/// `conv(P ∪ Q)`.
pub fn conv_union(parts: &[Polytope]) -> Result<Polytope> {
    let pts: Vec<Point> = parts.iter().flat_map(|p| p.vertices.iter().cloned()).collect();
    convex_hull(&pts)
}

/// Image of `P` under `x ↦ M x + c`.
pub fn affine_image(p: &Polytope, m: &Matrix, c: &Point) -> Result<Polytope> {
    check_dim(p.dim, m.cols())?;
    check_dim(m.rows(), c.dim())?;
    let pts = p
        .vertices
        .iter()
        .map(|v| m.apply(v).map(|w| &w + c))
        .collect::<Result<Vec<_>>>()?;
    convex_hull(&pts)
}

/// Full-dimensional copy of `P` in ℚᵈ, d = intrinsic dimension, plus the
/// chart whose embedding maps it back onto `P`.
pub fn restrict_to_affine_hull(p: &Polytope) -> Restricted {
    let chart = AffineChart::of(&p.vertices);
    let pts: Vec<Point> = p.vertices.iter().map(|v| chart.project(v)).collect();
    let polytope = convex_hull(&pts).expect("nonempty projected vertex set");
    Restricted { polytope, chart }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn pts(cs: &[&[i64]]) -> Vec<Point> {
        cs.iter().map(|c| Point::from_ints(c)).collect()
    }

    #[test]
    fn single_point() {
        let p = convex_hull(&pts(&[&[0, 0]])).unwrap();
        assert_eq!(p.num_vertices(), 1);
        assert!(p.facets().is_empty());
    }

    #[test]
    fn interior_point_removed() {
        let mut input = pts(&[&[0, 0], &[1, 0], &[0, 1]]);
        input.push(Point(vec![ratio(1, 4), ratio(1, 4)]));
        let p = convex_hull(&input).unwrap();
        assert_eq!(p.vertices(), &pts(&[&[0, 0], &[0, 1], &[1, 0]])[..]);
        assert_eq!(p.facets().len(), 3);
    }

    #[test]
    fn triangle_plus_segment() {
        let t = convex_hull(&pts(&[&[0, 0], &[0, 1], &[1, 1]])).unwrap();
        let s = convex_hull(&pts(&[&[0, 0], &[1, 0]])).unwrap();
        let sum = minkowski_sum(&t, &s).unwrap();
        let expect = convex_hull(&pts(&[&[0, 0], &[1, 0], &[2, 1], &[0, 1]])).unwrap();
        assert_eq!(sum, expect);
        assert_eq!(sum.num_vertices(), 4);
    }

    #[test]
    fn translate_by_point_summand() {
        let t = convex_hull(&pts(&[&[0, 0], &[0, 1], &[1, 1]])).unwrap();
        let z = Polytope::point(Point::from_ints(&[3, -2]));
        let sum = minkowski_sum(&t, &z).unwrap();
        assert_eq!(sum, t.translate(&Point::from_ints(&[3, -2])).unwrap());
    }

    #[test]
    fn collinear_points_give_segment() {
        let p = convex_hull(&pts(&[&[0, 0], &[1, 1], &[2, 2], &[3, 3]])).unwrap();
        assert_eq!(p.intrinsic_dim(), 1);
        assert_eq!(p.vertices(), &pts(&[&[0, 0], &[3, 3]])[..]);
        assert_eq!(p.facets().len(), 2);
    }

    #[test]
    fn facet_invariants_hold_in_space() {
        let tri = convex_hull(&pts(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap();
        assert_eq!(tri.intrinsic_dim(), 2);
        for f in tri.facets() {
            for (i, v) in tri.vertices().iter().enumerate() {
                let val = f.normal.dot(v);
                assert!(val <= f.offset);
                assert_eq!(val == f.offset, f.vertices.contains(&i));
            }
        }
    }

    #[test]
    fn dimension_mismatch_and_empty() {
        assert!(matches!(convex_hull(&[]), Err(Error::EmptyInput(_))));
        let bad = vec![Point::from_ints(&[0]), Point::from_ints(&[0, 1])];
        assert!(matches!(
            convex_hull(&bad),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn projection_of_cube() {
        let mut v = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    v.push(Point::from_ints(&[x, y, z]));
                }
            }
        }
        let cube = convex_hull(&v).unwrap();
        let proj = Matrix::from_int_rows(&[&[1, 0, 0], &[0, 1, 0]]);
        let sq = affine_image(&cube, &proj, &Point::zeros(2)).unwrap();
        let unit = convex_hull(&pts(&[&[0, 0], &[0, 1], &[1, 0], &[1, 1]])).unwrap();
        assert_eq!(sq, unit);
        let id = affine_image(&cube, &Matrix::identity(3), &Point::zeros(3)).unwrap();
        assert_eq!(id, cube);
    }

    #[test]
    fn restriction_of_planar_triangle() {
        let tri = convex_hull(&pts(&[&[0, 0, 0], &[2, 0, 0], &[0, 3, 0]])).unwrap();
        let r = restrict_to_affine_hull(&tri);
        assert_eq!(r.polytope.dim(), 2);
        assert_eq!(r.polytope.intrinsic_dim(), 2);
        let back: Vec<Point> = r.polytope.vertices().iter().map(|y| r.chart.embed(y)).collect();
        assert_eq!(convex_hull(&back).unwrap(), tri);
    }

    #[test]
    fn restriction_of_point_in_r5() {
        let p = Polytope::point(Point::from_ints(&[1, 2, 3, 4, 5]));
        let r = restrict_to_affine_hull(&p);
        assert_eq!(r.polytope.dim(), 0);
        assert_eq!(r.polytope.num_vertices(), 1);
        assert_eq!(r.chart.embed(&r.polytope.vertices()[0]), p.vertices()[0]);
    }

    #[test]
    fn restriction_of_diagonal_segment() {
        let s = convex_hull(&pts(&[&[0, 0], &[2, 2]])).unwrap();
        let r = restrict_to_affine_hull(&s);
        assert_eq!(r.polytope.dim(), 1);
        assert_eq!(r.polytope.vertices(), &pts(&[&[0], &[2]])[..]);
    }
}
