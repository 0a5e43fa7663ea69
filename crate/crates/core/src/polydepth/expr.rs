//! Construction trees for neural-network polytopes: point leaves combined by
//! convex hulls and Minkowski sums.

use crate::error::{check_dim, Error, Result};
use crate::geom::{conv_union, minkowski_sum_all, Polytope};
use crate::point::Point;
use crate::rational::ceil_log2;
use crate::relu::compile::merge_depth;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolytopeExpr {
    Point(Point),
    Conv(Vec<PolytopeExpr>),
    Sum(Vec<PolytopeExpr>),
}

impl PolytopeExpr {
    pub fn point(p: Point) -> Self {
        PolytopeExpr::Point(p)
    }

    pub fn conv(children: Vec<PolytopeExpr>) -> Self {
        PolytopeExpr::Conv(children)
    }

    pub fn sum(children: Vec<PolytopeExpr>) -> Self {
        PolytopeExpr::Sum(children)
    }

    /// Segment `[a, b]`.
    pub fn segment(a: Point, b: Point) -> Self {
        PolytopeExpr::Conv(vec![PolytopeExpr::Point(a), PolytopeExpr::Point(b)])
    }

    /// Ambient dimension, validating the whole tree.
    pub fn dim(&self) -> Result<usize> {
        match self {
            PolytopeExpr::Point(p) => Ok(p.dim()),
            PolytopeExpr::Conv(cs) | PolytopeExpr::Sum(cs) => {
                let (first, rest) = cs
                    .split_first()
                    .ok_or(Error::EmptyInput("polytope expression node"))?;
                let n = first.dim()?;
                for c in rest {
                    check_dim(n, c.dim()?)?;
                }
                Ok(n)
            }
        }
    }

    /// Depth of the binary tree obtained by merging the children of each
    /// conv node pairwise, shallowest first. Sums add no level.
    pub fn structural_depth(&self) -> usize {
        match self {
            PolytopeExpr::Point(_) => 0,
            PolytopeExpr::Sum(cs) => cs.iter().map(Self::structural_depth).max().unwrap_or(0),
            PolytopeExpr::Conv(cs) => merge_depth(cs.iter().map(Self::structural_depth).collect()),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            PolytopeExpr::Point(_) => 1,
            PolytopeExpr::Conv(cs) | PolytopeExpr::Sum(cs) => {
                1 + cs.iter().map(Self::size).sum::<usize>()
            }
        }
    }
}

/// Geometric realization of a construction tree.
pub fn realize(e: &PolytopeExpr) -> Result<Polytope> {
    e.dim()?;
    realize_rec(e)
}

fn realize_rec(e: &PolytopeExpr) -> Result<Polytope> {
    match e {
        PolytopeExpr::Point(p) => Ok(Polytope::point(p.clone())),
        PolytopeExpr::Conv(cs) => conv_union(&cs.iter().map(realize_rec).collect::<Result<Vec<_>>>()?),
        PolytopeExpr::Sum(cs) => {
            minkowski_sum_all(&cs.iter().map(realize_rec).collect::<Result<Vec<_>>>()?)
        }
    }
}

/// Balanced hull tree over `points`: the first block has the largest power
/// of two strictly below the count.
pub fn vertex_split_expr(points: &[Point]) -> Result<PolytopeExpr> {
    match points.len() {
        0 => Err(Error::EmptyInput("vertex split")),
        1 => Ok(PolytopeExpr::Point(points[0].clone())),
        p => {
            let k = 1usize << (ceil_log2(p) - 1);
            Ok(PolytopeExpr::Conv(vec![
                vertex_split_expr(&points[..k])?,
                vertex_split_expr(&points[k..])?,
            ]))
        }
    }
}

/// `⌈log₂ p⌉` for a polytope with `p` vertices, with the witnessing tree.
pub fn depth_upper_vertex_split(p: &Polytope) -> (usize, PolytopeExpr) {
    let e = vertex_split_expr(p.vertices()).expect("polytopes have vertices");
    (ceil_log2(p.num_vertices()) as usize, e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::convex_hull;

    fn pt(c: &[i64]) -> Point {
        Point::from_ints(c)
    }

    #[test]
    fn realize_examples() {
        let e = PolytopeExpr::point(pt(&[1, 2]));
        assert_eq!(realize(&e).unwrap().num_vertices(), 1);
        assert_eq!(e.structural_depth(), 0);

        let s = PolytopeExpr::segment(pt(&[0, 0]), pt(&[1, 0]));
        assert_eq!(realize(&s).unwrap().num_vertices(), 2);
        assert_eq!(s.structural_depth(), 1);

        let z = PolytopeExpr::sum(vec![s, PolytopeExpr::segment(pt(&[0, 0]), pt(&[0, 1]))]);
        let sq = realize(&z).unwrap();
        assert_eq!(sq.num_vertices(), 4);
        assert_eq!(z.structural_depth(), 1);
    }

    #[test]
    fn mismatched_dims_rejected() {
        let e = PolytopeExpr::conv(vec![
            PolytopeExpr::point(pt(&[0])),
            PolytopeExpr::point(pt(&[0, 1])),
        ]);
        assert!(realize(&e).is_err());
        assert!(PolytopeExpr::sum(vec![]).dim().is_err());
    }

    #[test]
    fn kary_conv_depth() {
        let leaves: Vec<_> = (0..5).map(|i| PolytopeExpr::point(pt(&[i]))).collect();
        assert_eq!(PolytopeExpr::conv(leaves).structural_depth(), 3);
    }

    #[test]
    fn vertex_split_examples() {
        let one = convex_hull(&[pt(&[3, 3])]).unwrap();
        assert_eq!(depth_upper_vertex_split(&one).0, 0);
        let tri = convex_hull(&[pt(&[0, 0]), pt(&[1, 0]), pt(&[0, 1])]).unwrap();
        let (d, e) = depth_upper_vertex_split(&tri);
        assert_eq!(d, 2);
        assert_eq!(e.structural_depth(), 2);
        assert_eq!(realize(&e).unwrap(), tri);
        let hept: Vec<Point> = (0..7).map(|t| pt(&[t, t * t])).collect();
        let p = convex_hull(&hept).unwrap();
        let (d, e) = depth_upper_vertex_split(&p);
        assert_eq!(d, 3);
        assert_eq!(realize(&e).unwrap(), p);
    }
}
