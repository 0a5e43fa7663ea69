//! Zonotope recognition, generic generator sampling and the vertex count of
//! zonotopes in general position.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::geom::Polytope;
use crate::matrix::Matrix;
use crate::point::Point;
use crate::rational::Rational;
use crate::sample::Sampler;

/// Vertex indices of a 2-face that is not centrally symmetric, if any.
pub fn asymmetric_two_face(p: &Polytope) -> Option<Vec<usize>> {
    if p.intrinsic_dim() < 2 {
        return None;
    }
    p.lattice()
        .faces(2)
        .iter()
        .find(|f| !is_centrally_symmetric(p, f))
        .cloned()
}

fn is_centrally_symmetric(p: &Polytope, face: &[usize]) -> bool {
    if face.len() % 2 == 1 {
        return false;
    }
    let pts: Vec<&Point> = face.iter().map(|&i| &p.vertices()[i]).collect();
    let k = Rational::from_integer(pts.len().into());
    let mut twice_centre = Point::zeros(p.dim());
    for v in &pts {
        twice_centre = &twice_centre + *v;
    }
    let twice_centre = twice_centre.scale(&(Rational::from_integer(2.into()) / k));
    pts.iter().all(|v| {
        let mirror = &twice_centre - *v;
        pts.iter().any(|w| **w == mirror)
    })
}

/// Direction representative: first nonzero coordinate scaled to 1.
fn direction_key(v: &Point) -> Point {
    let lead = v.0.iter().find(|c| !c.is_zero()).expect("nonzero edge").clone();
    v.scale(&lead.recip())
}

/// Segment generators `[0, b]` when every 2-face is centrally symmetric.
/// Parallel edges are grouped and one edge vector per class is returned,
/// oriented so its first nonzero coordinate is positive.
pub fn is_zonotope(p: &Polytope) -> Option<Vec<Point>> {
    match p.intrinsic_dim() {
        0 => return Some(Vec::new()),
        1 => return Some(vec![&p.vertices()[1] - &p.vertices()[0]]),
        _ => {}
    }
    if asymmetric_two_face(p).is_some() {
        return None;
    }
    let mut classes: BTreeMap<Point, Point> = BTreeMap::new();
    for edge in p.lattice().faces(1) {
        let d = &p.vertices()[edge[1]] - &p.vertices()[edge[0]];
        let key = direction_key(&d);
        let lead_positive = d.0.iter().find(|c| !c.is_zero()).is_some_and(|c| *c > Rational::zero());
        let oriented = if lead_positive { d } else { -&d };
        classes.entry(key).or_insert(oriented);
    }
    Some(classes.into_values().collect())
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// `2 ∑_{i<n} C(p−1, i)`: vertices of a zonotope with `p` generators in
/// general position in ℝⁿ.
pub fn zonotope_vertex_count(n: usize, p: usize) -> Result<u128> {
    if n == 0 || p < n {
        return Err(Error::InvalidArgument(format!(
            "vertex count needs p ≥ n ≥ 1, got n = {n}, p = {p}"
        )));
    }
    Ok(2 * (0..n as u128).map(|i| binomial(p as u128 - 1, i)).sum::<u128>())
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Every `min(n, p)` of the vectors are linearly independent.
pub fn in_general_position(gens: &[Point], n: usize) -> bool {
    let k = n.min(gens.len());
    combinations(gens.len(), k).iter().all(|idx| {
        let rows: Vec<Vec<Rational>> = idx.iter().map(|&i| gens[i].0.clone()).collect();
        Matrix::from_rows(rows, n).map(|m| m.rank() == k).unwrap_or(false)
    })
}

/// `p` integer vectors in ℝⁿ in general position, resampled until the check
/// passes.
pub fn generic_generators(n: usize, p: usize, seed: u64) -> Result<Vec<Point>> {
    if n == 0 || p == 0 {
        return Err(Error::InvalidArgument("generators need n ≥ 1 and p ≥ 1".into()));
    }
    let mut s = Sampler::new(seed);
    loop {
        let gens: Vec<Point> = (0..p).map(|_| s.int_point(n, -5, 5)).collect();
        if in_general_position(&gens, n) {
            return Ok(gens);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::convex_hull;

    fn hull(cs: &[&[i64]]) -> Polytope {
        convex_hull(&cs.iter().map(|c| Point::from_ints(c)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn square_and_triangle() {
        let sq = hull(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let gens = is_zonotope(&sq).unwrap();
        assert_eq!(gens, vec![Point::from_ints(&[0, 1]), Point::from_ints(&[1, 0])]);
        assert!(is_zonotope(&hull(&[&[0, 0], &[1, 0], &[0, 1]])).is_none());
    }

    #[test]
    fn octahedron_is_not_a_zonotope() {
        let oct = hull(&[
            &[1, 0, 0],
            &[-1, 0, 0],
            &[0, 1, 0],
            &[0, -1, 0],
            &[0, 0, 1],
            &[0, 0, -1],
        ]);
        let face = asymmetric_two_face(&oct).unwrap();
        assert_eq!(face.len(), 3);
        assert!(is_zonotope(&oct).is_none());
    }

    #[test]
    fn cube_generators() {
        let mut cs = Vec::new();
        for m in 0..8i64 {
            cs.push(Point::from_ints(&[m & 1, (m >> 1) & 1, (m >> 2) & 1]));
        }
        let cube = convex_hull(&cs).unwrap();
        assert_eq!(is_zonotope(&cube).unwrap().len(), 3);
    }

    #[test]
    fn vertex_count_formula() {
        assert_eq!(zonotope_vertex_count(2, 3).unwrap(), 6);
        assert_eq!(zonotope_vertex_count(3, 5).unwrap(), 22);
        assert_eq!(zonotope_vertex_count(2, 2).unwrap(), 4);
        assert!(zonotope_vertex_count(3, 2).is_err());
    }

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(5, 3).len(), 10);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn generic_generators_are_generic() {
        let g = generic_generators(3, 6, 7).unwrap();
        assert!(in_general_position(&g, 3));
        assert_eq!(g, generic_generators(3, 6, 7).unwrap());
    }
}
