//! Decomposition of polygons into Minkowski sums of segments and triangles.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::geom::{convex_hull, minkowski_sum_all, restrict_to_affine_hull, Polytope};
use crate::point::Point;
use crate::rational::Rational;

fn cross(a: &Point, b: &Point) -> Rational {
    &a[0] * &b[1] - &a[1] * &b[0]
}

fn upper_half(v: &Point) -> bool {
    v[1].is_positive() || (v[1].is_zero() && v[0].is_positive())
}

/// Counterclockwise angular order starting from the positive x-axis.
fn angle_cmp(a: &Point, b: &Point) -> Ordering {
    upper_half(b)
        .cmp(&upper_half(a))
        .then_with(|| Rational::zero().cmp(&cross(a, b)))
}

/// Edge vectors of a full-dimensional polygon in counterclockwise order.
fn edge_vectors(poly: &Polytope) -> Vec<Point> {
    let c = poly.centroid_of_vertices();
    let mut vs: Vec<Point> = poly.vertices().to_vec();
    vs.sort_by(|a, b| angle_cmp(&(a - &c), &(b - &c)));
    (0..vs.len())
        .map(|i| &vs[(i + 1) % vs.len()] - &vs[i])
        .collect()
}

/// `e = −λ d` with `λ > 0`.
fn antiparallel_ratio(d: &Point, e: &Point) -> Option<Rational> {
    if !cross(d, e).is_zero() || !d.dot(e).is_negative() {
        return None;
    }
    let i = if d[0].is_zero() { 1 } else { 0 };
    Some(-(&e[i] / &d[i]))
}

/// Coefficients `(α, β)` with `αa + βb + c = 0`, both positive.
fn positive_closure(a: &Point, b: &Point, c: &Point) -> Option<(Rational, Rational)> {
    let det = cross(a, b);
    if det.is_zero() {
        return None;
    }
    // Cramer on [a b] (α, β)ᵀ = −c
    let alpha = -cross(c, b) / &det;
    let beta = -cross(a, c) / &det;
    (alpha.is_positive() && beta.is_positive()).then_some((alpha, beta))
}

fn triangle_from_edges(mut es: Vec<Point>) -> Vec<Point> {
    es.sort_by(angle_cmp);
    let a = es[0].clone();
    let b = &a + &es[1];
    vec![Point::zeros(2), a, b]
}

/// Planar summands (vertex lists in the chart plane) whose Minkowski sum is
/// a translate of the polygon with the given edge vectors.
fn decompose_edges(mut edges: Vec<Point>) -> Vec<Vec<Point>> {
    let mut out = Vec::new();
    loop {
        edges.retain(|e| !e.is_zero());
        if edges.is_empty() {
            return out;
        }
        let pair = (0..edges.len()).find_map(|i| {
            (i + 1..edges.len())
                .find_map(|j| antiparallel_ratio(&edges[i], &edges[j]).map(|l| (i, j, l)))
        });
        if let Some((i, j, lambda)) = pair {
            let seg = if lambda >= Rational::one() {
                edges[i].clone()
            } else {
                -&edges[j]
            };
            edges[i] = &edges[i] - &seg;
            edges[j] = &edges[j] + &seg;
            out.push(vec![Point::zeros(2), seg]);
            continue;
        }
        let k = edges.len();
        let triple = (0..k).find_map(|i| {
            (0..k).find_map(|j| {
                (0..k).find_map(|l| {
                    if i == j || j == l || i == l {
                        return None;
                    }
                    positive_closure(&edges[i], &edges[j], &edges[l]).map(|(a, b)| (i, j, l, a, b))
                })
            })
        });
        let (i, j, l, alpha, beta) = triple.expect("zero-sum edges without antiparallel pairs");
        let t = [alpha.recip(), beta.recip(), Rational::one()]
            .into_iter()
            .min()
            .expect("three candidates");
        let sides = [
            edges[i].scale(&(&t * &alpha)),
            edges[j].scale(&(&t * &beta)),
            edges[l].scale(&t),
        ];
        edges[i] = &edges[i] - &sides[0];
        edges[j] = &edges[j] - &sides[1];
        edges[l] = &edges[l] - &sides[2];
        out.push(triangle_from_edges(sides.to_vec()));
    }
}

/// Segments and triangles whose Minkowski sum is exactly `p`; the first
/// summand carries the translation. The re-summation is verified.
pub fn polygon_decompose(p: &Polytope) -> Result<Vec<Polytope>> {
    if p.intrinsic_dim() != 2 {
        return Err(Error::InvalidArgument(format!(
            "polygon decomposition needs a 2-dimensional polytope, got dimension {}",
            p.intrinsic_dim()
        )));
    }
    let restricted = restrict_to_affine_hull(p);
    let (m, _) = restricted.chart.embedding();
    let planar = decompose_edges(edge_vectors(&restricted.polytope));
    let mut parts = planar
        .iter()
        .map(|vs| {
            let pts = vs.iter().map(|v| m.apply(v)).collect::<Result<Vec<_>>>()?;
            convex_hull(&pts)
        })
        .collect::<Result<Vec<_>>>()?;
    let resum = minkowski_sum_all(&parts)?;
    let shift = &p.vertices()[0] - &resum.vertices()[0];
    parts[0] = parts[0].translate(&shift)?;
    if minkowski_sum_all(&parts)? != *p {
        return Err(Error::VerificationFailed(
            "polygon summands do not re-sum to the polygon".into(),
        ));
    }
    Ok(parts)
}
