//! Exact facet enumeration by the double description method.
//!
//! For distinct points `q₁..q_N` spanning ℚᵈ, the facets of their convex hull
//! are the extreme rays of the cone `{ y ∈ ℚᵈ⁺¹ : (1, qᵢ)·y ≥ 0 }`. Rays are
//! kept as primitive integer vectors and adjacency uses the combinatorial
//! zero-set test, which is exact for pointed cones.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::bitset::BitSet;
use crate::matrix::{rref, Matrix};
use crate::point::Point;
use crate::rational::{gcd_of, primitive_integer, Rational};

/// A facet in chart coordinates: `normal · q ≤ offset`, tight exactly on
/// `tight` (indices into the input points).
#[derive(Clone, Debug)]
pub(crate) struct ChartFacet {
    pub normal: Vec<BigInt>,
    pub offset: BigInt,
    pub tight: BitSet,
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn primitive(v: Vec<BigInt>) -> Vec<BigInt> {
    let g = gcd_of(&v);
    if g.is_zero() || g == BigInt::from(1) {
        v
    } else {
        v.into_iter().map(|x| x / &g).collect()
    }
}

struct Ray {
    v: Vec<BigInt>,
    zeros: BitSet,
}

/// Facets of `conv(points)` where `points` are distinct and affinely span
/// ℚᵈ with `d ≥ 1`.
pub(crate) fn facets_full_dim(points: &[Point], d: usize) -> Vec<ChartFacet> {
    let n = points.len();
    let homog: Vec<Vec<BigInt>> = points
        .iter()
        .map(|p| {
            let mut v = vec![Rational::from_integer(BigInt::from(1))];
            v.extend(p.0.iter().cloned());
            primitive_integer(&v)
        })
        .collect();

    // d+1 affinely independent points seed a simplicial cone.
    let mut basis_idx: Vec<usize> = Vec::with_capacity(d + 1);
    let mut basis_rows: Vec<Vec<Rational>> = Vec::new();
    for (i, h) in homog.iter().enumerate() {
        let mut trial = basis_rows.clone();
        trial.push(h.iter().map(|x| Rational::from_integer(x.clone())).collect());
        if rref(trial.clone(), d + 1).pivots.len() == trial.len() {
            basis_rows = trial;
            basis_idx.push(i);
            if basis_idx.len() == d + 1 {
                break;
            }
        }
    }
    assert_eq!(basis_idx.len(), d + 1, "points do not span the chart");

    let h0 = Matrix::from_rows(basis_rows, d + 1).expect("square basis");
    let inv = h0.inverse().expect("affinely independent seed");
    let mut rays: Vec<Ray> = (0..=d)
        .map(|j| {
            let col: Vec<Rational> = (0..=d).map(|i| inv.get(i, j).clone()).collect();
            let mut zeros = BitSet::new(n);
            for (k, &bi) in basis_idx.iter().enumerate() {
                if k != j {
                    zeros.insert(bi);
                }
            }
            Ray {
                v: primitive_integer(&col),
                zeros,
            }
        })
        .collect();

    let mut in_basis = BitSet::new(n);
    for &bi in &basis_idx {
        in_basis.insert(bi);
    }

    for k in (0..n).filter(|&k| !in_basis.contains(k)) {
        let h = &homog[k];
        let vals: Vec<BigInt> = rays.iter().map(|r| dot(h, &r.v)).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        if neg.is_empty() {
            for (r, v) in rays.iter_mut().zip(&vals) {
                if v.is_zero() {
                    r.zeros.insert(k);
                }
            }
            continue;
        }
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();

        let mut created: Vec<Ray> = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common = rays[p].zeros.intersection(&rays[q].zeros);
                if common.len() + 1 < d {
                    continue;
                }
                let blocked = rays.iter().enumerate().any(|(i, r)| {
                    i != p && i != q && common.is_subset(&r.zeros)
                });
                if blocked {
                    continue;
                }
                let v: Vec<BigInt> = rays[q]
                    .v
                    .iter()
                    .zip(&rays[p].v)
                    .map(|(a, b)| &vals[p] * a - &vals[q] * b)
                    .collect();
                let mut zeros = common;
                zeros.insert(k);
                created.push(Ray {
                    v: primitive(v),
                    zeros,
                });
            }
        }

        let mut next: Vec<Ray> = Vec::with_capacity(rays.len() + created.len());
        for (i, mut r) in rays.into_iter().enumerate() {
            if vals[i].is_negative() {
                continue;
            }
            if vals[i].is_zero() {
                r.zeros.insert(k);
            }
            next.push(r);
        }
        next.extend(created);
        rays = next;
    }

    rays.into_iter()
        .map(|r| {
            // y = (b, a): b + a·q ≥ 0  ⇔  (−a)·q ≤ b
            let offset = r.v[0].clone();
            let normal = r.v[1..].iter().map(|x| -x).collect();
            ChartFacet {
                normal,
                offset,
                tight: r.zeros,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_has_four_facets() {
        let pts: Vec<Point> = [[0, 0], [1, 0], [0, 1], [1, 1]]
            .iter()
            .map(|c| Point::from_ints(c))
            .collect();
        let f = facets_full_dim(&pts, 2);
        assert_eq!(f.len(), 4);
        for facet in &f {
            assert_eq!(facet.tight.len(), 2);
        }
    }

    #[test]
    fn cube_with_interior_point() {
        let mut pts = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    pts.push(Point::from_ints(&[x * 2, y * 2, z * 2]));
                }
            }
        }
        pts.push(Point::from_ints(&[1, 1, 1]));
        let f = facets_full_dim(&pts, 3);
        assert_eq!(f.len(), 6);
        assert!(f.iter().all(|x| x.tight.len() == 4 && !x.tight.contains(8)));
    }
}
