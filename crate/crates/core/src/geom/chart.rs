//! Rational affine charts for lower-dimensional point sets.

use crate::matrix::{rref, Matrix};
use crate::point::Point;
use crate::rational::Rational;

/// Coordinate chart of the affine hull of a point set.
///
/// The chart projects onto the pivot coordinates of the reduced row echelon
/// form of the difference vectors. Restricted to the affine hull this
/// projection is bijective, so its inverse is a rational affine map.
#[derive(Clone, Debug)]
pub struct AffineChart {
    ambient: usize,
    base: Point,
    basis: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl AffineChart {
    /// Chart of `aff(points)`; `points` must be nonempty.
    pub fn of(points: &[Point]) -> Self {
        let base = points[0].clone();
        let ambient = base.dim();
        let diffs: Vec<Vec<Rational>> = points[1..].iter().map(|p| (p - &base).0).collect();
        let red = rref(diffs, ambient);
        AffineChart {
            ambient,
            base,
            basis: red.rows,
            pivots: red.pivots,
        }
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn project(&self, x: &Point) -> Point {
        x.select(&self.pivots)
    }

    pub fn embed(&self, y: &Point) -> Point {
        let mut out = self.base.clone();
        for (j, row) in self.basis.iter().enumerate() {
            let c = &y[j] - &self.base[self.pivots[j]];
            for (o, r) in out.0.iter_mut().zip(row) {
                *o += &c * r;
            }
        }
        out
    }

    /// The embedding as `y ↦ M y + c` with `M` of shape ambient × dim.
    pub fn embedding(&self) -> (Matrix, Point) {
        let d = self.dim();
        let mut m = Matrix::zeros(self.ambient, d);
        for (j, row) in self.basis.iter().enumerate() {
            for (i, v) in row.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        let offset = self.embed(&Point::zeros(d));
        (m, offset)
    }

    /// Lifts a chart-space linear functional to the ambient space.
    pub fn lift_functional(&self, a: &Point) -> Point {
        let mut out = Point::zeros(self.ambient);
        for (j, &p) in self.pivots.iter().enumerate() {
            out.0[p] = a[j].clone();
        }
        out
    }
}

/// Affine rank (dimension of the affine hull) of a nonempty point set.
pub fn affine_rank(points: &[Point]) -> usize {
    if points.is_empty() {
        return 0;
    }
    AffineChart::of(points).dim()
}
