//! Dense exact rational matrices.

use num_traits::{One, Zero};

use crate::error::{check_dim, Error, Result};
use crate::point::Point;
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<Rational>>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub rows: Vec<Vec<Rational>>,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![vec![Rational::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = Rational::one();
        }
        m
    }

    /// Builds a matrix from rows; every row must have `cols` entries.
    pub fn from_rows(rows: Vec<Vec<Rational>>, cols: usize) -> Result<Self> {
        for r in &rows {
            check_dim(cols, r.len())?;
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data: rows,
        })
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data: Vec<Vec<Rational>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| rational::int(v)).collect())
            .collect();
        Self::from_rows(data, cols).expect("ragged integer rows")
    }

    pub fn from_points(points: &[Point], cols: usize) -> Result<Self> {
        Self::from_rows(points.iter().map(|p| p.0.clone()).collect(), cols)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i]
    }

    pub fn row_vectors(&self) -> &[Vec<Rational>] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i][j] = v;
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j][i] = self.data[i][j].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        check_dim(self.cols, other.rows)?;
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i][j] += a * &other.data[k][j];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        check_dim(self.cols, x.len())?;
        Ok(self
            .data
            .iter()
            .map(|r| {
                r.iter()
                    .zip(x)
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    pub fn apply(&self, p: &Point) -> Result<Point> {
        self.mul_vec(&p.0).map(Point)
    }

    pub fn scale(&self, s: &Rational) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|r| r.iter().map(|v| v * s).collect())
                .collect(),
        }
    }

    /// Stacks matrices with equal column counts on top of each other.
    pub fn vstack(blocks: &[&Matrix]) -> Result<Matrix> {
        let cols = blocks.first().ok_or(Error::EmptyInput("matrix blocks"))?.cols;
        let mut data = Vec::new();
        for b in blocks {
            check_dim(cols, b.cols)?;
            data.extend(b.data.iter().cloned());
        }
        Matrix::from_rows(data, cols)
    }

    /// Block-diagonal matrix.
    pub fn block_diag(blocks: &[&Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.data[r0 + i][c0 + j] = b.data[i][j].clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self.data[i][j].is_one()
                    } else {
                        self.data[i][j].is_zero()
                    }
                })
            })
    }

    pub fn rref(&self) -> Rref {
        rref(self.data.clone(), self.cols)
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Gauss–Jordan inverse of a square matrix.
    pub fn inverse(&self) -> Result<Matrix> {
        check_dim(self.rows, self.cols)?;
        let n = self.rows;
        let aug: Vec<Vec<Rational>> = self
            .data
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.clone();
                row.extend((0..n).map(|j| {
                    if i == j {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                }));
                row
            })
            .collect();
        let red = rref(aug, 2 * n);
        let rank = red.pivots.iter().filter(|&&p| p < n).count();
        if rank < n {
            return Err(Error::RankDeficient { rank, expected: n });
        }
        let data = red.rows.into_iter().map(|r| r[n..].to_vec()).collect();
        Ok(Matrix {
            rows: n,
            cols: n,
            data,
        })
    }

    /// `A⁺ = Aᵀ (A Aᵀ)⁻¹` for a matrix with linearly independent rows.
    pub fn pseudoinverse_full_row_rank(&self) -> Result<Matrix> {
        let rank = self.rank();
        if rank < self.rows {
            return Err(Error::RankDeficient {
                rank,
                expected: self.rows,
            });
        }
        let at = self.transpose();
        let gram = self.mul(&at)?;
        at.mul(&gram.inverse()?)
    }
}

/// Reduced row echelon form of `rows` (each of length `cols`).
pub fn rref(mut rows: Vec<Vec<Rational>>, cols: usize) -> Rref {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(sel) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, sel);
        let inv = rows[r][c].recip();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                *v -= &f * p;
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    Rref { rows, pivots }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn pseudoinverse_identity() {
        let a = Matrix::identity(2);
        assert_eq!(a.pseudoinverse_full_row_rank().unwrap(), a);
    }

    #[test]
    fn pseudoinverse_orthonormal_rows() {
        let a = Matrix::from_int_rows(&[&[1, 0, 0], &[0, 1, 0]]);
        let expect = Matrix::from_int_rows(&[&[1, 0], &[0, 1], &[0, 0]]);
        assert_eq!(a.pseudoinverse_full_row_rank().unwrap(), expect);
    }

    #[test]
    fn pseudoinverse_upper_triangular() {
        let a = Matrix::from_int_rows(&[&[1, 1], &[0, 1]]);
        let p = a.pseudoinverse_full_row_rank().unwrap();
        // square and invertible: A⁺ = A⁻¹ = [[1,-1],[0,1]]
        assert_eq!(p, Matrix::from_int_rows(&[&[1, -1], &[0, 1]]));
        assert!(a.mul(&p).unwrap().is_identity());
    }

    #[test]
    fn pseudoinverse_rejects_dependent_rows() {
        let a = Matrix::from_int_rows(&[&[1, 2, 3], &[2, 4, 6]]);
        assert!(matches!(
            a.pseudoinverse_full_row_rank(),
            Err(Error::RankDeficient { rank: 1, expected: 2 })
        ));
    }

    #[test]
    fn inverse_roundtrip() {
        let a = Matrix::from_rows(
            vec![
                vec![ratio(1, 2), ratio(3, 1)],
                vec![ratio(-1, 3), ratio(2, 5)],
            ],
            2,
        )
        .unwrap();
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).unwrap().is_identity());
    }

    #[test]
    fn rref_pivots() {
        let a = Matrix::from_int_rows(&[&[0, 2, 4], &[0, 1, 2], &[1, 0, 1]]);
        let r = a.rref();
        assert_eq!(r.pivots, vec![0, 1]);
        assert_eq!(a.rank(), 2);
    }
}
