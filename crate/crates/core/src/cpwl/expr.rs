//! Symbolic CPWL expressions and the Wang–Sun normal form.

use num_traits::{One, Zero};

use crate::cpwl::affine::{AffineFn, MaxAffine};
use crate::error::{check_dim, Error, Result};
use crate::matrix::Matrix;
use crate::point::Point;
use crate::rational::Rational;

/// Expression tree over scalar multiplication, sum, max and affine
/// precomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CpwlExpr {
    Affine(AffineFn),
    Sum(Vec<CpwlExpr>),
    Scale(Rational, Box<CpwlExpr>),
    Max(Vec<CpwlExpr>),
    /// `x ↦ inner(matrix · x + offset)`.
    Compose {
        inner: Box<CpwlExpr>,
        matrix: Matrix,
        offset: Point,
    },
}

impl CpwlExpr {
    pub fn affine(l: AffineFn) -> Self {
        CpwlExpr::Affine(l)
    }

    pub fn var(n: usize, i: usize) -> Self {
        CpwlExpr::Affine(AffineFn::var(n, i))
    }

    pub fn zero(n: usize) -> Self {
        CpwlExpr::Affine(AffineFn::zero(n))
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        CpwlExpr::Affine(AffineFn::constant(n, c))
    }

    pub fn sum(terms: Vec<CpwlExpr>) -> Self {
        CpwlExpr::Sum(terms)
    }

    pub fn max(args: Vec<CpwlExpr>) -> Self {
        CpwlExpr::Max(args)
    }

    pub fn scale(alpha: Rational, e: CpwlExpr) -> Self {
        CpwlExpr::Scale(alpha, Box::new(e))
    }

    pub fn neg(e: CpwlExpr) -> Self {
        CpwlExpr::scale(-Rational::one(), e)
    }

    pub fn sub(a: CpwlExpr, b: CpwlExpr) -> Self {
        CpwlExpr::Sum(vec![a, CpwlExpr::neg(b)])
    }

    pub fn compose(inner: CpwlExpr, matrix: Matrix, offset: Point) -> Self {
        CpwlExpr::Compose {
            inner: Box::new(inner),
            matrix,
            offset,
        }
    }

    /// `max(e, 0)`.
    pub fn relu(e: CpwlExpr) -> Result<Self> {
        let n = e.dim()?;
        Ok(CpwlExpr::Max(vec![e, CpwlExpr::zero(n)]))
    }

    /// `max(e, −e)`.
    pub fn abs(e: CpwlExpr) -> Self {
        CpwlExpr::Max(vec![e.clone(), CpwlExpr::neg(e)])
    }

    pub fn from_max_affine(m: &MaxAffine) -> Self {
        if m.len() == 1 {
            return CpwlExpr::Affine(m.args()[0].clone());
        }
        CpwlExpr::Max(m.args().iter().cloned().map(CpwlExpr::Affine).collect())
    }

    /// Input dimension, validating the whole tree.
    pub fn dim(&self) -> Result<usize> {
        match self {
            CpwlExpr::Affine(l) => Ok(l.dim()),
            CpwlExpr::Sum(ts) | CpwlExpr::Max(ts) => {
                let first = ts
                    .first()
                    .ok_or(Error::EmptyInput("sum or max of expressions"))?
                    .dim()?;
                for t in &ts[1..] {
                    check_dim(first, t.dim()?)?;
                }
                Ok(first)
            }
            CpwlExpr::Scale(_, e) => e.dim(),
            CpwlExpr::Compose {
                inner,
                matrix,
                offset,
            } => {
                check_dim(inner.dim()?, matrix.rows())?;
                check_dim(matrix.rows(), offset.dim())?;
                Ok(matrix.cols())
            }
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            CpwlExpr::Affine(_) => 1,
            CpwlExpr::Sum(ts) | CpwlExpr::Max(ts) => 1 + ts.iter().map(Self::size).sum::<usize>(),
            CpwlExpr::Scale(_, e) => 1 + e.size(),
            CpwlExpr::Compose { inner, .. } => 1 + inner.size(),
        }
    }

    fn eval_unchecked(&self, x: &Point) -> Result<Rational> {
        Ok(match self {
            CpwlExpr::Affine(l) => l.try_eval(x)?,
            CpwlExpr::Sum(ts) => {
                if ts.is_empty() {
                    return Err(Error::EmptyInput("sum of expressions"));
                }
                let mut acc = Rational::zero();
                for t in ts {
                    acc += t.eval_unchecked(x)?;
                }
                acc
            }
            CpwlExpr::Scale(a, e) => a * e.eval_unchecked(x)?,
            CpwlExpr::Max(ts) => {
                let mut best: Option<Rational> = None;
                for t in ts {
                    let v = t.eval_unchecked(x)?;
                    if best.as_ref().is_none_or(|b| v > *b) {
                        best = Some(v);
                    }
                }
                best.ok_or(Error::EmptyInput("max of expressions"))?
            }
            CpwlExpr::Compose {
                inner,
                matrix,
                offset,
            } => {
                check_dim(matrix.rows(), offset.dim())?;
                let y = &matrix.apply(x)? + offset;
                inner.eval_unchecked(&y)?
            }
        })
    }
}

/// Exact value of `f` at `x`.
pub fn evaluate(f: &CpwlExpr, x: &Point) -> Result<Rational> {
    f.eval_unchecked(x)
}

/// Flattens nested sums and merges nested scalars. Scalars are pushed into
/// affine leaves and sums; unit scalars disappear.
pub fn simplify_sum_scale(f: &CpwlExpr) -> CpwlExpr {
    match f {
        CpwlExpr::Affine(l) => CpwlExpr::Affine(l.clone()),
        CpwlExpr::Sum(ts) => {
            let mut out = Vec::new();
            for t in ts {
                match simplify_sum_scale(t) {
                    CpwlExpr::Sum(inner) => out.extend(inner),
                    other => out.push(other),
                }
            }
            if out.len() == 1 {
                out.pop().expect("one term")
            } else {
                CpwlExpr::Sum(out)
            }
        }
        CpwlExpr::Scale(a, e) => {
            let mut alpha = a.clone();
            let mut inner: &CpwlExpr = e;
            while let CpwlExpr::Scale(b, deeper) = inner {
                alpha *= b;
                inner = deeper;
            }
            let inner = simplify_sum_scale(inner);
            if alpha.is_one() {
                return inner;
            }
            match inner {
                CpwlExpr::Affine(l) => CpwlExpr::Affine(l.scale(&alpha)),
                CpwlExpr::Scale(b, g) => CpwlExpr::Scale(alpha * b, g),
                other => CpwlExpr::Scale(alpha, Box::new(other)),
            }
        }
        CpwlExpr::Max(ts) => CpwlExpr::Max(ts.iter().map(simplify_sum_scale).collect()),
        CpwlExpr::Compose {
            inner,
            matrix,
            offset,
        } => CpwlExpr::compose(simplify_sum_scale(inner), matrix.clone(), offset.clone()),
    }
}

/// `Σ αᵢ · max(terms_i) + constant`, each term with at most `n + 1` arguments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WangSunForm {
    dim: usize,
    terms: Vec<(Rational, MaxAffine)>,
    constant: Rational,
}

impl WangSunForm {
    pub fn new(dim: usize, terms: Vec<(Rational, MaxAffine)>, constant: Rational) -> Result<Self> {
        for (_, t) in &terms {
            check_dim(dim, t.dim())?;
            if t.len() > dim + 1 {
                return Err(Error::OutOfRange {
                    what: "arguments per max term",
                    value: t.len(),
                    min: 1,
                    max: dim + 1,
                });
            }
        }
        Ok(WangSunForm {
            dim,
            terms,
            constant,
        })
    }

    pub fn constant_only(dim: usize, c: Rational) -> Self {
        WangSunForm {
            dim,
            terms: Vec::new(),
            constant: c,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[(Rational, MaxAffine)] {
        &self.terms
    }

    pub fn constant(&self) -> &Rational {
        &self.constant
    }

    pub fn eval(&self, x: &Point) -> Result<Rational> {
        check_dim(self.dim, x.dim())?;
        let mut acc = self.constant.clone();
        for (a, t) in &self.terms {
            acc += a * t.eval(x);
        }
        Ok(acc)
    }

    pub fn to_expr(&self) -> CpwlExpr {
        let mut parts = vec![CpwlExpr::constant(self.dim, self.constant.clone())];
        for (a, t) in &self.terms {
            parts.push(CpwlExpr::scale(a.clone(), CpwlExpr::from_max_affine(t)));
        }
        CpwlExpr::Sum(parts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::sample::Sampler;

    fn x(n: usize, i: usize) -> CpwlExpr {
        CpwlExpr::var(n, i)
    }

    #[test]
    fn evaluate_examples() {
        let f = CpwlExpr::max(vec![x(2, 0), x(2, 1), CpwlExpr::zero(2)]);
        assert_eq!(evaluate(&f, &Point::from_ints(&[3, -1])).unwrap(), int(3));
        let a = CpwlExpr::abs(x(1, 0));
        assert_eq!(
            evaluate(&a, &Point(vec![ratio(-2, 3)])).unwrap(),
            ratio(2, 3)
        );
    }

    #[test]
    fn evaluate_dimension_mismatch() {
        let f = x(2, 0);
        assert!(matches!(
            evaluate(&f, &Point::from_ints(&[1])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn compose_node() {
        let m = Matrix::from_int_rows(&[&[0, 1], &[1, 0]]);
        let f = CpwlExpr::compose(
            CpwlExpr::sub(x(2, 0), x(2, 1)),
            m,
            Point::from_ints(&[1, 0]),
        );
        assert_eq!(f.dim().unwrap(), 2);
        // (x2 + 1) − x1 at (4, 2)
        assert_eq!(evaluate(&f, &Point::from_ints(&[4, 2])).unwrap(), int(-1));
    }

    #[test]
    fn simplify_examples() {
        let g = CpwlExpr::max(vec![x(1, 0), CpwlExpr::zero(1)]);
        let s = simplify_sum_scale(&CpwlExpr::scale(int(2), CpwlExpr::scale(int(3), g.clone())));
        assert_eq!(s, CpwlExpr::scale(int(6), g.clone()));

        let (a, b, c) = (g.clone(), CpwlExpr::var(1, 0), CpwlExpr::zero(1));
        let s = simplify_sum_scale(&CpwlExpr::sum(vec![
            CpwlExpr::sum(vec![a.clone(), b.clone()]),
            c.clone(),
        ]));
        assert_eq!(s, CpwlExpr::sum(vec![a, b, c]));
    }

    #[test]
    fn simplify_keeps_values() {
        let inner = CpwlExpr::sum(vec![
            CpwlExpr::scale(ratio(1, 2), CpwlExpr::abs(x(2, 0))),
            CpwlExpr::sum(vec![x(2, 1), CpwlExpr::scale(int(-1), CpwlExpr::scale(int(2), x(2, 0)))]),
        ]);
        let f = CpwlExpr::scale(int(3), CpwlExpr::max(vec![inner.clone(), CpwlExpr::neg(inner)]));
        let s = simplify_sum_scale(&f);
        for p in Sampler::new(4).points(2, 100) {
            assert_eq!(evaluate(&f, &p).unwrap(), evaluate(&s, &p).unwrap());
        }
    }

    #[test]
    fn wang_sun_rejects_wide_terms() {
        let m = MaxAffine::new(vec![
            AffineFn::var(1, 0),
            AffineFn::zero(1),
            AffineFn::from_ints(&[2], 1),
        ])
        .unwrap();
        assert!(WangSunForm::new(1, vec![(int(1), m)], int(0)).is_err());
    }

    #[test]
    fn wang_sun_matches_expression() {
        let mut s = Sampler::new(9);
        let mut terms = Vec::new();
        for _ in 0..2 {
            let args = (0..3)
                .map(|_| AffineFn::new(s.int_point(2, -3, 3), s.rational(-2, 2)))
                .collect();
            terms.push((s.rational(-3, 3), MaxAffine::new(args).unwrap()));
        }
        let form = WangSunForm::new(2, terms, ratio(1, 3)).unwrap();
        let e = form.to_expr();
        for p in s.points(2, 10) {
            assert_eq!(form.eval(&p).unwrap(), evaluate(&e, &p).unwrap());
        }
    }
}
