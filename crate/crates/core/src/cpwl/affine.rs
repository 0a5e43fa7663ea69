//! Affine functions, affine-max functions and the affine transport between
//! normalized max functions.

use num_traits::Zero;

use crate::error::{check_dim, Error, Result};
use crate::geom::affine_rank;
use crate::matrix::Matrix;
use crate::point::Point;
use crate::rational::Rational;

/// `x ↦ coeffs · x + constant`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineFn {
    pub coeffs: Point,
    pub constant: Rational,
}

impl AffineFn {
    pub fn new(coeffs: Point, constant: Rational) -> Self {
        AffineFn { coeffs, constant }
    }

    pub fn linear(coeffs: Point) -> Self {
        AffineFn::new(coeffs, Rational::zero())
    }

    pub fn zero(n: usize) -> Self {
        AffineFn::linear(Point::zeros(n))
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        AffineFn::new(Point::zeros(n), c)
    }

    /// The coordinate function `x ↦ x_i`.
    pub fn var(n: usize, i: usize) -> Self {
        AffineFn::linear(Point::unit(n, i))
    }

    pub fn from_ints(coeffs: &[i64], constant: i64) -> Self {
        AffineFn::new(Point::from_ints(coeffs), Rational::from_integer(constant.into()))
    }

    pub fn dim(&self) -> usize {
        self.coeffs.dim()
    }

    pub fn eval(&self, x: &Point) -> Rational {
        self.coeffs.dot(x) + &self.constant
    }

    pub fn try_eval(&self, x: &Point) -> Result<Rational> {
        check_dim(self.dim(), x.dim())?;
        Ok(self.eval(x))
    }

    pub fn add(&self, other: &AffineFn) -> AffineFn {
        AffineFn::new(&self.coeffs + &other.coeffs, &self.constant + &other.constant)
    }

    pub fn sub(&self, other: &AffineFn) -> AffineFn {
        AffineFn::new(&self.coeffs - &other.coeffs, &self.constant - &other.constant)
    }

    pub fn scale(&self, s: &Rational) -> AffineFn {
        AffineFn::new(self.coeffs.scale(s), &self.constant * s)
    }

    /// `x ↦ self(M x + z)`.
    pub fn compose(&self, m: &Matrix, z: &Point) -> Result<AffineFn> {
        check_dim(self.dim(), m.rows())?;
        check_dim(m.rows(), z.dim())?;
        let coeffs = m.transpose().apply(&self.coeffs)?;
        Ok(AffineFn::new(coeffs, self.coeffs.dot(z) + &self.constant))
    }
}

/// `max{l₁, …, l_p}` with `p ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MaxAffine {
    args: Vec<AffineFn>,
}

impl MaxAffine {
    pub fn new(args: Vec<AffineFn>) -> Result<Self> {
        let first = args.first().ok_or(Error::EmptyInput("max of affine functions"))?;
        let n = first.dim();
        for a in &args {
            check_dim(n, a.dim())?;
        }
        Ok(MaxAffine { args })
    }

    pub fn args(&self) -> &[AffineFn] {
        &self.args
    }

    pub fn len(&self) -> usize {
        self.args.len()
    }

    pub fn is_empty(&self) -> bool {
        self.args.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.args[0].dim()
    }

    pub fn eval(&self, x: &Point) -> Rational {
        self.args
            .iter()
            .map(|l| l.eval(x))
            .max()
            .expect("nonempty max")
    }

    pub fn is_linear(&self) -> bool {
        self.args.iter().all(|l| l.constant.is_zero())
    }
}

/// Affine map `x ↦ matrix · x + offset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    pub matrix: Matrix,
    pub offset: Point,
}

impl AffineMap {
    pub fn identity(n: usize) -> Self {
        AffineMap {
            matrix: Matrix::identity(n),
            offset: Point::zeros(n),
        }
    }

    pub fn apply(&self, x: &Point) -> Result<Point> {
        Ok(&self.matrix.apply(x)? + &self.offset)
    }

    pub fn is_invertible(&self) -> bool {
        self.matrix.rows() == self.matrix.cols() && self.matrix.rank() == self.matrix.rows()
    }
}

fn shared_dim(ls: &[AffineFn]) -> Result<usize> {
    let n = ls.first().ok_or(Error::EmptyInput("affine family"))?.dim();
    for l in ls {
        check_dim(n, l.dim())?;
    }
    Ok(n)
}

/// True iff the coefficient vectors are affinely independent.
pub fn affinely_independent(ls: &[AffineFn]) -> bool {
    if ls.is_empty() {
        return false;
    }
    let pts: Vec<Point> = ls.iter().map(|l| l.coeffs.clone()).collect();
    affine_rank(&pts) + 1 == ls.len()
}

/// `max(ls) = max(ν₁, …, ν_{p−1}, 0) + l_p` with `νᵢ = lᵢ − l_p`.
pub fn normalize_max(ls: &[AffineFn]) -> Result<(MaxAffine, AffineFn)> {
    let n = shared_dim(ls)?;
    let last = ls.last().expect("nonempty").clone();
    let mut args: Vec<AffineFn> = ls[..ls.len() - 1].iter().map(|l| l.sub(&last)).collect();
    args.push(AffineFn::zero(n));
    Ok((MaxAffine::new(args)?, last))
}

/// Affine map `φ(x) = Z x + z` with `f′ = f ∘ φ`, where `f` and `f′` are the
/// normalized max functions of `ls` and `ls2`. Requires `ls` affinely
/// independent; then `Z = A⁺A′`, `z = A⁺b`.
pub fn transport_map(ls: &[AffineFn], ls2: &[AffineFn]) -> Result<AffineMap> {
    let n = shared_dim(ls)?;
    let n2 = shared_dim(ls2)?;
    check_dim(n, n2)?;
    check_dim(ls.len(), ls2.len())?;
    if !affinely_independent(ls) {
        return Err(Error::RuleNotApplicable(
            "first family is not affinely independent".into(),
        ));
    }
    let p = ls.len();
    if p == 1 {
        return Ok(AffineMap::identity(n));
    }
    let (nu, _) = normalize_max(ls)?;
    let (nu2, _) = normalize_max(ls2)?;
    let a = Matrix::from_rows(
        nu.args()[..p - 1].iter().map(|l| l.coeffs.0.clone()).collect(),
        n,
    )?;
    let a2 = Matrix::from_rows(
        nu2.args()[..p - 1].iter().map(|l| l.coeffs.0.clone()).collect(),
        n,
    )?;
    let b: Vec<Rational> = nu
        .args()
        .iter()
        .zip(nu2.args())
        .take(p - 1)
        .map(|(l, l2)| &l2.constant - &l.constant)
        .collect();
    let pinv = a.pseudoinverse_full_row_rank()?;
    Ok(AffineMap {
        matrix: pinv.mul(&a2)?,
        offset: Point(pinv.mul_vec(&b)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::sample::Sampler;

    fn x(n: usize, i: usize) -> AffineFn {
        AffineFn::var(n, i)
    }

    #[test]
    fn independence_examples() {
        assert!(affinely_independent(&[x(2, 0), x(2, 1), AffineFn::zero(2)]));
        assert!(!affinely_independent(&[
            x(2, 0),
            AffineFn::from_ints(&[2, 0], 1),
            AffineFn::zero(2)
        ]));
        assert!(!affinely_independent(&[
            x(3, 0),
            x(3, 1),
            x(3, 2),
            AffineFn::zero(3),
            AffineFn::from_ints(&[1, 1, 0], 0)
        ]));
    }

    #[test]
    fn normalize_examples() {
        let (m, off) = normalize_max(&[x(1, 0), AffineFn::zero(1)]).unwrap();
        assert_eq!(m.args(), &[x(1, 0), AffineFn::zero(1)]);
        assert_eq!(off, AffineFn::zero(1));

        let (m, off) = normalize_max(&[AffineFn::from_ints(&[1, 0], 1), x(2, 1)]).unwrap();
        assert_eq!(m.args()[0], AffineFn::from_ints(&[1, -1], 1));
        assert_eq!(off, x(2, 1));
    }

    #[test]
    fn normalize_recomposes_on_random_family() {
        let mut s = Sampler::new(3);
        let ls: Vec<AffineFn> = (0..4)
            .map(|_| AffineFn::new(s.int_point(3, -5, 5), s.rational(-3, 3)))
            .collect();
        let (m, off) = normalize_max(&ls).unwrap();
        let whole = MaxAffine::new(ls).unwrap();
        for p in s.points(3, 100) {
            assert_eq!(whole.eval(&p), m.eval(&p) + off.eval(&p));
        }
    }

    #[test]
    fn transport_between_families() {
        let ls = vec![x(2, 0), x(2, 1), AffineFn::zero(2)];
        let ls2 = vec![
            AffineFn::from_ints(&[2, 0], 1),
            AffineFn::from_ints(&[-1, 1], 0),
            AffineFn::zero(2),
        ];
        let phi = transport_map(&ls, &ls2).unwrap();
        let (f, _) = normalize_max(&ls).unwrap();
        let (f2, _) = normalize_max(&ls2).unwrap();
        for p in Sampler::new(11).points(2, 100) {
            assert_eq!(f2.eval(&p), f.eval(&phi.apply(&p).unwrap()));
        }
    }

    #[test]
    fn transport_identity_family() {
        let ls = vec![x(2, 0), x(2, 1), AffineFn::zero(2)];
        let phi = transport_map(&ls, &ls).unwrap();
        assert_eq!(phi, AffineMap::identity(2));
    }

    #[test]
    fn transport_with_fewer_terms_than_dimension() {
        let ls = vec![x(3, 0), AffineFn::from_ints(&[0, 1, 1], 2)];
        let ls2 = vec![AffineFn::from_ints(&[1, 2, 3], -1), AffineFn::from_ints(&[0, 0, 1], 4)];
        let phi = transport_map(&ls, &ls2).unwrap();
        let (f, _) = normalize_max(&ls).unwrap();
        let (f2, _) = normalize_max(&ls2).unwrap();
        for p in Sampler::new(5).points(3, 100) {
            assert_eq!(f2.eval(&p), f.eval(&phi.apply(&p).unwrap()));
        }
    }

    #[test]
    fn transport_rejects_dependent_family() {
        let ls = vec![x(2, 0), AffineFn::from_ints(&[2, 0], 0), AffineFn::from_ints(&[3, 0], 0)];
        assert!(transport_map(&ls, &ls).is_err());
    }

    #[test]
    fn compose_matches_pointwise() {
        let l = AffineFn::from_ints(&[1, -2], 3);
        let m = Matrix::from_int_rows(&[&[0, 1, 1], &[2, 0, -1]]);
        let z = Point::from_ints(&[1, -1]);
        let c = l.compose(&m, &z).unwrap();
        for p in Sampler::new(2).points(3, 20) {
            let inner = &m.apply(&p).unwrap() + &z;
            assert_eq!(c.eval(&p), l.eval(&inner));
        }
        assert_eq!(l.eval(&Point::from_ints(&[0, 0])), int(3));
    }
}
