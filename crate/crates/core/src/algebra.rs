//! Exact integers, rationals and dense polynomials in one or two marking
//! variables.
//!
//! Every distribution row handled by the crate is a [`BigPoly`]: a dense grid
//! of big-integer coefficients indexed by the exponent of `v` (and of `w` for
//! bivariate rows). Arithmetic is schoolbook; the degrees involved are linear
//! in the number of edges, so dense storage is always the right layout.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub use num_bigint::{BigInt, BigUint};

/// Exact rational, always kept in lowest terms with a positive denominator.
pub type BigRat = num_rational::BigRational;

/// A marking variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    /// First marking variable (always present).
    V,
    /// Second marking variable (bivariate polynomials only).
    W,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: u8, right: u8 },
    #[error("variable {0:?} is not present in a polynomial of arity {1}")]
    VarAbsent(Var, u8),
    #[error("operation requires a univariate polynomial")]
    NotUnivariate,
}

/// Dense polynomial in `v` (arity 1) or `v, w` (arity 2) with big-integer
/// coefficients.
///
/// Storage is row-major: `coeffs[i * len_w + j]` is the coefficient of
/// `v^i w^j`. Trailing zero rows and columns are always trimmed, so the zero
/// polynomial has `len_v == 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BigPoly {
    arity: u8,
    len_v: usize,
    len_w: usize,
    coeffs: Vec<BigInt>,
}

impl BigPoly {
    pub fn zero(arity: u8) -> Self {
        assert!(arity == 1 || arity == 2, "arity must be 1 or 2");
        BigPoly {
            arity,
            len_v: 0,
            len_w: if arity == 1 { 1 } else { 0 },
            coeffs: Vec::new(),
        }
    }

    pub fn one(arity: u8) -> Self {
        Self::monomial(arity, 0, 0, BigInt::one())
    }

    /// `c · v^i w^j`. For arity 1, `j` must be 0.
    pub fn monomial(arity: u8, i: usize, j: usize, c: BigInt) -> Self {
        assert!(
            arity == 2 || j == 0,
            "univariate monomial with a w exponent"
        );
        let len_w = j + 1;
        let mut coeffs = vec![BigInt::ZERO; (i + 1) * len_w];
        coeffs[i * len_w + j] = c;
        Self::from_raw(arity, i + 1, len_w, coeffs)
    }

    /// Univariate polynomial from coefficients in increasing degree.
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        let len_v = coeffs.len();
        Self::from_raw(1, len_v, 1, coeffs)
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Bivariate polynomial from rows indexed by the `v` exponent; row `i`
    /// holds the `w` coefficients of `v^i`. Rows may have different lengths.
    pub fn from_grid(rows: Vec<Vec<BigInt>>) -> Self {
        let len_v = rows.len();
        let len_w = rows.iter().map(Vec::len).max().unwrap_or(0);
        let mut coeffs = Vec::with_capacity(len_v * len_w);
        for row in rows {
            let pad = len_w - row.len();
            coeffs.extend(row);
            coeffs.extend(core::iter::repeat_n(BigInt::ZERO, pad));
        }
        Self::from_raw(2, len_v, len_w, coeffs)
    }

    pub(crate) fn from_raw(arity: u8, len_v: usize, len_w: usize, coeffs: Vec<BigInt>) -> Self {
        debug_assert_eq!(coeffs.len(), len_v * len_w);
        let mut p = BigPoly {
            arity,
            len_v,
            len_w,
            coeffs,
        };
        p.trim();
        p
    }

    fn trim(&mut self) {
        let mut top_v = 0;
        let mut top_w = 0;
        let mut any = false;
        for i in 0..self.len_v {
            for j in 0..self.len_w {
                if !self.coeffs[i * self.len_w + j].is_zero() {
                    any = true;
                    top_v = top_v.max(i + 1);
                    top_w = top_w.max(j + 1);
                }
            }
        }
        if !any {
            *self = BigPoly::zero(self.arity);
            return;
        }
        if self.arity == 1 {
            top_w = 1;
        }
        if top_v == self.len_v && top_w == self.len_w {
            return;
        }
        let mut coeffs = Vec::with_capacity(top_v * top_w);
        for i in 0..top_v {
            let row = &mut self.coeffs[i * self.len_w..i * self.len_w + top_w];
            coeffs.extend(row.iter_mut().map(core::mem::take));
        }
        self.len_v = top_v;
        self.len_w = top_w;
        self.coeffs = coeffs;
    }

    pub fn arity(&self) -> u8 {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.len_v == 0
    }

    /// Degree in `var`, `None` for the zero polynomial.
    pub fn degree(&self, var: Var) -> Option<usize> {
        if self.is_zero() {
            return None;
        }
        match var {
            Var::V => Some(self.len_v - 1),
            Var::W => Some(self.len_w - 1),
        }
    }

    /// Coefficient of `v^i w^j` (zero outside the stored grid).
    pub fn coeff(&self, i: usize, j: usize) -> &BigInt {
        if i < self.len_v && j < self.len_w {
            &self.coeffs[i * self.len_w + j]
        } else {
            &BigInt::ZERO
        }
    }

    /// Coefficients of a univariate polynomial, lowest degree first.
    pub fn univariate_coeffs(&self) -> Result<&[BigInt], AlgebraError> {
        if self.arity != 1 {
            return Err(AlgebraError::NotUnivariate);
        }
        Ok(&self.coeffs)
    }

    /// Nonzero terms as `(i, j, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> + '_ {
        let len_w = self.len_w;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(idx, c)| (idx / len_w, idx % len_w, c))
    }

    fn check_arity(&self, other: &BigPoly) -> Result<(), AlgebraError> {
        if self.arity != other.arity {
            return Err(AlgebraError::ArityMismatch {
                left: self.arity,
                right: other.arity,
            });
        }
        Ok(())
    }

    fn check_var(&self, var: Var) -> Result<(), AlgebraError> {
        if var == Var::W && self.arity == 1 {
            return Err(AlgebraError::VarAbsent(var, self.arity));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &BigPoly) -> Result<BigPoly, AlgebraError> {
        self.check_arity(other)?;
        let len_v = self.len_v.max(other.len_v);
        let len_w = self.len_w.max(other.len_w);
        let mut coeffs = vec![BigInt::ZERO; len_v * len_w];
        for p in [self, other] {
            for i in 0..p.len_v {
                for j in 0..p.len_w {
                    coeffs[i * len_w + j] += &p.coeffs[i * p.len_w + j];
                }
            }
        }
        Ok(Self::from_raw(self.arity, len_v, len_w, coeffs))
    }

    pub fn checked_mul(&self, other: &BigPoly) -> Result<BigPoly, AlgebraError> {
        self.check_arity(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(BigPoly::zero(self.arity));
        }
        let len_v = self.len_v + other.len_v - 1;
        let len_w = self.len_w + other.len_w - 1;
        let mut coeffs = vec![BigInt::ZERO; len_v * len_w];
        for (i, j, a) in self.terms() {
            for (k, l, b) in other.terms() {
                coeffs[(i + k) * len_w + j + l] += a * b;
            }
        }
        Ok(Self::from_raw(self.arity, len_v, len_w, coeffs))
    }

    pub fn scale(&self, c: &BigInt) -> BigPoly {
        let coeffs = self.coeffs.iter().map(|x| x * c).collect();
        Self::from_raw(self.arity, self.len_v, self.len_w, coeffs)
    }

    /// Substitute `var = 1`. A bivariate input becomes univariate in the
    /// remaining variable; a univariate input becomes a constant.
    pub fn eval_at_one(&self, var: Var) -> Result<BigPoly, AlgebraError> {
        self.check_var(var)?;
        if self.arity == 1 {
            return Ok(Self::from_coeffs(vec![self.sum()]));
        }
        let out: Vec<BigInt> = match var {
            Var::V => (0..self.len_w)
                .map(|j| {
                    (0..self.len_v)
                        .map(|i| &self.coeffs[i * self.len_w + j])
                        .sum()
                })
                .collect(),
            Var::W => (0..self.len_v)
                .map(|i| {
                    self.coeffs[i * self.len_w..(i + 1) * self.len_w]
                        .iter()
                        .sum()
                })
                .collect(),
        };
        Ok(Self::from_coeffs(out))
    }

    /// Value at `v = w = 1`, the sum of all coefficients.
    pub fn sum(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// Formal partial derivative in `var`.
    pub fn derivative(&self, var: Var) -> Result<BigPoly, AlgebraError> {
        self.check_var(var)?;
        if self.is_zero() {
            return Ok(self.clone());
        }
        let (len_v, len_w) = match var {
            Var::V => (self.len_v - 1, self.len_w),
            Var::W => (self.len_v, self.len_w - 1),
        };
        let mut coeffs = vec![BigInt::ZERO; len_v * len_w];
        for (i, j, c) in self.terms() {
            match var {
                Var::V if i > 0 => coeffs[(i - 1) * len_w + j] = c * BigInt::from(i),
                Var::W if j > 0 => coeffs[i * len_w + j - 1] = c * BigInt::from(j),
                _ => {}
            }
        }
        Ok(Self::from_raw(self.arity, len_v, len_w, coeffs))
    }

    /// Substitute `v → v + 1` in a univariate polynomial.
    pub fn shift_var(&self) -> Result<BigPoly, AlgebraError> {
        if self.arity != 1 {
            return Err(AlgebraError::NotUnivariate);
        }
        Ok(Self::from_coeffs(shift_by_one(&self.coeffs)))
    }

    /// Value of a univariate polynomial at `x` (Horner).
    pub fn eval(&self, x: &BigInt) -> Result<BigInt, AlgebraError> {
        let c = self.univariate_coeffs()?;
        Ok(c.iter().rev().fold(BigInt::ZERO, |acc, a| acc * x + a))
    }

    /// `true` when every coefficient is nonnegative.
    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }
}

/// `p(v + 1)` by binomial re-expansion; `coeffs` lowest degree first.
pub(crate) fn shift_by_one(coeffs: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::ZERO; coeffs.len()];
    // Pascal rows built incrementally: binom[j] = C(i, j).
    let mut binom: Vec<BigInt> = Vec::with_capacity(coeffs.len());
    for (i, c) in coeffs.iter().enumerate() {
        binom.push(BigInt::one());
        for j in (1..i).rev() {
            let prev = binom[j - 1].clone();
            binom[j] += prev;
        }
        if c.is_zero() {
            continue;
        }
        for (j, b) in binom.iter().enumerate() {
            out[j] += c * b;
        }
    }
    out
}

impl fmt::Debug for BigPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for BigPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, j, c) in self.terms() {
            if !first {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            first = false;
            let mag = c.abs();
            let has_var = i > 0 || j > 0;
            if !has_var || !mag.is_one() {
                write!(f, "{mag}")?;
            }
            for (e, name) in [(i, "v"), (j, "w")] {
                match e {
                    0 => {}
                    1 => f.write_str(name)?,
                    _ => write!(f, "{name}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

/// Univariate polynomial with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<BigRat>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn from_int(p: &BigPoly) -> Result<Self, AlgebraError> {
        let c = p.univariate_coeffs()?;
        Ok(Self::new(
            c.iter().map(|x| BigRat::from_integer(x.clone())).collect(),
        ))
    }

    pub fn coeffs(&self) -> &[BigRat] {
        &self.coeffs
    }

    pub fn mul(&self, other: &RatPoly) -> RatPoly {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return RatPoly::new(Vec::new());
        }
        let mut out = vec![BigRat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }

    pub fn add(&self, other: &RatPoly) -> RatPoly {
        let mut out = vec![BigRat::zero(); self.coeffs.len().max(other.coeffs.len())];
        for p in [self, other] {
            for (o, c) in out.iter_mut().zip(&p.coeffs) {
                *o += c;
            }
        }
        RatPoly::new(out)
    }

    pub fn scale(&self, c: &BigRat) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn eval(&self, x: &BigRat) -> BigRat {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRat::zero(), |acc, a| acc * x + a)
    }

    /// Integer polynomial, if every coefficient is an integer.
    pub fn to_integer(&self) -> Option<BigPoly> {
        let ints: Option<Vec<BigInt>> = self
            .coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect();
        ints.map(BigPoly::from_coeffs)
    }
}

/// Falling factorial `i (i-1) ... (i-k+1)`, i.e. `∂^k x^i / x^(i-k)`.
pub fn falling_factorial(i: usize, k: usize) -> BigInt {
    if k > i {
        return BigInt::ZERO;
    }
    (i - k + 1..=i).fold(BigInt::one(), |acc, f| acc * BigInt::from(f))
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, f| acc * BigInt::from(f))
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::ZERO;
    }
    falling_factorial(n, k) / factorial(k)
}

/// `gcd`-reduced ratio of two integers as a rational.
pub fn ratio(num: &BigInt, den: &BigInt) -> BigRat {
    let g = num.gcd(den);
    if g.is_zero() {
        return BigRat::new(num.clone(), den.clone());
    }
    BigRat::new(num / &g, den / &g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> BigPoly {
        BigPoly::from_i64s(c)
    }

    fn grid(rows: &[&[i64]]) -> BigPoly {
        BigPoly::from_grid(
            rows.iter()
                .map(|r| r.iter().map(|&c| BigInt::from(c)).collect())
                .collect(),
        )
    }

    #[test]
    fn add_examples() {
        assert_eq!(
            p(&[0, 1]).checked_add(&p(&[0, 0, 1])).unwrap(),
            p(&[0, 1, 1])
        );
        assert_eq!(
            p(&[4, 0, 7]).checked_add(&BigPoly::zero(1)).unwrap(),
            p(&[4, 0, 7])
        );
        assert_eq!(p(&[1, 1]).checked_add(&p(&[1, 1])).unwrap(), p(&[2, 2]));
    }

    #[test]
    fn add_cancels_and_trims() {
        let s = p(&[1, 2, 3]).checked_add(&p(&[0, 0, -3])).unwrap();
        assert_eq!(s.degree(Var::V), Some(1));
        assert!(p(&[1]).checked_add(&p(&[-1])).unwrap().is_zero());
    }

    #[test]
    fn arity_mismatch() {
        let err = p(&[1]).checked_add(&grid(&[&[1]])).unwrap_err();
        assert_eq!(err, AlgebraError::ArityMismatch { left: 1, right: 2 });
        assert!(p(&[1]).checked_mul(&grid(&[&[1]])).is_err());
        assert_eq!(
            p(&[1]).derivative(Var::W).unwrap_err(),
            AlgebraError::VarAbsent(Var::W, 1)
        );
        assert_eq!(
            grid(&[&[1]]).shift_var().unwrap_err(),
            AlgebraError::NotUnivariate
        );
    }

    #[test]
    fn mul_examples() {
        let a = p(&[0, 1, 1]);
        assert_eq!(a.checked_mul(&a).unwrap(), p(&[0, 0, 1, 2, 1]));
        assert_eq!(a.checked_mul(&BigPoly::one(1)).unwrap(), a);
        assert_eq!(
            p(&[1, 1]).checked_mul(&p(&[1, -1])).unwrap(),
            p(&[1, 0, -1])
        );
    }

    #[test]
    fn eval_at_one_examples() {
        assert_eq!(p(&[3, 6, 1]).eval_at_one(Var::V).unwrap(), p(&[10]));
        assert_eq!(p(&[0, 1]).eval_at_one(Var::V).unwrap(), p(&[1]));
        let y = grid(&[&[0], &[3], &[2, 2, 1], &[0, 2, 2]]);
        assert_eq!(y.eval_at_one(Var::V).unwrap(), p(&[5, 4, 3]));
        assert_eq!(y.eval_at_one(Var::W).unwrap(), p(&[0, 3, 5, 4]));
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(p(&[0, 1, 1]).derivative(Var::V).unwrap(), p(&[1, 2]));
        assert!(p(&[9]).derivative(Var::V).unwrap().is_zero());
        // d/dv (v^2 w) = 2 v w
        let v2w = BigPoly::monomial(2, 2, 1, BigInt::one());
        assert_eq!(
            v2w.derivative(Var::V).unwrap(),
            BigPoly::monomial(2, 1, 1, BigInt::from(2))
        );
        assert_eq!(
            v2w.derivative(Var::W).unwrap(),
            BigPoly::monomial(2, 2, 0, BigInt::one())
        );
    }

    #[test]
    fn shift_examples() {
        assert_eq!(p(&[0, 1]).shift_var().unwrap(), p(&[1, 1]));
        assert_eq!(p(&[0, 0, 1]).shift_var().unwrap(), p(&[1, 2, 1]));
        assert_eq!(p(&[0, 1, 1]).shift_var().unwrap(), p(&[2, 3, 1]));
    }

    #[test]
    fn display() {
        assert_eq!(alloc::format!("{}", p(&[3, 6, 1])), "3 + 6v + v^2");
        assert_eq!(
            alloc::format!("{}", grid(&[&[0], &[1], &[0, 1]])),
            "v + v^2w"
        );
        assert_eq!(alloc::format!("{}", p(&[1, 0, -1])), "1 - v^2");
    }

    #[test]
    fn rat_poly_integrality() {
        let half = BigRat::new(BigInt::from(1), BigInt::from(2));
        let r = RatPoly::new(alloc::vec![half.clone(), half.clone()]);
        assert!(r.to_integer().is_none());
        assert_eq!(
            r.scale(&BigRat::from_integer(BigInt::from(2)))
                .to_integer()
                .unwrap(),
            p(&[1, 1])
        );
    }

    #[test]
    fn combinatorial_helpers() {
        assert_eq!(binomial(6, 3), BigInt::from(20));
        assert_eq!(binomial(3, 5), BigInt::ZERO);
        assert_eq!(falling_factorial(5, 2), BigInt::from(20));
        assert_eq!(factorial(0), BigInt::one());
    }

    fn small_poly() -> impl Strategy<Value = BigPoly> {
        proptest::collection::vec(-20i64..20, 0..6).prop_map(|c| BigPoly::from_i64s(&c))
    }

    fn small_grid() -> impl Strategy<Value = BigPoly> {
        proptest::collection::vec(proptest::collection::vec(-9i64..9, 0..4), 0..4).prop_map(
            |rows| {
                BigPoly::from_grid(
                    rows.into_iter()
                        .map(|r| r.into_iter().map(BigInt::from).collect())
                        .collect(),
                )
            },
        )
    }

    proptest! {
        #[test]
        fn mul_commutative_associative(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assert_eq!(a.checked_mul(&b).unwrap(), b.checked_mul(&a).unwrap());
            let left = a.checked_mul(&b).unwrap().checked_mul(&c).unwrap();
            let right = a.checked_mul(&b.checked_mul(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn bivariate_mul_commutative(a in small_grid(), b in small_grid()) {
            prop_assert_eq!(a.checked_mul(&b).unwrap(), b.checked_mul(&a).unwrap());
        }

        #[test]
        fn eval_at_one_is_multiplicative(a in small_grid(), b in small_grid()) {
            let prod = a.checked_mul(&b).unwrap();
            prop_assert_eq!(prod.sum(), a.sum() * b.sum());
            let lhs = prod.eval_at_one(Var::V).unwrap();
            let rhs = a.eval_at_one(Var::V).unwrap().checked_mul(&b.eval_at_one(Var::V).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn derivative_linear_and_leibniz(a in small_grid(), b in small_grid()) {
            for var in [Var::V, Var::W] {
                let sum = a.checked_add(&b).unwrap().derivative(var).unwrap();
                let parts = a.derivative(var).unwrap().checked_add(&b.derivative(var).unwrap()).unwrap();
                prop_assert_eq!(sum, parts);
                let lhs = a.checked_mul(&b).unwrap().derivative(var).unwrap();
                let rhs = a.derivative(var).unwrap().checked_mul(&b).unwrap()
                    .checked_add(&a.checked_mul(&b.derivative(var).unwrap()).unwrap()).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn shift_then_zero_is_value_at_one(a in small_poly()) {
            let shifted = a.shift_var().unwrap();
            prop_assert_eq!(shifted.eval(&BigInt::ZERO).unwrap(), a.eval(&BigInt::one()).unwrap());
            prop_assert_eq!(shifted.eval(&BigInt::from(3)).unwrap(), a.eval(&BigInt::from(4)).unwrap());
        }
    }
}
