//! Dense univariate polynomials and rational functions over `Q`.

use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::{Error, Rational, Result};

/// Coefficients low degree first; trailing zeros are trimmed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly(Vec<Rational>);

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(alloc::vec![c])
    }

    /// The polynomial `t`.
    pub fn var() -> Self {
        Self::new(alloc::vec![Rational::zero(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.0.iter().rev().fold(Rational::zero(), |acc, c| acc * t + c)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::new(self.0.iter().map(|c| c * k).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Poly::constant(Rational::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.0.len().max(rhs.0.len());
        let zero = Rational::zero();
        Poly::new((0..n).map(|i| self.0.get(i).unwrap_or(&zero) + rhs.0.get(i).unwrap_or(&zero)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly(Vec::new());
        }
        let mut out = alloc::vec![Rational::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

/// `num / den` with a nonzero denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFunc {
    pub num: Poly,
    pub den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero("rational function denominator".into()));
        }
        Ok(RatFunc { num, den })
    }

    pub fn poly(p: Poly) -> Self {
        RatFunc { num: p, den: Poly::constant(Rational::one()) }
    }

    pub fn eval(&self, t: &Rational) -> Result<Rational> {
        let d = self.den.eval(t);
        if d.is_zero() {
            return Err(Error::DivisionByZero("rational function at a pole".into()));
        }
        Ok(self.num.eval(t) / d)
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        RatFunc { num: &(&self.num * &other.den) + &(&other.num * &self.den), den: &self.den * &other.den }
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        RatFunc { num: &self.num * &other.num, den: &self.den * &other.den }
    }

    pub fn scale(&self, k: &Rational) -> RatFunc {
        RatFunc { num: self.num.scale(k), den: self.den.clone() }
    }

    /// Identically zero as a rational function.
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}
