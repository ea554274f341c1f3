//! Binary forms and transvectants.
//!
//! A binary form of degree `n` is stored as `c[i]` = coefficient of
//! `x^i y^(n-i)`, so the dehomogenized polynomial `f(x)` has the same
//! coefficient list.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryForm(pub Vec<Rational>);

impl BinaryForm {
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn dx(&self) -> BinaryForm {
        BinaryForm(self.0.iter().enumerate().skip(1).map(|(i, c)| c * Rational::from_integer(BigInt::from(i))).collect())
    }

    fn dy(&self) -> BinaryForm {
        let n = self.degree();
        BinaryForm(self.0.iter().take(n).enumerate().map(|(i, c)| c * Rational::from_integer(BigInt::from(n - i))).collect())
    }

    fn partial(&self, kx: usize, ky: usize) -> BinaryForm {
        let mut f = self.clone();
        for _ in 0..kx {
            f = f.dx();
        }
        for _ in 0..ky {
            f = f.dy();
        }
        f
    }

    fn mul(&self, other: &BinaryForm) -> BinaryForm {
        let mut out = alloc::vec![Rational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        BinaryForm(out)
    }

    /// Constant term of a degree-0 form.
    pub fn scalar(&self) -> Rational {
        self.0.first().cloned().unwrap_or_else(Rational::zero)
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, k| acc * BigInt::from(k))
}

fn binomial(n: usize, k: usize) -> BigInt {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// The `k`-th transvectant `(f, g)_k`, scaled by `(m-k)!(n-k)!/(m!n!)`.
pub fn transvectant(f: &BinaryForm, g: &BinaryForm, k: usize) -> BinaryForm {
    let m = f.degree();
    let n = g.degree();
    assert!(k <= m && k <= n, "transvectant order exceeds degree");
    let mut acc = alloc::vec![Rational::zero(); m + n - 2 * k + 1];
    for j in 0..=k {
        let term = f.partial(k - j, j).mul(&g.partial(j, k - j));
        let mut s = binomial(k, j);
        if j % 2 == 1 {
            s = -s;
        }
        let s = Rational::from_integer(s);
        for (a, t) in acc.iter_mut().zip(term.0.iter()) {
            *a += &s * t;
        }
    }
    let scale = Rational::new(factorial(m - k) * factorial(n - k), factorial(m) * factorial(n));
    BinaryForm(acc.into_iter().map(|c| c * &scale).collect())
}

/// The four basic invariants `(A, B, C, D)` of a binary sextic.
pub fn sextic_abcd(f: &BinaryForm) -> [Rational; 4] {
    let i = transvectant(f, f, 4);
    let delta = transvectant(&i, &i, 2);
    let y1 = transvectant(f, &i, 4);
    let y2 = transvectant(&i, &y1, 2);
    let y3 = transvectant(&i, &y2, 2);
    let a = transvectant(f, f, 6).scalar();
    let b = transvectant(&i, &i, 4).scalar();
    let c = transvectant(&i, &delta, 4).scalar();
    let d = transvectant(&y3, &y1, 2).scalar();
    [a, b, c, d]
}
