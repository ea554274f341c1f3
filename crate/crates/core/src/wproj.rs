//! Weighted integer tuples: the `⋆` action, weighted gcds, normalization and
//! weighted heights.
//!
//! A point of `WP_w(Q)` is stored as an integer tuple. Its normalized
//! representative divides out the weighted gcd (the largest integer `d` with
//! `d^q_i | x_i`); the absolutely normalized one divides out the largest real
//! `d` with `d^q_i` an integer dividing `x_i`. Heights are decided with
//! integer power comparisons only; floats appear solely as display values.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::factor::{factorize, FactorBudget};
use crate::{Error, Rational, Result};

/// Ordered tuple of positive integer weights `(q_0, ..., q_n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct WeightSystem(Vec<u32>);

impl WeightSystem {
    pub fn new(weights: Vec<u32>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidWeights("empty weight tuple".into()));
        }
        if weights.contains(&0) {
            return Err(Error::InvalidWeights("weights must be >= 1".into()));
        }
        Ok(WeightSystem(weights))
    }

    /// `(2, 4, 6, 10)`, the degrees of `J2, J4, J6, J10`.
    pub fn igusa() -> Self {
        WeightSystem(alloc::vec![2, 4, 6, 10])
    }

    /// `(1, 2, 3, 5)`, the target of the squaring map.
    pub fn halved() -> Self {
        WeightSystem(alloc::vec![1, 2, 3, 5])
    }

    pub fn weights(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// gcd of all weights; exponents of the absolute weighted gcd live in
    /// `(1/g) Z`.
    pub fn gcd(&self) -> u32 {
        self.0.iter().fold(0u32, |g, &q| g.gcd(&q))
    }
}

impl TryFrom<Vec<u32>> for WeightSystem {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        WeightSystem::new(v)
    }
}

impl From<WeightSystem> for Vec<u32> {
    fn from(w: WeightSystem) -> Vec<u32> {
        w.0
    }
}

/// Integer tuple with weights attached, not all coordinates zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightedPoint {
    coords: Vec<BigInt>,
    system: WeightSystem,
}

impl WeightedPoint {
    pub fn new(coords: Vec<BigInt>, system: WeightSystem) -> Result<Self> {
        if coords.len() != system.len() {
            return Err(Error::InvalidPoint(alloc::format!("{} coordinates for {} weights", coords.len(), system.len())));
        }
        if coords.iter().all(Zero::is_zero) {
            return Err(Error::InvalidPoint("all coordinates are zero".into()));
        }
        Ok(WeightedPoint { coords, system })
    }

    pub fn from_i64(coords: &[i64], system: WeightSystem) -> Result<Self> {
        Self::new(coords.iter().map(|&x| BigInt::from(x)).collect(), system)
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn system(&self) -> &WeightSystem {
        &self.system
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.coords
    }

    fn pairs(&self) -> impl Iterator<Item = (&BigInt, u32)> {
        self.coords.iter().zip(self.system.0.iter().copied())
    }

    /// gcd of all coordinates (positive).
    pub fn content(&self) -> BigUint {
        self.coords.iter().fold(BigUint::zero(), |g, x| g.gcd(x.magnitude()))
    }
}

impl fmt::Display for WeightedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, x) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("]")
    }
}

/// `λ ⋆ p = (λ^q_0 x_0, ..., λ^q_n x_n)` as exact rationals.
pub fn scalar_star(lambda: &Rational, p: &WeightedPoint) -> Result<Vec<Rational>> {
    if lambda.is_zero() {
        return Err(Error::ZeroScalar);
    }
    Ok(p.pairs().map(|(x, q)| num_traits::pow(lambda.clone(), q as usize) * Rational::from_integer(x.clone())).collect())
}

/// Scale by a nonzero integer; stays integral.
pub fn scale_int(k: &BigInt, p: &WeightedPoint) -> Result<WeightedPoint> {
    if k.is_zero() {
        return Err(Error::ZeroScalar);
    }
    let coords = p.pairs().map(|(x, q)| x * num_traits::pow(k.clone(), q as usize)).collect();
    Ok(WeightedPoint { coords, system: p.system.clone() })
}

/// A weighted gcd together with whether it is certified.
///
/// `exact == false` means factoring ran out of budget and `value` is only a
/// lower bound (a divisor of the true weighted gcd).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wgcd {
    pub value: BigUint,
    pub exact: bool,
}

/// `d = base^(1/root)`, kept with `root` minimal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RadicalScalar {
    #[serde(with = "crate::wproj::serde_biguint_str")]
    pub base: BigUint,
    pub root: u32,
}

impl RadicalScalar {
    pub fn one() -> Self {
        RadicalScalar { base: BigUint::one(), root: 1 }
    }

    pub fn is_one(&self) -> bool {
        self.base.is_one()
    }

    /// `d^q` for a weight `q` divisible by `root`.
    pub fn pow_weight(&self, q: u32) -> Option<BigUint> {
        if !q.is_multiple_of(self.root) {
            return None;
        }
        Some(num_traits::pow(self.base.clone(), (q / self.root) as usize))
    }

    pub fn to_f64(&self) -> f64 {
        libm::exp(ln_biguint(&self.base) / self.root as f64)
    }
}

/// p-adic valuation of a nonzero integer.
fn valuation(x: &BigUint, p: &BigUint) -> u32 {
    let mut v = 0;
    let mut x = x.clone();
    loop {
        let (q, r) = x.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        x = q;
        v += 1;
    }
}

/// For each prime of the coordinate content, `min_i v_p(x_i) / q_i` as a
/// fraction `(num, den)` over nonzero coordinates.
fn prime_ratios(p: &WeightedPoint, budget: &FactorBudget) -> (Vec<(BigUint, u32, u32)>, bool) {
    let content = p.content();
    let fac = factorize(&content, budget);
    let mut out = Vec::with_capacity(fac.primes.len());
    for (prime, _) in &fac.primes {
        // minimise v/q by cross multiplication
        let mut best: Option<(u32, u32)> = None;
        for (x, q) in p.pairs() {
            if x.is_zero() {
                continue;
            }
            let v = valuation(x.magnitude(), prime);
            best = match best {
                Some((bv, bq)) if (bv as u64) * (q as u64) <= (v as u64) * (bq as u64) => Some((bv, bq)),
                _ => Some((v, q)),
            };
        }
        if let Some((v, q)) = best {
            out.push((prime.clone(), v, q));
        }
    }
    (out, fac.is_complete())
}

/// Weighted gcd with an explicit factoring budget.
pub fn wgcd_with(p: &WeightedPoint, budget: &FactorBudget) -> Wgcd {
    let (ratios, exact) = prime_ratios(p, budget);
    let mut d = BigUint::one();
    for (prime, v, q) in ratios {
        // largest e with e*q_i <= v_p(x_i) for all i  <=>  e = floor(min v/q)
        let e = v / q;
        if e > 0 {
            d *= num_traits::pow(prime, e as usize);
        }
    }
    Wgcd { value: d, exact }
}

/// Largest integer `d` with `d^q_i | x_i` for all `i`.
pub fn wgcd(p: &WeightedPoint) -> BigUint {
    wgcd_with(p, &FactorBudget::default()).value
}

/// Absolute weighted gcd, `d = base^(1/root)`.
///
/// The exponent of each prime in `d` is the largest multiple of `1/g`
/// (`g` the gcd of the weights) not exceeding `min_i v_p(x_i)/q_i`; zero
/// coordinates impose no constraint.
pub fn abs_wgcd_with(p: &WeightedPoint, budget: &FactorBudget) -> (RadicalScalar, bool) {
    let g = p.system.gcd();
    let (ratios, exact) = prime_ratios(p, budget);
    let mut exps: Vec<(BigUint, u32)> = Vec::new();
    for (prime, v, q) in ratios {
        let k = ((v as u64 * g as u64) / q as u64) as u32;
        if k > 0 {
            exps.push((prime, k));
        }
    }
    // reduce the root: r = g / gcd(g, all k)
    let common = exps.iter().fold(g, |acc, (_, k)| acc.gcd(k));
    let root = g / common.max(1);
    let mut base = BigUint::one();
    for (prime, k) in exps {
        base *= num_traits::pow(prime, (k / common.max(1)) as usize);
    }
    (RadicalScalar { base, root: if root == 0 { 1 } else { root } }, exact)
}

pub fn abs_wgcd(p: &WeightedPoint) -> RadicalScalar {
    abs_wgcd_with(p, &FactorBudget::default()).0
}

fn divide_weighted(p: &WeightedPoint, d: &RadicalScalar) -> WeightedPoint {
    if d.is_one() {
        return p.clone();
    }
    let coords = p
        .pairs()
        .map(|(x, q)| {
            let dq = d.pow_weight(q).expect("root divides every weight");
            x / BigInt::from(dq)
        })
        .collect();
    WeightedPoint { coords, system: p.system.clone() }
}

/// `(1/wgcd(p)) ⋆ p`.
pub fn normalize(p: &WeightedPoint) -> WeightedPoint {
    normalize_with(p, &FactorBudget::default()).0
}

pub fn normalize_with(p: &WeightedPoint, budget: &FactorBudget) -> (WeightedPoint, bool) {
    let w = wgcd_with(p, budget);
    (divide_weighted(p, &RadicalScalar { base: w.value, root: 1 }), w.exact)
}

/// `(1/abs_wgcd(p)) ⋆ p`; integral by construction.
pub fn abs_normalize(p: &WeightedPoint) -> WeightedPoint {
    let d = abs_wgcd(p);
    divide_weighted(p, &d)
}

pub fn is_normalized(p: &WeightedPoint) -> bool {
    wgcd(p).is_one()
}

/// `|x|^(1/q) <= a/b` (or `<`) decided as `|x| b^q` against `a^q`.
fn coord_cmp_bound(x: &BigInt, q: u32, a: &BigUint, b: &BigUint) -> Ordering {
    let lhs = x.magnitude() * num_traits::pow(b.clone(), q as usize);
    let rhs = num_traits::pow(a.clone(), q as usize);
    lhs.cmp(&rhs)
}

fn positive_parts(h: &Rational) -> Result<(BigUint, BigUint)> {
    if !h.is_positive() {
        return Err(Error::NonPositiveHeight);
    }
    Ok((h.numer().magnitude().clone(), h.denom().magnitude().clone()))
}

/// Exact test of `H(p) <= h` (or `< h` when `strict`), evaluated on the
/// normalized representative.
pub fn height_leq(p: &WeightedPoint, h: &Rational, strict: bool) -> Result<bool> {
    let (a, b) = positive_parts(h)?;
    let n = normalize(p);
    Ok(height_leq_normalized(&n, &a, &b, strict))
}

/// Same as [`height_leq`] for a point already known to be normalized.
pub fn height_leq_normalized(p: &WeightedPoint, a: &BigUint, b: &BigUint, strict: bool) -> bool {
    p.pairs().all(|(x, q)| match coord_cmp_bound(x, q, a, b) {
        Ordering::Less => true,
        Ordering::Equal => !strict,
        Ordering::Greater => false,
    })
}

/// A height value with its exact certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct Height {
    /// Display value, `|x_i*|^(1/q_i*)`.
    pub value: f64,
    /// Index achieving the maximum (first index on ties).
    pub arg_max: usize,
    /// The coordinate at `arg_max` in the representative that was measured.
    pub coord: BigInt,
    pub weight: u32,
}

/// Compare `|x|^(1/q)` with `|y|^(1/r)` exactly.
pub fn cmp_weighted_abs(x: &BigInt, q: u32, y: &BigInt, r: u32) -> Ordering {
    let lhs = num_traits::pow(x.magnitude().clone(), r as usize);
    let rhs = num_traits::pow(y.magnitude().clone(), q as usize);
    lhs.cmp(&rhs)
}

fn height_of_representative(p: &WeightedPoint) -> Height {
    let mut best = 0usize;
    for i in 1..p.coords.len() {
        let (x, q) = (&p.coords[i], p.system.0[i]);
        let (y, r) = (&p.coords[best], p.system.0[best]);
        if cmp_weighted_abs(x, q, y, r) == Ordering::Greater {
            best = i;
        }
    }
    let x = &p.coords[best];
    let q = p.system.0[best];
    let value = if x.is_zero() { 0.0 } else { libm::exp(ln_biguint(x.magnitude()) / q as f64) };
    Height { value, arg_max: best, coord: x.clone(), weight: q }
}

/// Weighted height of the normalized representative.
pub fn height(p: &WeightedPoint) -> Height {
    height_of_representative(&normalize(p))
}

/// `max |x_i|^(1/q_i)` over the given coordinates, without normalizing.
pub fn raw_height(p: &WeightedPoint) -> Height {
    height_of_representative(p)
}

/// Height after absolute normalization.
pub fn abs_height(p: &WeightedPoint) -> Height {
    height_of_representative(&abs_normalize(p))
}

/// Natural log of a positive big integer, valid far beyond the f64 range.
pub fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        if let Some(f) = x.to_f64() {
            if f.is_finite() && f > 0.0 {
                return libm::log(f);
            }
        }
    }
    let shift = bits.saturating_sub(64);
    let top = (x >> shift).to_f64().unwrap_or(1.0);
    libm::log(top) + shift as f64 * core::f64::consts::LN_2
}

/// Converts a big integer to f64 after dividing by `2^shift`.
pub fn bigint_scaled_f64(x: &BigInt, shift: u64) -> f64 {
    let mag = x.magnitude() >> shift;
    let v = mag.to_f64().unwrap_or(f64::INFINITY);
    if x.sign() == Sign::Minus {
        -v
    } else {
        v
    }
}

/// Serde helpers: big integers as decimal strings.
pub mod serde_bigint_str {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> core::result::Result<S::Ok, S::Error> {
        s.collect_str(x)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> core::result::Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub mod serde_biguint_str {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigUint, s: S) -> core::result::Result<S::Ok, S::Error> {
        s.collect_str(x)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> core::result::Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Rationals as `"num/den"` strings.
pub mod serde_rational_str {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn to_string(x: &Rational) -> String {
        alloc::format!("{}/{}", x.numer(), x.denom())
    }

    pub fn parse(s: &str) -> core::result::Result<Rational, String> {
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let n: BigInt = n.trim().parse().map_err(|_| alloc::format!("bad numerator in {s:?}"))?;
        let d: BigInt = d.trim().parse().map_err(|_| alloc::format!("bad denominator in {s:?}"))?;
        if d.is_zero() {
            return Err(alloc::format!("zero denominator in {s:?}"));
        }
        Ok(Rational::new(n, d))
    }

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> core::result::Result<S::Ok, S::Error> {
        s.serialize_str(&to_string(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> core::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Weighted points serialize as arrays of decimal strings; the weights are
/// carried separately.
impl Serialize for WeightedPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.coords.len()))?;
        for x in &self.coords {
            seq.serialize_element(&alloc::format!("{x}"))?;
        }
        seq.end()
    }
}

/// Parse a list of decimal strings into coordinates.
pub fn parse_coords(items: &[String]) -> Result<Vec<BigInt>> {
    items.iter().map(|s| s.parse::<BigInt>().map_err(|_| Error::InvalidPoint(alloc::format!("bad integer {s:?}")))).collect()
}
