//! Invariants of genus-2 curves `y^2 = f(x)`.
//!
//! `[J2 : J4 : J6 : J10]` are the Igusa-Clebsch invariants, computed from
//! transvectants of the sextic. With this normalization `J10` is the
//! discriminant of `f` (up to the leading-coefficient convention) and the
//! degree-30 equation of the `L2` locus in [`crate::loci`] vanishes on every
//! curve with an extra involution.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::binform::{sextic_abcd, BinaryForm};
use crate::poly::Poly;
use crate::wproj::{self, serde_rational_str, WeightSystem, WeightedPoint};
use crate::{Error, Rational, Result};

/// `f(x) = a6 x^6 + ... + a0`, stored as `[a0, ..., a6]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinarySextic {
    coeffs: [Rational; 7],
}

impl BinarySextic {
    /// Rejects forms of degree below 5 and singular forms.
    pub fn new(coeffs: [Rational; 7]) -> Result<Self> {
        if coeffs[6].is_zero() && coeffs[5].is_zero() {
            return Err(Error::SingularSextic);
        }
        let f = BinarySextic { coeffs };
        if f.igusa_clebsch()[3].is_zero() {
            return Err(Error::SingularSextic);
        }
        Ok(f)
    }

    pub fn from_i64(c: [i64; 7]) -> Result<Self> {
        Self::new(c.map(|x| Rational::from_integer(x.into())))
    }

    /// Build from a polynomial of degree 5 or 6.
    pub fn from_poly(p: &Poly) -> Result<Self> {
        let c = p.coeffs();
        if c.len() > 7 {
            return Err(Error::InvalidArgument("polynomial degree exceeds 6".into()));
        }
        let coeffs = core::array::from_fn(|i| c.get(i).cloned().unwrap_or_else(Rational::zero));
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Rational; 7] {
        &self.coeffs
    }

    pub fn to_poly(&self) -> Poly {
        Poly::new(self.coeffs.to_vec())
    }

    /// `(cx + d)^6 f((ax + b)/(cx + d))`; `None` if `ad - bc = 0` or the
    /// image is not a valid sextic.
    pub fn transform(&self, a: &Rational, b: &Rational, c: &Rational, d: &Rational) -> Option<BinarySextic> {
        if (a * d - b * c).is_zero() {
            return None;
        }
        let num = Poly::new(alloc::vec![b.clone(), a.clone()]);
        let den = Poly::new(alloc::vec![d.clone(), c.clone()]);
        let mut acc = Poly::new(Vec::new());
        for (i, ai) in self.coeffs.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            let term = &num.pow(i as u32) * &den.pow(6 - i as u32);
            acc = &acc + &term.scale(ai);
        }
        BinarySextic::from_poly(&acc).ok()
    }

    /// Raw Igusa-Clebsch invariants `[I2, I4, I6, I10]` (no scaling).
    pub fn igusa_clebsch(&self) -> [Rational; 4] {
        let form = BinaryForm(self.coeffs.to_vec());
        let [a, b, c, d] = sextic_abcd(&form);
        let r = |n: i64| Rational::from_integer(n.into());
        let a2 = &a * &a;
        let a3 = &a2 * &a;
        let i2 = r(-120) * &a;
        let i4 = r(-720) * &a2 + r(6750) * &b;
        let i6 = r(8640) * &a3 - r(108000) * &a * &b + r(202500) * &c;
        let i10 = r(-62208) * &a3 * &a2 + r(972000) * &a3 * &b + r(1620000) * &a2 * &c
            - r(3037500) * &a * &b * &b
            - r(6075000) * &b * &c
            - r(4556250) * &d;
        [i2, i4, i6, i10]
    }
}

/// A point `[J2 : J4 : J6 : J10]` of `WP(2,4,6,10)` with `J10 != 0`, stored
/// as its normalized integer representative.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModuliPoint {
    j: [BigInt; 4],
}

impl ModuliPoint {
    /// Normalizes the given integer tuple.
    pub fn new(j: [BigInt; 4]) -> Result<Self> {
        if j[3].is_zero() {
            return Err(Error::ZeroDiscriminant);
        }
        let p = WeightedPoint::new(j.to_vec(), WeightSystem::igusa())?;
        Ok(Self::from_normalized_unchecked(wproj::normalize(&p)))
    }

    pub fn from_i64(j: [i64; 4]) -> Result<Self> {
        Self::new(j.map(BigInt::from))
    }

    /// Clears denominators with an integer weighted scaling, then normalizes.
    pub fn from_rational(j: &[Rational; 4]) -> Result<Self> {
        let lcm = j.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let w = [2u32, 4, 6, 10];
        let ints: [BigInt; 4] = core::array::from_fn(|i| {
            let scaled = &j[i] * Rational::from_integer(num_traits::pow(lcm.clone(), w[i] as usize));
            scaled.to_integer()
        });
        Self::new(ints)
    }

    /// Trusts the caller that `p` is normalized with nonzero last coordinate.
    pub fn from_normalized_unchecked(p: WeightedPoint) -> Self {
        let c = p.into_coords();
        ModuliPoint { j: [c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone()] }
    }

    pub fn j(&self) -> &[BigInt; 4] {
        &self.j
    }

    pub fn j2(&self) -> &BigInt {
        &self.j[0]
    }
    pub fn j4(&self) -> &BigInt {
        &self.j[1]
    }
    pub fn j6(&self) -> &BigInt {
        &self.j[2]
    }
    pub fn j10(&self) -> &BigInt {
        &self.j[3]
    }

    pub fn to_weighted(&self) -> WeightedPoint {
        WeightedPoint::new(self.j.to_vec(), WeightSystem::igusa()).expect("J10 != 0")
    }

    /// Absolutely normalized representative.
    pub fn abs_normalized(&self) -> [BigInt; 4] {
        let c = wproj::abs_normalize(&self.to_weighted()).into_coords();
        [c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone()]
    }

    /// The other sign representative `[-J2, J4, -J6, -J10]`, normalized.
    pub fn sign_flip(&self) -> ModuliPoint {
        let [a, b, c, d] = self.j.clone();
        ModuliPoint { j: [-a, b, -c, -d] }
    }

    /// Canonical representative of the moduli class: among the two sign
    /// representatives, the one whose first nonzero entry of `(J2, J6, J10)`
    /// is positive.
    pub fn class_representative(&self) -> ModuliPoint {
        let first = [&self.j[0], &self.j[2], &self.j[3]].into_iter().find(|x| !x.is_zero()).expect("J10 != 0");
        if first.is_negative() {
            self.sign_flip()
        } else {
            self.clone()
        }
    }

    pub fn absolute_t(&self) -> AbsoluteTriple {
        absolute_t(self)
    }
}

impl fmt::Display for ModuliPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}, {}]", self.j[0], self.j[1], self.j[2], self.j[3])
    }
}

#[derive(Serialize, Deserialize)]
struct ModuliPointRepr {
    #[serde(rename = "J2")]
    j2: String,
    #[serde(rename = "J4")]
    j4: String,
    #[serde(rename = "J6")]
    j6: String,
    #[serde(rename = "J10")]
    j10: String,
}

impl Serialize for ModuliPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        ModuliPointRepr {
            j2: alloc::format!("{}", self.j[0]),
            j4: alloc::format!("{}", self.j[1]),
            j6: alloc::format!("{}", self.j[2]),
            j10: alloc::format!("{}", self.j[3]),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ModuliPoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
        let r = ModuliPointRepr::deserialize(d)?;
        let parse = |s: &str| s.parse::<BigInt>().map_err(serde::de::Error::custom);
        let j = [parse(&r.j2)?, parse(&r.j4)?, parse(&r.j6)?, parse(&r.j10)?];
        let p = ModuliPoint::new(j.clone()).map_err(serde::de::Error::custom)?;
        if p.j != j {
            return Err(serde::de::Error::custom("moduli point is not normalized"));
        }
        Ok(p)
    }
}

/// Normalized moduli point of `y^2 = f(x)`.
pub fn igusa_invariants(f: &BinarySextic) -> Result<ModuliPoint> {
    // clearing the sextic's denominators scales J_k by c^k, invisible after
    // normalization
    let lcm = f.coeffs.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scaled = if lcm.is_one() {
        f.clone()
    } else {
        let c = Rational::from_integer(lcm);
        BinarySextic { coeffs: f.coeffs.clone().map(|x| x * &c) }
    };
    let ic = scaled.igusa_clebsch();
    if ic[3].is_zero() {
        return Err(Error::SingularSextic);
    }
    ModuliPoint::from_rational(&ic)
}

/// Which absolute-invariant system a triple belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TripleKind {
    /// `(J2^5/J10, J4^5/J10^2, J6^5/J10^3)`
    T,
    /// `(J2^30/J10^6, J4^15/J10^6, J6^10/J10^6)`
    I,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AbsoluteTriple {
    pub kind: TripleKind,
    #[serde(with = "serde_rational_str")]
    pub t1: Rational,
    #[serde(with = "serde_rational_str")]
    pub t2: Rational,
    #[serde(with = "serde_rational_str")]
    pub t3: Rational,
}

impl AbsoluteTriple {
    pub fn as_array(&self) -> [&Rational; 3] {
        [&self.t1, &self.t2, &self.t3]
    }
}

impl fmt::Display for AbsoluteTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {})",
            serde_rational_str::to_string(&self.t1),
            serde_rational_str::to_string(&self.t2),
            serde_rational_str::to_string(&self.t3)
        )
    }
}

fn ratio(num: &BigInt, e: usize, den: &BigInt, f: usize) -> Rational {
    Rational::new(num_traits::pow(num.clone(), e), num_traits::pow(den.clone(), f))
}

pub fn absolute_t(p: &ModuliPoint) -> AbsoluteTriple {
    let [j2, j4, j6, j10] = &p.j;
    AbsoluteTriple { kind: TripleKind::T, t1: ratio(j2, 5, j10, 1), t2: ratio(j4, 5, j10, 2), t3: ratio(j6, 5, j10, 3) }
}

pub fn absolute_i(p: &ModuliPoint) -> AbsoluteTriple {
    let [j2, j4, j6, j10] = &p.j;
    AbsoluteTriple { kind: TripleKind::I, t1: ratio(j2, 30, j10, 6), t2: ratio(j4, 15, j10, 6), t3: ratio(j6, 10, j10, 6) }
}

/// Same isomorphism class over the algebraic closure.
pub fn same_moduli(p: &ModuliPoint, q: &ModuliPoint) -> bool {
    // cheap exit on identical representatives, then exact cross products
    if p == q {
        return true;
    }
    let [a2, a4, a6, a10] = &p.j;
    let [b2, b4, b6, b10] = &q.j;
    let eq = |x: &BigInt, y: &BigInt, e: usize| {
        // x^5 / a10^e == y^5 / b10^e
        num_traits::pow(x.clone(), 5) * num_traits::pow(b10.clone(), e)
            == num_traits::pow(y.clone(), 5) * num_traits::pow(a10.clone(), e)
    };
    eq(a2, b2, 1) && eq(a4, b4, 2) && eq(a6, b6, 3)
}

/// Coordinatewise squares, normalized in `WP(1,2,3,5)`.
pub fn veronese(p: &ModuliPoint) -> WeightedPoint {
    let sq = p.j.iter().map(|x| x * x).collect();
    let w = WeightedPoint::new(sq, WeightSystem::halved()).expect("J10 != 0");
    wproj::normalize(&w)
}

/// Orders moduli points by their class key, then by representative.
pub fn cmp_by_class(p: &ModuliPoint, q: &ModuliPoint) -> Ordering {
    absolute_t(p).cmp(&absolute_t(q)).then_with(|| p.cmp(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn mp(j: [i64; 4]) -> ModuliPoint {
        ModuliPoint::from_i64(j).unwrap()
    }

    /// Independent evaluation from the roots of `f`: each invariant is a
    /// symmetric sum of squared root differences.
    fn roots_oracle(lead: &Rational, r: &[Rational; 6]) -> [Rational; 4] {
        let d = |i: usize, j: usize| &r[i] - &r[j];
        // I2: 15 perfect matchings
        let mut matchings: Vec<[(usize, usize); 3]> = Vec::new();
        for b in 1..6 {
            let rest: Vec<usize> = (1..6).filter(|&x| x != b).collect();
            for k in 1..4 {
                let r2: Vec<usize> = rest[1..].iter().copied().filter(|&x| x != rest[k]).collect();
                matchings.push([(0, b), (rest[0], rest[k]), (r2[0], r2[1])]);
            }
        }
        assert_eq!(matchings.len(), 15);
        let l2 = lead * lead;
        let mut i2 = Rational::zero();
        for m in &matchings {
            let p = d(m[0].0, m[0].1) * d(m[1].0, m[1].1) * d(m[2].0, m[2].1);
            i2 += &l2 * &p * &p;
        }
        // I4: 10 splits into two triples
        let mut i4 = Rational::zero();
        for a in 1..6 {
            for b in a + 1..6 {
                let u: Vec<usize> = (1..6).filter(|&x| x != a && x != b).collect();
                let p = d(0, a) * d(a, b) * d(b, 0) * d(u[0], u[1]) * d(u[1], u[2]) * d(u[2], u[0]);
                i4 += &l2 * &l2 * &p * &p;
            }
        }
        // I6: 60 distinct graphs (12)(23)(31)(45)(56)(64)(14)(25)(36)
        let mut seen: Vec<Vec<(usize, usize)>> = Vec::new();
        let mut i6 = Rational::zero();
        let mut perm = [0usize, 1, 2, 3, 4, 5];
        loop {
            let [a1, a2, a3, a4, a5, a6] = perm;
            let pairs = [(a1, a2), (a2, a3), (a3, a1), (a4, a5), (a5, a6), (a6, a4), (a1, a4), (a2, a5), (a3, a6)];
            let mut key: Vec<(usize, usize)> = pairs.iter().map(|&(x, y)| (x.min(y), x.max(y))).collect();
            key.sort();
            if !seen.contains(&key) {
                let mut p = Rational::one();
                for &(x, y) in &pairs {
                    p *= d(x, y);
                }
                i6 += &l2 * &l2 * &l2 * &p * &p;
                seen.push(key);
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        assert_eq!(seen.len(), 60);
        let mut i10 = num_traits::pow(lead.clone(), 10);
        for i in 0..6 {
            for j in i + 1..6 {
                i10 *= d(i, j) * d(i, j);
            }
        }
        [i2, i4, i6, i10]
    }

    fn next_permutation(a: &mut [usize]) -> bool {
        let n = a.len();
        let Some(i) = (0..n - 1).rev().find(|&i| a[i] < a[i + 1]) else { return false };
        let j = (i + 1..n).rev().find(|&j| a[j] > a[i]).unwrap();
        a.swap(i, j);
        a[i + 1..].reverse();
        true
    }

    fn from_roots(lead: &Rational, r: &[Rational; 6]) -> BinarySextic {
        let mut p = Poly::constant(lead.clone());
        for x in r {
            p = &p * &Poly::new(vec![-x.clone(), Rational::one()]);
        }
        BinarySextic::from_poly(&p).unwrap()
    }

    #[test]
    fn transvectant_route_matches_roots() {
        let r = [q(1, 1), q(2, 1), q(-3, 1), q(5, 2), q(7, 1), q(-1, 3)];
        let lead = q(2, 1);
        let f = from_roots(&lead, &r);
        let ic = f.igusa_clebsch();
        assert_eq!(ic, roots_oracle(&lead, &r));
        assert_eq!(
            ic,
            [q(335048, 3), q(889772800, 3), q(286504160614400, 27), Rational::new(3396914397184000000i64.into(), 9.into())]
        );
    }

    #[test]
    fn roots_oracle_on_more_sextics() {
        let cases = [
            (q(1, 1), [q(0, 1), q(1, 1), q(-1, 1), q(2, 1), q(-2, 1), q(3, 1)]),
            (q(-3, 5), [q(1, 2), q(1, 3), q(1, 4), q(-7, 1), q(11, 3), q(-2, 9)]),
        ];
        for (lead, r) in cases {
            assert_eq!(from_roots(&lead, &r).igusa_clebsch(), roots_oracle(&lead, &r));
        }
    }

    #[test]
    fn singular_and_low_degree_rejected() {
        // (x-1)^2 (x^4 + 1)
        let p = &Poly::from_i64(&[1, -2, 1]) * &Poly::from_i64(&[1, 0, 0, 0, 1]);
        assert_eq!(BinarySextic::from_poly(&p), Err(Error::SingularSextic));
        assert_eq!(BinarySextic::from_i64([1, 0, 0, 0, 1, 0, 0]), Err(Error::SingularSextic));
    }

    #[test]
    fn quintic_accepted() {
        let f = BinarySextic::from_i64([1, 0, 0, 0, 0, 1, 0]).unwrap();
        let p = igusa_invariants(&f).unwrap();
        // y^2 = x^5 + 1 has an automorphism of order 10: J2 = J4 = J6 = 0
        assert!(same_moduli(&p, &mp([0, 0, 0, 1])));
    }

    #[test]
    fn invariance_under_substitutions() {
        let f = BinarySextic::from_i64([3, -1, 4, 1, -5, 9, 2]).unwrap();
        let p = igusa_invariants(&f).unwrap();
        let one = q(1, 1);
        let zero = q(0, 1);
        for (a, b, c, d) in [
            (one.clone(), q(1, 1), zero.clone(), one.clone()),
            (q(3, 7), zero.clone(), zero.clone(), one.clone()),
            (zero.clone(), one.clone(), one.clone(), zero.clone()),
            (q(2, 1), q(-1, 3), q(5, 1), q(4, 1)),
        ] {
            let g = f.transform(&a, &b, &c, &d).unwrap();
            assert!(same_moduli(&p, &igusa_invariants(&g).unwrap()));
        }
        // f -> c f scales J_k by c^k
        let g = BinarySextic::new(f.coeffs().clone().map(|x| x * q(5, 3))).unwrap();
        assert!(same_moduli(&p, &igusa_invariants(&g).unwrap()));
    }

    #[test]
    fn c2_rescaled_sextic_gives_identical_point() {
        let f = BinarySextic::from_i64([1, 2, 0, 3, 0, 1, 1]).unwrap();
        let g = BinarySextic::new(f.coeffs().clone().map(|x| x * q(49, 1))).unwrap();
        assert_eq!(igusa_invariants(&f).unwrap(), igusa_invariants(&g).unwrap());
    }

    #[test]
    fn absolute_t_examples() {
        let p = ModuliPoint::new([3.into(), (-15).into(), 48.into(), 10.into()]).unwrap();
        let t = absolute_t(&p);
        assert_eq!(t.t1, q(243, 10));
        assert_eq!(t.t2, q(-759375, 100));
        assert_eq!(t.t3, Rational::new(num_traits::pow(BigInt::from(48), 5), 1000.into()));
        assert_eq!(absolute_t(&mp([-3, -15, -48, -10])), t);
        let z = absolute_t(&mp([0, 0, 0, 1]));
        assert!(z.t1.is_zero() && z.t2.is_zero() && z.t3.is_zero());
    }

    #[test]
    fn absolute_i_examples() {
        let z = absolute_i(&mp([0, 0, 0, 1]));
        assert!(z.t1.is_zero() && z.t2.is_zero() && z.t3.is_zero());
        let o = absolute_i(&mp([1, 1, 1, 1]));
        assert_eq!([o.t1.clone(), o.t2.clone(), o.t3.clone()], [q(1, 1), q(1, 1), q(1, 1)]);
        assert_eq!(absolute_i(&mp([2, 4, 8, 32])), o);
    }

    #[test]
    fn same_moduli_examples() {
        assert!(same_moduli(&mp([3, -15, 48, 10]), &mp([-3, -15, -48, -10])));
        assert!(!same_moduli(&mp([1, 1, 1, 1]), &mp([1, 1, 1, -1])));
        assert!(same_moduli(&mp([2, 4, 8, 32]), &mp([1, 1, 1, 1])));
        assert!(same_moduli(&mp([0, 0, 0, 1]), &mp([0, 0, 0, 7])));
    }

    #[test]
    fn veronese_examples() {
        assert_eq!(veronese(&mp([1, 1, 1, 1])).coords(), mp([1, 1, 1, 1]).j());
        assert_eq!(veronese(&mp([2, 4, 8, 32])).coords(), mp([1, 1, 1, 1]).j());
        // On representatives: reading the same coordinates with halved weights
        // squares the height, and squaring the coordinates raises it to the
        // fourth power.
        for j in [[4, -14, 2, 1], [0, -15, 45, 8], [3, -15, 48, 10], [2, 4, 8, 32]] {
            let p = mp(j);
            let same = WeightedPoint::new(p.j().to_vec(), WeightSystem::halved()).unwrap();
            let sq = WeightedPoint::new(p.j().iter().map(|x| x * x).collect(), WeightSystem::halved()).unwrap();
            let h = wproj::raw_height(&p.to_weighted()).value;
            let h_same = wproj::raw_height(&same).value;
            let h_sq = wproj::raw_height(&sq).value;
            assert!((h - libm::sqrt(h_same)).abs() < 1e-9 * h, "{j:?}: {h} vs {h_same}");
            assert!((h - libm::sqrt(libm::sqrt(h_sq))).abs() < 1e-9 * h, "{j:?}: {h} vs {h_sq}");
        }
    }

    #[test]
    fn class_representative_is_sign_canonical() {
        let p = mp([-3, -15, -48, -10]);
        assert_eq!(p.class_representative(), mp([3, -15, 48, 10]));
        assert_eq!(mp([0, 5, 0, -1]).class_representative(), mp([0, 5, 0, 1]));
    }

    #[test]
    fn moduli_point_json() {
        let p = mp([3, -15, 48, 10]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"J2":"3","J4":"-15","J6":"48","J10":"10"}"#);
        assert_eq!(serde_json::from_str::<ModuliPoint>(&s).unwrap(), p);
        assert!(serde_json::from_str::<ModuliPoint>(r#"{"J2":"4","J4":"16","J6":"64","J10":"1024"}"#).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn rat() -> impl Strategy<Value = Rational> {
            (-20i64..20, 1i64..6).prop_map(|(n, d)| q(n, d))
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(100))]

            #[test]
            fn moebius_invariance(c in prop::collection::vec(-9i64..9, 7),
                                  a in rat(), b in rat(), cc in rat(), d in rat()) {
                let coeffs: [i64; 7] = c.try_into().unwrap();
                let Ok(f) = BinarySextic::from_i64(coeffs) else { return Ok(()) };
                let Some(g) = f.transform(&a, &b, &cc, &d) else { return Ok(()) };
                let p = igusa_invariants(&f).unwrap();
                prop_assert!(same_moduli(&p, &igusa_invariants(&g).unwrap()));
            }

            #[test]
            fn sign_flip_preserves_class(j in prop::collection::vec(-50i64..50, 4)) {
                prop_assume!(j[3] != 0);
                let p = mp([j[0], j[1], j[2], j[3]]);
                prop_assert!(same_moduli(&p, &p.sign_flip()));
                prop_assert_eq!(absolute_t(&p), absolute_t(&p.sign_flip()));
                let [a, b, c, d] = p.j().clone();
                let k = ModuliPoint::new([a * 7, b * 7i64.pow(2), c * 7i64.pow(3), d * 7i64.pow(5)]).unwrap();
                prop_assert!(same_moduli(&p, &k));
            }

            #[test]
            fn t_and_i_systems_agree(j in prop::collection::vec(-30i64..30, 4)) {
                prop_assume!(j[3] != 0);
                let p = mp([j[0], j[1], j[2], j[3]]);
                let t = absolute_t(&p);
                let i = absolute_i(&p);
                prop_assert_eq!(&i.t1, &num_traits::pow(t.t1.clone(), 6));
                prop_assert_eq!(&i.t2, &num_traits::pow(t.t2.clone(), 3));
                prop_assert_eq!(&i.t3, &num_traits::pow(t.t3.clone(), 2));
            }
        }
    }
}
