//! Point counts and exhaustive enumeration of moduli points by height.
//!
//! The height box for a bound `h` is `|J_k| <= h^k`, and a normalized tuple
//! has height `<= h` exactly when it lies in that box. So enumeration walks
//! the box once and keeps the normalized tuples; no tuple is ever compared
//! in floating point. Work is split into slabs of fixed `J2` (and `J4`) so
//! that a parallel driver can run the slabs independently and merge the
//! sorted results.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::factor::trial_divide_u64;
use crate::igusa::{absolute_t, AbsoluteTriple, ModuliPoint};
use crate::loci::j30_cubic_in_j10;
use crate::wproj::{serde_rational_str, WeightSystem};
use crate::{Error, Rational, Result};

/// Largest enumeration box accepted unless the caller raises it.
pub const DEFAULT_BUDGET: u128 = 10_000_000_000;

const IGUSA_WEIGHTS: [u32; 4] = [2, 4, 6, 10];

/// Upper bound on the number of points of height `<= h` in `WP_w(Q)`:
/// `sum_i h^(q_(n-i)) prod_(j < n-i) (2 h^(q_j) + 1)`.
pub fn count_bound_general(w: &WeightSystem, h: u64) -> BigUint {
    let q = w.weights();
    let n = q.len() - 1;
    let hb = BigUint::from(h);
    let mut total = BigUint::zero();
    for i in 0..=n {
        let top = n - i;
        let mut term = num_traits::pow(hb.clone(), q[top] as usize);
        for &qj in &q[..top] {
            term *= BigUint::from(2u32) * num_traits::pow(hb.clone(), qj as usize) + 1u32;
        }
        total += term;
    }
    total
}

fn horner(coeffs_high_first: &[i64], h: &BigInt) -> BigInt {
    coeffs_high_first.iter().fold(BigInt::zero(), |acc, &c| acc * h + BigInt::from(c))
}

/// `F6(h) = h (8h^10 + 4h^9 + 4h^8 + 6h^7 + 2h^6 + 6h^5 + 3h^4 + 2h^3 + 3h^2 + h + 1)`.
pub fn count_sextic_f(h: u64) -> BigInt {
    let hb = BigInt::from(h);
    &hb * horner(&[8, 4, 4, 6, 2, 6, 3, 2, 3, 1, 1], &hb)
}

/// Shell count `G(h)`, the number of points of height in `(h - 1, h]`.
pub fn shell_count_g(h: u64) -> BigInt {
    horner(&[88, -400, 1176, -2256, 3038, -2862, 1879, -812, 215, -28, 2], &BigInt::from(h))
}

/// Count for `WP(2,4,6,10)`, which is `F6(h^2)`.
pub fn count_even_weights(h: u64) -> BigInt {
    count_sextic_f(h.checked_mul(h).expect("h^2 overflows u64"))
}

/// Counts produced by an enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountReport {
    #[serde(with = "serde_rational_str")]
    pub h: Rational,
    pub strict: bool,
    /// Integer tuples with `J10 != 0` inside the height box.
    pub raw: u128,
    pub normalized: u64,
    /// Distinct moduli classes (distinct absolute invariants).
    pub classes: u64,
}

impl CountReport {
    pub fn is_consistent(&self) -> bool {
        self.classes <= self.normalized && u128::from(self.normalized) <= self.raw
    }
}

/// Coordinate bounds of the height box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeightBox {
    pub h: Rational,
    pub strict: bool,
    /// `max |J_k|` allowed for `k = 2, 4, 6, 10`.
    pub bounds: [i64; 4],
}

impl HeightBox {
    /// `|x| <= h^q` is `|x| <= floor(a^q / b^q)`; `|x| < h^q` is
    /// `|x| <= ceil(a^q / b^q) - 1`.
    pub fn new(h: &Rational, strict: bool) -> Result<Self> {
        if !h.is_positive() {
            return Err(Error::NonPositiveHeight);
        }
        if *h < Rational::one() {
            return Err(Error::InvalidArgument("height bound must be >= 1".into()));
        }
        let a = h.numer().magnitude();
        let b = h.denom().magnitude();
        let mut bounds = [0i64; 4];
        for (slot, &q) in bounds.iter_mut().zip(IGUSA_WEIGHTS.iter()) {
            let aq = num_traits::pow(a.clone(), q as usize);
            let bq = num_traits::pow(b.clone(), q as usize);
            let (fl, rem) = aq.div_rem(&bq);
            let m = if strict {
                if rem.is_zero() {
                    fl - 1u32
                } else {
                    fl
                }
            } else {
                fl
            };
            *slot = m.to_i64().ok_or(Error::BudgetExceeded { candidates: u128::MAX, budget: 0 })?;
        }
        Ok(HeightBox { h: h.clone(), strict, bounds })
    }

    fn side(&self, i: usize) -> u128 {
        2 * self.bounds[i] as u128 + 1
    }

    /// Tuples with `J10 != 0` in the box.
    pub fn candidates(&self) -> u128 {
        self.side(0) * self.side(1) * self.side(2) * (2 * self.bounds[3] as u128)
    }

    /// `(J2, J4, J6)` triples in the box.
    pub fn triples(&self) -> u128 {
        self.side(0) * self.side(1) * self.side(2)
    }

    pub fn check_budget(&self, candidates: u128, budget: u128) -> Result<()> {
        if candidates > budget {
            return Err(Error::BudgetExceeded { candidates, budget });
        }
        Ok(())
    }

    /// Inclusive range of each coordinate.
    pub fn range(&self, i: usize) -> core::ops::RangeInclusive<i64> {
        -self.bounds[i]..=self.bounds[i]
    }
}

fn gcd_i64(a: i64, b: i64) -> u64 {
    a.unsigned_abs().gcd(&b.unsigned_abs())
}

/// `p`-adic valuation of a nonzero machine integer.
fn val(mut x: u64, p: u64) -> u32 {
    let mut v = 0;
    while x.is_multiple_of(p) {
        x /= p;
        v += 1;
    }
    v
}

/// Weighted gcd of a small tuple under weights `(2, 4, 6, 10)`.
pub fn wgcd_small(j: &[i64; 4]) -> u64 {
    let g = j.iter().fold(0u64, |g, &x| g.gcd(&x.unsigned_abs()));
    if g <= 1 {
        return 1;
    }
    let (primes, rest) = trial_divide_u64(g, u64::MAX);
    debug_assert_eq!(rest, 1);
    let mut d = 1u64;
    for (p, _) in primes {
        let e = j
            .iter()
            .zip(IGUSA_WEIGHTS.iter())
            .filter(|(x, _)| **x != 0)
            .map(|(x, &q)| val(x.unsigned_abs(), p) / q)
            .min()
            .unwrap_or(0);
        d *= p.pow(e);
    }
    d
}

/// Normalized representative of a small tuple.
pub fn normalize_small(j: &[i64; 4]) -> [i64; 4] {
    let d = wgcd_small(j) as i64;
    if d == 1 {
        return *j;
    }
    core::array::from_fn(|i| j[i] / d.pow(IGUSA_WEIGHTS[i]))
}

/// Whether a small tuple is normalized, with a fast exit for coprime tuples.
pub fn is_normalized_small(j: &[i64; 4]) -> bool {
    let g = gcd_i64(gcd_i64(j[0], j[1]) as i64, gcd_i64(j[2], j[3]) as i64);
    g == 1 || wgcd_small(j) == 1
}

fn to_moduli(j: &[i64; 4]) -> ModuliPoint {
    ModuliPoint::from_normalized_unchecked(
        crate::wproj::WeightedPoint::new(j.iter().map(|&x| BigInt::from(x)).collect(), WeightSystem::igusa()).expect("J10 != 0"),
    )
}

/// Normalized tuples of one `(J2, J4)` slab of the box, in increasing
/// `(J6, J10)` order.
pub fn enumerate_slab(hb: &HeightBox, j2: i64, j4: i64) -> Vec<[i64; 4]> {
    let mut out = Vec::new();
    let b10 = hb.bounds[3];
    for j6 in hb.range(2) {
        for j10 in -b10..=b10 {
            if j10 == 0 {
                continue;
            }
            let t = [j2, j4, j6, j10];
            if is_normalized_small(&t) {
                out.push(t);
            }
        }
    }
    out
}

/// Result of an enumeration: every normalized tuple and one canonical
/// representative per moduli class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    pub tuples: Vec<ModuliPoint>,
    pub classes: Vec<ModuliPoint>,
    pub report: CountReport,
}

/// Group normalized tuples into moduli classes. Each class is represented
/// by the lexicographically smallest sign-canonical member; output sorted.
pub fn group_classes(tuples: &[ModuliPoint]) -> Vec<ModuliPoint> {
    let mut by_key: BTreeMap<AbsoluteTriple, ModuliPoint> = BTreeMap::new();
    for p in tuples {
        let rep = p.class_representative();
        by_key
            .entry(absolute_t(p))
            .and_modify(|cur| {
                if rep < *cur {
                    *cur = rep.clone();
                }
            })
            .or_insert(rep);
    }
    let mut reps: Vec<ModuliPoint> = by_key.into_values().collect();
    reps.sort();
    reps
}

/// Assemble an [`Enumeration`] from the normalized tuples of every slab.
pub fn finish_enumeration(hb: &HeightBox, mut tuples: Vec<[i64; 4]>) -> Enumeration {
    tuples.sort_unstable();
    tuples.dedup();
    let tuples: Vec<ModuliPoint> = tuples.iter().map(to_moduli).collect();
    let classes = group_classes(&tuples);
    let report = CountReport {
        h: hb.h.clone(),
        strict: hb.strict,
        raw: hb.candidates(),
        normalized: tuples.len() as u64,
        classes: classes.len() as u64,
    };
    Enumeration { tuples, classes, report }
}

/// All moduli points of height `<= h` (or `< h`), sequentially.
pub fn enumerate_moduli(h: &Rational, strict: bool, budget: u128) -> Result<Enumeration> {
    let hb = HeightBox::new(h, strict)?;
    hb.check_budget(hb.candidates(), budget)?;
    let mut all = Vec::new();
    for j2 in hb.range(0) {
        for j4 in hb.range(1) {
            all.extend(enumerate_slab(&hb, j2, j4));
        }
    }
    Ok(finish_enumeration(&hb, all))
}

fn sign_i128(x: i128) -> Ordering {
    x.cmp(&0)
}

/// Cubic `c0 + c1 x + c2 x^2 + c3 x^3` with exact `i128` evaluation.
#[derive(Debug, Clone, Copy)]
struct Cubic([i128; 4]);

impl Cubic {
    fn eval(&self, x: i64) -> Option<i128> {
        let x = x as i128;
        let mut acc = self.0[3];
        for k in (0..3).rev() {
            acc = acc.checked_mul(x)?.checked_add(self.0[k])?;
        }
        Some(acc)
    }

    /// Integers within 2 of each real critical point, or `None` on overflow.
    fn critical_windows(&self) -> Option<Vec<i64>> {
        let [_, c1, c2, c3] = self.0;
        if c3 == 0 {
            return None;
        }
        // P' = 3 c3 x^2 + 2 c2 x + c1, roots (-c2 +- sqrt(c2^2 - 3 c1 c3)) / (3 c3)
        let disc = c2.checked_mul(c2)?.checked_sub(c1.checked_mul(c3)?.checked_mul(3)?)?;
        if disc < 0 {
            return Some(Vec::new());
        }
        let s = disc.sqrt();
        let d = c3.checked_mul(3)?;
        let mut out = Vec::new();
        for n in [(-c2).checked_sub(s)?, (-c2).checked_add(s)?] {
            let k = Integer::div_floor(&n, &d);
            let k = i64::try_from(k.clamp(i64::MIN as i128 / 2, i64::MAX as i128 / 2)).ok()?;
            out.push(k);
        }
        out.sort_unstable();
        Some(out)
    }
}

/// Integer roots of a monotone stretch `[lo, hi]`.
fn monotone_root(p: &Cubic, lo: i64, hi: i64, out: &mut Vec<i64>) -> Option<()> {
    if lo > hi {
        return Some(());
    }
    let (mut lo, mut hi) = (lo, hi);
    let mut slo = sign_i128(p.eval(lo)?);
    let shi = sign_i128(p.eval(hi)?);
    if slo == Ordering::Equal {
        out.push(lo);
        return Some(());
    }
    if shi == Ordering::Equal {
        out.push(hi);
        return Some(());
    }
    if slo == shi {
        return Some(());
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        let sm = sign_i128(p.eval(mid)?);
        if sm == Ordering::Equal {
            out.push(mid);
            return Some(());
        }
        if sm == slo {
            lo = mid;
            slo = sm;
        } else {
            hi = mid;
        }
    }
    Some(())
}

/// Exact integer roots in `[-bound, bound]` of a cubic with nonzero leading
/// coefficient; `None` if `i128` arithmetic would overflow.
fn cubic_integer_roots(c: [i128; 4], bound: i64) -> Option<Vec<i64>> {
    let p = Cubic(c);
    let crit = p.critical_windows()?;
    let mut roots = Vec::new();
    let mut start = -bound;
    for &k in &crit {
        let (w0, w1) = (k.saturating_sub(2).max(-bound), k.saturating_add(2).min(bound));
        if w0 > w1 {
            continue;
        }
        monotone_root(&p, start, w0 - 1, &mut roots)?;
        for x in w0..=w1 {
            if p.eval(x)? == 0 {
                roots.push(x);
            }
        }
        start = start.max(w1 + 1);
    }
    monotone_root(&p, start, bound, &mut roots)?;
    roots.sort_unstable();
    roots.dedup();
    Some(roots)
}

/// Big-integer fallback: same search with exact `BigInt` evaluation.
fn cubic_integer_roots_big(c: [BigInt; 4], bound: i64) -> Vec<i64> {
    let eval = |x: i64| {
        let xb = BigInt::from(x);
        let mut acc = c[3].clone();
        for k in (0..3).rev() {
            acc = acc * &xb + &c[k];
        }
        acc.sign()
    };
    let disc = &c[2] * &c[2] - BigInt::from(3) * &c[1] * &c[3];
    let mut crit: Vec<i64> = Vec::new();
    if !disc.is_negative() {
        let s = disc.sqrt();
        let d = BigInt::from(3) * &c[3];
        for n in [-&c[2] - &s, -&c[2] + &s] {
            let k = n.div_floor(&d);
            let k = k.clamp(BigInt::from(-bound - 3), BigInt::from(bound + 3));
            crit.push(k.to_i64().expect("clamped"));
        }
        crit.sort_unstable();
    }
    let mut roots = Vec::new();
    let monotone = |lo: i64, hi: i64, roots: &mut Vec<i64>| {
        if lo > hi {
            return;
        }
        let (mut lo, mut hi) = (lo, hi);
        let mut slo = eval(lo);
        let shi = eval(hi);
        if slo == num_bigint::Sign::NoSign {
            roots.push(lo);
            return;
        }
        if shi == num_bigint::Sign::NoSign {
            roots.push(hi);
            return;
        }
        if slo == shi {
            return;
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            let sm = eval(mid);
            if sm == num_bigint::Sign::NoSign {
                roots.push(mid);
                return;
            }
            if sm == slo {
                lo = mid;
                slo = sm;
            } else {
                hi = mid;
            }
        }
    };
    let mut start = -bound;
    for &k in &crit {
        let (w0, w1) = ((k - 2).max(-bound), (k + 2).min(bound));
        if w0 > w1 {
            continue;
        }
        monotone(start, w0 - 1, &mut roots);
        for x in w0..=w1 {
            if eval(x) == num_bigint::Sign::NoSign {
                roots.push(x);
            }
        }
        start = start.max(w1 + 1);
    }
    monotone(start, bound, &mut roots);
    roots.sort_unstable();
    roots.dedup();
    roots
}

/// `J10` values in `[-b10, b10] \ {0}` with `J30(J2, J4, J6, J10) = 0`.
pub fn l2_roots_in_j10(j2: i64, j4: i64, j6: i64, b10: i64) -> Vec<i64> {
    let roots = match j30_cubic_in_j10(j2, j4, j6).and_then(|c| cubic_integer_roots(c, b10)) {
        Some(r) => r,
        None => {
            let j = [BigInt::from(j2), BigInt::from(j4), BigInt::from(j6)];
            cubic_integer_roots_big(j30_cubic_big(&j), b10)
        }
    };
    roots.into_iter().filter(|&r| r != 0).collect()
}

fn j30_cubic_big(j: &[BigInt; 3]) -> [BigInt; 4] {
    let mut c: [BigInt; 4] = Default::default();
    for (k, [e2, e4, e6, e10]) in crate::loci::J30_TERMS.iter() {
        c[*e10 as usize] += BigInt::from(*k)
            * num_traits::pow(j[0].clone(), *e2 as usize)
            * num_traits::pow(j[1].clone(), *e4 as usize)
            * num_traits::pow(j[2].clone(), *e6 as usize);
    }
    c
}

/// Normalized `L2` tuples of one `(J2, J4)` slab.
pub fn scan_l2_slab(hb: &HeightBox, j2: i64, j4: i64) -> Vec<[i64; 4]> {
    let mut out = Vec::new();
    for j6 in hb.range(2) {
        for r in l2_roots_in_j10(j2, j4, j6, hb.bounds[3]) {
            let t = normalize_small(&[j2, j4, j6, r]);
            out.push(t);
        }
    }
    out
}

/// All normalized tuples of `L2` with height `<= h` (or `< h`),
/// sequentially. `budget` bounds the number of cubics solved.
pub fn scan_l2(h: &Rational, strict: bool, budget: u128) -> Result<Enumeration> {
    let hb = HeightBox::new(h, strict)?;
    hb.check_budget(hb.triples(), budget)?;
    let mut all = Vec::new();
    for j2 in hb.range(0) {
        for j4 in hb.range(1) {
            all.extend(scan_l2_slab(&hb, j2, j4));
        }
    }
    Ok(finish_enumeration(&hb, all))
}
