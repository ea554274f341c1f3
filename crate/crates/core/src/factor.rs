//! Integer factorization for weighted gcds.
//!
//! Trial division up to a configurable limit, then Miller-Rabin and
//! Pollard-Brent rho on what is left. Rho runs under an iteration budget;
//! when the budget runs out the remaining composite is returned unsplit and
//! the caller decides what that means (weighted gcds become lower bounds).

use alloc::vec::Vec;
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// Limits for [`factorize`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorBudget {
    /// Trial-divide by every integer up to this bound.
    pub trial_limit: u64,
    /// Total number of rho iterations allowed across all splits.
    pub rho_iterations: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget { trial_limit: 1_000_000, rho_iterations: 2_000_000 }
    }
}

/// Result of a (possibly partial) factorization.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization {
    /// Prime factors with multiplicity, sorted by prime.
    pub primes: Vec<(BigUint, u32)>,
    /// Composite cofactors the budget could not split (coprime to `primes`).
    pub unsplit: Vec<BigUint>,
}

impl Factorization {
    pub fn is_complete(&self) -> bool {
        self.unsplit.is_empty()
    }
}

/// Factor `n`. `n = 0` and `n = 1` give an empty factorization.
pub fn factorize(n: &BigUint, budget: &FactorBudget) -> Factorization {
    let mut out = Factorization::default();
    if n <= &BigUint::one() {
        return out;
    }
    let mut rest = n.clone();

    if let Some(small) = rest.to_u64() {
        let (primes, left) = trial_divide_u64(small, budget.trial_limit);
        out.primes.extend(primes.into_iter().map(|(p, e)| (BigUint::from(p), e)));
        rest = BigUint::from(left);
    } else {
        let mut d = 2u64;
        while d <= budget.trial_limit {
            let dd = BigUint::from(d);
            if &dd * &dd > rest {
                break;
            }
            let mut e = 0u32;
            loop {
                let (q, r) = rest.div_rem(&dd);
                if !r.is_zero() {
                    break;
                }
                rest = q;
                e += 1;
            }
            if e > 0 {
                out.primes.push((dd, e));
            }
            d += if d == 2 { 1 } else { 2 };
        }
    }

    if rest > BigUint::one() {
        let trial_sq = BigUint::from(budget.trial_limit) * BigUint::from(budget.trial_limit);
        if rest <= trial_sq || is_probable_prime(&rest) {
            push_prime(&mut out.primes, rest, 1);
        } else {
            let mut remaining = budget.rho_iterations;
            let mut stack = alloc::vec![rest];
            while let Some(m) = stack.pop() {
                if is_probable_prime(&m) {
                    push_prime(&mut out.primes, m, 1);
                    continue;
                }
                match pollard_brent(&m, &mut remaining) {
                    Some(d) => {
                        let q = &m / &d;
                        stack.push(d);
                        stack.push(q);
                    }
                    None => out.unsplit.push(m),
                }
            }
        }
    }
    out.primes.sort();
    let mut merged: Vec<(BigUint, u32)> = Vec::with_capacity(out.primes.len());
    for (p, e) in out.primes.drain(..) {
        match merged.last_mut() {
            Some((q, f)) if *q == p => *f += e,
            _ => merged.push((p, e)),
        }
    }
    out.primes = merged;
    out
}

fn push_prime(primes: &mut Vec<(BigUint, u32)>, p: BigUint, e: u32) {
    primes.push((p, e));
}

/// Trial division of a machine integer. Returns the prime powers found and
/// the cofactor left over (1, or a number with no factor `<= limit`).
pub fn trial_divide_u64(mut n: u64, limit: u64) -> (Vec<(u64, u32)>, u64) {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d <= limit && d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 && (d.saturating_mul(d) > n) {
        out.push((n, 1));
        n = 1;
    }
    (out, n)
}

const MR_BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Miller-Rabin with the first thirteen prime bases. Deterministic below
/// 3.3 * 10^24, probabilistic above.
pub fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if n < &two {
        return false;
    }
    for &b in MR_BASES.iter() {
        let b = BigUint::from(b);
        if *n == b {
            return true;
        }
        if (n % &b).is_zero() {
            return false;
        }
    }
    let n_minus_one = n - 1u32;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    'witness: for &b in MR_BASES.iter() {
        let mut x = BigUint::from(b).modpow(&d, n);
        if x.is_one() || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent's variant of Pollard rho. Returns a nontrivial factor of the odd
/// composite `n`, or `None` once `remaining` iterations are used up.
fn pollard_brent(n: &BigUint, remaining: &mut u64) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    let one = BigUint::one();
    for c in 1u32.. {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r = 1u64;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        const BLOCK: u64 = 64;
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                for _ in 0..BLOCK.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += BLOCK;
                let spent = BLOCK.min(r);
                if *remaining < spent {
                    *remaining = 0;
                    return None;
                }
                *remaining -= spent;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g > one {
                    break;
                }
            }
        }
        if &g != n {
            return Some(g);
        }
        // unlucky cycle, retry with another constant
        if *remaining == 0 {
            return None;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn product(f: &Factorization) -> BigUint {
        let mut acc = BigUint::one();
        for (p, e) in &f.primes {
            acc *= p.pow(*e);
        }
        for m in &f.unsplit {
            acc *= m;
        }
        acc
    }

    #[test]
    fn small_numbers() {
        let f = factorize(&BigUint::from(360u32), &FactorBudget::default());
        let got: Vec<(u64, u32)> = f.primes.iter().map(|(p, e)| (p.to_u64().unwrap(), *e)).collect();
        assert_eq!(got, alloc::vec![(2, 3), (3, 2), (5, 1)]);
        assert!(f.is_complete());
        assert!(factorize(&BigUint::one(), &FactorBudget::default()).primes.is_empty());
    }

    #[test]
    fn rho_splits_semiprime_beyond_trial_range() {
        // 1000003 * 1000033, both above a trial limit of 1000
        let p = BigUint::from(1_000_003u64);
        let q = BigUint::from(1_000_033u64);
        let n = &p * &q;
        let budget = FactorBudget { trial_limit: 1000, rho_iterations: 10_000_000 };
        let f = factorize(&n, &budget);
        assert!(f.is_complete());
        assert_eq!(f.primes, alloc::vec![(p, 1), (q, 1)]);
    }

    #[test]
    fn exhausted_budget_leaves_cofactor() {
        let p = BigUint::from(1_000_000_007u64);
        let q = BigUint::from(998_244_353u64);
        let n = &p * &q * BigUint::from(12u32);
        let budget = FactorBudget { trial_limit: 100, rho_iterations: 1 };
        let f = factorize(&n, &budget);
        assert!(!f.is_complete());
        assert_eq!(product(&f), n);
    }

    #[test]
    fn primality() {
        assert!(is_probable_prime(&BigUint::from(1_000_000_007u64)));
        assert!(!is_probable_prime(&BigUint::from(1_000_000_007u64 * 3)));
        // Carmichael number
        assert!(!is_probable_prime(&BigUint::from(561u32)));
        let m61 = (BigUint::one() << 61u32) - 1u32;
        assert!(is_probable_prime(&m61));
    }

    #[test]
    fn trial_u64_cofactor() {
        let (f, rest) = trial_divide_u64(2 * 2 * 7 * 1_000_003, 100);
        assert_eq!(f, alloc::vec![(2, 2), (7, 1)]);
        assert_eq!(rest, 1_000_003);
    }
}
