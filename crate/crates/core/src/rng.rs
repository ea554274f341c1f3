//! Seeded random streams.
//!
//! Every random draw in the crate comes from a ChaCha stream selected by
//! `(seed, stream)`, so work split across threads by stream index produces
//! the same values no matter how it is scheduled.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::Rational;

/// Independent stream number `stream` of the generator seeded by `seed`.
pub fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Bounds for drawing `p/q` with `|p| <= num_bound` and `1 <= q <= den_bound`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct RationalRange {
    pub num_bound: i64,
    pub den_bound: i64,
}

impl RationalRange {
    pub const fn new(num_bound: i64, den_bound: i64) -> Self {
        RationalRange { num_bound, den_bound }
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> Rational {
        let p = rng.gen_range(-self.num_bound..=self.num_bound);
        let q = rng.gen_range(1..=self.den_bound.max(1));
        Rational::new(BigInt::from(p), BigInt::from(q))
    }
}

impl Default for RationalRange {
    fn default() -> Self {
        RationalRange { num_bound: 100, den_bound: 100 }
    }
}
