//! Reproducible random rationals.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact::Rational;

/// Bound on numerators and denominators of sampled values.
pub const SAMPLE_BOUND: i64 = 10_000;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `p/q` with `p` uniform in `[-B, B]` and `q` uniform in `[1, B]`.
pub fn random_rational<R: Rng>(rng: &mut R) -> Rational {
    let p = rng.gen_range(-SAMPLE_BOUND..=SAMPLE_BOUND);
    let q = rng.gen_range(1..=SAMPLE_BOUND);
    Rational::new(BigInt::from(p), BigInt::from(q))
}
