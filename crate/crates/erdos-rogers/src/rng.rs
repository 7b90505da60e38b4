//! Seed derivation and exact Bernoulli sampling.
//!
//! Every random choice in the pipeline draws from a [`ChaCha8Rng`] whose seed
//! is derived from a caller-supplied master seed plus a purpose tag and an
//! index. This makes the streams independent of iteration or scheduling
//! order: the class-7 membership stream is the same whether classes are
//! sampled sequentially or in parallel, and trial 13 of a probe is the same
//! regardless of how trials were distributed over threads.

use num::rational::BigRational;
use num::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Purpose tags keeping unrelated streams disjoint under one master seed.
pub mod purpose {
    /// Per-class membership and part assignment in stage-G0 sampling.
    pub const CLASS: u64 = 1;
    /// Edge birth order for the second deletion pass.
    pub const BIRTHS: u64 = 2;
    /// Per-trial subset draws in the K_s probe.
    pub const PROBE: u64 = 3;
    /// Subset draw for the per-run census diagnostics.
    pub const CENSUS_SUBSET: u64 = 4;
    /// Random scheme generation for property tests.
    pub const SCHEME: u64 = 5;
}

/// SplitMix64 finalizer; a well-mixed 64-bit permutation.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives an independent stream seed from a master seed and a stream id.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    splitmix64(splitmix64(master) ^ splitmix64(stream ^ 0xA076_1D64_78BD_642F))
}

/// RNG for stream `index` of the given purpose under `master`.
pub fn stream_rng(master: u64, purpose: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(derive_seed(master, purpose), index))
}

/// Draws a Bernoulli variable with exact rational success probability.
///
/// Compares a lazily generated uniform value in [0, 1) with `p` one binary
/// digit at a time, so no precision is lost for any rational `p`. Expected
/// number of random bits consumed is 2.
pub fn exact_bernoulli<R: Rng>(rng: &mut R, p: &BigRational) -> bool {
    if p <= &BigRational::zero() {
        return false;
    }
    if p >= &BigRational::one() {
        return true;
    }
    let one = BigRational::one();
    let mut tail = p.clone();
    loop {
        tail *= crate::ratio::int(2);
        let p_bit = if tail >= one {
            tail -= &one;
            true
        } else {
            false
        };
        let u_bit = rng.random::<bool>();
        if u_bit != p_bit {
            // First differing digit decides: u < p exactly when u's digit
            // is 0 where p's is 1.
            return p_bit;
        }
        if tail.is_zero() {
            // p's remaining expansion is all zeros, so u >= p from here on.
            return false;
        }
    }
}
