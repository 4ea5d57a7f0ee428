//! Seeded random streams.
//!
//! Every stochastic routine takes an explicit `u64` seed and draws from a
//! ChaCha8 stream (`rand_chacha::ChaCha8Rng::seed_from_u64`). The stream is
//! counter based and portable, so a given seed produces bit-identical output
//! on every platform. Parallel tasks derive their own seeds with
//! [`derive_seed`] rather than sharing a generator.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

pub type Stream = ChaCha8Rng;

pub fn stream(seed: u64) -> Stream {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Mixes a task index into a base seed (SplitMix64 finalizer).
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform draw in `[0, 1)`.
#[inline]
pub fn uniform(rng: &mut Stream) -> f64 {
    rng.gen::<f64>()
}

/// Inverse-CDF sampler over a finite set of nonnegative weights.
#[derive(Debug, Clone)]
pub struct Categorical {
    cumulative: Vec<f64>,
}

impl Categorical {
    pub fn new(weights: &[f64]) -> Result<Self> {
        let mut acc = 0.0;
        let mut cumulative = Vec::with_capacity(weights.len());
        for &w in weights {
            if !(w >= 0.0) || !w.is_finite() {
                return Err(Error::InvalidParameter(alloc::format!(
                    "sampling weight {w} is negative or not finite"
                )));
            }
            acc += w;
            cumulative.push(acc);
        }
        if acc <= 0.0 {
            return Err(Error::DegenerateInput("all sampling weights are zero".into()));
        }
        for c in cumulative.iter_mut() {
            *c /= acc;
        }
        Ok(Self { cumulative })
    }

    pub fn len(&self) -> usize {
        self.cumulative.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cumulative.is_empty()
    }

    pub fn sample(&self, rng: &mut Stream) -> usize {
        let u = uniform(rng);
        // First entry whose cumulative mass exceeds u; zero-weight entries
        // never satisfy this because they repeat the previous cumulative value.
        let idx = self.cumulative.partition_point(|&c| c <= u);
        if idx < self.cumulative.len() {
            idx
        } else {
            let last = self.cumulative[self.cumulative.len() - 1];
            self.cumulative.partition_point(|&c| c < last)
        }
    }
}
