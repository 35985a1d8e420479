//! Shared fixtures for the criterion benches.

use pqdtw_core::TimeSeries;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seeded random walks with uniform steps in [-1, 1).
pub fn walks(n: usize, len: usize, seed: u64) -> Vec<TimeSeries> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let mut acc = 0.0;
            let v = (0..len)
                .map(|_| {
                    acc += rng.random_range(-1.0..1.0);
                    acc
                })
                .collect();
            TimeSeries::new(v).unwrap()
        })
        .collect()
}
