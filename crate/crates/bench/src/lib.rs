//! Benchmark inputs shared by the criterion suites.

use lumpkit_core::generators::random::{random_chain, RandomChainConfig};
use lumpkit_core::{gen_coupon, gen_hypercube, Chain, Exact, Targets, Weight};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Instance = (Chain<Exact>, Targets);

/// Coupon collector with `n` equally likely objects (`2^n` states).
pub fn uniform_coupon(n: usize) -> Instance {
    let probs = vec![Exact::from_ratio(1, n as i64); n];
    gen_coupon(&probs).expect("valid coupon parameters")
}

/// Hypercube walk of dimension `d` with two corner targets.
pub fn hypercube(d: usize) -> Instance {
    gen_hypercube(d, false).expect("valid dimension")
}

/// A seeded random chain with a planted lumping.
pub fn planted(states: usize, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let config = RandomChainConfig {
        states,
        planted: true,
        ..RandomChainConfig::default()
    };
    random_chain(&mut rng, &config)
}
