//! Random exact-rational test chains, optionally with a planted lumping, and
//! float perturbation of exact chains.

use num_rational::BigRational;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

use crate::chain::{Chain, Targets};
use crate::error::Result;
use crate::numeric::Weight;

#[derive(Debug, Clone)]
pub struct RandomChainConfig {
    pub states: usize,
    /// Upper bound on the number of target classes (at least one is made).
    pub max_targets: usize,
    /// Every row is written over a common denominator at most this large.
    pub max_denominator: u32,
    /// Build by expanding a smaller random chain so a nontrivial lumping exists.
    pub planted: bool,
}

impl Default for RandomChainConfig {
    fn default() -> Self {
        RandomChainConfig {
            states: 8,
            max_targets: 2,
            max_denominator: 64,
            planted: false,
        }
    }
}

/// Splits `total` into `parts` positive integers (requires `total >= parts`).
fn composition<R: Rng>(rng: &mut R, total: u32, parts: usize) -> Vec<u32> {
    debug_assert!(parts >= 1 && total as usize >= parts);
    let mut cuts: Vec<u32> = (1..total).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<u32> = cuts.into_iter().take(parts - 1).collect();
    cuts.sort_unstable();
    let mut out = Vec::with_capacity(parts);
    let mut prev = 0;
    for c in cuts.into_iter().chain(std::iter::once(total)) {
        out.push(c - prev);
        prev = c;
    }
    out
}

/// Random row over `support` with common denominator in `support.len()..=max_den`.
fn random_row<R: Rng>(rng: &mut R, support: &[usize], max_den: u32) -> Vec<(usize, BigRational)> {
    let k = support.len() as u32;
    let den = rng.random_range(k..=max_den.max(k));
    composition(rng, den, support.len())
        .into_iter()
        .zip(support)
        .map(|(num, &to)| (to, BigRational::from_ratio(num as i64, den as i64)))
        .collect()
}

fn pick<R: Rng>(rng: &mut R, from: &[usize], max: usize) -> Vec<usize> {
    let count = rng.random_range(1..=max.min(from.len()).max(1));
    let mut chosen: Vec<usize> = from.choose_multiple(rng, count).copied().collect();
    chosen.sort_unstable();
    chosen
}

/// Draws a valid chain with closed, disjoint target classes.
pub fn random_chain<R: Rng>(
    rng: &mut R,
    config: &RandomChainConfig,
) -> (Chain<BigRational>, Targets) {
    let n = config.states.max(2);
    if config.planted && n >= 4 {
        planted_chain(rng, config)
    } else {
        plain_chain(rng, n, config)
    }
}

fn class_names(k: usize) -> impl Iterator<Item = String> {
    (1..=k).map(|i| format!("T{i}"))
}

fn plain_chain<R: Rng>(
    rng: &mut R,
    n: usize,
    config: &RandomChainConfig,
) -> (Chain<BigRational>, Targets) {
    let max_k = config.max_targets.clamp(1, n - 1);
    let k = rng.random_range(1..=max_k);
    let mut ids: Vec<usize> = (0..n).collect();
    ids.shuffle(rng);
    // At most n - 1 target states, at most two per class.
    let mut classes: Vec<Vec<usize>> = Vec::with_capacity(k);
    let mut cursor = 0;
    for c in 0..k {
        let room = n - 1 - cursor - (k - c - 1);
        let size = rng.random_range(1..=room.clamp(1, 2));
        let mut class = ids[cursor..cursor + size].to_vec();
        class.sort_unstable();
        classes.push(class);
        cursor += size;
    }
    let mut owner = vec![None; n];
    for (c, class) in classes.iter().enumerate() {
        for &s in class {
            owner[s] = Some(c);
        }
    }
    let all: Vec<usize> = (0..n).collect();
    let rows = (0..n)
        .map(|s| match owner[s] {
            Some(c) => {
                let support = pick(rng, &classes[c], classes[c].len());
                random_row(rng, &support, config.max_denominator.min(8))
            }
            None => {
                let support = pick(rng, &all, 6);
                random_row(rng, &support, config.max_denominator)
            }
        })
        .collect();
    let labels = (0..n).map(|i| format!("s{i}")).collect();
    let chain = Chain::from_rows(labels, rows).expect("generated rows are in range");
    (chain, Targets::new(class_names(k).zip(classes)))
}

/// Expands a random chain on `m < n` blocks: every state of block `b` sends
/// exactly the block chain's mass `Q(b, c)` into block `c`, spread at random
/// over `c`'s members.
fn planted_chain<R: Rng>(rng: &mut R, config: &RandomChainConfig) -> (Chain<BigRational>, Targets) {
    let n = config.states;
    let blocks_count = rng.random_range(2..=(n / 2).max(2));
    let k = rng.random_range(1..=config.max_targets.clamp(1, blocks_count - 1));

    // Block sizes: targets 1..=2, the rest share what is left (each nonempty).
    let mut sizes = vec![1usize; blocks_count];
    let mut left = n - blocks_count;
    for size in sizes.iter_mut().take(k) {
        if left > 0 && rng.random_bool(0.5) {
            *size += 1;
            left -= 1;
        }
    }
    while left > 0 {
        let b = rng.random_range(k..blocks_count);
        sizes[b] += 1;
        left -= 1;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut members: Vec<Vec<usize>> = Vec::with_capacity(blocks_count);
    let mut cursor = 0;
    for &size in &sizes {
        let mut block = perm[cursor..cursor + size].to_vec();
        block.sort_unstable();
        members.push(block);
        cursor += size;
    }

    let block_ids: Vec<usize> = (0..blocks_count).collect();
    let mut rows = vec![Vec::new(); n];
    for b in 0..blocks_count {
        if b < k {
            for &s in &members[b] {
                let support = pick(rng, &members[b], members[b].len());
                rows[s] = random_row(rng, &support, 8);
            }
            continue;
        }
        let den = (config.max_denominator / 4).max(2);
        let support = pick(rng, &block_ids, 4);
        let quotient_row = random_row(rng, &support, den);
        for &s in &members[b] {
            let scale = rng.random_range(1..=4u32);
            let mut row = Vec::new();
            for (c, mass) in &quotient_row {
                // mass = a/d with d <= max_den/4, rewritten as (a*scale)/(d*scale).
                let units: u32 = (mass.numer() * scale).try_into().expect("small numerator");
                let den = mass.denom() * scale;
                let width = rng.random_range(1..=members[*c].len().min(units as usize));
                let spread = pick_exact(rng, &members[*c], width);
                for (part, &to) in composition(rng, units, width).into_iter().zip(&spread) {
                    row.push((to, BigRational::new(part.into(), den.clone())));
                }
            }
            rows[s] = row;
        }
    }
    let labels = (0..n).map(|i| format!("s{i}")).collect();
    let chain = Chain::from_rows(labels, rows).expect("generated rows are in range");
    let classes = members.into_iter().take(k);
    (chain, Targets::new(class_names(k).zip(classes)))
}

fn pick_exact<R: Rng>(rng: &mut R, from: &[usize], count: usize) -> Vec<usize> {
    let mut chosen: Vec<usize> = from.choose_multiple(rng, count).copied().collect();
    chosen.sort_unstable();
    chosen
}

/// Float copy of an exact chain with every entry shifted by uniform noise of
/// magnitude below `magnitude`, rows renormalized.
pub fn perturb<R: Rng>(
    rng: &mut R,
    chain: &Chain<BigRational>,
    magnitude: f64,
) -> Result<Chain<f64>> {
    let rows = chain
        .rows()
        .iter()
        .map(|row| {
            let noisy: Vec<(usize, f64)> = row
                .iter()
                .map(|(to, p)| {
                    let noise = if magnitude > 0.0 {
                        rng.random_range(-magnitude..magnitude)
                    } else {
                        0.0
                    };
                    (*to, (p.to_f64() + noise).max(f64::MIN_POSITIVE))
                })
                .collect();
            let total: f64 = noisy.iter().map(|e| e.1).sum();
            noisy.into_iter().map(|(to, p)| (to, p / total)).collect()
        })
        .collect();
    Chain::from_rows(chain.labels().to_vec(), rows)
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::chain::validate_chain;
    use crate::numeric::DEFAULT_EPSILON;
    use crate::quotient::verify_lumpability;
    use crate::refine::compress;

    #[test]
    fn compositions_are_positive() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for total in 1..20u32 {
            for parts in 1..=total as usize {
                let c = composition(&mut rng, total, parts);
                assert_eq!(c.len(), parts);
                assert!(c.iter().all(|&x| x > 0));
                assert_eq!(c.iter().sum::<u32>(), total);
            }
        }
    }

    #[test]
    fn random_chains_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for i in 0..300 {
            let config = RandomChainConfig {
                states: 2 + i % 40,
                max_targets: 1 + i % 3,
                planted: i % 2 == 0,
                ..Default::default()
            };
            let (chain, targets) = random_chain(&mut rng, &config);
            let report = validate_chain(&chain, &targets);
            assert!(report.is_valid(), "instance {i}: {report}");
            assert_eq!(chain.len(), config.states.max(2));
            for row in chain.rows() {
                for (_, p) in row {
                    assert!(*p.denom() <= 64u32.into());
                }
            }
        }
    }

    #[test]
    fn planted_chains_compress() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut reduced = 0;
        for _ in 0..50 {
            let config = RandomChainConfig {
                states: 20,
                planted: true,
                ..Default::default()
            };
            let (chain, targets) = random_chain(&mut rng, &config);
            let c = compress(&chain, &targets).unwrap();
            assert!(verify_lumpability(
                &chain,
                &c.partition,
                &targets,
                DEFAULT_EPSILON
            ));
            if c.complexity() <= 10 {
                reduced += 1;
            }
        }
        assert_eq!(reduced, 50);
    }

    #[test]
    fn perturbation_is_small_and_stochastic() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (chain, targets) = random_chain(&mut rng, &RandomChainConfig::default());
        let noisy = perturb(&mut rng, &chain, 1e-12).unwrap();
        assert!(validate_chain(&noisy, &targets).is_valid());
        for (a, b) in chain.rows().iter().zip(noisy.rows()) {
            for ((ja, pa), (jb, pb)) in a.iter().zip(b) {
                assert_eq!(ja, jb);
                assert!((pa.to_f64() - pb).abs() < 1e-11);
            }
        }
    }
}
