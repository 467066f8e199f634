use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::InitialDistribution;
use crate::chain::{validate_chain, Chain, Targets};
use crate::error::{Error, Result};
use crate::numeric::Weight;

/// Empirical cumulative reach frequencies from simulated trajectories.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmpiricalReport {
    pub class_names: Vec<String>,
    pub trials: u64,
    /// `hits[i][m]`: trajectories that entered class `i` at or before step `m`.
    pub hits: Vec<Vec<u64>>,
}

impl EmpiricalReport {
    pub fn frequency(&self, class: usize, m: usize) -> f64 {
        self.hits[class][m] as f64 / self.trials as f64
    }

    /// Binomial standard error of [`frequency`](Self::frequency).
    pub fn std_error(&self, class: usize, m: usize) -> f64 {
        let f = self.frequency(class, m);
        (f * (1.0 - f) / self.trials as f64).sqrt()
    }
}

/// Cumulative row distribution for inverse-CDF sampling.
fn cumulative<W: Weight>(entries: &[(usize, W)]) -> Vec<(usize, f64)> {
    let mut acc = 0.0;
    entries
        .iter()
        .map(|(to, p)| {
            acc += p.to_f64();
            (*to, acc)
        })
        .collect()
}

fn sample(cdf: &[(usize, f64)], u: f64) -> usize {
    cdf.iter()
        .find(|(_, c)| u < *c)
        .or(cdf.last())
        .map(|(s, _)| *s)
        .expect("rows are nonempty")
}

/// Samples `trials` trajectories of `tau` steps starting from `mu`.
///
/// Trial `t` draws from ChaCha8 seeded with `seed_from_u64(seed)` on stream
/// `t`: one uniform `f64` for the start state, then one per step. Trials are
/// independent of scheduling, so the report is identical for a fixed seed
/// whether run in parallel or not.
pub fn simulate<W: Weight>(
    chain: &Chain<W>,
    targets: &Targets,
    mu: &InitialDistribution<W>,
    tau: usize,
    trials: u64,
    seed: u64,
) -> Result<EmpiricalReport> {
    if trials == 0 {
        return Err(Error::param("trials must be at least 1"));
    }
    validate_chain(chain, targets).into_result()?;
    let owner = targets.class_of(chain.len());
    let rows: Vec<Vec<(usize, f64)>> = chain.rows().iter().map(|r| cumulative(r)).collect();
    let start = cumulative(mu.entries());
    let k = targets.len();

    let first_hits = |trial: u64| -> Vec<Option<usize>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        let mut state = sample(&start, rng.random::<f64>());
        let mut hit = vec![None; k];
        for m in 0..=tau {
            if let Some(c) = owner[state] {
                hit[c].get_or_insert(m);
            }
            if m < tau {
                state = sample(&rows[state], rng.random::<f64>());
            }
        }
        hit
    };

    let first: Vec<Vec<u64>> = (0..trials)
        .into_par_iter()
        .fold(
            || vec![vec![0u64; tau + 1]; k],
            |mut acc, t| {
                for (c, h) in first_hits(t).into_iter().enumerate() {
                    if let Some(m) = h {
                        acc[c][m] += 1;
                    }
                }
                acc
            },
        )
        .reduce(
            || vec![vec![0u64; tau + 1]; k],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    for (u, v) in x.iter_mut().zip(y) {
                        *u += v;
                    }
                }
                a
            },
        );

    let hits = first
        .into_iter()
        .map(|per_step| {
            per_step
                .into_iter()
                .scan(0u64, |acc, x| {
                    *acc += x;
                    Some(*acc)
                })
                .collect()
        })
        .collect();
    Ok(EmpiricalReport {
        class_names: targets.classes().iter().map(|c| c.name.clone()).collect(),
        trials,
        hits,
    })
}

#[cfg(test)]
mod tests {
    use num_rational::BigRational;

    use super::*;
    use crate::analysis::reach_by_time;
    use crate::generators::gen_hypercube;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::from_ratio(n, d)
    }

    #[test]
    fn immediate_absorption() {
        let chain = Chain::from_rows(
            vec!["s".into(), "t".into()],
            vec![vec![(1, q(1, 1))], vec![(1, q(1, 1))]],
        )
        .unwrap();
        let targets = Targets::single("T", vec![1]);
        let mu = InitialDistribution::point(2, 0).unwrap();
        let r = simulate(&chain, &targets, &mu, 5, 100, 9).unwrap();
        assert_eq!(r.hits[0][0], 0);
        assert!(r.hits[0][1..].iter().all(|&h| h == 100));
    }

    #[test]
    fn seeded_runs_repeat() {
        let (c, t) = gen_hypercube::<BigRational>(3, false).unwrap();
        let mu = InitialDistribution::uniform(8).unwrap();
        let a = simulate(&c, &t, &mu, 10, 2_000, 42).unwrap();
        let b = simulate(&c, &t, &mu, 10, 2_000, 42).unwrap();
        assert_eq!(a, b);
        let other = simulate(&c, &t, &mu, 10, 2_000, 43).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn cube_one_step_frequency() {
        let (c, t) = gen_hypercube::<BigRational>(3, false).unwrap();
        let start = c.state_of("(1,0,0)").unwrap();
        let mu = InitialDistribution::point(8, start).unwrap();
        let trials = 100_000;
        let r = simulate(&c, &t, &mu, 1, trials, 1).unwrap();
        let exact = reach_by_time(&c, &t, &mu, 1).unwrap();
        let p = exact.series[0][1].to_f64();
        let se = (p * (1.0 - p) / trials as f64).sqrt();
        assert!((r.frequency(0, 1) - p).abs() <= 3.0 * se);
        assert_eq!(r.hits[1][1], 0);
    }

    #[test]
    fn zero_trials_rejected() {
        let (c, t) = gen_hypercube::<f64>(2, false).unwrap();
        let mu = InitialDistribution::point(4, 1).unwrap();
        assert!(simulate(&c, &t, &mu, 3, 0, 0).is_err());
    }
}
