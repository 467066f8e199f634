use crate::chain::{validate_chain, Chain, Targets};
use crate::error::{Error, Result};
use crate::numeric::Weight;
use crate::partition::Partition;
use crate::quotient::build_quotient_unchecked;

/// Sparse starting distribution over states.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialDistribution<W> {
    entries: Vec<(usize, W)>,
}

impl<W: Weight> InitialDistribution<W> {
    /// Checks masses are nonnegative, in range, and sum to one.
    pub fn new(states: usize, entries: Vec<(usize, W)>) -> Result<Self> {
        let mut total = W::zero();
        for (s, p) in &entries {
            if *s >= states {
                return Err(Error::StateOutOfRange {
                    state: *s,
                    len: states,
                });
            }
            if p.total_cmp(&W::zero()).is_lt() {
                return Err(Error::param(format!(
                    "negative initial mass {p} at state {s}"
                )));
            }
            total.add_ref(p);
        }
        if !total.is_unit_sum() {
            return Err(Error::param(format!(
                "initial distribution sums to {total}"
            )));
        }
        let mut entries: Vec<(usize, W)> =
            entries.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        entries.sort_by_key(|e| e.0);
        Ok(InitialDistribution { entries })
    }

    pub fn point(states: usize, state: usize) -> Result<Self> {
        Self::new(states, vec![(state, W::one())])
    }

    pub fn uniform(states: usize) -> Result<Self> {
        if states == 0 {
            return Err(Error::param("uniform distribution over no states"));
        }
        let mass = W::from_ratio(1, states as i64);
        Self::new(states, (0..states).map(|s| (s, mass.clone())).collect())
    }

    pub fn entries(&self) -> &[(usize, W)] {
        &self.entries
    }
}

/// Cumulative probability of having entered each target class, per horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct ReachReport<W> {
    pub class_names: Vec<String>,
    /// `series[i][m]`: probability of being in class `i` by step `m`.
    pub series: Vec<Vec<W>>,
}

impl<W: Weight> ReachReport<W> {
    pub fn horizon(&self) -> usize {
        self.series.first().map_or(0, |s| s.len().saturating_sub(1))
    }
}

/// Pushes `mu` forward `tau` steps, recording the mass on each target class.
///
/// Targets are closed, so mass on `T_i` at step `m` equals the probability of
/// having reached `T_i` by step `m`.
pub fn reach_by_time<W: Weight>(
    chain: &Chain<W>,
    targets: &Targets,
    mu: &InitialDistribution<W>,
    tau: usize,
) -> Result<ReachReport<W>> {
    validate_chain(chain, targets).into_result()?;
    let n = chain.len();
    let owner = targets.class_of(n);
    let mut dist = vec![W::zero(); n];
    for (s, p) in mu.entries() {
        if *s >= n {
            return Err(Error::StateOutOfRange { state: *s, len: n });
        }
        dist[*s] = p.clone();
    }
    let mut series = vec![Vec::with_capacity(tau + 1); targets.len()];
    for m in 0..=tau {
        let mut mass = vec![W::zero(); targets.len()];
        for (s, p) in dist.iter().enumerate() {
            if let Some(c) = owner[s] {
                mass[c].add_ref(p);
            }
        }
        for (c, v) in mass.into_iter().enumerate() {
            series[c].push(v);
        }
        if m < tau {
            let mut next = vec![W::zero(); n];
            for (s, p) in dist.iter().enumerate() {
                if p.is_zero() {
                    continue;
                }
                for (to, q) in chain.row(s) {
                    next[*to].add_ref(&(p.clone() * q.clone()));
                }
            }
            dist = next;
        }
    }
    Ok(ReachReport {
        class_names: targets.classes().iter().map(|c| c.name.clone()).collect(),
        series,
    })
}

/// Reach probabilities from every start state at once: `table[i][m][e]` is
/// the probability of being in class `i` at step `m` starting from `e`.
///
/// Equal, entry by entry, to [`reach_by_time`] with a point mass at `e`; it
/// iterates the column vectors `P^m 1_{T_i}` instead, which costs one pass
/// per horizon for all starts together.
pub fn reach_table<W: Weight>(chain: &Chain<W>, targets: &Targets, tau: usize) -> Vec<Vec<Vec<W>>> {
    let n = chain.len();
    targets
        .classes()
        .iter()
        .map(|class| {
            let mut h = vec![W::zero(); n];
            for &s in &class.states {
                h[s] = W::one();
            }
            let mut out = Vec::with_capacity(tau + 1);
            for m in 0..=tau {
                if m > 0 {
                    h = (0..n)
                        .map(|e| {
                            chain.row(e).iter().fold(W::zero(), |mut acc, (to, p)| {
                                if !h[*to].is_zero() {
                                    acc.add_ref(&(p.clone() * h[*to].clone()));
                                }
                                acc
                            })
                        })
                        .collect();
                }
                out.push(h.clone());
            }
            out
        })
        .collect()
}

/// Largest gap between original and compressed reach probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct PreservationReport<W> {
    pub max_discrepancy: W,
    /// `(state, class, horizon)` where the maximum is first attained, if nonzero.
    pub worst: Option<(usize, usize, usize)>,
}

/// Compares reach probabilities on the chain and on the quotient induced by
/// `partition`, for every start state and every horizon up to `tau`.
///
/// The quotient rows are read from each block's smallest member without a
/// lumpability check, so a non-lumpable partition shows up as a positive
/// discrepancy rather than an error.
pub fn preservation_check<W: Weight>(
    chain: &Chain<W>,
    targets: &Targets,
    partition: &Partition,
    tau: usize,
) -> Result<PreservationReport<W>> {
    validate_chain(chain, targets).into_result()?;
    let quotient = build_quotient_unchecked(chain, partition, targets)?;
    let original = reach_table(chain, targets, tau);
    let reduced = reach_table(&quotient.chain, &quotient.targets, tau);
    let mut report = PreservationReport {
        max_discrepancy: W::zero(),
        worst: None,
    };
    for (i, (orig, red)) in original.iter().zip(&reduced).enumerate() {
        for m in 0..=tau {
            for e in 0..chain.len() {
                let gap = (orig[m][e].clone() - red[m][quotient.projection[e]].clone()).abs();
                if gap.total_cmp(&report.max_discrepancy).is_gt() {
                    report.max_discrepancy = gap;
                    report.worst = Some((e, i, m));
                }
            }
        }
    }
    Ok(report)
}
