//! The classical stopping problems, built directly as chain/target pairs.

use std::cmp::Reverse;

use crate::analysis::InitialDistribution;
use crate::chain::{Chain, Targets};
use crate::error::{Error, Result};
use crate::numeric::Weight;

fn check_open_unit<W: Weight>(p: &W) -> Result<()> {
    if p.total_cmp(&W::zero()).is_gt() && p.total_cmp(&W::one()).is_lt() {
        Ok(())
    } else {
        Err(Error::param(format!(
            "probability {p} must lie strictly between 0 and 1"
        )))
    }
}

fn numbered(n: usize) -> Vec<String> {
    (0..=n).map(|i| i.to_string()).collect()
}

/// Play until `n` wins: states `0..=n` count wins so far, `n` absorbs.
pub fn gen_negative_binomial<W: Weight>(n: usize, p: W) -> Result<(Chain<W>, Targets)> {
    if n < 1 {
        return Err(Error::param("n must be at least 1"));
    }
    check_open_unit(&p)?;
    let q = W::one() - p.clone();
    let mut rows: Vec<Vec<(usize, W)>> = (0..n)
        .map(|i| vec![(i, q.clone()), (i + 1, p.clone())])
        .collect();
    rows.push(vec![(n, W::one())]);
    Ok((
        Chain::from_rows(numbered(n), rows)?,
        Targets::single("T", vec![n]),
    ))
}

/// Play until `n` consecutive wins: a loss resets to 0.
pub fn gen_consecutive_wins<W: Weight>(n: usize, p: W) -> Result<(Chain<W>, Targets)> {
    if n < 1 {
        return Err(Error::param("n must be at least 1"));
    }
    check_open_unit(&p)?;
    let q = W::one() - p.clone();
    let mut rows: Vec<Vec<(usize, W)>> = (0..n)
        .map(|i| vec![(0, q.clone()), (i + 1, p.clone())])
        .collect();
    rows.push(vec![(n, W::one())]);
    Ok((
        Chain::from_rows(numbered(n), rows)?,
        Targets::single("T", vec![n]),
    ))
}

/// Gambler's ruin on `-n1..=n2`: up with `p`, down with `1 - p`.
///
/// Targets are `T1 = {n2}` and `T2 = {-n1}`, or one class `T` when `merged`.
pub fn gen_gamblers_ruin<W: Weight>(
    n1: usize,
    n2: usize,
    p: W,
    merged: bool,
) -> Result<(Chain<W>, Targets)> {
    if n1 < 1 || n2 < 1 {
        return Err(Error::param("n1 and n2 must be at least 1"));
    }
    check_open_unit(&p)?;
    let q = W::one() - p.clone();
    let len = n1 + n2 + 1;
    let labels = (0..len)
        .map(|i| match i as i64 - n1 as i64 {
            v if v > 0 => format!("+{v}"),
            v => v.to_string(),
        })
        .collect();
    let rows = (0..len)
        .map(|i| {
            if i == 0 || i == len - 1 {
                vec![(i, W::one())]
            } else {
                vec![(i - 1, q.clone()), (i + 1, p.clone())]
            }
        })
        .collect();
    let chain = Chain::from_rows(labels, rows)?;
    let targets = if merged {
        Targets::single("T", vec![0, len - 1])
    } else {
        Targets::new([("T1", vec![len - 1]), ("T2", vec![0])])
    };
    Ok((chain, targets))
}

/// Hypercube vertices in order of Hamming weight, ties broken by descending
/// coordinate tuple: `(0,0,0), (1,0,0), (0,1,0), (0,0,1), (1,1,0), ...`.
pub fn hypercube_order(d: usize) -> Vec<u32> {
    let mut masks: Vec<u32> = (0..1u32 << d).collect();
    // Coordinate j is bit j; read the tuple as a big-endian number.
    let tuple_value = |m: u32| (0..d).fold(0u32, |acc, j| (acc << 1) | ((m >> j) & 1));
    masks.sort_by_key(|&m| (m.count_ones(), Reverse(tuple_value(m))));
    masks
}

pub fn hypercube_label(mask: u32, d: usize) -> String {
    let coords: Vec<String> = (0..d).map(|j| ((mask >> j) & 1).to_string()).collect();
    format!("({})", coords.join(","))
}

/// Symmetric walk on the `d`-cube, stopped at the all-zeros (`T1`) and
/// all-ones (`T2`) vertices, or at either (`T`) when `merged`.
pub fn gen_hypercube<W: Weight>(d: usize, merged: bool) -> Result<(Chain<W>, Targets)> {
    if !(1..=20).contains(&d) {
        return Err(Error::param(format!("dimension {d} outside 1..=20")));
    }
    let order = hypercube_order(d);
    let mut index = vec![0usize; order.len()];
    for (i, &m) in order.iter().enumerate() {
        index[m as usize] = i;
    }
    let full = (1u32 << d) - 1;
    let step = W::from_ratio(1, d as i64);
    let rows = order
        .iter()
        .map(|&m| {
            if m == 0 || m == full {
                vec![(index[m as usize], W::one())]
            } else {
                (0..d)
                    .map(|j| (index[(m ^ (1 << j)) as usize], step.clone()))
                    .collect()
            }
        })
        .collect();
    let labels = order.iter().map(|&m| hypercube_label(m, d)).collect();
    let chain = Chain::from_rows(labels, rows)?;
    let (zero, one) = (index[0], index[full as usize]);
    let targets = if merged {
        Targets::single("T", vec![zero, one])
    } else {
        Targets::new([("T1", vec![zero]), ("T2", vec![one])])
    };
    Ok((chain, targets))
}

fn check_coupon_probs<W: Weight>(probs: &[W]) -> Result<()> {
    if !(2..=16).contains(&probs.len()) {
        return Err(Error::param(format!(
            "coupon collector needs 2..=16 objects, got {}",
            probs.len()
        )));
    }
    if let Some(p) = probs.iter().find(|p| p.total_cmp(&W::zero()).is_le()) {
        return Err(Error::param(format!(
            "object probability {p} is not positive"
        )));
    }
    let total = probs.iter().fold(W::zero(), |mut acc, p| {
        acc.add_ref(p);
        acc
    });
    if !total.is_unit_sum() {
        return Err(Error::param(format!("object probabilities sum to {total}")));
    }
    Ok(())
}

/// Nonempty proper subsets by (size, bitmask); the full set is the last state.
fn coupon_order(n: usize) -> Vec<u32> {
    let full = (1u32 << n) - 1;
    let mut masks: Vec<u32> = (1..full).collect();
    masks.sort_by_key(|&m| (m.count_ones(), m));
    masks.push(full);
    masks
}

fn coupon_label(mask: u32, n: usize) -> String {
    let items: Vec<String> = (0..n)
        .filter(|k| mask >> k & 1 == 1)
        .map(|k| (k + 1).to_string())
        .collect();
    format!("{{{}}}", items.join(","))
}

/// Coupon collector on the subset lattice: a state is the set of objects
/// seen so far; the full set is the absorbing target `T`.
pub fn gen_coupon<W: Weight>(probs: &[W]) -> Result<(Chain<W>, Targets)> {
    check_coupon_probs(probs)?;
    let n = probs.len();
    let order = coupon_order(n);
    let mut index = vec![0usize; 1 << n];
    for (i, &m) in order.iter().enumerate() {
        index[m as usize] = i;
    }
    let full = (1u32 << n) - 1;
    let rows = order
        .iter()
        .map(|&m| {
            if m == full {
                return vec![(index[m as usize], W::one())];
            }
            let mut stay = W::zero();
            let mut row = Vec::with_capacity(n + 1);
            for (k, p) in probs.iter().enumerate() {
                if m >> k & 1 == 1 {
                    stay.add_ref(p);
                } else {
                    row.push((index[(m | 1 << k) as usize], p.clone()));
                }
            }
            row.push((index[m as usize], stay));
            row
        })
        .collect();
    let mut labels: Vec<String> = order.iter().map(|&m| coupon_label(m, n)).collect();
    *labels.last_mut().unwrap() = "T".to_string();
    let chain = Chain::from_rows(labels, rows)?;
    let target = chain.len() - 1;
    Ok((chain, Targets::single("T", vec![target])))
}

/// First draw: mass `p_k` on the singleton `{k}`.
pub fn coupon_initial<W: Weight>(probs: &[W]) -> Result<InitialDistribution<W>> {
    check_coupon_probs(probs)?;
    let n = probs.len();
    let order = coupon_order(n);
    let entries = probs
        .iter()
        .enumerate()
        .map(|(k, p)| (order.iter().position(|&m| m == 1 << k).unwrap(), p.clone()))
        .collect();
    InitialDistribution::new(order.len(), entries)
}

fn pair_label(h: usize, m: usize, n: usize) -> String {
    if n <= 9 {
        format!("{}{}", h + 1, m + 1)
    } else {
        format!("{}.{}", h + 1, m + 1)
    }
}

/// History-dependent chain on pairs `hm` of the last two outcomes, stopped at
/// the first repeated outcome (`11`, `22`, ...).
///
/// `probs` holds `p(hm -> mk)` indexed `[(h * n + m) * n + k]`, or, with
/// `collapse`, the history-free `p(m -> k)` indexed `[m * n + k]`. Diagonal
/// rows are replaced by self-loops, so their entries are ignored.
pub fn gen_pair_chain<W: Weight>(
    n: usize,
    probs: &[W],
    collapse: bool,
) -> Result<(Chain<W>, Targets)> {
    if n < 1 {
        return Err(Error::param("n must be at least 1"));
    }
    let expected = if collapse { n * n } else { n * n * n };
    if probs.len() != expected {
        return Err(Error::param(format!(
            "expected {expected} probabilities, got {}",
            probs.len()
        )));
    }
    let p = |h: usize, m: usize, k: usize| {
        if collapse {
            &probs[m * n + k]
        } else {
            &probs[(h * n + m) * n + k]
        }
    };
    let mut labels = Vec::with_capacity(n * n);
    let mut rows = Vec::with_capacity(n * n);
    for h in 0..n {
        for m in 0..n {
            labels.push(pair_label(h, m, n));
            let id = h * n + m;
            if h == m {
                rows.push(vec![(id, W::one())]);
                continue;
            }
            let row: Vec<(usize, W)> = (0..n).map(|k| (m * n + k, p(h, m, k).clone())).collect();
            let sum = row.iter().fold(W::zero(), |mut acc, (_, v)| {
                acc.add_ref(v);
                acc
            });
            if !sum.is_unit_sum() {
                return Err(Error::param(format!(
                    "row {} sums to {sum}",
                    pair_label(h, m, n)
                )));
            }
            rows.push(row);
        }
    }
    let chain = Chain::from_rows(labels, rows)?;
    Ok((
        chain,
        Targets::single("T", (0..n).map(|i| i * n + i).collect()),
    ))
}
