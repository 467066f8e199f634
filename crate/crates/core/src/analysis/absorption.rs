use std::collections::VecDeque;

use crate::chain::{validate_chain, Chain, Targets};
use crate::error::{Error, Result};
use crate::numeric::Weight;

/// Limiting absorption probabilities: `probs[e][i]` is the probability that
/// the chain started at `e` is eventually absorbed in class `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Absorption<W> {
    pub class_names: Vec<String>,
    pub probs: Vec<Vec<W>>,
}

/// Solves the first-step equations `h_i(e) = sum_e' P(e, e') h_i(e')` on the
/// non-target states, with `h_i = 1` on `T_i` and `0` on the other classes.
///
/// Every non-target state must be able to reach some target; otherwise the
/// system is singular and the trapped states are reported.
pub fn absorption_limit<W: Weight>(chain: &Chain<W>, targets: &Targets) -> Result<Absorption<W>> {
    validate_chain(chain, targets).into_result()?;
    let n = chain.len();
    let owner = targets.class_of(n);
    let k = targets.len();

    // Backward search from the targets.
    let mut preds = vec![Vec::new(); n];
    for (s, row) in chain.rows().iter().enumerate() {
        for (to, _) in row {
            preds[*to].push(s);
        }
    }
    let mut reaches = vec![false; n];
    let mut queue: VecDeque<usize> = (0..n).filter(|&s| owner[s].is_some()).collect();
    for &s in &queue {
        reaches[s] = true;
    }
    while let Some(s) = queue.pop_front() {
        for &p in &preds[s] {
            if !reaches[p] {
                reaches[p] = true;
                queue.push_back(p);
            }
        }
    }
    let trapped: Vec<String> = (0..n)
        .filter(|&s| !reaches[s])
        .map(|s| chain.label(s).to_string())
        .collect();
    if !trapped.is_empty() {
        return Err(Error::Trapped(trapped));
    }

    let transient: Vec<usize> = (0..n).filter(|&s| owner[s].is_none()).collect();
    let mut slot = vec![usize::MAX; n];
    for (i, &s) in transient.iter().enumerate() {
        slot[s] = i;
    }
    let m = transient.len();
    // Augmented system [(I - Q) | B], B[e][i] = P(e, T_i).
    let mut a: Vec<Vec<W>> = vec![vec![W::zero(); m + k]; m];
    for (r, &s) in transient.iter().enumerate() {
        a[r][r] = W::one();
        for (to, p) in chain.row(s) {
            match owner[*to] {
                Some(c) => a[r][m + c].add_ref(p),
                None => {
                    let col = slot[*to];
                    a[r][col] = a[r][col].clone() - p.clone();
                }
            }
        }
    }
    gauss_jordan(&mut a, m)?;

    let probs = (0..n)
        .map(|s| match owner[s] {
            Some(c) => (0..k)
                .map(|i| if i == c { W::one() } else { W::zero() })
                .collect(),
            None => {
                let r = slot[s];
                (0..k).map(|i| a[r][m + i].clone()).collect()
            }
        })
        .collect();
    Ok(Absorption {
        class_names: targets.classes().iter().map(|c| c.name.clone()).collect(),
        probs,
    })
}

/// Reduces the leading `m x m` block of `a` to the identity in place.
/// Pivots on the cheapest nonzero entry of each column ([`Weight::pivot_cost`]).
fn gauss_jordan<W: Weight>(a: &mut [Vec<W>], m: usize) -> Result<()> {
    for col in 0..m {
        let pivot = (col..m)
            .filter(|&r| !a[r][col].is_zero())
            .min_by(|&x, &y| a[x][col].pivot_cost().total_cmp(&a[y][col].pivot_cost()))
            .ok_or_else(|| Error::param("singular absorption system"))?;
        a.swap(col, pivot);
        let inv = W::one().div(&a[col][col]);
        for v in a[col].iter_mut().skip(col) {
            if !v.is_zero() {
                *v = v.clone() * inv.clone();
            }
        }
        let pivot_row = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (c, pv) in pivot_row.iter().enumerate().skip(col) {
                if !pv.is_zero() {
                    row[c] = row[c].clone() - factor.clone() * pv.clone();
                }
            }
        }
    }
    Ok(())
}
