//! Monotone partition refinement.
//!
//! Starting from the coarsest admissible partition (each target class a
//! block, every other state in one block), [`refine_once`] splits each block
//! by the block-mass signatures of its members. Iterating it descends
//! strictly in the refinement order until it reaches its unique fixed point:
//! the coarsest lumpable partition that keeps the targets apart. That fixed
//! point is what [`compress`] returns.

use rayon::prelude::*;

use crate::chain::{validate_chain, Chain, Targets};
use crate::error::Result;
use crate::numeric::{cmp_sparse, sparse_within, Mode, Weight, DEFAULT_EPSILON};
use crate::partition::Partition;

/// Block masses of one state against a partition, sorted by block id, zeros omitted.
#[derive(Debug, Clone, PartialEq)]
pub struct Signature<W>(pub Vec<(usize, W)>);

impl<W: Weight> Signature<W> {
    pub fn of(chain: &Chain<W>, partition: &Partition, state: usize) -> Self {
        let mut masses: Vec<(usize, W)> = chain
            .row(state)
            .iter()
            .map(|(to, p)| (partition.block_of(*to), p.clone()))
            .collect();
        masses.sort_by_key(|e| e.0);
        let mut out: Vec<(usize, W)> = Vec::with_capacity(masses.len());
        for (b, p) in masses {
            match out.last_mut() {
                Some((last, acc)) if *last == b => acc.add_ref(&p),
                _ => out.push((b, p)),
            }
        }
        out.retain(|(_, p)| !p.is_zero());
        Signature(out)
    }

    pub fn mass(&self, block: usize) -> W {
        self.0
            .iter()
            .find(|(b, _)| *b == block)
            .map_or_else(W::zero, |(_, p)| p.clone())
    }

    pub fn total(&self) -> W {
        self.0.iter().fold(W::zero(), |mut acc, (_, p)| {
            acc.add_ref(p);
            acc
        })
    }

    pub fn within(&self, other: &Self, epsilon: f64) -> bool {
        sparse_within(&self.0, &other.0, epsilon)
    }
}

/// Each target class its own block, all remaining states one block.
pub fn initial_partition<W: Weight>(chain: &Chain<W>, targets: &Targets) -> Result<Partition> {
    validate_chain(chain, targets).into_result()?;
    Ok(Partition::from_keys(targets.class_of(chain.len())))
}

/// One application of the refinement operator.
///
/// Two states stay together iff they share a block of `current` and their
/// signatures agree: exactly in exact mode, within `epsilon` of the
/// sub-block's first member in float mode.
pub fn refine_once<W: Weight>(chain: &Chain<W>, current: &Partition, epsilon: f64) -> Partition {
    let signatures: Vec<Signature<W>> = (0..chain.len())
        .into_par_iter()
        .map(|s| Signature::of(chain, current, s))
        .collect();

    let mut key = vec![(0usize, 0usize); chain.len()];
    for (block, mut members) in current.blocks().into_iter().enumerate() {
        if members.len() == 1 {
            key[members[0]] = (block, 0);
            continue;
        }
        // Stable: equal signatures keep ascending state order.
        members.sort_by(|&a, &b| cmp_sparse(&signatures[a].0, &signatures[b].0));
        let mut anchors: Vec<usize> = Vec::new();
        for &s in &members {
            let sig = &signatures[s];
            let joined = match anchors.last() {
                Some(&a) if sig.within(&signatures[a], epsilon) => Some(anchors.len() - 1),
                // Sorted order makes equal exact signatures adjacent; under a
                // tolerance a near-equal anchor can sit further back.
                _ if W::MODE == Mode::Float => anchors
                    .iter()
                    .position(|&a| sig.within(&signatures[a], epsilon)),
                _ => None,
            };
            let group = joined.unwrap_or_else(|| {
                anchors.push(s);
                anchors.len() - 1
            });
            key[s] = (block, group);
        }
    }
    Partition::from_keys(key)
}

/// Fixed point of the refinement operator and how many applications changed it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Compression {
    pub partition: Partition,
    /// Applications performed before stabilization (the final, confirming
    /// application is not counted).
    pub steps: usize,
}

impl Compression {
    pub fn complexity(&self) -> usize {
        self.partition.block_count()
    }
}

pub fn compress<W: Weight>(chain: &Chain<W>, targets: &Targets) -> Result<Compression> {
    compress_with(chain, targets, DEFAULT_EPSILON)
}

pub fn compress_with<W: Weight>(
    chain: &Chain<W>,
    targets: &Targets,
    epsilon: f64,
) -> Result<Compression> {
    let mut partition = initial_partition(chain, targets)?;
    let mut steps = 0;
    loop {
        let next = refine_once(chain, &partition, epsilon);
        if next == partition {
            return Ok(Compression { partition, steps });
        }
        debug_assert!(next.block_count() > partition.block_count());
        partition = next;
        steps += 1;
    }
}

/// The whole descent `R_0, R_1, ..., R_steps` ending at the fixed point.
pub fn refinement_sequence<W: Weight>(
    chain: &Chain<W>,
    targets: &Targets,
    epsilon: f64,
) -> Result<Vec<Partition>> {
    let mut seq = vec![initial_partition(chain, targets)?];
    loop {
        let next = refine_once(chain, seq.last().unwrap(), epsilon);
        if &next == seq.last().unwrap() {
            return Ok(seq);
        }
        seq.push(next);
    }
}

/// Number of blocks of the coarsest lumpable partition.
pub fn markov_complexity<W: Weight>(chain: &Chain<W>, targets: &Targets) -> Result<usize> {
    compress(chain, targets).map(|c| c.complexity())
}
