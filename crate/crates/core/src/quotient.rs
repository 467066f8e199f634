//! Lumpability checks and the compressed chain induced by a lumpable partition.

use std::fmt;

use crate::chain::{Chain, Targets};
use crate::error::{Error, Result};
use crate::numeric::Weight;
use crate::partition::Partition;
use crate::refine::Signature;

/// Why a partition fails to be an admissible lumping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LumpViolation {
    /// Members of one target class sit in different blocks.
    TargetSplit { class: String },
    /// A target block also holds a state outside the class.
    TargetMixed { class: String, state: usize },
    /// Two states of one block send different mass into `block`.
    Masses {
        first: usize,
        second: usize,
        block: usize,
    },
}

impl fmt::Display for LumpViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LumpViolation::TargetSplit { class } => {
                write!(f, "target class {class} is split across blocks")
            }
            LumpViolation::TargetMixed { class, state } => {
                write!(f, "block of target class {class} also contains state {state}")
            }
            LumpViolation::Masses {
                first,
                second,
                block,
            } => write!(
                f,
                "states {first} and {second} share a block but send different mass into block {block}"
            ),
        }
    }
}

/// First reason `partition` is not lumpable with respect to `targets`, if any.
pub fn lumpability_violation<W: Weight>(
    chain: &Chain<W>,
    partition: &Partition,
    targets: &Targets,
    epsilon: f64,
) -> Option<LumpViolation> {
    let owner = targets.class_of(chain.len());
    for class in targets.classes() {
        let Some(&first) = class.states.first() else {
            continue;
        };
        let block = partition.block_of(first);
        if class.states.iter().any(|&s| partition.block_of(s) != block) {
            return Some(LumpViolation::TargetSplit {
                class: class.name.clone(),
            });
        }
        let class_idx = owner[first];
        if let Some(state) =
            (0..chain.len()).find(|&s| partition.block_of(s) == block && owner[s] != class_idx)
        {
            return Some(LumpViolation::TargetMixed {
                class: class.name.clone(),
                state,
            });
        }
    }
    for members in partition.blocks() {
        let rep = members[0];
        let rep_sig = Signature::of(chain, partition, rep);
        for &other in &members[1..] {
            let sig = Signature::of(chain, partition, other);
            if !sig.within(&rep_sig, epsilon) {
                let block = (0..partition.block_count())
                    .find(|&b| !sig.mass(b).within(&rep_sig.mass(b), epsilon))
                    .unwrap_or(0);
                return Some(LumpViolation::Masses {
                    first: rep,
                    second: other,
                    block,
                });
            }
        }
    }
    None
}

/// True iff every target class is exactly one block and all members of a
/// block agree on their mass into every block.
pub fn verify_lumpability<W: Weight>(
    chain: &Chain<W>,
    partition: &Partition,
    targets: &Targets,
    epsilon: f64,
) -> bool {
    partition.len() == chain.len()
        && lumpability_violation(chain, partition, targets, epsilon).is_none()
}

/// The projection onto blocks together with the compressed chain.
#[derive(Debug, Clone, PartialEq)]
pub struct Quotient<W> {
    /// State id to quotient state id.
    pub projection: Vec<usize>,
    pub chain: Chain<W>,
    /// Each class a single quotient state, names preserved.
    pub targets: Targets,
}

impl<W: Weight> Quotient<W> {
    pub fn labels(&self) -> &[String] {
        self.chain.labels()
    }
}

/// Builds the quotient chain.
///
/// Row `f` is read off the smallest member of block `f`; lumpability makes
/// the choice immaterial. Target blocks take their class name, the rest are
/// named `f1`, `f2`, ... in block order.
pub fn build_quotient<W: Weight>(
    chain: &Chain<W>,
    partition: &Partition,
    targets: &Targets,
    epsilon: f64,
) -> Result<Quotient<W>> {
    if partition.len() != chain.len() {
        return Err(Error::PartitionSize {
            expected: chain.len(),
            found: partition.len(),
        });
    }
    if let Some(v) = lumpability_violation(chain, partition, targets, epsilon) {
        return Err(Error::NotLumpable(v.to_string()));
    }
    build_quotient_unchecked(chain, partition, targets)
}

/// [`build_quotient`] without the lumpability check: rows come from each
/// block's smallest member whether or not the other members agree.
pub fn build_quotient_unchecked<W: Weight>(
    chain: &Chain<W>,
    partition: &Partition,
    targets: &Targets,
) -> Result<Quotient<W>> {
    if partition.len() != chain.len() {
        return Err(Error::PartitionSize {
            expected: chain.len(),
            found: partition.len(),
        });
    }
    let owner = targets.class_of(chain.len());
    let blocks = partition.blocks();
    let mut labels = Vec::with_capacity(blocks.len());
    let mut rows = Vec::with_capacity(blocks.len());
    let mut free = 0;
    for members in &blocks {
        let rep = members[0];
        labels.push(match owner[rep] {
            Some(c) => targets.classes()[c].name.clone(),
            None => {
                free += 1;
                format!("f{free}")
            }
        });
        rows.push(Signature::of(chain, partition, rep).0);
    }
    let quotient_targets = Targets::new(targets.classes().iter().map(|c| {
        (
            c.name.clone(),
            c.states
                .iter()
                .map(|&s| partition.block_of(s))
                .collect::<Vec<_>>(),
        )
    }));
    Ok(Quotient {
        projection: partition.assignment().to_vec(),
        chain: Chain::from_rows(labels, rows)?,
        targets: quotient_targets,
    })
}
