use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use crate::error::{Error, Result};

/// An equivalence relation on state ids `0..n`, stored as a block assignment.
///
/// Numbering is always canonical: blocks are ordered by their smallest member,
/// so the block containing state 0 is block 0. Two partitions of the same
/// relation are therefore equal as values.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    assignment: Vec<usize>,
    block_count: usize,
}

impl Partition {
    /// Canonicalizes an arbitrary key-per-state labelling.
    pub fn from_keys<K: Eq + Hash>(keys: impl IntoIterator<Item = K>) -> Self {
        let mut ids: HashMap<K, usize> = HashMap::new();
        let assignment: Vec<usize> = keys
            .into_iter()
            .map(|k| {
                let next = ids.len();
                *ids.entry(k).or_insert(next)
            })
            .collect();
        Partition {
            block_count: ids.len(),
            assignment,
        }
    }

    pub fn from_assignment(assignment: &[usize]) -> Self {
        Self::from_keys(assignment.iter().copied())
    }

    /// Builds a partition from explicit blocks, which must cover `0..n` exactly once.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut raw = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            for &s in block {
                if s >= n {
                    return Err(Error::StateOutOfRange { state: s, len: n });
                }
                if raw[s] != usize::MAX {
                    return Err(Error::param(format!("state {s} appears in two blocks")));
                }
                raw[s] = b;
            }
        }
        if let Some(s) = raw.iter().position(|&b| b == usize::MAX) {
            return Err(Error::param(format!("state {s} is in no block")));
        }
        Ok(Self::from_assignment(&raw))
    }

    /// Every state alone.
    pub fn finest(n: usize) -> Self {
        Partition {
            assignment: (0..n).collect(),
            block_count: n,
        }
    }

    /// One block (empty for `n == 0`).
    pub fn coarsest(n: usize) -> Self {
        Partition {
            assignment: vec![0; n],
            block_count: usize::from(n > 0),
        }
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn block_count(&self) -> usize {
        self.block_count
    }

    pub fn block_of(&self, state: usize) -> usize {
        self.assignment[state]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Members of each block, ascending.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.block_count];
        for (s, &b) in self.assignment.iter().enumerate() {
            blocks[b].push(s);
        }
        blocks
    }

    /// `self ⊨ other`: every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let mut image = vec![usize::MAX; self.block_count];
        for (s, &b) in self.assignment.iter().enumerate() {
            let o = other.assignment[s];
            if image[b] == usize::MAX {
                image[b] = o;
            } else if image[b] != o {
                return false;
            }
        }
        true
    }

    pub fn same_block(&self, a: usize, b: usize) -> bool {
        self.assignment[a] == self.assignment[b]
    }

    /// Maps state ids through a relabeling: new state `perm[i]` is old state `i`.
    pub fn permute(&self, perm: &[usize]) -> Partition {
        let mut raw = vec![0; self.len()];
        for (old, &new) in perm.iter().enumerate() {
            raw[new] = self.assignment[old];
        }
        Partition::from_assignment(&raw)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks = self.blocks();
        f.write_str("{")?;
        for (i, block) in blocks.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{block:?}")?;
        }
        f.write_str("}")
    }
}

/// Coarsest common refinement: two states share a block iff they share one
/// in every input.
pub fn intersect_partitions(parts: &[Partition]) -> Result<Partition> {
    let Some(first) = parts.first() else {
        return Err(Error::param("no partitions to intersect"));
    };
    let n = first.len();
    if let Some(bad) = parts.iter().find(|p| p.len() != n) {
        return Err(Error::PartitionSize {
            expected: n,
            found: bad.len(),
        });
    }
    Ok(Partition::from_keys((0..n).map(|s| {
        parts.iter().map(|p| p.assignment[s]).collect::<Vec<_>>()
    })))
}
