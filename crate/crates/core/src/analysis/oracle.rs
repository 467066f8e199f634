use crate::chain::{validate_chain, Chain, Targets};
use crate::error::{Error, Result};
use crate::numeric::Weight;
use crate::partition::Partition;
use crate::quotient::verify_lumpability;

/// Largest chain [`brute_force_minimal`] accepts.
pub const BRUTE_FORCE_LIMIT: usize = 12;

/// Exhaustive search for the lumpable partition with fewest blocks.
///
/// Enumerates every set partition of the non-target states (as restricted
/// growth strings), adjoins each target class as its own block, and keeps the
/// lumpable ones. Independent of the refinement operator. Errors if more than
/// one partition attains the minimum.
pub fn brute_force_minimal<W: Weight>(
    chain: &Chain<W>,
    targets: &Targets,
    epsilon: f64,
) -> Result<Partition> {
    let n = chain.len();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            states: n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    validate_chain(chain, targets).into_result()?;
    let owner = targets.class_of(n);
    let free: Vec<usize> = (0..n).filter(|&s| owner[s].is_none()).collect();

    let mut best: Option<Partition> = None;
    let mut ties = 0;
    let mut consider = |growth: &[usize]| {
        let mut keys: Vec<(bool, usize)> = owner.iter().map(|o| (true, o.unwrap_or(0))).collect();
        for (&s, &g) in free.iter().zip(growth) {
            keys[s] = (false, g);
        }
        let candidate = Partition::from_keys(keys);
        if !verify_lumpability(chain, &candidate, targets, epsilon) {
            return;
        }
        match &best {
            Some(b) if candidate.block_count() > b.block_count() => {}
            Some(b) if candidate.block_count() == b.block_count() => ties += 1,
            _ => {
                best = Some(candidate);
                ties = 1;
            }
        }
    };
    for_each_set_partition(free.len(), &mut consider);

    let best = best.expect("the finest partition is always lumpable");
    if ties > 1 {
        return Err(Error::NonUniqueMinimum {
            count: ties,
            blocks: best.block_count(),
        });
    }
    Ok(best)
}

/// Calls `f` with every restricted growth string of length `len`
/// (`a[0] = 0`, `a[i] <= 1 + max(a[..i])`), one per set partition.
fn for_each_set_partition(len: usize, f: &mut impl FnMut(&[usize])) {
    fn go(a: &mut Vec<usize>, max: usize, len: usize, f: &mut impl FnMut(&[usize])) {
        if a.len() == len {
            f(a);
            return;
        }
        let limit = if a.is_empty() { 0 } else { max + 1 };
        for v in 0..=limit {
            a.push(v);
            go(a, max.max(v), len, f);
            a.pop();
        }
    }
    go(&mut Vec::with_capacity(len), 0, len, f);
}

#[cfg(test)]
mod tests {
    use num_rational::BigRational;

    use super::*;
    use crate::generators::{gen_hypercube, gen_negative_binomial};
    use crate::numeric::DEFAULT_EPSILON;
    use crate::refine::compress;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::from_ratio(n, d)
    }

    #[test]
    fn enumerates_bell_numbers() {
        for (len, bell) in [
            (0, 1),
            (1, 1),
            (2, 2),
            (3, 5),
            (4, 15),
            (5, 52),
            (6, 203),
            (7, 877),
        ] {
            let mut count = 0;
            for_each_set_partition(len, &mut |_| count += 1);
            assert_eq!(count, bell, "Bell({len})");
        }
    }

    #[test]
    fn identical_rows_merge() {
        let row = vec![(0, q(1, 3)), (1, q(1, 3)), (2, q(1, 3))];
        let chain = Chain::from_rows(
            vec!["a".into(), "b".into(), "t".into()],
            vec![row.clone(), row, vec![(2, q(1, 1))]],
        )
        .unwrap();
        let targets = Targets::single("T", vec![2]);
        let p = brute_force_minimal(&chain, &targets, DEFAULT_EPSILON).unwrap();
        assert_eq!(p.block_count(), 2);
        assert_eq!(p, compress(&chain, &targets).unwrap().partition);
    }

    #[test]
    fn cube_and_negative_binomial() {
        let (c, t) = gen_hypercube::<BigRational>(3, false).unwrap();
        let p = brute_force_minimal(&c, &t, DEFAULT_EPSILON).unwrap();
        assert_eq!(p.block_count(), 4);
        assert_eq!(p, compress(&c, &t).unwrap().partition);

        let (c, t) = gen_negative_binomial(3, q(3, 10)).unwrap();
        assert_eq!(
            brute_force_minimal(&c, &t, DEFAULT_EPSILON).unwrap(),
            Partition::finest(4)
        );
    }

    #[test]
    fn size_guard() {
        let (c, t) = gen_hypercube::<BigRational>(4, false).unwrap();
        assert!(matches!(
            brute_force_minimal(&c, &t, DEFAULT_EPSILON),
            Err(Error::TooLarge {
                states: 16,
                limit: 12
            })
        ));
    }
}
