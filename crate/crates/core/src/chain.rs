//! The problem triple: states, closed target classes, and the transition
//! matrix, plus validation and the block-mass function every other module
//! is built on.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::numeric::{Mode, Weight};

/// A finite, time-homogeneous Markov chain in canonical sparse form.
///
/// Rows are sorted by destination, duplicate destinations are summed and zero
/// entries dropped, so two chains with the same labels and transition
/// function compare equal. Stochasticity is not enforced here; see
/// [`validate_chain`].
#[derive(Debug, Clone, PartialEq)]
pub struct Chain<W> {
    labels: Vec<String>,
    rows: Vec<Vec<(usize, W)>>,
}

impl<W: Weight> Chain<W> {
    pub fn from_rows(labels: Vec<String>, rows: Vec<Vec<(usize, W)>>) -> Result<Self> {
        if labels.len() != rows.len() {
            return Err(Error::Shape {
                rows: rows.len(),
                labels: labels.len(),
            });
        }
        let len = labels.len();
        let rows = rows
            .into_iter()
            .map(|row| canonical_row(row, len))
            .collect::<Result<Vec<_>>>()?;
        Ok(Chain { labels, rows })
    }

    /// Builds a chain from `(from, to, p)` triples.
    pub fn from_triples<I>(labels: Vec<String>, triples: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, W)>,
    {
        let mut rows = vec![Vec::new(); labels.len()];
        for (from, to, p) in triples {
            let len = rows.len();
            rows.get_mut(from)
                .ok_or(Error::StateOutOfRange { state: from, len })?
                .push((to, p));
        }
        Self::from_rows(labels, rows)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn mode(&self) -> Mode {
        W::MODE
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, state: usize) -> &str {
        &self.labels[state]
    }

    pub fn state_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Sparse row of `state`, sorted by destination, no zeros.
    pub fn row(&self, state: usize) -> &[(usize, W)] {
        &self.rows[state]
    }

    pub fn rows(&self) -> &[Vec<(usize, W)>] {
        &self.rows
    }

    /// Single transition probability.
    pub fn prob(&self, from: usize, to: usize) -> W {
        self.rows[from]
            .binary_search_by_key(&to, |e| e.0)
            .map(|i| self.rows[from][i].1.clone())
            .unwrap_or_else(|_| W::zero())
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Converts every entry, keeping labels and sparsity.
    pub fn map_weights<V: Weight>(&self, mut f: impl FnMut(&W) -> V) -> Result<Chain<V>> {
        let rows = self
            .rows
            .iter()
            .map(|row| row.iter().map(|(j, p)| (*j, f(p))).collect())
            .collect();
        Chain::from_rows(self.labels.clone(), rows)
    }

    /// Relabels states: new state `perm[i]` is old state `i`.
    pub fn permute(&self, perm: &[usize]) -> Result<Chain<W>> {
        let n = self.len();
        if perm.len() != n {
            return Err(Error::param("permutation length mismatch"));
        }
        let mut labels = vec![String::new(); n];
        let mut rows = vec![Vec::new(); n];
        for (old, &new) in perm.iter().enumerate() {
            labels[new] = self.labels[old].clone();
            rows[new] = self.rows[old]
                .iter()
                .map(|(j, p)| (perm[*j], p.clone()))
                .collect();
        }
        Chain::from_rows(labels, rows)
    }
}

fn canonical_row<W: Weight>(row: Vec<(usize, W)>, len: usize) -> Result<Vec<(usize, W)>> {
    let mut merged: BTreeMap<usize, W> = BTreeMap::new();
    for (to, p) in row {
        if to >= len {
            return Err(Error::StateOutOfRange { state: to, len });
        }
        merged
            .entry(to)
            .and_modify(|acc| acc.add_ref(&p))
            .or_insert(p);
    }
    Ok(merged.into_iter().filter(|(_, p)| !p.is_zero()).collect())
}

/// Total mass row `state` puts on `set`.
pub fn block_mass<W: Weight>(chain: &Chain<W>, state: usize, set: &[usize]) -> Result<W> {
    let len = chain.len();
    if state >= len {
        return Err(Error::StateOutOfRange { state, len });
    }
    if let Some(&bad) = set.iter().find(|&&s| s >= len) {
        return Err(Error::StateOutOfRange { state: bad, len });
    }
    let members: HashSet<usize> = set.iter().copied().collect();
    let mut total = W::zero();
    for (to, p) in chain.row(state) {
        if members.contains(to) {
            total.add_ref(p);
        }
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetClass {
    pub name: String,
    /// Sorted, deduplicated state ids.
    pub states: Vec<usize>,
}

/// `k >= 1` disjoint, closed target classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Targets {
    classes: Vec<TargetClass>,
}

impl Targets {
    pub fn new<S: Into<String>>(classes: impl IntoIterator<Item = (S, Vec<usize>)>) -> Self {
        let classes = classes
            .into_iter()
            .map(|(name, mut states)| {
                states.sort_unstable();
                states.dedup();
                TargetClass {
                    name: name.into(),
                    states,
                }
            })
            .collect();
        Targets { classes }
    }

    pub fn single(name: impl Into<String>, states: Vec<usize>) -> Self {
        Self::new([(name.into(), states)])
    }

    pub fn classes(&self) -> &[TargetClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// For each state, the index of the class containing it.
    pub fn class_of(&self, states: usize) -> Vec<Option<usize>> {
        let mut out = vec![None; states];
        for (i, class) in self.classes.iter().enumerate() {
            for &s in &class.states {
                if s < states && out[s].is_none() {
                    out[s] = Some(i);
                }
            }
        }
        out
    }

    /// The targets restricted to class `index` alone.
    pub fn only(&self, index: usize) -> Targets {
        Targets {
            classes: vec![self.classes[index].clone()],
        }
    }

    /// All classes merged into one named `name`.
    pub fn merged(&self, name: impl Into<String>) -> Targets {
        let states = self
            .classes
            .iter()
            .flat_map(|c| c.states.iter().copied())
            .collect();
        Targets::single(name, states)
    }

    pub fn permute(&self, perm: &[usize]) -> Targets {
        Targets::new(
            self.classes
                .iter()
                .map(|c| (c.name.clone(), c.states.iter().map(|&s| perm[s]).collect())),
        )
    }
}

/// One failed invariant of a chain/target pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    RowSum {
        state: usize,
        sum: String,
    },
    NegativeEntry {
        state: usize,
        to: usize,
        value: String,
    },
    EmptyLabel {
        state: usize,
    },
    DuplicateLabel {
        label: String,
    },
    NoTargets,
    EmptyClass {
        class: String,
    },
    DuplicateClassName {
        class: String,
    },
    TargetOutOfRange {
        class: String,
        state: usize,
    },
    Overlap {
        state: usize,
        first: String,
        second: String,
    },
    NotClosed {
        class: String,
        state: usize,
        to: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::RowSum { state, sum } => write!(f, "row {state} sums to {sum} ≠ 1"),
            Violation::NegativeEntry { state, to, value } => {
                write!(f, "row {state} has negative entry {value} at column {to}")
            }
            Violation::EmptyLabel { state } => write!(f, "state {state} has an empty label"),
            Violation::DuplicateLabel { label } => write!(f, "label {label:?} used more than once"),
            Violation::NoTargets => f.write_str("no target classes"),
            Violation::EmptyClass { class } => write!(f, "target class {class} is empty"),
            Violation::DuplicateClassName { class } => {
                write!(f, "target class name {class} used more than once")
            }
            Violation::TargetOutOfRange { class, state } => {
                write!(f, "target class {class} names unknown state {state}")
            }
            Violation::Overlap {
                state,
                first,
                second,
            } => {
                write!(
                    f,
                    "state {state} belongs to target classes {first} and {second}"
                )
            }
            Violation::NotClosed { class, state, to } => {
                write!(
                    f,
                    "target class {class} not closed at state {state} (mass to {to})"
                )
            }
        }
    }
}

/// Every violation found by [`validate_chain`]; empty iff the input is valid.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::Invalid(self))
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

pub fn validate_chain<W: Weight>(chain: &Chain<W>, targets: &Targets) -> ValidationReport {
    let mut violations = Vec::new();
    let n = chain.len();

    for (state, row) in chain.rows().iter().enumerate() {
        let mut sum = W::zero();
        for (to, p) in row {
            if p.total_cmp(&W::zero()).is_lt() {
                violations.push(Violation::NegativeEntry {
                    state,
                    to: *to,
                    value: p.to_string(),
                });
            }
            sum.add_ref(p);
        }
        if !sum.is_unit_sum() {
            violations.push(Violation::RowSum {
                state,
                sum: sum.to_string(),
            });
        }
    }

    let mut seen: HashMap<&str, usize> = HashMap::new();
    for (state, label) in chain.labels().iter().enumerate() {
        if label.is_empty() {
            violations.push(Violation::EmptyLabel { state });
        } else if seen.insert(label, state).is_some() {
            violations.push(Violation::DuplicateLabel {
                label: label.clone(),
            });
        }
    }

    if targets.is_empty() {
        violations.push(Violation::NoTargets);
    }
    let mut owner: Vec<Option<usize>> = vec![None; n];
    let mut names = HashSet::new();
    for (ci, class) in targets.classes().iter().enumerate() {
        if !names.insert(class.name.as_str()) {
            violations.push(Violation::DuplicateClassName {
                class: class.name.clone(),
            });
        }
        if class.states.is_empty() {
            violations.push(Violation::EmptyClass {
                class: class.name.clone(),
            });
        }
        for &s in &class.states {
            if s >= n {
                violations.push(Violation::TargetOutOfRange {
                    class: class.name.clone(),
                    state: s,
                });
                continue;
            }
            match owner[s] {
                Some(prev) => violations.push(Violation::Overlap {
                    state: s,
                    first: targets.classes()[prev].name.clone(),
                    second: class.name.clone(),
                }),
                None => owner[s] = Some(ci),
            }
        }
    }
    for (ci, class) in targets.classes().iter().enumerate() {
        for &s in class.states.iter().filter(|&&s| s < n) {
            if owner[s] != Some(ci) {
                continue;
            }
            if let Some((to, _)) = chain.row(s).iter().find(|(to, _)| owner[*to] != Some(ci)) {
                violations.push(Violation::NotClosed {
                    class: class.name.clone(),
                    state: s,
                    to: *to,
                });
            }
        }
    }

    ValidationReport { violations }
}

#[cfg(test)]
mod tests {
    use num_rational::BigRational;

    use super::*;
    use crate::generators::gen_hypercube;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::from_ratio(n, d)
    }

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    fn three_state(last_row: Vec<(usize, BigRational)>) -> Chain<BigRational> {
        Chain::from_rows(
            labels(3),
            vec![
                vec![(0, q(1, 2)), (1, q(1, 4)), (2, q(1, 4))],
                vec![(2, q(1, 1))],
                last_row,
            ],
        )
        .unwrap()
    }

    #[test]
    fn valid_absorbing_chain_has_empty_report() {
        let chain = three_state(vec![(2, q(1, 1))]);
        let report = validate_chain(&chain, &Targets::single("T", vec![2]));
        assert!(report.is_valid(), "{report}");
    }

    #[test]
    fn open_target_is_reported() {
        let chain = three_state(vec![(0, q(1, 1))]);
        let report = validate_chain(&chain, &Targets::single("T", vec![2]));
        assert_eq!(
            report.violations,
            vec![Violation::NotClosed {
                class: "T".into(),
                state: 2,
                to: 0
            }]
        );
        assert!(report
            .to_string()
            .starts_with("target class T not closed at state 2"));
    }

    #[test]
    fn row_sum_violation_is_reported() {
        let chain = Chain::from_rows(
            labels(2),
            vec![vec![(0, q(1, 2)), (1, q(2, 5))], vec![(1, q(1, 1))]],
        )
        .unwrap();
        let report = validate_chain(&chain, &Targets::single("T", vec![1]));
        assert_eq!(report.to_string(), "row 0 sums to 9/10 ≠ 1");
    }

    #[test]
    fn structural_violations() {
        let chain = Chain::from_rows(
            vec!["a".into(), "a".into(), String::new()],
            vec![
                vec![(0, q(3, 2)), (1, q(-1, 2))],
                vec![(1, q(1, 1))],
                vec![(2, q(1, 1))],
            ],
        )
        .unwrap();
        let targets = Targets::new([
            ("X", vec![1]),
            ("X", vec![1, 2]),
            ("E", vec![]),
            ("Z", vec![9]),
        ]);
        let report = validate_chain(&chain, &targets);
        let v = &report.violations;
        assert!(v.iter().any(|x| matches!(
            x,
            Violation::NegativeEntry {
                state: 0,
                to: 1,
                ..
            }
        )));
        assert!(v.contains(&Violation::DuplicateLabel { label: "a".into() }));
        assert!(v.contains(&Violation::EmptyLabel { state: 2 }));
        assert!(v.contains(&Violation::DuplicateClassName { class: "X".into() }));
        assert!(v.contains(&Violation::EmptyClass { class: "E".into() }));
        assert!(v.contains(&Violation::TargetOutOfRange {
            class: "Z".into(),
            state: 9
        }));
        assert!(v
            .iter()
            .any(|x| matches!(x, Violation::Overlap { state: 1, .. })));
        let none = validate_chain(&chain, &Targets::new(Vec::<(String, Vec<usize>)>::new()));
        assert!(none.violations.contains(&Violation::NoTargets));
    }

    #[test]
    fn float_row_sum_tolerance() {
        let ok = Chain::from_rows(labels(1), vec![vec![(0, 1.0 - 5e-13)]]).unwrap();
        assert!(validate_chain(&ok, &Targets::single("T", vec![0])).is_valid());
        let bad = Chain::from_rows(labels(1), vec![vec![(0, 1.0 - 1e-11)]]).unwrap();
        assert!(!validate_chain(&bad, &Targets::single("T", vec![0])).is_valid());
    }

    #[test]
    fn canonical_form_drops_zeros_and_merges() {
        let a = Chain::from_rows(
            labels(2),
            vec![
                vec![(1, q(1, 4)), (0, q(0, 1)), (1, q(3, 4))],
                vec![(1, q(1, 1))],
            ],
        )
        .unwrap();
        assert_eq!(a.row(0), &[(1, q(1, 1))]);
        assert!(Chain::from_rows(labels(1), vec![vec![(3, q(1, 1))]]).is_err());
    }

    #[test]
    fn block_mass_basics() {
        let (cube, _) = gen_hypercube::<BigRational>(3, false).unwrap();
        let all: Vec<usize> = (0..cube.len()).collect();
        for e in 0..cube.len() {
            assert_eq!(block_mass(&cube, e, &all).unwrap(), q(1, 1));
            assert_eq!(block_mass(&cube, e, &[]).unwrap(), q(0, 1));
        }
        let e = cube.state_of("(1,0,0)").unwrap();
        let origin = cube.state_of("(0,0,0)").unwrap();
        assert_eq!(block_mass(&cube, e, &[origin]).unwrap(), q(1, 3));
        assert!(matches!(
            block_mass(&cube, 99, &[]),
            Err(Error::StateOutOfRange { state: 99, .. })
        ));
        assert!(block_mass(&cube, 0, &[42]).is_err());
    }
}
