//! Probability values in one of two arithmetic modes.
//!
//! A chain is either entirely exact ([`BigRational`]) or entirely float
//! ([`f64`]); the [`Weight`] trait is what every algorithm is generic over.
//! Exact mode makes the equality tests of the refinement operator decidable,
//! float mode exists for measured data and compares under an absolute
//! tolerance.

use std::cmp::Ordering;
use std::fmt::{self, Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Exact rational probability.
pub type Exact = BigRational;

/// Absolute slack used when checking float rows and distributions sum to one.
pub const ROW_SUM_TOLERANCE: f64 = 1e-12;

/// Default absolute tolerance for float-mode signature comparison.
pub const DEFAULT_EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => f.write_str("exact"),
            Mode::Float => f.write_str("float"),
        }
    }
}

/// Arithmetic over transition probabilities.
///
/// `within` is the only comparison the algorithms use for "same value": in
/// exact mode it is plain equality and the tolerance is ignored.
pub trait Weight:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    const MODE: Mode;

    /// `num / den`; `den` must be nonzero.
    fn from_ratio(num: i64, den: i64) -> Self;

    fn div(&self, other: &Self) -> Self;

    /// Total order; float NaN sorts per [`f64::total_cmp`].
    fn total_cmp(&self, other: &Self) -> Ordering;

    fn within(&self, other: &Self, epsilon: f64) -> bool;

    fn to_f64(&self) -> f64;

    fn abs(&self) -> Self;

    /// Whether a row/distribution total is acceptably one.
    fn is_unit_sum(&self) -> bool;

    /// Whether a value is in `[0, 1]` (float: with [`ROW_SUM_TOLERANCE`] slack).
    fn is_probability(&self) -> bool;

    /// Lower is a better pivot for elimination.
    fn pivot_cost(&self) -> f64;

    /// Text form used by the chain document: `a/b` or a decimal literal.
    fn render(&self) -> String;

    fn add_ref(&mut self, other: &Self);
}

impl Weight for BigRational {
    const MODE: Mode = Mode::Exact;

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn div(&self, other: &Self) -> Self {
        self / other
    }

    fn total_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }

    fn within(&self, other: &Self, _epsilon: f64) -> bool {
        self == other
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn is_unit_sum(&self) -> bool {
        self.is_one()
    }

    fn is_probability(&self) -> bool {
        !self.is_negative() && *self <= BigRational::one()
    }

    fn pivot_cost(&self) -> f64 {
        (self.numer().bits() + self.denom().bits()) as f64
    }

    fn render(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }

    fn add_ref(&mut self, other: &Self) {
        *self += other;
    }
}

impl Weight for f64 {
    const MODE: Mode = Mode::Float;

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn div(&self, other: &Self) -> Self {
        self / other
    }

    fn total_cmp(&self, other: &Self) -> Ordering {
        f64::total_cmp(self, other)
    }

    fn within(&self, other: &Self, epsilon: f64) -> bool {
        (self - other).abs() <= epsilon
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn is_unit_sum(&self) -> bool {
        (self - 1.0).abs() <= ROW_SUM_TOLERANCE
    }

    fn is_probability(&self) -> bool {
        *self >= -ROW_SUM_TOLERANCE && *self <= 1.0 + ROW_SUM_TOLERANCE
    }

    fn pivot_cost(&self) -> f64 {
        -f64::abs(*self)
    }

    fn render(&self) -> String {
        // Debug keeps a decimal point ("1.0") and round-trips exactly.
        format!("{self:?}")
    }

    fn add_ref(&mut self, other: &Self) {
        *self += *other;
    }
}

/// Parses `a/b` (exact) or an integer literal into a reduced rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (
            n.trim().parse::<BigInt>().ok()?,
            d.trim().parse::<BigInt>().ok()?,
        ),
        None => (text.parse::<BigInt>().ok()?, BigInt::one()),
    };
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

/// Compares two sparse vectors (sorted by key, absent = zero) lexicographically
/// as if they were dense.
pub fn cmp_sparse<W: Weight>(a: &[(usize, W)], b: &[(usize, W)]) -> Ordering {
    let zero = W::zero();
    let (mut i, mut j) = (0, 0);
    loop {
        let (ka, va) = a.get(i).map_or((usize::MAX, &zero), |(k, v)| (*k, v));
        let (kb, vb) = b.get(j).map_or((usize::MAX, &zero), |(k, v)| (*k, v));
        if ka == usize::MAX && kb == usize::MAX {
            return Ordering::Equal;
        }
        let ord = match ka.cmp(&kb) {
            Ordering::Equal => {
                i += 1;
                j += 1;
                va.total_cmp(vb)
            }
            Ordering::Less => {
                i += 1;
                va.total_cmp(&zero)
            }
            Ordering::Greater => {
                j += 1;
                zero.total_cmp(vb)
            }
        };
        if ord != Ordering::Equal {
            return ord;
        }
    }
}

/// Component-wise `within` over two sparse vectors.
pub fn sparse_within<W: Weight>(a: &[(usize, W)], b: &[(usize, W)], epsilon: f64) -> bool {
    let zero = W::zero();
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ka = a.get(i).map_or(usize::MAX, |e| e.0);
        let kb = b.get(j).map_or(usize::MAX, |e| e.0);
        let same = match ka.cmp(&kb) {
            Ordering::Equal => {
                let r = a[i].1.within(&b[j].1, epsilon);
                i += 1;
                j += 1;
                r
            }
            Ordering::Less => {
                i += 1;
                a[i - 1].1.within(&zero, epsilon)
            }
            Ordering::Greater => {
                j += 1;
                b[j - 1].1.within(&zero, epsilon)
            }
        };
        if !same {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::from_ratio(n, d)
    }

    #[test]
    fn rationals_are_reduced() {
        let v = q(6, -8);
        assert_eq!(v.numer(), &BigInt::from(-3));
        assert_eq!(v.denom(), &BigInt::from(4));
        assert_eq!(parse_rational("2/4").unwrap().render(), "1/2");
        assert_eq!(parse_rational("3").unwrap().render(), "3/1");
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("0.5").is_none());
    }

    #[test]
    fn probability_bounds() {
        assert!(q(1, 1).is_probability());
        assert!(!q(11, 10).is_probability());
        assert!(!q(-1, 10).is_probability());
        assert!((1.0 + 5e-13).is_probability());
        assert!(!(1.0 + 1e-11).is_probability());
        assert!((1.0 - 1e-13).is_unit_sum());
        assert!(!(0.999).is_unit_sum());
    }

    #[test]
    fn sparse_comparison_treats_missing_as_zero() {
        let a = vec![(0, q(1, 2)), (2, q(1, 2))];
        let b = vec![(0, q(1, 2)), (1, q(0, 1)), (2, q(1, 2))];
        assert_eq!(cmp_sparse(&a, &b), Ordering::Equal);
        let c = vec![(0, q(1, 2)), (1, q(1, 2))];
        // c has mass at block 1 where a has none.
        assert_eq!(cmp_sparse(&a, &c), Ordering::Less);
        assert!(sparse_within(&[(0, 0.5), (3, 1e-10)], &[(0, 0.5)], 1e-9));
        assert!(!sparse_within(&[(0, 0.5), (3, 1e-8)], &[(0, 0.5)], 1e-9));
    }

    #[test]
    fn float_render_round_trips() {
        for v in [1.0, 0.1, 1.0 / 3.0, 2.5e-7] {
            let text = v.render();
            assert!(text.contains('.') || text.contains('e'));
            assert_eq!(text.parse::<f64>().unwrap(), v);
        }
    }
}
