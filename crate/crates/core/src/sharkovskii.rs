//! The Sharkovskii order on the positive integers.
//!
//! ```text
//! 3 ≺ 5 ≺ 7 ≺ … ≺ 2·3 ≺ 2·5 ≺ … ≺ 2²·3 ≺ … ≺ 2³ ≺ 2² ≺ 2 ≺ 1
//! ```
//!
//! `a ≺ b` means a cycle of period `a` forces one of period `b`.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SharkError {
    #[error("period set is empty")]
    EmptyInput,
    #[error("periods must be positive")]
    NonPositive,
    #[error("set with head {0} is not a finite Sharkovskii tail")]
    NotATail(u64),
}

/// `n = 2^dyadic_exponent · odd_part`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SharkKey {
    pub dyadic_exponent: u32,
    pub odd_part: u64,
}

impl SharkKey {
    pub fn of(n: u64) -> Self {
        assert!(n >= 1, "Sharkovskii keys are defined for n >= 1");
        let a = n.trailing_zeros();
        SharkKey { dyadic_exponent: a, odd_part: n >> a }
    }

    pub fn value(&self) -> u64 {
        self.odd_part << self.dyadic_exponent
    }

    /// Position in the order: `Less` means `self ≺ other`.
    pub fn shark_cmp(&self, other: &Self) -> Ordering {
        let (a, p) = (self.dyadic_exponent, self.odd_part);
        let (b, q) = (other.dyadic_exponent, other.odd_part);
        match (p > 1, q > 1) {
            (true, true) => a.cmp(&b).then(p.cmp(&q)),
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            (false, false) => b.cmp(&a),
        }
    }
}

/// `a ≺ b` and `a ≠ b`.
pub fn shark_less(a: u64, b: u64) -> bool {
    SharkKey::of(a).shark_cmp(&SharkKey::of(b)) == Ordering::Less
}

/// Total order comparator for sorting by `≺`.
pub fn shark_cmp(a: u64, b: u64) -> Ordering {
    SharkKey::of(a).shark_cmp(&SharkKey::of(b))
}

/// `{m ≤ bound : m = n or n ≺ m}`.
pub fn tail(n: u64, bound: u64) -> BTreeSet<u64> {
    (1..=bound).filter(|&m| m == n || shark_less(n, m)).collect()
}

/// A finite initial segment of some tail `T(head)` under `≻`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteTail {
    pub periods: BTreeSet<u64>,
    pub head: u64,
}

/// Recognizes a finite tail and returns its head, the `≺`-least element.
///
/// A finite set is accepted iff it equals `T(head) ∩ [1, max]`: every period
/// that `head` forces, up to the largest listed period, is present. For a power
/// of two this is the whole tail `T(head)`; otherwise it is the truncation of the
/// infinite tail at the set's maximum.
pub fn is_finite_tail(periods: &BTreeSet<u64>) -> Result<(bool, u64), SharkError> {
    if periods.contains(&0) {
        return Err(SharkError::NonPositive);
    }
    let head = periods.iter().copied().min_by(|&a, &b| shark_cmp(a, b)).ok_or(SharkError::EmptyInput)?;
    let max = *periods.iter().next_back().expect("nonempty");
    Ok((*periods == tail(head, max), head))
}

impl FiniteTail {
    pub fn new(periods: BTreeSet<u64>) -> Result<Self, SharkError> {
        match is_finite_tail(&periods)? {
            (true, head) => Ok(FiniteTail { periods, head }),
            (false, head) => Err(SharkError::NotATail(head)),
        }
    }

    /// `T(head) ∩ [1, bound]`.
    pub fn truncated(head: u64, bound: u64) -> Self {
        FiniteTail { periods: tail(head, bound), head }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[u64]) -> BTreeSet<u64> {
        v.iter().copied().collect()
    }

    #[test]
    fn order_examples() {
        assert!(shark_less(3, 5));
        assert!(shark_less(4, 2) && shark_less(2, 1));
        assert!(shark_less(6, 12) && !shark_less(12, 6));
        assert!(!shark_less(7, 7));
        assert!(shark_less(9, 6));
        assert!(shark_less(24, 8));
    }

    #[test]
    fn tails() {
        assert_eq!(tail(3, 10), (1..=10).collect());
        assert_eq!(tail(1, 10), set(&[1]));
        assert_eq!(tail(6, 12), set(&[1, 2, 4, 6, 8, 10, 12]));
        assert_eq!(tail(4, 64), set(&[1, 2, 4]));
    }

    #[test]
    fn finite_tails() {
        assert_eq!(is_finite_tail(&set(&[1, 2, 4])), Ok((true, 4)));
        assert_eq!(is_finite_tail(&set(&[1])), Ok((true, 1)));
        assert_eq!(is_finite_tail(&set(&[1, 2, 6])), Ok((false, 6)));
        assert_eq!(is_finite_tail(&set(&[1, 4])), Ok((false, 4)));
        assert_eq!(is_finite_tail(&set(&[1, 2, 4, 6])), Ok((true, 6)));
        assert!(FiniteTail::new(set(&[2, 6])).is_err());
        assert_eq!(is_finite_tail(&BTreeSet::new()), Err(SharkError::EmptyInput));
    }

    #[test]
    fn key_roundtrip() {
        for n in 1..500 {
            let k = SharkKey::of(n);
            assert_eq!(k.value(), n);
            assert_eq!(k.odd_part % 2, 1);
        }
    }
}
