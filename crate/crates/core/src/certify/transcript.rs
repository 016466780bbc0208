use serde::{Deserialize, Serialize};

use crate::number::Scalar;

/// One checked inequality `lhs ⋈ rhs` with the values that were compared.
///
/// With the double-precision backend `lhs` and `rhs` are directed bounds, so a
/// `true` verdict still certifies the exact inequality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InequalityLine {
    pub expression: String,
    pub lhs: String,
    pub rhs: String,
    pub verdict: bool,
}

impl InequalityLine {
    pub fn new(expression: impl Into<String>, lhs: impl ToString, rhs: impl ToString, verdict: bool) -> Self {
        InequalityLine { expression: expression.into(), lhs: lhs.to_string(), rhs: rhs.to_string(), verdict }
    }

    pub fn lt<S: Scalar>(expression: impl Into<String>, lhs: &S, rhs: &S) -> Self {
        Self::new(expression, lhs, rhs, lhs < rhs)
    }

    pub fn le<S: Scalar>(expression: impl Into<String>, lhs: &S, rhs: &S) -> Self {
        Self::new(expression, lhs, rhs, lhs <= rhs)
    }
}

/// `true` iff every line holds.
pub fn all_hold(lines: &[InequalityLine]) -> bool {
    lines.iter().all(|l| l.verdict)
}
