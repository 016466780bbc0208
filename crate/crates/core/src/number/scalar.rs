use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::Rational;

/// Arithmetic backend for certified computations.
///
/// Two implementations exist: [`Rational`] (exact, rounding is the identity)
/// and `f64` (every rounded result is pushed one ulp outward so interval
/// endpoints stay valid bounds).
pub trait Scalar:
    Clone
    + PartialOrd
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    /// A value `<= r`.
    fn from_rational_down(r: &Rational) -> Self;
    /// A value `>= r`.
    fn from_rational_up(r: &Rational) -> Self;
    /// Nearby value; exactness is not required.
    fn from_f64_approx(x: f64) -> Self;
    fn to_f64(&self) -> f64;
    /// Exact rational value. Panics on non-finite doubles.
    fn to_rational(&self) -> Rational;
    /// Lower bound of a freshly rounded result.
    fn round_down(self) -> Self;
    /// Upper bound of a freshly rounded result.
    fn round_up(self) -> Self;

    fn abs(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn min_of(a: &Self, b: &Self) -> Self {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    fn max_of(a: &Self, b: &Self) -> Self {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    fn half(&self) -> Self {
        self.clone() / Self::from_int(2)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn from_int(n: i64) -> Self {
        Rational::integer(n)
    }
    fn from_rational_down(r: &Rational) -> Self {
        r.clone()
    }
    fn from_rational_up(r: &Rational) -> Self {
        r.clone()
    }
    fn from_f64_approx(x: f64) -> Self {
        Rational::approximate_f64(x, 1 << 20)
    }
    fn to_f64(&self) -> f64 {
        Rational::to_f64(self)
    }
    fn to_rational(&self) -> Rational {
        self.clone()
    }
    fn round_down(self) -> Self {
        self
    }
    fn round_up(self) -> Self {
        self
    }
    fn abs(&self) -> Self {
        Rational::abs(self)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_int(n: i64) -> Self {
        n as f64
    }
    fn from_rational_down(r: &Rational) -> Self {
        r.to_f64_down()
    }
    fn from_rational_up(r: &Rational) -> Self {
        r.to_f64_up()
    }
    fn from_f64_approx(x: f64) -> Self {
        x
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn to_rational(&self) -> Rational {
        Rational::from_f64_exact(*self).expect("finite double")
    }
    // An exact zero stays zero: sums only round to zero when exact, and the
    // magnitudes handled here never underflow in products.
    fn round_down(self) -> Self {
        if self == 0.0 {
            0.0
        } else {
            self.next_down()
        }
    }
    fn round_up(self) -> Self {
        if self == 0.0 {
            0.0
        } else {
            self.next_up()
        }
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn half(&self) -> Self {
        // exact except on subnormals, which never occur here
        *self * 0.5
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_rounding_is_outward() {
        let x = 0.1f64 + 0.2;
        assert!(x.round_down() < x && x < x.round_up());
        assert_eq!(0.0f64.round_down(), 0.0);
        assert_eq!(0.0f64.round_up(), 0.0);
    }
}
