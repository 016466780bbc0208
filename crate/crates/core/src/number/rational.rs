//! Exact rational scalars.
//!
//! A thin newtype over [`num_rational::BigRational`] that fixes the textual
//! form used everywhere in the crate: `"p/q"` in lowest terms, or `"p"` when
//! the denominator is one.

use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::NumberError;

/// Arbitrary-precision rational number, always in lowest terms with a
/// positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn from_bigints(numer: BigInt, denom: BigInt) -> Result<Self, NumberError> {
        if denom.is_zero() {
            return Err(NumberError::Parse("zero denominator".into()));
        }
        Ok(Rational(BigRational::new(numer, denom)))
    }

    pub fn integer(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    /// Exact value of a finite double (every finite `f64` is dyadic).
    pub fn from_f64_exact(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(Rational)
    }

    /// Best rational with denominator at most `max_denom` (continued fractions).
    pub fn approximate_f64(x: f64, max_denom: u64) -> Self {
        assert!(x.is_finite());
        let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
        let mut r = x.abs();
        for _ in 0..64 {
            let a = r.floor();
            if a > 1e18 {
                break;
            }
            let a = a as i128;
            let p2 = a * p1 + p0;
            let q2 = a * q1 + q0;
            if q2 > max_denom as i128 {
                break;
            }
            (p0, q0, p1, q1) = (p1, q1, p2, q2);
            let frac = r - a as f64;
            if frac < 1e-15 {
                break;
            }
            r = 1.0 / frac;
        }
        if q1 == 0 {
            return Rational::integer(x.round() as i64);
        }
        let sign = if x < 0.0 { -1 } else { 1 };
        Rational(BigRational::new(BigInt::from(sign * p1), BigInt::from(q1)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn signum(&self) -> i8 {
        match self.0.cmp(&BigRational::zero()) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    pub fn recip(&self) -> Self {
        Rational(self.0.recip())
    }

    pub fn pow(&self, exp: i32) -> Self {
        Rational(num_traits::Pow::pow(&self.0, exp))
    }

    pub fn min_of(a: &Self, b: &Self) -> Self {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    pub fn max_of(a: &Self, b: &Self) -> Self {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    /// Nearest double (round to nearest, ties handled by the conversion).
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or_else(|| if self.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
    }

    /// Largest double that is `<= self`.
    pub fn to_f64_down(&self) -> f64 {
        let x = self.to_f64();
        match Rational::from_f64_exact(x) {
            Some(r) if r <= *self => x,
            _ => x.next_down(),
        }
    }

    /// Smallest double that is `>= self`.
    pub fn to_f64_up(&self) -> f64 {
        let x = self.to_f64();
        match Rational::from_f64_exact(x) {
            Some(r) if r >= *self => x,
            _ => x.next_up(),
        }
    }

    /// Bit length of numerator plus denominator; a cheap size measure.
    pub fn bits(&self) -> u64 {
        self.0.numer().bits() + self.0.denom().bits()
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }

    /// Largest multiple of `2^-bits` that is `<= self`.
    pub fn dyadic_floor(&self, bits: u32) -> Rational {
        let scale = BigRational::from_integer(BigInt::one() << bits);
        Rational((&self.0 * &scale).floor() / scale)
    }

    /// Smallest multiple of `2^-bits` that is `>= self`.
    pub fn dyadic_ceil(&self, bits: u32) -> Rational {
        let scale = BigRational::from_integer(BigInt::one() << bits);
        Rational((&self.0 * &scale).ceil() / scale)
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::integer(n)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts `"p/q"`, `"p"`, and plain decimals such as `"-0.0125"` (read exactly).
impl FromStr for Rational {
    type Err = NumberError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || NumberError::Parse(format!("not a rational: {s:?}"));
        if let Some((p, q)) = s.split_once('/') {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            return Rational::from_bigints(p, q);
        }
        if let Some((int_part, frac_part)) = s.split_once('.') {
            let negative = int_part.starts_with('-');
            let int_digits = int_part.trim_start_matches(['-', '+']);
            if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let whole: BigInt =
                if int_digits.is_empty() { BigInt::zero() } else { int_digits.parse().map_err(|_| bad())? };
            let frac: BigInt = frac_part.parse().map_err(|_| bad())?;
            let scale = num_traits::pow(BigInt::from(10), frac_part.len());
            let mag = BigRational::new(whole * &scale + frac, scale);
            return Ok(Rational(if negative { -mag } else { mag }));
        }
        let p: BigInt = s.parse().map_err(|_| bad())?;
        Ok(Rational(BigRational::from_integer(p)))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl<'a> $tr<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
        impl<'a, 'b> $tr<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'b Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::one(), |a, b| a * b)
    }
}

/// Shorthand for `Rational::new(p, q)`.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(p, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_and_sign() {
        let r = rat(4, -14);
        assert_eq!(r.to_string(), "-2/7");
        assert!(r.denom() > &BigInt::zero());
        assert_eq!(rat(6, 3).to_string(), "2");
    }

    #[test]
    fn parse_forms() {
        assert_eq!("2/7".parse::<Rational>().unwrap(), rat(2, 7));
        assert_eq!("-3".parse::<Rational>().unwrap(), rat(-3, 1));
        assert_eq!("0.4".parse::<Rational>().unwrap(), rat(2, 5));
        assert_eq!("-0.0125".parse::<Rational>().unwrap(), rat(-1, 80));
        assert_eq!(".5".parse::<Rational>().unwrap(), rat(1, 2));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("abc".parse::<Rational>().is_err());
        assert!("1.".parse::<Rational>().is_err());
    }

    #[test]
    fn directed_f64_conversion_brackets_value() {
        for r in [rat(1, 3), rat(2, 7), rat(-5, 11), rat(1, 1 << 40), rat(7, 1)] {
            let lo = Rational::from_f64_exact(r.to_f64_down()).unwrap();
            let hi = Rational::from_f64_exact(r.to_f64_up()).unwrap();
            assert!(lo <= r && r <= hi, "{r}");
        }
        assert_eq!(rat(1, 2).to_f64_down(), 0.5);
        assert_eq!(rat(1, 2).to_f64_up(), 0.5);
    }

    #[test]
    fn continued_fraction_approximation() {
        assert_eq!(Rational::approximate_f64(0.75, 100), rat(3, 4));
        assert_eq!(Rational::approximate_f64(std::f64::consts::PI, 1000), rat(355, 113));
        assert_eq!(Rational::approximate_f64(-0.5, 10), rat(-1, 2));
    }

    #[test]
    fn serde_uses_string_form() {
        let v = serde_json::to_string(&vec![rat(2, 7), rat(3, 1)]).unwrap();
        assert_eq!(v, r#"["2/7","3"]"#);
        let back: Vec<Rational> = serde_json::from_str(&v).unwrap();
        assert_eq!(back, vec![rat(2, 7), rat(3, 1)]);
    }
}
