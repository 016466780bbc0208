use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{NumberError, Rational, Scalar};

/// Closed interval `[lo, hi]` with `lo <= hi`.
///
/// Arithmetic returns enclosures: the result contains every value the exact
/// operation can take on the operands. With the [`Rational`] backend the
/// enclosure is the exact range.
#[derive(Clone, PartialEq)]
pub struct Interval<S> {
    lo: S,
    hi: S,
}

impl<S: Scalar> Interval<S> {
    pub fn new(lo: S, hi: S) -> Result<Self, NumberError> {
        if !(lo <= hi) {
            return Err(NumberError::EmptyInterval(format!("[{lo}, {hi}]")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn point(x: S) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    /// `[center - radius, center + radius]`, widened outward if rounding.
    pub fn centered(center: &S, radius: &S) -> Self {
        Interval {
            lo: (center.clone() - radius.clone()).round_down(),
            hi: (center.clone() + radius.clone()).round_up(),
        }
    }

    pub fn lo(&self) -> &S {
        &self.lo
    }

    pub fn hi(&self) -> &S {
        &self.hi
    }

    pub fn into_bounds(self) -> (S, S) {
        (self.lo, self.hi)
    }

    /// Upper bound on `hi - lo`.
    pub fn width(&self) -> S {
        (self.hi.clone() - self.lo.clone()).round_up()
    }

    pub fn midpoint(&self) -> S {
        (self.lo.clone() + self.hi.clone()).half()
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &S) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn contains_interior(&self, x: &S) -> bool {
        self.lo < *x && *x < self.hi
    }

    pub fn subset_of(&self, other: &Self) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// `self ⊂ int(other)`.
    pub fn subset_of_interior(&self, other: &Self) -> bool {
        other.lo < self.lo && self.hi < other.hi
    }

    pub fn intersects(&self, other: &Self) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersection(&self, other: &Self) -> Option<Self> {
        let lo = S::max_of(&self.lo, &other.lo);
        let hi = S::min_of(&self.hi, &other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn hull(&self, other: &Self) -> Self {
        Interval { lo: S::min_of(&self.lo, &other.lo), hi: S::max_of(&self.hi, &other.hi) }
    }

    pub fn hull_point(&self, x: &S) -> Self {
        Interval { lo: S::min_of(&self.lo, x), hi: S::max_of(&self.hi, x) }
    }

    /// Lower bound on the gap between the two intervals (zero if they meet).
    pub fn distance(&self, other: &Self) -> S {
        if self.hi < other.lo {
            (other.lo.clone() - self.hi.clone()).round_down()
        } else if other.hi < self.lo {
            (self.lo.clone() - other.hi.clone()).round_down()
        } else {
            S::zero()
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Interval {
            lo: (self.lo.clone() + other.lo.clone()).round_down(),
            hi: (self.hi.clone() + other.hi.clone()).round_up(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Interval {
            lo: (self.lo.clone() - other.hi.clone()).round_down(),
            hi: (self.hi.clone() - other.lo.clone()).round_up(),
        }
    }

    pub fn neg(&self) -> Self {
        Interval { lo: -self.hi.clone(), hi: -self.lo.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let products = [(&self.lo, &other.lo), (&self.lo, &other.hi), (&self.hi, &other.lo), (&self.hi, &other.hi)];
        let mut lo: Option<S> = None;
        let mut hi: Option<S> = None;
        for (a, b) in products {
            let p = a.clone() * b.clone();
            let (d, u) = (p.clone().round_down(), p.round_up());
            lo = Some(match lo {
                Some(l) => S::min_of(&l, &d),
                None => d,
            });
            hi = Some(match hi {
                Some(h) => S::max_of(&h, &u),
                None => u,
            });
        }
        Interval { lo: lo.unwrap(), hi: hi.unwrap() }
    }

    pub fn scale(&self, k: &S) -> Self {
        self.mul(&Interval::point(k.clone()))
    }

    pub fn div(&self, other: &Self) -> Result<Self, NumberError> {
        if other.contains(&S::zero()) {
            return Err(NumberError::DivisionByZero);
        }
        let recip =
            Interval { lo: (S::one() / other.hi.clone()).round_down(), hi: (S::one() / other.lo.clone()).round_up() };
        // for the exact backend avoid the extra reciprocal step
        if S::EXACT {
            let quotients = [
                self.lo.clone() / other.lo.clone(),
                self.lo.clone() / other.hi.clone(),
                self.hi.clone() / other.lo.clone(),
                self.hi.clone() / other.hi.clone(),
            ];
            let lo = quotients.iter().fold(quotients[0].clone(), |a, b| S::min_of(&a, b));
            let hi = quotients.iter().fold(quotients[0].clone(), |a, b| S::max_of(&a, b));
            return Ok(Interval { lo, hi });
        }
        Ok(self.mul(&recip))
    }

    /// Range of `|x|` over the interval.
    pub fn abs(&self) -> Self {
        if self.lo >= S::zero() {
            self.clone()
        } else if self.hi <= S::zero() {
            self.neg()
        } else {
            Interval { lo: S::zero(), hi: S::max_of(&-self.lo.clone(), &self.hi) }
        }
    }

    /// Smallest value of `|x|` over the interval.
    pub fn mig(&self) -> S {
        self.abs().lo
    }

    /// Largest value of `|x|` over the interval.
    pub fn mag(&self) -> S {
        self.abs().hi
    }

    pub fn map_bounds<T: Scalar>(&self, down: impl Fn(&S) -> T, up: impl Fn(&S) -> T) -> Interval<T> {
        Interval { lo: down(&self.lo), hi: up(&self.hi) }
    }

    /// Outward conversion to doubles.
    pub fn to_f64(&self) -> Interval<f64> {
        Interval { lo: self.lo.to_rational().to_f64_down(), hi: self.hi.to_rational().to_f64_up() }
    }

    pub fn to_rational(&self) -> Interval<Rational> {
        Interval { lo: self.lo.to_rational(), hi: self.hi.to_rational() }
    }
}

impl<S: Eq> Eq for Interval<S> {}

impl<S: fmt::Display> fmt::Display for Interval<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl<S: fmt::Display> fmt::Debug for Interval<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl<S: Serialize> Serialize for Interval<S> {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> Result<Ser::Ok, Ser::Error> {
        (&self.lo, &self.hi).serialize(serializer)
    }
}

impl<'de, S: Scalar + Deserialize<'de>> Deserialize<'de> for Interval<S> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let (lo, hi) = <(S, S)>::deserialize(deserializer)?;
        Interval::new(lo, hi).map_err(serde::de::Error::custom)
    }
}

/// Merge a list of intervals into sorted, pairwise disjoint, non-touching pieces.
pub fn normalize_union<S: Scalar>(mut pieces: Vec<Interval<S>>) -> Vec<Interval<S>> {
    pieces.sort_by(|a, b| a.lo.partial_cmp(&b.lo).expect("ordered scalars"));
    let mut out: Vec<Interval<S>> = Vec::with_capacity(pieces.len());
    for p in pieces {
        match out.last_mut() {
            Some(last) if p.lo <= last.hi => {
                if p.hi > last.hi {
                    last.hi = p.hi;
                }
            }
            _ => out.push(p),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::rat;

    fn ri(a: (i64, i64), b: (i64, i64)) -> Interval<Rational> {
        Interval::new(rat(a.0, a.1), rat(b.0, b.1)).unwrap()
    }

    #[test]
    fn rejects_reversed_bounds() {
        assert!(Interval::new(rat(1, 2), rat(1, 3)).is_err());
        assert!(Interval::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn exact_arithmetic() {
        let a = ri((-1, 2), (1, 1));
        let b = ri((2, 1), (3, 1));
        assert_eq!(a.mul(&b), ri((-3, 2), (3, 1)));
        assert_eq!(a.sub(&b), ri((-7, 2), (-1, 1)));
        assert_eq!(a.div(&b).unwrap(), ri((-1, 4), (1, 2)));
        assert!(b.div(&a).is_err());
        assert_eq!(a.abs(), ri((0, 1), (1, 1)));
    }

    #[test]
    fn float_ops_enclose_exact_result() {
        let a = Interval::new(0.1, 0.3).unwrap();
        let b = Interval::new(0.7, 0.9).unwrap();
        let prod = a.mul(&b);
        let exact_lo = rat(1, 10) * rat(7, 10);
        let exact_hi = rat(3, 10) * rat(9, 10);
        assert!(prod.lo().to_rational() <= exact_lo);
        assert!(prod.hi().to_rational() >= exact_hi);
    }

    #[test]
    fn union_normalization() {
        let u = normalize_union(vec![ri((3, 1), (4, 1)), ri((0, 1), (1, 1)), ri((1, 1), (2, 1))]);
        assert_eq!(u, vec![ri((0, 1), (2, 1)), ri((3, 1), (4, 1))]);
    }

    #[test]
    fn distance_and_interior() {
        let a = ri((0, 1), (1, 1));
        let b = ri((3, 2), (2, 1));
        assert_eq!(a.distance(&b), rat(1, 2));
        assert!(ri((1, 4), (3, 4)).subset_of_interior(&a));
        assert!(!ri((0, 1), (3, 4)).subset_of_interior(&a));
    }
}
