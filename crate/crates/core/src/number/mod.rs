//! Scalars, interval enclosures and interval maps.

mod affine;
mod interval;
mod rational;
mod scalar;
mod smooth;

pub use affine::{AffineBranch, PiecewiseAffineMap};
pub use interval::{normalize_union, Interval};
pub use rational::{rat, Rational};
pub use scalar::Scalar;
pub use smooth::DifferentiableMapHandle;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumberError {
    #[error("point {0} lies outside the map domain")]
    Domain(String),
    #[error("branch {0} has zero slope and cannot be inverted")]
    NotInvertible(usize),
    #[error("value {value} is outside the image {image} of branch {branch}")]
    Range { branch: usize, value: String, image: String },
    #[error("no branch with index {0}")]
    NoSuchBranch(usize),
    #[error("empty interval {0}")]
    EmptyInterval(String),
    #[error("division by an interval containing zero")]
    DivisionByZero,
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("map is not monotone on {0}")]
    NotMonotone(String),
}

/// A continuous self-map of a compact interval that can be evaluated on
/// interval enclosures in the backend `S`.
pub trait IntervalMap<S: Scalar>: Send + Sync {
    fn domain(&self) -> Interval<S>;

    /// Enclosure of `f(J)`. `J` must lie in the domain.
    fn image(&self, j: &Interval<S>) -> Result<Interval<S>, NumberError>;

    /// Enclosure of `{f'(x) : x ∈ J}`; at a corner both one-sided slopes count.
    fn derivative(&self, j: &Interval<S>) -> Result<Interval<S>, NumberError>;

    /// Points where the map fails to be C¹.
    fn breakpoints(&self) -> Vec<S>;

    /// Enclosure of `{x ∈ within : f(x) ∈ y}`, or `None` when that set is
    /// certainly empty. `f` must be monotone on `within`.
    fn preimage_in(&self, y: &Interval<S>, within: &Interval<S>) -> Result<Option<Interval<S>>, NumberError>;

    fn describe(&self) -> String;

    /// Whether [`IntervalMap::image`] returns the exact image rather than an enclosure.
    fn image_is_exact(&self) -> bool {
        false
    }

    fn value(&self, x: &S) -> Result<Interval<S>, NumberError> {
        self.image(&Interval::point(x.clone()))
    }
}

impl<S: Scalar, M: IntervalMap<S> + ?Sized> IntervalMap<S> for &M {
    fn domain(&self) -> Interval<S> {
        (**self).domain()
    }
    fn image(&self, j: &Interval<S>) -> Result<Interval<S>, NumberError> {
        (**self).image(j)
    }
    fn derivative(&self, j: &Interval<S>) -> Result<Interval<S>, NumberError> {
        (**self).derivative(j)
    }
    fn breakpoints(&self) -> Vec<S> {
        (**self).breakpoints()
    }
    fn preimage_in(&self, y: &Interval<S>, within: &Interval<S>) -> Result<Option<Interval<S>>, NumberError> {
        (**self).preimage_in(y, within)
    }
    fn describe(&self) -> String {
        (**self).describe()
    }
    fn image_is_exact(&self) -> bool {
        (**self).image_is_exact()
    }
}
