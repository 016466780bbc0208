//! Desk-scale verification of random Sharkovskii forcing.
//!
//! The crate enumerates exact periodic orbits of tent-type maps, builds
//! certified isolating neighbourhoods around hyperbolic cycles, writes down
//! their Conley index matrices, and follows the resulting random periodic
//! orbits under small random perturbations of the map.
//!
//! Modules, bottom-up:
//! - [`number`]: exact rationals, interval enclosures, interval maps;
//! - [`sharkovskii`]: the order `≺`, tails and finite tails;
//! - [`cycles`]: tent-family cycles, critical and realization heights;
//! - [`conley`]: isolating neighbourhoods, index matrices, the `ε` budget;
//! - [`random`]: noise models, cocycles, pullback and `(δ, k)` detection;
//! - [`certify`]: JSON certificates, the realization pipeline, CSV output.

// Negated comparisons are deliberate: with the f64 backend they reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certify;
pub mod conley;
pub mod cycles;
pub mod number;
pub mod random;
pub mod sharkovskii;

pub use number::{rat, Interval, IntervalMap, PiecewiseAffineMap, Rational};

/// Version string recorded in certificate provenance.
pub const TOOL_VERSION: &str = concat!("sharktail ", env!("CARGO_PKG_VERSION"));
