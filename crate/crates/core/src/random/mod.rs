//! Random perturbations of the base map and the random periodic orbits they
//! carry.
//!
//! - [`noise`]: the noise models, fibre maps and cocycle iteration;
//! - [`membership`]: the class `R¹_ε(f)` and the asymmetric-tent neighbourhood;
//! - [`pullback`]: pullback estimates, orbit sets, tubes and `(δ, k)` checks.

pub mod membership;
pub mod noise;
pub mod pullback;

pub use membership::{check_r1_membership, verify_random_isolating_tent, MembershipReport, RandomIsolatingCertificate};
pub use noise::{
    assign_fibres, cocycle_iterate, cocycle_iterate_from, sample_map, FibreScalar, NoiseKind, NoiseModel, SampledMap,
    TrajectoryRecord, ENCLOSURE_BITS, FLOAT_DRIFT,
};
pub use pullback::{
    build_tube, delta_k_on_tube, detect_delta_k_orbit, minimal_period_check, orbit_set, period_check_on_tube,
    pullback_periodic_point, step_is_forced, DeltaKReport, PeriodCheckReport, RandomPeriodicEstimate, Tube, Verdict,
};

use thiserror::Error;

use crate::number::NumberError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RandomError {
    #[error("invalid noise model: {0}")]
    InvalidNoise(String),
    #[error("the logistic family has no exact rational fibre maps")]
    InexactFamily,
    #[error("iterate {0} left [0, 1]")]
    DomainEscape(String),
    #[error("R¹_ε condition {clause} fails at {witness}: {detail}")]
    ConditionFailed { clause: u8, witness: String, detail: String },
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("itinerary broken by fibre map {index} on N_{}", .component + 1)]
    ItineraryBroken { index: i64, component: usize },
    #[error("derivative dichotomy fails on the block starting at fibre {index}")]
    DichotomyBroken { index: i64 },
    #[error("orbit points {0} and {1} are not separated")]
    OrbitCollapsed(usize, usize),
    #[error(transparent)]
    Number(#[from] NumberError),
}
