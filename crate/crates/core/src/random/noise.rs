use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use super::RandomError;
use crate::number::{
    DifferentiableMapHandle, Interval, IntervalMap, NumberError, PiecewiseAffineMap, Rational, Scalar,
};
use crate::rat;

/// Parameter law of the random family. Parameters are i.i.d. uniform on the
/// stated support.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum NoiseKind {
    /// `min(T(γ_n)(x), height)` with `γ_n` uniform on `(−ξ, ξ)`.
    AsymmetricTent { xi: Rational, height: Rational },
    /// `c_n·x·(1 − x)` with `c_n` uniform on `[c_lo, c_hi]`.
    Logistic { c_lo: f64, c_hi: f64 },
    /// The fixed map `min(T(x), height)`.
    Deterministic { height: Rational },
}

/// A random family over the Bernoulli shift.
///
/// The parameter of fibre `n ∈ ℤ` is drawn from ChaCha stream `n` of the
/// generator seeded with `seed`, so the shift `θ` is `n ↦ n + 1` and every
/// fibre, including negative ones, is available by random access.
/// `lambda ∈ [0, 1]` scales the noise amplitude around the base map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub kind: NoiseKind,
    pub seed: u64,
    pub lambda: Rational,
}

const TWO_POW_32: f64 = 4_294_967_296.0;

impl NoiseModel {
    pub fn new(kind: NoiseKind, seed: u64) -> Result<Self, RandomError> {
        match &kind {
            NoiseKind::AsymmetricTent { xi, height } => {
                if xi.is_negative() || *xi >= rat(1, 2) {
                    return Err(RandomError::InvalidNoise(format!("ξ = {xi} must lie in [0, 1/2)")));
                }
                check_height(height)?;
            }
            NoiseKind::Logistic { c_lo, c_hi } => {
                if !(*c_lo > 0.0 && c_lo <= c_hi && *c_hi <= 4.0) {
                    return Err(RandomError::InvalidNoise(format!("[{c_lo}, {c_hi}] must lie in (0, 4]")));
                }
            }
            NoiseKind::Deterministic { height } => check_height(height)?,
        }
        Ok(NoiseModel { kind, seed, lambda: Rational::one() })
    }

    pub fn asymmetric_tent(xi: Rational, height: Rational, seed: u64) -> Result<Self, RandomError> {
        Self::new(NoiseKind::AsymmetricTent { xi, height }, seed)
    }

    pub fn deterministic(height: Rational) -> Result<Self, RandomError> {
        Self::new(NoiseKind::Deterministic { height }, 0)
    }

    pub fn logistic(c_lo: f64, c_hi: f64, seed: u64) -> Result<Self, RandomError> {
        Self::new(NoiseKind::Logistic { c_lo, c_hi }, seed)
    }

    pub fn with_lambda(mut self, lambda: Rational) -> Result<Self, RandomError> {
        if lambda.is_negative() || lambda > Rational::one() {
            return Err(RandomError::InvalidNoise(format!("λ = {lambda} must lie in [0, 1]")));
        }
        self.lambda = lambda;
        Ok(self)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Same family with the tent amplitude replaced by `xi`.
    pub fn with_xi(&self, xi: Rational) -> Result<Self, RandomError> {
        let kind = match &self.kind {
            NoiseKind::AsymmetricTent { height, .. } | NoiseKind::Deterministic { height } => {
                NoiseKind::AsymmetricTent { xi, height: height.clone() }
            }
            NoiseKind::Logistic { .. } => return Err(RandomError::InvalidNoise("ξ applies to tent families".into())),
        };
        NoiseModel { kind, ..self.clone() }.revalidate()
    }

    fn revalidate(self) -> Result<Self, RandomError> {
        let lambda = self.lambda.clone();
        Self::new(self.kind, self.seed)?.with_lambda(lambda)
    }

    pub fn is_affine(&self) -> bool {
        !matches!(self.kind, NoiseKind::Logistic { .. })
    }

    /// Cap of the tent family, if any.
    pub fn height(&self) -> Option<&Rational> {
        match &self.kind {
            NoiseKind::AsymmetricTent { height, .. } | NoiseKind::Deterministic { height } => Some(height),
            NoiseKind::Logistic { .. } => None,
        }
    }

    /// Effective tent amplitude `λ·ξ` (zero for the deterministic family).
    pub fn effective_xi(&self) -> Option<Rational> {
        match &self.kind {
            NoiseKind::AsymmetricTent { xi, .. } => Some(xi * &self.lambda),
            NoiseKind::Deterministic { .. } => Some(Rational::zero()),
            NoiseKind::Logistic { .. } => None,
        }
    }

    /// Base logistic parameter `(c_lo + c_hi)/2` and effective half-width.
    pub fn logistic_center(&self) -> Option<(f64, f64)> {
        match &self.kind {
            NoiseKind::Logistic { c_lo, c_hi } => {
                Some(((c_lo + c_hi) / 2.0, (c_hi - c_lo) / 2.0 * self.lambda.to_f64()))
            }
            _ => None,
        }
    }

    /// Raw 32-bit draw of fibre `index`.
    pub fn raw_draw(&self, index: i64) -> u32 {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index as u64);
        rng.next_u32()
    }

    /// `γ_n = λ·ξ·(2j + 1 − 2³²)/2³²` for the raw draw `j`: a dyadic rational
    /// in `(−λξ, λξ)`.
    pub fn gamma(&self, index: i64) -> Rational {
        match self.effective_xi() {
            Some(xi) if !xi.is_zero() => {
                let j = self.raw_draw(index) as i64;
                let u = Rational::new(2 * j + 1 - (1i64 << 32), 1i64 << 32);
                &xi * &u
            }
            _ => Rational::zero(),
        }
    }

    /// `c_n = c₀ + λ·(c − c₀)` with `c` uniform on `[c_lo, c_hi]`.
    pub fn logistic_parameter(&self, index: i64) -> Option<f64> {
        let (c0, half) = self.logistic_center()?;
        let u = (self.raw_draw(index) as f64 + 0.5) / TWO_POW_32;
        Some((c0 + half * (2.0 * u - 1.0)).clamp(f64::MIN_POSITIVE, 4.0))
    }

    /// The unperturbed map `f`.
    pub fn base_map(&self) -> SampledMap {
        match &self.kind {
            NoiseKind::AsymmetricTent { height, .. } | NoiseKind::Deterministic { height } => {
                SampledMap::Affine(PiecewiseAffineMap::truncated_tent(height).expect("validated height"))
            }
            NoiseKind::Logistic { .. } => {
                SampledMap::Smooth(DifferentiableMapHandle::logistic(self.logistic_center().expect("logistic").0))
            }
        }
    }

    /// Base map of a tent family.
    pub fn base_affine(&self) -> Result<PiecewiseAffineMap, RandomError> {
        match self.base_map() {
            SampledMap::Affine(m) => Ok(m),
            SampledMap::Smooth(_) => Err(RandomError::InexactFamily),
        }
    }

    /// Tent-family map of fibre `index`.
    pub fn affine_map(&self, index: i64) -> Result<PiecewiseAffineMap, RandomError> {
        let height = self.height().ok_or(RandomError::InexactFamily)?;
        Ok(PiecewiseAffineMap::truncated_asymmetric_tent(height, &self.gamma(index)).expect("validated noise"))
    }

    /// Human-readable description used in certificate provenance.
    pub fn describe(&self) -> String {
        serde_json::to_string(self).expect("serializable noise")
    }
}

fn check_height(h: &Rational) -> Result<(), RandomError> {
    if !(h.is_positive() && *h <= Rational::one()) {
        return Err(RandomError::InvalidNoise(format!("height {h} must lie in (0, 1]")));
    }
    Ok(())
}

/// The map of one fibre.
#[derive(Debug, Clone)]
pub enum SampledMap {
    Affine(PiecewiseAffineMap),
    Smooth(DifferentiableMapHandle),
}

/// `sample_map(noise, n)`: the map `x ↦ φ(1, θⁿω, x)`.
pub fn sample_map(noise: &NoiseModel, index: i64) -> SampledMap {
    match &noise.kind {
        NoiseKind::Logistic { .. } => {
            SampledMap::Smooth(DifferentiableMapHandle::logistic(noise.logistic_parameter(index).expect("logistic")))
        }
        _ => SampledMap::Affine(noise.affine_map(index).expect("tent family")),
    }
}

impl IntervalMap<f64> for SampledMap {
    fn domain(&self) -> Interval<f64> {
        match self {
            SampledMap::Affine(m) => IntervalMap::<f64>::domain(m),
            SampledMap::Smooth(m) => m.domain(),
        }
    }

    fn image(&self, j: &Interval<f64>) -> Result<Interval<f64>, NumberError> {
        match self {
            SampledMap::Affine(m) => m.image(j),
            SampledMap::Smooth(m) => m.image(j),
        }
    }

    fn derivative(&self, j: &Interval<f64>) -> Result<Interval<f64>, NumberError> {
        match self {
            SampledMap::Affine(m) => m.derivative(j),
            SampledMap::Smooth(m) => m.derivative(j),
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        match self {
            SampledMap::Affine(m) => IntervalMap::<f64>::breakpoints(m),
            SampledMap::Smooth(m) => m.breakpoints(),
        }
    }

    fn preimage_in(&self, y: &Interval<f64>, within: &Interval<f64>) -> Result<Option<Interval<f64>>, NumberError> {
        match self {
            SampledMap::Affine(m) => m.preimage_in(y, within),
            SampledMap::Smooth(m) => m.preimage_in(y, within),
        }
    }

    fn describe(&self) -> String {
        match self {
            SampledMap::Affine(m) => IntervalMap::<f64>::describe(m),
            SampledMap::Smooth(m) => m.describe(),
        }
    }
}

/// Scalars in which the fibre maps of a [`NoiseModel`] can be evaluated.
pub trait FibreScalar: Scalar {
    type Map: IntervalMap<Self>;

    fn fibre_map(noise: &NoiseModel, index: i64) -> Result<Self::Map, RandomError>;

    /// One step of the cocycle from a point.
    fn step(map: &Self::Map, x: &Self) -> Result<Self, RandomError>;

    /// Outward rounding that keeps long chains of enclosures small.
    fn coarsen(i: Interval<Self>) -> Interval<Self> {
        i
    }
}

/// Grid `2^-ENCLOSURE_BITS` for outward rounding of exact enclosures.
pub const ENCLOSURE_BITS: u32 = 128;

impl FibreScalar for Rational {
    type Map = PiecewiseAffineMap;

    fn fibre_map(noise: &NoiseModel, index: i64) -> Result<PiecewiseAffineMap, RandomError> {
        noise.affine_map(index)
    }

    fn step(map: &PiecewiseAffineMap, x: &Rational) -> Result<Rational, RandomError> {
        map.eval_exact(x).map_err(|_| RandomError::DomainEscape(x.to_string()))
    }

    fn coarsen(i: Interval<Rational>) -> Interval<Rational> {
        let (lo, hi) = i.into_bounds();
        let lo = Rational::max_of(&lo.dyadic_floor(ENCLOSURE_BITS), &Rational::zero());
        let hi = Rational::min_of(&hi.dyadic_ceil(ENCLOSURE_BITS), &Rational::one());
        Interval::new(lo, hi).expect("rounding keeps order")
    }
}

/// Iterates that leave `[0, 1]` by at most this much are clamped back.
pub const FLOAT_DRIFT: f64 = 1e-12;

impl FibreScalar for f64 {
    type Map = SampledMap;

    fn fibre_map(noise: &NoiseModel, index: i64) -> Result<SampledMap, RandomError> {
        Ok(sample_map(noise, index))
    }

    fn step(map: &SampledMap, x: &f64) -> Result<f64, RandomError> {
        let y = match map {
            SampledMap::Affine(m) => {
                let xr = Rational::from_f64_exact(*x).ok_or_else(|| RandomError::DomainEscape(x.to_string()))?;
                m.eval_exact(&xr).map_err(|_| RandomError::DomainEscape(x.to_string()))?.to_f64()
            }
            SampledMap::Smooth(m) => m.eval(*x),
        };
        if !(-FLOAT_DRIFT..=1.0 + FLOAT_DRIFT).contains(&y) || !y.is_finite() {
            return Err(RandomError::DomainEscape(y.to_string()));
        }
        Ok(y.clamp(0.0, 1.0))
    }
}

/// One state of a trajectory: `x_n = φ(n, ω, x₀)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord<S> {
    pub base_index: i64,
    pub state: S,
    /// `n mod k` when following a `k`-cycle.
    pub fibre_label: Option<u64>,
}

/// `cocycle_iterate(noise, x₀, n)`: the states `x₀, …, x_n` with
/// `x_{j+1} = sample_map(noise, j)(x_j)`.
pub fn cocycle_iterate<S: FibreScalar>(
    noise: &NoiseModel,
    x0: &S,
    steps: usize,
) -> Result<Vec<TrajectoryRecord<S>>, RandomError> {
    cocycle_iterate_from(noise, 0, x0, steps)
}

/// As [`cocycle_iterate`], starting in fibre `start` (the point `θ^start ω`).
pub fn cocycle_iterate_from<S: FibreScalar>(
    noise: &NoiseModel,
    start: i64,
    x0: &S,
    steps: usize,
) -> Result<Vec<TrajectoryRecord<S>>, RandomError> {
    if !(*x0 >= S::zero() && *x0 <= S::one()) {
        return Err(RandomError::DomainEscape(x0.to_string()));
    }
    let mut out = Vec::with_capacity(steps + 1);
    let mut x = x0.clone();
    out.push(TrajectoryRecord { base_index: start, state: x.clone(), fibre_label: None });
    for j in 0..steps as i64 {
        let map = S::fibre_map(noise, start + j)?;
        x = S::step(&map, &x)?;
        out.push(TrajectoryRecord { base_index: start + j + 1, state: x.clone(), fibre_label: None });
    }
    Ok(out)
}

/// Labels each record with `base_index mod k`.
pub fn assign_fibres<S>(records: &mut [TrajectoryRecord<S>], k: u64) {
    for r in records {
        r.fibre_label = Some(r.base_index.rem_euclid(k as i64) as u64);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_asymmetry_is_the_tent() {
        let noise = NoiseModel::asymmetric_tent(Rational::zero(), Rational::one(), 7).unwrap();
        match sample_map(&noise, 3) {
            SampledMap::Affine(m) => assert_eq!(m, PiecewiseAffineMap::tent()),
            SampledMap::Smooth(_) => panic!("tent family"),
        }
    }

    #[test]
    fn asymmetric_slopes() {
        let m = PiecewiseAffineMap::asymmetric_tent(&rat(1, 10)).unwrap();
        assert_eq!(m.breakpoints(), &[rat(3, 5)]);
        assert_eq!(m.slope_at(&rat(1, 10)).unwrap(), &rat(5, 3));
        assert_eq!(m.slope_at(&rat(9, 10)).unwrap(), &rat(-5, 2));
        assert_eq!(m.eval_exact(&rat(3, 5)).unwrap(), Rational::one());
    }

    #[test]
    fn logistic_sample_derivative() {
        let f = DifferentiableMapHandle::logistic(3.2);
        assert!((f.deriv(0.25) - 3.2 * 0.5).abs() < 1e-15);
        let noise = NoiseModel::logistic(3.15, 3.25, 1).unwrap();
        for n in -5..5 {
            let c = noise.logistic_parameter(n).unwrap();
            assert!((3.15..=3.25).contains(&c));
        }
    }

    #[test]
    fn gammas_stay_in_support_and_are_deterministic() {
        let xi = rat(1, 80);
        let noise = NoiseModel::asymmetric_tent(xi.clone(), Rational::one(), 42).unwrap();
        for n in -50..50 {
            let g = noise.gamma(n);
            assert!(g.abs() < xi);
            assert_eq!(g, noise.gamma(n));
        }
        let other = noise.clone().with_seed(43);
        assert!((0..10).any(|n| other.gamma(n) != noise.gamma(n)));
        let half = noise.clone().with_lambda(rat(1, 2)).unwrap();
        assert_eq!(half.gamma(5), noise.gamma(5) / rat(2, 1));
    }

    #[test]
    fn deterministic_three_cycle() {
        let noise = NoiseModel::deterministic(Rational::one()).unwrap();
        let traj = cocycle_iterate(&noise, &rat(2, 7), 3).unwrap();
        let states: Vec<_> = traj.iter().map(|r| r.state.clone()).collect();
        assert_eq!(states, vec![rat(2, 7), rat(4, 7), rat(6, 7), rat(2, 7)]);
        let id = cocycle_iterate(&noise, &rat(1, 3), 0).unwrap();
        assert_eq!(id.len(), 1);
        assert_eq!(id[0].state, rat(1, 3));
    }

    #[test]
    fn labels_fibres() {
        let noise = NoiseModel::deterministic(Rational::one()).unwrap();
        let mut traj = cocycle_iterate(&noise, &rat(2, 7), 4).unwrap();
        assert_eq!(traj[0].fibre_label, None);
        assign_fibres(&mut traj, 3);
        let labels: Vec<_> = traj.iter().map(|r| r.fibre_label.unwrap()).collect();
        assert_eq!(labels, vec![0, 1, 2, 0, 1]);
    }

    #[test]
    fn long_float_run_stays_in_unit_interval() {
        let noise = NoiseModel::asymmetric_tent(rat(1, 80), Rational::one(), 3).unwrap();
        let traj = cocycle_iterate(&noise, &(2.0 / 3.0), 10_000).unwrap();
        assert!(traj.iter().all(|r| (0.0..=1.0).contains(&r.state)));
        let log = NoiseModel::logistic(3.15, 3.25, 3).unwrap();
        let traj = cocycle_iterate(&log, &0.3, 1000).unwrap();
        assert!(traj.iter().all(|r| (0.0..=1.0).contains(&r.state)));
    }
}
