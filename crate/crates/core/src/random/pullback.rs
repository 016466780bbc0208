//! Random periodic points by pullback, their orbits, and `(δ, k)` detection.
//!
//! Everything here works on enclosures. A *tube* is a sequence of intervals
//! `I_t ⊂ N_{t mod k}` that contains `φ(t, ω, x(ω))` for the random periodic
//! point `x(ω)` attached to a certified neighbourhood. For attracting cycles
//! it is obtained by pushing `N_1` forward from a remote past fibre; for
//! repelling cycles by pulling `N` back from a remote future fibre through
//! the monotone branches. Each step first checks that the fibre map still
//! forces the cycle's itinerary on the whole component.

use serde::{Deserialize, Serialize};

use super::noise::{FibreScalar, NoiseModel, TrajectoryRecord};
use super::RandomError;
use crate::conley::{CycleKind, IsolatingNeighborhood};
use crate::number::{Interval, IntervalMap, NumberError, Scalar};

/// Point estimate of `x(ω)` with a certified error bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "S: Serialize", deserialize = "S: Deserialize<'de> + Scalar"))]
pub struct RandomPeriodicEstimate<S: Scalar> {
    pub value: S,
    pub error_bound: S,
    /// Number `m` of `k`-step blocks used.
    pub steps_used: u32,
    /// `1 − 2β` (attracting) or `1/(1 + 2β)` (repelling).
    pub contraction_rate: S,
    /// Fibre `n` of the estimate, i.e. the point `θⁿω`.
    pub base_index: i64,
    pub enclosure: Interval<S>,
}

/// `f(N_i)` is forced into `N_{i+1}` in the sense used by the neighbourhood
/// certificate: inside `int N_{i+1}` (attracting) or monotone and covering it
/// with room on both sides (repelling).
pub fn step_is_forced<S: Scalar, M: IntervalMap<S> + ?Sized>(
    map: &M,
    kind: CycleKind,
    from: &Interval<S>,
    to: &Interval<S>,
) -> Result<bool, NumberError> {
    Ok(match kind {
        CycleKind::Attracting => map.image(from)?.subset_of_interior(to),
        CycleKind::Repelling => {
            let d = map.derivative(from)?;
            if d.contains(&S::zero()) {
                return Ok(false);
            }
            let a = map.value(from.lo())?;
            let b = map.value(from.hi())?;
            let (below, above) = if *d.lo() > S::zero() { (a, b) } else { (b, a) };
            below.hi() < to.lo() && above.lo() > to.hi()
        }
    })
}

fn forced_map<S: FibreScalar>(
    noise: &NoiseModel,
    nbhd: &IsolatingNeighborhood<S>,
    index: i64,
    phase: usize,
) -> Result<S::Map, RandomError> {
    let k = nbhd.period();
    let map = S::fibre_map(noise, index)?;
    if !step_is_forced(&map, nbhd.kind, &nbhd.components[phase], &nbhd.components[(phase + 1) % k])? {
        return Err(RandomError::ItineraryBroken { index, component: phase });
    }
    Ok(map)
}

/// Checks the `k`-step derivative bound of one block starting at `index`.
fn check_block_dichotomy<S: FibreScalar>(
    noise: &NoiseModel,
    nbhd: &IsolatingNeighborhood<S>,
    index: i64,
) -> Result<(), RandomError> {
    let two_beta = nbhd.beta.clone() + nbhd.beta.clone();
    let mut prod = Interval::point(S::one());
    for (j, comp) in nbhd.components.iter().enumerate() {
        let map = S::fibre_map(noise, index + j as i64)?;
        prod = prod.mul(&map.derivative(comp)?.abs());
    }
    let ok = match nbhd.kind {
        CycleKind::Attracting => *prod.hi() <= (S::one() - two_beta).round_down(),
        CycleKind::Repelling => *prod.lo() >= (S::one() + two_beta).round_up(),
    };
    if ok {
        Ok(())
    } else {
        Err(RandomError::DichotomyBroken { index })
    }
}

fn pow<S: Scalar>(base: &S, e: u32) -> S {
    let mut out = S::one();
    for _ in 0..e {
        out = (out * base.clone()).round_up();
    }
    out
}

fn estimate_from<S: Scalar>(
    enclosure: Interval<S>,
    tail_error: S,
    nbhd: &IsolatingNeighborhood<S>,
    base_index: i64,
    steps_used: u32,
    rate: S,
) -> Result<RandomPeriodicEstimate<S>, RandomError> {
    let value = enclosure.midpoint();
    let spread = S::max_of(
        &(value.clone() - enclosure.lo().clone()).round_up(),
        &(enclosure.hi().clone() - value.clone()).round_up(),
    );
    let error_bound = (tail_error + spread).round_up();
    let ball = Interval::new(
        (value.clone() - error_bound.clone()).round_down(),
        (value.clone() + error_bound.clone()).round_up(),
    )?;
    let enclosure = ball.intersection(&nbhd.components[0]).unwrap_or(ball);
    Ok(RandomPeriodicEstimate { value, error_bound, steps_used, contraction_rate: rate, base_index, enclosure })
}

/// Pullback estimate of the random periodic point `x(θⁿω) ∈ N_1`, `n = base_index`.
///
/// Attracting: `x_m = G_{θ^{n−k}ω} ∘ ⋯ ∘ G_{θ^{n−mk}ω}(c)` with `c` the centre
/// of `N_1` and `G` the `k`-step map. Repelling: `x_m = G_{θⁿω}⁻¹ ∘ ⋯ ∘
/// G_{θ^{n+(m−1)k}ω}⁻¹(c)`, the inverses taken branch by branch inside the
/// `N_i`. Each block's derivative is checked against the certified rate, so
/// `|x_m − x(θⁿω)| ≤ rateᵐ·diam(N_1)`.
pub fn pullback_periodic_point<S: FibreScalar>(
    noise: &NoiseModel,
    nbhd: &IsolatingNeighborhood<S>,
    base_index: i64,
    m_steps: u32,
) -> Result<RandomPeriodicEstimate<S>, RandomError> {
    let k = nbhd.period();
    let span = m_steps as i64 * k as i64;
    let rate = nbhd.contraction_rate();
    let center = Interval::point(nbhd.components[0].midpoint());
    let x = match nbhd.kind {
        CycleKind::Attracting => {
            let start = base_index - span;
            let mut x = center;
            for t in 0..span {
                let phase = (t as usize) % k;
                if phase == 0 {
                    check_block_dichotomy(noise, nbhd, start + t)?;
                }
                let map = forced_map(noise, nbhd, start + t, phase)?;
                x = S::coarsen(map.image(&x)?);
            }
            x
        }
        CycleKind::Repelling => {
            let mut y = center;
            for t in (0..span).rev() {
                let phase = (t as usize) % k;
                if phase == 0 {
                    check_block_dichotomy(noise, nbhd, base_index + t)?;
                }
                let map = forced_map(noise, nbhd, base_index + t, phase)?;
                y = map
                    .preimage_in(&y, &nbhd.components[phase])?
                    .ok_or(RandomError::ItineraryBroken { index: base_index + t, component: phase })?;
                y = S::coarsen(y);
            }
            y
        }
    };
    let tail_error = (pow(&rate, m_steps) * nbhd.components[0].width()).round_up();
    estimate_from(x, tail_error, nbhd, base_index, m_steps, rate)
}

/// The orbit `P(ω) = {φ(j, θ^{−j}ω, x(θ^{−j}ω)) : 0 ≤ j < k}`, one point in
/// each `N_{j+1}`, each pushed forward from its own pullback estimate.
pub fn orbit_set<S: FibreScalar>(
    noise: &NoiseModel,
    nbhd: &IsolatingNeighborhood<S>,
    base_index: i64,
    m_steps: u32,
) -> Result<Vec<RandomPeriodicEstimate<S>>, RandomError> {
    let k = nbhd.period();
    let mut out = Vec::with_capacity(k);
    for j in 0..k {
        let est = pullback_periodic_point(noise, nbhd, base_index - j as i64, m_steps)?;
        let mut encl = est.enclosure.clone();
        for step in 0..j {
            let map = S::fibre_map(noise, base_index - (j - step) as i64)?;
            encl = S::coarsen(map.image(&encl)?);
        }
        if !encl.subset_of(&nbhd.components[j]) {
            return Err(RandomError::ItineraryBroken { index: base_index, component: j });
        }
        let value = encl.midpoint();
        let error_bound =
            S::max_of(&(value.clone() - encl.lo().clone()).round_up(), &(encl.hi().clone() - value.clone()).round_up());
        out.push(RandomPeriodicEstimate {
            value,
            error_bound,
            steps_used: m_steps,
            contraction_rate: est.contraction_rate,
            base_index,
            enclosure: encl,
        });
    }
    for i in 0..k {
        for j in i + 1..k {
            if out[i].enclosure.intersects(&out[j].enclosure) {
                return Err(RandomError::OrbitCollapsed(i, j));
            }
        }
    }
    Ok(out)
}

/// Enclosures `I_t ∋ φ(t, θ^{start}ω, x(θ^{start}ω))` for `t = 0, …, window`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "S: Serialize", deserialize = "S: Deserialize<'de> + Scalar"))]
pub struct Tube<S: Scalar> {
    pub kind: CycleKind,
    pub period: usize,
    pub start_index: i64,
    pub intervals: Vec<Interval<S>>,
}

impl<S: Scalar> Tube<S> {
    /// Midpoints as a trajectory labelled by fibre.
    pub fn trajectory(&self) -> Vec<TrajectoryRecord<S>> {
        self.intervals
            .iter()
            .enumerate()
            .map(|(t, i)| TrajectoryRecord {
                base_index: self.start_index + t as i64,
                state: i.midpoint(),
                fibre_label: Some((t % self.period) as u64),
            })
            .collect()
    }

    pub fn max_width(&self) -> S {
        self.intervals.iter().map(Interval::width).fold(S::zero(), |a, b| S::max_of(&a, &b))
    }
}

/// Builds the tube over `window` steps from fibre `start`, using `pad_blocks`
/// blocks of `k` steps before (attracting) or after (repelling) the window to
/// shrink the enclosures.
pub fn build_tube<S: FibreScalar>(
    noise: &NoiseModel,
    nbhd: &IsolatingNeighborhood<S>,
    start: i64,
    window: usize,
    pad_blocks: u32,
) -> Result<Tube<S>, RandomError> {
    let k = nbhd.period();
    let pad = pad_blocks as i64 * k as i64;
    let n = &nbhd.components;
    let mut intervals = Vec::with_capacity(window + 1);
    match nbhd.kind {
        CycleKind::Attracting => {
            let mut x = n[0].clone();
            let first = start - pad;
            if pad == 0 {
                intervals.push(x.clone());
            }
            for t in 0..(pad + window as i64) {
                let phase = (t as usize) % k;
                let map = forced_map(noise, nbhd, first + t, phase)?;
                x = S::coarsen(map.image(&x)?);
                if t + 1 >= pad {
                    intervals.push(x.clone());
                }
            }
        }
        CycleKind::Repelling => {
            let total = window as i64 + pad;
            let mut y = n[(total as usize) % k].clone();
            let mut rev = Vec::with_capacity(window + 1);
            if pad == 0 {
                rev.push(y.clone());
            }
            for t in (0..total).rev() {
                let phase = (t as usize) % k;
                let map = forced_map(noise, nbhd, start + t, phase)?;
                y = map
                    .preimage_in(&y, &n[phase])?
                    .ok_or(RandomError::ItineraryBroken { index: start + t, component: phase })?;
                y = S::coarsen(y);
                if t <= window as i64 {
                    rev.push(y.clone());
                }
            }
            rev.reverse();
            intervals = rev;
        }
    }
    debug_assert_eq!(intervals.len(), window + 1);
    Ok(Tube { kind: nbhd.kind, period: k, start_index: start, intervals })
}

/// Pass/fail outcome with the reason for a failure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail { reason: String },
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

/// Fibre statistics of a `(δ, k)` check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "S: Serialize", deserialize = "S: Deserialize<'de> + Scalar"))]
pub struct DeltaKReport<S: Scalar> {
    pub k: usize,
    pub window: usize,
    pub delta: S,
    /// Upper bounds on `diam S_ℓ(ω)`, `ℓ = 0, …, k − 1`.
    pub fibre_diameters: Vec<S>,
    /// Lower bound on `min_{i≠j} dist(S_i, S_j)`; absent for `k = 1`.
    pub min_separation: Option<S>,
    pub closest_pair: Option<(usize, usize)>,
    pub verdict: Verdict,
}

/// `(δ, k)` check of the random periodic orbit attached to `nbhd` over fibres
/// `0..=window`: each fibre `S_ℓ = {φ(mk + ℓ, ω, x(ω))}` must have diameter
/// below `δ` and distinct fibres must be more than `δ` apart. The fibres are
/// enclosed by the hulls of the tube intervals, so a pass is rigorous.
pub fn detect_delta_k_orbit<S: FibreScalar>(
    noise: &NoiseModel,
    nbhd: &IsolatingNeighborhood<S>,
    delta: &S,
    window: usize,
    pad_blocks: u32,
) -> DeltaKReport<S> {
    let tube = if window < nbhd.period() { None } else { Some(build_tube(noise, nbhd, 0, window, pad_blocks)) };
    match tube {
        Some(t) => delta_k_on_tube(nbhd, t.as_ref(), delta, window),
        None => delta_k_fail(
            nbhd.period(),
            window,
            delta,
            format!("window {window} is shorter than the period {}", nbhd.period()),
        ),
    }
}

fn delta_k_fail<S: Scalar>(k: usize, window: usize, delta: &S, reason: String) -> DeltaKReport<S> {
    DeltaKReport {
        k,
        window,
        delta: delta.clone(),
        fibre_diameters: Vec::new(),
        min_separation: None,
        closest_pair: None,
        verdict: Verdict::Fail { reason },
    }
}

/// The `(δ, k)` statistics of an already built tube (or of its failure).
pub fn delta_k_on_tube<S: Scalar>(
    nbhd: &IsolatingNeighborhood<S>,
    tube: Result<&Tube<S>, &RandomError>,
    delta: &S,
    window: usize,
) -> DeltaKReport<S> {
    let k = nbhd.period();
    let fail = |reason: String| DeltaKReport {
        k,
        window,
        delta: delta.clone(),
        fibre_diameters: Vec::new(),
        min_separation: None,
        closest_pair: None,
        verdict: Verdict::Fail { reason },
    };
    let tube = match tube {
        Ok(t) => t,
        Err(e) => return fail(e.to_string()),
    };
    let hulls: Vec<Interval<S>> = (0..k)
        .map(|l| tube.intervals.iter().skip(l).step_by(k).skip(1).fold(tube.intervals[l].clone(), |h, i| h.hull(i)))
        .collect();
    let fibre_diameters: Vec<S> = hulls.iter().map(|h| h.width().round_up()).collect();
    let mut min_separation: Option<S> = None;
    let mut closest_pair = None;
    for i in 0..k {
        for j in i + 1..k {
            let d = hulls[i].distance(&hulls[j]).round_down();
            if min_separation.as_ref().is_none_or(|m| d < *m) {
                min_separation = Some(d);
                closest_pair = Some((i, j));
            }
        }
    }
    let (widest, max_diam) =
        fibre_diameters
            .iter()
            .enumerate()
            .fold((0, S::zero()), |(bi, b), (i, d)| if *d > b { (i, d.clone()) } else { (bi, b) });
    let verdict = if !(max_diam < *delta) {
        Verdict::Fail { reason: format!("fibre {widest} has diameter up to {max_diam} >= delta {delta}") }
    } else if let (Some(sep), Some((i, j))) = (&min_separation, closest_pair) {
        if *sep > *delta {
            Verdict::Pass
        } else {
            Verdict::Fail { reason: format!("fibres {i} and {j} are only {sep} apart, delta {delta}") }
        }
    } else {
        Verdict::Pass
    };
    DeltaKReport { k, window, delta: delta.clone(), fibre_diameters, min_separation, closest_pair, verdict }
}

/// Outcome of [`minimal_period_check`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodCheckReport {
    pub k: usize,
    pub window: usize,
    pub base_points: usize,
    /// `(n, ℓ)`: the `ℓ`-step image of the base point `θⁿω` that failed.
    pub witness: Option<(i64, usize)>,
    pub verdict: Verdict,
}

/// Minimal random period `k`: for each base point `n ≡ 0 (mod k)` in the
/// window and each `ℓ ∈ {1, …, k − 1}`, `φ(ℓ, θⁿω, x(θⁿω))` lies in
/// `N_{ℓ+1}`, which is disjoint from `N_1 ∋ x(θ^{n+ℓ}ω)`.
pub fn minimal_period_check<S: FibreScalar>(
    noise: &NoiseModel,
    nbhd: &IsolatingNeighborhood<S>,
    window: usize,
    pad_blocks: u32,
) -> PeriodCheckReport {
    period_check_on_tube(nbhd, build_tube(noise, nbhd, 0, window, pad_blocks).as_ref(), window)
}

/// [`minimal_period_check`] on an already built tube (or its failure).
pub fn period_check_on_tube<S: Scalar>(
    nbhd: &IsolatingNeighborhood<S>,
    tube: Result<&Tube<S>, &RandomError>,
    window: usize,
) -> PeriodCheckReport {
    let k = nbhd.period();
    let base_points = window / k + 1;
    let report =
        |witness: Option<(i64, usize)>, verdict| PeriodCheckReport { k, window, base_points, witness, verdict };
    let tube = match tube {
        Ok(t) => t,
        Err(RandomError::ItineraryBroken { index, component }) => {
            let n = *index - *component as i64;
            return report(
                Some((n, component + 1)),
                Verdict::Fail { reason: format!("fibre map {index} breaks the itinerary out of N_{}", *component + 1) },
            );
        }
        Err(e) => return report(None, Verdict::Fail { reason: e.to_string() }),
    };
    let n = &nbhd.components;
    for l in 1..k {
        if n[l].intersects(&n[0]) {
            return report(Some((0, l)), Verdict::Fail { reason: format!("N_{} meets N_1", l + 1) });
        }
    }
    for base in (0..=window).step_by(k) {
        if !tube.intervals[base].subset_of(&n[0]) {
            return report(Some((base as i64, 0)), Verdict::Fail { reason: format!("x(θ^{base}ω) is not in N_1") });
        }
        for (l, (img, target)) in tube.intervals.iter().skip(base).zip(n).enumerate().take(k).skip(1) {
            if !img.subset_of(target) {
                return report(
                    Some((base as i64, l)),
                    Verdict::Fail { reason: format!("{l}-step image of base point {base} leaves N_{}", l + 1) },
                );
            }
        }
    }
    report(None, Verdict::Pass)
}
