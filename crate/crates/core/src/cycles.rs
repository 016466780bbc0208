//! Periodic orbits of the tent family and the truncated-tent heights.
//!
//! Cycles of the full tent map `T` are found by itinerary words: each word
//! `w ∈ {L, R}^k` fixes an affine composition `x ↦ a·x + b` with `a = ±2^k`,
//! whose unique fixed point is kept when its orbit really follows `w`.
//! All points of `T`-cycles have the form `n / |1 − a|`, so the search runs on
//! integer numerators and converts to [`Rational`] at the end.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::number::{
    rat, DifferentiableMapHandle, Interval, IntervalMap, NumberError, PiecewiseAffineMap, Rational, Scalar,
};
use crate::sharkovskii::shark_less;

/// Largest period accepted by the tent enumeration.
pub const MAX_TENT_PERIOD: u32 = 20;
/// Largest period accepted by [`enumerate_truncated_cycles`].
pub const MAX_TRUNCATED_PERIOD: u32 = 16;
/// Periods considered when looking for the neighbour `m⁺` of `m`.
pub const SUCCESSOR_POOL: u64 = 20;
/// Default bound on the non-periodicity test of [`realization_height`].
pub const DEFAULT_PERIODIC_TEST_BOUND: u32 = 20;
/// Candidate budget of the height search.
const MAX_CANDIDATES: u32 = 5_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CycleError {
    #[error("period {0} is outside the supported range 1..={1}")]
    PeriodOutOfRange(u32, u32),
    #[error("no cycle of period {0}")]
    NoCycle(u32),
    #[error("realization height is undefined for m = {0}")]
    InvalidHead(u64),
    #[error("periodic test bound {bound} must be at least m = {m}")]
    TestBoundTooSmall { m: u64, bound: u32 },
    #[error("no non-periodic parameter found in ({lo}, {hi}) after {tries} candidates")]
    SearchExhausted { lo: String, hi: String, tries: u32 },
    #[error("height {0} must lie in (0, 1]")]
    InvalidHeight(Rational),
    #[error("orbit of {start} does not close up within {steps} steps")]
    NotPeriodic { start: String, steps: u32 },
    #[error(transparent)]
    Number(#[from] NumberError),
}

/// An exact (or double-precision) periodic orbit `p_1, …, p_k`.
///
/// Points are listed along the orbit starting from the least one.
/// `itinerary[i]` is `L`, `R` or `C` for an increasing, decreasing or flat
/// branch at `p_i`, and `branch_signs[i] = sign f'(p_i)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "S: Serialize", deserialize = "S: Deserialize<'de>"))]
pub struct Cycle<S = Rational> {
    pub points: Vec<S>,
    pub minimal_period: usize,
    pub itinerary: String,
    pub multiplier: S,
    pub branch_signs: Vec<i8>,
}

impl<S: Scalar> Cycle<S> {
    pub fn period(&self) -> usize {
        self.minimal_period
    }

    pub fn least(&self) -> &S {
        &self.points[0]
    }

    pub fn max_point(&self) -> S {
        self.points.iter().skip(1).fold(self.points[0].clone(), |a, b| S::max_of(&a, b))
    }

    /// Smallest distance between two distinct points of the cycle (`None` for fixed points).
    pub fn min_gap(&self) -> Option<S> {
        let mut sorted = self.points.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("ordered points"));
        sorted.windows(2).map(|w| (w[1].clone() - w[0].clone()).round_down()).reduce(|a, b| S::min_of(&a, &b))
    }

    fn from_orbit(mut points: Vec<S>, mut slopes: Vec<S>) -> Self {
        let start = (0..points.len())
            .min_by(|&i, &j| points[i].partial_cmp(&points[j]).expect("ordered points"))
            .expect("nonempty orbit");
        points.rotate_left(start);
        slopes.rotate_left(start);
        let zero = S::zero();
        let branch_signs: Vec<i8> = slopes
            .iter()
            .map(|s| {
                if *s > zero {
                    1
                } else if *s < zero {
                    -1
                } else {
                    0
                }
            })
            .collect();
        let itinerary = branch_signs
            .iter()
            .map(|&s| match s {
                1 => 'L',
                -1 => 'R',
                _ => 'C',
            })
            .collect();
        let multiplier = slopes.into_iter().fold(S::one(), |a, b| a * b);
        Cycle { minimal_period: points.len(), points, itinerary, multiplier, branch_signs }
    }
}

impl Cycle<Rational> {
    /// Follows the orbit of `start` under `map` and packages it as a cycle.
    pub fn from_affine_orbit(map: &PiecewiseAffineMap, start: &Rational, max_steps: u32) -> Result<Self, CycleError> {
        let mut points = vec![start.clone()];
        let mut slopes = vec![map.slope_at(start)?.clone()];
        let mut x = map.eval_exact(start)?;
        for _ in 0..max_steps {
            if x == *start {
                return Ok(Cycle::from_orbit(points, slopes));
            }
            slopes.push(map.slope_at(&x)?.clone());
            let next = map.eval_exact(&x)?;
            points.push(x);
            x = next;
        }
        Err(CycleError::NotPeriodic { start: start.to_string(), steps: max_steps })
    }

    /// `true` iff `map` advances the point list cyclically.
    pub fn is_orbit_of(&self, map: &PiecewiseAffineMap) -> bool {
        let k = self.points.len();
        (0..k).all(|i| map.eval_exact(&self.points[i]).ok().as_ref() == Some(&self.points[(i + 1) % k]))
    }
}

impl Cycle<f64> {
    /// Packages double-precision orbit points of a smooth map.
    pub fn from_smooth_points(map: &DifferentiableMapHandle, points: Vec<f64>) -> Self {
        let slopes = points.iter().map(|&x| map.deriv(x)).collect();
        Cycle::from_orbit(points, slopes)
    }
}

fn check_period(k: u32, max: u32) -> Result<(), CycleError> {
    if k == 0 || k > max {
        return Err(CycleError::PeriodOutOfRange(k, max));
    }
    Ok(())
}

/// Numerators `n` (over `denom`) of the points of minimal period `k` for `T`,
/// one entry per periodic point.
fn tent_periodic_numerators(k: u32) -> Vec<(i64, i64)> {
    (0u64..1 << k)
        .into_par_iter()
        .filter_map(|word| {
            // composition x ↦ a·x + b, applying bit j at step j (1 = R)
            let (mut a, mut b) = (1i64, 0i64);
            for j in 0..k {
                if word >> j & 1 == 1 {
                    a *= -2;
                    b = 2 - 2 * b;
                } else {
                    a *= 2;
                    b *= 2;
                }
            }
            let (mut n, mut d) = (b, 1 - a);
            if d < 0 {
                n = -n;
                d = -d;
            }
            if n < 0 || n > d {
                return None;
            }
            let start = n;
            let mut x = n;
            for j in 0..k {
                let right = word >> j & 1 == 1;
                // left branch owns the breakpoint 1/2
                if right != (2 * x > d) {
                    return None;
                }
                x = if right { 2 * d - 2 * x } else { 2 * x };
                if x == start && j + 1 < k {
                    return None;
                }
            }
            debug_assert_eq!(x, start);
            Some((n, d))
        })
        .collect()
}

/// All cycles of the full tent map with minimal period `k`, sorted by least point.
pub fn enumerate_tent_cycles(k: u32) -> Result<Vec<Cycle>, CycleError> {
    check_period(k, MAX_TENT_PERIOD)?;
    let tent = PiecewiseAffineMap::tent();
    let points: BTreeSet<Rational> = tent_periodic_numerators(k).into_iter().map(|(n, d)| rat(n, d)).collect();
    let mut seen = BTreeSet::new();
    let mut cycles = Vec::new();
    for p in &points {
        if seen.contains(p) {
            continue;
        }
        let cycle = Cycle::from_affine_orbit(&tent, p, k)?;
        debug_assert_eq!(cycle.minimal_period, k as usize);
        seen.extend(cycle.points.iter().cloned());
        cycles.push(cycle);
    }
    Ok(cycles)
}

/// `h(m)`: the least maximum over all `m`-cycles of `T`.
pub fn critical_height(m: u32) -> Result<Rational, CycleError> {
    check_period(m, MAX_TENT_PERIOD)?;
    // the maximum of a cycle is its largest point, so h(m) is the least
    // periodic point that is the top of its own orbit
    let tops = tent_periodic_numerators(m).into_par_iter().filter_map(|(n, d)| {
        let mut x = n;
        for _ in 1..m {
            x = if 2 * x > d { 2 * d - 2 * x } else { 2 * x };
            if x > n {
                return None;
            }
        }
        Some(rat(n, d))
    });
    tops.min().ok_or(CycleError::NoCycle(m))
}

/// The `≺`-neighbour of `m` with the next larger critical height: the
/// `≺`-greatest period below `m` among `1..=SUCCESSOR_POOL`. `None` when no
/// period precedes `m` there (only `m = 3`).
pub fn height_successor(m: u64) -> Option<u64> {
    (1..=SUCCESSOR_POOL.max(m))
        .filter(|&l| shark_less(l, m))
        .reduce(|best, l| if shark_less(best, l) { l } else { best })
}

/// Which points must be non-periodic for the chosen height `h̃`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HeightPolicy {
    /// None of `h̃`, `h̃/2`, `1 − h̃/2` is periodic.
    Strict,
    /// Only the corners `h̃/2`, `1 − h̃/2` are non-periodic; `h̃` itself may lie
    /// on a superstable cycle through the plateau interior.
    CornerSafe,
}

/// Outcome of the height search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizationHeight {
    pub m: u64,
    pub height: Rational,
    pub lower: Rational,
    pub upper: Rational,
    pub successor: Option<u64>,
    pub policy: HeightPolicy,
    pub periodic_test_bound: u32,
    /// Period of `h̃` under `T_h̃` when it is at most the test bound.
    pub critical_orbit_period: Option<u32>,
    pub candidates_tried: u32,
}

/// First return time of `x` under `map` within `bound` steps.
pub fn return_time(map: &PiecewiseAffineMap, x: &Rational, bound: u32) -> Result<Option<u32>, CycleError> {
    let mut y = x.clone();
    for n in 1..=bound {
        y = map.eval_exact(&y)?;
        if y == *x {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// Whether `x` returns to itself under `map` within `bound` steps.
pub fn is_periodic_within(map: &PiecewiseAffineMap, x: &Rational, bound: u32) -> Result<bool, CycleError> {
    Ok(return_time(map, x, bound)?.is_some())
}

/// `h̃(m) ∈ (h(m), h(m⁺))` such that none of `h̃`, `h̃/2`, `1 − h̃/2` is
/// periodic for `T_h̃` with period at most `bound`.
///
/// For `m` a power of two no such parameter exists: on the whole interval
/// `(h(m), h(2m))` the value `h` returns to the plateau after `2m` steps, and
/// the search ends in [`CycleError::SearchExhausted`].
pub fn realization_height(m: u64, bound: u32) -> Result<Rational, CycleError> {
    Ok(realization_height_report(m, bound, HeightPolicy::Strict)?.height)
}

/// Height search under the given policy.
///
/// Candidates start at the midpoint of the admissible interval; level `j`
/// then tries `mid ± i·width/q_j` for `i = 1, …, (q_j − 1)/2`, where
/// `q_j = 3, 5, 7, 11, …` runs through the odd primes, so the step shrinks from
/// level to level. The first passing candidate in this order is returned.
pub fn realization_height_report(m: u64, bound: u32, policy: HeightPolicy) -> Result<RealizationHeight, CycleError> {
    if m < 2 || m > MAX_TENT_PERIOD as u64 {
        return Err(CycleError::InvalidHead(m));
    }
    if (bound as u64) < m {
        return Err(CycleError::TestBoundTooSmall { m, bound });
    }
    let lower = critical_height(m as u32)?;
    let successor = height_successor(m);
    let (upper, upper_open) = match successor {
        Some(s) => (critical_height(s as u32)?, true),
        None => (Rational::one(), false),
    };
    let width = &upper - &lower;
    let mid = (&lower + &upper) / Rational::integer(2);

    let test = |h: &Rational| -> Result<Option<Option<u32>>, CycleError> {
        let inside = *h > lower && (if upper_open { *h < upper } else { *h <= upper });
        if !inside {
            return Ok(None);
        }
        let map = PiecewiseAffineMap::truncated_tent(h)?;
        let critical = return_time(&map, h, bound)?;
        if policy == HeightPolicy::Strict && critical.is_some() {
            return Ok(None);
        }
        let half = h / Rational::integer(2);
        for corner in [half.clone(), Rational::one() - &half] {
            if is_periodic_within(&map, &corner, bound)? {
                return Ok(None);
            }
        }
        Ok(Some(critical))
    };

    let mut tries = 0u32;
    let mut q = 1i64;
    while tries < MAX_CANDIDATES {
        let level: Vec<Rational> = if q == 1 {
            vec![mid.clone()]
        } else {
            let step = &width / Rational::integer(q);
            (1..=(q - 1) / 2)
                .flat_map(|i| {
                    let off = &step * Rational::integer(i);
                    [&mid + &off, &mid - &off]
                })
                .collect()
        };
        let found = level
            .par_iter()
            .enumerate()
            .map(|(i, h)| test(h).map(|r| r.map(|c| (i, c))))
            .find_first(|r| !matches!(r, Ok(None)));
        match found {
            Some(Err(e)) => return Err(e),
            Some(Ok(Some((i, critical_orbit_period)))) => {
                return Ok(RealizationHeight {
                    m,
                    height: level[i].clone(),
                    lower,
                    upper,
                    successor,
                    policy,
                    periodic_test_bound: bound,
                    critical_orbit_period,
                    candidates_tried: tries + i as u32 + 1,
                });
            }
            _ => {}
        }
        tries += level.len() as u32;
        q = next_odd_prime(q);
    }
    Err(CycleError::SearchExhausted { lo: lower.to_string(), hi: upper.to_string(), tries })
}

fn next_odd_prime(q: i64) -> i64 {
    let mut n = if q < 3 { 3 } else { q + 2 };
    while (3..).step_by(2).take_while(|d| d * d <= n).any(|d| n % d == 0) {
        n += 2;
    }
    n
}

/// All cycles of `T_h` with minimal period at most `max_period`, sorted by
/// (period, least point).
///
/// A cycle of `T_h` either stays below `h`, where `T_h = T`, or passes through
/// the plateau value `h`; so the answer is the `T`-cycles with maximum below
/// `h` together with the `T_h`-orbit of `h` when that orbit is periodic.
pub fn enumerate_truncated_cycles(h: &Rational, max_period: u32) -> Result<Vec<Cycle>, CycleError> {
    if !(h.is_positive() && *h <= Rational::one()) {
        return Err(CycleError::InvalidHeight(h.clone()));
    }
    check_period(max_period, MAX_TRUNCATED_PERIOD)?;
    let map = PiecewiseAffineMap::truncated_tent(h)?;
    let mut by_least: BTreeMap<(usize, Rational), Cycle> = BTreeMap::new();
    for k in 1..=max_period {
        for c in enumerate_tent_cycles(k)? {
            if c.max_point() < *h {
                // recompute slopes on T_h (identical off the plateau)
                let c = Cycle::from_affine_orbit(&map, c.least(), k)?;
                by_least.insert((c.minimal_period, c.least().clone()), c);
            }
        }
    }
    if let Ok(c) = Cycle::from_affine_orbit(&map, h, max_period) {
        by_least.insert((c.minimal_period, c.least().clone()), c);
    }
    Ok(by_least.into_values().collect())
}

/// Minimal periods of `T_h` up to `max_period`.
pub fn minimal_periods(h: &Rational, max_period: u32) -> Result<BTreeSet<u64>, CycleError> {
    Ok(enumerate_truncated_cycles(h, max_period)?.iter().map(|c| c.minimal_period as u64).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Hyperbolicity {
    Attracting,
    Repelling,
    NonHyperbolic,
    Unsmooth,
}

/// Classifies a cycle by an enclosure of its multiplier `∏ f'(p_i)`.
///
/// `Unsmooth` when some point is a breakpoint of the map. `NonHyperbolic`
/// when the enclosure of `|multiplier|` contains 1 (exactly 1 for exact maps).
pub fn classify_hyperbolicity<S: Scalar, M: IntervalMap<S> + ?Sized>(map: &M, cycle: &Cycle<S>) -> Hyperbolicity {
    let breakpoints = map.breakpoints();
    if cycle.points.iter().any(|p| breakpoints.contains(p)) {
        return Hyperbolicity::Unsmooth;
    }
    let mut product = Interval::point(S::one());
    for p in &cycle.points {
        match map.derivative(&Interval::point(p.clone())) {
            Ok(d) => product = product.mul(&d),
            Err(_) => return Hyperbolicity::Unsmooth,
        }
    }
    let m = product.abs();
    if *m.hi() < S::one() {
        Hyperbolicity::Attracting
    } else if *m.lo() > S::one() {
        Hyperbolicity::Repelling
    } else {
        Hyperbolicity::NonHyperbolic
    }
}

/// Fixed points `0` and `1 − 1/c` (the latter for `c > 1`) of `f_c(x) = c·x(1 − x)`.
pub fn logistic_fixed_points(map: &DifferentiableMapHandle, c: f64) -> Vec<Cycle<f64>> {
    let mut out = vec![Cycle::from_smooth_points(map, vec![0.0])];
    if c > 1.0 {
        out.push(Cycle::from_smooth_points(map, vec![1.0 - 1.0 / c]));
    }
    out
}

/// The 2-cycle `p± = (c + 1 ± √((c − 3)(c + 1))) / (2c)`, present for `c > 3`.
pub fn logistic_two_cycle(map: &DifferentiableMapHandle, c: f64) -> Option<Cycle<f64>> {
    if c <= 3.0 {
        return None;
    }
    let root = ((c - 3.0) * (c + 1.0)).sqrt();
    let lo = (c + 1.0 - root) / (2.0 * c);
    let hi = (c + 1.0 + root) / (2.0 * c);
    Some(Cycle::from_smooth_points(map, vec![lo, hi]))
}

/// Closed-form multiplier `4 + 2c − c²` of the logistic 2-cycle.
pub fn logistic_two_cycle_multiplier(c: f64) -> f64 {
    4.0 + 2.0 * c - c * c
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(c: &Cycle) -> Vec<Rational> {
        c.points.clone()
    }

    #[test]
    fn tent_cycles_small_periods() {
        let c1 = enumerate_tent_cycles(1).unwrap();
        assert_eq!(c1.iter().map(pts).collect::<Vec<_>>(), vec![vec![rat(0, 1)], vec![rat(2, 3)]]);
        let c2 = enumerate_tent_cycles(2).unwrap();
        assert_eq!(c2.len(), 1);
        assert_eq!(pts(&c2[0]), vec![rat(2, 5), rat(4, 5)]);
        let c3 = enumerate_tent_cycles(3).unwrap();
        assert_eq!(
            c3.iter().map(pts).collect::<Vec<_>>(),
            vec![vec![rat(2, 9), rat(4, 9), rat(8, 9)], vec![rat(2, 7), rat(4, 7), rat(6, 7)]]
        );
        let tent = PiecewiseAffineMap::tent();
        for k in 1..=10 {
            for c in enumerate_tent_cycles(k).unwrap() {
                assert!(c.is_orbit_of(&tent));
                assert_eq!(c.multiplier.abs(), Rational::integer(1 << k));
            }
        }
    }

    #[test]
    fn cycle_counts_follow_necklace_formula() {
        // 2^k periodic points of T^k; Möbius inversion gives the primitive ones
        fn mobius(n: u32) -> i64 {
            let (mut n, mut mu, mut p) = (n, 1i64, 2);
            while p * p <= n {
                if n % p == 0 {
                    n /= p;
                    if n % p == 0 {
                        return 0;
                    }
                    mu = -mu;
                }
                p += 1;
            }
            if n > 1 {
                mu = -mu;
            }
            mu
        }
        for k in 1..=12u32 {
            let primitive: i64 = (1..=k).filter(|d| k % d == 0).map(|d| mobius(k / d) * (1i64 << d)).sum();
            assert_eq!(enumerate_tent_cycles(k).unwrap().len() as i64, primitive / k as i64, "k = {k}");
        }
    }

    #[test]
    fn heights() {
        assert_eq!(critical_height(1).unwrap(), rat(0, 1));
        assert_eq!(critical_height(2).unwrap(), rat(4, 5));
        assert_eq!(critical_height(3).unwrap(), rat(6, 7));
        // orbit 6/17 → 12/17 → 10/17 → 14/17
        assert_eq!(critical_height(4).unwrap(), rat(14, 17));
        assert!(enumerate_tent_cycles(0).is_err());
    }

    #[test]
    fn successors() {
        assert_eq!(height_successor(2), Some(4));
        assert_eq!(height_successor(4), Some(8));
        assert_eq!(height_successor(3), None);
        assert_eq!(height_successor(5), Some(3));
        assert_eq!(height_successor(6), Some(19));
        assert_eq!(height_successor(1), Some(2));
    }

    #[test]
    fn realization_heights() {
        let r3 = realization_height_report(3, 20, HeightPolicy::Strict).unwrap();
        assert!(r3.height > rat(6, 7) && r3.height <= rat(1, 1));
        assert_eq!(r3.upper, rat(1, 1));
        assert_eq!(r3.critical_orbit_period, None);
        let r6 = realization_height_report(6, 20, HeightPolicy::Strict).unwrap();
        assert!(r6.height > r6.lower && r6.height < r6.upper);
        assert!(matches!(realization_height(1, 20), Err(CycleError::InvalidHead(1))));
        assert!(matches!(realization_height(5, 3), Err(CycleError::TestBoundTooSmall { .. })));
    }

    #[test]
    fn power_of_two_heads_have_periodic_critical_value() {
        // h ↦ 2 − 2h ↦ 4 − 4h ↦ 8h − 6 lands in the plateau for all h in [4/5, 14/17]
        assert!(matches!(realization_height(2, 20), Err(CycleError::SearchExhausted { .. })));
        let r = realization_height_report(2, 20, HeightPolicy::CornerSafe).unwrap();
        assert!(r.height > rat(4, 5) && r.height < rat(14, 17));
        assert_eq!(r.critical_orbit_period, Some(4));
        assert_eq!(minimal_periods(&r.height, 8).unwrap(), [1, 2, 4].into_iter().collect());
    }

    #[test]
    fn truncated_cycles() {
        let half = enumerate_truncated_cycles(&rat(1, 2), 4).unwrap();
        assert_eq!(half.iter().map(pts).collect::<Vec<_>>(), vec![vec![rat(0, 1)], vec![rat(1, 2)]]);
        let c = enumerate_truncated_cycles(&rat(6, 7), 3).unwrap();
        assert!(c.iter().any(|c| pts(c) == vec![rat(2, 7), rat(4, 7), rat(6, 7)]));
        assert_eq!(minimal_periods(&rat(1, 1), 3).unwrap(), [1, 2, 3].into_iter().collect());
    }

    #[test]
    fn hyperbolicity_examples() {
        let tent = PiecewiseAffineMap::tent();
        let c3 = Cycle::from_affine_orbit(&tent, &rat(2, 7), 3).unwrap();
        assert_eq!(classify_hyperbolicity(&tent, &c3), Hyperbolicity::Repelling);
        assert_eq!(c3.multiplier, rat(8, 1));
        assert_eq!(c3.branch_signs, vec![1, -1, -1]);
        assert_eq!(c3.itinerary, "LRR");

        let h = rat(6, 7);
        let th = PiecewiseAffineMap::truncated_tent(&h).unwrap();
        let corner = Cycle::from_affine_orbit(&th, &h, 3).unwrap();
        assert_eq!(classify_hyperbolicity(&th, &corner), Hyperbolicity::Unsmooth);

        let f = DifferentiableMapHandle::logistic(3.2);
        let two = logistic_two_cycle(&f, 3.2).unwrap();
        assert_eq!(classify_hyperbolicity(&f, &two), Hyperbolicity::Attracting);
        assert!((two.multiplier - logistic_two_cycle_multiplier(3.2)).abs() < 1e-12);
        assert!((logistic_two_cycle_multiplier(3.2) - 0.16).abs() < 1e-12);
        let (p, q) = (two.points[0], two.points[1]);
        assert!((f.eval(p) - q).abs() < 1e-12 && (f.eval(q) - p).abs() < 1e-12);

        // affine map with slope -1 through its fixed point
        let flip = PiecewiseAffineMap::new(
            Interval::new(rat(0, 1), rat(1, 1)).unwrap(),
            vec![],
            vec![crate::number::AffineBranch::new(rat(-1, 1), rat(1, 1))],
        )
        .unwrap();
        let fixed = Cycle::from_affine_orbit(&flip, &rat(1, 2), 1).unwrap();
        assert_eq!(classify_hyperbolicity(&flip, &fixed), Hyperbolicity::NonHyperbolic);
    }
}
