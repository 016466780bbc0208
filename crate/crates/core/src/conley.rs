//! Isolating neighbourhoods of hyperbolic cycles, their Conley index
//! matrices, isolating-block checks and the perturbation budget `ε`.
//!
//! A neighbourhood `N = N_1 ∪ … ∪ N_k` of a cycle `p_1 → … → p_k` is
//! certified with three margins:
//! - *forcing*: attracting cycles need `f(N_i) ⊂ int N_{i+1}`; repelling cycles
//!   need `f` monotone on `N_i` with both endpoint images outside `N_{i+1}` on
//!   opposite sides, so `f(N_i)` covers `N_{i+1}`. `η` is the smallest gap
//!   between the relevant image and the boundary of `N_{i+1}`;
//! - *dichotomy*: `sup |g'| ≤ 1 − 3β` (attracting) or `inf |g'| ≥ 1 + 3β`
//!   (repelling) for `g = f^k` on each `N_i`. In the repelling case the bound
//!   is taken over points whose first `k` iterates follow the cycle's
//!   neighbourhoods, the only points that can stay in `N`;
//! - *disjointness*: the `N_i` are pairwise disjoint, avoid breakpoints, and lie
//!   in the interior of the domain.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certify::InequalityLine;
use crate::cycles::{classify_hyperbolicity, Cycle, Hyperbolicity};
use crate::number::{Interval, IntervalMap, NumberError, Scalar};

/// Number of radius halvings before giving up.
pub const MAX_HALVINGS: u32 = 40;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConleyError {
    #[error("cycle is not hyperbolic ({0:?})")]
    NotHyperbolic(Hyperbolicity),
    #[error("cycle point {0} sits on a breakpoint of the map")]
    BreakpointTooClose(String),
    #[error("no certified radius after {0} halvings: {1}")]
    NoConvergence(u32, String),
    #[error("cycle point {0} lies on the boundary of the domain")]
    BoundaryCycle(String),
    #[error("no cycles supplied")]
    EmptyTail,
    #[error("neighbourhoods too large for a separation constant: max diameter {max_diam} >= min distance {min_dist}")]
    NoSeparation { max_diam: String, min_dist: String },
    #[error(transparent)]
    Number(#[from] NumberError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CycleKind {
    Attracting,
    Repelling,
}

/// Certified neighbourhood `N_1 ∪ … ∪ N_k` of a hyperbolic cycle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "S: Serialize", deserialize = "S: Deserialize<'de> + Scalar"))]
pub struct IsolatingNeighborhood<S: Scalar> {
    pub kind: CycleKind,
    /// `N_i ∋ p_i`, in cycle order.
    pub components: Vec<Interval<S>>,
    pub beta: S,
    pub eta: S,
    pub per_component_radius: Vec<S>,
    /// Enclosure of `|g'|` on each `N_i` (itinerary-restricted for repelling cycles).
    pub return_derivative: Vec<Interval<S>>,
    /// `L = sup_N |f'|`.
    pub lipschitz: S,
}

impl<S: Scalar> IsolatingNeighborhood<S> {
    pub fn period(&self) -> usize {
        self.components.len()
    }

    /// Contraction rate of the `k`-step map (attracting) or of its inverse
    /// branch (repelling) on `N_1`, derived from `β`.
    pub fn contraction_rate(&self) -> S {
        let two_beta = self.beta.clone() + self.beta.clone();
        match self.kind {
            CycleKind::Attracting => (S::one() - two_beta).round_up(),
            CycleKind::Repelling => (S::one() / (S::one() + two_beta).round_down()).round_up(),
        }
    }

    /// Re-checks forcing, dichotomy and disjointness against `map`.
    pub fn recheck<M: IntervalMap<S> + ?Sized>(&self, map: &M) -> Result<bool, ConleyError> {
        let attempt = certify_components(map, self.kind, &self.components)?;
        Ok(matches!(attempt, Ok(c) if c.beta >= self.beta && c.eta >= self.eta))
    }
}

/// Options for [`build_neighborhood`].
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborhoodOptions<S> {
    /// Upper bound on the base radius `r`.
    pub max_radius: Option<S>,
}

impl<S> Default for NeighborhoodOptions<S> {
    fn default() -> Self {
        NeighborhoodOptions { max_radius: None }
    }
}

struct Certified<S> {
    beta: S,
    eta: S,
    return_derivative: Vec<Interval<S>>,
    lipschitz: S,
}

/// Builds and certifies `N_i = [p_i − r·w_i, p_i + r·w_i]`.
///
/// The weights `w_i` follow the local derivatives (`w_{i+1} = w_i·|f'(p_i)|/ρ`
/// with `ρ` the geometric mean), so that one step of `f` scales every
/// component by the same factor `ρ`. The base radius starts at half the
/// smaller of the breakpoint/boundary clearance and half the minimal gap
/// between cycle points, and is halved up to [`MAX_HALVINGS`] times.
pub fn build_neighborhood<S: Scalar, M: IntervalMap<S> + ?Sized>(
    map: &M,
    cycle: &Cycle<S>,
    options: &NeighborhoodOptions<S>,
) -> Result<IsolatingNeighborhood<S>, ConleyError> {
    let domain = map.domain();
    for p in &cycle.points {
        if !domain.contains_interior(p) {
            return Err(ConleyError::BoundaryCycle(p.to_string()));
        }
    }
    let kind = match classify_hyperbolicity(map, cycle) {
        Hyperbolicity::Attracting => CycleKind::Attracting,
        Hyperbolicity::Repelling => CycleKind::Repelling,
        Hyperbolicity::Unsmooth => {
            let bps = map.breakpoints();
            let p = cycle.points.iter().find(|p| bps.contains(p)).map(|p| p.to_string()).unwrap_or_default();
            return Err(ConleyError::BreakpointTooClose(p));
        }
        h => return Err(ConleyError::NotHyperbolic(h)),
    };

    let weights = radius_weights(map, cycle)?;
    let max_w = weights.iter().skip(1).fold(weights[0].clone(), |a, b| S::max_of(&a, b));
    let breakpoints = map.breakpoints();
    let mut r: Option<S> = None;
    for (p, w) in cycle.points.iter().zip(&weights) {
        let mut clearance =
            S::min_of(&(p.clone() - domain.lo().clone()).round_down(), &(domain.hi().clone() - p.clone()).round_down());
        for b in &breakpoints {
            clearance = S::min_of(&clearance, &(p.clone() - b.clone()).abs().round_down());
        }
        let c = (clearance / w.clone()).round_down();
        r = Some(match r {
            Some(r) => S::min_of(&r, &c),
            None => c,
        });
    }
    let mut r = r.expect("nonempty cycle");
    if let Some(gap) = cycle.min_gap() {
        r = S::min_of(&r, &(gap.half() / max_w).round_down());
    }
    r = r.half();
    if let Some(cap) = &options.max_radius {
        r = S::min_of(&r, cap);
    }
    if !(r > S::zero()) {
        return Err(ConleyError::BreakpointTooClose(cycle.points[0].to_string()));
    }

    let mut last_reason = String::new();
    for _ in 0..=MAX_HALVINGS {
        let radii: Vec<S> = weights.iter().map(|w| (r.clone() * w.clone()).round_down()).collect();
        let components: Vec<Interval<S>> =
            cycle.points.iter().zip(&radii).map(|(p, e)| Interval::centered(p, e)).collect();
        match certify_components(map, kind, &components)? {
            Ok(c) => {
                return Ok(IsolatingNeighborhood {
                    kind,
                    components,
                    beta: c.beta,
                    eta: c.eta,
                    per_component_radius: radii,
                    return_derivative: c.return_derivative,
                    lipschitz: c.lipschitz,
                })
            }
            Err(reason) => last_reason = reason,
        }
        r = r.half();
    }
    Err(ConleyError::NoConvergence(MAX_HALVINGS, last_reason))
}

fn radius_weights<S: Scalar, M: IntervalMap<S> + ?Sized>(map: &M, cycle: &Cycle<S>) -> Result<Vec<S>, ConleyError> {
    let k = cycle.points.len();
    let mut d = Vec::with_capacity(k);
    for p in &cycle.points {
        let dp = map.derivative(&Interval::point(p.clone()))?;
        // superstable points still need a positive weight
        d.push(dp.midpoint().to_f64().abs().max(1.0 / 1024.0));
    }
    if d.iter().all(|x| (x - d[0]).abs() <= 1e-12 * d[0]) {
        return Ok(vec![S::one(); k]);
    }
    let rho = (d.iter().map(|x| x.ln()).sum::<f64>() / k as f64).exp();
    let mut w = vec![1.0f64; k];
    for i in 1..k {
        w[i] = w[i - 1] * d[i - 1] / rho;
    }
    Ok(w.into_iter().map(S::from_f64_approx).collect())
}

/// Checks the three certification conditions; `Ok(Err(reason))` when a
/// condition fails on these components.
fn certify_components<S: Scalar, M: IntervalMap<S> + ?Sized>(
    map: &M,
    kind: CycleKind,
    components: &[Interval<S>],
) -> Result<Result<Certified<S>, String>, ConleyError> {
    let k = components.len();
    let domain = map.domain();
    let breakpoints = map.breakpoints();
    for (i, n) in components.iter().enumerate() {
        if !n.subset_of_interior(&domain) {
            return Ok(Err(format!("N_{} = {n} is not interior to the domain", i + 1)));
        }
        if let Some(b) = breakpoints.iter().find(|b| n.contains(b)) {
            return Ok(Err(format!("N_{} = {n} contains the breakpoint {b}", i + 1)));
        }
        for (j, m) in components.iter().enumerate().skip(i + 1) {
            if n.intersects(m) {
                return Ok(Err(format!("N_{} and N_{} overlap", i + 1, j + 1)));
            }
        }
    }

    let mut eta: Option<S> = None;
    let mut lipschitz = S::zero();
    for i in 0..k {
        let n = &components[i];
        let next = &components[(i + 1) % k];
        let d = map.derivative(n)?;
        lipschitz = S::max_of(&lipschitz, &d.mag());
        let margin = match kind {
            CycleKind::Attracting => {
                let img = map.image(n)?;
                if !img.subset_of_interior(next) {
                    return Ok(Err(format!("f(N_{}) = {img} is not inside int N_{}", i + 1, (i + 1) % k + 1)));
                }
                S::min_of(
                    &(img.lo().clone() - next.lo().clone()).round_down(),
                    &(next.hi().clone() - img.hi().clone()).round_down(),
                )
            }
            CycleKind::Repelling => {
                if d.contains(&S::zero()) {
                    return Ok(Err(format!("f is not monotone on N_{}", i + 1)));
                }
                let a = map.value(n.lo())?;
                let b = map.value(n.hi())?;
                let (below, above) = if *d.lo() > S::zero() { (a, b) } else { (b, a) };
                let gap_below = (next.lo().clone() - below.hi().clone()).round_down();
                let gap_above = (above.lo().clone() - next.hi().clone()).round_down();
                if !(gap_below > S::zero() && gap_above > S::zero()) {
                    return Ok(Err(format!("f(∂N_{}) does not straddle N_{}", i + 1, (i + 1) % k + 1)));
                }
                S::min_of(&gap_below, &gap_above)
            }
        };
        eta = Some(match eta {
            Some(e) => S::min_of(&e, &margin),
            None => margin,
        });
    }

    let three = S::from_int(3);
    let mut beta: Option<S> = None;
    let mut return_derivative = Vec::with_capacity(k);
    for i in 0..k {
        let mut j_set = components[i].clone();
        let mut prod = Interval::point(S::one());
        for step in 0..k {
            let d = map.derivative(&j_set)?.abs();
            prod = prod.mul(&d);
            let img = map.image(&j_set)?;
            let target = &components[(i + step + 1) % k];
            j_set = match kind {
                CycleKind::Attracting => img,
                CycleKind::Repelling => match img.intersection(target) {
                    Some(s) => s,
                    None => return Ok(Err(format!("itinerary from N_{} leaves the neighbourhood", i + 1))),
                },
            };
        }
        let b = match kind {
            CycleKind::Attracting => ((S::one() - prod.hi().clone()).round_down() / three.clone()).round_down(),
            CycleKind::Repelling => ((prod.lo().clone() - S::one()).round_down() / three.clone()).round_down(),
        };
        if !(b > S::zero()) {
            return Ok(Err(format!("|g'| on N_{} is {prod}, no hyperbolicity margin", i + 1)));
        }
        return_derivative.push(prod);
        beta = Some(match beta {
            Some(x) => S::min_of(&x, &b),
            None => b,
        });
    }
    Ok(Ok(Certified { beta: beta.unwrap(), eta: eta.unwrap(), return_derivative, lipschitz }))
}

/// Index of a hyperbolic cycle: cohomological degree and the matrix of the
/// index map in the basis attached to `N_1, …, N_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConleyIndexData {
    pub degree: u8,
    pub matrix: Vec<Vec<i64>>,
    pub cycle_kind: CycleKind,
}

/// Closed-form index: attracting cycles give the cyclic permutation matrix in
/// degree 0, repelling cycles the signed cyclic permutation in degree 1 with
/// row `i` carrying `σ_i = sign f'(p_i)` in column `i + 1` (mod `k`).
pub fn conley_index<S: Scalar>(cycle: &Cycle<S>, nbhd: &IsolatingNeighborhood<S>) -> ConleyIndexData {
    let k = cycle.points.len();
    let mut matrix = vec![vec![0i64; k]; k];
    for (i, row) in matrix.iter_mut().enumerate() {
        row[(i + 1) % k] = match nbhd.kind {
            CycleKind::Attracting => 1,
            CycleKind::Repelling => cycle.branch_signs[i] as i64,
        };
    }
    let degree = match nbhd.kind {
        CycleKind::Attracting => 0,
        CycleKind::Repelling => 1,
    };
    ConleyIndexData { degree, matrix, cycle_kind: nbhd.kind }
}

pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![0i64; m]; n];
    for i in 0..n {
        for (l, b_row) in b.iter().enumerate() {
            if a[i][l] != 0 {
                for j in 0..m {
                    out[i][j] += a[i][l] * b_row[j];
                }
            }
        }
    }
    out
}

pub fn mat_pow(a: &[Vec<i64>], e: u32) -> Vec<Vec<i64>> {
    let n = a.len();
    let mut out: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    for _ in 0..e {
        out = mat_mul(&out, a);
    }
    out
}

/// `Some(s)` when `a = s·I` with `s = ±1`.
pub fn signed_identity_sign(a: &[Vec<i64>]) -> Option<i64> {
    let s = *a.first()?.first()?;
    let ok = (s == 1 || s == -1)
        && a.iter().enumerate().all(|(i, row)| {
            row.len() == a.len() && row.iter().enumerate().all(|(j, &x)| x == if i == j { s } else { 0 })
        });
    ok.then_some(s)
}

/// `true` iff no power of the index matrix vanishes.
///
/// A `k × k` matrix is nilpotent iff its `k`-th power is zero, so one power
/// decides the question.
pub fn index_nontrivial(idx: &ConleyIndexData) -> bool {
    let k = idx.matrix.len();
    if k == 0 {
        return false;
    }
    mat_pow(&idx.matrix, k as u32).iter().flatten().any(|&x| x != 0)
}

/// Three-valued outcome of [`verify_isolating_block`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum BlockVerdict<S: Scalar> {
    Holds,
    Violated { witness: S },
    Unknown { reason: String },
}

impl<S: Scalar> BlockVerdict<S> {
    pub fn holds(&self) -> bool {
        matches!(self, BlockVerdict::Holds)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tri {
    Yes,
    No,
    Maybe,
}

const IMAGE_SAMPLES: usize = 64;

/// Decides `f(N) ∩ N ∩ f⁻¹(N) ⊂ int N` for a union `N` of closed intervals.
///
/// The set `A = f(N) ∩ N ∩ f⁻¹(N)` is closed and contained in `N`, so it
/// escapes `int N` exactly when it contains an endpoint of a component of `N`.
/// Each endpoint `e` is tested for `f(e) ∈ N` and `e ∈ f(N)`; a failure to
/// decide either test with the available enclosures gives `Unknown`.
pub fn verify_isolating_block<S: Scalar, M: IntervalMap<S> + ?Sized>(
    map: &M,
    n: &[Interval<S>],
) -> Result<BlockVerdict<S>, ConleyError> {
    let mut unknown: Option<String> = None;
    for comp in n {
        for e in [comp.lo(), comp.hi()] {
            let in_n = |y: &Interval<S>| -> Tri {
                if n.iter().any(|c| y.subset_of(c)) {
                    Tri::Yes
                } else if n.iter().all(|c| !y.intersects(c)) {
                    Tri::No
                } else {
                    Tri::Maybe
                }
            };
            let f_e = map.value(e)?;
            let maps_into = in_n(&f_e);
            if maps_into == Tri::No {
                continue;
            }
            let mut covered = Tri::No;
            for c in n {
                match in_image(map, c, e)? {
                    Tri::Yes => {
                        covered = Tri::Yes;
                        break;
                    }
                    Tri::Maybe => covered = Tri::Maybe,
                    Tri::No => {}
                }
            }
            match (maps_into, covered) {
                (_, Tri::No) => {}
                (Tri::Yes, Tri::Yes) => return Ok(BlockVerdict::Violated { witness: e.clone() }),
                _ => {
                    unknown.get_or_insert_with(|| format!("cannot decide whether {e} lies in f(N) ∩ f⁻¹(N)"));
                }
            }
        }
    }
    Ok(match unknown {
        Some(reason) => BlockVerdict::Unknown { reason },
        None => BlockVerdict::Holds,
    })
}

fn in_image<S: Scalar, M: IntervalMap<S> + ?Sized>(map: &M, c: &Interval<S>, e: &S) -> Result<Tri, ConleyError> {
    // outer enclosure from a subdivision
    let pieces = subdivide(c, if map.image_is_exact() { 1 } else { IMAGE_SAMPLES });
    let mut outer: Option<Interval<S>> = None;
    for p in &pieces {
        let img = map.image(p)?;
        outer = Some(match outer {
            Some(o) => o.hull(&img),
            None => img,
        });
    }
    if !outer.expect("nonempty subdivision").contains(e) {
        return Ok(Tri::No);
    }
    if map.image_is_exact() {
        return Ok(Tri::Yes);
    }
    // intermediate value theorem on sampled points
    let (mut below, mut above) = (false, false);
    for p in pieces.iter().map(Interval::lo).chain(std::iter::once(c.hi())) {
        let v = map.value(p)?;
        below |= v.hi() <= e;
        above |= v.lo() >= e;
    }
    Ok(if below && above { Tri::Yes } else { Tri::Maybe })
}

fn subdivide<S: Scalar>(c: &Interval<S>, pieces: usize) -> Vec<Interval<S>> {
    if pieces <= 1 || c.is_point() {
        return vec![c.clone()];
    }
    let width = c.hi().clone() - c.lo().clone();
    let n = S::from_int(pieces as i64);
    let mut cuts = vec![c.lo().clone()];
    for i in 1..pieces {
        let t = c.lo().clone() + width.clone() * S::from_int(i as i64) / n.clone();
        let t = S::min_of(&S::max_of(&t, c.lo()), c.hi());
        cuts.push(t);
    }
    cuts.push(c.hi().clone());
    cuts.windows(2).filter_map(|w| Interval::new(w[0].clone(), S::max_of(&w[0], &w[1])).ok()).collect()
}

/// Per-cycle ingredients of the budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "S: Serialize", deserialize = "S: Deserialize<'de> + Scalar"))]
pub struct CycleBudget<S: Scalar> {
    pub period: usize,
    pub eta: S,
    pub beta: S,
    pub lipschitz: S,
    pub chain_rule_constant: S,
    /// `min(η, β / C)` for this cycle.
    pub epsilon_bound: S,
}

/// Perturbation radius `ε`, chain-rule constant and separation `δ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "S: Serialize", deserialize = "S: Deserialize<'de> + Scalar"))]
pub struct RobustnessBudget<S: Scalar> {
    pub epsilon: S,
    /// Largest per-cycle constant `C`.
    pub chain_rule_constant: S,
    pub delta: S,
    pub max_diameter: S,
    pub min_distance: S,
    pub per_cycle: Vec<CycleBudget<S>>,
    pub inequality_transcript: Vec<InequalityLine>,
}

/// `C = Σ_{j<k} (L + 1)^j · L^{k−1−j}`: bounds `|(G^k)' − (f^k)'|` by `C·ε`
/// along `N` when every step is `ε`-close to `f` in `C¹` (and `ε ≤ 1`).
pub fn chain_rule_constant<S: Scalar>(lipschitz: &S, k: usize) -> S {
    let l1 = (lipschitz.clone() + S::one()).round_up();
    let mut total = S::zero();
    for j in 0..k {
        let mut term = S::one();
        for _ in 0..j {
            term = (term * l1.clone()).round_up();
        }
        for _ in 0..(k - 1 - j) {
            term = (term * lipschitz.clone()).round_up();
        }
        total = (total + term).round_up();
    }
    total
}

/// `ε = ½ · min_cycles min(η, β / C)`, so that `ε < η` and `C·ε ≤ β` hold
/// with room to spare, and `δ` halfway between the largest component
/// diameter and the smallest gap between components of all neighbourhoods.
pub fn epsilon_budget<S: Scalar>(
    domain: &Interval<S>,
    tail: &[(&Cycle<S>, &IsolatingNeighborhood<S>)],
) -> Result<RobustnessBudget<S>, ConleyError> {
    if tail.is_empty() {
        return Err(ConleyError::EmptyTail);
    }
    for (cycle, _) in tail {
        if let Some(p) = cycle.points.iter().find(|p| !domain.contains_interior(p)) {
            return Err(ConleyError::BoundaryCycle(p.to_string()));
        }
    }
    let mut per_cycle = Vec::with_capacity(tail.len());
    let mut eps_min: Option<S> = None;
    let mut c_max = S::zero();
    for (cycle, nbhd) in tail {
        let k = cycle.points.len();
        let c = chain_rule_constant(&nbhd.lipschitz, k);
        let bound = S::min_of(&nbhd.eta, &(nbhd.beta.clone() / c.clone()).round_down());
        eps_min = Some(match eps_min {
            Some(e) => S::min_of(&e, &bound),
            None => bound.clone(),
        });
        c_max = S::max_of(&c_max, &c);
        per_cycle.push(CycleBudget {
            period: k,
            eta: nbhd.eta.clone(),
            beta: nbhd.beta.clone(),
            lipschitz: nbhd.lipschitz.clone(),
            chain_rule_constant: c,
            epsilon_bound: bound,
        });
    }
    let epsilon = eps_min.expect("nonempty tail").half();

    let all: Vec<&Interval<S>> = tail.iter().flat_map(|(_, n)| n.components.iter()).collect();
    let max_diameter = all.iter().map(|c| c.width()).reduce(|a, b| S::max_of(&a, &b)).expect("components");
    let mut min_distance: Option<S> = None;
    for (i, a) in all.iter().enumerate() {
        for b in &all[i + 1..] {
            let d = a.distance(b);
            min_distance = Some(match min_distance {
                Some(m) => S::min_of(&m, &d),
                None => d,
            });
        }
    }
    // a single fixed point has no pair to separate: any δ above its diameter works
    let min_distance = min_distance.unwrap_or_else(|| (max_diameter.clone() + S::one()).round_down());
    if !(max_diameter < min_distance) {
        return Err(ConleyError::NoSeparation {
            max_diam: max_diameter.to_string(),
            min_dist: min_distance.to_string(),
        });
    }
    let delta = (max_diameter.clone() + min_distance.clone()).half();

    let mut transcript = Vec::new();
    for b in &per_cycle {
        let k = b.period;
        transcript.push(InequalityLine::lt(format!("epsilon < eta[k={k}]"), &epsilon, &b.eta));
        let lhs = (b.chain_rule_constant.clone() * epsilon.clone()).round_up();
        transcript.push(InequalityLine::le(format!("C[k={k}] * epsilon <= beta[k={k}]"), &lhs, &b.beta));
    }
    transcript.push(InequalityLine::le("epsilon <= 1", &epsilon, &S::one()));
    transcript.push(InequalityLine::lt("max diam(N_i) < delta", &max_diameter, &delta));
    transcript.push(InequalityLine::lt("delta < min dist(N_i, N_j)", &delta, &min_distance));

    Ok(RobustnessBudget {
        epsilon,
        chain_rule_constant: c_max,
        delta,
        max_diameter,
        min_distance,
        per_cycle,
        inequality_transcript: transcript,
    })
}
