//! Continuous piecewise-affine self-maps of a compact interval with exact
//! rational breakpoints and coefficients.

use serde::{Deserialize, Serialize};

use super::{Interval, IntervalMap, NumberError, Rational};
use crate::number::rat;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineBranch {
    pub slope: Rational,
    pub intercept: Rational,
}

impl AffineBranch {
    pub fn new(slope: Rational, intercept: Rational) -> Self {
        AffineBranch { slope, intercept }
    }

    pub fn at(&self, x: &Rational) -> Rational {
        &self.slope * x + &self.intercept
    }
}

/// `f: C → C` given by closed segments `[b_{j-1}, b_j]` (with the domain
/// endpoints as `b_{-1}` and `b_n`) and one affine branch per segment.
///
/// At a breakpoint the left branch is used; continuity makes the choice
/// unobservable in values, but slope queries report the left slope.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawAffineMap", into = "RawAffineMap")]
pub struct PiecewiseAffineMap {
    domain: Interval<Rational>,
    breakpoints: Vec<Rational>,
    branches: Vec<AffineBranch>,
}

#[derive(Serialize, Deserialize)]
struct RawAffineMap {
    domain: [Rational; 2],
    breakpoints: Vec<Rational>,
    branches: Vec<AffineBranch>,
}

impl TryFrom<RawAffineMap> for PiecewiseAffineMap {
    type Error = NumberError;

    fn try_from(raw: RawAffineMap) -> Result<Self, Self::Error> {
        let [lo, hi] = raw.domain;
        PiecewiseAffineMap::new(Interval::new(lo, hi)?, raw.breakpoints, raw.branches)
    }
}

impl From<PiecewiseAffineMap> for RawAffineMap {
    fn from(m: PiecewiseAffineMap) -> Self {
        let (lo, hi) = m.domain.into_bounds();
        RawAffineMap { domain: [lo, hi], breakpoints: m.breakpoints, branches: m.branches }
    }
}

impl PiecewiseAffineMap {
    /// Validates ordering, continuity at every breakpoint and `f(C) ⊆ C`.
    pub fn new(
        domain: Interval<Rational>,
        breakpoints: Vec<Rational>,
        branches: Vec<AffineBranch>,
    ) -> Result<Self, NumberError> {
        if domain.is_point() {
            return Err(NumberError::InvalidMap("degenerate domain".into()));
        }
        if branches.len() != breakpoints.len() + 1 {
            return Err(NumberError::InvalidMap(format!(
                "{} breakpoints need {} branches, got {}",
                breakpoints.len(),
                breakpoints.len() + 1,
                branches.len()
            )));
        }
        let mut prev = domain.lo().clone();
        for b in &breakpoints {
            if !(*b > prev && b < domain.hi()) {
                return Err(NumberError::InvalidMap(format!(
                    "breakpoint {b} not strictly increasing inside the domain"
                )));
            }
            prev = b.clone();
        }
        for (j, b) in breakpoints.iter().enumerate() {
            let (l, r) = (branches[j].at(b), branches[j + 1].at(b));
            if l != r {
                return Err(NumberError::InvalidMap(format!("discontinuity at {b}: left value {l}, right value {r}")));
            }
        }
        let map = PiecewiseAffineMap { domain, breakpoints, branches };
        for x in map.nodes() {
            let y = map.branches[map.branch_index_unchecked(&x)].at(&x);
            if !map.domain.contains(&y) {
                return Err(NumberError::InvalidMap(format!("f({x}) = {y} leaves the domain")));
            }
        }
        // right endpoint of the last branch
        let y = map.branches.last().unwrap().at(map.domain.hi());
        if !map.domain.contains(&y) {
            return Err(NumberError::InvalidMap(format!("f({}) = {y} leaves the domain", map.domain.hi())));
        }
        Ok(map)
    }

    /// Standard tent map `T(x) = 1 - 2|x - 1/2|` on `[0, 1]`.
    pub fn tent() -> Self {
        Self::asymmetric_tent(&Rational::zero()).expect("valid tent")
    }

    /// `T_h(x) = min(T(x), h)` for `h ∈ (0, 1]`.
    pub fn truncated_tent(h: &Rational) -> Result<Self, NumberError> {
        Self::truncated_asymmetric_tent(h, &Rational::zero())
    }

    /// Asymmetric tent with peak `(1/2 + γ, 1)`, `|γ| < 1/2`.
    pub fn asymmetric_tent(gamma: &Rational) -> Result<Self, NumberError> {
        Self::truncated_asymmetric_tent(&Rational::one(), gamma)
    }

    /// `min(T(γ)(x), h)`: the asymmetric tent capped at height `h ∈ (0, 1]`.
    pub fn truncated_asymmetric_tent(h: &Rational, gamma: &Rational) -> Result<Self, NumberError> {
        let half = rat(1, 2);
        if !(gamma.abs() < half) {
            return Err(NumberError::InvalidMap(format!("asymmetry {gamma} must satisfy |γ| < 1/2")));
        }
        if !(h.is_positive() && *h <= Rational::one()) {
            return Err(NumberError::InvalidMap(format!("height {h} must lie in (0, 1]")));
        }
        let two = Rational::integer(2);
        let up = &two / (Rational::one() + &two * gamma);
        let down = &two / (Rational::one() - &two * gamma);
        let domain = Interval::new(Rational::zero(), Rational::one())?;
        let rising = AffineBranch::new(up.clone(), Rational::zero());
        let falling = AffineBranch::new(-&down, down.clone());
        if *h == Rational::one() {
            return Self::new(domain, vec![&half + gamma], vec![rising, falling]);
        }
        let left_corner = h / &up;
        let right_corner = Rational::one() - h / &down;
        Self::new(
            domain,
            vec![left_corner, right_corner],
            vec![rising, AffineBranch::new(Rational::zero(), h.clone()), falling],
        )
    }

    pub fn domain(&self) -> &Interval<Rational> {
        &self.domain
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn branches(&self) -> &[AffineBranch] {
        &self.branches
    }

    /// Closed segment on which branch `j` applies.
    pub fn segment(&self, j: usize) -> Result<Interval<Rational>, NumberError> {
        if j >= self.branches.len() {
            return Err(NumberError::NoSuchBranch(j));
        }
        let lo = if j == 0 { self.domain.lo().clone() } else { self.breakpoints[j - 1].clone() };
        let hi = self.breakpoints.get(j).cloned().unwrap_or_else(|| self.domain.hi().clone());
        Interval::new(lo, hi)
    }

    pub fn is_breakpoint(&self, x: &Rational) -> bool {
        self.breakpoints.binary_search(x).is_ok()
    }

    /// Index of the branch used at `x` (left branch at a breakpoint).
    pub fn branch_index(&self, x: &Rational) -> Result<usize, NumberError> {
        if !self.domain.contains(x) {
            return Err(NumberError::Domain(x.to_string()));
        }
        Ok(self.branch_index_unchecked(x))
    }

    fn branch_index_unchecked(&self, x: &Rational) -> usize {
        self.breakpoints.partition_point(|b| b < x)
    }

    fn nodes(&self) -> impl Iterator<Item = Rational> + '_ {
        std::iter::once(self.domain.lo().clone()).chain(self.breakpoints.iter().cloned())
    }

    pub fn eval_exact(&self, x: &Rational) -> Result<Rational, NumberError> {
        let j = self.branch_index(x)?;
        Ok(self.branches[j].at(x))
    }

    /// Slope of the branch used at `x`.
    pub fn slope_at(&self, x: &Rational) -> Result<&Rational, NumberError> {
        let j = self.branch_index(x)?;
        Ok(&self.branches[j].slope)
    }

    /// Exact image hull of `J`: extrema of a piecewise-affine function on a
    /// segment occur at the segment ends or at interior breakpoints.
    pub fn eval_interval(&self, j: &Interval<Rational>) -> Result<Interval<Rational>, NumberError> {
        if !j.subset_of(&self.domain) {
            return Err(NumberError::Domain(j.to_string()));
        }
        let mut hull = Interval::point(self.eval_exact(j.lo())?);
        hull = hull.hull_point(&self.eval_exact(j.hi())?);
        for b in self.breakpoints.iter().filter(|b| j.contains_interior(b)) {
            hull = hull.hull_point(&self.eval_exact(b)?);
        }
        Ok(hull)
    }

    /// The unique `x` on branch `j` with `f(x) = y`.
    pub fn invert_branch(&self, j: usize, y: &Rational) -> Result<Rational, NumberError> {
        let seg = self.segment(j)?;
        let branch = &self.branches[j];
        if branch.slope.is_zero() {
            return Err(NumberError::NotInvertible(j));
        }
        let image = Interval::point(branch.at(seg.lo())).hull_point(&branch.at(seg.hi()));
        if !image.contains(y) {
            return Err(NumberError::Range { branch: j, value: y.to_string(), image: image.to_string() });
        }
        Ok((y - &branch.intercept) / &branch.slope)
    }

    /// Exact `{x ∈ within : f(x) ∈ y}` as a union of closed intervals.
    pub fn preimage_pieces(
        &self,
        y: &Interval<Rational>,
        within: &Interval<Rational>,
    ) -> Result<Vec<Interval<Rational>>, NumberError> {
        let mut out = Vec::new();
        for j in 0..self.branches.len() {
            let Some(piece) = self.segment(j)?.intersection(within) else { continue };
            let br = &self.branches[j];
            if br.slope.is_zero() {
                if y.contains(&br.intercept) {
                    out.push(piece);
                }
                continue;
            }
            let a = (y.lo() - &br.intercept) / &br.slope;
            let b = (y.hi() - &br.intercept) / &br.slope;
            let pre = Interval::point(a).hull_point(&b);
            if let Some(p) = pre.intersection(&piece) {
                out.push(p);
            }
        }
        Ok(super::normalize_union(out))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable map")
    }

    pub fn from_json(s: &str) -> Result<Self, NumberError> {
        serde_json::from_str(s).map_err(|e| NumberError::Parse(e.to_string()))
    }
}

impl IntervalMap<Rational> for PiecewiseAffineMap {
    fn domain(&self) -> Interval<Rational> {
        self.domain.clone()
    }

    fn image(&self, j: &Interval<Rational>) -> Result<Interval<Rational>, NumberError> {
        self.eval_interval(j)
    }

    fn derivative(&self, j: &Interval<Rational>) -> Result<Interval<Rational>, NumberError> {
        if !j.subset_of(&self.domain) {
            return Err(NumberError::Domain(j.to_string()));
        }
        let mut hull: Option<Interval<Rational>> = None;
        for (k, br) in self.branches.iter().enumerate() {
            if self.segment(k)?.intersects(j) {
                let s = Interval::point(br.slope.clone());
                hull = Some(match hull {
                    Some(h) => h.hull(&s),
                    None => s,
                });
            }
        }
        Ok(hull.expect("J meets at least one segment"))
    }

    fn breakpoints(&self) -> Vec<Rational> {
        self.breakpoints.clone()
    }

    fn preimage_in(
        &self,
        y: &Interval<Rational>,
        within: &Interval<Rational>,
    ) -> Result<Option<Interval<Rational>>, NumberError> {
        let pieces = self.preimage_pieces(y, within)?;
        Ok(pieces.into_iter().reduce(|a, b| a.hull(&b)))
    }

    fn image_is_exact(&self) -> bool {
        true
    }

    fn describe(&self) -> String {
        self.to_json()
    }
}

/// Double-precision view: endpoints are read exactly as rationals, the image
/// is computed exactly and rounded outward.
impl IntervalMap<f64> for PiecewiseAffineMap {
    fn domain(&self) -> Interval<f64> {
        self.domain.to_f64()
    }

    fn image(&self, j: &Interval<f64>) -> Result<Interval<f64>, NumberError> {
        Ok(self.eval_interval(&j.to_rational())?.to_f64())
    }

    fn derivative(&self, j: &Interval<f64>) -> Result<Interval<f64>, NumberError> {
        Ok(IntervalMap::<Rational>::derivative(self, &j.to_rational())?.to_f64())
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.breakpoints.iter().map(Rational::to_f64).collect()
    }

    fn preimage_in(&self, y: &Interval<f64>, within: &Interval<f64>) -> Result<Option<Interval<f64>>, NumberError> {
        let within = within.to_rational().intersection(&self.domain);
        let Some(within) = within else { return Ok(None) };
        Ok(IntervalMap::<Rational>::preimage_in(self, &y.to_rational(), &within)?.map(|p| p.to_f64()))
    }

    fn describe(&self) -> String {
        self.to_json()
    }
}
