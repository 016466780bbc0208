//! Membership of a random family in the class `R¹_ε(f)` and the explicit
//! random isolating neighbourhood of the asymmetric tent.

use serde::{Deserialize, Serialize};

use super::noise::{NoiseKind, NoiseModel};
use super::RandomError;
use crate::certify::InequalityLine;
use crate::number::{Interval, PiecewiseAffineMap, Rational, Scalar};
use crate::rat;

/// Suprema found by [`check_r1_membership`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub epsilon: Rational,
    /// Bound on `sup_ω sup_{x∈N} |φ − f| + |∂ₓφ − f'|`.
    pub c1_distance_on_n: Rational,
    /// Bound on `sup_ω sup_{x∈C} |φ − f|`.
    pub c0_distance: Rational,
    pub inequality_transcript: Vec<InequalityLine>,
}

/// Checks the three clauses of `R¹_ε(f)` for the family `noise` around its
/// base map `f` and the neighbourhood union `n`:
/// 1. no breakpoint of any fibre map lies in `N`;
/// 2. `|φ − f| + |∂ₓφ − f'| < ε` on `N`;
/// 3. `|φ − f| < ε` on `[0, 1]`.
///
/// Tent families are handled exactly. Breakpoints and, on a component free of
/// them, both distances move monotonically with `|γ|`, so the suprema over
/// `γ ∈ (−ξ, ξ)` are bounded by the values at `γ = ±ξ`; the whole-interval
/// `C⁰` distance of `min(T(γ), h)` to `min(T, h)` is at most `2|γ|`. For the
/// logistic family `|Δc|` is at most the half-width of the parameter range and
/// the distances are `|Δc|·x(1 − x)` and `|Δc|·|1 − 2x|`.
pub fn check_r1_membership<S: Scalar>(
    noise: &NoiseModel,
    n: &[Interval<S>],
    epsilon: &Rational,
) -> Result<MembershipReport, RandomError> {
    let n: Vec<Interval<Rational>> = n.iter().map(Interval::to_rational).collect();
    match &noise.kind {
        NoiseKind::Logistic { .. } => logistic_membership(noise, &n, epsilon),
        _ => tent_membership(noise, &n, epsilon),
    }
}

fn failed(clause: u8, witness: impl ToString, detail: String) -> RandomError {
    RandomError::ConditionFailed { clause, witness: witness.to_string(), detail }
}

fn tent_membership(
    noise: &NoiseModel,
    n: &[Interval<Rational>],
    epsilon: &Rational,
) -> Result<MembershipReport, RandomError> {
    let xi = noise.effective_xi().expect("tent family");
    let h = noise.height().expect("tent family").clone();
    let f = PiecewiseAffineMap::truncated_tent(&h)?;
    let extremes = [
        PiecewiseAffineMap::truncated_asymmetric_tent(&h, &-&xi)?,
        PiecewiseAffineMap::truncated_asymmetric_tent(&h, &xi)?,
    ];
    let mut transcript = Vec::new();

    // clause 1: each breakpoint sweeps the hull of its positions at γ = ±ξ
    let (lo_bps, hi_bps) = (extremes[0].breakpoints(), extremes[1].breakpoints());
    for (a, b) in lo_bps.iter().zip(hi_bps) {
        let swept = Interval::point(a.clone()).hull_point(b);
        for comp in n {
            let ok = !comp.intersects(&swept);
            transcript.push(InequalityLine::new(
                format!("breakpoints {swept} avoid N-component {comp}"),
                swept.to_string(),
                comp.to_string(),
                ok,
            ));
            if !ok {
                return Err(failed(1, swept.midpoint(), format!("breakpoints sweep {swept}, which meets {comp}")));
            }
        }
    }

    // clause 2: affine differences on each component, extremal at endpoints
    let mut c1 = Rational::zero();
    let mut c1_witness = Rational::zero();
    for g in &extremes {
        for comp in n {
            for x in [comp.lo(), comp.hi()] {
                let d0 = (g.eval_exact(x)? - f.eval_exact(x)?).abs();
                let d1 = (g.slope_at(x)? - f.slope_at(x)?).abs();
                let d = d0 + d1;
                if d > c1 {
                    c1 = d;
                    c1_witness = x.clone();
                }
            }
        }
    }
    let ok2 = c1 < *epsilon;
    transcript.push(InequalityLine::lt("sup_N |phi - f| + |phi' - f'| < epsilon", &c1, epsilon));
    if !ok2 {
        return Err(failed(2, &c1_witness, format!("C¹ distance {c1} on N is not below ε = {epsilon}")));
    }

    // clause 3: sup_x |min(T(γ), h) − min(T, h)| ≤ sup_x |T(γ) − T| = 2|γ|
    let c0 = &xi * &rat(2, 1);
    transcript.push(InequalityLine::lt("sup_C |phi - f| <= 2 xi < epsilon", &c0, epsilon));
    if !(c0 < *epsilon) {
        return Err(failed(
            3,
            rat(1, 2) + xi.clone(),
            format!("C⁰ distance up to {c0} at the peak is not below ε = {epsilon}"),
        ));
    }
    Ok(MembershipReport {
        epsilon: epsilon.clone(),
        c1_distance_on_n: c1,
        c0_distance: c0,
        inequality_transcript: transcript,
    })
}

fn logistic_membership(
    noise: &NoiseModel,
    n: &[Interval<Rational>],
    epsilon: &Rational,
) -> Result<MembershipReport, RandomError> {
    let NoiseKind::Logistic { c_lo, c_hi } = noise.kind else { unreachable!() };
    let lo = Rational::from_f64_exact(c_lo).expect("finite");
    let hi = Rational::from_f64_exact(c_hi).expect("finite");
    // the sampled parameter is rounded to double, which can add one ulp of c
    let ulp = Rational::from_f64_exact(4.0 * f64::EPSILON).expect("finite");
    let dc = (hi - lo) / rat(2, 1) * noise.lambda.clone() + ulp;
    let mut transcript = vec![InequalityLine::new("family has no breakpoints", "0", "0", true)];

    let half = rat(1, 2);
    let mut c1 = Rational::zero();
    let mut witness = Rational::zero();
    for comp in n {
        let mid = Rational::max_of(comp.lo(), &Rational::min_of(&half, comp.hi()));
        let quad = &mid * &(Rational::one() - &mid);
        let slope = Rational::max_of(
            &(Rational::one() - comp.lo() * &rat(2, 1)).abs(),
            &(Rational::one() - comp.hi() * &rat(2, 1)).abs(),
        );
        let d = &dc * &(quad + slope);
        if d > c1 {
            c1 = d;
            witness = comp.lo().clone();
        }
    }
    transcript.push(InequalityLine::lt("sup_N |phi - f| + |phi' - f'| < epsilon", &c1, epsilon));
    if !(c1 < *epsilon) {
        return Err(failed(2, &witness, format!("C¹ distance {c1} on N is not below ε = {epsilon}")));
    }
    let c0 = &dc / &rat(4, 1);
    transcript.push(InequalityLine::lt("sup_C |phi - f| <= |dc|/4 < epsilon", &c0, epsilon));
    if !(c0 < *epsilon) {
        return Err(failed(3, &half, format!("C⁰ distance {c0} is not below ε = {epsilon}")));
    }
    Ok(MembershipReport {
        epsilon: epsilon.clone(),
        c1_distance_on_n: c1,
        c0_distance: c0,
        inequality_transcript: transcript,
    })
}

/// Certificate that `N = [2/3 − ε, 2/3 + ε]` is a random isolating
/// neighbourhood for every asymmetric tent `T(γ)` with `|γ| < ξ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomIsolatingCertificate {
    pub epsilon: Rational,
    pub xi: Rational,
    pub neighborhood: Interval<Rational>,
    pub inequality_transcript: Vec<InequalityLine>,
}

/// Checks that `T(γ)` maps the endpoints of `N = [2/3 − ε, 2/3 + ε]` across
/// each other for all `|γ| < ξ`.
///
/// On `N` the map is the decreasing branch `2(1 − x)/(1 − 2γ)`. The endpoint
/// conditions `T(γ)(2/3 − ε) > 2/3 + ε` and `T(γ)(2/3 + ε) < 2/3 − ε` reduce
/// to `−4γ/3 − 2γε < ε` and `4γ/3 − 2γε < ε`, both implied by
/// `|γ|(4/3 + 2ε) < ε`, which is checked at `|γ| = ξ`. The support of `γ` is
/// open, so `ξ = ε/4` is admissible.
pub fn verify_random_isolating_tent(
    xi: &Rational,
    epsilon: &Rational,
) -> Result<RandomIsolatingCertificate, RandomError> {
    let two_thirds = rat(2, 3);
    let half = rat(1, 2);
    let lo = &two_thirds - epsilon;
    let hi = &two_thirds + epsilon;
    if !epsilon.is_positive() || xi.is_negative() {
        return Err(RandomError::PreconditionFailed(format!("need ε > 0 and ξ ≥ 0, got ε = {epsilon}, ξ = {xi}")));
    }
    let mut transcript = Vec::new();
    let pre = [
        InequalityLine::lt("1/2 < 2/3 - epsilon", &half, &lo),
        InequalityLine::lt("2/3 + epsilon < 1", &hi, &Rational::one()),
        InequalityLine::le("xi <= epsilon/4", xi, &(epsilon / &rat(4, 1))),
        InequalityLine::le("1/2 + xi <= 2/3 - 2 epsilon", &(&half + xi), &(&two_thirds - &(epsilon * &rat(2, 1)))),
    ];
    for line in pre {
        if !line.verdict {
            return Err(RandomError::PreconditionFailed(format!("{}: {} vs {}", line.expression, line.lhs, line.rhs)));
        }
        transcript.push(line);
    }
    let margin = xi * &(rat(4, 3) + epsilon * &rat(2, 1));
    transcript.push(InequalityLine::lt("|gamma| (4/3 + 2 epsilon) < epsilon", &margin, epsilon));
    // exact endpoint images at the extreme asymmetries, as a cross-check
    for g in [-xi.clone(), xi.clone()] {
        let map = PiecewiseAffineMap::asymmetric_tent(&g)?;
        let at_lo = map.eval_exact(&lo)?;
        let at_hi = map.eval_exact(&hi)?;
        transcript.push(InequalityLine::lt(format!("2/3 + epsilon < T(gamma={g})(2/3 - epsilon)"), &hi, &at_lo));
        transcript.push(InequalityLine::lt(format!("T(gamma={g})(2/3 + epsilon) < 2/3 - epsilon"), &at_hi, &lo));
    }
    if let Some(bad) = transcript.iter().find(|l| !l.verdict) {
        return Err(RandomError::PreconditionFailed(format!("{} fails: {} vs {}", bad.expression, bad.lhs, bad.rhs)));
    }
    Ok(RandomIsolatingCertificate {
        epsilon: epsilon.clone(),
        xi: xi.clone(),
        neighborhood: Interval::new(lo, hi)?,
        inequality_transcript: transcript,
    })
}
