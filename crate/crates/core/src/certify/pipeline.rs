//! The realization pipeline: height, cycles, neighbourhoods, indices, budget,
//! noise, simulation and detection, in that order.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::certificate::{Certificate, Provenance, Subject};
use super::transcript::InequalityLine;
use super::CertifyError;
use crate::conley::{
    build_neighborhood, conley_index, epsilon_budget, index_nontrivial, mat_pow, signed_identity_sign, ConleyIndexData,
    IsolatingNeighborhood, NeighborhoodOptions, RobustnessBudget,
};
use crate::cycles::{
    classify_hyperbolicity, enumerate_truncated_cycles, minimal_periods, realization_height_report, Cycle, CycleError,
    HeightPolicy, Hyperbolicity, RealizationHeight, DEFAULT_PERIODIC_TEST_BOUND, MAX_TRUNCATED_PERIOD,
};
use crate::number::{PiecewiseAffineMap, Rational};
use crate::random::{build_tube, check_r1_membership, delta_k_on_tube, period_check_on_tube, NoiseModel, Verdict};
use crate::rat;
use crate::sharkovskii::FiniteTail;

/// Largest admissible tail head and bound.
pub const MAX_HEAD: u64 = 8;
pub const MAX_BOUND: u64 = 12;

/// Tunable inputs of [`run_realization`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizationOptions {
    /// Requested noise amplitude `ξ`; clamped to the budget unless forced.
    pub xi: Rational,
    pub lambda: Rational,
    /// Window `M` of fibres checked per seed.
    pub window: usize,
    /// Blocks of `k` steps used to shrink the tubes.
    pub pad_blocks: u32,
    pub periodic_test_bound: u32,
    /// Negative control: use this multiple of the budget amplitude instead of
    /// clamping.
    pub force_xi_factor: Option<Rational>,
}

impl Default for RealizationOptions {
    fn default() -> Self {
        RealizationOptions {
            xi: rat(1, 100),
            lambda: Rational::one(),
            window: 300,
            pad_blocks: 24,
            periodic_test_bound: DEFAULT_PERIODIC_TEST_BOUND,
            force_xi_factor: None,
        }
    }
}

/// A cycle followed by the pipeline, with its certified data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrackedCycle {
    pub cycle: Cycle,
    pub neighborhood: IsolatingNeighborhood<Rational>,
    pub index: ConleyIndexData,
}

/// How the noise amplitude was chosen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XiChoice {
    pub requested: Rational,
    /// Largest `2^-j/4` for which the family lies in `R¹_ε(f)`.
    pub budget: Rational,
    pub used: Rational,
    pub clamped: bool,
    pub forced_factor: Option<Rational>,
}

/// Deterministic stages of a realization run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pipeline {
    pub m: u64,
    pub bound: u64,
    pub options: RealizationOptions,
    pub tail: FiniteTail,
    pub height: RealizationHeight,
    pub base_map: PiecewiseAffineMap,
    /// Minimal periods of the base map up to `bound`.
    pub deterministic_periods: BTreeSet<u64>,
    pub tracked: Vec<TrackedCycle>,
    pub budget: RobustnessBudget<Rational>,
    pub xi: XiChoice,
    /// Noise model with seed 0; each run replaces the seed.
    pub noise: NoiseModel,
    pub inequality_transcript: Vec<InequalityLine>,
}

/// `(δ, k)` outcome with the statistics rounded outward to doubles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaKSummary {
    pub passed: bool,
    pub reason: Option<String>,
    pub max_fibre_diameter: Option<f64>,
    pub min_separation: Option<f64>,
    pub closest_pair: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodRun {
    pub k: usize,
    pub delta_k: DeltaKSummary,
    pub minimal_period_passed: bool,
    pub minimal_period_witness: Option<(i64, usize)>,
    pub minimal_period_reason: Option<String>,
    /// Midpoint of the tube at fibre 0, an estimate of `x(ω)`.
    pub x_estimate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedRun {
    pub seed: u64,
    pub periods: Vec<PeriodRun>,
}

impl SeedRun {
    pub fn passed(&self) -> bool {
        self.periods.iter().all(|p| p.delta_k.passed && p.minimal_period_passed)
    }
}

fn stage<E: ToString>(name: &'static str) -> impl Fn(E) -> CertifyError {
    move |e| CertifyError::Stage { stage: name, message: e.to_string() }
}

/// Realization height `h̃(m)` under the strict policy, falling back to the
/// corner-safe policy when no strict height exists.
pub fn auto_height(m: u64, bound: u32) -> Result<RealizationHeight, CycleError> {
    match realization_height_report(m, bound, HeightPolicy::Strict) {
        Err(CycleError::SearchExhausted { .. }) => realization_height_report(m, bound, HeightPolicy::CornerSafe),
        other => other,
    }
}

/// Hyperbolic cycle with every point in the interior of the domain.
pub fn usable_cycle(map: &PiecewiseAffineMap, c: &Cycle) -> bool {
    let domain = map.domain();
    c.points.iter().all(|p| domain.contains_interior(p))
        && matches!(classify_hyperbolicity(map, c), Hyperbolicity::Attracting | Hyperbolicity::Repelling)
}

fn min_gap(cycles: &[&Cycle]) -> Option<Rational> {
    let mut pts: Vec<&Rational> = cycles.iter().flat_map(|c| c.points.iter()).collect();
    pts.sort();
    pts.windows(2).map(|w| w[1] - w[0]).filter(|d| d.is_positive()).min()
}

impl Pipeline {
    /// Runs every deterministic stage for the tail headed by `m`, truncated at `bound`.
    pub fn prepare(m: u64, bound: u64, options: RealizationOptions) -> Result<Self, CertifyError> {
        if !(2..=MAX_HEAD).contains(&m) || !(1..=MAX_BOUND).contains(&bound) {
            return Err(CertifyError::Stage {
                stage: "input",
                message: format!("need 2 <= m <= {MAX_HEAD} and 1 <= K <= {MAX_BOUND}, got m = {m}, K = {bound}"),
            });
        }
        let height = auto_height(m, options.periodic_test_bound).map_err(stage("height"))?;
        let h = height.height.clone();
        let base_map = PiecewiseAffineMap::truncated_tent(&h).map_err(stage("height"))?;
        let tail = FiniteTail::truncated(m, bound);
        let max_period = (bound as u32).min(MAX_TRUNCATED_PERIOD);
        let deterministic_periods = minimal_periods(&h, max_period).map_err(stage("cycles"))?;
        let all = enumerate_truncated_cycles(&h, max_period).map_err(stage("cycles"))?;

        // candidates per tail period, in order of least point
        let mut candidates: Vec<Vec<&Cycle>> = Vec::new();
        for &k in &tail.periods {
            let c: Vec<&Cycle> =
                all.iter().filter(|c| c.minimal_period as u64 == k && usable_cycle(&base_map, c)).collect();
            if c.is_empty() {
                return Err(CertifyError::Stage {
                    stage: "cycles",
                    message: format!("no hyperbolic {k}-cycle for h = {h}"),
                });
            }
            candidates.push(c);
        }
        let mut choice = vec![0usize; candidates.len()];
        let tracked = 'search: loop {
            let chosen: Vec<&Cycle> = candidates.iter().zip(&choice).map(|(c, &i)| c[i]).collect();
            let cap = min_gap(&chosen).map(|g| g / rat(5, 1));
            let opts = NeighborhoodOptions { max_radius: cap };
            let mut out = Vec::with_capacity(chosen.len());
            for (slot, c) in chosen.iter().enumerate() {
                match build_neighborhood(&base_map, c, &opts) {
                    Ok(n) => out.push((*c, n)),
                    Err(e) => {
                        choice[slot] += 1;
                        if choice[slot] >= candidates[slot].len() {
                            return Err(CertifyError::Stage { stage: "neighborhoods", message: e.to_string() });
                        }
                        continue 'search;
                    }
                }
            }
            break out
                .into_iter()
                .map(|(c, n)| TrackedCycle { index: conley_index(c, &n), cycle: c.clone(), neighborhood: n })
                .collect::<Vec<_>>();
        };

        let mut transcript = Vec::new();
        for t in &tracked {
            let k = t.cycle.period();
            let nontrivial = index_nontrivial(&t.index);
            transcript.push(InequalityLine::new(
                format!("index of the {k}-cycle at {} is not nilpotent", t.cycle.least()),
                "M^k != 0",
                "0",
                nontrivial,
            ));
            let sign = signed_identity_sign(&mat_pow(&t.index.matrix, k as u32));
            let lhs = sign.map_or_else(|| "not ±I".to_string(), |s| format!("{s}·I"));
            transcript.push(InequalityLine::new(format!("M^{k} = ±I for the {k}-cycle"), lhs, "±I", sign.is_some()));
        }

        let pairs: Vec<(&Cycle, &IsolatingNeighborhood<Rational>)> =
            tracked.iter().map(|t| (&t.cycle, &t.neighborhood)).collect();
        let budget = epsilon_budget(&base_map.domain().clone(), &pairs).map_err(stage("budget"))?;
        transcript.extend(budget.inequality_transcript.iter().cloned());

        let components: Vec<_> = tracked.iter().flat_map(|t| t.neighborhood.components.iter().cloned()).collect();
        let template = NoiseModel::asymmetric_tent(Rational::zero(), h.clone(), 0)
            .and_then(|n| n.with_lambda(options.lambda.clone()))
            .map_err(stage("noise"))?;
        let member = |xi: &Rational| -> Result<bool, CertifyError> {
            let noise = template.with_xi(xi.clone()).map_err(stage("noise"))?;
            Ok(check_r1_membership(&noise, &components, &budget.epsilon).is_ok())
        };
        let mut xi_budget = rat(1, 4);
        let mut halvings = 0;
        while !member(&xi_budget)? {
            xi_budget = xi_budget / rat(2, 1);
            halvings += 1;
            if halvings > 200 {
                return Err(CertifyError::Stage { stage: "noise", message: "no admissible amplitude".into() });
            }
        }
        let requested_ok = options.xi < rat(1, 2) && !options.xi.is_negative() && member(&options.xi)?;
        let (used, clamped) = match &options.force_xi_factor {
            Some(f) => (Rational::min_of(&(&xi_budget * f), &rat(49, 100)), false),
            None if requested_ok => (options.xi.clone(), false),
            None => (xi_budget.clone(), true),
        };
        let noise = template.with_xi(used.clone()).map_err(stage("noise"))?;
        match check_r1_membership(&noise, &components, &budget.epsilon) {
            Ok(report) => transcript.extend(report.inequality_transcript),
            Err(e) => transcript.push(InequalityLine::new(
                format!("noise lies in R1_epsilon(f): {e}"),
                &used,
                &budget.epsilon,
                false,
            )),
        }
        let xi = XiChoice {
            requested: options.xi.clone(),
            budget: xi_budget,
            used,
            clamped,
            forced_factor: options.force_xi_factor.clone(),
        };

        Ok(Pipeline {
            m,
            bound,
            options,
            tail,
            height,
            base_map,
            deterministic_periods,
            tracked,
            budget,
            xi,
            noise,
            inequality_transcript: transcript,
        })
    }

    /// Simulation and detection for each seed, run in parallel; results keep
    /// the order of `seeds`.
    pub fn simulate(&self, seeds: &[u64]) -> Vec<SeedRun> {
        let delta = &self.budget.delta;
        let window = self.options.window;
        let pad = self.options.pad_blocks;
        seeds
            .par_iter()
            .map(|&seed| {
                let noise = self.noise.clone().with_seed(seed);
                let periods = self
                    .tracked
                    .par_iter()
                    .map(|t| {
                        let tube = build_tube::<Rational>(&noise, &t.neighborhood, 0, window, pad);
                        let dk = delta_k_on_tube(&t.neighborhood, tube.as_ref(), delta, window);
                        let pc = period_check_on_tube(&t.neighborhood, tube.as_ref(), window);
                        let reason = |v: &Verdict| match v {
                            Verdict::Pass => None,
                            Verdict::Fail { reason } => Some(reason.clone()),
                        };
                        PeriodRun {
                            k: t.cycle.period(),
                            delta_k: DeltaKSummary {
                                passed: dk.verdict.passed(),
                                reason: reason(&dk.verdict),
                                max_fibre_diameter: dk.fibre_diameters.iter().max().map(Rational::to_f64_up),
                                min_separation: dk.min_separation.as_ref().map(Rational::to_f64_down),
                                closest_pair: dk.closest_pair,
                            },
                            minimal_period_passed: pc.verdict.passed(),
                            minimal_period_witness: pc.witness,
                            minimal_period_reason: reason(&pc.verdict),
                            x_estimate: tube.as_ref().ok().map(|t| t.intervals[0].midpoint().to_f64()),
                        }
                    })
                    .collect();
                SeedRun { seed, periods }
            })
            .collect()
    }

    /// Packs the stages and runs into a tail-realization certificate.
    pub fn certificate(&self, runs: Vec<SeedRun>) -> Result<Certificate, CertifyError> {
        let seeds: Vec<u64> = runs.iter().map(|r| r.seed).collect();
        let all_pass = runs.iter().all(SeedRun::passed);
        let payload = RealizationPayload {
            m: self.m,
            bound: self.bound,
            tail: self.tail.periods.clone(),
            height: self.height.clone(),
            deterministic_periods: self.deterministic_periods.clone(),
            deterministic_periods_match_tail: self.deterministic_periods == self.tail.periods,
            cycles: self.tracked.clone(),
            budget: self.budget.clone(),
            xi: self.xi.clone(),
            window: self.options.window,
            pad_blocks: self.options.pad_blocks,
            runs,
            all_runs_pass: all_pass,
        };
        let mut provenance = Provenance::new(
            self.base_map.to_json(),
            serde_json::to_value(RealizationInputs { m: self.m, bound: self.bound, options: self.options.clone() })
                .map_err(|e| CertifyError::Serialize(e.to_string()))?,
        );
        provenance.seeds = seeds;
        provenance.noise = Some(self.noise.describe());
        Certificate::new(Subject::TailRealization, &payload, self.inequality_transcript.clone(), provenance, all_pass)
    }
}

/// Inputs recorded in the provenance of a realization certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizationInputs {
    pub m: u64,
    pub bound: u64,
    pub options: RealizationOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizationPayload {
    pub m: u64,
    pub bound: u64,
    pub tail: BTreeSet<u64>,
    pub height: RealizationHeight,
    pub deterministic_periods: BTreeSet<u64>,
    pub deterministic_periods_match_tail: bool,
    pub cycles: Vec<TrackedCycle>,
    pub budget: RobustnessBudget<Rational>,
    pub xi: XiChoice,
    pub window: usize,
    pub pad_blocks: u32,
    pub runs: Vec<SeedRun>,
    pub all_runs_pass: bool,
}

/// Realization of the tail headed by `m` up to `bound` under random
/// asymmetric-tent noise: every deterministic stage, then one simulation per
/// seed with `(δ, k)` and minimal-period checks for each tail period.
pub fn run_realization(
    m: u64,
    bound: u64,
    seeds: &[u64],
    options: RealizationOptions,
) -> Result<Certificate, CertifyError> {
    let pipeline = Pipeline::prepare(m, bound, options)?;
    let runs = pipeline.simulate(seeds);
    pipeline.certificate(runs)
}

/// Re-runs a tail-realization certificate from its provenance.
pub fn reproduce(cert: &Certificate) -> Result<Certificate, CertifyError> {
    if cert.subject != Subject::TailRealization {
        return Err(CertifyError::Stage {
            stage: "reproduce",
            message: format!("unsupported subject {:?}", cert.subject),
        });
    }
    let inputs: RealizationInputs = serde_json::from_value(cert.provenance.parameters.clone())
        .map_err(|e| CertifyError::Serialize(e.to_string()))?;
    run_realization(inputs.m, inputs.bound, &cert.provenance.seeds, inputs.options)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> RealizationOptions {
        RealizationOptions { window: 60, pad_blocks: 12, ..RealizationOptions::default() }
    }

    #[test]
    fn head_two_realizes_one_and_two() {
        let cert = run_realization(2, 6, &[1, 2], quick()).unwrap();
        assert!(cert.passed, "{}", cert.to_json());
        assert_eq!(cert.payload["tail"], serde_json::json!([1, 2]));
        assert_eq!(cert.payload["height"]["policy"], "corner_safe");
        assert!(cert.inequality_transcript.iter().all(|l| l.verdict));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(run_realization(9, 6, &[1], quick()), Err(CertifyError::Stage { stage: "input", .. })));
        assert!(matches!(run_realization(3, 13, &[1], quick()), Err(CertifyError::Stage { stage: "input", .. })));
    }

    #[test]
    fn forced_noise_fails() {
        let opts = RealizationOptions { force_xi_factor: Some(rat(10, 1)), ..quick() };
        let cert = run_realization(3, 3, &[1, 2, 3, 4], opts).unwrap();
        assert!(!cert.passed);
    }

    #[test]
    fn reproducible() {
        let cert = run_realization(4, 4, &[5], quick()).unwrap();
        assert_eq!(reproduce(&cert).unwrap().to_json(), cert.to_json());
    }
}
