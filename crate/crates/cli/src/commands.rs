use std::collections::BTreeSet;
use std::fs;
use std::io::{self, Write};

use anyhow::{bail, Context, Result};
use serde_json::json;
use sharktail_core::certify::{
    auto_height, emit_plot_data, reproduce, usable_cycle, write_trajectory_csv, Certificate, InequalityLine, Pipeline,
    Provenance, RealizationOptions, Subject,
};
use sharktail_core::conley::{
    build_neighborhood, conley_index, epsilon_budget, index_nontrivial, mat_pow, signed_identity_sign,
    verify_isolating_block, IsolatingNeighborhood, NeighborhoodOptions, RobustnessBudget,
};
use sharktail_core::cycles::{
    critical_height, enumerate_tent_cycles, enumerate_truncated_cycles, minimal_periods, realization_height_report,
    Cycle, HeightPolicy, DEFAULT_PERIODIC_TEST_BOUND,
};
use sharktail_core::random::{
    assign_fibres, build_tube, check_r1_membership, cocycle_iterate, delta_k_on_tube, period_check_on_tube,
    verify_random_isolating_tent, NoiseModel, TrajectoryRecord,
};
use sharktail_core::sharkovskii::{is_finite_tail, shark_cmp, shark_less, tail};
use sharktail_core::{rat, PiecewiseAffineMap, Rational};

use crate::{
    Command, ConleyArgs, CyclesCommand, DetectArgs, Family, Outcome, PolicyArg, RdsCommand, RealizeArgs, SharkCommand,
    SimulateArgs,
};

pub fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::Shark(c) => shark(c),
        Command::Cycles(c) => cycles(c),
        Command::Conley(a) => conley(a),
        Command::Rds(RdsCommand::Simulate(a)) => simulate(a),
        Command::Rds(RdsCommand::Detect(a)) => detect(a),
        Command::Rds(RdsCommand::Isolate { epsilon, xi }) => isolate(&epsilon, &xi),
        Command::Realize(a) => realize(a),
    }
}

fn print_line(text: &str) -> Result<()> {
    writeln!(io::stdout().lock(), "{text}")?;
    Ok(())
}

fn print_json(value: &serde_json::Value) -> Result<()> {
    print_line(&serde_json::to_string_pretty(value)?)
}

fn emit_certificate(cert: &Certificate, out: Option<&std::path::Path>) -> Result<Outcome> {
    let text = cert.to_json();
    match out {
        Some(path) => fs::write(path, format!("{text}\n")).with_context(|| format!("writing {}", path.display()))?,
        None => print_line(&text)?,
    }
    Ok(Outcome::from_pass(cert.passed))
}

fn shark(c: SharkCommand) -> Result<Outcome> {
    match c {
        SharkCommand::Order { bound } => {
            let mut order: Vec<u64> = (1..=bound).collect();
            order.sort_by(|&a, &b| shark_cmp(a, b));
            print_json(&json!({ "bound": bound, "order": order }))?;
            Ok(Outcome::Pass)
        }
        SharkCommand::Tail { n, bound } => {
            if n == 0 {
                bail!("periods are positive integers");
            }
            print_json(&json!({ "n": n, "bound": bound, "tail": tail(n, bound) }))?;
            Ok(Outcome::Pass)
        }
        SharkCommand::Compare { a, b } => {
            if a == 0 || b == 0 {
                bail!("periods are positive integers");
            }
            let relation = if a == b {
                "equal"
            } else if shark_less(a, b) {
                "precedes"
            } else {
                "follows"
            };
            print_json(&json!({ "a": a, "b": b, "relation": relation, "a_forces_b": a == b || shark_less(a, b) }))?;
            Ok(Outcome::Pass)
        }
        SharkCommand::Check { periods } => {
            let set: BTreeSet<u64> = periods.into_iter().collect();
            let (is_tail, head) = is_finite_tail(&set)?;
            print_json(&json!({ "periods": set, "is_finite_tail": is_tail, "head": head }))?;
            Ok(Outcome::from_pass(is_tail))
        }
    }
}

fn cycles(c: CyclesCommand) -> Result<Outcome> {
    match c {
        CyclesCommand::Tent { k } => {
            let found = enumerate_tent_cycles(k)?;
            let tent = PiecewiseAffineMap::tent();
            let transcript: Vec<InequalityLine> = found
                .iter()
                .map(|c| {
                    InequalityLine::new(
                        format!("T^{k}(p) = p along the orbit of {}", c.least()),
                        c.least(),
                        c.least(),
                        c.is_orbit_of(&tent),
                    )
                })
                .collect();
            let payload = json!({ "k": k, "count": found.len(), "cycles": found });
            let prov = Provenance::new(tent.to_json(), json!({ "command": "cycles tent", "k": k }));
            emit_certificate(&Certificate::new(Subject::Cycle, &payload, transcript, prov, true)?, None)
        }
        CyclesCommand::Critical { m } => {
            let h = critical_height(m)?;
            print_json(&json!({ "m": m, "critical_height": h, "approx": h.to_f64() }))?;
            Ok(Outcome::Pass)
        }
        CyclesCommand::Height { m, policy, periodic_test_bound } => {
            let report = match policy {
                PolicyArg::Strict => realization_height_report(m, periodic_test_bound, HeightPolicy::Strict)?,
                PolicyArg::CornerSafe => realization_height_report(m, periodic_test_bound, HeightPolicy::CornerSafe)?,
                PolicyArg::Auto => auto_height(m, periodic_test_bound)?,
            };
            let periods = minimal_periods(&report.height, 12)?;
            let expected = tail(m, 12);
            let matches = periods == expected;
            print_json(&json!({
                "height": report,
                "minimal_periods_up_to_12": periods,
                "tail_up_to_12": expected,
                "matches": matches,
            }))?;
            Ok(Outcome::from_pass(matches))
        }
        CyclesCommand::Periods { height, max_period } => {
            let periods = minimal_periods(&height, max_period)?;
            let (is_tail, head) = is_finite_tail(&periods)?;
            print_json(
                &json!({ "height": height, "max_period": max_period, "periods": periods, "is_finite_tail": is_tail, "head": head }),
            )?;
            Ok(Outcome::Pass)
        }
    }
}

fn default_height(height: Option<Rational>) -> Result<Rational> {
    Ok(match height {
        Some(h) => h,
        None => auto_height(3, DEFAULT_PERIODIC_TEST_BOUND)?.height,
    })
}

fn index_lines(cycle: &Cycle, nbhd: &IsolatingNeighborhood<Rational>) -> (serde_json::Value, Vec<InequalityLine>) {
    let k = cycle.period();
    let index = conley_index(cycle, nbhd);
    let nontrivial = index_nontrivial(&index);
    let sign = signed_identity_sign(&mat_pow(&index.matrix, k as u32));
    let lines = vec![
        InequalityLine::new(
            format!("index of the {k}-cycle at {} is not nilpotent", cycle.least()),
            "M^k != 0",
            "0",
            nontrivial,
        ),
        InequalityLine::new(
            format!("M^{k} = ±I for the {k}-cycle"),
            sign.map_or_else(|| "not ±I".to_string(), |s| format!("{s}·I")),
            "±I",
            sign.is_some(),
        ),
    ];
    (json!({ "index": index, "nontrivial": nontrivial, "power_k_sign": sign }), lines)
}

fn conley(a: ConleyArgs) -> Result<Outcome> {
    let h = default_height(a.height)?;
    let map = PiecewiseAffineMap::truncated_tent(&h)?;
    let all = enumerate_truncated_cycles(&h, a.k)?;
    let candidates: Vec<&Cycle> = all.iter().filter(|c| c.minimal_period == a.k as usize).collect();
    if candidates.is_empty() {
        bail!("T_h has no cycle of minimal period {} for h = {h}", a.k);
    }
    // keep the neighbourhoods of distinct cycles well apart
    let mut points: Vec<&Rational> =
        candidates.iter().filter(|c| usable_cycle(&map, c)).flat_map(|c| c.points.iter()).collect();
    points.sort();
    let gap_cap = points.windows(2).map(|w| w[1] - w[0]).filter(|d| d.is_positive()).min().map(|g| g / rat(5, 1));
    let max_radius = match (a.max_radius.clone(), gap_cap) {
        (Some(r), Some(g)) => Some(Rational::min_of(&r, &g)),
        (r, g) => r.or(g),
    };
    let opts = NeighborhoodOptions { max_radius };
    let mut entries = Vec::new();
    let mut certified = Vec::new();
    let mut transcript = Vec::new();
    for c in candidates {
        if !usable_cycle(&map, c) {
            entries.push(json!({ "cycle": c, "skipped": "not hyperbolic or touches the boundary" }));
            continue;
        }
        match build_neighborhood(&map, c, &opts) {
            Ok(n) => {
                let (index, lines) = index_lines(c, &n);
                let block = verify_isolating_block(&map, &n.components)?;
                transcript.extend(lines);
                transcript.push(InequalityLine::new(
                    format!("f(N) ∩ N ∩ f^-1(N) ⊂ int N for the {}-cycle at {}", a.k, c.least()),
                    format!("{block:?}"),
                    "Holds",
                    block.holds(),
                ));
                entries.push(json!({ "cycle": c, "neighborhood": n, "conley_index": index, "block": block }));
                certified.push((c, n));
            }
            Err(e) => entries.push(json!({ "cycle": c, "skipped": e.to_string() })),
        }
    }
    let budget: Option<RobustnessBudget<Rational>> = if certified.is_empty() {
        None
    } else {
        let pairs: Vec<_> = certified.iter().map(|(c, n)| (*c, n)).collect();
        let b = epsilon_budget(map.domain(), &pairs)?;
        transcript.extend(b.inequality_transcript.iter().cloned());
        Some(b)
    };
    let payload = json!({ "height": h, "k": a.k, "cycles": entries, "budget": budget });
    let prov = Provenance::new(
        map.to_json(),
        json!({ "command": "conley", "height": h, "k": a.k, "max_radius": a.max_radius }),
    );
    emit_certificate(&Certificate::new(Subject::Index, &payload, transcript, prov, !certified.is_empty())?, None)
}

fn simulate(a: SimulateArgs) -> Result<Outcome> {
    let noise = match a.family {
        Family::Tent => NoiseModel::asymmetric_tent(a.xi.clone(), a.height.clone(), a.seed)?,
        Family::Logistic => NoiseModel::logistic(a.c_lo, a.c_hi, a.seed)?,
    }
    .with_lambda(a.lambda.clone())?;
    let x0 = a.x0.clone().unwrap_or_else(|| match a.family {
        Family::Tent => rat(2, 3),
        Family::Logistic => rat(1, 2),
    });
    let mut out: Box<dyn Write> = match &a.out {
        Some(path) => Box::new(io::BufWriter::new(
            fs::File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(io::BufWriter::new(io::stdout().lock())),
    };
    fn label<S>(mut records: Vec<TrajectoryRecord<S>>, k: Option<u64>) -> Result<Vec<TrajectoryRecord<S>>> {
        if let Some(k) = k {
            if k == 0 {
                bail!("k must be positive");
            }
            assign_fibres(&mut records, k);
        }
        Ok(records)
    }
    if a.exact {
        if a.family != Family::Tent {
            bail!("--exact needs the tent family");
        }
        let records = label(cocycle_iterate::<Rational>(&noise, &x0, a.steps)?, a.k)?;
        write_trajectory_csv(&mut out, &records)?;
    } else {
        let records = label(cocycle_iterate::<f64>(&noise, &x0.to_f64(), a.steps)?, a.k)?;
        write_trajectory_csv(&mut out, &records)?;
    }
    out.flush()?;
    Ok(Outcome::Pass)
}

fn detect(a: DetectArgs) -> Result<Outcome> {
    if a.window < a.k as usize {
        bail!("window {} is shorter than the period {}", a.window, a.k);
    }
    let h = default_height(a.height.clone())?;
    let map = PiecewiseAffineMap::truncated_tent(&h)?;
    let all = enumerate_truncated_cycles(&h, a.k)?;
    let (cycle, nbhd) = all
        .iter()
        .filter(|c| c.minimal_period == a.k as usize && usable_cycle(&map, c))
        .find_map(|c| build_neighborhood(&map, c, &NeighborhoodOptions::default()).ok().map(|n| (c, n)))
        .with_context(|| format!("no certifiable hyperbolic {}-cycle of T_h for h = {h}", a.k))?;
    let budget = epsilon_budget(map.domain(), &[(cycle, &nbhd)])?;
    let delta = a.delta.clone().unwrap_or_else(|| budget.delta.clone());
    let template = NoiseModel::asymmetric_tent(Rational::zero(), h.clone(), a.seed)?.with_lambda(a.lambda.clone())?;
    let xi = match &a.xi {
        Some(xi) => xi.clone(),
        None => {
            let mut xi = rat(1, 4);
            let mut halvings = 0;
            while check_r1_membership(&template.with_xi(xi.clone())?, &nbhd.components, &budget.epsilon).is_err() {
                xi = xi / rat(2, 1);
                halvings += 1;
                if halvings > 200 {
                    bail!("no admissible noise amplitude for ε = {}", budget.epsilon);
                }
            }
            xi
        }
    };
    let noise = template.with_xi(xi.clone())?;
    let mut transcript = budget.inequality_transcript.clone();
    match check_r1_membership(&noise, &nbhd.components, &budget.epsilon) {
        Ok(report) => transcript.extend(report.inequality_transcript),
        Err(e) => transcript.push(InequalityLine::new(
            format!("noise lies in R1_epsilon(f): {e}"),
            &xi,
            &budget.epsilon,
            false,
        )),
    }
    let tube = build_tube::<Rational>(&noise, &nbhd, 0, a.window, a.pad_blocks);
    if let (Some(dir), Ok(t)) = (&a.plot_dir, tube.as_ref()) {
        emit_plot_data(dir, &format!("detect_k{}_seed{}", a.k, a.seed), t)?;
    }
    let delta_k = delta_k_on_tube(&nbhd, tube.as_ref(), &delta, a.window);
    let period = period_check_on_tube(&nbhd, tube.as_ref(), a.window);
    let verdicts_pass = delta_k.verdict.passed() && period.verdict.passed();
    let payload = json!({
        "height": h,
        "k": a.k,
        "cycle": cycle,
        "neighborhood": nbhd,
        "epsilon": budget.epsilon,
        "delta": delta,
        "xi": xi,
        "window": a.window,
        "pad_blocks": a.pad_blocks,
        "delta_k": delta_k,
        "minimal_period": period,
    });
    let mut prov = Provenance::new(
        map.to_json(),
        json!({
            "command": "rds detect",
            "height": h,
            "k": a.k,
            "delta": a.delta,
            "xi": a.xi,
            "lambda": a.lambda,
            "window": a.window,
            "pad_blocks": a.pad_blocks,
        }),
    );
    prov.seeds = vec![a.seed];
    prov.noise = Some(noise.describe());
    emit_certificate(&Certificate::new(Subject::DeltaKOrbit, &payload, transcript, prov, verdicts_pass)?, None)
}

fn isolate(epsilon: &Rational, xi: &Rational) -> Result<Outcome> {
    let cert = verify_random_isolating_tent(xi, epsilon)?;
    let transcript = cert.inequality_transcript.clone();
    let prov = Provenance::new(
        PiecewiseAffineMap::tent().to_json(),
        json!({ "command": "rds isolate", "epsilon": epsilon, "xi": xi }),
    );
    emit_certificate(&Certificate::new(Subject::RandomIsolating, &cert, transcript, prov, true)?, None)
}

fn realize(a: RealizeArgs) -> Result<Outcome> {
    if let Some(path) = &a.reproduce {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let original = Certificate::from_json(&text)?;
        let again = reproduce(&original)?;
        let identical = again.to_json() == text.trim_end();
        print_json(&json!({ "certificate": path, "reproduced": identical, "passed": again.passed }))?;
        return Ok(Outcome::from_pass(identical));
    }
    let m = a.m.context("--m is required")?;
    let seeds: Vec<u64> =
        if a.seeds.is_empty() { (0..a.num_seeds).map(|i| a.seed.wrapping_add(i)).collect() } else { a.seeds.clone() };
    let options = RealizationOptions {
        xi: a.xi,
        lambda: a.lambda,
        window: a.window,
        pad_blocks: a.pad_blocks,
        periodic_test_bound: DEFAULT_PERIODIC_TEST_BOUND,
        force_xi_factor: a.force_xi_factor,
    };
    let pipeline = Pipeline::prepare(m, a.bound, options)?;
    let runs = pipeline.simulate(&seeds);
    if let (Some(dir), Some(&seed)) = (&a.plot_dir, seeds.first()) {
        let noise = pipeline.noise.clone().with_seed(seed);
        for t in &pipeline.tracked {
            let tube = build_tube::<Rational>(
                &noise,
                &t.neighborhood,
                0,
                pipeline.options.window,
                pipeline.options.pad_blocks,
            );
            if let Ok(tube) = tube {
                emit_plot_data(dir, &format!("realize_k{}_seed{seed}", t.cycle.period()), &tube)?;
            }
        }
    }
    let cert = pipeline.certificate(runs)?;
    emit_certificate(&cert, a.out.as_deref())
}
