//! Acceptance suite: one test per criterion, each printing a single
//! `criterion N: PASS|FAIL` line. Run with `--nocapture` to see the lines.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;

use sharktail_core::certify::{reproduce, run_realization, usable_cycle, Certificate, Pipeline, RealizationOptions};
use sharktail_core::conley::{
    build_neighborhood, conley_index, index_nontrivial, mat_pow, signed_identity_sign, ConleyIndexData,
    NeighborhoodOptions,
};
use sharktail_core::cycles::{
    critical_height, enumerate_tent_cycles, enumerate_truncated_cycles, logistic_fixed_points, logistic_two_cycle,
    minimal_periods, realization_height, realization_height_report, Cycle, HeightPolicy, DEFAULT_PERIODIC_TEST_BOUND,
};
use sharktail_core::number::DifferentiableMapHandle;
use sharktail_core::random::{
    cocycle_iterate, cocycle_iterate_from, pullback_periodic_point, verify_random_isolating_tent, NoiseModel,
};
use sharktail_core::sharkovskii::{shark_cmp, shark_less, tail};
use sharktail_core::{rat, PiecewiseAffineMap, Rational};

fn verdict(n: u32, title: &str, pass: bool, elapsed: Duration, limit: Duration, detail: &str) {
    let in_time = elapsed <= limit;
    let status = if pass && in_time { "PASS" } else { "FAIL" };
    println!("criterion {n:>2}: {status} | {title} | {detail} | {:.2?} (limit {:?})", elapsed, limit);
    assert!(pass, "criterion {n} failed: {detail}");
    assert!(in_time, "criterion {n} exceeded {limit:?}: {elapsed:?}");
}

// ---------------------------------------------------------------------------
// Float oracles for the full tent map

fn tent_f64(x: f64) -> f64 {
    if x <= 0.5 {
        2.0 * x
    } else {
        2.0 * (1.0 - x)
    }
}

fn tent_iter(mut x: f64, k: u32) -> f64 {
    for _ in 0..k {
        x = tent_f64(x);
    }
    x
}

/// Roots of `T^k(x) − x` by a sign scan on a dyadic grid followed by bisection.
fn tent_fixed_points_scan(k: u32) -> Vec<f64> {
    let cells = (1u64 << k) * 64;
    let g = |x: f64| tent_iter(x, k) - x;
    let mut roots: Vec<f64> = Vec::new();
    for i in 0..cells {
        let (mut a, mut b) = (i as f64 / cells as f64, (i + 1) as f64 / cells as f64);
        let (ga, gb) = (g(a), g(b));
        if ga == 0.0 {
            roots.push(a);
        } else if ga * gb < 0.0 {
            for _ in 0..80 {
                let mid = 0.5 * (a + b);
                if g(a) * g(mid) <= 0.0 {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            roots.push(0.5 * (a + b));
        }
    }
    if g(1.0) == 0.0 {
        roots.push(1.0);
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    roots
}

/// Points of minimal period `k` under the tent map, from the scan.
fn tent_minimal_points_scan(k: u32) -> Vec<f64> {
    tent_fixed_points_scan(k)
        .into_iter()
        .filter(|&x| (1..k).filter(|j| k.is_multiple_of(*j)).all(|j| (tent_iter(x, j) - x).abs() > 1e-7))
        .collect()
}

/// `h(m)` oracle: least maximum over the scanned `m`-cycles.
fn critical_height_scan(m: u32) -> f64 {
    let pts = tent_minimal_points_scan(m);
    pts.iter().map(|&x| (0..m).map(|j| tent_iter(x, j)).fold(f64::MIN, f64::max)).fold(f64::MAX, f64::min)
}

// ---------------------------------------------------------------------------

#[test]
fn criterion_01_sharkovskii_order_axioms() {
    let start = Instant::now();
    const N: u64 = 1000;
    // independent construction of the displayed rows
    let mut expected = Vec::new();
    let mut v = 0u32;
    while (1u64 << v) * 3 <= N {
        let mut odd = 3u64;
        while (1u64 << v) * odd <= N {
            expected.push((1u64 << v) * odd);
            odd += 2;
        }
        v += 1;
    }
    let mut powers: Vec<u64> = (0..64).map(|j| 1u64 << j).filter(|&p| p <= N).collect();
    powers.reverse();
    expected.extend(powers);

    let mut sorted: Vec<u64> = (1..=N).collect();
    sorted.sort_by(|&a, &b| shark_cmp(a, b));
    let rows_match = sorted == expected;

    // strict total order: it agrees with the linear order of `sorted` on every pair
    let mut relation_ok = true;
    for i in 0..sorted.len() {
        relation_ok &= !shark_less(sorted[i], sorted[i]);
        for j in i + 1..sorted.len() {
            relation_ok &= shark_less(sorted[i], sorted[j]) && !shark_less(sorted[j], sorted[i]);
        }
    }
    let min_is_3 = (1..=N).all(|n| n == 3 || shark_less(3, n));
    let max_is_1 = (1..=N).all(|n| n == 1 || shark_less(n, 1));
    verdict(
        1,
        "Sharkovskii order axioms on 1..=1000",
        rows_match && relation_ok && min_is_3 && max_is_1,
        start.elapsed(),
        Duration::from_secs(1),
        &format!("rows {rows_match}, strict total {relation_ok}, min 3 {min_is_3}, max 1 {max_is_1}"),
    );
}

#[test]
fn criterion_02_exact_tent_cycles_match_root_scan() {
    let start = Instant::now();
    let mut ok = true;
    let mut detail = Vec::new();
    for k in 1..=8u32 {
        let cycles = enumerate_tent_cycles(k).unwrap();
        let mut exact: Vec<f64> = cycles.iter().flat_map(|c| c.points.iter().map(Rational::to_f64)).collect();
        exact.sort_by(f64::total_cmp);
        let scan = tent_minimal_points_scan(k);
        let count_ok = scan.len().is_multiple_of(k as usize) && cycles.len() == scan.len() / k as usize;
        let located = exact.len() == scan.len() && exact.iter().zip(&scan).all(|(a, b)| (a - b).abs() < 1e-9);
        let all_exact =
            cycles.iter().all(|c| c.is_orbit_of(&PiecewiseAffineMap::tent()) && c.minimal_period == k as usize);
        ok &= count_ok && located && all_exact;
        detail.push(format!("k={k}:{}", cycles.len()));
    }
    verdict(
        2,
        "tent cycles agree with a float root scan, k <= 8",
        ok,
        start.elapsed(),
        Duration::from_secs(10),
        &format!("cycle counts {}", detail.join(" ")),
    );
}

#[test]
fn criterion_03_critical_heights_follow_the_order() {
    let start = Instant::now();
    let h: Vec<Rational> = (1..=6u32).map(|m| critical_height(m).unwrap()).collect();
    let exact = h[0] == Rational::zero() && h[1] == rat(4, 5) && h[2] == rat(6, 7);
    let oracle = (1..=6u32).all(|m| (h[m as usize - 1].to_f64() - critical_height_scan(m)).abs() < 1e-9);
    let mut violations = Vec::new();
    let mut reversed = true;
    for l in 1..=6u64 {
        for m in 1..=6u64 {
            if l == m {
                continue;
            }
            let lower = h[l as usize - 1] < h[m as usize - 1];
            if lower != shark_less(l, m) {
                violations.push(format!("({l},{m})"));
            }
            reversed &= lower == shark_less(m, l);
        }
    }
    let relation = violations.is_empty();
    verdict(
        3,
        "h(1)=0, h(2)=4/5, h(3)=6/7 and h(l) < h(m) iff l precedes m, l, m <= 6",
        exact && oracle && relation,
        start.elapsed(),
        Duration::from_secs(30),
        &format!(
            "exact values {exact}, scan oracle {oracle}, heights [{}], pairs violating the stated relation: {}; \
             reversed relation h(l) < h(m) iff m precedes l holds: {reversed}",
            h.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "),
            if relation { "none".to_string() } else { format!("{} of 30", violations.len()) }
        ),
    );
}

#[test]
fn criterion_04_deterministic_tail_realization() {
    let start = Instant::now();
    let mut ok = true;
    let mut detail = Vec::new();
    for m in [2u64, 4, 6] {
        let expected = tail(m, 12);
        match realization_height(m, DEFAULT_PERIODIC_TEST_BOUND) {
            Ok(h) => {
                let periods = minimal_periods(&h, 12).unwrap();
                ok &= periods == expected;
                detail.push(format!("m={m}: h={h} periods {periods:?} vs tail {expected:?}"));
            }
            Err(e) => {
                ok = false;
                let fallback = realization_height_report(m, DEFAULT_PERIODIC_TEST_BOUND, HeightPolicy::CornerSafe)
                    .ok()
                    .and_then(|r| minimal_periods(&r.height, 12).ok().map(|p| (r.height, p)));
                detail.push(format!(
                    "m={m}: {e}; corner-safe height gives {:?} vs tail {expected:?}",
                    fallback.map(|(h, p)| format!("h={h} periods {p:?}"))
                ));
            }
        }
    }
    verdict(
        4,
        "minimal_periods(h~(m), 12) = tail(m, 12) for m in {2, 4, 6}",
        ok,
        start.elapsed(),
        Duration::from_secs(60),
        &detail.join("; "),
    );
}

/// Oracle: nonzero entries exactly at `(i, i+1 mod k)`, each `±1`.
fn is_signed_cyclic_permutation(m: &[Vec<i64>]) -> bool {
    let k = m.len();
    m.iter().enumerate().all(|(i, row)| {
        row.len() == k
            && row.iter().enumerate().all(|(j, &x)| if j == (i + 1) % k { x == 1 || x == -1 } else { x == 0 })
    })
}

fn index_checks(k: usize, idx: &ConleyIndexData) -> bool {
    is_signed_cyclic_permutation(&idx.matrix)
        && signed_identity_sign(&mat_pow(&idx.matrix, k as u32)).is_some()
        && index_nontrivial(idx)
}

#[test]
fn criterion_05_conley_index_algebra() {
    let start = Instant::now();
    let mut certified = 0usize;
    let mut attracting = 0usize;
    let mut ok = true;
    let mut slowest = Duration::ZERO;
    let heights = [Rational::one(), rat(69, 85), rat(6, 7) + rat(1, 100)];
    for h in &heights {
        let map = PiecewiseAffineMap::truncated_tent(h).unwrap();
        for c in enumerate_truncated_cycles(h, 8).unwrap() {
            if !usable_cycle(&map, &c) {
                continue;
            }
            let t = Instant::now();
            if let Ok(n) = build_neighborhood(&map, &c, &NeighborhoodOptions::default()) {
                let idx = conley_index(&c, &n);
                ok &= index_checks(c.period(), &idx);
                certified += 1;
                attracting += usize::from(idx.degree == 0);
            }
            slowest = slowest.max(t.elapsed());
        }
    }
    // smooth attracting cycles of the logistic map
    let c = 3.2;
    let logistic = DifferentiableMapHandle::logistic(c);
    let mut smooth: Vec<Cycle<f64>> = logistic_fixed_points(&logistic, c);
    smooth.extend(logistic_two_cycle(&logistic, c));
    for cycle in smooth.iter().filter(|cy| cy.points.iter().all(|&p| p > 0.0 && p < 1.0)) {
        let t = Instant::now();
        if let Ok(n) = build_neighborhood(&logistic, cycle, &NeighborhoodOptions::default()) {
            let idx = conley_index(cycle, &n);
            ok &= index_checks(cycle.period(), &idx);
            certified += 1;
            attracting += usize::from(idx.degree == 0);
        }
        slowest = slowest.max(t.elapsed());
    }
    let per_cycle_ok = slowest <= Duration::from_secs(1);
    verdict(
        5,
        "index matrices are signed cyclic permutations with M^k = ±I, nontrivial",
        ok && certified > 0 && attracting > 0 && per_cycle_ok,
        start.elapsed(),
        Duration::from_secs(1) * certified.max(1) as u32,
        &format!("{certified} certified cycles ({attracting} attracting), slowest {slowest:.2?} per cycle"),
    );
}

#[test]
fn criterion_06_random_isolating_neighbourhood_example() {
    let start = Instant::now();
    let eps = rat(1, 20);
    let xi = rat(1, 80);
    let cert = verify_random_isolating_tent(&xi, &eps);
    // the chain |γ|(4/3 + 2ε) < ε at |γ| = ξ, computed independently
    let margin = &xi * &(rat(4, 3) + &eps * &rat(2, 1));
    let margin_ok = margin == rat(43, 2400) && margin < eps;
    let chain_in_transcript = cert.as_ref().is_ok_and(|c| {
        c.inequality_transcript.iter().any(|l| l.lhs == "43/2400" && l.rhs == "1/20" && l.verdict)
            && c.inequality_transcript.iter().all(|l| l.verdict)
    });
    // beyond the boundary ξ = ε/4 the preconditions fail
    let above: Vec<Rational> = vec![&eps / &rat(4, 1) + rat(1, 1_000_000), rat(1, 40), rat(1, 10), rat(1, 5)];
    let rejects = above.iter().all(|x| verify_random_isolating_tent(x, &eps).is_err());
    verdict(
        6,
        "epsilon = 1/20, xi = 1/80 certified by |gamma|(4/3 + 2 epsilon) < epsilon; larger xi rejected",
        cert.is_ok() && margin_ok && chain_in_transcript && rejects,
        start.elapsed(),
        Duration::from_secs(1),
        &format!(
            "margin {margin} < {eps}: {margin_ok}; transcript {chain_in_transcript}; xi > epsilon/4 rejected: {rejects} \
             (xi = epsilon/4 is the certified example, admissible since the noise support is open)"
        ),
    );
}

#[test]
fn criterion_07_forcing_theorem_at_desk_scale() {
    let start = Instant::now();
    let seeds: Vec<u64> = (1..=8).collect();
    let options = RealizationOptions { window: 300, ..RealizationOptions::default() };
    let pipeline = Pipeline::prepare(3, 8, options.clone()).unwrap();
    let periods: BTreeSet<u64> = pipeline.tracked.iter().map(|t| t.cycle.period() as u64).collect();
    let expected: BTreeSet<u64> = tail(3, 8);
    let within_budget =
        pipeline.xi.used <= pipeline.xi.budget && pipeline.inequality_transcript.iter().all(|l| l.verdict);
    let runs = pipeline.simulate(&seeds);
    let period_pass = runs.iter().all(|r| r.periods.iter().all(|p| p.minimal_period_passed));
    let delta_pass = runs.iter().all(|r| r.periods.iter().all(|p| p.delta_k.passed));
    let max_diam =
        runs.iter().flat_map(|r| r.periods.iter().filter_map(|p| p.delta_k.max_fibre_diameter)).fold(0.0f64, f64::max);
    let min_sep = runs
        .iter()
        .flat_map(|r| r.periods.iter().filter_map(|p| p.delta_k.min_separation))
        .fold(f64::INFINITY, f64::min);

    let forced = RealizationOptions { force_xi_factor: Some(rat(10, 1)), ..options };
    let control = Pipeline::prepare(3, 8, forced).unwrap();
    let control_runs = control.simulate(&seeds);
    let control_fails =
        control_runs.iter().flat_map(|r| &r.periods).filter(|p| !(p.delta_k.passed && p.minimal_period_passed)).count();
    verdict(
        7,
        "T_h~(3) with noise in budget: period and (delta, k) checks pass, 10x noise fails",
        periods == expected && within_budget && period_pass && delta_pass && control_fails > 0,
        start.elapsed(),
        Duration::from_secs(120),
        &format!(
            "periods {periods:?}, {} seeds, M = 300, xi = {}, epsilon = {}, delta = {}, max fibre diameter {max_diam:.3e}, \
             min separation {min_sep:.3e}; control xi = {} gives {control_fails} failing checks",
            seeds.len(),
            pipeline.xi.used,
            pipeline.budget.epsilon,
            pipeline.budget.delta,
            control.xi.used
        ),
    );
}

fn slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / n, sy / n);
    let num: f64 = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = points.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    num / den
}

#[test]
fn criterion_08_pullback_contraction() {
    let start = Instant::now();
    let tent = PiecewiseAffineMap::tent();
    let deterministic = NoiseModel::deterministic(Rational::one()).unwrap();
    let mut ok = true;
    let mut detail = Vec::new();
    for (k, least) in [(1u32, rat(2, 3)), (3, rat(2, 7))] {
        let cycle = enumerate_tent_cycles(k).unwrap().into_iter().find(|c| *c.least() == least).unwrap();
        let nbhd = build_neighborhood(&tent, &cycle, &NeighborhoodOptions::default()).unwrap();
        let noisy = NoiseModel::asymmetric_tent(rat(1, 1 << 12), Rational::one(), 99).unwrap();
        for (label, noise) in [("deterministic", &deterministic), ("noisy", &noisy)] {
            let estimates: Vec<_> = (5..=30u32).map(|m| pullback_periodic_point(noise, &nbhd, 0, m).unwrap()).collect();
            let rate = estimates[0].contraction_rate.to_f64();
            let pts: Vec<(f64, f64)> =
                estimates.iter().map(|e| (e.steps_used as f64, e.error_bound.to_f64().ln())).collect();
            let s = slope(&pts);
            let rel = ((s - rate.ln()) / rate.ln()).abs();
            ok &= rel <= 0.05;
            if label == "deterministic" {
                let last = estimates.last().unwrap();
                ok &= (&last.value - &least).abs() <= last.error_bound;
            }
            detail.push(format!("k={k} {label}: slope {s:.4} vs ln rate {:.4} ({:.2}%)", rate.ln(), 100.0 * rel));
        }
    }
    verdict(
        8,
        "pullback error bounds decay at the certified rate; limits 2/3 and 2/7",
        ok,
        start.elapsed(),
        Duration::from_secs(30),
        &detail.join("; "),
    );
}

#[test]
fn criterion_09_cocycle_law() {
    let start = Instant::now();
    let config = Config { cases: 1000, failure_persistence: None, ..Config::default() };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    let xis = [Rational::zero(), rat(1, 80), rat(1, 400), rat(3, 10)];
    let heights = [Rational::one(), rat(6, 7), rat(4, 5)];
    let strategy = (0usize..32, 0usize..32, any::<u64>(), 0i64..=1000, 0usize..4, 0usize..3);
    let result = runner.run(&strategy, |(s, t, seed, x0, xi, h)| {
        let noise = NoiseModel::asymmetric_tent(xis[xi].clone(), heights[h].clone(), seed).unwrap();
        let x0 = rat(x0, 1000);
        let whole = cocycle_iterate::<Rational>(&noise, &x0, s + t).unwrap();
        let first = cocycle_iterate::<Rational>(&noise, &x0, s).unwrap();
        let second = cocycle_iterate_from::<Rational>(&noise, s as i64, &first[s].state, t).unwrap();
        prop_assert_eq!(&whole[..=s], &first[..]);
        prop_assert_eq!(&whole[s..], &second[..]);
        Ok(())
    });
    verdict(
        9,
        "cocycle law phi(t+s, w) = phi(t, theta^s w) o phi(s, w), exact, 1000 cases",
        result.is_ok(),
        start.elapsed(),
        Duration::from_secs(10),
        &match result {
            Ok(()) => "1000 random (s, t, seed, x0) agree exactly".to_string(),
            Err(e) => e.to_string(),
        },
    );
}

#[test]
fn criterion_10_certificate_reproducibility() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let xis = [rat(1, 100), rat(1, 1000), rat(1, 50)];
    let cases: Vec<(u64, u64, Vec<u64>, RealizationOptions)> = (0..20)
        .map(|_| {
            let m = 2 + rng.next_u64() % 7;
            let bound = 1 + rng.next_u64() % 8;
            let seeds = (0..1 + rng.next_u64() % 2).map(|_| rng.next_u64()).collect();
            let options = RealizationOptions {
                xi: xis[(rng.next_u64() % 3) as usize].clone(),
                window: 40 + (rng.next_u64() % 61) as usize,
                pad_blocks: 8 + (rng.next_u64() % 9) as u32,
                ..RealizationOptions::default()
            };
            (m, bound, seeds, options)
        })
        .collect();
    let outcomes: Vec<Result<bool, String>> = cases
        .par_iter()
        .map(|(m, bound, seeds, options)| {
            let cert =
                run_realization(*m, *bound, seeds, options.clone()).map_err(|e| format!("m={m} K={bound}: {e}"))?;
            let text = cert.to_json();
            let parsed = Certificate::from_json(&text).map_err(|e| e.to_string())?;
            let again = reproduce(&parsed).map_err(|e| e.to_string())?;
            Ok(again.to_json() == text)
        })
        .collect();
    let identical = outcomes.iter().filter(|o| matches!(o, Ok(true))).count();
    let errors: Vec<&String> = outcomes.iter().filter_map(|o| o.as_ref().err()).collect();
    verdict(
        10,
        "20 randomized pipelines reproduce byte for byte from provenance",
        identical == cases.len(),
        start.elapsed(),
        Duration::from_secs(120),
        &format!("{identical}/{} identical; errors: {errors:?}", cases.len()),
    );
}
