//! Property tests for the library-wide invariants.

use proptest::prelude::*;

use sharktail_core::certify::{Pipeline, RealizationOptions};
use sharktail_core::number::Interval;
use sharktail_core::random::{
    cocycle_iterate, cocycle_iterate_from, pullback_periodic_point, step_is_forced, NoiseModel, FLOAT_DRIFT,
};
use sharktail_core::sharkovskii::{is_finite_tail, shark_less, tail};
use sharktail_core::{rat, IntervalMap, PiecewiseAffineMap, Rational};

fn rational() -> impl Strategy<Value = Rational> {
    (-1000i64..=1000, 1i64..=97).prop_map(|(p, q)| rat(p, q))
}

fn unit_rational() -> impl Strategy<Value = Rational> {
    (0i64..=1000).prop_map(|p| rat(p, 1000))
}

fn ordered_pair() -> impl Strategy<Value = (Rational, Rational)> {
    (rational(), rational()).prop_map(|(a, b)| if a <= b { (a, b) } else { (b, a) })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn order_is_asymmetric_and_transitive(a in 1u64..5000, b in 1u64..5000, c in 1u64..5000) {
        prop_assert!(!(shark_less(a, b) && shark_less(b, a)));
        prop_assert!(a == b || shark_less(a, b) || shark_less(b, a));
        if shark_less(a, b) && shark_less(b, c) {
            prop_assert!(shark_less(a, c));
        }
    }

    #[test]
    fn tails_are_closed_and_recognized(n in 1u64..200, bound in 1u64..200) {
        let t = tail(n, bound);
        for &m in &t {
            for l in 1..=bound {
                if shark_less(m, l) {
                    prop_assert!(t.contains(&l));
                }
            }
        }
        if n <= bound {
            prop_assert_eq!(is_finite_tail(&t).unwrap(), (true, n));
        }
    }

    #[test]
    fn interval_operations_enclose_point_results(
        (a, b) in ordered_pair(),
        (c, d) in ordered_pair(),
        s in 0i64..=10,
        u in 0i64..=10,
    ) {
        let x = &a + &(&(&b - &a) * &rat(s, 10));
        let y = &c + &(&(&d - &c) * &rat(u, 10));
        let i = Interval::new(a.clone(), b.clone()).unwrap();
        let j = Interval::new(c.clone(), d.clone()).unwrap();
        prop_assert!(i.add(&j).contains(&(&x + &y)));
        prop_assert!(i.sub(&j).contains(&(&x - &y)));
        prop_assert!(i.mul(&j).contains(&(&x * &y)));
        let fi = i.to_f64();
        let fj = j.to_f64();
        prop_assert!(fi.mul(&fj).to_rational().contains(&(&x * &y)));
        prop_assert!(fi.add(&fj).to_rational().contains(&(&x + &y)));
    }

    #[test]
    fn affine_images_enclose_point_images(
        gamma in -49i64..=49,
        h in 1i64..=100,
        (a, b) in (unit_rational(), unit_rational()),
        s in 0i64..=8,
    ) {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        let map = PiecewiseAffineMap::truncated_asymmetric_tent(&rat(h, 100), &rat(gamma, 100)).unwrap();
        let x = &a + &(&(&b - &a) * &rat(s, 8));
        let image = map.image(&Interval::new(a, b).unwrap()).unwrap();
        prop_assert!(image.contains(&map.eval_exact(&x).unwrap()));
        prop_assert!(image.to_f64().to_rational().subset_of(&Interval::new(Rational::zero(), Rational::one()).unwrap()));
    }

    #[test]
    fn logistic_cocycle_law_within_drift(
        s in 0usize..200,
        t in 0usize..200,
        seed in any::<u64>(),
        x0 in 0.01f64..0.99,
    ) {
        let noise = NoiseModel::logistic(3.15, 3.25, seed).unwrap();
        let whole = cocycle_iterate::<f64>(&noise, &x0, s + t).unwrap();
        let second = cocycle_iterate_from::<f64>(&noise, s as i64, &whole[s].state, t).unwrap();
        for (p, q) in whole[s..].iter().zip(&second) {
            prop_assert_eq!(p.base_index, q.base_index);
            prop_assert!((p.state - q.state).abs() <= FLOAT_DRIFT);
        }
    }
}

// long trajectories: fewer cases
proptest! {
    #![proptest_config(ProptestConfig { cases: 32, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn identical_seeds_give_identical_trajectories(seed in any::<u64>(), x0 in unit_rational()) {
        let tent = NoiseModel::asymmetric_tent(rat(1, 80), Rational::one(), seed).unwrap();
        let a = cocycle_iterate::<f64>(&tent, &x0.to_f64(), 300).unwrap();
        let b = cocycle_iterate::<f64>(&tent, &x0.to_f64(), 300).unwrap();
        prop_assert!(a.iter().zip(&b).all(|(p, q)| p.state.to_bits() == q.state.to_bits()));
        let logistic = NoiseModel::logistic(3.15, 3.25, seed).unwrap();
        let c = cocycle_iterate::<f64>(&logistic, &0.5, 300).unwrap();
        let d = cocycle_iterate::<f64>(&logistic, &0.5, 300).unwrap();
        prop_assert!(c.iter().zip(&d).all(|(p, q)| p.state.to_bits() == q.state.to_bits()));
    }

    #[test]
    fn tent_trajectories_stay_in_the_unit_interval(seed in any::<u64>(), x0 in unit_rational()) {
        let noise = NoiseModel::asymmetric_tent(rat(1, 80), Rational::one(), seed).unwrap();
        let traj = cocycle_iterate::<f64>(&noise, &x0.to_f64(), 2000).unwrap();
        prop_assert!(traj.iter().all(|r| (0.0..=1.0).contains(&r.state)));
    }
}

/// Every within-budget fibre map forces each component of every tracked
/// neighbourhood into the next one, over 10³ sampled fibres.
#[test]
fn forced_itinerary_over_sampled_fibres() {
    let pipeline = Pipeline::prepare(3, 5, RealizationOptions::default()).unwrap();
    let noise = pipeline.noise.clone().with_seed(17);
    for n in -500i64..500 {
        let map = noise.affine_map(n).unwrap();
        for t in &pipeline.tracked {
            let comps = &t.neighborhood.components;
            let k = comps.len();
            for i in 0..k {
                assert!(
                    step_is_forced(&map, t.neighborhood.kind, &comps[i], &comps[(i + 1) % k]).unwrap(),
                    "fibre {n}, {k}-cycle, component {i}"
                );
            }
        }
    }
}

/// Successive pullback estimates stay inside the geometric envelope
/// `|x_{m+1} − x_m| ≤ rate^{m+1} · diam(N_1)` for every within-budget seed.
#[test]
fn pullback_estimates_follow_the_envelope() {
    let pipeline = Pipeline::prepare(3, 3, RealizationOptions::default()).unwrap();
    for seed in 0..6u64 {
        let noise = pipeline.noise.clone().with_seed(seed);
        for t in &pipeline.tracked {
            let nbhd = &t.neighborhood;
            let diam = nbhd.components[0].width();
            let estimates: Vec<_> = (1..=12u32).map(|m| pullback_periodic_point(&noise, nbhd, 0, m).unwrap()).collect();
            for (m, w) in estimates.windows(2).enumerate() {
                let envelope = &w[0].contraction_rate.pow(m as i32 + 1) * &diam;
                assert!((&w[1].value - &w[0].value).abs() <= envelope, "seed {seed}, m {m}");
            }
        }
    }
}
