//! Exact values and structural invariants of power sums and entropies.

use proptest::prelude::*;
use renyi::formats::{parse_distribution_file, write_distribution};
use renyi::{
    entropy_from_power_sum, exact_power_sum, exact_renyi_entropy, histogram_from_samples, make_distribution,
    profile_from_histogram, Distribution, DistributionSpec, RngStream,
};

fn dirichlet_draws(count: usize, seed: u64) -> Vec<Distribution> {
    (0..count)
        .map(|i| {
            let k = 2 + (i * 37) % 199;
            let mut rng = RngStream::new(seed, i as u64);
            make_distribution(&DistributionSpec::dirichlet(1.0, k), Some(&mut rng)).unwrap()
        })
        .collect()
}

#[test]
fn uniform_is_exact_for_every_order() {
    for k in [2usize, 7, 100, 4096] {
        let p = Distribution::uniform(k).unwrap();
        for alpha in [0.5, 1.5, 2.0, 3.0] {
            let want = (k as f64).powf(1.0 - alpha);
            assert!((exact_power_sum(&p, alpha) / want - 1.0).abs() <= 1e-12);
            assert!((exact_renyi_entropy(&p, alpha).unwrap() - (k as f64).ln()).abs() <= 1e-12);
        }
    }
}

#[test]
fn step_matches_closed_form() {
    // Half the symbols at 1/(2k), half at 3/(2k): P_2 = 5/(4k).
    for k in [10usize, 100, 10_000] {
        let p = make_distribution(&DistributionSpec::step(k), None).unwrap();
        let h = exact_renyi_entropy(&p, 2.0).unwrap();
        assert!((h - (4.0 * k as f64 / 5.0).ln()).abs() <= 1e-10, "k={k}");
    }
    let p = make_distribution(&DistributionSpec::step(10), None).unwrap();
    assert!((exact_power_sum(&p, 2.0) - 0.125).abs() <= 1e-15);
}

#[test]
fn zipf_collision_entropy_matches_high_precision_value() {
    let p = make_distribution(&DistributionSpec::zipf(1.0, 100), None).unwrap();
    let h = exact_renyi_entropy(&p, 2.0).unwrap();
    assert!((h - 2.800823591122279).abs() <= 1e-10, "{h}");
}

#[test]
fn range_bounds_on_random_distributions() {
    for p in dirichlet_draws(1000, 1) {
        let k = p.k() as f64;
        for alpha in [0.5, 1.5, 2.0, 3.0] {
            let s = exact_power_sum(&p, alpha);
            let edge = k.powf(1.0 - alpha);
            let (lo, hi) = if alpha < 1.0 { (1.0, edge) } else { (edge, 1.0) };
            assert!(s >= lo * (1.0 - 1e-10) && s <= hi * (1.0 + 1e-10), "alpha={alpha} s={s}");
            let h = exact_renyi_entropy(&p, alpha).unwrap();
            assert!(h >= -1e-10 && h <= k.ln() + 1e-10);
        }
    }
}

#[test]
fn holder_chain_on_random_distributions() {
    for p in dirichlet_draws(1000, 2) {
        let k = p.k() as f64;
        for alpha in [1.5, 2.0, 3.0] {
            let pa = exact_power_sum(&p, alpha);
            assert!(exact_power_sum(&p, 2.0 * alpha) <= pa * pa * (1.0 + 1e-10));
            for j in 0..=8 {
                let beta = alpha * j as f64 / 8.0;
                let upper = exact_power_sum(&p, alpha + beta);
                assert!(upper <= k.powf((alpha - 1.0) * (alpha - beta) / alpha) * pa * pa * (1.0 + 1e-10));
                if alpha - beta > 0.0 {
                    assert!(exact_power_sum(&p, alpha - beta) <= k.powf(beta) * pa * (1.0 + 1e-10));
                }
            }
        }
    }
}

#[test]
fn entropy_gap_between_nearby_orders_grows_with_support() {
    let gaps: Vec<f64> = [1_000usize, 10_000, 100_000, 1_000_000]
        .iter()
        .map(|&k| {
            let p = make_distribution(&DistributionSpec::zipf(1.0, k), None).unwrap();
            (exact_renyi_entropy(&p, 2.0).unwrap() - exact_renyi_entropy(&p, 2.001).unwrap()).abs()
        })
        .collect();
    assert!(gaps.windows(2).all(|w| w[1] > w[0]), "{gaps:?}");
}

proptest! {
    #[test]
    fn power_sum_round_trips_through_entropy(
        weights in prop::collection::vec(0.001f64..1.0, 2..60),
        alpha in prop::sample::select(vec![0.25, 0.5, 1.5, 2.0, 3.0, 4.5]),
    ) {
        let p = Distribution::from_weights(&weights).unwrap();
        let est = entropy_from_power_sum(exact_power_sum(&p, alpha), alpha, 1e-300).unwrap();
        prop_assert!(!est.clamped);
        prop_assert_eq!(est.entropy, exact_renyi_entropy(&p, alpha).unwrap());
    }

    #[test]
    fn distribution_files_reload_exactly(weights in prop::collection::vec(0.0f64..1.0, 1..40)) {
        prop_assume!(weights.iter().any(|&w| w > 0.0));
        let p = Distribution::from_weights(&weights).unwrap();
        prop_assert_eq!(parse_distribution_file(&write_distribution(&p)).unwrap(), p);
    }

    #[test]
    fn profiles_conserve_mass(samples in prop::collection::vec(0usize..30, 0..300)) {
        let h = histogram_from_samples(&samples);
        prop_assert_eq!(h.total_draws(), samples.len() as u64);
        let profile = profile_from_histogram(&h);
        let mass: u64 = profile.iter().map(|(l, phi)| l * phi).sum();
        prop_assert_eq!(mass, samples.len() as u64);
    }

    #[test]
    fn entropy_is_nonincreasing_in_order(weights in prop::collection::vec(0.001f64..1.0, 2..40)) {
        let p = Distribution::from_weights(&weights).unwrap();
        let hs: Vec<f64> = [0.5, 1.5, 2.0, 3.0].iter().map(|&a| exact_renyi_entropy(&p, a).unwrap()).collect();
        prop_assert!(hs.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    }
}
