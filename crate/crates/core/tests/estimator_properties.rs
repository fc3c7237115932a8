//! Statistical behavior of the estimators under repeated sampling.

use rayon::prelude::*;
use renyi::polyapprox::estimator_polynomial;
use renyi::sampling::poisson_draw;
use renyi::{
    bias_corrected_power_sum, empirical_power_sum, exact_power_sum, falling_power, make_distribution,
    scale_weights, Distribution, DistributionSpec, Estimator, EstimatorConfig, EstimatorKind, RngStream, Sampler,
    SamplingMode,
};

fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn test_distributions(k: usize) -> Vec<(String, Distribution)> {
    vec![
        ("uniform".into(), Distribution::uniform(k).unwrap()),
        ("zipf".into(), make_distribution(&DistributionSpec::zipf(1.0, k), None).unwrap()),
    ]
}

#[test]
fn bias_corrected_is_unbiased_and_empirical_is_biased_upward() {
    let trials = 100_000u64;
    for (name, p) in test_distributions(100) {
        let sampler = Sampler::new(&p);
        for n in [50.0, 500.0] {
            // (alpha 2 corrected, alpha 3 corrected, alpha 2 empirical, alpha 0.5 empirical)
            let rows: Vec<[f64; 4]> = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let h = sampler.sample_poissonized(n, &mut RngStream::new(31, t));
                    [
                        bias_corrected_power_sum(&h, n, 2.0).unwrap(),
                        bias_corrected_power_sum(&h, n, 3.0).unwrap(),
                        empirical_power_sum(&h, n, 2.0),
                        empirical_power_sum(&h, n, 0.5),
                    ]
                })
                .collect();
            let column = |i: usize| mean_se(&rows.iter().map(|r| r[i]).collect::<Vec<_>>());
            for (i, alpha) in [(0, 2.0), (1, 3.0)] {
                let (mean, se) = column(i);
                let exact = exact_power_sum(&p, alpha);
                assert!(
                    (mean - exact).abs() <= 5.0 * se,
                    "{name} n={n} alpha={alpha}: {mean} vs {exact} (se {se})"
                );
            }
            let (mean, se) = column(2);
            assert!(mean >= exact_power_sum(&p, 2.0) - 5.0 * se, "{name} n={n}");
            let (mean, se) = column(3);
            assert!(mean <= exact_power_sum(&p, 0.5) + 5.0 * se, "{name} n={n}");
        }
    }
}

#[test]
fn bias_corrected_converges_at_large_n() {
    let p = Distribution::uniform(100).unwrap();
    let sampler = Sampler::new(&p);
    let est = Estimator::new(EstimatorConfig::new(2.0, EstimatorKind::BiasCorrected), 1e5).unwrap();
    let hs: Vec<f64> = (0..100)
        .into_par_iter()
        .map(|t| est.run(&sampler, &mut RngStream::new(8, t)).unwrap().entropy)
        .collect();
    let mean = hs.iter().sum::<f64>() / hs.len() as f64;
    assert!((mean - 100f64.ln()).abs() <= 0.02, "{mean}");
}

fn failure_rate(copies: usize, n: f64, delta: f64, trials: u64) -> f64 {
    let p = Distribution::uniform(1000).unwrap();
    let truth = p.renyi_entropy(2.0).unwrap();
    let sampler = Sampler::new(&p);
    let cfg = EstimatorConfig::new(2.0, EstimatorKind::BiasCorrected).with_median_copies(copies);
    let est = Estimator::new(cfg, n).unwrap();
    let failures = (0..trials)
        .into_par_iter()
        .filter(|&t| {
            let h = est.run(&sampler, &mut RngStream::new(77, t)).unwrap().entropy;
            (h - truth).abs() > delta
        })
        .count();
    failures as f64 / trials as f64
}

#[test]
fn median_of_copies_lowers_the_failure_rate() {
    // Each copy receives the full per-copy budget n.
    let single = failure_rate(1, 400.0, 0.1, 2000);
    let median = failure_rate(9, 400.0, 0.1, 2000);
    assert!(single > 0.1, "single-copy failure rate {single} too low to be informative");
    assert!(median < single, "median {median} vs single {single}");
}

#[test]
fn polynomial_branch_weights_are_unbiased() {
    let alpha = 1.5;
    let poly = estimator_polynomial(alpha, 6).unwrap();
    let (tau, n) = (2.0, 100.0);
    let w = scale_weights(&poly, tau, n).unwrap();
    for lambda in [0.5, 1.5, 4.0] {
        let mut rng = RngStream::new(3, (lambda * 10.0) as u64);
        let xs: Vec<f64> = (0..200_000)
            .map(|_| {
                let c = poisson_draw(lambda, &mut rng);
                w.iter()
                    .enumerate()
                    .map(|(j, wm)| wm * falling_power(c, j as u32 + 1))
                    .sum::<f64>()
            })
            .collect();
        let (mean, se) = mean_se(&xs);
        let eta = 2.0 * tau;
        let want: f64 = (1..=poly.degree)
            .map(|m| poly.coeffs[m] * eta.powf(alpha - m as f64) * lambda.powi(m as i32) / n.powf(alpha))
            .sum();
        assert!((mean - want).abs() <= 5.0 * se.max(1e-15), "lambda={lambda}: {mean} vs {want}");
        // The same quantity through the polynomial itself.
        let via_q = (eta / n).powf(alpha) * poly.eval(lambda / eta);
        assert!((want - via_q).abs() <= 1e-12 * via_q.abs().max(1e-12));
    }
}

#[test]
fn fixed_and_poisson_modes_agree_at_scale() {
    let p = make_distribution(&DistributionSpec::zipf(1.0, 500), None).unwrap();
    let truth = p.renyi_entropy(3.0).unwrap();
    let sampler = Sampler::new(&p);
    for mode in [SamplingMode::Fixed, SamplingMode::Poisson] {
        let cfg = EstimatorConfig::new(3.0, EstimatorKind::BiasCorrected).with_sampling(mode);
        let est = Estimator::new(cfg, 20_000.0).unwrap();
        let h = est.run(&sampler, &mut RngStream::new(4, 0)).unwrap();
        assert!((h.entropy - truth).abs() < 0.05, "{mode}: {}", h.entropy);
    }
}
