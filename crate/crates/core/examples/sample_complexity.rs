//! Empirical sample complexity: the bias-corrected estimator needs about
//! sqrt(k) samples, the empirical estimator about k.

use renyi::{sample_complexity_search, DistributionSpec, EstimatorConfig, EstimatorKind, SearchConfig};

fn main() -> renyi::Result<()> {
    for kind in [EstimatorKind::BiasCorrected, EstimatorKind::Empirical] {
        let mut previous = None;
        for k in [100, 400, 1600] {
            let cfg = SearchConfig {
                trials: 200,
                ..SearchConfig::new(DistributionSpec::uniform(k), EstimatorConfig::new(2.0, kind), 0.1, 0.1)
            };
            let r = sample_complexity_search(&cfg)?;
            let (lo, hi) = r.at_n_star.wilson();
            let growth = previous.map(|p: u64| format!("x{:.2}", r.n_star as f64 / p as f64)).unwrap_or_default();
            println!(
                "{kind:<15} k = {k:>5}: n* = {:>6} {growth:<6} failure rate {:.3} [{lo:.3}, {hi:.3}]",
                r.n_star,
                r.at_n_star.rate()
            );
            previous = Some(r.n_star);
        }
    }
    Ok(())
}
