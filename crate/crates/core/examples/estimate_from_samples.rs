//! Draw a sample, then estimate its entropy with all three estimators,
//! with and without the median trick.

use renyi::estimators::median_copies_for;
use renyi::sampling::{make_distribution, DistributionSpec};
use renyi::{Estimator, EstimatorConfig, EstimatorKind, RngStream, Sampler};

fn main() -> renyi::Result<()> {
    let p = make_distribution(&DistributionSpec::zipf(0.75, 5000), None)?;
    let sampler = Sampler::new(&p);
    let n = 3000.0;
    for (alpha, kinds) in [
        (2.0, &[EstimatorKind::Empirical, EstimatorKind::BiasCorrected][..]),
        (1.5, &[EstimatorKind::Empirical, EstimatorKind::Polynomial][..]),
    ] {
        println!("alpha = {alpha}, true H = {:.4}", p.renyi_entropy(alpha)?);
        for &kind in kinds {
            for copies in [1, median_copies_for(0.2)?] {
                let cfg = EstimatorConfig::new(alpha, kind).with_median_copies(copies);
                let est = Estimator::new(cfg, n)?;
                let mut rng = RngStream::new(2024, 0);
                let h = est.run(&sampler, &mut rng)?;
                println!("  {kind:<15} copies {copies:>2}: H = {:.4}", h.entropy);
            }
        }
    }
    Ok(())
}
