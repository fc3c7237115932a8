//! The polynomial estimator for a non-integer order: small counts go
//! through a best polynomial approximation of x^alpha, large counts through
//! the plug-in term. Compared against the empirical estimator at alpha = 1.5.

use renyi::sampling::{make_distribution, DistributionSpec};
use renyi::{Estimator, EstimatorConfig, EstimatorKind, RngStream, Sampler};

fn main() -> renyi::Result<()> {
    let alpha = 1.5;
    let p = make_distribution(&DistributionSpec::step(10_000), None)?;
    let truth = p.renyi_entropy(alpha)?;
    let sampler = Sampler::new(&p);
    println!("step distribution, k = 10000, true H_1.5 = {truth:.4}");
    for n in [1000.0, 3000.0, 10_000.0] {
        let poly = Estimator::new(EstimatorConfig::new(alpha, EstimatorKind::Polynomial), n)?;
        let emp = Estimator::new(EstimatorConfig::new(alpha, EstimatorKind::Empirical), n)?;
        let d = poly.polynomial().map(|q| q.degree).unwrap_or(0);
        let mut errs = [0.0; 2];
        let trials = 40;
        for t in 0..trials {
            for (slot, est) in [&poly, &emp].into_iter().enumerate() {
                let mut rng = RngStream::new(9, t);
                errs[slot] += (est.run(&sampler, &mut rng)?.entropy - truth).abs() / trials as f64;
            }
        }
        println!(
            "n = {n:>6}: tau = {:.2}, d = {d:>2}, MAE polynomial {:.4}, empirical {:.4}",
            poly.tau(),
            errs[0],
            errs[1]
        );
    }
    Ok(())
}
