//! Estimating Rényi entropies and power sums of discrete distributions from
//! samples.
//!
//! The Rényi entropy of order `alpha` is `H_alpha(p) = ln(P_alpha(p)) / (1 - alpha)`
//! with the power sum `P_alpha(p) = sum_x p_x^alpha`. Estimating `H_alpha` to
//! additive accuracy is the same as estimating `P_alpha` to multiplicative
//! accuracy, so every estimator here produces a power sum first.
//!
//! * [`distribution`], [`histogram`], [`entropy`]: exact values, sample
//!   summaries and the power-sum to entropy transform.
//! * [`sampling`]: canonical test distributions, fixed-size and Poissonized
//!   sampling, reproducible RNG streams.
//! * [`estimators`]: empirical, bias-corrected (integer orders) and
//!   polynomial-approximation estimators, plus the median trick.
//! * [`polyapprox`]: Remez best approximation of `x^alpha` on `[0, 1]`.
//! * [`hardness`]: lower-bound instances and two-point certificates.
//! * [`experiment`], [`search`], [`report`]: Monte Carlo experiments,
//!   sample-complexity search and certificate reports used by the `renyi`
//!   binary.
//!
//! The `examples/` directory has one runnable program per capability:
//! `exact_entropy`, `estimate_from_samples`, `bias_vs_empirical`,
//! `polynomial_estimator`, `remez`, `certificate`, `sample_complexity` and
//! `poisson_moments`.
//!
//! ```
//! use renyi::{Distribution, EstimatorConfig, EstimatorKind, Estimator, RngStream, Sampler};
//!
//! let p = Distribution::uniform(100).unwrap();
//! let est = Estimator::new(EstimatorConfig::new(2.0, EstimatorKind::BiasCorrected), 5000.0).unwrap();
//! let mut rng = RngStream::new(42, 0);
//! let h = est.run(&Sampler::new(&p), &mut rng).unwrap();
//! assert!((h.entropy - 100f64.ln()).abs() < 0.1);
//! ```

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod distribution;
pub mod entropy;
pub mod error;
pub mod estimators;
pub mod experiment;
pub mod formats;
pub mod hardness;
pub mod histogram;
mod numeric;
pub mod polyapprox;
pub mod report;
pub mod sampling;
pub mod search;

pub use distribution::{exact_power_sum, exact_renyi_entropy, validate_distribution, Distribution};
pub use entropy::{default_floor, entropy_from_power_sum, zipf_leading_term, EntropyEstimate, LogBase};
pub use error::{Error, Result};
pub use estimators::{
    bias_corrected_power_sum, empirical_power_sum, estimate_entropy, median_amplify, polynomial_power_sum, Batch,
    Estimator, EstimatorConfig, EstimatorKind, SamplingMode, TauRule,
};
pub use experiment::{run_experiment, ExperimentConfig, ExperimentRow};
pub use hardness::{
    hellinger_sq, lecam_certificate, newton_girard_vectors, profile_distance_bound, tv_product_bound,
    two_point_integer_pair, CertificateMode, Construction, HardInstance, LeCamCertificate, MomentMatchedVectors,
};
pub use histogram::{histogram_from_samples, profile_from_histogram, Histogram, Profile};
pub use numeric::falling_power;
pub use polyapprox::{remez_best_approx, scale_weights, shift_to_zero, EstimatorPolynomial, RemezApprox};
pub use report::{emit_certificate, CertificateArgs};
pub use sampling::{make_distribution, DistributionSpec, RngStream, Sampler};
pub use search::{sample_complexity_search, SearchConfig, SearchResult};
