//! Power-sum estimators (empirical, bias-corrected, polynomial) and the
//! median-of-estimates wrapper that turns them into entropy estimates.
//!
//! All sums are accumulated per multiplicity class rather than per symbol,
//! so an estimate depends only on the multiset of counts and relabeling
//! symbols cannot change a single bit of the result.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::distribution::check_alpha;
use crate::entropy::{default_floor, entropy_from_power_sum, EntropyEstimate};
use crate::error::{Error, Result};
use crate::histogram::Histogram;
use crate::numeric::{compensated_sum, falling_power, is_integer, CompensatedSum};
use crate::polyapprox::{estimator_polynomial, scale_weights, EstimatorPolynomial};
use crate::sampling::Sampler;

/// `sum_x (N_x / n)^alpha`.
pub fn empirical_power_sum(h: &Histogram, n: f64, alpha: f64) -> f64 {
    assert!(n > 0.0, "sample size must be positive, got {n}");
    compensated_sum(
        h.profile()
            .iter()
            .map(|(l, phi)| phi as f64 * (l as f64 / n).powf(alpha)),
    )
}

/// `sum_x N_x^(alpha) / n^alpha` with falling powers; unbiased under
/// Poissonized sampling at rate `n`.
pub fn bias_corrected_power_sum(h: &Histogram, n: f64, alpha: f64) -> Result<f64> {
    let order = integer_order(alpha)?;
    assert!(n > 0.0, "sample size must be positive, got {n}");
    Ok(falling_sum(h, order) / n.powf(alpha))
}

/// `sum_x N_x^(alpha) / n^(alpha)`, normalized by the falling power of the
/// sample size; unbiased when exactly `n` samples were drawn.
pub fn bias_corrected_power_sum_fixed(h: &Histogram, n: u64, alpha: f64) -> Result<f64> {
    let order = integer_order(alpha)?;
    let denom = falling_power(n, order);
    if denom == 0.0 {
        return Err(Error::InvalidParameters(format!(
            "need at least {order} samples for order {alpha}, got {n}"
        )));
    }
    Ok(falling_sum(h, order) / denom)
}

fn integer_order(alpha: f64) -> Result<u32> {
    if !is_integer(alpha) || alpha < 2.0 || alpha > f64::from(u32::MAX) {
        return Err(Error::NonIntegerAlpha(alpha));
    }
    Ok(alpha as u32)
}

fn falling_sum(h: &Histogram, order: u32) -> f64 {
    compensated_sum(
        h.profile()
            .iter()
            .map(|(l, phi)| phi as f64 * falling_power(l, order)),
    )
}

/// The polynomial estimator.
///
/// Symbols whose count in `h_select` exceeds `tau` contribute the empirical
/// term `(N_x / n)^alpha` computed from `h_est`; every other symbol
/// contributes `sum_m a_m (2 tau)^(alpha - m) N_x^(m) / n^alpha`. `n` is the
/// sampling rate of `h_est`. The result is not clamped and may be negative.
pub fn polynomial_power_sum(
    h_select: &Histogram,
    h_est: &Histogram,
    n: f64,
    alpha: f64,
    poly: &EstimatorPolynomial,
    tau: f64,
) -> Result<f64> {
    check_alpha(alpha)?;
    let weights = scale_weights(poly, tau, n)?;
    // Symbols absent from h_est contribute zero on both branches.
    let mut classes: BTreeMap<(bool, u64), u64> = BTreeMap::new();
    for (symbol, count) in h_est.iter() {
        let large = h_select.count(symbol) as f64 > tau;
        *classes.entry((large, count)).or_insert(0) += 1;
    }
    let mut sum = CompensatedSum::new();
    for ((large, count), times) in classes {
        let term = if large {
            (count as f64 / n).powf(alpha)
        } else {
            small_branch(&weights, count)
        };
        sum.add(times as f64 * term);
    }
    Ok(sum.value())
}

fn small_branch(weights: &[f64], count: u64) -> f64 {
    let mut falling = 1.0;
    let mut acc = CompensatedSum::new();
    for (j, &w) in weights.iter().enumerate() {
        let m = j as u64 + 1;
        if m > count {
            break;
        }
        falling *= (count - j as u64) as f64;
        acc.add(w * falling);
    }
    acc.value()
}

/// Sample median; the mean of the two middle values for even length.
pub fn median_amplify(estimates: &[f64]) -> Result<f64> {
    if estimates.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut sorted = estimates.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    Ok(if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        let (a, b) = (sorted[mid - 1], sorted[mid]);
        if a == b {
            a
        } else {
            a / 2.0 + b / 2.0
        }
    })
}

/// Number of independent copies that drives the failure probability of a
/// constant-success estimator below `epsilon`: `18 ln(1/epsilon)` rounded
/// up to the next odd integer.
pub fn median_copies_for(epsilon: f64) -> Result<usize> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameters(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    let t = (18.0 * epsilon.recip().ln()).ceil().max(1.0) as usize;
    Ok(if t.is_multiple_of(2) { t + 1 } else { t })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EstimatorKind {
    Empirical,
    BiasCorrected,
    Polynomial,
}

impl EstimatorKind {
    pub fn label(self) -> &'static str {
        match self {
            EstimatorKind::Empirical => "empirical",
            EstimatorKind::BiasCorrected => "bias_corrected",
            EstimatorKind::Polynomial => "polynomial",
        }
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.label())
    }
}

impl FromStr for EstimatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "empirical" | "plugin" => Ok(EstimatorKind::Empirical),
            "bias_corrected" | "bias" => Ok(EstimatorKind::BiasCorrected),
            "polynomial" | "poly" => Ok(EstimatorKind::Polynomial),
            other => Err(Error::Parse(format!(
                "unknown estimator {other:?}, expected empirical, bias_corrected or polynomial"
            ))),
        }
    }
}

/// How a sample budget `n` is turned into observations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SamplingMode {
    /// Exactly `n` draws.
    #[default]
    Fixed,
    /// `Poisson(n)` draws, i.e. independent `Poisson(n p_x)` multiplicities.
    Poisson,
}

impl FromStr for SamplingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "fixed" => Ok(SamplingMode::Fixed),
            "poisson" | "poissonized" => Ok(SamplingMode::Poisson),
            other => Err(Error::Parse(format!("unknown sampling mode {other:?}, expected fixed or poisson"))),
        }
    }
}

impl fmt::Display for SamplingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            SamplingMode::Fixed => "fixed",
            SamplingMode::Poisson => "poisson",
        })
    }
}

/// Default threshold and degree for the polynomial estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TauRule {
    /// `tau = ln n`, `d = ceil(1.5 tau)`.
    #[default]
    Experiment,
    /// `tau = 4 ln n`, `d = ceil(ln(n) / 2)`.
    Proof,
}

impl TauRule {
    pub fn tau(self, n: f64) -> f64 {
        let ln_n = n.max(1.0).ln();
        match self {
            TauRule::Experiment => ln_n,
            TauRule::Proof => 4.0 * ln_n,
        }
    }

    pub fn degree(self, n: f64) -> usize {
        let d = match self {
            TauRule::Experiment => (1.5 * self.tau(n)).ceil(),
            TauRule::Proof => (n.max(1.0).ln() / 2.0).ceil(),
        };
        (d as usize).max(1)
    }
}

impl FromStr for TauRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "experiment" => Ok(TauRule::Experiment),
            "proof" => Ok(TauRule::Proof),
            other => Err(Error::Parse(format!("unknown tau rule {other:?}, expected experiment or proof"))),
        }
    }
}

impl fmt::Display for TauRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            TauRule::Experiment => "experiment",
            TauRule::Proof => "proof",
        })
    }
}

/// Everything needed to turn samples into an entropy estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorConfig {
    pub alpha: f64,
    pub kind: EstimatorKind,
    /// Explicit threshold; `None` defers to `tau_rule`.
    pub tau: Option<f64>,
    /// Explicit degree; `None` defers to `tau_rule`.
    pub degree: Option<usize>,
    pub tau_rule: TauRule,
    pub median_copies: usize,
    pub sampling: SamplingMode,
}

impl EstimatorConfig {
    pub fn new(alpha: f64, kind: EstimatorKind) -> Self {
        Self {
            alpha,
            kind,
            tau: None,
            degree: None,
            tau_rule: TauRule::Experiment,
            median_copies: 1,
            sampling: SamplingMode::Fixed,
        }
    }

    pub fn with_sampling(mut self, sampling: SamplingMode) -> Self {
        self.sampling = sampling;
        self
    }

    pub fn with_median_copies(mut self, t: usize) -> Self {
        self.median_copies = t;
        self
    }

    pub fn with_tau_rule(mut self, rule: TauRule) -> Self {
        self.tau_rule = rule;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)?;
        if self.kind == EstimatorKind::BiasCorrected {
            integer_order(self.alpha)?;
        }
        if self.median_copies == 0 {
            return Err(Error::Config("median_copies must be at least 1".into()));
        }
        if let Some(tau) = self.tau {
            if !(tau > 0.0) || !tau.is_finite() {
                return Err(Error::Config(format!("tau must be positive, got {tau}")));
            }
        }
        if self.degree == Some(0) {
            return Err(Error::Config("degree must be at least 1".into()));
        }
        Ok(())
    }

    /// Threshold used for a budget of `n` samples.
    pub fn tau_for(&self, n: f64) -> f64 {
        self.tau.unwrap_or_else(|| self.tau_rule.tau(n))
    }

    pub fn degree_for(&self, n: f64) -> usize {
        self.degree.unwrap_or_else(|| self.tau_rule.degree(n))
    }
}

/// One independent batch of observations for a single base estimate.
#[derive(Debug, Clone, PartialEq)]
pub enum Batch {
    Single(Histogram),
    /// Branch-selection histogram and estimation histogram.
    Split(Histogram, Histogram),
}

/// An [`EstimatorConfig`] bound to a sample budget, with the approximating
/// polynomial computed once.
///
/// For the polynomial estimator the budget is split evenly between the
/// selection and estimation halves, so every estimator consumes the same
/// expected number of samples per batch. The threshold and degree follow the
/// full budget.
#[derive(Debug, Clone)]
pub struct Estimator {
    config: EstimatorConfig,
    n: f64,
    tau: f64,
    poly: Option<EstimatorPolynomial>,
}

impl Estimator {
    pub fn new(config: EstimatorConfig, n: f64) -> Result<Self> {
        config.validate()?;
        if !(n >= 1.0) || !n.is_finite() {
            return Err(Error::InvalidParameters(format!("sample budget must be at least 1, got {n}")));
        }
        let tau = config.tau_for(n);
        let poly = match config.kind {
            EstimatorKind::Polynomial => Some(estimator_polynomial(config.alpha, config.degree_for(n))?),
            _ => None,
        };
        Ok(Self { config, n, tau, poly })
    }

    /// Uses a precomputed polynomial instead of fitting one.
    pub fn with_polynomial(config: EstimatorConfig, n: f64, poly: EstimatorPolynomial) -> Result<Self> {
        config.validate()?;
        if poly.alpha != config.alpha {
            return Err(Error::InvalidParameters(format!(
                "polynomial approximates order {} but the estimator targets {}",
                poly.alpha, config.alpha
            )));
        }
        poly.check_degree()?;
        let tau = config.tau_for(n);
        Ok(Self {
            config,
            n,
            tau,
            poly: Some(poly),
        })
    }

    pub fn config(&self) -> &EstimatorConfig {
        &self.config
    }

    pub fn budget(&self) -> f64 {
        self.n
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn polynomial(&self) -> Option<&EstimatorPolynomial> {
        self.poly.as_ref()
    }

    /// Expected size of each histogram handed to the estimator.
    pub fn batch_size(&self) -> f64 {
        match self.config.kind {
            EstimatorKind::Polynomial => self.n / 2.0,
            _ => self.n,
        }
    }

    /// Power-sum estimate from one batch.
    pub fn power_sum(&self, batch: &Batch) -> Result<f64> {
        let alpha = self.config.alpha;
        let size = self.batch_size();
        match (self.config.kind, batch) {
            (EstimatorKind::Empirical, Batch::Single(h)) => Ok(empirical_power_sum(h, self.normalizer(h, size), alpha)),
            (EstimatorKind::BiasCorrected, Batch::Single(h)) => match self.config.sampling {
                SamplingMode::Poisson => bias_corrected_power_sum(h, size, alpha),
                SamplingMode::Fixed => bias_corrected_power_sum_fixed(h, h.total_draws(), alpha),
            },
            (EstimatorKind::Polynomial, Batch::Split(select, est)) => {
                let poly = self.poly.as_ref().expect("polynomial estimators carry a polynomial");
                polynomial_power_sum(select, est, self.normalizer(est, size), alpha, poly, self.tau)
            }
            (EstimatorKind::Polynomial, Batch::Single(_)) => Err(Error::InvalidParameters(
                "the polynomial estimator needs a split batch".into(),
            )),
            (_, Batch::Split(..)) => Err(Error::InvalidParameters(format!(
                "the {} estimator takes a single histogram",
                self.config.kind
            ))),
        }
    }

    /// Realized draws for fixed sampling, the nominal rate for Poissonized.
    fn normalizer(&self, h: &Histogram, nominal: f64) -> f64 {
        match self.config.sampling {
            SamplingMode::Fixed if h.total_draws() > 0 => h.total_draws() as f64,
            _ => nominal,
        }
    }

    /// Median of the per-batch power sums, transformed to an entropy with
    /// the default floor `(1/n)^alpha`.
    pub fn estimate(&self, batches: &[Batch]) -> Result<EntropyEstimate> {
        let sums = batches.iter().map(|b| self.power_sum(b)).collect::<Result<Vec<_>>>()?;
        let median = median_amplify(&sums)?;
        entropy_from_power_sum(median, self.config.alpha, default_floor(self.n, self.config.alpha))
    }

    /// Draws one batch according to the sampling mode.
    pub fn draw_batch<R: Rng + ?Sized>(&self, sampler: &Sampler, rng: &mut R) -> Batch {
        let size = self.batch_size();
        let one = |rng: &mut R| match self.config.sampling {
            SamplingMode::Fixed => sampler.sample_fixed(size.round() as u64, rng),
            SamplingMode::Poisson => sampler.sample_poissonized(size, rng),
        };
        match self.config.kind {
            EstimatorKind::Polynomial => {
                let select = one(rng);
                let est = one(rng);
                Batch::Split(select, est)
            }
            _ => Batch::Single(one(rng)),
        }
    }

    /// Draws `median_copies` batches and estimates from them.
    pub fn run<R: Rng + ?Sized>(&self, sampler: &Sampler, rng: &mut R) -> Result<EntropyEstimate> {
        let batches: Vec<Batch> = (0..self.config.median_copies)
            .map(|_| self.draw_batch(sampler, rng))
            .collect();
        self.estimate(&batches)
    }

    /// Cuts a recorded sample into `median_copies` consecutive batches
    /// (each further halved for the polynomial estimator).
    pub fn batches_from_samples(&self, samples: &[usize]) -> Result<Vec<Batch>> {
        let t = self.config.median_copies;
        let parts = match self.config.kind {
            EstimatorKind::Polynomial => 2 * t,
            _ => t,
        };
        if samples.len() < parts {
            return Err(Error::InvalidParameters(format!(
                "{} samples cannot be cut into {parts} nonempty parts",
                samples.len()
            )));
        }
        let chunks: Vec<Histogram> = (0..parts)
            .map(|i| {
                let lo = i * samples.len() / parts;
                let hi = (i + 1) * samples.len() / parts;
                Histogram::from_samples(&samples[lo..hi])
            })
            .collect();
        Ok(match self.config.kind {
            EstimatorKind::Polynomial => chunks
                .chunks(2)
                .map(|pair| Batch::Split(pair[0].clone(), pair[1].clone()))
                .collect(),
            _ => chunks.into_iter().map(Batch::Single).collect(),
        })
    }
}

/// Estimates the entropy from pre-drawn batches with a budget of `n`.
pub fn estimate_entropy(batches: &[Batch], config: &EstimatorConfig, n: f64) -> Result<EntropyEstimate> {
    Estimator::new(config.clone(), n)?.estimate(batches)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::Distribution;
    use crate::sampling::RngStream;
    use proptest::prelude::*;

    fn hist(pairs: &[(usize, u64)]) -> Histogram {
        Histogram::from_map(pairs.iter().copied().collect())
    }

    #[test]
    fn empirical_examples() {
        assert!((empirical_power_sum(&hist(&[(0, 3), (1, 1)]), 4.0, 2.0) - 0.625).abs() < 1e-15);
        assert_eq!(empirical_power_sum(&hist(&[(0, 4)]), 4.0, 2.7), 1.0);
        let v = empirical_power_sum(&hist(&[(0, 2), (1, 2)]), 4.0, 0.5);
        assert!((v - 2.0 * 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn bias_corrected_examples() {
        assert_eq!(bias_corrected_power_sum(&hist(&[(0, 3), (1, 1)]), 4.0, 2.0).unwrap(), 0.375);
        assert_eq!(
            bias_corrected_power_sum(&hist(&[(0, 1), (1, 1), (2, 1)]), 3.0, 2.0).unwrap(),
            0.0
        );
        assert!((bias_corrected_power_sum(&hist(&[(0, 5)]), 5.0, 3.0).unwrap() - 0.48).abs() < 1e-15);
        assert_eq!(
            bias_corrected_power_sum(&hist(&[(0, 5)]), 5.0, 2.5),
            Err(Error::NonIntegerAlpha(2.5))
        );
        // fixed-n normalization makes a point mass exact
        assert_eq!(bias_corrected_power_sum_fixed(&hist(&[(0, 5)]), 5, 3.0).unwrap(), 1.0);
    }

    fn brute_force(select: &Histogram, est: &Histogram, n: f64, alpha: f64, poly: &EstimatorPolynomial, tau: f64) -> f64 {
        let mut total = 0.0;
        for (x, count) in est.iter() {
            if select.count(x) as f64 > tau {
                total += (count as f64 / n).powf(alpha);
            } else {
                for m in 1..=poly.degree {
                    total += poly.coeffs[m] * (2.0 * tau).powf(alpha - m as f64) * falling_power(count, m as u32)
                        / n.powf(alpha);
                }
            }
        }
        total
    }

    #[test]
    fn polynomial_examples() {
        let poly = estimator_polynomial(1.5, 6).unwrap();
        let h = hist(&[(0, 40)]);
        let v = polynomial_power_sum(&h, &h, 100.0, 1.5, &poly, 5.0).unwrap();
        assert_eq!(v, 0.4f64.powf(1.5));

        let linear = EstimatorPolynomial {
            coeffs: vec![0.0, 0.7],
            cheb: vec![0.35, 0.35],
            degree: 1,
            ..poly.clone()
        };
        let small = hist(&[(0, 2), (1, 3)]);
        let v = polynomial_power_sum(&small, &small, 50.0, 1.5, &linear, 4.0).unwrap();
        let expected = 0.7 * 8f64.powf(0.5) * 5.0 / 50f64.powf(1.5);
        assert!((v - expected).abs() < 1e-15);

        let select = hist(&[(0, 30), (1, 2), (7, 9)]);
        let est = hist(&[(0, 28), (1, 4), (3, 1)]);
        let v = polynomial_power_sum(&select, &est, 60.0, 1.5, &poly, 5.0).unwrap();
        let oracle = brute_force(&select, &est, 60.0, 1.5, &poly, 5.0);
        assert!((v - oracle).abs() < 1e-13 * oracle.abs().max(1e-3));

        let mut broken = poly.clone();
        broken.coeffs.push(0.0);
        assert!(matches!(
            polynomial_power_sum(&select, &est, 60.0, 1.5, &broken, 5.0),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn median_examples() {
        assert_eq!(median_amplify(&[1.0, 9.0, 2.0, 8.0, 3.0]).unwrap(), 3.0);
        assert_eq!(median_amplify(&[5.0]).unwrap(), 5.0);
        assert_eq!(median_amplify(&[1.0, 2.0, 3.0, 100.0]).unwrap(), 2.5);
        assert_eq!(median_amplify(&[]), Err(Error::EmptyInput));
    }

    #[test]
    fn copies_from_epsilon() {
        // 18 ln 10 = 41.4 -> 42 -> 43
        assert_eq!(median_copies_for(0.1).unwrap(), 43);
        assert_eq!(median_copies_for(0.9).unwrap() % 2, 1);
        assert!(median_copies_for(1.0).is_err());
    }

    #[test]
    fn tau_rules() {
        let n = 1000.0;
        assert!((TauRule::Experiment.tau(n) - 6.907755278982137).abs() < 1e-12);
        assert_eq!(TauRule::Experiment.degree(n), 11);
        assert_eq!(TauRule::Proof.degree(n), 4);
        assert!((TauRule::Proof.tau(n) - 4.0 * 6.907755278982137).abs() < 1e-12);
    }

    #[test]
    fn config_validation() {
        assert!(EstimatorConfig::new(2.5, EstimatorKind::BiasCorrected).validate().is_err());
        assert!(EstimatorConfig::new(1.0, EstimatorKind::Empirical).validate().is_err());
        assert!(EstimatorConfig::new(2.0, EstimatorKind::Empirical)
            .with_median_copies(0)
            .validate()
            .is_err());
        assert_eq!("bias-corrected".parse::<EstimatorKind>().unwrap(), EstimatorKind::BiasCorrected);
        assert!("kernel".parse::<EstimatorKind>().is_err());
    }

    #[test]
    fn point_mass_gives_zero_entropy() {
        let p = Distribution::point_mass(3).unwrap();
        let sampler = Sampler::new(&p);
        for kind in [EstimatorKind::Empirical, EstimatorKind::BiasCorrected, EstimatorKind::Polynomial] {
            let alpha = if kind == EstimatorKind::BiasCorrected { 2.0 } else { 1.5 };
            let est = Estimator::new(EstimatorConfig::new(alpha, kind), 10.0).unwrap();
            let mut rng = RngStream::new(1, 0);
            let e = est.run(&sampler, &mut rng).unwrap();
            assert_eq!(e.entropy, 0.0, "{kind}");
        }
    }

    #[test]
    fn polynomial_needs_split_batch() {
        let est = Estimator::new(EstimatorConfig::new(1.5, EstimatorKind::Polynomial), 100.0).unwrap();
        assert!(est.power_sum(&Batch::Single(hist(&[(0, 3)]))).is_err());
        let cut = est.batches_from_samples(&[0, 0, 1, 1, 2, 2]).unwrap();
        assert!(matches!(cut[0], Batch::Split(..)));
    }

    proptest! {
        #[test]
        fn bias_corrected_never_exceeds_empirical(
            counts in proptest::collection::vec(1u64..30, 1..40),
            alpha in 2u32..5,
        ) {
            let h = Histogram::from_dense(&counts);
            let n = h.total_draws() as f64;
            let a = f64::from(alpha);
            prop_assert!(bias_corrected_power_sum(&h, n, a).unwrap() <= empirical_power_sum(&h, n, a));
        }

        #[test]
        fn relabeling_is_bit_identical(
            counts in proptest::collection::vec(0u64..25, 1..40),
            shift in 1usize..1000,
        ) {
            let h = Histogram::from_dense(&counts);
            let relabeled = Histogram::from_map(
                h.iter().map(|(s, c)| ((s * 7919 + shift) % 100_003, c)).collect(),
            );
            let n = (h.total_draws() as f64).max(1.0);
            prop_assert_eq!(
                empirical_power_sum(&h, n, 1.7).to_bits(),
                empirical_power_sum(&relabeled, n, 1.7).to_bits()
            );
            prop_assert_eq!(
                bias_corrected_power_sum(&h, n, 3.0).unwrap().to_bits(),
                bias_corrected_power_sum(&relabeled, n, 3.0).unwrap().to_bits()
            );
        }

        #[test]
        fn low_threshold_reduces_to_empirical(
            select in proptest::collection::vec(1u64..20, 1..30),
            est in proptest::collection::vec(0u64..20, 1..30),
        ) {
            let poly = estimator_polynomial(1.5, 5).unwrap();
            // every observed symbol in `select` has count >= 1 > tau
            let n_sym = select.len().max(est.len());
            let select = Histogram::from_dense(&[select, vec![1; n_sym]].concat()[..n_sym]);
            let est = Histogram::from_dense(&est);
            let n = 37.0;
            let v = polynomial_power_sum(&select, &est, n, 1.5, &poly, 0.5).unwrap();
            prop_assert_eq!(v, empirical_power_sum(&est, n, 1.5));
        }

        #[test]
        fn median_of_constant_and_outliers(
            c in -1e6f64..1e6,
            t in 1usize..20,
            clean in proptest::collection::vec(-10.0f64..10.0, 3..21),
        ) {
            prop_assert_eq!(median_amplify(&vec![c; t]).unwrap(), c);
            let bad = (clean.len() - 1) / 2;
            let mut values = clean.clone();
            for (i, v) in values.iter_mut().take(bad).enumerate() {
                *v = if i % 2 == 0 { f64::INFINITY } else { f64::NEG_INFINITY };
            }
            let lo = clean.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = clean.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let m = median_amplify(&values).unwrap();
            prop_assert!(m >= lo && m <= hi);
        }
    }
}
