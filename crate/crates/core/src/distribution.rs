//! Explicit finite distributions and their exact power sums and Rényi entropies.

use crate::error::{Error, Result};
use crate::numeric::compensated_sum;

const SUM_REJECT_TOLERANCE: f64 = 1e-6;

/// A probability vector over symbols `0..k`.
///
/// Entries are nonnegative and sum to one up to floating point rounding.
/// Zero entries are kept so that symbol indices stay stable.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    probs: Vec<f64>,
}

impl Distribution {
    /// Validates `probs` and renormalizes by the computed total.
    ///
    /// Inputs whose sum is more than `1e-6` away from one are rejected
    /// instead of renormalized.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        for (index, &value) in probs.iter().enumerate() {
            if !(value >= 0.0) || !value.is_finite() {
                return Err(Error::NegativeEntry { index, value });
            }
        }
        let sum = compensated_sum(probs.iter().copied());
        if (sum - 1.0).abs() > SUM_REJECT_TOLERANCE {
            return Err(Error::SumOutOfTolerance { sum });
        }
        // Already normalized to rounding: dividing again would perturb the
        // entries and break bit-exact reloads.
        let probs = if (sum - 1.0).abs() <= f64::EPSILON * probs.len() as f64 {
            probs
        } else {
            probs.into_iter().map(|p| p / sum).collect()
        };
        Ok(Self { probs })
    }

    /// Normalizes nonnegative weights into a distribution.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        for (index, &value) in weights.iter().enumerate() {
            if !(value >= 0.0) || !value.is_finite() {
                return Err(Error::NegativeEntry { index, value });
            }
        }
        let total = compensated_sum(weights.iter().copied());
        if !(total > 0.0) {
            return Err(Error::SumOutOfTolerance { sum: total });
        }
        Self::new(weights.iter().map(|w| w / total).collect())
    }

    pub fn uniform(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::EmptyDistribution);
        }
        Ok(Self {
            probs: vec![1.0 / k as f64; k],
        })
    }

    /// All mass on symbol 0 of a `k`-symbol alphabet.
    pub fn point_mass(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::EmptyDistribution);
        }
        let mut probs = vec![0.0; k];
        probs[0] = 1.0;
        Ok(Self { probs })
    }

    /// Number of stored symbols, including zero-probability ones.
    pub fn k(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Number of symbols with positive probability.
    pub fn support_size(&self) -> usize {
        self.probs.iter().filter(|&&p| p > 0.0).count()
    }

    pub fn max_prob(&self) -> f64 {
        self.probs.iter().copied().fold(0.0, f64::max)
    }

    /// `sum_x p_x^alpha`, summed in descending-probability order with
    /// compensation. Zero entries contribute nothing.
    ///
    /// Panics if `alpha` is not a positive finite number.
    pub fn power_sum(&self, alpha: f64) -> f64 {
        assert!(
            alpha > 0.0 && alpha.is_finite(),
            "power sum order must be positive, got {alpha}"
        );
        let mut sorted: Vec<f64> = self.probs.iter().copied().filter(|&p| p > 0.0).collect();
        sorted.sort_unstable_by(|a, b| b.total_cmp(a));
        compensated_sum(sorted.into_iter().map(|p| p.powf(alpha)))
    }

    /// Rényi entropy of order `alpha` in nats.
    pub fn renyi_entropy(&self, alpha: f64) -> Result<f64> {
        check_alpha(alpha)?;
        Ok(self.power_sum(alpha).ln() / (1.0 - alpha))
    }
}

/// Rejects non-positive, non-finite and unit orders.
pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidAlpha(alpha));
    }
    if alpha == 1.0 {
        return Err(Error::AlphaIsOne);
    }
    Ok(())
}

pub fn validate_distribution(probs: &[f64]) -> Result<Distribution> {
    Distribution::new(probs.to_vec())
}

pub fn exact_power_sum(p: &Distribution, alpha: f64) -> f64 {
    p.power_sum(alpha)
}

pub fn exact_renyi_entropy(p: &Distribution, alpha: f64) -> Result<f64> {
    p.renyi_entropy(alpha)
}
