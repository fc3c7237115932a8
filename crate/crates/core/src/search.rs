//! Empirical sample complexity: the smallest `n` at which an estimator's
//! failure rate `Pr(|H_hat - H| > delta)` drops below `epsilon`.
//!
//! The search doubles `n` from `n_min` until the failure rate is below
//! `epsilon`, then bisects the last bracket down to `1/resolution` of its
//! upper end. Every `n` reuses the same per-trial streams (common random
//! numbers), which keeps the estimated failure curve close to monotone.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::estimators::{Estimator, EstimatorConfig};
use crate::experiment::distribution_stream;
use crate::sampling::{make_distribution, DistributionSpec, RngStream, Sampler};

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub spec: DistributionSpec,
    pub estimator: EstimatorConfig,
    pub delta: f64,
    pub epsilon: f64,
    /// Trials per evaluated `n`.
    pub trials: usize,
    pub seed: u64,
    pub n_min: u64,
    /// Largest `n` the search may evaluate.
    pub n_max: u64,
    /// Bisection stops once the bracket is narrower than `hi / resolution`.
    pub resolution: u64,
    pub workers: Option<usize>,
}

impl SearchConfig {
    pub fn new(spec: DistributionSpec, estimator: EstimatorConfig, delta: f64, epsilon: f64) -> Self {
        Self {
            spec,
            estimator,
            delta,
            epsilon,
            trials: 400,
            seed: 0,
            n_min: 16,
            n_max: 1 << 22,
            resolution: 64,
            workers: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.spec.validate()?;
        self.estimator.validate()?;
        for (name, v) in [("delta", self.delta), ("epsilon", self.epsilon)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::Config(format!("{name} must lie in (0, 1), got {v}")));
            }
        }
        if self.trials == 0 || self.n_min == 0 || self.n_min > self.n_max || self.resolution == 0 {
            return Err(Error::Config(
                "need trials >= 1, 1 <= n_min <= n_max and resolution >= 1".into(),
            ));
        }
        Ok(())
    }
}

/// Failure count at one sample size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub n: u64,
    pub failures: usize,
    pub trials: usize,
}

impl Evaluation {
    pub fn rate(&self) -> f64 {
        self.failures as f64 / self.trials as f64
    }

    pub fn wilson(&self) -> (f64, f64) {
        wilson_interval(self.failures, self.trials, 1.959963984540054)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub n_star: u64,
    /// Evaluation at `n_star`.
    pub at_n_star: Evaluation,
    /// Every evaluation in the order performed.
    pub evaluations: Vec<Evaluation>,
    pub true_entropy: f64,
}

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: usize, trials: usize, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

struct Runner<'a> {
    cfg: &'a SearchConfig,
    sampler: Sampler,
    true_entropy: f64,
    evaluations: Vec<Evaluation>,
}

impl Runner<'_> {
    fn evaluate(&mut self, n: u64) -> Result<Evaluation> {
        if let Some(e) = self.evaluations.iter().find(|e| e.n == n) {
            return Ok(*e);
        }
        let estimator = Estimator::new(self.cfg.estimator.clone(), n as f64)?;
        let failed = (0..self.cfg.trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = RngStream::new(self.cfg.seed, t as u64);
                let est = estimator.run(&self.sampler, &mut rng)?;
                Ok((est.entropy - self.true_entropy).abs() > self.cfg.delta)
            })
            .collect::<Result<Vec<bool>>>()?;
        let eval = Evaluation {
            n,
            failures: failed.iter().filter(|&&f| f).count(),
            trials: self.cfg.trials,
        };
        self.evaluations.push(eval);
        Ok(eval)
    }

    fn passes(&mut self, n: u64) -> Result<bool> {
        Ok(self.evaluate(n)?.rate() < self.cfg.epsilon)
    }
}

pub fn sample_complexity_search(cfg: &SearchConfig) -> Result<SearchResult> {
    cfg.validate()?;
    match cfg.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| Error::Config(format!("cannot start {w} workers: {e}")))?
            .install(|| search(cfg)),
        None => search(cfg),
    }
}

fn search(cfg: &SearchConfig) -> Result<SearchResult> {
    let mut dist_rng = RngStream::new(cfg.seed, distribution_stream(0));
    let p = make_distribution(&cfg.spec, Some(&mut dist_rng))?;
    let mut runner = Runner {
        cfg,
        sampler: Sampler::new(&p),
        true_entropy: p.renyi_entropy(cfg.estimator.alpha)?,
        evaluations: Vec::new(),
    };

    let mut hi = cfg.n_min;
    let mut lo = None;
    while !runner.passes(hi)? {
        if hi >= cfg.n_max {
            let last = runner.evaluate(hi)?;
            return Err(Error::BudgetExceeded {
                n: hi,
                failure_rate: last.rate(),
            });
        }
        lo = Some(hi);
        hi = (hi * 2).min(cfg.n_max);
    }
    if let Some(mut lo) = lo {
        while hi - lo > (hi / cfg.resolution).max(1) {
            let mid = lo + (hi - lo) / 2;
            if runner.passes(mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }
    let at_n_star = runner.evaluate(hi)?;
    Ok(SearchResult {
        n_star: hi,
        at_n_star,
        evaluations: runner.evaluations,
        true_entropy: runner.true_entropy,
    })
}
