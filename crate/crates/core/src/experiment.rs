//! Monte Carlo experiments: for each (distribution, estimator, n) cell run
//! independent trials and summarize the entropy estimates as a CSV row.
//!
//! Every trial owns an RNG stream keyed by (distribution, n, trial), so the
//! output does not depend on the number of worker threads. Estimators in the
//! same cell see the same random streams, which makes their errors directly
//! comparable.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use rayon::prelude::*;

use crate::entropy::EntropyEstimate;
use crate::error::{Error, Result};
use crate::estimators::{Estimator, EstimatorConfig, EstimatorKind, SamplingMode, TauRule};
use crate::numeric::compensated_sum;
use crate::sampling::{make_distribution, parse_distribution, DistributionSpec, RngStream, Sampler};

pub const CSV_HEADER: &str =
    "distribution,k,alpha,estimator,n,trials,true_entropy,mean_estimate,std_estimate,mean_abs_error,clamp_fraction";

/// Stream id used to draw random (Dirichlet) distributions; disjoint from
/// every per-trial stream.
pub(crate) fn distribution_stream(index: usize) -> u64 {
    (1 << 63) | index as u64
}

fn trial_stream(dist: usize, n_index: usize, trial: usize) -> u64 {
    ((dist as u64) << 44) | ((n_index as u64) << 24) | trial as u64
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub distributions: Vec<DistributionSpec>,
    pub k: usize,
    pub alpha: f64,
    pub estimators: Vec<EstimatorConfig>,
    pub n_grid: Vec<u64>,
    pub trials: usize,
    pub seed: u64,
    pub output: Option<PathBuf>,
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
}

impl ExperimentConfig {
    /// The comparison-figure setup: six distributions on `k` symbols,
    /// `n = 1000, 2000, ..., 10000`, 100 trials.
    pub fn figure(k: usize, alpha: f64, kinds: &[EstimatorKind]) -> Self {
        Self {
            distributions: DistributionSpec::figure_set(k),
            k,
            alpha,
            estimators: kinds.iter().map(|&kind| EstimatorConfig::new(alpha, kind)).collect(),
            n_grid: (1..=10).map(|i| 1000 * i).collect(),
            trials: 100,
            seed: 0,
            output: None,
            workers: None,
        }
    }

    /// Parses flat `key = value` text (`#` starts a comment).
    pub fn parse(text: &str) -> Result<Self> {
        Self::from_map(&parse_key_values(text)?)
    }

    /// Builds a config from key-value pairs. Unknown keys are rejected.
    ///
    /// Keys: `distributions`, `k`, `alpha`, `estimators`, `n_grid`
    /// (`a,b,c` or `start:stop:step`), `trials`, `seed`, `output`, `workers`,
    /// `tau_rule`, `tau`, `degree`, `median_copies`, `sampling`.
    pub fn from_map(map: &BTreeMap<String, String>) -> Result<Self> {
        const KNOWN: [&str; 14] = [
            "distributions",
            "k",
            "alpha",
            "estimators",
            "n_grid",
            "trials",
            "seed",
            "output",
            "workers",
            "tau_rule",
            "tau",
            "degree",
            "median_copies",
            "sampling",
        ];
        if let Some(bad) = map.keys().find(|key| !KNOWN.contains(&key.as_str())) {
            return Err(Error::Config(format!("unknown key {bad:?}")));
        }
        let get = |key: &str| map.get(key).map(String::as_str);
        let k: usize = parse_value(get("k").unwrap_or("10000"), "k")?;
        let alpha: f64 = parse_value(get("alpha").unwrap_or("2"), "alpha")?;

        let distributions = match get("distributions") {
            None => DistributionSpec::figure_set(k),
            Some(list) => split_list(list)
                .map(|label| parse_distribution(label, k).map_err(config_error))
                .collect::<Result<_>>()?,
        };

        let tau_rule: TauRule = get("tau_rule").unwrap_or("experiment").parse().map_err(config_error)?;
        let sampling: SamplingMode = get("sampling").unwrap_or("fixed").parse().map_err(config_error)?;
        let median_copies: usize = parse_value(get("median_copies").unwrap_or("1"), "median_copies")?;
        let tau = get("tau").map(|v| parse_value::<f64>(v, "tau")).transpose()?;
        let degree = get("degree").map(|v| parse_value::<usize>(v, "degree")).transpose()?;
        let estimators = split_list(get("estimators").unwrap_or("empirical,bias_corrected"))
            .map(|name| {
                let kind: EstimatorKind = name.parse().map_err(config_error)?;
                Ok(EstimatorConfig {
                    tau,
                    degree,
                    ..EstimatorConfig::new(alpha, kind)
                        .with_tau_rule(tau_rule)
                        .with_sampling(sampling)
                        .with_median_copies(median_copies)
                })
            })
            .collect::<Result<_>>()?;

        let cfg = Self {
            distributions,
            k,
            alpha,
            estimators,
            n_grid: parse_grid(get("n_grid").unwrap_or("1000:10000:1000"))?,
            trials: parse_value(get("trials").unwrap_or("100"), "trials")?,
            seed: parse_value(get("seed").unwrap_or("0"), "seed")?,
            output: get("output").map(PathBuf::from),
            workers: get("workers").map(|v| parse_value(v, "workers")).transpose()?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.trials >= 1 << 24 {
            return Err(Error::Config("at most 2^24 - 1 trials per cell".into()));
        }
        if self.n_grid.is_empty() {
            return Err(Error::Config("n_grid must not be empty".into()));
        }
        if self.n_grid.windows(2).any(|w| w[0] >= w[1]) || self.n_grid[0] == 0 {
            return Err(Error::Config("n_grid must be positive and strictly increasing".into()));
        }
        if self.distributions.is_empty() || self.estimators.is_empty() {
            return Err(Error::Config("need at least one distribution and one estimator".into()));
        }
        if self.workers == Some(0) {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        for spec in &self.distributions {
            spec.validate().map_err(config_error)?;
        }
        for est in &self.estimators {
            est.validate().map_err(config_error)?;
            if est.alpha != self.alpha {
                return Err(Error::Config("every estimator must use the experiment's alpha".into()));
            }
        }
        Ok(())
    }
}

fn config_error(e: Error) -> Error {
    match e {
        Error::Config(_) => e,
        other => Error::Config(other.to_string()),
    }
}

fn parse_value<T: std::str::FromStr>(raw: &str, key: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    raw.trim()
        .parse()
        .map_err(|e| Error::Config(format!("bad value {raw:?} for {key}: {e}")))
}

fn split_list(list: &str) -> impl Iterator<Item = &str> {
    list.split(',').map(str::trim).filter(|s| !s.is_empty())
}

/// `a,b,c` or `start:stop:step` (inclusive).
pub fn parse_grid(raw: &str) -> Result<Vec<u64>> {
    let raw = raw.trim();
    if raw.contains(':') {
        let parts: Vec<u64> = raw
            .split(':')
            .map(|p| parse_value(p, "n_grid"))
            .collect::<Result<_>>()?;
        let [start, stop, step] = parts[..] else {
            return Err(Error::Config(format!("range {raw:?} must be start:stop:step")));
        };
        if step == 0 || start > stop {
            return Err(Error::Config(format!("empty or endless range {raw:?}")));
        }
        Ok((start..=stop).step_by(step as usize).collect())
    } else {
        split_list(raw).map(|p| parse_value(p, "n_grid")).collect()
    }
}

/// Parses `key = value` lines; blank lines and `#` comments are skipped.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub distribution: String,
    pub k: usize,
    pub alpha: f64,
    pub estimator: EstimatorKind,
    pub n: u64,
    pub trials: usize,
    pub true_entropy: f64,
    pub mean_estimate: f64,
    pub std_estimate: f64,
    pub mean_abs_error: f64,
    pub clamp_fraction: f64,
}

impl ExperimentRow {
    fn from_estimates(
        spec: &DistributionSpec,
        alpha: f64,
        estimator: EstimatorKind,
        n: u64,
        true_entropy: f64,
        estimates: &[EntropyEstimate],
    ) -> Self {
        let trials = estimates.len();
        let t = trials as f64;
        let mean = compensated_sum(estimates.iter().map(|e| e.entropy)) / t;
        let var = if trials > 1 {
            compensated_sum(estimates.iter().map(|e| (e.entropy - mean).powi(2))) / (t - 1.0)
        } else {
            0.0
        };
        Self {
            distribution: spec.label(),
            k: spec.k,
            alpha,
            estimator,
            n,
            trials,
            true_entropy,
            mean_estimate: mean,
            std_estimate: var.sqrt(),
            mean_abs_error: compensated_sum(estimates.iter().map(|e| (e.entropy - true_entropy).abs())) / t,
            clamp_fraction: estimates.iter().filter(|e| e.clamped).count() as f64 / t,
        }
    }

    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.distribution,
            self.k,
            fmt_float(self.alpha),
            self.estimator,
            self.n,
            self.trials,
            fmt_float(self.true_entropy),
            fmt_float(self.mean_estimate),
            fmt_float(self.std_estimate),
            fmt_float(self.mean_abs_error),
            fmt_float(self.clamp_fraction),
        )
    }
}

/// Twelve significant digits in scientific notation.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.11e}")
}

/// Runs every cell and returns rows sorted by (distribution, estimator, n).
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRow>> {
    cfg.validate()?;
    match cfg.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| Error::Config(format!("cannot start {w} workers: {e}")))?
            .install(|| run_cells(cfg)),
        None => run_cells(cfg),
    }
}

fn run_cells(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRow>> {
    let mut rows = Vec::new();
    for (di, spec) in cfg.distributions.iter().enumerate() {
        let mut dist_rng = RngStream::new(cfg.seed, distribution_stream(di));
        let p = make_distribution(spec, Some(&mut dist_rng))?;
        let true_entropy = p.renyi_entropy(cfg.alpha)?;
        let sampler = Sampler::new(&p);
        for est_cfg in &cfg.estimators {
            for (ni, &n) in cfg.n_grid.iter().enumerate() {
                let estimator = Estimator::new(est_cfg.clone(), n as f64)?;
                let estimates = (0..cfg.trials)
                    .into_par_iter()
                    .map(|t| {
                        let mut rng = RngStream::new(cfg.seed, trial_stream(di, ni, t));
                        estimator.run(&sampler, &mut rng)
                    })
                    .collect::<Result<Vec<_>>>()?;
                rows.push(ExperimentRow::from_estimates(
                    spec,
                    cfg.alpha,
                    est_cfg.kind,
                    n,
                    true_entropy,
                    &estimates,
                ));
            }
        }
    }
    rows.sort_by(|a, b| {
        (a.distribution.as_str(), a.estimator.label(), a.n).cmp(&(b.distribution.as_str(), b.estimator.label(), b.n))
    });
    Ok(rows)
}

pub fn to_csv(rows: &[ExperimentRow]) -> String {
    let mut out = String::with_capacity(128 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        let _ = writeln!(out, "{}", row.to_csv_line());
    }
    out
}

/// Runs the experiment, writes the CSV to `cfg.output` when set, and
/// returns the CSV text.
pub fn run_to_csv(cfg: &ExperimentConfig) -> Result<String> {
    let csv = to_csv(&run_experiment(cfg)?);
    if let Some(path) = &cfg.output {
        std::fs::write(path, &csv)?;
    }
    Ok(csv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ExperimentConfig {
        ExperimentConfig {
            distributions: vec![DistributionSpec::uniform(50), DistributionSpec::dirichlet(0.5, 50)],
            k: 50,
            alpha: 2.0,
            estimators: vec![
                EstimatorConfig::new(2.0, EstimatorKind::Empirical),
                EstimatorConfig::new(2.0, EstimatorKind::BiasCorrected),
            ],
            n_grid: vec![20, 40, 80],
            trials: 30,
            seed: 7,
            output: None,
            workers: None,
        }
    }

    #[test]
    fn config_file_round_trip() {
        let cfg = ExperimentConfig::parse(
            "# comparison\nk = 100\nalpha = 1.5\ndistributions = uniform, zipf-0.75\n\
             estimators = empirical, polynomial\nn_grid = 100:300:100\ntrials = 5\nseed = 3\nworkers = 2\n",
        )
        .unwrap();
        assert_eq!(cfg.n_grid, vec![100, 200, 300]);
        assert_eq!(cfg.distributions[1], DistributionSpec::zipf(0.75, 100));
        assert_eq!(cfg.estimators[1].kind, EstimatorKind::Polynomial);
        assert_eq!(cfg.workers, Some(2));

        let defaults = ExperimentConfig::parse("").unwrap();
        assert_eq!(defaults.distributions.len(), 6);
        assert_eq!(defaults.n_grid.len(), 10);
        assert_eq!(defaults.trials, 100);
    }

    #[test]
    fn config_errors() {
        for bad in [
            "colour = red",
            "trials = 0",
            "n_grid = 300, 200",
            "alpha = 2.5\nestimators = bias_corrected",
            "k = many",
            "just words",
        ] {
            assert!(matches!(ExperimentConfig::parse(bad), Err(Error::Config(_))), "{bad}");
        }
    }

    #[test]
    fn rows_are_sorted_and_complete() {
        let rows = run_experiment(&small()).unwrap();
        assert_eq!(rows.len(), 2 * 2 * 3);
        let keys: Vec<_> = rows
            .iter()
            .map(|r| (r.distribution.clone(), r.estimator.label(), r.n))
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        let csv = to_csv(&rows);
        assert!(csv.starts_with(CSV_HEADER));
        assert_eq!(csv.lines().count(), 13);
    }

    #[test]
    fn output_is_independent_of_worker_count() {
        let mut cfg = small();
        cfg.workers = Some(1);
        let one = to_csv(&run_experiment(&cfg).unwrap());
        cfg.workers = Some(4);
        let four = to_csv(&run_experiment(&cfg).unwrap());
        assert_eq!(one, four);
    }

    #[test]
    fn point_mass_single_trial() {
        let cfg = ExperimentConfig {
            distributions: vec![DistributionSpec::point_mass(10)],
            trials: 1,
            ..small()
        };
        for row in run_experiment(&cfg).unwrap() {
            assert_eq!(row.true_entropy, 0.0);
            assert_eq!(row.mean_estimate, 0.0);
            assert_eq!(row.std_estimate, 0.0);
        }
    }

    #[test]
    fn float_format_has_twelve_digits() {
        assert_eq!(fmt_float(std::f64::consts::LN_2), "6.93147180560e-1");
        assert_eq!(fmt_float(0.0), "0.00000000000e0");
    }
}
