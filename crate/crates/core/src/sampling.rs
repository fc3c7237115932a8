//! Test distributions, reproducible random streams and the three sampling
//! models used by the estimators: fixed-n i.i.d. draws, Poissonized draws,
//! and two independent Poissonized halves.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::weighted::WeightedAliasIndex;
use rand_distr::{Distribution as _, Gamma, Poisson};

use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::histogram::Histogram;

/// A reproducible random stream identified by `(seed, stream_id)`.
///
/// Backed by ChaCha8, whose 64-bit stream parameter gives independent
/// sequences for every stream id under one seed. A stream must be owned by
/// a single worker; hand out distinct ids to concurrent workers instead.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self { seed, stream_id, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// A fresh stream under the same seed.
    pub fn fork(&self, stream_id: u64) -> Self {
        Self::new(self.seed, stream_id)
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// Family of a canonical test distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistributionKind {
    Uniform,
    /// Half the symbols at `1/(2k)`, the other half at `3/(2k)`.
    Step,
    Zipf { beta: f64 },
    Dirichlet { concentration: f64 },
    /// All mass on symbol 0.
    PointMass,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistributionSpec {
    pub kind: DistributionKind,
    pub k: usize,
}

impl DistributionSpec {
    pub fn new(kind: DistributionKind, k: usize) -> Result<Self> {
        let spec = Self { kind, k };
        spec.validate()?;
        Ok(spec)
    }

    pub fn uniform(k: usize) -> Self {
        Self { kind: DistributionKind::Uniform, k }
    }

    pub fn step(k: usize) -> Self {
        Self { kind: DistributionKind::Step, k }
    }

    pub fn zipf(beta: f64, k: usize) -> Self {
        Self { kind: DistributionKind::Zipf { beta }, k }
    }

    pub fn dirichlet(concentration: f64, k: usize) -> Self {
        Self {
            kind: DistributionKind::Dirichlet { concentration },
            k,
        }
    }

    pub fn point_mass(k: usize) -> Self {
        Self { kind: DistributionKind::PointMass, k }
    }

    /// The six distributions of the comparison figures, all on `k` symbols.
    pub fn figure_set(k: usize) -> Vec<Self> {
        vec![
            Self::uniform(k),
            Self::step(k),
            Self::zipf(0.75, k),
            Self::zipf(0.5, k),
            Self::dirichlet(1.0, k),
            Self::dirichlet(0.5, k),
        ]
    }

    pub fn validate(&self) -> Result<()> {
        let min_k = if self.kind == DistributionKind::PointMass { 1 } else { 2 };
        if self.k < min_k {
            return Err(Error::InvalidSpec(format!("support size {} is too small", self.k)));
        }
        match self.kind {
            DistributionKind::Zipf { beta } if !(beta > 0.0 && beta.is_finite()) => {
                Err(Error::InvalidSpec(format!("Zipf exponent must be positive, got {beta}")))
            }
            DistributionKind::Dirichlet { concentration } if !(concentration > 0.0 && concentration.is_finite()) => {
                Err(Error::InvalidSpec(format!(
                    "Dirichlet concentration must be positive, got {concentration}"
                )))
            }
            _ => Ok(()),
        }
    }

    /// Short label without the support size, e.g. `zipf-0.75`.
    pub fn label(&self) -> String {
        match self.kind {
            DistributionKind::Uniform => "uniform".to_string(),
            DistributionKind::Step => "step".to_string(),
            DistributionKind::Zipf { beta } => format!("zipf-{beta}"),
            DistributionKind::Dirichlet { concentration } => format!("dirichlet-{concentration}"),
            DistributionKind::PointMass => "point".to_string(),
        }
    }

    pub fn needs_rng(&self) -> bool {
        matches!(self.kind, DistributionKind::Dirichlet { .. })
    }
}

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(&self.label())
    }
}

/// Parses a distribution label (`uniform`, `step`, `point`, `zipf-0.75`,
/// `dirichlet-0.5`) for a support of size `k`.
pub fn parse_distribution(label: &str, k: usize) -> Result<DistributionSpec> {
    let label = label.trim();
    let (name, param) = match label.split_once(['-', ':']) {
        Some((name, param)) => (name, Some(param)),
        None => (label, None),
    };
    let parse_param = |what: &str| -> Result<f64> {
        param
            .ok_or_else(|| Error::Parse(format!("{name} needs a {what}, e.g. {name}-0.5")))?
            .parse::<f64>()
            .map_err(|e| Error::Parse(format!("bad {what} in {label:?}: {e}")))
    };
    let kind = match name {
        "uniform" => DistributionKind::Uniform,
        "step" => DistributionKind::Step,
        "point" => DistributionKind::PointMass,
        "zipf" => DistributionKind::Zipf {
            beta: parse_param("exponent")?,
        },
        "dirichlet" => DistributionKind::Dirichlet {
            concentration: parse_param("concentration")?,
        },
        other => return Err(Error::Parse(format!("unknown distribution {other:?}"))),
    };
    DistributionSpec::new(kind, k)
}

impl FromStr for DistributionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_distribution(s, 2).map(|spec| spec.kind)
    }
}

/// Materializes `spec`. Dirichlet draws consume `rng`; every other kind is
/// deterministic and ignores it.
pub fn make_distribution(spec: &DistributionSpec, rng: Option<&mut RngStream>) -> Result<Distribution> {
    spec.validate()?;
    let k = spec.k;
    match spec.kind {
        DistributionKind::Uniform => Distribution::uniform(k),
        DistributionKind::PointMass => Distribution::point_mass(k),
        DistributionKind::Step => {
            let light = k.div_ceil(2);
            let scale = 2.0 * k as f64;
            let weights: Vec<f64> = (0..k)
                .map(|i| if i < light { 1.0 / scale } else { 3.0 / scale })
                .collect();
            Distribution::from_weights(&weights)
        }
        DistributionKind::Zipf { beta } => {
            let weights: Vec<f64> = (1..=k).map(|i| (i as f64).powf(-beta)).collect();
            Distribution::from_weights(&weights)
        }
        DistributionKind::Dirichlet { concentration } => {
            let rng = rng.ok_or(Error::MissingRng)?;
            let weights: Vec<f64> = (0..k).map(|_| gamma_draw(concentration, rng)).collect();
            Distribution::from_weights(&weights)
        }
    }
}

/// A Poisson(`lambda`) variate.
///
/// Panics if `lambda` is negative or not finite.
pub fn poisson_draw<R: Rng + ?Sized>(lambda: f64, rng: &mut R) -> u64 {
    assert!(
        lambda >= 0.0 && lambda.is_finite(),
        "Poisson mean must be finite and nonnegative, got {lambda}"
    );
    if lambda == 0.0 {
        return 0;
    }
    let poisson = Poisson::new(lambda).expect("mean checked above");
    poisson.sample(rng) as u64
}

/// A Gamma(`shape`, 1) variate.
pub fn gamma_draw<R: Rng + ?Sized>(shape: f64, rng: &mut R) -> f64 {
    let gamma = Gamma::new(shape, 1.0).expect("shape validated by caller");
    gamma.sample(rng)
}

/// Draws samples from one distribution. The alias table is built once, so
/// each fixed-n draw costs constant time.
#[derive(Debug, Clone)]
pub struct Sampler {
    probs: Vec<f64>,
    alias: WeightedAliasIndex<f64>,
}

impl Sampler {
    pub fn new(p: &Distribution) -> Self {
        let alias = WeightedAliasIndex::new(p.probs().to_vec()).expect("a valid distribution has positive total mass");
        Self {
            probs: p.probs().to_vec(),
            alias,
        }
    }

    pub fn k(&self) -> usize {
        self.probs.len()
    }

    /// Raw i.i.d. symbol draws.
    pub fn draw<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<usize> {
        (0..n).map(|_| self.alias.sample(rng)).collect()
    }

    /// Histogram of exactly `n` i.i.d. draws.
    pub fn sample_fixed<R: Rng + ?Sized>(&self, n: u64, rng: &mut R) -> Histogram {
        let mut dense = vec![0u64; self.probs.len()];
        for _ in 0..n {
            dense[self.alias.sample(rng)] += 1;
        }
        Histogram::from_dense(&dense)
    }

    /// Histogram of `N ~ Poisson(n)` draws, generated as independent
    /// `Poisson(n p_x)` multiplicities.
    pub fn sample_poissonized<R: Rng + ?Sized>(&self, n: f64, rng: &mut R) -> Histogram {
        let dense: Vec<u64> = self.probs.iter().map(|&p| poisson_draw(n * p, rng)).collect();
        Histogram::from_dense(&dense)
    }

    /// Two independent Poissonized histograms, each at rate `n`. The first
    /// is meant for selecting branches, the second for estimation.
    pub fn sample_split<R: Rng + ?Sized>(&self, n: f64, rng: &mut R) -> (Histogram, Histogram) {
        let first = self.sample_poissonized(n, rng);
        let second = self.sample_poissonized(n, rng);
        (first, second)
    }
}

pub fn sample_fixed(p: &Distribution, n: u64, rng: &mut RngStream) -> Histogram {
    Sampler::new(p).sample_fixed(n, rng)
}

pub fn sample_poissonized(p: &Distribution, n: f64, rng: &mut RngStream) -> Histogram {
    assert!(n > 0.0, "Poissonized sampling rate must be positive, got {n}");
    Sampler::new(p).sample_poissonized(n, rng)
}

pub fn sample_split(p: &Distribution, n: f64, rng: &mut RngStream) -> (Histogram, Histogram) {
    assert!(n > 0.0, "Poissonized sampling rate must be positive, got {n}");
    Sampler::new(p).sample_split(n, rng)
}
