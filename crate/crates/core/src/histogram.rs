//! Multiplicity counts of a sample and their profile.

use std::collections::BTreeMap;

/// Multiplicities `N_x` of the symbols observed in a sample.
///
/// Only symbols that occurred are stored, sorted by symbol index, so two
/// histograms built from the same multiset compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Histogram {
    counts: Vec<(usize, u64)>,
    total_draws: u64,
}

impl Histogram {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_samples(samples: &[usize]) -> Self {
        let mut map: BTreeMap<usize, u64> = BTreeMap::new();
        for &s in samples {
            *map.entry(s).or_insert(0) += 1;
        }
        Self::from_map(map)
    }

    /// Builds a histogram from a symbol-to-count map; zero counts are dropped.
    pub fn from_map(map: BTreeMap<usize, u64>) -> Self {
        let counts: Vec<(usize, u64)> = map.into_iter().filter(|&(_, c)| c > 0).collect();
        let total_draws = counts.iter().map(|&(_, c)| c).sum();
        Self {
            counts,
            total_draws,
        }
    }

    /// Builds a histogram from dense per-symbol counts indexed by symbol.
    pub fn from_dense(dense: &[u64]) -> Self {
        let counts: Vec<(usize, u64)> = dense
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c > 0)
            .map(|(s, &c)| (s, c))
            .collect();
        let total_draws = counts.iter().map(|&(_, c)| c).sum();
        Self {
            counts,
            total_draws,
        }
    }

    pub fn total_draws(&self) -> u64 {
        self.total_draws
    }

    /// Number of distinct observed symbols.
    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Multiplicity of `symbol`, zero if unseen.
    pub fn count(&self, symbol: usize) -> u64 {
        self.counts
            .binary_search_by_key(&symbol, |&(s, _)| s)
            .map(|i| self.counts[i].1)
            .unwrap_or(0)
    }

    /// `(symbol, multiplicity)` pairs in increasing symbol order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.counts.iter().copied()
    }

    pub fn multiplicities(&self) -> impl Iterator<Item = u64> + '_ {
        self.counts.iter().map(|&(_, c)| c)
    }

    pub fn profile(&self) -> Profile {
        profile_from_histogram(self)
    }
}

/// `phi[l]` is the number of symbols seen exactly `l` times.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Profile {
    phi: BTreeMap<u64, u64>,
}

impl Profile {
    pub fn get(&self, multiplicity: u64) -> u64 {
        self.phi.get(&multiplicity).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.phi.iter().map(|(&l, &c)| (l, c))
    }

    pub fn is_empty(&self) -> bool {
        self.phi.is_empty()
    }

    /// `sum_l l * phi[l]`, which equals the source histogram's draw count.
    pub fn total_draws(&self) -> u64 {
        self.phi.iter().map(|(&l, &c)| l * c).sum()
    }
}

pub fn histogram_from_samples(samples: &[usize]) -> Histogram {
    Histogram::from_samples(samples)
}

pub fn profile_from_histogram(h: &Histogram) -> Profile {
    let mut phi = BTreeMap::new();
    for c in h.multiplicities() {
        *phi.entry(c).or_insert(0) += 1;
    }
    Profile { phi }
}
