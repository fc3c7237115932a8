//! Lower-bound instances for entropy estimation and the two-point (Le Cam)
//! certificates that make them checkable.
//!
//! A [`HardInstance`] is a pair of distributions whose entropies differ by
//! `entropy_gap`. If the `n`-sample observations under `p` and `q` are within
//! total variation `b`, every estimator whose accuracy is better than half
//! the gap fails with probability at least `(1 - b) / 2` on one of them.

use std::fmt;

use crate::distribution::{check_alpha, Distribution};
use crate::error::{Error, Result};
use crate::numeric::{compensated_sum, is_integer, CompensatedSum};

const MOMENT_TOLERANCE: f64 = 1e-9;
const MAX_DELTA_HALVINGS: u32 = 200;
const PROFILE_MAX_ORDER: u32 = 200;
const PROFILE_RELATIVE_CUTOFF: f64 = 1e-18;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Construction {
    TwoPointInteger,
    MatchedMoments,
    MatchedMomentsScaled,
    HeavyElement,
    /// Built directly from two user-supplied distributions.
    Custom,
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Construction::TwoPointInteger => "two_point_integer",
            Construction::MatchedMoments => "matched_moments",
            Construction::MatchedMomentsScaled => "matched_moments_scaled",
            Construction::HeavyElement => "heavy_element",
            Construction::Custom => "custom",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HardInstance {
    pub p: Distribution,
    pub q: Distribution,
    /// `|H_alpha(p) - H_alpha(q)|` in nats.
    pub entropy_gap: f64,
    pub alpha: f64,
    pub construction: Construction,
}

impl HardInstance {
    /// Pairs two distributions, computing the gap from their entropies.
    pub fn new(p: Distribution, q: Distribution, alpha: f64, construction: Construction) -> Result<Self> {
        check_alpha(alpha)?;
        let entropy_gap = (p.renyi_entropy(alpha)? - q.renyi_entropy(alpha)?).abs();
        Ok(Self {
            p,
            q,
            entropy_gap,
            alpha,
            construction,
        })
    }

    /// True when the pair carries no information (`p == q` or zero gap).
    pub fn is_degenerate(&self) -> bool {
        self.entropy_gap == 0.0 || self.p == self.q
    }
}

/// `p` puts `k^(-(1 - 1/alpha))` on symbol 0 and spreads the rest uniformly;
/// `q` inflates symbol 0 by the factor `1 + delta`.
pub fn two_point_integer_pair(k: usize, alpha: f64, delta: f64) -> Result<HardInstance> {
    if !is_integer(alpha) || alpha < 2.0 {
        return Err(Error::NonIntegerAlpha(alpha));
    }
    if k < 2 {
        return Err(Error::InvalidParameters(format!("need k >= 2, got {k}")));
    }
    let head = (k as f64).powf(-(1.0 - 1.0 / alpha));
    if !(delta > 0.0) || (1.0 + delta) * head >= 1.0 {
        return Err(Error::InvalidDelta(format!(
            "delta = {delta} must be positive with (1 + delta) * {head} < 1"
        )));
    }
    let build = |first: f64| {
        let rest = (1.0 - first) / (k - 1) as f64;
        let mut probs = vec![rest; k];
        probs[0] = first;
        Distribution::new(probs)
    };
    HardInstance::new(build(head)?, build((1.0 + delta) * head)?, alpha, Construction::TwoPointInteger)
}

/// Vectors `x = (1, ..., d)` and `y`, the roots of `prod (z - i) - delta`.
///
/// Shifting only the constant term keeps the first `d - 1` power sums and
/// moves the `d`-th by exactly `d * delta`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentMatchedVectors {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub delta: f64,
    pub d: usize,
}

impl MomentMatchedVectors {
    /// `sum y_i^r - sum x_i^r`, accumulated with compensation.
    pub fn power_sum_gap(&self, r: f64) -> f64 {
        compensated_sum(self.x.iter().zip(&self.y).map(|(a, b)| b.powf(r) - a.powf(r)))
    }

    pub fn x_power_sum(&self, r: f64) -> f64 {
        compensated_sum(self.x.iter().map(|a| a.powf(r)))
    }

    pub fn y_power_sum(&self, r: f64) -> f64 {
        compensated_sum(self.y.iter().map(|b| b.powf(r)))
    }

    /// Checks the moment identities to `1e-9` relative accuracy.
    pub fn check(&self) -> Result<()> {
        if self.y.iter().any(|&v| !(v > 0.0)) {
            return Err(Error::InvalidParameters("roots must be strictly positive".into()));
        }
        for r in 1..=self.d {
            let scale = self.x_power_sum(r as f64);
            let expected = if r == self.d { self.d as f64 * self.delta } else { 0.0 };
            let gap = self.power_sum_gap(r as f64);
            if (gap - expected).abs() > MOMENT_TOLERANCE * scale {
                return Err(Error::InvalidParameters(format!(
                    "power sum of order {r} differs by {gap}, expected {expected}"
                )));
            }
        }
        Ok(())
    }
}

fn shifted_poly(z: f64, d: usize, delta: f64) -> f64 {
    (1..=d).map(|i| z - i as f64).product::<f64>() - delta
}

fn shifted_poly_derivative(z: f64, d: usize) -> f64 {
    (1..=d)
        .map(|skip| {
            (1..=d)
                .filter(|&i| i != skip)
                .map(|i| z - i as f64)
                .product::<f64>()
        })
        .sum()
}

/// Roots of `prod (z - i) - delta`, one per bracket `[i - 1/2, i + 1/2]`, or
/// `None` when some bracket has no sign change.
fn bracketed_roots(d: usize, delta: f64) -> Option<Vec<f64>> {
    let mut roots = Vec::with_capacity(d);
    for i in 1..=d {
        let (mut lo, mut hi) = (i as f64 - 0.5, i as f64 + 0.5);
        let (flo, fhi) = (shifted_poly(lo, d, delta), shifted_poly(hi, d, delta));
        if !(flo * fhi < 0.0) {
            return None;
        }
        let lo_negative = flo < 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if (shifted_poly(mid, d, delta) < 0.0) == lo_negative {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut z = 0.5 * (lo + hi);
        for _ in 0..3 {
            let slope = shifted_poly_derivative(z, d);
            if slope == 0.0 {
                break;
            }
            let next = z - shifted_poly(z, d, delta) / slope;
            if !(next >= i as f64 - 0.5 && next <= i as f64 + 0.5) {
                break;
            }
            z = next;
        }
        roots.push(z);
    }
    Some(roots)
}

/// Builds moment-matched vectors of order `d`.
///
/// With `delta = None` the perturbation is the largest `2^-j`, `j >= 0`, for
/// which every bracket around `1..=d` still holds a root.
pub fn newton_girard_vectors(d: usize, delta: Option<f64>) -> Result<MomentMatchedVectors> {
    if d < 2 {
        return Err(Error::InvalidParameters(format!("matching order must be at least 2, got {d}")));
    }
    let x: Vec<f64> = (1..=d).map(|i| i as f64).collect();
    let (delta, y) = match delta {
        Some(delta) => {
            if !(delta > 0.0) || !delta.is_finite() {
                return Err(Error::InvalidDelta(format!("delta must be positive, got {delta}")));
            }
            let y = bracketed_roots(d, delta).ok_or_else(|| {
                Error::InvalidDelta(format!("delta = {delta} is too large for order {d}"))
            })?;
            (delta, y)
        }
        None => (0..MAX_DELTA_HALVINGS)
            .map(|j| 0.5f64.powi(j as i32))
            .find_map(|delta| bracketed_roots(d, delta).map(|y| (delta, y)))
            .ok_or_else(|| Error::InvalidDelta(format!("no admissible delta for order {d}")))?,
    };
    Ok(MomentMatchedVectors { x, y, delta, d })
}

fn block_distribution(v: &[f64], k: usize, scale: f64, head: Option<f64>) -> Result<Distribution> {
    let l1 = compensated_sum(v.iter().copied());
    let mut probs = Vec::with_capacity(v.len() * k + 1);
    if let Some(h) = head {
        probs.push(h);
    }
    for &vi in v {
        let mass = scale * vi / (k as f64 * l1);
        probs.extend(std::iter::repeat_n(mass, k));
    }
    Distribution::new(probs)
}

/// `alpha / |alpha - 1| * |ln(||x||_alpha / ||y||_alpha)|` computed from the
/// difference of power sums to avoid cancellation.
fn norm_ratio_gap(v: &MomentMatchedVectors, alpha: f64) -> f64 {
    let sx = v.x_power_sum(alpha);
    let diff = -v.power_sum_gap(alpha);
    let sy = sx - diff;
    // ln(||x||/||y||) = ln(sx / sy) / alpha
    (diff / sy).ln_1p().abs() / (alpha - 1.0).abs()
}

/// `k` copies of each block: `p^x` puts `x_i / (k ||x||_1)` on each copy of
/// block `i`, and likewise `p^y`. Both have support `d k`.
pub fn matched_moment_distributions(v: &MomentMatchedVectors, k: usize, alpha: f64) -> Result<HardInstance> {
    check_alpha(alpha)?;
    if k == 0 {
        return Err(Error::InvalidParameters("need k >= 1".into()));
    }
    Ok(HardInstance {
        p: block_distribution(&v.x, k, 1.0, None)?,
        q: block_distribution(&v.y, k, 1.0, None)?,
        entropy_gap: norm_ratio_gap(v, alpha),
        alpha,
        construction: Construction::MatchedMoments,
    })
}

/// For `alpha < 1`: symbol 0 carries `1 - k^(-beta)` in both distributions
/// and the matched blocks share the remaining `k^(-beta)`.
pub fn scaled_pair_alpha_lt1(v: &MomentMatchedVectors, k: usize, alpha: f64, beta: f64) -> Result<HardInstance> {
    check_alpha(alpha)?;
    if alpha >= 1.0 {
        return Err(Error::InvalidParameters(format!("this construction needs alpha < 1, got {alpha}")));
    }
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::InvalidParameters(format!("beta must be positive, got {beta}")));
    }
    if alpha * (1.0 + beta) >= 1.0 {
        return Err(Error::BetaTooLarge(alpha * (1.0 + beta)));
    }
    if k == 0 {
        return Err(Error::InvalidParameters("need k >= 1".into()));
    }
    let kf = k as f64;
    let tail = kf.powf(-beta);
    let head = 1.0 - tail;
    let p = block_distribution(&v.x, k, tail, Some(head))?;
    let q = block_distribution(&v.y, k, tail, Some(head))?;

    // P(p) - P(q) = tail^alpha k^(1-alpha) (sum x^a - sum y^a) / ||x||_1^a
    let l1 = compensated_sum(v.x.iter().copied());
    let block_factor = tail.powf(alpha) * kf.powf(1.0 - alpha) / l1.powf(alpha);
    let p_sum = head.powf(alpha) + block_factor * v.x_power_sum(alpha);
    let diff = -block_factor * v.power_sum_gap(alpha);
    let q_sum = p_sum - diff;
    let entropy_gap = (diff / q_sum).ln_1p().abs() / (1.0 - alpha);
    Ok(HardInstance {
        p,
        q,
        entropy_gap,
        alpha,
        construction: Construction::MatchedMomentsScaled,
    })
}

/// One symbol with mass `1 - delta / n^(1 - alpha)` and `k` light symbols
/// sharing the rest equally.
pub fn heavy_element_instance(k: usize, alpha: f64, delta: f64, n: u64) -> Result<Distribution> {
    check_alpha(alpha)?;
    if alpha >= 1.0 {
        return Err(Error::InvalidParameters(format!("this construction needs alpha < 1, got {alpha}")));
    }
    if k == 0 || n == 0 {
        return Err(Error::InvalidParameters("need k >= 1 and n >= 1".into()));
    }
    let light = delta / (n as f64).powf(1.0 - alpha);
    if !(light > 0.0) || light >= 1.0 {
        return Err(Error::InvalidParameters(format!(
            "delta / n^(1 - alpha) = {light} must lie in (0, 1)"
        )));
    }
    let mut probs = vec![light / k as f64; k + 1];
    probs[0] = 1.0 - light;
    Distribution::new(probs)
}

/// The heavy-element distribution paired with the point mass on the same
/// alphabet; the light tail is what separates their entropies.
pub fn heavy_element_pair(k: usize, alpha: f64, delta: f64, n: u64) -> Result<HardInstance> {
    let p = heavy_element_instance(k, alpha, delta, n)?;
    let q = Distribution::point_mass(k + 1)?;
    HardInstance::new(p, q, alpha, Construction::HeavyElement)
}

/// `sum_x (sqrt(p_x) - sqrt(q_x))^2`.
pub fn hellinger_sq(p: &Distribution, q: &Distribution) -> Result<f64> {
    if p.k() != q.k() {
        return Err(Error::SupportMismatch(p.k(), q.k()));
    }
    Ok(compensated_sum(p.probs().iter().zip(q.probs()).map(|(&a, &b)| {
        let s = a.sqrt() + b.sqrt();
        if s == 0.0 {
            0.0
        } else {
            // (sqrt a - sqrt b)^2 = (a - b)^2 / (sqrt a + sqrt b)^2, free of cancellation
            let t = (a - b) / s;
            t * t
        }
    })))
}

/// `min(1, sqrt(1 - (1 - h^2/2)^n), sqrt(n h^2 / 2))`.
///
/// This follows the usual textbook chain but is not a valid upper bound on
/// the total variation of the `n`-fold products in general (for `n = 1`,
/// `p = (1/2 + t, 1/2 - t)` against its mirror has distance `2t` while the
/// chain gives about `sqrt(2) t`). Certificates use
/// [`tv_product_bound_sound`].
pub fn tv_product_bound(p: &Distribution, q: &Distribution, n: u64) -> Result<f64> {
    Ok(tv_chain_from_hellinger(hellinger_sq(p, q)?, n as f64))
}

/// The chain of [`tv_product_bound`] evaluated at a given squared Hellinger distance.
pub fn tv_chain_from_hellinger(h2: f64, n: f64) -> f64 {
    let stage1 = (-(n * (-h2 / 2.0).ln_1p()).exp_m1()).max(0.0).sqrt();
    let stage2 = (n * h2 / 2.0).sqrt();
    1f64.min(stage1).min(stage2)
}

/// `min(1, sqrt(1 - BC^(2n)), sqrt(n h^2))` with `BC = 1 - h^2/2` the
/// Bhattacharyya coefficient: a valid upper bound on `TV(p^n, q^n)`.
pub fn tv_product_bound_sound(p: &Distribution, q: &Distribution, n: u64) -> Result<f64> {
    let h2 = hellinger_sq(p, q)?;
    Ok(sound_bound_from_hellinger(h2, n as f64))
}

fn sound_bound_from_hellinger(h2: f64, n: f64) -> f64 {
    let stage1 = (-(2.0 * n * (-h2 / 2.0).ln_1p()).exp_m1()).max(0.0).sqrt();
    let stage2 = (n * h2).sqrt();
    1f64.min(stage1).min(stage2)
}

/// `epsilon / 2 + 5 sum_{a >= 1} n^a |P_a(p) - P_a(q)|`, a bound on the
/// distance between the profile distributions under Poissonized sampling.
///
/// Requires every probability to be at most `epsilon / (40 n)`. Differences
/// are computed per symbol as `(u - v) (u^(a-1) + u^(a-2) v + ... + v^(a-1))`
/// in the scaled variables `u = n p_x`, `v = n q_x`, so matched power sums
/// cancel exactly rather than through rounding.
pub fn profile_distance_bound(p: &Distribution, q: &Distribution, n: f64, epsilon: f64) -> Result<f64> {
    if p.k() != q.k() {
        return Err(Error::SupportMismatch(p.k(), q.k()));
    }
    if !(n > 0.0) || !(epsilon > 0.0) {
        return Err(Error::InvalidParameters(format!(
            "need n > 0 and epsilon > 0, got n={n}, epsilon={epsilon}"
        )));
    }
    let limit = epsilon / (40.0 * n);
    let largest = p.max_prob().max(q.max_prob());
    if largest > limit {
        return Err(Error::PreconditionViolated(format!(
            "largest probability {largest:.3e} exceeds epsilon/(40 n) = {limit:.3e}"
        )));
    }
    let u: Vec<f64> = p.probs().iter().map(|&a| n * a).collect();
    let v: Vec<f64> = q.probs().iter().map(|&b| n * b).collect();
    // s[x] = sum_{j < a} u^j v^(a-1-j); v_pow[x] = v^a
    let mut s = vec![1.0; u.len()];
    let mut v_pow = v.clone();
    let mut total = CompensatedSum::new();
    for a in 1..=PROFILE_MAX_ORDER {
        let term = compensated_sum((0..u.len()).map(|x| (u[x] - v[x]) * s[x])).abs();
        let acc = total.value();
        total.add(term);
        if acc > 0.0 && term < PROFILE_RELATIVE_CUTOFF * acc {
            break;
        }
        if a < PROFILE_MAX_ORDER {
            for x in 0..u.len() {
                s[x] = u[x] * s[x] + v_pow[x];
                v_pow[x] *= v[x];
            }
        }
    }
    Ok(epsilon / 2.0 + 5.0 * total.value())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateMode {
    /// Fixed-size i.i.d. samples; total variation of product measures.
    Product,
    /// Poissonized samples reduced to their profiles.
    Profile,
}

impl std::str::FromStr for CertificateMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "product" => Ok(CertificateMode::Product),
            "profile" => Ok(CertificateMode::Profile),
            other => Err(Error::Parse(format!("unknown certificate mode {other:?}, expected product or profile"))),
        }
    }
}

impl fmt::Display for CertificateMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            CertificateMode::Product => "product",
            CertificateMode::Profile => "profile",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LeCamCertificate {
    pub gap: f64,
    /// Upper bound on the distance between the two observation laws, in `[0, 1]`.
    pub distance_bound: f64,
    /// Lower bound on the larger of the two failure probabilities of any
    /// estimator whose accuracy is below `gap / 2`.
    pub risk_lower_bound: f64,
    pub n: u64,
    pub mode: CertificateMode,
    pub hellinger_sq: f64,
}

impl LeCamCertificate {
    pub fn is_vacuous(&self) -> bool {
        self.gap == 0.0 || self.distance_bound >= 1.0
    }
}

pub fn lecam_certificate(inst: &HardInstance, n: u64, mode: CertificateMode, epsilon: f64) -> Result<LeCamCertificate> {
    let h2 = hellinger_sq(&inst.p, &inst.q)?;
    let distance = match mode {
        CertificateMode::Product => sound_bound_from_hellinger(h2, n as f64),
        CertificateMode::Profile => profile_distance_bound(&inst.p, &inst.q, n as f64, epsilon)?.min(1.0),
    };
    Ok(LeCamCertificate {
        gap: inst.entropy_gap,
        distance_bound: distance,
        risk_lower_bound: (1.0 - distance) / 2.0,
        n,
        mode,
        hellinger_sq: h2,
    })
}

/// Largest `n` whose product-mode distance bound stays at or below `target`,
/// i.e. the sample size below which the instance certifiably confuses every
/// estimator. `None` when even one sample exceeds the target, `u64::MAX` when
/// the distributions coincide.
pub fn product_sample_floor(inst: &HardInstance, target: f64) -> Result<Option<u64>> {
    let h2 = hellinger_sq(&inst.p, &inst.q)?;
    if h2 == 0.0 {
        return Ok(Some(u64::MAX));
    }
    let ok = |n: u64| sound_bound_from_hellinger(h2, n as f64) <= target;
    if !ok(1) {
        return Ok(None);
    }
    let mut lo = 1u64;
    let mut hi = 2u64;
    while ok(hi) {
        lo = hi;
        if hi > u64::MAX / 2 {
            return Ok(Some(hi));
        }
        hi *= 2;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(lo))
}
