//! The power-sum to entropy transform and closed-form Zipf asymptotics.

use crate::distribution::check_alpha;
use crate::error::{Error, Result};

/// An estimated power sum together with the entropy it implies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyEstimate {
    /// Power sum after flooring; equals the raw estimate unless `clamped`.
    pub power_sum: f64,
    /// Rényi entropy in nats.
    pub entropy: f64,
    pub alpha: f64,
    /// The raw power-sum estimate was below the floor and was replaced by it.
    pub clamped: bool,
}

impl EntropyEstimate {
    pub fn entropy_in(&self, base: LogBase) -> f64 {
        base.from_nats(self.entropy)
    }
}

/// Output base for reported entropies. Everything is computed in nats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogBase {
    #[default]
    E,
    Two,
}

impl LogBase {
    pub fn from_nats(self, nats: f64) -> f64 {
        match self {
            LogBase::E => nats,
            LogBase::Two => nats / std::f64::consts::LN_2,
        }
    }
}

impl std::str::FromStr for LogBase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "e" => Ok(LogBase::E),
            "2" => Ok(LogBase::Two),
            other => Err(Error::Parse(format!("unknown log base {other:?}, expected e or 2"))),
        }
    }
}

/// Default floor for a power-sum estimate built from `n` samples: `(1/n)^alpha`.
pub fn default_floor(n: f64, alpha: f64) -> f64 {
    n.recip().powf(alpha)
}

/// Converts a power-sum estimate into `log(P)/(1-alpha)`, substituting
/// `floor` when the estimate falls below it.
pub fn entropy_from_power_sum(power_sum_estimate: f64, alpha: f64, floor: f64) -> Result<EntropyEstimate> {
    check_alpha(alpha)?;
    if !(floor > 0.0) {
        return Err(Error::InvalidParameters(format!("power-sum floor must be positive, got {floor}")));
    }
    let clamped = !(power_sum_estimate >= floor);
    let power_sum = if clamped { floor } else { power_sum_estimate };
    Ok(EntropyEstimate {
        power_sum,
        entropy: power_sum.ln() / (1.0 - alpha),
        alpha,
        clamped,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Below,
    At,
    Above,
}

fn side(x: f64) -> Side {
    const EPS: f64 = 1e-12;
    if (x - 1.0).abs() <= EPS {
        Side::At
    } else if x < 1.0 {
        Side::Below
    } else {
        Side::Above
    }
}

/// Leading term `g(k)` of the Rényi entropy of the Zipf distribution with
/// exponent `beta` on `k` symbols, in nats.
///
/// The cell with `alpha*beta > 1` and `beta > 1` converges to a constant
/// that has no closed form here and is reported as [`Error::UnsupportedCell`].
pub fn zipf_leading_term(alpha: f64, beta: f64, k: u64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::InvalidParameters(format!("Zipf exponent must be positive, got {beta}")));
    }
    if k < 3 {
        return Err(Error::InvalidParameters("leading terms need k >= 3".into()));
    }
    let ln_k = (k as f64).ln();
    let ln_ln_k = ln_k.ln();
    let ab = alpha * beta;
    let value = match (side(ab), side(beta)) {
        (Side::Below, Side::Below) => ln_k,
        (Side::Below, _) => (1.0 - ab) / (1.0 - alpha) * ln_k,
        (_, Side::Below) => (alpha - ab) / (alpha - 1.0) * ln_k,
        // alpha*beta = 1 with beta = 1 forces alpha = 1, rejected above.
        (Side::At, Side::At) => 0.5 * ln_k,
        (Side::At, Side::Above) => ln_ln_k / (1.0 - alpha),
        (Side::Above, Side::At) => alpha / (alpha - 1.0) * ln_ln_k,
        (Side::Above, Side::Above) => return Err(Error::UnsupportedCell { alpha, beta }),
    };
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transform_examples() {
        let e = entropy_from_power_sum(0.25, 2.0, 1e-300).unwrap();
        assert!((e.entropy - 4f64.ln()).abs() < 1e-15);
        assert!(!e.clamped);

        let e = entropy_from_power_sum(0.0, 2.0, 1e-12).unwrap();
        assert!((e.entropy - 27.631021115928547).abs() < 1e-12);
        assert!(e.clamped);
        assert_eq!(e.power_sum, 1e-12);

        let e = entropy_from_power_sum(2.0, 0.5, 1e-12).unwrap();
        assert!((e.entropy - 2f64.ln() / 0.5).abs() < 1e-15);
        assert!(!e.clamped);
    }

    #[test]
    fn negative_and_nan_estimates_are_clamped() {
        assert!(entropy_from_power_sum(-0.3, 1.5, 1e-6).unwrap().clamped);
        assert!(entropy_from_power_sum(f64::NAN, 1.5, 1e-6).unwrap().clamped);
        assert!(entropy_from_power_sum(0.3, 1.5, 0.0).is_err());
        assert_eq!(entropy_from_power_sum(0.3, 1.0, 1e-6), Err(Error::AlphaIsOne));
    }

    #[test]
    fn base_two_output() {
        let e = entropy_from_power_sum(0.25, 2.0, 1e-300).unwrap();
        assert!((e.entropy_in(LogBase::Two) - 2.0).abs() < 1e-15);
        assert_eq!("2".parse::<LogBase>().unwrap(), LogBase::Two);
        assert!("10".parse::<LogBase>().is_err());
    }

    #[test]
    fn zipf_table_cells() {
        let k = 1_000_000;
        let ln_k: f64 = 13.815510557964274;
        let ln_ln_k = ln_k.ln();
        // alpha*beta > 1, beta = 1
        assert!((zipf_leading_term(2.0, 1.0, k).unwrap() - 5.251583828952022).abs() < 1e-12);
        // alpha*beta < 1, beta < 1
        assert!((zipf_leading_term(2.0, 0.25, k).unwrap() - ln_k).abs() < 1e-12);
        // alpha*beta = 1, beta > 1
        assert!((zipf_leading_term(0.5, 2.0, k).unwrap() - 2.0 * ln_ln_k).abs() < 1e-12);
        // alpha*beta < 1, beta = 1
        assert!((zipf_leading_term(0.5, 1.0, k).unwrap() - ln_k).abs() < 1e-12);
        // alpha*beta < 1, beta > 1
        assert!((zipf_leading_term(0.25, 2.0, k).unwrap() - 0.5 / 0.75 * ln_k).abs() < 1e-12);
        // alpha*beta = 1, beta < 1
        assert!((zipf_leading_term(2.0, 0.5, k).unwrap() - ln_k).abs() < 1e-12);
        // alpha*beta > 1, beta < 1
        assert!((zipf_leading_term(4.0, 0.5, k).unwrap() - 2.0 / 3.0 * ln_k).abs() < 1e-12);
        assert!(matches!(
            zipf_leading_term(2.0, 2.0, k),
            Err(Error::UnsupportedCell { .. })
        ));
    }
}
