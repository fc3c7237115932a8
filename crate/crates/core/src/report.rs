//! Human-readable two-point certificates.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::hardness::{
    heavy_element_pair, lecam_certificate, matched_moment_distributions, newton_girard_vectors,
    product_sample_floor, scaled_pair_alpha_lt1, two_point_integer_pair, CertificateMode, Construction,
    HardInstance, LeCamCertificate,
};

impl FromStr for Construction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().replace('-', "_").as_str() {
            "two_point" | "two_point_integer" => Ok(Construction::TwoPointInteger),
            "matched" | "matched_moments" => Ok(Construction::MatchedMoments),
            "scaled" | "matched_moments_scaled" => Ok(Construction::MatchedMomentsScaled),
            "heavy" | "heavy_element" => Ok(Construction::HeavyElement),
            other => Err(Error::Parse(format!(
                "unknown construction {other:?}, expected two_point, matched, scaled or heavy"
            ))),
        }
    }
}

/// Parameters of a certificate request. Fields a construction does not use
/// are ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct CertificateArgs {
    pub construction: Construction,
    pub k: usize,
    pub alpha: f64,
    /// Perturbation size; `None` picks the default for moment matching.
    pub delta: Option<f64>,
    /// Matching order for the moment-matched constructions.
    pub order: usize,
    /// Tail exponent for the scaled construction.
    pub beta: f64,
    pub n: u64,
    pub mode: CertificateMode,
    pub epsilon: f64,
}

impl CertificateArgs {
    pub fn two_point(k: usize, alpha: f64, delta: f64, n: u64) -> Self {
        Self {
            construction: Construction::TwoPointInteger,
            k,
            alpha,
            delta: Some(delta),
            order: 2,
            beta: 0.5,
            n,
            mode: CertificateMode::Product,
            epsilon: 0.1,
        }
    }

    pub fn instance(&self) -> Result<HardInstance> {
        match self.construction {
            Construction::TwoPointInteger => {
                let delta = self
                    .delta
                    .ok_or_else(|| Error::Config("the two-point construction needs --delta".into()))?;
                two_point_integer_pair(self.k, self.alpha, delta)
            }
            Construction::MatchedMoments => {
                matched_moment_distributions(&newton_girard_vectors(self.order, self.delta)?, self.k, self.alpha)
            }
            Construction::MatchedMomentsScaled => scaled_pair_alpha_lt1(
                &newton_girard_vectors(self.order, self.delta)?,
                self.k,
                self.alpha,
                self.beta,
            ),
            Construction::HeavyElement => {
                let delta = self
                    .delta
                    .ok_or_else(|| Error::Config("the heavy-element construction needs --delta".into()))?;
                heavy_element_pair(self.k, self.alpha, delta, self.n)
            }
            Construction::Custom => Err(Error::Config("custom pairs are built from distribution files".into())),
        }
    }
}

/// Builds the instance, certifies it and renders the report.
///
/// A profile-mode precondition failure is returned with a remediation hint.
pub fn emit_certificate(args: &CertificateArgs) -> Result<String> {
    let inst = args.instance()?;
    let cert = lecam_certificate(&inst, args.n, args.mode, args.epsilon).map_err(|e| match e {
        Error::PreconditionViolated(msg) => Error::PreconditionViolated(format!(
            "{msg}. Hint: profile mode needs every probability below epsilon/(40 n); \
             raise k or epsilon, lower n, or use --mode product"
        )),
        other => other,
    })?;
    render_certificate(&inst, &cert)
}

pub fn render_certificate(inst: &HardInstance, cert: &LeCamCertificate) -> Result<String> {
    let mut out = String::new();
    let _ = writeln!(out, "two-point certificate");
    let _ = writeln!(out, "  construction      {}", inst.construction);
    let _ = writeln!(out, "  alpha             {}", inst.alpha);
    let _ = writeln!(out, "  support           {}", inst.p.k());
    let _ = writeln!(out, "  H(p)              {:.10} nats", inst.p.renyi_entropy(inst.alpha)?);
    let _ = writeln!(out, "  H(q)              {:.10} nats", inst.q.renyi_entropy(inst.alpha)?);
    let _ = writeln!(out, "  entropy gap       {:.6e} nats", cert.gap);
    let _ = writeln!(out, "  hellinger^2       {:.6e}", cert.hellinger_sq);
    let _ = writeln!(out, "  n                 {}", cert.n);
    let _ = writeln!(out, "  mode              {}", cert.mode);
    let _ = writeln!(out, "  distance bound    {:.6e}", cert.distance_bound);
    let _ = writeln!(out, "  risk lower bound  {:.6}", cert.risk_lower_bound);
    if cert.is_vacuous() {
        let _ = writeln!(
            out,
            "  status            VACUOUS (zero gap or distance bound reaches 1; nothing is certified)"
        );
        return Ok(out);
    }
    let _ = writeln!(
        out,
        "  claim             any estimator with accuracy below {:.6e} nats fails with probability >= {:.6} on p or q",
        cert.gap / 2.0,
        cert.risk_lower_bound
    );
    match product_sample_floor(inst, 0.5)? {
        Some(u64::MAX) => {}
        Some(floor) => {
            let _ = writeln!(
                out,
                "  sample floor      n <= {floor} keeps the product distance <= 1/2 (failure probability >= 1/4)"
            );
        }
        None => {
            let _ = writeln!(out, "  sample floor      none (a single sample already separates p and q)");
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::Distribution;

    #[test]
    fn two_point_report() {
        let text = emit_certificate(&CertificateArgs::two_point(10_000, 2.0, 0.1, 50)).unwrap();
        assert!(text.contains("two_point_integer"));
        assert!(text.contains("claim"));
        assert!(text.contains("sample floor"));
    }

    #[test]
    fn degenerate_report_is_flagged() {
        let p = Distribution::uniform(5).unwrap();
        let inst = HardInstance::new(p.clone(), p, 2.0, Construction::Custom).unwrap();
        let cert = lecam_certificate(&inst, 10, CertificateMode::Product, 0.1).unwrap();
        assert!(render_certificate(&inst, &cert).unwrap().contains("VACUOUS"));
    }

    #[test]
    fn profile_precondition_has_hint() {
        let args = CertificateArgs {
            mode: CertificateMode::Profile,
            ..CertificateArgs::two_point(10_000, 2.0, 0.1, 50)
        };
        match emit_certificate(&args) {
            Err(Error::PreconditionViolated(msg)) => assert!(msg.contains("Hint")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn construction_names() {
        assert_eq!("two-point".parse::<Construction>().unwrap(), Construction::TwoPointInteger);
        assert_eq!("scaled".parse::<Construction>().unwrap(), Construction::MatchedMomentsScaled);
        assert!("other".parse::<Construction>().is_err());
    }
}
