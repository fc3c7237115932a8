//! Lower-bound instances and their two-point certificates.

use renyi::hardness::{
    lecam_certificate, matched_moment_distributions, newton_girard_vectors, profile_distance_bound,
    CertificateMode,
};
use renyi::report::{emit_certificate, CertificateArgs};

fn main() -> renyi::Result<()> {
    // Integer order: perturb the heaviest symbol.
    print!("{}", emit_certificate(&CertificateArgs::two_point(10_000, 2.0, 0.05, 400))?);

    // Non-integer order: distributions whose first d-1 power sums agree.
    let v = newton_girard_vectors(4, None)?;
    println!("\nmoment-matched vectors, delta = {}", v.delta);
    println!("  x = {:?}\n  y = {:?}", v.x, v.y);
    for r in 1..=4 {
        println!("  sum y^{r} - sum x^{r} = {:.3e}", v.power_sum_gap(r as f64));
    }
    let inst = matched_moment_distributions(&v, 100_000, 1.5)?;
    println!("entropy gap at alpha = 1.5: {:.4e} nats", inst.entropy_gap);
    // The bound is epsilon/2 plus a power-sum term that only starts at order 4.
    let eps = 0.2;
    for n in [10u64, 100, 1000] {
        let bound = profile_distance_bound(&inst.p, &inst.q, n as f64, eps)?;
        let cert = lecam_certificate(&inst, n, CertificateMode::Profile, eps)?;
        println!(
            "  n = {n:>4}: bound - epsilon/2 = {:.3e}, risk >= {:.4}",
            bound - eps / 2.0,
            cert.risk_lower_bound
        );
    }
    Ok(())
}
