//! Exact Rényi entropies of the canonical test distributions, and the
//! closed-form Zipf asymptotics next to the exact values.

use renyi::sampling::{make_distribution, DistributionSpec, RngStream};
use renyi::zipf_leading_term;

fn main() -> renyi::Result<()> {
    let k = 10_000;
    let mut rng = RngStream::new(1, 0);
    println!("{:<16}{:>10}{:>10}{:>10}{:>10}", "distribution", "H_0.5", "H_1.5", "H_2", "H_3");
    for spec in DistributionSpec::figure_set(k) {
        let p = make_distribution(&spec, Some(&mut rng))?;
        print!("{:<16}", spec.label());
        for alpha in [0.5, 1.5, 2.0, 3.0] {
            print!("{:>10.4}", p.renyi_entropy(alpha)?);
        }
        println!();
    }
    println!("ln k = {:.4}", (k as f64).ln());

    println!("\nZipf(1): exact H_2 against the leading term 2 ln ln k");
    for exp in 3..=6 {
        let k = 10usize.pow(exp);
        let p = make_distribution(&DistributionSpec::zipf(1.0, k), None)?;
        println!(
            "k = 1e{exp}: exact {:.4}  leading term {:.4}",
            p.renyi_entropy(2.0)?,
            zipf_leading_term(2.0, 1.0, k as u64)?
        );
    }
    Ok(())
}
