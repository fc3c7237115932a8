//! Falling powers of Poisson variables are unbiased for powers of the mean,
//! which is what makes the bias-corrected estimator unbiased.

use renyi::falling_power;
use renyi::sampling::{poisson_draw, RngStream};

fn main() {
    let mut rng = RngStream::new(5, 0);
    let draws = 1_000_000;
    for lambda in [0.5, 2.0, 10.0] {
        let xs: Vec<u64> = (0..draws).map(|_| poisson_draw(lambda, &mut rng)).collect();
        for r in 1..=4u32 {
            let mean = xs.iter().map(|&x| falling_power(x, r)).sum::<f64>() / draws as f64;
            println!(
                "lambda = {lambda:>4}, r = {r}: mean falling power {mean:>12.4}, lambda^r {:>12.4}",
                f64::powi(lambda, r as i32)
            );
        }
    }
}
