//! Best uniform approximation of x^alpha on [0, 1]: errors, their decay in
//! the degree, and the equioscillation of the error curve.

use renyi::polyapprox::{estimator_polynomial, remez_best_approx};

fn main() -> renyi::Result<()> {
    let r = remez_best_approx(0.5, 1)?;
    println!(
        "sqrt(x) by a line: {:.6} + {:.6} x, error {:.6}, extrema {:?}",
        r.coeffs[0], r.coeffs[1], r.minimax_error, r.extremal_points
    );

    for alpha in [0.5, 1.5, 2.5] {
        println!("\nalpha = {alpha}");
        println!("{:>4}{:>14}{:>14}{:>12}", "d", "error", "error*d^2a", "iterations");
        for d in [2, 4, 8, 16, 32] {
            let r = remez_best_approx(alpha, d)?;
            println!(
                "{d:>4}{:>14.4e}{:>14.5}{:>12}",
                r.minimax_error,
                r.minimax_error * (d as f64).powf(2.0 * alpha),
                r.iterations
            );
        }
    }

    let q = estimator_polynomial(1.5, 6)?;
    println!("\nshifted degree-6 fit of x^1.5 (q(0) = 0), sup error {:.3e}", q.sup_error);
    for x in [0.0, 0.01, 0.1, 0.5, 1.0] {
        println!("  q({x:<4}) = {:>10.6}   x^1.5 = {:>10.6}", q.eval(x), f64::powf(x, 1.5));
    }
    Ok(())
}
