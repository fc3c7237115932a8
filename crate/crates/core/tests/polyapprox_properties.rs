//! Best-approximation quality of the polynomials used by the estimator.

use renyi::polyapprox::{estimator_polynomial, unit_interval_bound};
use renyi::{remez_best_approx, shift_to_zero};

const ORDERS: [f64; 3] = [0.5, 1.5, 2.5];

#[test]
fn half_power_linear_solution() {
    let r = remez_best_approx(0.5, 1).unwrap();
    assert!((r.minimax_error - 0.125).abs() <= 1e-9);
    for (got, want) in r.extremal_points.iter().zip([0.0, 0.25, 1.0]) {
        assert!((got - want).abs() <= 1e-6, "{:?}", r.extremal_points);
    }
    let q = shift_to_zero(&r).unwrap();
    assert_eq!(q.coeffs[0], 0.0);
    assert!((q.coeffs[1] - 1.0).abs() <= 1e-9);
    assert!(q.sup_error <= 0.25 + 1e-12);
}

#[test]
fn integer_orders_are_reproduced_exactly() {
    for alpha in [1.0, 2.0, 3.0] {
        for d in alpha as usize..=8 {
            let r = remez_best_approx(alpha, d).unwrap();
            assert!(r.is_exact() || r.minimax_error <= 1e-14, "alpha={alpha} d={d}");
            for i in 0..=100 {
                let x = i as f64 / 100.0;
                assert!((r.eval(x) - x.powf(alpha)).abs() <= 1e-13);
            }
        }
    }
}

#[test]
fn errors_equioscillate() {
    for alpha in ORDERS {
        for d in 1..=20 {
            let r = remez_best_approx(alpha, d).unwrap();
            assert_eq!(r.extremal_points.len(), d + 2);
            let e = &r.extremal_errors;
            assert!(e.windows(2).all(|w| w[0] * w[1] < 0.0), "alpha={alpha} d={d}: signs {e:?}");
            let hi = e.iter().fold(0f64, |m, v| m.max(v.abs()));
            let lo = e.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
            assert!((hi - lo) / hi <= 1e-8, "alpha={alpha} d={d}: spread {}", (hi - lo) / hi);
        }
    }
}

#[test]
fn error_decays_like_inverse_degree_power() {
    for alpha in ORDERS {
        let scaled: Vec<f64> = (2..=20)
            .map(|d| remez_best_approx(alpha, d).unwrap().minimax_error * (d as f64).powf(2.0 * alpha))
            .collect();
        let max = scaled.iter().cloned().fold(0.0, f64::max);
        let min = scaled.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(max.is_finite() && min > 0.0 && max / min < 10.0, "alpha={alpha}: {scaled:?}");
    }

    // Least-squares slope of log error against log degree.
    let pts: Vec<(f64, f64)> = (2..=20)
        .map(|d| ((d as f64).ln(), remez_best_approx(1.5, d).unwrap().minimax_error.ln()))
        .collect();
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let slope = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / pts.iter().map(|(x, _)| (x - mx).powi(2)).sum::<f64>();
    assert!(slope <= -2.0 * 1.5 + 0.3, "slope {slope}");
}

#[test]
fn shifted_polynomials_stay_within_certified_error() {
    for alpha in ORDERS {
        for d in [1usize, 3, 6, 12, 20] {
            let q = estimator_polynomial(alpha, d).unwrap();
            assert_eq!(q.coeffs[0], 0.0);
            assert_eq!(q.eval_monomial(0.0), 0.0);
            let worst = (0..=10_000)
                .map(|i| {
                    let x = i as f64 / 10_000.0;
                    (q.eval(x) - x.powf(alpha)).abs()
                })
                .fold(0.0, f64::max);
            assert!(worst <= q.sup_error + 1e-12, "alpha={alpha} d={d}: {worst} > {}", q.sup_error);
        }
    }
}

#[test]
fn coefficients_respect_the_unit_interval_bound() {
    for alpha in ORDERS {
        for d in 1..=20 {
            let q = estimator_polynomial(alpha, d).unwrap();
            assert!(q.max_coeff() <= unit_interval_bound(q.sup_error, d), "alpha={alpha} d={d}");
        }
    }
}
