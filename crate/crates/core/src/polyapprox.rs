//! Best uniform polynomial approximation of `x^alpha` on `[0, 1]`.
//!
//! The Remez exchange runs in the Chebyshev basis of `t = 2x - 1`, where the
//! alternation system stays well conditioned for every supported degree.
//! Monomial coefficients in `x`, which the polynomial estimator consumes, are
//! derived once the iteration has converged.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::numeric::is_integer;

pub const MAX_DEGREE: usize = 60;
const MAX_ITERATIONS: usize = 50;
const GRID_POINTS: usize = 4096;
const RELATIVE_TOLERANCE: f64 = 1e-10;

/// Output of the exchange: the unshifted best approximation.
#[derive(Debug, Clone, PartialEq)]
pub struct RemezApprox {
    pub alpha: f64,
    pub degree: usize,
    /// Monomial coefficients `a_0..a_d` in `x`.
    pub coeffs: Vec<f64>,
    /// Coefficients of `T_0..T_d` evaluated at `2x - 1`.
    pub cheb: Vec<f64>,
    /// Largest `|p(x) - x^alpha|` over the located extrema.
    pub minimax_error: f64,
    /// The `d + 2` alternation points, ascending. Empty when exact.
    pub extremal_points: Vec<f64>,
    /// Signed error `p(x) - x^alpha` at each alternation point.
    pub extremal_errors: Vec<f64>,
    pub iterations: usize,
}

impl RemezApprox {
    pub fn eval(&self, x: f64) -> f64 {
        clenshaw(&self.cheb, 2.0 * x - 1.0)
    }

    pub fn is_exact(&self) -> bool {
        self.minimax_error == 0.0
    }
}

/// A best approximation shifted so that `q(0) = 0`, ready for the estimator.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorPolynomial {
    pub alpha: f64,
    pub degree: usize,
    /// `a_0..a_d` with `a_0 = 0`.
    pub coeffs: Vec<f64>,
    pub cheb: Vec<f64>,
    /// Certified `max |q(x) - x^alpha|` on `[0, 1]`: twice the minimax error.
    pub sup_error: f64,
    pub minimax_error: f64,
    pub equioscillation_points: Vec<f64>,
}

impl EstimatorPolynomial {
    /// Evaluates `q(x)` through the Chebyshev form.
    pub fn eval(&self, x: f64) -> f64 {
        clenshaw(&self.cheb, 2.0 * x - 1.0)
    }

    /// Evaluates `q(x)` from the monomial coefficients (Horner).
    pub fn eval_monomial(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &a| acc * x + a)
    }

    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, a| m.max(a.abs()))
    }

    /// `(1 + sup_error) (sqrt(2) + 1)^d`, the coefficient bound for a
    /// polynomial bounded on `[-1, 1]`. See [`markov_bound`].
    pub fn markov_bound(&self) -> f64 {
        markov_bound(self.sup_error, self.degree)
    }

    /// `(1 + sup_error) (sqrt(2) + 1)^(2d)`, the coefficient bound that holds
    /// for a polynomial bounded only on `[0, 1]`.
    pub fn unit_interval_bound(&self) -> f64 {
        unit_interval_bound(self.sup_error, self.degree)
    }

    pub fn check_degree(&self) -> Result<()> {
        if self.coeffs.len() != self.degree + 1 {
            return Err(Error::DegreeMismatch {
                degree: self.degree,
                coeffs: self.coeffs.len(),
            });
        }
        Ok(())
    }
}

/// Markov's coefficient bound `(1 + sup_error) (sqrt(2) + 1)^d`.
///
/// This bounds monomial coefficients of a polynomial that is bounded on
/// `[-1, 1]`. The polynomials built here are only bounded on `[0, 1]`, where
/// the bound can fail: the shifted Chebyshev polynomial `T_d(2x - 1)` has
/// leading coefficient `2^(2d - 1)`. Use [`unit_interval_bound`] for a bound
/// that always holds.
pub fn markov_bound(sup_error: f64, degree: usize) -> f64 {
    (1.0 + sup_error) * (std::f64::consts::SQRT_2 + 1.0).powi(degree as i32)
}

/// `(1 + sup_error) (sqrt(2) + 1)^(2d)`: Markov's bound transported to
/// `[0, 1]` through `x = (1 + t) / 2`.
pub fn unit_interval_bound(sup_error: f64, degree: usize) -> f64 {
    (1.0 + sup_error) * (3.0 + 2.0 * std::f64::consts::SQRT_2).powi(degree as i32)
}

fn clenshaw(cheb: &[f64], t: f64) -> f64 {
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for &c in cheb.iter().skip(1).rev() {
        let b0 = 2.0 * t * b1 - b2 + c;
        b2 = b1;
        b1 = b0;
    }
    t * b1 - b2 + cheb.first().copied().unwrap_or(0.0)
}

/// `T_j(t)` for `j = 0..=d`.
fn chebyshev_row(t: f64, d: usize) -> Vec<f64> {
    let mut row = Vec::with_capacity(d + 1);
    row.push(1.0);
    if d >= 1 {
        row.push(t);
    }
    for j in 2..=d {
        let next = 2.0 * t * row[j - 1] - row[j - 2];
        row.push(next);
    }
    row
}

/// Monomial coefficients in `x` of `sum_j c_j T_j(2x - 1)`.
fn cheb_to_monomial(cheb: &[f64]) -> Vec<f64> {
    let d = cheb.len() - 1;
    let mut out = vec![0.0; d + 1];
    let mut prev: Vec<f64> = vec![1.0];
    let mut curr: Vec<f64> = vec![-1.0, 2.0];
    out[0] += cheb[0];
    if d >= 1 {
        for (o, c) in out.iter_mut().zip(&curr) {
            *o += cheb[1] * c;
        }
    }
    for &cj in cheb.iter().skip(2) {
        // T_{j+1} = 2 (2x - 1) T_j - T_{j-1}
        let mut next = vec![0.0; curr.len() + 1];
        for (i, &c) in curr.iter().enumerate() {
            next[i + 1] += 4.0 * c;
            next[i] -= 2.0 * c;
        }
        for (i, &c) in prev.iter().enumerate() {
            next[i] -= c;
        }
        for (o, c) in out.iter_mut().zip(&next) {
            *o += cj * c;
        }
        prev = std::mem::replace(&mut curr, next);
    }
    out
}

/// Chebyshev coefficients (in `t = 2x - 1`) of the monomial polynomial `sum_m a_m x^m`.
fn monomial_to_cheb(coeffs: &[f64]) -> Vec<f64> {
    let d = coeffs.len() - 1;
    // power of (t + 1) / 2 in the Chebyshev basis, starting from 1
    let mut power = vec![0.0; d + 1];
    power[0] = 1.0;
    let mut out = vec![0.0; d + 1];
    for (m, &a) in coeffs.iter().enumerate() {
        if m > 0 {
            // multiply by (t + 1) / 2; t T_0 = T_1, t T_i = (T_{i+1} + T_{i-1}) / 2
            let mut times_t = vec![0.0; d + 1];
            for (i, &v) in power.iter().enumerate() {
                if v == 0.0 {
                    continue;
                }
                if i == 0 {
                    times_t[1] += v;
                } else {
                    times_t[i - 1] += 0.5 * v;
                    if i < d {
                        times_t[i + 1] += 0.5 * v;
                    }
                }
            }
            for (p, t) in power.iter_mut().zip(&times_t) {
                *p = 0.5 * (*p + t);
            }
        }
        for (o, p) in out.iter_mut().zip(&power) {
            *o += a * p;
        }
    }
    out
}

/// Grid clustered toward both endpoints, including 0 and 1.
fn cosine_grid(points: usize) -> Vec<f64> {
    let last = (points - 1) as f64;
    (0..points)
        .map(|i| 0.5 * (1.0 - (std::f64::consts::PI * i as f64 / last).cos()))
        .map(|x: f64| x.clamp(0.0, 1.0))
        .collect()
}

struct Extremum {
    x: f64,
    err: f64,
}

struct ErrorCurve<'a> {
    cheb: &'a [f64],
    alpha: f64,
}

impl ErrorCurve<'_> {
    fn at(&self, x: f64) -> f64 {
        clenshaw(self.cheb, 2.0 * x - 1.0) - x.powf(self.alpha)
    }

    /// Maximizes `sign * e(x)` on `[a, b]` by golden-section search.
    fn refine(&self, a: f64, b: f64, sign: f64) -> Extremum {
        const INV_PHI: f64 = 0.618_033_988_749_894_9;
        let f = |x: f64| sign * self.at(x);
        let (mut lo, mut hi) = (a, b);
        let mut x1 = hi - INV_PHI * (hi - lo);
        let mut x2 = lo + INV_PHI * (hi - lo);
        let (mut f1, mut f2) = (f(x1), f(x2));
        for _ in 0..200 {
            if hi - lo <= 1e-15 * hi.abs().max(1e-300) {
                break;
            }
            if f1 < f2 {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + INV_PHI * (hi - lo);
                f2 = f(x2);
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - INV_PHI * (hi - lo);
                f1 = f(x1);
            }
        }
        // the endpoints are candidates too: the maximum may sit on the boundary
        [a, b, x1, x2]
            .into_iter()
            .map(|x| Extremum { x, err: self.at(x) })
            .max_by(|u, v| (sign * u.err).total_cmp(&(sign * v.err)))
            .expect("nonempty candidate list")
    }

    /// One extremum per maximal run of constant error sign, in order.
    fn alternating_extrema(&self, grid: &[f64]) -> Vec<Extremum> {
        let values: Vec<f64> = grid.iter().map(|&x| self.at(x)).collect();
        let mut runs: Vec<(usize, f64)> = Vec::new(); // (index of max |e| in run, sign)
        let mut current_sign = 0.0;
        for (i, &v) in values.iter().enumerate() {
            let s = if v > 0.0 {
                1.0
            } else if v < 0.0 {
                -1.0
            } else {
                current_sign
            };
            if s == 0.0 {
                continue;
            }
            if s != current_sign {
                runs.push((i, s));
                current_sign = s;
            } else {
                let last = runs.last_mut().expect("run started");
                if v.abs() > values[last.0].abs() {
                    last.0 = i;
                }
            }
        }
        runs.into_iter()
            .map(|(i, s)| {
                let a = grid[i.saturating_sub(1)];
                let b = grid[(i + 1).min(grid.len() - 1)];
                let refined = self.refine(a, b, s);
                if s * refined.err >= s * values[i] {
                    refined
                } else {
                    Extremum {
                        x: grid[i],
                        err: values[i],
                    }
                }
            })
            .collect()
    }
}

/// Drops extrema until `target` alternating ones remain, always keeping the
/// largest.
fn select_alternating(mut ext: Vec<Extremum>, target: usize) -> Vec<Extremum> {
    while ext.len() > target {
        let last = ext.len() - 1;
        if ext.len() - target == 1 {
            if ext[0].err.abs() < ext[last].err.abs() {
                ext.remove(0);
            } else {
                ext.pop();
            }
            continue;
        }
        let (i, _) = ext
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.err.abs().total_cmp(&b.1.err.abs()))
            .expect("nonempty");
        if i == 0 || i == last {
            ext.remove(i);
        } else {
            let neighbour = if ext[i - 1].err.abs() < ext[i + 1].err.abs() { i - 1 } else { i + 1 };
            let first = i.min(neighbour);
            ext.drain(first..first + 2);
        }
    }
    ext
}

fn exact_monomial(alpha: f64, degree: usize) -> RemezApprox {
    let mut coeffs = vec![0.0; degree + 1];
    coeffs[alpha as usize] = 1.0;
    let cheb = monomial_to_cheb(&coeffs);
    RemezApprox {
        alpha,
        degree,
        coeffs,
        cheb,
        minimax_error: 0.0,
        extremal_points: Vec::new(),
        extremal_errors: Vec::new(),
        iterations: 0,
    }
}

/// Best uniform approximation of `x^alpha` on `[0, 1]` by a polynomial of
/// degree `d`.
///
/// Stops once the alternation magnitudes agree to `1e-10` relative, or to
/// the floating point resolution of the error curve when the minimax error
/// is so small that the relative target is below rounding noise.
pub fn remez_best_approx(alpha: f64, d: usize) -> Result<RemezApprox> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidAlpha(alpha));
    }
    if d == 0 || d > MAX_DEGREE {
        return Err(Error::DegreeOutOfRange(d));
    }
    if is_integer(alpha) && alpha as usize <= d {
        return Ok(exact_monomial(alpha, d));
    }

    let n = d + 2;
    let grid = cosine_grid(GRID_POINTS);
    let mut reference: Vec<f64> = (0..n)
        .map(|i| 0.5 * (1.0 - (std::f64::consts::PI * i as f64 / (n - 1) as f64).cos()))
        .collect();

    for iteration in 1..=MAX_ITERATIONS {
        let rows: Vec<Vec<f64>> = reference.iter().map(|&x| chebyshev_row(2.0 * x - 1.0, d)).collect();
        let system = DMatrix::from_fn(n, n, |i, j| {
            if j <= d {
                rows[i][j]
            } else if i % 2 == 0 {
                1.0
            } else {
                -1.0
            }
        });
        let rhs = DVector::from_iterator(n, reference.iter().map(|&x| x.powf(alpha)));
        let solution = system.lu().solve(&rhs).ok_or(Error::NoConvergence {
            alpha,
            degree: d,
            iterations: iteration,
        })?;
        let cheb: Vec<f64> = solution.iter().take(d + 1).copied().collect();
        let curve = ErrorCurve { cheb: &cheb, alpha };

        let extrema = curve.alternating_extrema(&grid);
        if extrema.len() < n {
            return Err(Error::NoConvergence {
                alpha,
                degree: d,
                iterations: iteration,
            });
        }
        let overall_max = extrema.iter().fold(0.0f64, |m, e| m.max(e.err.abs()));
        let selected = select_alternating(extrema, n);
        let (lo, hi) = selected
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), e| (lo.min(e.err.abs()), hi.max(e.err.abs())));
        let noise_floor = 8.0 * f64::EPSILON * (1.0 + cheb.iter().map(|c| c.abs()).sum::<f64>());
        if hi - lo <= (RELATIVE_TOLERANCE * hi).max(noise_floor) {
            return Ok(RemezApprox {
                alpha,
                degree: d,
                coeffs: cheb_to_monomial(&cheb),
                cheb,
                minimax_error: overall_max,
                extremal_points: selected.iter().map(|e| e.x).collect(),
                extremal_errors: selected.iter().map(|e| e.err).collect(),
                iterations: iteration,
            });
        }
        reference = selected.iter().map(|e| e.x).collect();
    }
    Err(Error::NoConvergence {
        alpha,
        degree: d,
        iterations: MAX_ITERATIONS,
    })
}

/// Shifts the best approximation to vanish at zero and certifies the result.
///
/// The shifted error is at most twice the minimax error. The coefficient
/// magnitudes are checked against [`unit_interval_bound`]; a violation means
/// the fit is wrong.
pub fn shift_to_zero(raw: &RemezApprox) -> Result<EstimatorPolynomial> {
    let poly = shift_unchecked(raw);
    let bound = poly.unit_interval_bound();
    let max_coeff = poly.max_coeff();
    if max_coeff > bound {
        return Err(Error::MarkovBoundViolated { max_coeff, bound });
    }
    Ok(poly)
}

/// [`shift_to_zero`] without the coefficient-bound check.
pub fn shift_unchecked(raw: &RemezApprox) -> EstimatorPolynomial {
    let constant = raw.coeffs[0];
    let mut coeffs = raw.coeffs.clone();
    coeffs[0] = 0.0;
    let mut cheb = raw.cheb.clone();
    cheb[0] -= constant;
    EstimatorPolynomial {
        alpha: raw.alpha,
        degree: raw.degree,
        coeffs,
        cheb,
        sup_error: 2.0 * raw.minimax_error,
        minimax_error: raw.minimax_error,
        equioscillation_points: raw.extremal_points.clone(),
    }
}

/// Remez followed by [`shift_to_zero`].
pub fn estimator_polynomial(alpha: f64, d: usize) -> Result<EstimatorPolynomial> {
    shift_to_zero(&remez_best_approx(alpha, d)?)
}

/// Per-falling-power weights `w_m = a_m (2 tau)^(alpha - m) / n^alpha` for
/// `m = 1..=d`, so that the small-count branch of the polynomial estimator
/// is `sum_m w_m N^(m)`.
pub fn scale_weights(poly: &EstimatorPolynomial, tau: f64, n: f64) -> Result<Vec<f64>> {
    if !(tau > 0.0) || !(n > 0.0) {
        return Err(Error::InvalidParameters(format!(
            "threshold and rate must be positive, got tau={tau}, n={n}"
        )));
    }
    poly.check_degree()?;
    let alpha = poly.alpha;
    let norm = n.powf(alpha);
    Ok(poly
        .coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(m, &a)| a * (2.0 * tau).powf(alpha - m as f64) / norm)
        .collect())
}

/// Plain-text serialization: one `key value` pair per line, floats with 17
/// significant digits so that a reload is bit-exact.
pub fn write_polynomial(poly: &EstimatorPolynomial) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# shifted minimax approximation of x^alpha on [0, 1]");
    let _ = writeln!(out, "alpha {:.16e}", poly.alpha);
    let _ = writeln!(out, "degree {}", poly.degree);
    let _ = writeln!(out, "sup_error {:.16e}", poly.sup_error);
    let _ = writeln!(out, "minimax_error {:.16e}", poly.minimax_error);
    for (m, a) in poly.coeffs.iter().enumerate() {
        let _ = writeln!(out, "coeff {m} {a:.16e}");
    }
    for (j, c) in poly.cheb.iter().enumerate() {
        let _ = writeln!(out, "cheb {j} {c:.16e}");
    }
    for x in &poly.equioscillation_points {
        let _ = writeln!(out, "extremum {x:.16e}");
    }
    out
}

pub fn read_polynomial(text: &str) -> Result<EstimatorPolynomial> {
    let bad = |line: &str| Error::Parse(format!("malformed polynomial line {line:?}"));
    let float = |s: Option<&str>, line: &str| -> Result<f64> {
        s.ok_or_else(|| bad(line))?.parse::<f64>().map_err(|_| bad(line))
    };
    let mut alpha = None;
    let mut degree = None;
    let mut sup_error = None;
    let mut minimax_error = None;
    let mut coeffs = Vec::new();
    let mut cheb = Vec::new();
    let mut points = Vec::new();
    for line in text.lines().map(str::trim) {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        match fields.next() {
            Some("alpha") => alpha = Some(float(fields.next(), line)?),
            Some("degree") => {
                degree = Some(
                    fields
                        .next()
                        .ok_or_else(|| bad(line))?
                        .parse::<usize>()
                        .map_err(|_| bad(line))?,
                )
            }
            Some("sup_error") => sup_error = Some(float(fields.next(), line)?),
            Some("minimax_error") => minimax_error = Some(float(fields.next(), line)?),
            Some(key @ ("coeff" | "cheb")) => {
                let index: usize = fields.next().ok_or_else(|| bad(line))?.parse().map_err(|_| bad(line))?;
                let value = float(fields.next(), line)?;
                let target = if key == "coeff" { &mut coeffs } else { &mut cheb };
                if index != target.len() {
                    return Err(bad(line));
                }
                target.push(value);
            }
            Some("extremum") => points.push(float(fields.next(), line)?),
            _ => return Err(bad(line)),
        }
    }
    let missing = |what: &str| Error::Parse(format!("polynomial file lacks {what}"));
    let poly = EstimatorPolynomial {
        alpha: alpha.ok_or_else(|| missing("alpha"))?,
        degree: degree.ok_or_else(|| missing("degree"))?,
        sup_error: sup_error.ok_or_else(|| missing("sup_error"))?,
        minimax_error: minimax_error.ok_or_else(|| missing("minimax_error"))?,
        coeffs,
        cheb,
        equioscillation_points: points,
    };
    poly.check_degree()?;
    if poly.cheb.len() != poly.coeffs.len() {
        return Err(Error::DegreeMismatch {
            degree: poly.degree,
            coeffs: poly.cheb.len(),
        });
    }
    Ok(poly)
}

/// Directory of computed polynomials keyed by `(alpha, d)`.
#[derive(Debug, Clone)]
pub struct PolyCache {
    dir: PathBuf,
}

impl PolyCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn path_for(&self, alpha: f64, d: usize) -> PathBuf {
        self.dir.join(format!("xpow_{alpha:?}_d{d}.txt"))
    }

    pub fn load(&self, alpha: f64, d: usize) -> Result<Option<EstimatorPolynomial>> {
        let path = self.path_for(alpha, d);
        if !path.exists() {
            return Ok(None);
        }
        read_polynomial(&fs::read_to_string(&path)?).map(Some)
    }

    pub fn store(&self, poly: &EstimatorPolynomial) -> Result<PathBuf> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path_for(poly.alpha, poly.degree);
        fs::write(&path, write_polynomial(poly))?;
        Ok(path)
    }

    pub fn get_or_compute(&self, alpha: f64, d: usize) -> Result<EstimatorPolynomial> {
        if let Some(poly) = self.load(alpha, d)? {
            return Ok(poly);
        }
        let poly = estimator_polynomial(alpha, d)?;
        self.store(&poly)?;
        Ok(poly)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }
}
