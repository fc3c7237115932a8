//! Small numerical helpers shared across modules.

/// Neumaier's compensated summation.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<CompensatedSum>().value()
}

/// Falling power `n (n-1) ... (n-r+1)` as a float; zero when `r > n`.
pub fn falling_power(n: u64, r: u32) -> f64 {
    if u64::from(r) > n {
        return 0.0;
    }
    let mut acc = 1.0;
    for j in 0..u64::from(r) {
        acc *= (n - j) as f64;
    }
    acc
}

pub fn is_integer(x: f64) -> bool {
    x.is_finite() && x.fract() == 0.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_beats_naive_on_mixed_magnitudes() {
        let values = [1.0, 1e-16, 1e-16, 1e-16, 1e-16, -1.0];
        assert_eq!(compensated_sum(values), 4e-16);
    }

    #[test]
    fn falling_powers() {
        assert_eq!(falling_power(5, 3), 60.0);
        assert_eq!(falling_power(3, 0), 1.0);
        assert_eq!(falling_power(2, 3), 0.0);
        assert_eq!(falling_power(0, 1), 0.0);
    }
}
