//! Factorials, binomials and a compensated accumulator.

use super::gamma::ln_gamma;

/// Largest `n` with `n!` finite in `f64`.
pub const MAX_FACTORIAL: u64 = 170;

/// `n!` as `f64`; `+inf` past [`MAX_FACTORIAL`].
pub fn factorial(n: u64) -> f64 {
    if n > MAX_FACTORIAL {
        return f64::INFINITY;
    }
    (2..=n).fold(1.0, |acc, i| acc * i as f64)
}

/// `ln(n!)`.
pub fn ln_factorial(n: u64) -> f64 {
    if n <= 20 {
        factorial(n).ln()
    } else {
        ln_gamma(n as f64 + 1.0)
    }
}

/// `1/n!` extended to negative integers, where it vanishes.
pub fn reciprocal_factorial(n: i64) -> f64 {
    if n < 0 {
        0.0
    } else {
        1.0 / factorial(n as u64)
    }
}

/// Binomial coefficient `C(n, k)` for `n >= 0`; zero when `k < 0` or `k > n`.
///
/// Exact while the result fits in 53 bits. Falls back to log space once the
/// multiplicative recurrence would overflow.
pub fn binomial(n: i64, k: i64) -> f64 {
    if n < 0 || k < 0 || k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 1..=k {
        acc = acc * (n - k + i) as f64 / i as f64;
        if !acc.is_finite() || acc > 1e300 {
            return ln_binomial(n, k).exp();
        }
    }
    acc
}

/// `ln C(n, k)`; `-inf` outside the support.
pub fn ln_binomial(n: i64, k: i64) -> f64 {
    if n < 0 || k < 0 || k > n {
        return f64::NEG_INFINITY;
    }
    ln_factorial(n as u64) - ln_factorial(k as u64) - ln_factorial((n - k) as u64)
}

/// Rising factorial `(a)_k = a (a+1) ... (a+k-1)`.
pub fn pochhammer(a: f64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (a + i as f64))
}

/// Neumaier-compensated running sum.
///
/// Also tracks the largest magnitude among the added terms and the partial
/// sums, which is what cancellation diagnostics are measured against.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
    max_abs_term: f64,
    max_abs_partial: f64,
    abs_sum: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, term: f64) {
        let t = self.sum + term;
        if self.sum.abs() >= term.abs() {
            self.compensation += (self.sum - t) + term;
        } else {
            self.compensation += (term - t) + self.sum;
        }
        self.sum = t;
        self.max_abs_term = self.max_abs_term.max(term.abs());
        self.max_abs_partial = self.max_abs_partial.max(self.value().abs());
        self.abs_sum += term.abs();
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }

    pub fn max_abs_term(&self) -> f64 {
        self.max_abs_term
    }

    pub fn max_abs_partial(&self) -> f64 {
        self.max_abs_partial
    }

    /// Sum of absolute values of the added terms.
    pub fn abs_sum(&self) -> f64 {
        self.abs_sum
    }

    /// `log10(max(|term|, |partial|) / |value|)`, floored at zero.
    pub fn cancellation_digits(&self) -> f64 {
        cancellation_digits(self.max_abs_term.max(self.max_abs_partial), self.value())
    }
}

impl std::iter::FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for t in iter {
            acc.add(t);
        }
        acc
    }
}

/// Digits lost when a result of size `value` is assembled from pieces of size `scale`.
pub fn cancellation_digits(scale: f64, value: f64) -> f64 {
    if scale == 0.0 {
        return 0.0;
    }
    if value == 0.0 {
        return f64::INFINITY;
    }
    (scale / value.abs()).log10().max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_factorials_are_exact() {
        assert_eq!(factorial(0), 1.0);
        assert_eq!(factorial(5), 120.0);
        assert_eq!(factorial(20), 2_432_902_008_176_640_000.0);
        assert!(factorial(171).is_infinite());
    }

    #[test]
    fn binomial_edges() {
        assert_eq!(binomial(5, 2), 10.0);
        assert_eq!(binomial(5, -1), 0.0);
        assert_eq!(binomial(5, 6), 0.0);
        assert_eq!(binomial(0, 0), 1.0);
        assert_eq!(binomial(52, 26), 495_918_532_948_104.0);
        let big = binomial(1200, 600);
        assert!(big.is_finite() || big.is_infinite());
        let rel = (binomial(300, 40) / ln_binomial(300, 40).exp() - 1.0).abs();
        assert!(rel < 1e-12, "{rel}");
    }

    #[test]
    fn reciprocal_factorial_of_negative_is_zero() {
        assert_eq!(reciprocal_factorial(-3), 0.0);
        assert_eq!(reciprocal_factorial(3), 1.0 / 6.0);
    }

    #[test]
    fn compensated_sum_recovers_lost_bits() {
        let acc: CompensatedSum = [1e16, 1.0, -1e16].into_iter().collect();
        assert_eq!(acc.value(), 1.0);
        assert!((acc.cancellation_digits() - 16.0).abs() < 1e-9);
    }
}
