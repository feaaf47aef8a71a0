//! Minimal double-double arithmetic for evaluating alternating polynomial
//! expansions whose terms dwarf their sum.

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    pub const ONE: Self = Self { hi: 1.0, lo: 0.0 };

    pub fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn mul_f64(self, b: f64) -> Self {
        let p = self.hi * b;
        let e = self.hi.mul_add(b, -p);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        Self { hi, lo }
    }

    pub fn div_f64(self, b: f64) -> Self {
        let q1 = self.hi / b;
        let r = self - Self::from_f64(q1).mul_f64(b);
        let q2 = r.hi / b;
        let (hi, lo) = quick_two_sum(q1, q2);
        Self { hi, lo }
    }
}

impl Add for DoubleDouble {
    type Output = Self;

    fn add(self, other: Self) -> Self {
        let (s, e) = two_sum(self.hi, other.hi);
        let (t, f) = two_sum(self.lo, other.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Self { hi, lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;

    fn sub(self, other: Self) -> Self {
        self + -other
    }
}

impl Mul for DoubleDouble {
    type Output = Self;

    fn mul(self, other: Self) -> Self {
        let p = self.hi * other.hi;
        let e = self.hi.mul_add(other.hi, -p);
        let (hi, lo) = quick_two_sum(p, e + (self.hi * other.lo + self.lo * other.hi));
        Self { hi, lo }
    }
}

impl Neg for DoubleDouble {
    type Output = Self;

    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

/// `Σ_j c_j x^j / j!` in double-double, for exactly representable `c_j`.
pub fn exponential_series(coefficients: &[f64], x: f64) -> f64 {
    let mut power = DoubleDouble::ONE;
    let mut total = DoubleDouble::ZERO;
    for (j, &c) in coefficients.iter().enumerate() {
        if j > 0 {
            power = power.mul_f64(x).div_f64(j as f64);
        }
        total = total + power.mul_f64(c);
    }
    total.to_f64()
}

/// `L_0^{(α)}(x), …, L_n^{(α)}(x)` by the three-term recurrence in
/// double-double.
pub fn laguerre_sequence_dd(n: usize, alpha: usize, x: f64) -> Vec<DoubleDouble> {
    let a = alpha as f64;
    let x_dd = DoubleDouble::from_f64(x);
    let mut out = Vec::with_capacity(n + 1);
    out.push(DoubleDouble::ONE);
    if n == 0 {
        return out;
    }
    out.push(DoubleDouble::from_f64(1.0 + a) - x_dd);
    for k in 1..n {
        let kf = k as f64;
        let slope = DoubleDouble::from_f64(2.0 * kf + 1.0 + a) - x_dd;
        let next = (slope * out[k] - out[k - 1].mul_f64(kf + a)).div_f64(kf + 1.0);
        out.push(next);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_digits() {
        // e^{-20} from its Maclaurin series: plain f64 loses ~9 digits
        let coefficients: Vec<f64> = (0..120)
            .map(|j| if j % 2 == 0 { 1.0 } else { -1.0 })
            .collect();
        let v = exponential_series(&coefficients, 20.0);
        let want = (-20f64).exp();
        assert!((v - want).abs() < 1e-14 * want, "{v} vs {want}");
    }

    #[test]
    fn laguerre_sequence_matches_double_precision_values() {
        let dd = laguerre_sequence_dd(6, 2, 3.3);
        let plain = crate::specfun::laguerre_sequence(6, 2, 3.3);
        for (a, b) in dd.iter().zip(&plain) {
            assert!((a.to_f64() - b).abs() < 1e-13 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn division_is_accurate() {
        let third = DoubleDouble::ONE.div_f64(3.0).mul_f64(3.0);
        assert!((third.to_f64() - 1.0).abs() < 1e-30);
    }
}
