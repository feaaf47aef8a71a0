//! Modified Bessel functions `I₀` and `I₁`.
//!
//! Power series for `|x| <= 20`, the Hankel asymptotic expansion beyond,
//! both carried in exponentially scaled form `e^{-|x|} I_ν(x)`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const SERIES_LIMIT: f64 = 20.0;

/// Order of the modified Bessel function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BesselOrder {
    Zero,
    One,
}

impl TryFrom<u32> for BesselOrder {
    type Error = Error;

    fn try_from(order: u32) -> Result<Self> {
        match order {
            0 => Ok(BesselOrder::Zero),
            1 => Ok(BesselOrder::One),
            _ => Err(Error::Domain(format!(
                "only I₀ and I₁ are provided, got order {order}"
            ))),
        }
    }
}

/// `e^{-|x|} I_ν(x)`.
pub fn bessel_i_scaled(order: BesselOrder, x: f64) -> f64 {
    let ax = x.abs();
    let value = if ax <= SERIES_LIMIT {
        series(order, ax) * (-ax).exp()
    } else {
        asymptotic_scaled(order, ax)
    };
    match order {
        BesselOrder::One if x < 0.0 => -value,
        _ => value,
    }
}

/// `I_ν(x)`; errors once `e^{|x|}` leaves the `f64` range.
pub fn bessel_i(order: BesselOrder, x: f64) -> Result<f64> {
    let ax = x.abs();
    if ax <= SERIES_LIMIT {
        let v = series(order, ax);
        return Ok(match order {
            BesselOrder::One if x < 0.0 => -v,
            _ => v,
        });
    }
    let scaled = bessel_i_scaled(order, x);
    let value = scaled * ax.exp();
    if !value.is_finite() {
        return Err(Error::Overflow(format!(
            "I_{}({x}) exceeds f64 range; use the scaled variant",
            order as u8
        )));
    }
    Ok(value)
}

// Σ (x/2)^{2k+ν} / (k! (k+ν)!) for x >= 0
fn series(order: BesselOrder, x: f64) -> f64 {
    let nu = match order {
        BesselOrder::Zero => 0.0,
        BesselOrder::One => 1.0,
    };
    let q = 0.25 * x * x;
    let mut term = if nu == 0.0 { 1.0 } else { 0.5 * x };
    let mut sum = term;
    for k in 1..500 {
        let k = k as f64;
        term *= q / (k * (k + nu));
        sum += term;
        if term < sum * f64::EPSILON * 0.5 {
            break;
        }
    }
    sum
}

// e^{-x} I_ν(x) ~ (2πx)^{-1/2} Σ (-1)^k a_k(ν) / x^k,
// a_k = Π_{j=1..k} (4ν² - (2j-1)²) / (k! 8^k)
fn asymptotic_scaled(order: BesselOrder, x: f64) -> f64 {
    let mu = match order {
        BesselOrder::Zero => 0.0,
        BesselOrder::One => 4.0,
    };
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        term *= -(mu - odd * odd) / (k as f64 * 8.0 * x);
        if term.abs() >= last {
            break;
        }
        sum += term;
        last = term.abs();
        if term.abs() < sum.abs() * f64::EPSILON * 0.5 {
            break;
        }
    }
    sum / (2.0 * PI * x).sqrt()
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn values_at_origin() {
        assert_eq!(bessel_i(BesselOrder::Zero, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_i(BesselOrder::One, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn reference_values() {
        // mpmath, scaled by e^{-|x|}
        let cases = [
            (0.5, 0.64503527044915006811, 0.15642080318487169714),
            (2.0, 0.30850832255367103953, 0.21526928924893765916),
            (-3.0, 0.24300035416182539847, -0.19682671329730085363),
            (19.9, 0.090008588864389597294, 0.087717102131706101082),
            (20.1, 0.089553763620613444035, 0.087296851843201591986),
            (25.0, 0.080196773547436708422, 0.078576113319292772028),
            (100.0, 0.039944379299096682648, 0.039744153025130252674),
            (700.0, 0.015081295651531357587, 0.015070519444716846949),
            (1e4, 0.0039894726746047321064, 0.0039892731959836622645),
        ];
        for (x, i0, i1) in cases {
            assert!(
                rel(bessel_i_scaled(BesselOrder::Zero, x), i0) < 1e-13,
                "I0 at {x}"
            );
            assert!(
                rel(bessel_i_scaled(BesselOrder::One, x), i1) < 1e-13,
                "I1 at {x}"
            );
        }
        assert!(
            rel(
                bessel_i(BesselOrder::Zero, 2.0).unwrap(),
                2.2795853023360672674
            ) < 1e-14
        );
        assert!(
            rel(
                bessel_i(BesselOrder::Zero, 25.0).unwrap(),
                5774560606.4663103158
            ) < 1e-13
        );
    }

    #[test]
    fn unscaled_overflow_is_reported() {
        assert!(bessel_i(BesselOrder::Zero, 700.0).is_ok());
        assert!(matches!(
            bessel_i(BesselOrder::Zero, 1e4),
            Err(Error::Overflow(_))
        ));
    }

    #[test]
    fn order_parsing() {
        assert_eq!(BesselOrder::try_from(1).unwrap(), BesselOrder::One);
        assert!(BesselOrder::try_from(2).is_err());
    }
}
