//! Generalized hypergeometric series `pFq` with compensated summation.
//!
//! [`pfq`] sums the Maclaurin series directly and reports how many digits
//! the alternating partial sums cancelled. For `2F2` at large negative
//! argument, where the series is hopeless in double precision,
//! [`hyp2f2_euler_kummer`] integrates an Euler representation whose inner
//! `1F1` has been Kummer-transformed onto a positive (or terminating)
//! series.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::quadrature::integrate_finite;

use super::combinatorics::CompensatedSum;
use super::gamma::ln_gamma;

/// Parameters of `pFq(a_1..a_p; b_1..b_q; z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PFqSpec {
    pub numerator: Vec<f64>,
    pub denominator: Vec<f64>,
    pub argument: f64,
}

impl PFqSpec {
    pub fn new(numerator: &[f64], denominator: &[f64], argument: f64) -> Self {
        Self {
            numerator: numerator.to_vec(),
            denominator: denominator.to_vec(),
            argument,
        }
    }

    /// Degree of the polynomial when some numerator parameter is `-N`.
    pub fn terminating_degree(&self) -> Option<u64> {
        self.numerator
            .iter()
            .filter_map(|&a| nonpositive_integer(a))
            .min()
    }

    /// Checks that no denominator pole is reached before the series ends.
    pub fn validate(&self) -> Result<()> {
        let stop = self.terminating_degree();
        for &b in &self.denominator {
            if !b.is_finite() {
                return Err(Error::InvalidParameters(format!(
                    "denominator parameter {b}"
                )));
            }
            if let Some(n) = nonpositive_integer(b) {
                match stop {
                    Some(degree) if degree <= n => {}
                    _ => {
                        return Err(Error::InvalidParameters(format!(
                            "denominator parameter {b} is a pole reached before termination"
                        )))
                    }
                }
            }
        }
        if self.numerator.iter().any(|a| !a.is_finite()) || !self.argument.is_finite() {
            return Err(Error::InvalidParameters("non-finite parameter".into()));
        }
        Ok(())
    }
}

fn nonpositive_integer(x: f64) -> Option<u64> {
    (x <= 0.0 && x.fract() == 0.0).then(|| (-x) as u64)
}

/// Stopping rule for series evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesBudget {
    pub max_terms: usize,
    /// Stop once `|term| < tolerance * |partial sum|` three times in a row.
    pub tolerance: f64,
}

impl Default for SeriesBudget {
    fn default() -> Self {
        Self {
            max_terms: 20_000,
            tolerance: 1e-17,
        }
    }
}

/// Value of a summed series plus its accuracy diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult {
    pub value: f64,
    pub terms_used: usize,
    /// `log10` of the largest intermediate magnitude over `|value|`.
    pub cancellation_digits: f64,
    pub converged: bool,
    /// Rounding bound `2ε Σ|term|`.
    pub error_estimate: f64,
}

/// Sums `pFq` and fails with [`Error::NonConvergent`] if the budget runs out.
pub fn pfq(spec: &PFqSpec, budget: SeriesBudget) -> Result<SeriesResult> {
    let result = pfq_partial(spec, budget)?;
    if result.converged {
        Ok(result)
    } else {
        Err(Error::NonConvergent {
            terms: result.terms_used,
        })
    }
}

/// Like [`pfq`] but returns the truncated sum with `converged = false`
/// instead of an error when the budget is exhausted.
pub fn pfq_partial(spec: &PFqSpec, budget: SeriesBudget) -> Result<SeriesResult> {
    spec.validate()?;
    let z = spec.argument;
    if z == 0.0 {
        return Ok(SeriesResult {
            value: 1.0,
            terms_used: 0,
            cancellation_digits: 0.0,
            converged: true,
            error_estimate: 0.0,
        });
    }
    let last = spec.terminating_degree();
    let mut acc = CompensatedSum::new();
    let mut term = 1.0f64;
    acc.add(term);
    let mut small_run = 0;
    let mut k = 0usize;
    let mut converged = false;
    while k + 1 < budget.max_terms {
        if last == Some(k as u64) {
            converged = true;
            break;
        }
        let kf = k as f64;
        let num: f64 = spec.numerator.iter().map(|a| a + kf).product();
        let den: f64 = spec.denominator.iter().map(|b| b + kf).product();
        term *= num / den * z / (kf + 1.0);
        k += 1;
        acc.add(term);
        if !term.is_finite() || !acc.value().is_finite() {
            return Err(Error::Overflow(format!(
                "pFq series overflowed at term {k} (z = {z})"
            )));
        }
        if term == 0.0 {
            converged = true;
            break;
        }
        if term.abs() < budget.tolerance * acc.value().abs() {
            small_run += 1;
            if small_run >= 3 {
                converged = true;
                break;
            }
        } else {
            small_run = 0;
        }
    }
    let value = acc.value();
    Ok(SeriesResult {
        value,
        terms_used: k + 1,
        cancellation_digits: acc.cancellation_digits(),
        converged,
        error_estimate: 2.0 * f64::EPSILON * acc.abs_sum(),
    })
}

/// How a hypergeometric value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HypergeometricMethod {
    Series,
    EulerKummer,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypergeometricValue {
    pub value: f64,
    pub method: HypergeometricMethod,
    /// Cancellation seen by the direct series, whichever method was kept.
    pub series_cancellation_digits: f64,
    pub error_estimate: f64,
}

/// Largest `|z|` for which the Euler–Kummer route is attempted.
pub const EULER_KUMMER_MAX_ARGUMENT: f64 = 144.0;

/// `2F2` with automatic fallback from the series to the Euler–Kummer integral.
///
/// The series is kept when it cancels at most `max_series_digits`; otherwise
/// the integral representation is used for `-144 <= z < 0`. Anything else
/// is an [`Error::AccuracyLoss`].
pub fn hyp2f2(
    numerator: [f64; 2],
    denominator: [f64; 2],
    z: f64,
    max_series_digits: f64,
) -> Result<HypergeometricValue> {
    let spec = PFqSpec::new(&numerator, &denominator, z);
    let series = pfq(&spec, SeriesBudget::default());
    let digits = match &series {
        Ok(s) if s.cancellation_digits <= max_series_digits => {
            return Ok(HypergeometricValue {
                value: s.value,
                method: HypergeometricMethod::Series,
                series_cancellation_digits: s.cancellation_digits,
                error_estimate: s.error_estimate,
            })
        }
        Ok(s) => s.cancellation_digits,
        Err(Error::Overflow(_)) => f64::INFINITY,
        Err(e) => return Err(e.clone()),
    };
    if z < 0.0 && -z <= EULER_KUMMER_MAX_ARGUMENT {
        if let Ok(integral) = hyp2f2_euler_kummer(numerator, denominator, z, 1e-14) {
            return Ok(HypergeometricValue {
                value: integral.value,
                method: HypergeometricMethod::EulerKummer,
                series_cancellation_digits: digits,
                error_estimate: integral.error_estimate,
            });
        }
    }
    Err(Error::AccuracyLoss {
        context: format!("2F2({numerator:?}; {denominator:?}; {z})"),
        digits,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerKummerResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

/// `2F2(a1, a2; b1, b2; z)` for `z <= 0` through
///
/// `2F2 = Γ(B) / (Γ(A) Γ(B-A)) ∫₀¹ t^{A-1} (1-t)^{B-A-1} e^{zt} 1F1(b-a; b; -zt) dt`
///
/// where `(A, B)` is a numerator/denominator pair with `A >= ½`,
/// `B - A >= ½`, and `(a, b)` the remaining pair. The substitution
/// `t = sin²θ` makes the weight bounded. Requires `b - a >= 0` or a
/// nonpositive integer so the inner series has no cancellation to speak of.
pub fn hyp2f2_euler_kummer(
    numerator: [f64; 2],
    denominator: [f64; 2],
    z: f64,
    tol: f64,
) -> Result<EulerKummerResult> {
    if z.is_nan() || z > 0.0 {
        return Err(Error::Domain(format!(
            "Euler–Kummer route needs z <= 0, got {z}"
        )));
    }
    let pairing = [(0usize, 0usize), (0, 1), (1, 0), (1, 1)]
        .into_iter()
        .find(|&(i, j)| {
            let (big_a, big_b) = (numerator[i], denominator[j]);
            let (a, b) = (numerator[1 - i], denominator[1 - j]);
            let c = b - a;
            big_a >= 0.5
                && big_b - big_a >= 0.5
                && nonpositive_integer(b).is_none()
                && (c >= 0.0 || nonpositive_integer(c).is_some())
        })
        .ok_or_else(|| {
            Error::InvalidParameters(format!(
                "no Euler pairing for 2F2({numerator:?}; {denominator:?})"
            ))
        })?;
    let (i, j) = pairing;
    let (big_a, big_b) = (numerator[i], denominator[j]);
    let (a, b) = (numerator[1 - i], denominator[1 - j]);
    let c = b - a;
    let log_norm = ln_gamma(big_b) - ln_gamma(big_a) - ln_gamma(big_b - big_a);
    let p = 2.0 * big_a - 1.0;
    let q = 2.0 * (big_b - big_a) - 1.0;
    let integrand = |theta: f64| {
        let (s, co) = theta.sin_cos();
        let t = s * s;
        let weight = 2.0 * s.powf(p) * co.powf(q);
        if weight == 0.0 {
            return 0.0;
        }
        weight * (z * t).exp() * hyp1f1_nonnegative(c, b, -z * t)
    };
    let res = integrate_finite(integrand, 0.0, FRAC_PI_2, tol)?;
    let scale = log_norm.exp();
    Ok(EulerKummerResult {
        value: scale * res.value,
        error_estimate: scale * res.error_estimate,
        evaluations: res.evaluations,
    })
}

// 1F1(a; b; y) for y >= 0 with a >= 0 or a terminating
fn hyp1f1_nonnegative(a: f64, b: f64, y: f64) -> f64 {
    let stop = nonpositive_integer(a);
    let mut term = 1.0;
    let mut acc = CompensatedSum::new();
    acc.add(term);
    for k in 0..100_000u64 {
        if stop == Some(k) {
            break;
        }
        let kf = k as f64;
        term *= (a + kf) / (b + kf) * y / (kf + 1.0);
        acc.add(term);
        if term == 0.0 || (term.abs() < 1e-17 * acc.value().abs() && kf > y) {
            break;
        }
    }
    acc.value()
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    fn spec(a: &[f64], b: &[f64], z: f64) -> PFqSpec {
        PFqSpec::new(a, b, z)
    }

    #[test]
    fn zero_argument_is_exactly_one() {
        let r = pfq(&spec(&[1.5, 2.0], &[3.0], 0.0), SeriesBudget::default()).unwrap();
        assert_eq!(r.value, 1.0);
        assert_eq!(r.terms_used, 0);
        assert!(r.converged);
    }

    #[test]
    fn confluent_at_one() {
        let r = pfq(&spec(&[1.0], &[2.0], 1.0), SeriesBudget::default()).unwrap();
        assert!((r.value - (std::f64::consts::E - 1.0)).abs() < 1e-15);
        assert!(r.terms_used >= 1);
    }

    #[test]
    fn two_f_two_against_extended_precision() {
        // mpmath hyp2f2(1, 3/2, 3, 2, -4), 30 digits
        let r = pfq(
            &spec(&[1.0, 1.5], &[3.0, 2.0], -4.0),
            SeriesBudget::default(),
        )
        .unwrap();
        assert!(
            (r.value - 0.47622238819739130131).abs() < 1e-14,
            "{}",
            r.value
        );
        assert!(r.cancellation_digits > 0.3);
    }

    #[test]
    fn terminating_series_stops_at_degree() {
        // 2F1(-3, 1; 1; z) = (1 - z)^3
        let r = pfq(&spec(&[-3.0, 1.0], &[1.0], 0.5), SeriesBudget::default()).unwrap();
        assert!((r.value - 0.125).abs() < 1e-16);
        assert_eq!(r.terms_used, 4);
    }

    #[test]
    fn denominator_pole_is_rejected() {
        let err = pfq(&spec(&[-3.0, 1.0], &[-1.0], 0.5), SeriesBudget::default()).unwrap_err();
        assert!(matches!(err, Error::InvalidParameters(_)));
        // terminates at degree 1 before the pole at -2 is reached
        assert!(pfq(&spec(&[-1.0], &[-2.0], 0.5), SeriesBudget::default()).is_ok());
    }

    #[test]
    fn divergent_series_exhausts_budget() {
        // 3F2(1, -1/2, -1/2; 1, -3/2; 1) has Σb - Σa < 0
        let s = spec(&[1.0, -0.5, -0.5], &[1.0, -1.5], 1.0);
        let budget = SeriesBudget {
            max_terms: 500,
            ..SeriesBudget::default()
        };
        assert!(matches!(pfq(&s, budget), Err(Error::NonConvergent { .. })));
        let partial = pfq_partial(&s, budget).unwrap();
        assert!(!partial.converged);
    }

    #[test]
    fn euler_kummer_and_series_against_extended_precision() {
        // mpmath hyp2f2(s+1, 3/2, 3, 2, -6)
        let reference = [
            0.373_448_621_693_915_83,
            0.131_217_808_864_867_24,
            0.046_173_640_864_524_545,
            0.019_435_263_567_909_073,
            0.011_543_410_216_131_136,
            0.008_628_120_680_944_775,
        ];
        for (s, &want) in reference.iter().enumerate() {
            let a = [s as f64 + 1.0, 1.5];
            let b = [3.0, 2.0];
            let series = pfq(&spec(&a, &b, -6.0), SeriesBudget::default()).unwrap();
            let integral = hyp2f2_euler_kummer(a, b, -6.0, 1e-14).unwrap();
            assert!(
                (integral.value - want).abs() < 1e-13 * want,
                "s={s}: {}",
                integral.value
            );
            assert!((series.value - want).abs() <= series.error_estimate.max(1e-15) * 10.0);
        }
    }

    #[test]
    fn euler_kummer_at_large_negative_argument() {
        // mpmath: hyp2f2(1, 1.5, 3, 2, -144)
        let v = hyp2f2([1.0, 1.5], [3.0, 2.0], -144.0, 3.0).unwrap();
        assert_eq!(v.method, HypergeometricMethod::EulerKummer);
        assert!(
            (v.value - 0.025_170_335_581_080_459).abs() < 1e-15,
            "{}",
            v.value
        );
        assert!(hyp2f2([1.0, 1.5], [3.0, 2.0], -576.0, 3.0).is_err());
    }
}
