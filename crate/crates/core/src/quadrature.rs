//! Adaptive Gauss–Kronrod quadrature.
//!
//! Every closed form in the crate is checked against these integrators, so
//! they favour robustness over speed: a globally adaptive 21-point
//! Gauss–Kronrod scheme with the QUADPACK error estimate, plus a
//! semi-infinite wrapper that grows the truncation point until the tail
//! is negligible.
//!
//! Integrands must be safe to call from several threads at once when the
//! caller parallelises over integrals.

use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Outcome of a numerical integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

impl IntegralResult {
    fn add(self, other: IntegralResult) -> IntegralResult {
        IntegralResult {
            value: self.value + other.value,
            error_estimate: self.error_estimate + other.error_estimate,
            evaluations: self.evaluations + other.evaluations,
        }
    }
}

/// Default cap on the number of panels of one adaptive run.
pub const MAX_SUBDIVISIONS: usize = 2000;

/// Upper limit for the truncation point of semi-infinite integrals.
pub const MAX_TRUNCATION: f64 = 1e4;

const XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_2,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_73,
    0.054_755_896_574_352,
    0.075_039_674_810_919_95,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_85,
    0.134_709_217_311_473_33,
    0.142_775_938_577_060_08,
    0.147_739_104_901_338_5,
    0.149_445_554_002_916_9,
];

// Gauss weights for the odd-indexed Kronrod nodes
const WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_35,
    0.295_524_224_714_752_87,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    // QUADPACK's resabs, used for the roundoff floor
    magnitude: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut gauss = 0.0;
    let mut kronrod = fc * WGK[10];
    let mut resabs = kronrod.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut resasc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = kronrod * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * resabs);
    }
    Panel {
        a,
        b,
        value,
        error,
        magnitude: resabs,
    }
}

/// Absolute/relative accuracy request for [`integrate_adaptive`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub absolute: f64,
    pub relative: f64,
}

impl Tolerance {
    /// `max(tol·|value|, tol)`.
    pub fn mixed(tol: f64) -> Self {
        Self {
            absolute: tol,
            relative: tol,
        }
    }

    fn target(&self, value: f64) -> f64 {
        self.absolute.max(self.relative * value.abs())
    }
}

/// Globally adaptive integration over `[a, b]`, split first at `breakpoints`.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    tol: Tolerance,
) -> Result<IntegralResult> {
    if !a.is_finite() || !b.is_finite() || a > b {
        return Err(Error::Domain(format!("integration range [{a}, {b}]")));
    }
    if a == b {
        return Ok(IntegralResult {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 1,
        });
    }
    let mut edges = vec![a];
    let mut inner: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&x| x > a && x < b)
        .collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    edges.extend(inner);
    edges.push(b);

    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    for w in edges.windows(2) {
        heap.push(kronrod21(&f, w[0], w[1]));
        evaluations += 21;
    }
    let mut subdivisions = heap.len();
    loop {
        let (value, error, magnitude) = heap.iter().fold((0.0, 0.0, 0.0), |acc, p| {
            (acc.0 + p.value, acc.1 + p.error, acc.2 + p.magnitude)
        });
        if !value.is_finite() {
            return Err(Error::Domain(format!(
                "integrand is not finite on [{a}, {b}]"
            )));
        }
        let floor = 50.0 * f64::EPSILON * magnitude;
        if error <= tol.target(value).max(floor) {
            return Ok(IntegralResult {
                value,
                error_estimate: error,
                evaluations,
            });
        }
        let worst = heap.pop().expect("at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        let too_narrow = mid <= worst.a || mid >= worst.b;
        if subdivisions >= MAX_SUBDIVISIONS || too_narrow {
            return Err(Error::QuadratureNonConvergent {
                a,
                b,
                subdivisions,
                error_estimate: error,
            });
        }
        heap.push(kronrod21(&f, worst.a, mid));
        heap.push(kronrod21(&f, mid, worst.b));
        evaluations += 42;
        subdivisions += 1;
    }
}

/// `∫_a^b f` to `max(tol·|value|, tol)`.
///
/// ```
/// let r = polyginibre::quadrature::integrate_finite(|x| x * x, 0.0, 1.0, 1e-12).unwrap();
/// assert!((r.value - 1.0 / 3.0).abs() < 1e-14);
/// ```
pub fn integrate_finite<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<IntegralResult> {
    integrate_adaptive(f, a, b, &[], Tolerance::mixed(tol))
}

/// `∫_a^b f` with known kinks or steep features at `breakpoints`.
pub fn integrate_with_breakpoints<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    tol: f64,
) -> Result<IntegralResult> {
    integrate_adaptive(f, a, b, breakpoints, Tolerance::mixed(tol))
}

/// `∫_0^∞ f` for integrands decaying like `e^{-x/decay_scale}·poly(x)`.
pub fn integrate_semiinfinite<F: Fn(f64) -> f64>(
    f: F,
    decay_scale: f64,
    tol: f64,
) -> Result<IntegralResult> {
    integrate_tail(f, 0.0, decay_scale, tol)
}

/// `∫_a^∞ f` under the same decay contract as [`integrate_semiinfinite`].
///
/// Integrates `[a, a + T]` with `T = decay_scale·(40 - ln tol)`, then keeps
/// appending panels `[T, 2T]` until one contributes less than the
/// tolerance; the truncation point never exceeds `a + 1e4`.
pub fn integrate_tail<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    decay_scale: f64,
    tol: f64,
) -> Result<IntegralResult> {
    if decay_scale.is_nan() || decay_scale <= 0.0 || tol.is_nan() || tol <= 0.0 {
        return Err(Error::Domain(format!(
            "decay scale {decay_scale} and tolerance {tol} must be positive"
        )));
    }
    let mut span = (decay_scale * (40.0 - tol.ln())).min(MAX_TRUNCATION);
    let mut total = integrate_finite(&f, a, a + span, tol)?;
    while span < MAX_TRUNCATION {
        let next = (2.0 * span).min(MAX_TRUNCATION);
        let piece = integrate_finite(&f, a + span, a + next, tol)?;
        total = total.add(piece);
        span = next;
        if piece.value.abs() <= tol * 1e-3 * total.value.abs().max(1.0) {
            break;
        }
    }
    Ok(total)
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let step = p / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let derivative = legendre_with_derivative(n, x).1;
        let w = 2.0 / ((1.0 - x * x) * derivative * derivative);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Single-panel `n`-point Gauss–Legendre approximation of `∫_a^b f`.
pub fn gauss_legendre_panel<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(n);
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    h * nodes
        .iter()
        .zip(&weights)
        .map(|(x, w)| w * f(c + h * x))
        .sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::laguerre;

    #[test]
    fn kronrod_weights_sum_to_interval_length() {
        let k: f64 = WGK[10] + 2.0 * WGK[..10].iter().sum::<f64>();
        let g: f64 = 2.0 * WG.iter().sum::<f64>();
        assert!((k - 2.0).abs() < 1e-15);
        assert!((g - 2.0).abs() < 1e-15);
    }

    #[test]
    fn embedded_gauss_rule_matches_newton_nodes() {
        let (x, w) = gauss_legendre(10);
        for j in 0..5 {
            assert!((x[9 - j] - XGK[2 * j + 1]).abs() < 1e-15);
            assert!((w[9 - j] - WG[j]).abs() < 1e-15);
        }
    }

    #[test]
    fn gauss_panel_is_exact_for_low_degree_polynomials() {
        for n in 1..12 {
            let degree = 2 * n - 1;
            let v = gauss_legendre_panel(|x| x.powi(degree as i32) + 1.0, 0.0, 2.0, n);
            let exact = 2f64.powi(degree as i32 + 1) / (degree as f64 + 1.0) + 2.0;
            assert!((v - exact).abs() < 1e-12 * exact, "n={n}");
        }
    }

    #[test]
    fn polynomial_and_exponential() {
        let r = integrate_finite(|x| x * x, 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value - 1.0 / 3.0).abs() < 1e-14);
        assert!(r.error_estimate >= 0.0 && r.evaluations >= 1);
        let r = integrate_finite(|x: f64| (-x).exp(), 0.0, 50.0, 1e-12).unwrap();
        assert!((r.value - (1.0 - (-50f64).exp())).abs() < 1e-12);
    }

    #[test]
    fn semi_infinite_gamma_integrals() {
        let r = integrate_semiinfinite(|x: f64| (-x).exp(), 1.0, 1e-12).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        let r = integrate_semiinfinite(|x: f64| x * (-x).exp(), 1.0, 1e-12).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn laguerre_weighted_moments() {
        let r = integrate_semiinfinite(|x: f64| (-x).exp() * laguerre(2, 0, x).powi(2), 1.0, 1e-12)
            .unwrap();
        assert!((r.value - 1.0).abs() < 1e-11);
        // 4Γ(3) - 4Γ(4) + Γ(5) = 8
        let r = integrate_semiinfinite(
            |x: f64| (-x).exp() * x * x * laguerre(1, 1, x).powi(2),
            1.0,
            1e-10,
        )
        .unwrap();
        assert!((r.value - 8.0).abs() < 1e-9, "{}", r.value);
    }

    #[test]
    fn square_root_endpoint_and_breakpoints() {
        let r = integrate_finite(|x: f64| x.sqrt(), 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value - 2.0 / 3.0).abs() < 1e-12);
        let r =
            integrate_with_breakpoints(|x: f64| (x - 0.3).abs(), 0.0, 1.0, &[0.3], 1e-12).unwrap();
        assert!((r.value - (0.045 + 0.245)).abs() < 1e-14);
    }

    #[test]
    fn nonintegrable_singularity_reports_failure() {
        let err = integrate_finite(|x: f64| 1.0 / x, 0.0, 1.0, 1e-12).unwrap_err();
        assert!(matches!(
            err,
            Error::QuadratureNonConvergent { .. } | Error::Domain(_)
        ));
    }

    #[test]
    fn loosening_tolerance_stays_within_error_estimates() {
        let f = |x: f64| (3.0 * x).sin() * (-x).exp();
        let tight = integrate_finite(f, 0.0, 5.0, 1e-12).unwrap();
        let loose = integrate_finite(f, 0.0, 5.0, 1e-9).unwrap();
        let bound = tight.error_estimate.max(loose.error_estimate);
        assert!((tight.value - loose.value).abs() <= bound.max(1e-15));
    }
}
