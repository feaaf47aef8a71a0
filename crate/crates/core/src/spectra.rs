//! Spectra of the disk concentration operators.
//!
//! The `β` family (symbol `χ_{D_R}`) gives the Bernoulli parameters of the
//! disk count; the `λ` family (symbol `G_R`) carries the variance. Each has
//! an explicit formula and a quadrature oracle; explicit formulas are only
//! served when their own error estimate says they can be trusted.

use std::f64::consts::PI;
use std::fmt;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernels::{g_weight, DiskRadius, LandauIndex};
use crate::quadrature::{integrate_adaptive, integrate_tail, Tolerance};
use crate::specfun::{
    binomial, cancellation_digits, exponential_series, laguerre, laguerre_sequence_dd, ln_binomial,
    ln_factorial, ln_gamma, pfq, regularized_gamma_p, CompensatedSum, DoubleDouble, PFqSpec,
    SeriesBudget,
};

/// Absolute error an explicit `β_k` may carry before the oracle takes over.
pub const BETA_ERROR_LIMIT: f64 = 1e-10;

/// Cancelled digits beyond which an explicit `λ_k` is refused.
pub const LAMBDA_DIGIT_LIMIT: f64 = 10.0;

const ORACLE_TOL: f64 = 1e-12;

// (n, α) = (m ∧ k, |k - m|)
fn reduced_indices(m: LandauIndex, k: u32) -> (u64, u64) {
    let m = m.get();
    (m.min(k) as u64, m.abs_diff(k) as u64)
}

// ln of the positive inner sum Σ_ℓ 1/[ℓ!(j-ℓ)!(n-j+ℓ)!(n-ℓ)!(α+j-ℓ)!(α+ℓ)!]
fn ln_coefficient_sum(n: u64, alpha: u64, j: u64) -> f64 {
    let lo = j.saturating_sub(n);
    let hi = j.min(n);
    let logs: Vec<f64> = (lo..=hi)
        .map(|l| {
            -(ln_factorial(l)
                + ln_factorial(j - l)
                + ln_factorial(n + l - j)
                + ln_factorial(n - l)
                + ln_factorial(alpha + j - l)
                + ln_factorial(alpha + l))
        })
        .collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    top + logs.iter().map(|x| (x - top).exp()).sum::<f64>().ln()
}

/// Coefficients `𝔞_j`, `j = 0..=2(m∧k)`, with
/// `((m∧k)!/(m∨k)!) (L_{m∧k}^{(|k-m|)}(ρ))² = Σ_j 𝔞_j ρ^j`.
pub fn beta_coefficients(m: LandauIndex, k: u32) -> Vec<f64> {
    let (n, alpha) = reduced_indices(m, k);
    let ln_front = ln_factorial(n) + ln_factorial(n + alpha);
    (0..=2 * n)
        .map(|j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign * (ln_front + ln_coefficient_sum(n, alpha, j)).exp()
        })
        .collect()
}

/// Explicit `β_k` together with its rounding-error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaExplicit {
    pub value: f64,
    pub error_estimate: f64,
    pub cancellation_digits: f64,
}

/// `Σ_j 𝔞_j γ(|k-m|+j+1, R²)`, written as
/// `Σ_j 𝔞_j (|k-m|+j)! P(|k-m|+j+1, R²)` so every term stays bounded.
pub fn beta_explicit(m: LandauIndex, k: u32, radius: DiskRadius) -> Result<BetaExplicit> {
    let (n, alpha) = reduced_indices(m, k);
    let x = radius.squared();
    let ln_front = ln_factorial(n) + ln_factorial(n + alpha);
    let mut acc = CompensatedSum::new();
    for j in 0..=2 * n {
        let a = alpha + j;
        let p = regularized_gamma_p(a as f64 + 1.0, x)?;
        if p == 0.0 {
            continue;
        }
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let magnitude = (ln_front + ln_coefficient_sum(n, alpha, j) + ln_factorial(a)).exp();
        acc.add(sign * magnitude * p);
    }
    let value = acc.value();
    Ok(BetaExplicit {
        value,
        error_estimate: 16.0 * f64::EPSILON * acc.abs_sum(),
        cancellation_digits: acc.cancellation_digits(),
    })
}

/// `β_k^{(m,R)}` from the incomplete-gamma formula.
///
/// Fails with [`Error::AccuracyLoss`] when the alternating sum cannot
/// guarantee [`BETA_ERROR_LIMIT`]; callers then use
/// [`beta_eigenvalue_quadrature`] (see [`beta_eigenvalue_served`]).
pub fn beta_eigenvalue(m: LandauIndex, k: u32, radius: DiskRadius) -> Result<f64> {
    let explicit = beta_explicit(m, k, radius)?;
    let trusted = explicit.error_estimate <= BETA_ERROR_LIMIT
        && explicit.error_estimate <= 1e-3 * explicit.value.abs()
        && explicit.value > -explicit.error_estimate
        && explicit.value < 1.0 + explicit.error_estimate;
    if !trusted {
        return Err(Error::AccuracyLoss {
            context: format!("beta_{k}(m={m}, R={radius})"),
            digits: explicit.cancellation_digits,
        });
    }
    debug_assert!(explicit.value > -1e-12 && explicit.value < 1.0 + 1e-12);
    Ok(explicit.value.clamp(0.0, 1.0))
}

fn beta_weight(n: u64, alpha: u64, rho: f64) -> f64 {
    if rho == 0.0 {
        return if alpha == 0 { 1.0 } else { 0.0 };
    }
    let ln_scale = ln_factorial(n) - ln_factorial(n + alpha) - rho + alpha as f64 * rho.ln();
    let poly = laguerre(n as usize, alpha as usize, rho);
    ln_scale.exp() * poly * poly
}

/// `((m∧k)!/(m∨k)!) ∫₀^{R²} e^{-ρ} ρ^{|k-m|} (L_{m∧k}^{(|k-m|)}(ρ))² dρ` by quadrature.
pub fn beta_eigenvalue_quadrature(m: LandauIndex, k: u32, radius: DiskRadius) -> Result<f64> {
    let (n, alpha) = reduced_indices(m, k);
    let tol = Tolerance {
        absolute: 1e-300,
        relative: ORACLE_TOL,
    };
    let r = integrate_adaptive(
        |rho| beta_weight(n, alpha, rho),
        0.0,
        radius.squared(),
        &[],
        tol,
    )?;
    Ok(r.value)
}

/// How a `β_k` entry was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BetaMethod {
    ClosedForm,
    Quadrature,
}

impl fmt::Display for BetaMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BetaMethod::ClosedForm => "closed_form",
            BetaMethod::Quadrature => "quadrature",
        })
    }
}

/// The explicit `β_k` when it can be trusted, the quadrature oracle otherwise.
pub fn beta_eigenvalue_served(
    m: LandauIndex,
    k: u32,
    radius: DiskRadius,
) -> Result<(f64, BetaMethod)> {
    match beta_eigenvalue(m, k, radius) {
        Ok(v) => Ok((v, BetaMethod::ClosedForm)),
        Err(Error::AccuracyLoss { .. }) => Ok((
            beta_eigenvalue_quadrature(m, k, radius)?,
            BetaMethod::Quadrature,
        )),
        Err(e) => Err(e),
    }
}

/// Product coefficients `A_j^{(q,p,α)}` with
/// `L_q^{(α)}(x) L_p^{(α)}(x) = Σ_j (-1)^j A_j x^j / j!`.
pub fn feldheim_product_coefficients(q: u32, p: u32, alpha: u32) -> Vec<f64> {
    let (q, p, a) = (q as i64, p as i64, alpha as i64);
    (0..=q + p)
        .map(|j| {
            (0..=j)
                .map(|l| binomial(j, l) * binomial(q + a, q - j + l) * binomial(p + a, p - l))
                .sum()
        })
        .collect()
}

/// `Σ_j (-1)^j A_j x^j / j!`, the product expansion evaluated in
/// double-double arithmetic (its terms can exceed the value by 10⁷).
pub fn feldheim_product_eval(q: u32, p: u32, alpha: u32, x: f64) -> f64 {
    let signed: Vec<f64> = feldheim_product_coefficients(q, p, alpha)
        .into_iter()
        .enumerate()
        .map(|(j, a)| if j % 2 == 0 { a } else { -a })
        .collect();
    exponential_series(&signed, x)
}

/// Linearization coefficients `C_s(m, α)`, `s = 0..=2m`, with
/// `(L_m^{(α)}(x))² = Σ_s C_s L_s^{(2α)}(x)`.
///
/// The last binomial is `C(m+α, m-r)`; with `C(m, m-r)` the expansion only
/// holds for `α = 0`.
pub fn feldheim_linearization(m: LandauIndex, alpha: u32) -> Vec<f64> {
    linearization_with(m, alpha, |m, a, r| binomial(m + a, m - r))
}

/// `Σ_s C_s(m, α) L_s^{(2α)}(x)` in double-double (terms can exceed the
/// value by 10⁷).
pub fn feldheim_linearization_eval(m: LandauIndex, alpha: u32, x: f64) -> f64 {
    let coefficients = feldheim_linearization(m, alpha);
    let basis = laguerre_sequence_dd(coefficients.len() - 1, 2 * alpha as usize, x);
    coefficients
        .iter()
        .zip(basis)
        .fold(DoubleDouble::ZERO, |acc, (&c, l)| acc + l.mul_f64(c))
        .to_f64()
}

/// The linearization coefficients with `C(m, m-r)` in place of
/// `C(m+α, m-r)`; kept to document the discrepancy.
pub fn feldheim_linearization_printed(m: LandauIndex, alpha: u32) -> Vec<f64> {
    linearization_with(m, alpha, |m, _, r| binomial(m, m - r))
}

fn linearization_with(m: LandauIndex, alpha: u32, last: impl Fn(i64, i64, i64) -> f64) -> Vec<f64> {
    let (m, a) = (m.get() as i64, alpha as i64);
    (0..=2 * m)
        .map(|s| {
            let sign = if s % 2 == 0 { 1.0 } else { -1.0 };
            sign * (0..=s)
                .map(|r| binomial(s, r) * binomial(m + a, m - s + r) * last(m, a, r))
                .sum::<f64>()
        })
        .collect()
}

/// `λ_k^{(m,R)} = ((m∧k)!/(m∨k)!) ∫₀^∞ e^{-ρ} ρ^{|k-m|} (L_{m∧k}^{(|k-m|)}(ρ))² G_R(√ρ) dρ`.
///
/// Integrated in `r = √ρ` over `[0, 2R]`, where `G_R` has its kink, plus
/// the tail `[4R², ∞)` on which `G_R = πR²`.
pub fn lambda_eigenvalue_quadrature(m: LandauIndex, k: u32, radius: DiskRadius) -> Result<f64> {
    let (n, alpha) = reduced_indices(m, k);
    let rr = radius.get();
    let tol = Tolerance::mixed(ORACLE_TOL);
    let disk = integrate_adaptive(
        |r| 2.0 * r * beta_weight(n, alpha, r * r) * g_weight(r, radius),
        0.0,
        2.0 * rr,
        &[],
        tol,
    )?;
    let tail = integrate_tail(
        |rho| beta_weight(n, alpha, rho),
        4.0 * rr * rr,
        1.0,
        ORACLE_TOL,
    )?;
    Ok(disk.value + PI * rr * rr * tail.value)
}

/// Value of the hypergeometric `λ_k` formula before calibration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaExplicit {
    pub value: f64,
    pub cancellation_digits: f64,
}

/// `(πR)² - c_{m,k}(R) Σ_{s=0}^{2m} A_s ₃F₃(2α+s+1, α+3/2, α+1; 2α+1, α+2, α+3; -4R²)`
/// with `α = k - m`, exactly as written (no calibration), for `k >= m`.
pub fn lambda_hypergeometric(m: LandauIndex, k: u32, radius: DiskRadius) -> Result<LambdaExplicit> {
    let mi = m.get();
    if k < mi {
        return Err(Error::Domain(format!(
            "explicit lambda_k needs k >= m (k = {k}, m = {mi})"
        )));
    }
    let (mu, ku) = (mi as i64, k as i64);
    let alpha = (k - mi) as f64;
    let a2 = 2 * (ku - mu);
    let rr = radius.get();
    // ln of m! π^{3/2} (2R)^{2α+4} Γ(α+3/2) / (4 Γ(α+2) k! (α+2)(α+1)); Γ(2α+1) goes into C(2α+s, s)
    let ln_front = ln_factorial(mi as u64)
        + 1.5 * PI.ln()
        + (2.0 * alpha + 4.0) * (2.0 * rr).ln()
        + ln_gamma(alpha + 1.5)
        - 4f64.ln()
        - ln_gamma(alpha + 2.0)
        - ln_factorial(k as u64)
        - ((alpha + 2.0) * (alpha + 1.0)).ln();
    let z = -4.0 * rr * rr;
    let mut acc = CompensatedSum::new();
    let mut worst_digits: f64 = 0.0;
    let mut scale = (PI * rr).powi(2);
    for s in 0..=2 * mu {
        let inner: f64 = (0..=s)
            .map(|r| binomial(s, r) * binomial(ku, mu - s + r) * binomial(ku, mu - r))
            .sum();
        if inner == 0.0 {
            continue;
        }
        let coefficient = (ln_front + ln_binomial(a2 + s, s) + inner.ln()).exp();
        let sign = if s % 2 == 0 { 1.0 } else { -1.0 };
        let spec = PFqSpec::new(
            &[alpha * 2.0 + s as f64 + 1.0, alpha + 1.5, alpha + 1.0],
            &[2.0 * alpha + 1.0, alpha + 2.0, alpha + 3.0],
            z,
        );
        let series = pfq(&spec, SeriesBudget::default())?;
        worst_digits = worst_digits.max(series.cancellation_digits);
        let term = sign * coefficient * series.value;
        scale += (coefficient * series.value).abs() * 10f64.powf(series.cancellation_digits);
        acc.add(-term);
    }
    acc.add((PI * rr).powi(2));
    let value = acc.value();
    let digits = worst_digits.max(cancellation_digits(scale, value));
    Ok(LambdaExplicit {
        value,
        cancellation_digits: digits,
    })
}

/// Ratio between the hypergeometric `λ` formula and the quadrature `λ`,
/// measured once at `(m, k, R) = (0, 0, 1)`.
pub fn lambda_calibration() -> f64 {
    static CALIBRATION: OnceLock<f64> = OnceLock::new();
    *CALIBRATION.get_or_init(|| {
        let m = LandauIndex::new(0);
        let r = DiskRadius::new(1.0).expect("unit radius");
        let explicit = lambda_hypergeometric(m, 0, r).expect("series converges at R = 1");
        let oracle = lambda_eigenvalue_quadrature(m, 0, r).expect("quadrature converges at R = 1");
        explicit.value / oracle
    })
}

/// Calibrated explicit `λ_k` for `k >= m`.
///
/// Fails with [`Error::AccuracyLoss`] once the alternating `₃F₃` series
/// cancel more than [`LAMBDA_DIGIT_LIMIT`] digits.
pub fn lambda_closed_form(m: LandauIndex, k: u32, radius: DiskRadius) -> Result<f64> {
    let explicit = lambda_hypergeometric(m, k, radius)?;
    if explicit.cancellation_digits > LAMBDA_DIGIT_LIMIT {
        return Err(Error::AccuracyLoss {
            context: format!("lambda_{k}(m={m}, R={radius})"),
            digits: explicit.cancellation_digits,
        });
    }
    Ok(explicit.value / lambda_calibration())
}

/// Truncation policy for eigenvalue tables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TablePolicy {
    /// Stop once the missing mass `R² - Σβ_k` drops below this.
    pub tolerance: f64,
    /// Fixed last index instead of the mass criterion.
    pub kmax: Option<u32>,
    /// Largest admissible last index; defaults to `10(R² + m) + 200`.
    pub cap: Option<u32>,
    /// Also evaluate the quadrature oracle for every entry.
    pub verify: bool,
}

impl Default for TablePolicy {
    fn default() -> Self {
        Self {
            tolerance: 1e-8,
            kmax: None,
            cap: None,
            verify: false,
        }
    }
}

impl TablePolicy {
    pub fn with_tolerance(tolerance: f64) -> Self {
        Self {
            tolerance,
            ..Self::default()
        }
    }

    fn cap_for(&self, m: LandauIndex, radius: DiskRadius) -> u32 {
        self.cap
            .unwrap_or_else(|| (10.0 * (radius.squared() + m.get() as f64) + 200.0).ceil() as u32)
    }
}

/// One row of an [`EigenvalueTable`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigenvalueEntry {
    pub k: u32,
    pub beta: f64,
    pub method: BetaMethod,
    /// Mass still missing after this row, `R² - Σ_{j<=k} β_j`.
    pub residual: f64,
    /// Explicit formula, when it could be trusted.
    pub closed_form: Option<f64>,
    /// Quadrature oracle, when verification was requested.
    pub oracle: Option<f64>,
}

/// Bernoulli parameters `β_0..=β_K` of the disk count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenvalueTable {
    pub m: LandauIndex,
    #[serde(rename = "R")]
    pub radius: DiskRadius,
    pub entries: Vec<EigenvalueEntry>,
    /// `max(R² - Σ_k β_k, 0)`: mass of the omitted entries.
    pub tail_bound: f64,
}

impl EigenvalueTable {
    pub fn values(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        self.entries.iter().map(|e| e.beta)
    }

    pub fn last_index(&self) -> u32 {
        self.entries.last().map_or(0, |e| e.k)
    }

    pub fn sum(&self) -> f64 {
        self.values().collect::<CompensatedSum>().value()
    }

    /// Largest `|closed form - oracle|` over verified entries.
    pub fn verification_gap(&self) -> Option<f64> {
        self.entries
            .iter()
            .filter_map(|e| Some((e.closed_form? - e.oracle?).abs()))
            .reduce(f64::max)
    }

    /// CSV with columns `k,beta,method,residual` (plus the comparison
    /// columns when `with_sources`).
    pub fn to_csv(&self, with_sources: bool) -> String {
        let mut out = String::from("k,beta,method,residual");
        if with_sources {
            out.push_str(",closed_form,oracle");
        }
        out.push('\n');
        let opt = |v: Option<f64>| v.map(crate::output::format_number).unwrap_or_default();
        for e in &self.entries {
            out.push_str(&format!(
                "{},{},{},{}",
                e.k,
                crate::output::format_number(e.beta),
                e.method,
                crate::output::format_number(e.residual)
            ));
            if with_sources {
                out.push_str(&format!(",{},{}", opt(e.closed_form), opt(e.oracle)));
            }
            out.push('\n');
        }
        out
    }
}

fn table_entry(
    m: LandauIndex,
    k: u32,
    radius: DiskRadius,
    verify: bool,
) -> Result<EigenvalueEntry> {
    let closed_form = match beta_eigenvalue(m, k, radius) {
        Ok(v) => Some(v),
        Err(Error::AccuracyLoss { .. }) => None,
        Err(e) => return Err(e),
    };
    let oracle = if verify || closed_form.is_none() {
        Some(beta_eigenvalue_quadrature(m, k, radius)?)
    } else {
        None
    };
    let (beta, method) = match closed_form {
        Some(v) => (v, BetaMethod::ClosedForm),
        None => (oracle.expect("oracle computed"), BetaMethod::Quadrature),
    };
    Ok(EigenvalueEntry {
        k,
        beta,
        method,
        residual: 0.0,
        closed_form,
        oracle: if verify { oracle } else { None },
    })
}

/// Builds `β_0, β_1, …` until the missing mass `R² - Σβ_k` is below
/// the policy tolerance (or up to `policy.kmax`).
///
/// Entries are computed in parallel blocks; the result does not depend on
/// the number of threads.
pub fn build_eigenvalue_table(
    m: LandauIndex,
    radius: DiskRadius,
    policy: &TablePolicy,
) -> Result<EigenvalueTable> {
    if policy.tolerance.is_nan() || policy.tolerance <= 0.0 {
        return Err(Error::Domain(format!(
            "table tolerance must be positive, got {}",
            policy.tolerance
        )));
    }
    const BLOCK: u32 = 16;
    let mass = radius.squared();
    let cap = policy.cap_for(m, radius);
    let last = policy.kmax;
    if let Some(kmax) = last {
        if kmax > cap {
            return Err(Error::BudgetExceeded {
                cap: cap as usize,
                residual: f64::NAN,
            });
        }
    }
    let mut entries: Vec<EigenvalueEntry> = Vec::new();
    let mut acc = CompensatedSum::new();
    let mut next = 0u32;
    loop {
        let end = match last {
            Some(kmax) => kmax + 1,
            None => (next + BLOCK).min(cap + 1),
        };
        let block: Vec<EigenvalueEntry> = (next..end)
            .into_par_iter()
            .map(|k| table_entry(m, k, radius, policy.verify))
            .collect::<Result<_>>()?;
        for mut entry in block {
            acc.add(entry.beta);
            entry.residual = mass - acc.value();
            entries.push(entry);
            if last.is_none() && entry.residual < policy.tolerance {
                return Ok(finish(m, radius, entries, mass, &acc));
            }
        }
        next = end;
        if last.is_some() {
            return Ok(finish(m, radius, entries, mass, &acc));
        }
        if next > cap {
            return Err(Error::BudgetExceeded {
                cap: cap as usize,
                residual: mass - acc.value(),
            });
        }
    }
}

fn finish(
    m: LandauIndex,
    radius: DiskRadius,
    entries: Vec<EigenvalueEntry>,
    mass: f64,
    acc: &CompensatedSum,
) -> EigenvalueTable {
    EigenvalueTable {
        m,
        radius,
        entries,
        tail_bound: (mass - acc.value()).max(0.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{factorial, laguerre_signed, lower_incomplete_gamma};

    fn lm(m: u32) -> LandauIndex {
        LandauIndex::new(m)
    }

    fn radius(r: f64) -> DiskRadius {
        DiskRadius::new(r).unwrap()
    }

    #[test]
    fn coefficient_examples() {
        let c = beta_coefficients(lm(0), 4);
        assert_eq!(c.len(), 1);
        assert!((c[0] - 1.0 / 24.0).abs() < 1e-16);
        let c = beta_coefficients(lm(1), 1);
        for (got, want) in c.iter().zip([1.0, -2.0, 1.0]) {
            assert!((got - want).abs() < 1e-14);
        }
        let c = beta_coefficients(lm(2), 0);
        assert_eq!(c.len(), 1);
        assert!((c[0] - 0.5).abs() < 1e-16);
    }

    #[test]
    fn coefficients_expand_the_weighted_square() {
        for m in 0..6u32 {
            for k in 0..8u32 {
                let (n, alpha) = (m.min(k) as usize, m.abs_diff(k) as usize);
                let c = beta_coefficients(lm(m), k);
                for &rho in &[0.3f64, 1.7, 4.2] {
                    let poly: f64 = c
                        .iter()
                        .enumerate()
                        .map(|(j, a)| a * rho.powi(j as i32))
                        .sum();
                    let l = laguerre(n, alpha, rho);
                    let want = factorial(n as u64) / factorial((n + alpha) as u64) * l * l;
                    assert!(
                        (poly - want).abs() < 1e-10 * (1.0 + want.abs()),
                        "m={m} k={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn beta_examples() {
        let b = beta_eigenvalue(lm(0), 0, radius(1.0)).unwrap();
        assert!((b - (1.0 - (-1f64).exp())).abs() < 1e-15);
        let b = beta_eigenvalue(lm(1), 1, radius(1.0)).unwrap();
        assert!((b - (1.0 - 2.0 * (-1f64).exp())).abs() < 1e-15);
        let q = beta_eigenvalue_quadrature(lm(1), 1, radius(1.0)).unwrap();
        assert!((q - (1.0 - 2.0 * (-1f64).exp())).abs() < 1e-14);
        let b = beta_eigenvalue(lm(3), 5, radius(2.0)).unwrap();
        let q = beta_eigenvalue_quadrature(lm(3), 5, radius(2.0)).unwrap();
        assert!(b > 0.0 && b < 1.0);
        assert!((b - q).abs() < 1e-9);
    }

    #[test]
    fn beta_is_symmetric_in_m_and_k() {
        for m in 0..8 {
            for k in 0..8 {
                let r = radius(1.7);
                assert_eq!(
                    beta_eigenvalue(lm(m), k, r).unwrap(),
                    beta_eigenvalue(lm(k), m, r).unwrap()
                );
            }
        }
    }

    #[test]
    fn daubechies_reduction() {
        for &r in &[1.0, 2.0] {
            for k in 0..=30u32 {
                let b = beta_eigenvalue(lm(0), k, radius(r)).unwrap();
                let want =
                    lower_incomplete_gamma(k as f64 + 1.0, r * r).unwrap() / factorial(k as u64);
                assert!((b - want).abs() <= 1e-12 * want, "k={k} R={r}");
            }
        }
    }

    #[test]
    fn beta_increases_with_radius() {
        for (m, k) in [(0, 0), (2, 3), (4, 1), (3, 9)] {
            let mut previous = 0.0;
            for r in [0.5, 1.0, 1.5, 2.0, 3.0] {
                let (b, _) = beta_eigenvalue_served(lm(m), k, radius(r)).unwrap();
                assert!(b > previous);
                previous = b;
            }
        }
    }

    #[test]
    fn heavy_cancellation_is_flagged_and_served_by_quadrature() {
        let r = radius(4.0);
        assert!(matches!(
            beta_eigenvalue(lm(12), 12, r),
            Err(Error::AccuracyLoss { .. })
        ));
        let (v, method) = beta_eigenvalue_served(lm(12), 12, r).unwrap();
        assert_eq!(method, BetaMethod::Quadrature);
        assert!(v > 0.0 && v < 1.0);
    }

    #[test]
    fn product_and_linearization_reconstruct_squares() {
        for m in 0..=5u32 {
            for alpha in 0..=4u32 {
                assert_eq!(
                    feldheim_linearization(lm(m), alpha).len(),
                    2 * m as usize + 1
                );
                let prod = feldheim_product_coefficients(m, m, alpha);
                for &x in &[0.4f64, 2.3, 7.9] {
                    let l = laguerre(m as usize, alpha as usize, x);
                    let via_lin = feldheim_linearization_eval(lm(m), alpha, x);
                    let via_prod = feldheim_product_eval(m, m, alpha, x);
                    let scale = (l * l).max(1.0);
                    assert!((via_lin - l * l).abs() < 1e-10 * scale, "m={m} a={alpha}");
                    assert!((via_prod - l * l).abs() < 1e-10 * scale, "m={m} a={alpha}");
                    assert_eq!(prod.len(), 2 * m as usize + 1);
                }
            }
        }
        assert_eq!(feldheim_linearization(lm(0), 3), vec![1.0]);
        assert_eq!(feldheim_linearization(lm(1), 0), vec![1.0, -2.0, 2.0]);
    }

    #[test]
    fn printed_linearization_fails_off_alpha_zero() {
        let x = 3.7;
        let l = laguerre(2, 1, x);
        let c = feldheim_linearization_printed(lm(2), 1);
        let v: f64 = c
            .iter()
            .enumerate()
            .map(|(s, c)| c * laguerre(s, 2, x))
            .sum();
        assert!((v - l * l).abs() > 0.1);
        assert_eq!(
            feldheim_linearization_printed(lm(3), 0),
            feldheim_linearization(lm(3), 0)
        );
    }

    #[test]
    fn index_reflection_used_by_the_mass_identity() {
        for m in 1..=8usize {
            for k in 0..m {
                let rho = 0.37 * (m + k) as f64 + 0.11;
                let lhs = laguerre_signed(m, k as i64 - m as i64, rho);
                let rhs = (-rho).powi((m - k) as i32) * factorial(k as u64) / factorial(m as u64)
                    * laguerre(k, m - k, rho);
                assert!(
                    (lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs()),
                    "m={m} k={k}"
                );
            }
        }
    }

    #[test]
    fn lambda_calibration_is_pi() {
        assert!(
            (lambda_calibration() - PI).abs() < 1e-10,
            "{}",
            lambda_calibration()
        );
    }

    #[test]
    fn lambda_closed_form_matches_quadrature() {
        for (m, k, r) in [
            (0, 0, 1.0),
            (1, 1, 1.0),
            (1, 3, 1.0),
            (2, 2, 1.5),
            (3, 4, 0.8),
        ] {
            let closed = lambda_closed_form(lm(m), k, radius(r)).unwrap();
            let quad = lambda_eigenvalue_quadrature(lm(m), k, radius(r)).unwrap();
            assert!(
                (closed - quad).abs() < 1e-8 * quad,
                "({m},{k},{r}): {closed} vs {quad}"
            );
        }
        assert!(lambda_closed_form(lm(2), 1, radius(1.0)).is_err());
        assert!(matches!(
            lambda_closed_form(lm(0), 0, radius(7.0)),
            Err(Error::AccuracyLoss { .. })
        ));
    }

    #[test]
    fn lambda_at_unit_radius_is_pi_times_variance() {
        let quad = lambda_eigenvalue_quadrature(lm(0), 0, radius(1.0)).unwrap();
        assert!((quad - PI * 0.523_777_611_802_608_7).abs() < 1e-11);
    }

    #[test]
    fn table_mass_and_bounds() {
        let t = build_eigenvalue_table(lm(0), radius(1.0), &TablePolicy::default()).unwrap();
        let s = t.sum();
        assert!((1.0 - 1e-8..=1.0 + 1e-15).contains(&s));
        assert!(t.tail_bound < 1e-8);
        let t = build_eigenvalue_table(lm(2), radius(2.0), &TablePolicy::default()).unwrap();
        assert!((t.sum() - 4.0).abs() < 1e-8);
        assert!(t.values().all(|b| b > 0.0 && b < 1.0));
        let t = build_eigenvalue_table(
            lm(0),
            radius(1.0),
            &TablePolicy {
                kmax: Some(5),
                verify: true,
                ..TablePolicy::default()
            },
        )
        .unwrap();
        assert_eq!(t.entries.len(), 6);
        assert!(t.verification_gap().unwrap() < 1e-13);
    }

    #[test]
    fn tail_bound_shrinks_with_more_entries() {
        let r = radius(2.0);
        let bound = |kmax| {
            build_eigenvalue_table(
                lm(1),
                r,
                &TablePolicy {
                    kmax: Some(kmax),
                    ..TablePolicy::default()
                },
            )
            .unwrap()
            .tail_bound
        };
        assert!(bound(4) > bound(8) && bound(8) > bound(16));
    }

    #[test]
    fn table_cap_is_enforced() {
        let policy = TablePolicy {
            cap: Some(3),
            ..TablePolicy::default()
        };
        assert!(matches!(
            build_eigenvalue_table(lm(0), radius(2.0), &policy),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
