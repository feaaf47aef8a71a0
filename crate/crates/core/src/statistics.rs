//! Mean and variance of the number of points in the disk.
//!
//! The variance is computed along independent routes — nested quadrature
//! of the Laguerre integral (the reference), the geometric overlap
//! integral, the Bernoulli sum over the concentration spectrum, the
//! hypergeometric closed form and, for `m = 0`, the Bessel form — and
//! [`variance_report`] cross-checks all of them.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernels::{g_weight, DiskRadius, LandauIndex};
use crate::quadrature::{integrate_finite, integrate_tail, integrate_with_breakpoints};
use crate::specfun::{
    bessel_i_scaled, binomial, hyp2f2, laguerre, ln_factorial, ln_gamma, pfq, BesselOrder,
    CompensatedSum, HypergeometricMethod, PFqSpec, SeriesBudget,
};
use crate::spectra::{
    build_eigenvalue_table, lambda_calibration, lambda_eigenvalue_quadrature, EigenvalueTable,
    TablePolicy,
};

pub const DEFAULT_QUADRATURE_TOL: f64 = 1e-10;
pub const DEFAULT_AGREEMENT_TOL: f64 = 1e-6;

/// Largest radius for the Bessel route (`2R² <= 10⁴`).
pub const BESSEL_MAX_RADIUS: f64 = 70.0;

/// Relative error a closed-form variance may carry before it is refused.
pub const CLOSED_FORM_ERROR_LIMIT: f64 = 1e-8;

/// Tolerances shared by the statistics routes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Policy {
    pub table: TablePolicy,
    pub quadrature_tol: f64,
    pub agreement_tol: f64,
}

impl Default for Policy {
    fn default() -> Self {
        Self {
            table: TablePolicy::default(),
            quadrature_tol: DEFAULT_QUADRATURE_TOL,
            agreement_tol: DEFAULT_AGREEMENT_TOL,
        }
    }
}

/// `E[#D_R] = Σ_k β_k`, which equals `R²` up to the table tolerance.
pub fn mean_count(m: LandauIndex, radius: DiskRadius, policy: &Policy) -> Result<f64> {
    Ok(build_eigenvalue_table(m, radius, &policy.table)?.sum())
}

fn laguerre_weight(m: LandauIndex, t: f64) -> f64 {
    let l = laguerre(m.as_usize(), 0, t);
    (-t).exp() * l * l
}

// where e^{-r²}·poly stops mattering; helps the adaptive split for large R
fn radial_breakpoints(radius: DiskRadius) -> Vec<f64> {
    [2.0, 4.0, 8.0, 16.0]
        .into_iter()
        .filter(|&r| r < 2.0 * radius.get())
        .collect()
}

/// `(R/π) ∫₀^∞ e^{-t} L_m(t)² Inner(t) dt` with
/// `Inner(t) = 2 ∫₀^{√(t ∧ 4R²)} √(1 - u²/4R²) du`, both by quadrature.
///
/// The outer integral runs in `r = √t` over `[0, 2R]`; beyond `t = 4R²`
/// the inner integral is the constant `πR`.
pub fn variance_quadrature_38(m: LandauIndex, radius: DiskRadius, tol: f64) -> Result<f64> {
    let rr = radius.get();
    let c2 = 4.0 * rr * rr;
    // u = 2R sin φ turns 2√(1 - u²/4R²) du into 4R cos²φ dφ, smooth up to u = 2R
    let inner = |upper: f64| -> Result<f64> {
        let phi_max = (upper / (2.0 * rr)).min(1.0).asin();
        let r = integrate_finite(
            |phi: f64| 4.0 * rr * phi.cos().powi(2),
            0.0,
            phi_max,
            (tol * 1e-3).max(1e-14),
        )?;
        Ok(r.value)
    };
    let failure = std::sync::Mutex::new(None);
    let outer = integrate_with_breakpoints(
        |r| {
            let w = laguerre_weight(m, r * r);
            if w == 0.0 {
                return 0.0;
            }
            match inner(r) {
                Ok(v) => 2.0 * r * w * v,
                Err(e) => {
                    failure.lock().expect("unpoisoned").get_or_insert(e);
                    f64::NAN
                }
            }
        },
        0.0,
        2.0 * rr,
        &radial_breakpoints(radius),
        tol,
    );
    if let Some(e) = failure.into_inner().expect("unpoisoned") {
        return Err(e);
    }
    let tail = integrate_tail(|t| laguerre_weight(m, t), c2, 1.0, tol)?;
    Ok(rr / PI * (outer?.value + PI * rr * tail.value))
}

/// `(1/π) ∫₀^∞ e^{-ρ} L_m(ρ)² G_R(√ρ) dρ`, the overlap-area form.
pub fn variance_geometric_310(m: LandauIndex, radius: DiskRadius, tol: f64) -> Result<f64> {
    let rr = radius.get();
    let disk = integrate_with_breakpoints(
        |r| 2.0 * r * laguerre_weight(m, r * r) * g_weight(r, radius),
        0.0,
        2.0 * rr,
        &radial_breakpoints(radius),
        tol,
    )?;
    let tail = integrate_tail(|t| laguerre_weight(m, t), 4.0 * rr * rr, 1.0, tol)?;
    Ok((disk.value + PI * rr * rr * tail.value) / PI)
}

/// `Σ_k β_k (1 - β_k)` over an eigenvalue table; the omitted entries
/// contribute at most `table.tail_bound`.
pub fn bernoulli_variance(table: &EigenvalueTable) -> f64 {
    table
        .values()
        .map(|b| b * (1.0 - b))
        .collect::<CompensatedSum>()
        .value()
}

/// Variance as a sum of Bernoulli variances over the concentration spectrum.
pub fn variance_bernoulli_sum(m: LandauIndex, radius: DiskRadius, policy: &Policy) -> Result<f64> {
    Ok(bernoulli_variance(&build_eigenvalue_table(
        m,
        radius,
        &policy.table,
    )?))
}

/// Which outer range the hypergeometric closed form sums over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SumRange {
    /// `s = 0..=2m` with the linearization coefficients.
    Full,
    /// `s = 0..=m` with `(-1)^s C(m,s) ₃F₂(-m,-s,-s; 1, m-s+1; -1)`.
    Printed,
}

impl fmt::Display for SumRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SumRange::Full => "s = 0..2m",
            SumRange::Printed => "s = 0..m",
        })
    }
}

/// One evaluation of `R²[1 - R² Σ_s c_s ₂F₂(s+1, 3/2; 3, 2; -4R²)]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormEvaluation {
    pub value: f64,
    pub relative_error_estimate: f64,
    /// Whether any `₂F₂` needed the integral representation.
    pub used_integral: bool,
}

/// Outer-sum weights `c_s` of the closed form for the given range.
pub fn closed_form_coefficients(m: LandauIndex, range: SumRange) -> Result<Vec<f64>> {
    let mi = m.get() as i64;
    let sign = |s: i64| if s % 2 == 0 { 1.0 } else { -1.0 };
    match range {
        SumRange::Full => Ok((0..=2 * mi)
            .map(|s| {
                sign(s)
                    * (0..=s)
                        .map(|r| binomial(s, r) * binomial(mi, r) * binomial(mi, s - r))
                        .sum::<f64>()
            })
            .collect()),
        SumRange::Printed => (0..=mi)
            .map(|s| {
                let spec = PFqSpec::new(
                    &[-(mi as f64), -(s as f64), -(s as f64)],
                    &[1.0, (mi - s) as f64 + 1.0],
                    -1.0,
                );
                Ok(sign(s) * binomial(mi, s) * pfq(&spec, SeriesBudget::default())?.value)
            })
            .collect(),
    }
}

/// Evaluates the closed form for one sum range.
pub fn closed_form_evaluate(
    m: LandauIndex,
    radius: DiskRadius,
    range: SumRange,
) -> Result<ClosedFormEvaluation> {
    let r2 = radius.squared();
    let z = -4.0 * r2;
    let coefficients = closed_form_coefficients(m, range)?;
    let mut sum = CompensatedSum::new();
    let mut error = 0.0;
    let mut used_integral = false;
    for (s, &c) in coefficients.iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        let f = hyp2f2([s as f64 + 1.0, 1.5], [3.0, 2.0], z, 2.5)?;
        used_integral |= f.method == HypergeometricMethod::EulerKummer;
        sum.add(c * f.value);
        error += (c * f.error_estimate).abs() + 4.0 * f64::EPSILON * (c * f.value).abs();
    }
    let bracket = 1.0 - r2 * sum.value();
    let value = r2 * bracket;
    let absolute = r2 * (r2 * error + f64::EPSILON);
    Ok(ClosedFormEvaluation {
        value,
        relative_error_estimate: absolute / value.abs(),
        used_integral,
    })
}

/// The closed-form variance with both sum ranges, the one nearest the
/// quadrature reference selected.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormVariance {
    pub value: f64,
    pub selected: SumRange,
    pub full_range: Result<f64>,
    pub printed_range: Result<f64>,
    pub reference: f64,
    pub used_integral: bool,
}

impl ClosedFormVariance {
    /// Value of the range that was not selected, if it could be evaluated.
    pub fn alternative(&self) -> Option<(SumRange, f64)> {
        match self.selected {
            SumRange::Full => self
                .printed_range
                .clone()
                .ok()
                .map(|v| (SumRange::Printed, v)),
            SumRange::Printed => self.full_range.clone().ok().map(|v| (SumRange::Full, v)),
        }
    }
}

fn trusted(evaluation: Result<ClosedFormEvaluation>, context: &str) -> Result<(f64, bool)> {
    let e = evaluation?;
    if e.relative_error_estimate > CLOSED_FORM_ERROR_LIMIT || !e.value.is_finite() {
        return Err(Error::AccuracyLoss {
            context: context.to_string(),
            digits: (e.relative_error_estimate / f64::EPSILON).log10().max(0.0),
        });
    }
    Ok((e.value, e.used_integral))
}

/// Hypergeometric closed form of the variance.
///
/// Both outer-sum ranges are evaluated and the one closer to
/// [`variance_quadrature_38`] is returned (ties go to the full range),
/// provided it agrees with it to [`DEFAULT_AGREEMENT_TOL`].
/// Fails with [`Error::AccuracyLoss`] when neither range can be
/// evaluated reliably, in particular for `4R² > 144`.
pub fn variance_closed_form(m: LandauIndex, radius: DiskRadius) -> Result<ClosedFormVariance> {
    let context = |range| format!("closed-form variance ({range}) at m={m}, R={radius}");
    let full = trusted(
        closed_form_evaluate(m, radius, SumRange::Full),
        &context(SumRange::Full),
    );
    let printed = trusted(
        closed_form_evaluate(m, radius, SumRange::Printed),
        &context(SumRange::Printed),
    );
    let reference = variance_quadrature_38(m, radius, DEFAULT_QUADRATURE_TOL)?;
    let distance = |r: &Result<(f64, bool)>| {
        r.as_ref()
            .map_or(f64::INFINITY, |(v, _)| (v - reference).abs())
    };
    let (selected, chosen) = if distance(&full) <= distance(&printed) {
        (SumRange::Full, &full)
    } else {
        (SumRange::Printed, &printed)
    };
    let (value, used_integral) = match chosen {
        Ok(v) if distance(chosen) <= DEFAULT_AGREEMENT_TOL * reference.abs() => *v,
        // neither range reproduces the reference: report why the full range failed
        _ => {
            return Err(match &full {
                Err(e) => e.clone(),
                Ok((v, _)) => Error::AccuracyLoss {
                    context: format!(
                        "{}: {v:.16e} disagrees with quadrature {reference:.16e}",
                        context(SumRange::Full)
                    ),
                    digits: 0.0,
                },
            })
        }
    };
    Ok(ClosedFormVariance {
        value,
        selected,
        full_range: full.map(|(v, _)| v),
        printed_range: printed.map(|(v, _)| v),
        reference,
        used_integral,
    })
}

/// `R² e^{-2R²} (I₀(2R²) + I₁(2R²))`, the `m = 0` variance.
pub fn variance_bessel_m0(radius: DiskRadius) -> Result<f64> {
    let rr = radius.get();
    if rr > BESSEL_MAX_RADIUS {
        return Err(Error::Domain(format!(
            "Bessel route supports R <= {BESSEL_MAX_RADIUS}, got {rr}"
        )));
    }
    let x = 2.0 * rr * rr;
    Ok(rr * rr * (bessel_i_scaled(BesselOrder::Zero, x) + bessel_i_scaled(BesselOrder::One, x)))
}

/// Large-radius slope `C_m = lim Var/R`:
/// `(2/(π m!)) Γ(m+3/2) ₃F₂(-m, -1/2, -1/2; 1, -1/2-m; 1)`.
pub fn asymptotic_constant(m: LandauIndex) -> f64 {
    let mf = m.get() as f64;
    let spec = PFqSpec::new(&[-mf, -0.5, -0.5], &[1.0, -0.5 - mf], 1.0);
    let series = pfq(&spec, SeriesBudget::default()).expect("terminating series");
    let front = (2f64.ln() - PI.ln() - ln_factorial(m.get() as u64) + ln_gamma(mf + 1.5)).exp();
    front * series.value
}

/// `(2/π) ∫₀^∞ e^{-t} L_m(t)² √t dt`, the slope as an integral.
pub fn asymptotic_slope_integral(m: LandauIndex) -> Result<f64> {
    let r = integrate_tail(|r| 2.0 * r * r * laguerre_weight(m, r * r), 0.0, 0.5, 1e-13)?;
    Ok(2.0 / PI * r.value)
}

/// A variance route.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    #[serde(rename = "quadrature_38")]
    Quadrature38,
    #[serde(rename = "geometric_310")]
    Geometric310,
    BernoulliSum,
    ClosedForm,
    BesselM0,
}

impl Route {
    pub const ALL: [Route; 5] = [
        Route::Quadrature38,
        Route::Geometric310,
        Route::BernoulliSum,
        Route::ClosedForm,
        Route::BesselM0,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Route::Quadrature38 => "quadrature_38",
            Route::Geometric310 => "geometric_310",
            Route::BernoulliSum => "bernoulli_sum",
            Route::ClosedForm => "closed_form",
            Route::BesselM0 => "bessel_m0",
        }
    }

    pub fn applies_to(self, m: LandauIndex) -> bool {
        self != Route::BesselM0 || m.get() == 0
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Relative gap between two route values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Discrepancy {
    pub first: Route,
    pub second: Route,
    pub relative: f64,
}

/// Every applicable variance route with their mutual agreement.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VarianceReport {
    pub m: LandauIndex,
    #[serde(rename = "R")]
    pub radius: DiskRadius,
    pub mean: f64,
    /// The reference value (nested quadrature).
    pub variance: f64,
    #[serde(rename = "values")]
    pub route_values: BTreeMap<Route, f64>,
    pub discrepancies: Vec<Discrepancy>,
    pub max_pairwise_discrepancy: f64,
    /// `λ_m/π` from quadrature of the `G_R`-quantized eigenvalue.
    pub lambda_variance: Option<f64>,
    pub lambda_calibration: f64,
    pub notes: Vec<String>,
}

impl VarianceReport {
    pub fn value(&self, route: Route) -> Option<f64> {
        self.route_values.get(&route).copied()
    }

    /// Whether every present route agrees within `tol` relative.
    pub fn routes_agree(&self, tol: f64) -> bool {
        self.max_pairwise_discrepancy <= tol
    }
}

impl fmt::Display for VarianceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "variance of the disk count, m = {}, R = {}",
            self.m, self.radius
        )?;
        writeln!(f, "  {:<16} {:>24}", "mean", format!("{:.16e}", self.mean))?;
        for (route, value) in &self.route_values {
            writeln!(f, "  {:<16} {:>24}", route.name(), format!("{value:.16e}"))?;
        }
        if let Some(l) = self.lambda_variance {
            writeln!(f, "  {:<16} {:>24}", "lambda_m/pi", format!("{l:.16e}"))?;
        }
        writeln!(
            f,
            "  max pairwise relative discrepancy {:.3e}",
            self.max_pairwise_discrepancy
        )?;
        for note in &self.notes {
            writeln!(f, "  note: {note}")?;
        }
        Ok(())
    }
}

struct RouteOutcome {
    value: f64,
    notes: Vec<String>,
}

fn run_route(
    route: Route,
    m: LandauIndex,
    radius: DiskRadius,
    policy: &Policy,
    table: &EigenvalueTable,
) -> Result<RouteOutcome> {
    let plain = |value| RouteOutcome {
        value,
        notes: Vec::new(),
    };
    match route {
        Route::Quadrature38 => variance_quadrature_38(m, radius, policy.quadrature_tol).map(plain),
        Route::Geometric310 => variance_geometric_310(m, radius, policy.quadrature_tol).map(plain),
        Route::BernoulliSum => Ok(RouteOutcome {
            value: bernoulli_variance(table),
            notes: vec![format!(
                "bernoulli_sum: {} eigenvalues, omitted mass {:.3e}",
                table.entries.len(),
                table.tail_bound
            )],
        }),
        Route::BesselM0 => variance_bessel_m0(radius).map(plain),
        Route::ClosedForm => {
            let cf = variance_closed_form(m, radius)?;
            let mut notes = vec![format!("closed_form: sum range {} selected", cf.selected)];
            if let Some((range, v)) = cf.alternative() {
                notes.push(format!(
                    "closed_form: sum range {range} gives {v:.16e} (relative gap to reference {:.3e})",
                    (v - cf.reference).abs() / cf.reference
                ));
            }
            if cf.used_integral {
                notes.push("closed_form: 2F2 evaluated by its Euler integral".to_string());
            }
            Ok(RouteOutcome {
                value: cf.value,
                notes,
            })
        }
    }
}

/// Runs every applicable route (concurrently) and compares them.
///
/// A failing route is recorded in the notes; the report is an error only
/// when fewer than two routes succeed.
pub fn variance_report(
    m: LandauIndex,
    radius: DiskRadius,
    policy: &Policy,
) -> Result<VarianceReport> {
    let table = build_eigenvalue_table(m, radius, &policy.table)?;
    let routes: Vec<Route> = Route::ALL.into_iter().filter(|r| r.applies_to(m)).collect();
    let (outcomes, lambda) = rayon::join(
        || {
            routes
                .par_iter()
                .map(|&route| (route, run_route(route, m, radius, policy, &table)))
                .collect::<Vec<_>>()
        },
        || lambda_eigenvalue_quadrature(m, m.get(), radius),
    );
    let mut route_values = BTreeMap::new();
    let mut notes = Vec::new();
    let mut first_error = None;
    for (route, outcome) in outcomes {
        match outcome {
            Ok(o) => {
                route_values.insert(route, o.value);
                notes.extend(o.notes);
            }
            Err(e) => {
                let fallback = if matches!(e, Error::AccuracyLoss { .. }) {
                    "; quadrature_38 serves this value"
                } else {
                    ""
                };
                notes.push(format!("{route}: {e}{fallback}"));
                first_error.get_or_insert(e);
            }
        }
    }
    if route_values.len() < 2 {
        return Err(first_error.unwrap_or(Error::InsufficientData {
            needed: 2,
            got: route_values.len(),
        }));
    }
    let values: Vec<(Route, f64)> = route_values.iter().map(|(r, v)| (*r, *v)).collect();
    let mut discrepancies = Vec::new();
    for (i, &(a, va)) in values.iter().enumerate() {
        for &(b, vb) in &values[i + 1..] {
            discrepancies.push(Discrepancy {
                first: a,
                second: b,
                relative: (va - vb).abs() / va.abs().max(vb.abs()),
            });
        }
    }
    let max_pairwise_discrepancy = discrepancies.iter().map(|d| d.relative).fold(0.0, f64::max);
    let mean = table.sum();
    for (route, v) in &values {
        if !(*v > 0.0 && *v < mean) {
            notes.push(format!(
                "{route}: value {v:.16e} is not strictly between 0 and the mean"
            ));
        }
    }
    let calibration = lambda_calibration();
    notes.push(format!(
        "lambda calibration: hypergeometric lambda = {calibration:.16e} x quadrature lambda; variance = lambda_m/pi"
    ));
    let lambda_variance = match lambda {
        Ok(l) => Some(l / PI),
        Err(e) => {
            notes.push(format!("lambda_m quadrature: {e}"));
            None
        }
    };
    let variance = route_values
        .get(&Route::Quadrature38)
        .copied()
        .unwrap_or(values[0].1);
    Ok(VarianceReport {
        m,
        radius,
        mean,
        variance,
        route_values,
        discrepancies,
        max_pairwise_discrepancy,
        lambda_variance,
        lambda_calibration: calibration,
        notes,
    })
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    const VAR_0_1: f64 = 0.523_777_611_802_608_7;

    fn lm(m: u32) -> LandauIndex {
        LandauIndex::new(m)
    }

    fn radius(r: f64) -> DiskRadius {
        DiskRadius::new(r).unwrap()
    }

    #[test]
    fn unit_disk_values() {
        let r = radius(1.0);
        let q = variance_quadrature_38(lm(0), r, 1e-12).unwrap();
        let g = variance_geometric_310(lm(0), r, 1e-12).unwrap();
        let b = variance_bessel_m0(r).unwrap();
        for v in [q, g, b] {
            assert!((v - VAR_0_1).abs() < 1e-12, "{v}");
        }
        let cf = variance_closed_form(lm(0), r).unwrap();
        assert!((cf.value - VAR_0_1).abs() < 1e-13);
        let bern = variance_bernoulli_sum(lm(0), r, &Policy::default()).unwrap();
        assert!((bern - VAR_0_1).abs() < 1e-6);
    }

    #[test]
    fn reference_values_at_higher_levels() {
        // extended-precision quadrature values
        for (m, r, want) in [
            (1, 1.0, 0.767_838_123_691_017),
            (2, 1.0, 0.818_555_203_583_638),
            (1, 2.0, 1.886_179_812_886_911),
            (3, 0.5, 0.231_029_241_220_863),
        ] {
            let q = variance_quadrature_38(lm(m), radius(r), 1e-12).unwrap();
            assert!((q - want).abs() < 1e-12 * want, "m={m} R={r}: {q}");
        }
    }

    #[test]
    fn closed_form_selects_full_range_and_matches_references() {
        for (m, r, want) in [
            (1, 3.0, 2.904_891_441_258_982),
            (1, 6.0, 5.895_923_497_814_044),
            (2, 3.0, 3.711_032_240_446_627),
            (4, 3.0, 4.845_125_937_094_082),
            (4, 6.0, 10.160_290_091_249_881),
        ] {
            let cf = variance_closed_form(lm(m), radius(r)).unwrap();
            assert_eq!(cf.selected, SumRange::Full);
            assert!(
                (cf.value - want).abs() < 1e-9 * want,
                "m={m} R={r}: {}",
                cf.value
            );
        }
        let cf = variance_closed_form(lm(1), radius(1.0)).unwrap();
        let printed = cf.printed_range.unwrap();
        assert!((printed - 0.954_32).abs() < 1e-4, "{printed}");
    }

    #[test]
    fn closed_form_refuses_beyond_its_range() {
        assert!(matches!(
            variance_closed_form(lm(0), radius(12.0)),
            Err(Error::AccuracyLoss { .. })
        ));
    }

    #[test]
    fn bessel_form_identity_and_limits() {
        for r in [0.5, 1.0, 2.0, 4.0, 6.0] {
            let b = variance_bessel_m0(radius(r)).unwrap();
            let cf = closed_form_evaluate(lm(0), radius(r), SumRange::Full).unwrap();
            assert!(
                (cf.value - b).abs() <= 1e-10 * b,
                "R={r}: {} vs {b}",
                cf.value
            );
        }
        let tiny = variance_bessel_m0(radius(1e-3)).unwrap();
        assert!((tiny - 1e-6).abs() < 1e-11);
        let big = variance_bessel_m0(radius(40.0)).unwrap();
        assert!((big - 40.0 / PI.sqrt()).abs() < 0.01 * big);
        assert!(variance_bessel_m0(radius(71.0)).is_err());
    }

    #[test]
    fn asymptotic_constants() {
        assert!((asymptotic_constant(lm(0)) - 1.0 / PI.sqrt()).abs() < 1e-15);
        let want = [
            0.564_189_583_5,
            0.987_331_771_2,
            1.278_242_025_2,
            1.514_055_640_2,
            1.717_672_156_8,
        ];
        for (m, w) in want.iter().enumerate() {
            let c = asymptotic_constant(lm(m as u32));
            assert!((c - w).abs() < 1e-9, "m={m}: {c}");
            let integral = asymptotic_slope_integral(lm(m as u32)).unwrap();
            assert!((c - integral).abs() < 1e-10, "m={m}: {integral}");
        }
        let ratio = asymptotic_constant(lm(64)) / (8.0 * 8.0 / (PI * PI));
        assert!((ratio - 1.003_888).abs() < 1e-5, "{ratio}");
    }

    #[test]
    fn large_radius_slope() {
        for m in 0..=3 {
            let v = variance_quadrature_38(lm(m), radius(40.0), 1e-10).unwrap();
            let c = asymptotic_constant(lm(m));
            assert!((v / 40.0 - c).abs() < 0.02 * c, "m={m}");
        }
    }

    #[test]
    fn small_disk_variance_approaches_mean() {
        for m in 0..3 {
            let r = radius(0.05);
            let v = variance_quadrature_38(lm(m), r, 1e-12).unwrap();
            assert!((v / r.squared() - 1.0).abs() < 0.01, "m={m}: {v}");
        }
    }

    #[test]
    fn mean_is_r_squared() {
        let p = Policy::default();
        assert!((mean_count(lm(0), radius(1.0), &p).unwrap() - 1.0).abs() < 1e-8);
        assert!((mean_count(lm(3), radius(2.0), &p).unwrap() - 4.0).abs() < 1e-8);
        assert!(mean_count(lm(2), radius(1e-3), &p).unwrap() < 1e-5);
    }

    #[test]
    fn report_at_unit_radius_has_all_five_routes() {
        let report = variance_report(lm(0), radius(1.0), &Policy::default()).unwrap();
        assert_eq!(report.route_values.len(), 5);
        for v in report.route_values.values() {
            assert!((v - VAR_0_1).abs() < 1e-6);
        }
        assert!(report.routes_agree(1e-6));
        assert!((report.lambda_variance.unwrap() - VAR_0_1).abs() < 1e-10);
    }

    #[test]
    fn report_in_the_cancellation_regime() {
        let report = variance_report(lm(0), radius(12.0), &Policy::default()).unwrap();
        assert!(report.value(Route::ClosedForm).is_none());
        assert!(report.notes.iter().any(|n| n.starts_with("closed_form")));
        assert!(report.routes_agree(1e-6), "{report}");
    }

    #[test]
    fn report_at_level_four() {
        let report = variance_report(lm(4), radius(3.0), &Policy::default()).unwrap();
        assert_eq!(report.route_values.len(), 4);
        assert!(report.routes_agree(1e-6), "{report}");
        assert!(report.route_values.values().all(|&v| v < report.mean));
    }
}
