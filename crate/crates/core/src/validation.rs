//! The acceptance suite: one check per criterion plus the measured
//! evidence behind each resolved ambiguity of the source formulas.
//!
//! Every check is deterministic (random instances come from fixed seeds);
//! only the recorded runtimes vary between runs.

use std::f64::consts::PI;
use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernels::{DiskRadius, LandauIndex};
use crate::sampler::{
    empirical_pmf, estimate_cumulants, poisson_binomial_pmf, sample_counts_from_table,
    total_variation_distance,
};
use crate::specfun::{
    factorial, laguerre, laguerre_signed, ln_factorial, lower_incomplete_gamma, pfq, pfq_partial,
    regularized_gamma_p, PFqSpec, SeriesBudget,
};
use crate::spectra::{
    beta_coefficients, beta_eigenvalue_quadrature, beta_eigenvalue_served, build_eigenvalue_table,
    feldheim_linearization_eval, feldheim_linearization_printed, feldheim_product_eval,
    lambda_calibration, lambda_eigenvalue_quadrature, lambda_hypergeometric, BetaMethod,
    TablePolicy,
};
use crate::statistics::{
    asymptotic_constant, asymptotic_slope_integral, closed_form_evaluate, mean_count,
    variance_bessel_m0, variance_closed_form, variance_quadrature_38, variance_report, Policy,
    Route, SumRange,
};

pub const GRID_LEVELS: [u32; 5] = [0, 1, 2, 3, 4];
pub const GRID_RADII: [f64; 4] = [0.5, 1.0, 2.0, 4.0];

/// Identity instances per suite.
pub const IDENTITY_INSTANCES: usize = 1000;
pub const IDENTITY_TOL: f64 = 1e-10;
const IDENTITY_SEED: u64 = 0x5eed_0006;

pub const MONTE_CARLO_REPLICATES: usize = 100_000;
pub const MONTE_CARLO_SEED: u64 = 20_240_601;

/// `R²e^{-2R²}(I₀ + I₁)(2R²)` at `R = 1`, evaluated independently to 30 digits.
pub const BESSEL_ORACLE_UNIT_DISK: f64 = 0.523_777_611_802_608_7;
/// The same quantity as quoted alongside the criterion.
pub const QUOTED_UNIT_DISK_VARIANCE: f64 = 0.523_779_0;

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub details: Vec<String>,
    #[serde(rename = "runtime_seconds")]
    pub elapsed: f64,
}

impl CriterionOutcome {
    /// `PASS 3 m = 0 Bessel closed form` style summary.
    pub fn line(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        format!("{verdict} [{}] {}", self.id, self.title)
    }
}

/// A resolved ambiguity together with the measurement that settles it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evidence {
    pub topic: &'static str,
    pub resolution: String,
    pub measurements: Vec<String>,
    pub supported: bool,
}

/// Everything `validate` reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub criteria: Vec<CriterionOutcome>,
    pub evidence: Vec<Evidence>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }
}

/// Runtimes are left out so two runs print identical text.
impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.criteria {
            writeln!(f, "{}", c.line())?;
            for d in &c.details {
                writeln!(f, "    {d}")?;
            }
        }
        writeln!(f)?;
        writeln!(f, "resolved ambiguities")?;
        for e in &self.evidence {
            let tag = if e.supported {
                "supported"
            } else {
                "NOT SUPPORTED"
            };
            writeln!(f, "  {} -> {} ({tag})", e.topic, e.resolution)?;
            for m in &e.measurements {
                writeln!(f, "    {m}")?;
            }
        }
        let passed = self.criteria.iter().filter(|c| c.passed).count();
        write!(f, "{passed}/{} criteria passed", self.criteria.len())
    }
}

struct Check {
    passed: bool,
    details: Vec<String>,
}

impl Check {
    fn new() -> Self {
        Self {
            passed: true,
            details: Vec::new(),
        }
    }

    fn require(&mut self, ok: bool, detail: String) {
        self.passed &= ok;
        if !ok {
            self.details.push(format!("failed: {detail}"));
        }
    }

    fn note(&mut self, detail: String) {
        self.details.push(detail);
    }

    fn error(&mut self, what: &str, e: &Error) {
        self.passed = false;
        self.details.push(format!("failed: {what}: {e}"));
    }
}

fn lm(m: u32) -> LandauIndex {
    LandauIndex::new(m)
}

fn radius(r: f64) -> DiskRadius {
    DiskRadius::new(r).expect("valid grid radius")
}

fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn timed(id: u8, title: &'static str, body: impl FnOnce(&mut Check)) -> CriterionOutcome {
    let start = Instant::now();
    let mut check = Check::new();
    body(&mut check);
    CriterionOutcome {
        id,
        title,
        passed: check.passed,
        details: check.details,
        elapsed: start.elapsed().as_secs_f64(),
    }
}

fn within(elapsed: Duration, limit: f64, check: &mut Check, what: &str) {
    check.require(
        elapsed.as_secs_f64() < limit,
        format!("{what} took longer than {limit} s"),
    );
}

/// Criterion 1: `E[#D_R] = R²` on the grid, each run under a second.
pub fn criterion_mean_identity() -> CriterionOutcome {
    timed(1, "mean count equals R^2", |check| {
        let policy = Policy::default();
        let mut worst: f64 = 0.0;
        for m in GRID_LEVELS {
            for r in GRID_RADII {
                let start = Instant::now();
                match mean_count(lm(m), radius(r), &policy) {
                    Ok(mean) => {
                        let residual = (mean - r * r).abs();
                        worst = worst.max(residual);
                        check.require(
                            residual < 1e-8,
                            format!("(m={m}, R={r}): residual {residual:.3e}"),
                        );
                    }
                    Err(e) => check.error(&format!("mean (m={m}, R={r})"), &e),
                }
                within(start.elapsed(), 1.0, check, &format!("mean (m={m}, R={r})"));
            }
        }
        check.note(format!(
            "largest |mean - R^2| over the grid: {worst:.1e} (limit 1e-8)"
        ));
    })
}

/// Criterion 2: all variance routes agree to `1e-6` on the grid.
pub fn criterion_route_agreement() -> CriterionOutcome {
    timed(2, "variance routes agree pairwise", |check| {
        let start = Instant::now();
        let policy = Policy::default();
        let mut worst: f64 = 0.0;
        let mut flagged = Vec::new();
        for m in GRID_LEVELS {
            for r in GRID_RADII {
                match variance_report(lm(m), radius(r), &policy) {
                    Ok(report) => {
                        for route in [
                            Route::Quadrature38,
                            Route::Geometric310,
                            Route::BernoulliSum,
                        ] {
                            check.require(
                                report.value(route).is_some(),
                                format!("(m={m}, R={r}): route {route} missing"),
                            );
                        }
                        if report.value(Route::ClosedForm).is_none() {
                            flagged.push(format!("(m={m}, R={r})"));
                        }
                        worst = worst.max(report.max_pairwise_discrepancy);
                        check.require(
                            report.routes_agree(1e-6),
                            format!(
                                "(m={m}, R={r}): max discrepancy {:.3e}",
                                report.max_pairwise_discrepancy
                            ),
                        );
                    }
                    Err(e) => check.error(&format!("report (m={m}, R={r})"), &e),
                }
            }
        }
        within(start.elapsed(), 60.0, check, "route suite");
        check.note(format!(
            "largest pairwise relative discrepancy: {worst:.1e} (limit 1e-6)"
        ));
        if flagged.is_empty() {
            check.note("closed form unflagged at every grid point".to_string());
        } else {
            check.note(format!("closed form flagged at {}", flagged.join(", ")));
        }
    })
}

/// Criterion 3: the `m = 0` Bessel form and its identity with the closed form.
pub fn criterion_bessel_form() -> CriterionOutcome {
    timed(3, "m = 0 Bessel closed form", |check| {
        match variance_bessel_m0(radius(1.0)) {
            Ok(v) => {
                let gap = (v - BESSEL_ORACLE_UNIT_DISK).abs();
                check.require(gap <= 1e-6, format!("Var(0, 1) = {v:.16} vs oracle"));
                check.note(format!(
                    "Var(0, 1) = {v:.16}; derived oracle {BESSEL_ORACLE_UNIT_DISK:.16} (gap {gap:.1e}); \
                     the quoted 0.5237790 differs from the oracle by {:.2e}",
                    (BESSEL_ORACLE_UNIT_DISK - QUOTED_UNIT_DISK_VARIANCE).abs()
                ));
            }
            Err(e) => check.error("Bessel route at R = 1", &e),
        }
        let mut worst: f64 = 0.0;
        for r in [0.5, 1.0, 2.0, 4.0, 6.0] {
            let pair = variance_bessel_m0(radius(r)).and_then(|b| {
                Ok((
                    b,
                    closed_form_evaluate(lm(0), radius(r), SumRange::Full)?.value,
                ))
            });
            match pair {
                Ok((bessel, closed)) => {
                    let rel = relative(closed, bessel);
                    worst = worst.max(rel);
                    check.require(
                        rel <= 1e-10,
                        format!("R={r}: closed form vs Bessel {rel:.3e}"),
                    );
                }
                Err(e) => check.error(&format!("identity at R={r}"), &e),
            }
        }
        check.note(format!("closed form vs Bessel, R in {{0.5,1,2,4,6}}: worst relative gap {worst:.1e} (limit 1e-10)"));
    })
}

/// Criterion 4: `Var/R → C_m`.
pub fn criterion_asymptotic_slope() -> CriterionOutcome {
    timed(4, "asymptotic slope of the variance", |check| {
        for m in 0..=3 {
            let c = asymptotic_constant(lm(m));
            match variance_quadrature_38(lm(m), radius(40.0), 1e-10) {
                Ok(v) => {
                    let rel = relative(v / 40.0, c);
                    check.require(
                        rel < 0.02,
                        format!("m={m}: Var(40)/40 vs C_m off by {rel:.3e}"),
                    );
                    check.note(format!(
                        "m={m}: Var(40)/40 = {:.10}, C_m = {c:.10}, relative gap {rel:.2e}",
                        v / 40.0
                    ));
                }
                Err(e) => check.error(&format!("Var(m={m}, R=40)"), &e),
            }
        }
        let c0 = asymptotic_constant(lm(0));
        let exact = 1.0 / PI.sqrt();
        check.require((c0 - exact).abs() < 1e-14, format!("C_0 = {c0:.16}"));
        check.note(format!("C_0 = {c0:.16}, 1/sqrt(pi) = {exact:.16}"));
        let ratio = asymptotic_constant(lm(64)) / (8.0 * 8.0 / (PI * PI));
        check.require((ratio - 1.0).abs() < 0.1, format!("C_64 ratio {ratio}"));
        check.note(format!("C_64 / (8 sqrt(64) / pi^2) = {ratio:.6}"));
    })
}

/// Criterion 5: `m = 0` eigenvalues are normalized incomplete gammas.
pub fn criterion_daubechies() -> CriterionOutcome {
    timed(5, "m = 0 eigenvalues reduce to P(k+1, R^2)", |check| {
        let mut worst: f64 = 0.0;
        for r in [1.0, 2.0] {
            for k in 0..=30u32 {
                let pair = beta_eigenvalue_served(lm(0), k, radius(r))
                    .and_then(|(b, _)| Ok((b, regularized_gamma_p(k as f64 + 1.0, r * r)?)));
                match pair {
                    Ok((beta, expected)) => {
                        let rel = relative(beta, expected);
                        worst = worst.max(rel);
                        check.require(rel <= 1e-12, format!("k={k}, R={r}: relative {rel:.3e}"));
                    }
                    Err(e) => check.error(&format!("beta_{k}(0, {r})"), &e),
                }
            }
        }
        check.note(format!(
            "worst relative gap for k <= 30, R in {{1,2}}: {worst:.1e} (limit 1e-12)"
        ));
    })
}

struct SuiteResult {
    name: &'static str,
    worst: f64,
    failures: usize,
}

fn run_suite(
    name: &'static str,
    stream: u64,
    mut instance: impl FnMut(&mut ChaCha8Rng) -> Result<f64>,
) -> Result<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(IDENTITY_SEED);
    rng.set_stream(stream);
    let mut worst: f64 = 0.0;
    let mut failures = 0;
    for _ in 0..IDENTITY_INSTANCES {
        let err = instance(&mut rng)?;
        worst = worst.max(err);
        if err.is_nan() || err > IDENTITY_TOL {
            failures += 1;
        }
    }
    Ok(SuiteResult {
        name,
        worst,
        failures,
    })
}

// scaled error |a - b| / max(1, |b|): relative error is undefined at Laguerre zeros
fn scaled_error(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

fn feldheim_product_suite() -> Result<SuiteResult> {
    run_suite("Feldheim product", 1, |rng| {
        let x = rng.random_range(0.0..20.0);
        let (q, p, alpha) = (
            rng.random_range(0..=6u32),
            rng.random_range(0..=6u32),
            rng.random_range(0..=4u32),
        );
        let direct =
            laguerre(q as usize, alpha as usize, x) * laguerre(p as usize, alpha as usize, x);
        Ok(scaled_error(feldheim_product_eval(q, p, alpha, x), direct))
    })
}

fn feldheim_linearization_suite() -> Result<SuiteResult> {
    run_suite("Feldheim linearization", 2, |rng| {
        let x = rng.random_range(0.0..20.0);
        let (m, alpha) = (rng.random_range(0..=6u32), rng.random_range(0..=4u32));
        let l = laguerre(m as usize, alpha as usize, x);
        Ok(scaled_error(
            feldheim_linearization_eval(lm(m), alpha, x),
            l * l,
        ))
    })
}

/// `Σ_{l=0}^{200} (m!/l!) ρ^{l-m} (L_m^{(l-m)}(ρ))²`, which tends to `e^ρ`.
pub fn bateman_partial_sum(m: u32, rho: f64) -> f64 {
    let ln_rho = rho.ln();
    (0..=200u64)
        .map(|l| {
            let poly = laguerre_signed(m as usize, l as i64 - m as i64, rho);
            let ln_scale =
                ln_factorial(m as u64) - ln_factorial(l) + (l as f64 - m as f64) * ln_rho;
            ln_scale.exp() * poly * poly
        })
        .sum()
}

fn bateman_suite() -> Result<SuiteResult> {
    run_suite("Bateman summation", 3, |rng| {
        let rho = rng.random_range(1e-3..=16.0);
        let m = rng.random_range(0..=4u32);
        Ok(relative(bateman_partial_sum(m, rho), rho.exp()))
    })
}

fn index_reflection_suite() -> Result<SuiteResult> {
    run_suite("index reflection", 4, |rng| {
        let m = rng.random_range(1..=8usize);
        let k = rng.random_range(0..m);
        let rho = rng.random_range(1e-3..20.0);
        let lhs = laguerre_signed(m, k as i64 - m as i64, rho);
        let rhs = (-rho).powi((m - k) as i32) * factorial(k as u64) / factorial(m as u64)
            * laguerre(k, m - k, rho);
        Ok((lhs - rhs).abs() / rhs.abs().max(lhs.abs()).max(f64::MIN_POSITIVE))
    })
}

fn contiguous_suite() -> Result<SuiteResult> {
    let budget = SeriesBudget::default();
    run_suite("pFq contiguous relation", 5, |rng| {
        let p = rng.random_range(1..=2usize);
        let q = rng.random_range(p..=p + 1);
        let a: Vec<f64> = (0..p).map(|_| rng.random_range(0.1..3.0)).collect();
        let b: Vec<f64> = (0..q - 1).map(|_| rng.random_range(0.5..3.0)).collect();
        let d = rng.random_range(0.0..3.0);
        let z = rng.random_range(-4.0..=4.0);
        let with = |extra_num: &[f64], extra_den: &[f64]| {
            let num: Vec<f64> = a.iter().chain(extra_num).copied().collect();
            let den: Vec<f64> = b.iter().chain(extra_den).copied().collect();
            pfq(&PFqSpec::new(&num, &den, z), budget).map(|s| s.value)
        };
        let first = with(&[], &[d + 3.0])? / (d + 2.0);
        let second = with(&[d + 1.0], &[d + 2.0, d + 2.0])? / (d + 1.0);
        let rhs = -with(&[d + 1.0], &[d + 2.0, d + 3.0])? / ((d + 2.0) * (d + 1.0));
        let scale = first.abs().max(second.abs()).max(rhs.abs());
        Ok((first - second - rhs).abs() / scale)
    })
}

/// Criterion 6: randomized identity suites.
pub fn criterion_identity_suites() -> CriterionOutcome {
    timed(6, "identity property suites", |check| {
        let start = Instant::now();
        let suites: [fn() -> Result<SuiteResult>; 5] = [
            feldheim_product_suite,
            feldheim_linearization_suite,
            bateman_suite,
            index_reflection_suite,
            contiguous_suite,
        ];
        for suite in suites {
            match suite() {
                Ok(s) => {
                    check.require(
                        s.failures == 0,
                        format!(
                            "{}: {} of {IDENTITY_INSTANCES} instances above 1e-10",
                            s.name, s.failures
                        ),
                    );
                    check.note(format!(
                        "{}: {IDENTITY_INSTANCES} instances, worst error {:.1e}",
                        s.name, s.worst
                    ));
                }
                Err(e) => check.error("identity suite", &e),
            }
        }
        within(start.elapsed(), 10.0, check, "identity suites");
    })
}

/// Criterion 7: closed-form eigenvalues against quadrature, and `λ_m/π`
/// against the variance routes.
pub fn criterion_eigenvalue_oracles() -> CriterionOutcome {
    timed(
        7,
        "closed-form eigenvalues match quadrature oracles",
        |check| {
            let mut worst_beta: f64 = 0.0;
            let mut served_by_oracle = 0;
            let mut total = 0;
            for r in GRID_RADII {
                for m in 0..=12u32 {
                    for k in 0..=12u32 {
                        total += 1;
                        let pair =
                            beta_eigenvalue_served(lm(m), k, radius(r)).and_then(|(b, method)| {
                                Ok((b, method, beta_eigenvalue_quadrature(lm(m), k, radius(r))?))
                            });
                        match pair {
                            Ok((served, method, oracle)) => {
                                let gap = (served - oracle).abs();
                                worst_beta = worst_beta.max(gap);
                                if method == BetaMethod::Quadrature {
                                    served_by_oracle += 1;
                                }
                                check.require(
                                    gap <= 1e-9,
                                    format!("beta_{k}(m={m}, R={r}): gap {gap:.3e}"),
                                );
                            }
                            Err(e) => check.error(&format!("beta_{k}(m={m}, R={r})"), &e),
                        }
                    }
                }
            }
            check.note(format!(
            "beta, m,k <= 12, R in {{0.5,1,2,4}}: worst |closed - oracle| {worst_beta:.1e} (limit 1e-9); \
             {served_by_oracle} of {total} entries flagged for cancellation and served by the oracle"
        ));
            let policy = Policy {
                table: TablePolicy::with_tolerance(1e-9),
                ..Policy::default()
            };
            let mut worst_lambda: f64 = 0.0;
            for m in GRID_LEVELS {
                for r in GRID_RADII {
                    let lambda = lambda_eigenvalue_quadrature(lm(m), m, radius(r));
                    let report = variance_report(lm(m), radius(r), &policy);
                    match (lambda, report) {
                        (Ok(l), Ok(report)) => {
                            for (route, v) in &report.route_values {
                                let rel = relative(l / PI, *v);
                                worst_lambda = worst_lambda.max(rel);
                                check.require(
                                    rel <= 1e-8,
                                    format!("lambda/pi vs {route} at (m={m}, R={r}): {rel:.3e}"),
                                );
                            }
                        }
                        (Err(e), _) | (_, Err(e)) => {
                            check.error(&format!("lambda (m={m}, R={r})"), &e)
                        }
                    }
                }
            }
            check.note(format!(
            "lambda_m/pi vs every variance route, m <= 4, R <= 4: worst relative gap {worst_lambda:.1e} (limit 1e-8)"
        ));
        },
    )
}

/// Criterion 8: Monte Carlo counts at `(m, R) = (1, 2)`.
pub fn criterion_monte_carlo() -> CriterionOutcome {
    timed(8, "Monte Carlo counts match the exact law", |check| {
        let start = Instant::now();
        let (m, r) = (lm(1), radius(2.0));
        let outcome = (|| -> Result<()> {
            let table = build_eigenvalue_table(m, r, &TablePolicy::default())?;
            let sample = sample_counts_from_table(&table, MONTE_CARLO_REPLICATES, MONTE_CARLO_SEED);
            let c = estimate_cumulants(&sample.counts)?;
            let oracle_var = variance_quadrature_38(m, r, 1e-10)?;
            let z_mean = (c.mean - 4.0) / c.se_mean;
            let z_var = (c.variance - oracle_var) / c.se_variance;
            let exact = poisson_binomial_pmf(table.values());
            let tv = total_variation_distance(&empirical_pmf(&sample.counts), &exact);
            check.require(
                z_mean.abs() <= 4.0,
                format!("mean {} is {z_mean:.2} SE from 4", c.mean),
            );
            check.require(
                z_var.abs() <= 4.0,
                format!("variance {} is {z_var:.2} SE from {oracle_var}", c.variance),
            );
            check.require(tv < 0.01, format!("total variation {tv:.4}"));
            check.note(format!(
                "{MONTE_CARLO_REPLICATES} replicates, seed {MONTE_CARLO_SEED}: mean {:.5} ({z_mean:+.2} SE), \
                 variance {:.5} vs {oracle_var:.5} ({z_var:+.2} SE), TV distance {tv:.4}",
                c.mean, c.variance
            ));
            Ok(())
        })();
        if let Err(e) = outcome {
            check.error("Monte Carlo", &e);
        }
        within(start.elapsed(), 30.0, check, "Monte Carlo");
    })
}

/// `Σ_j 𝔞_j γ(|k-m|+j+shift, R²)`: shift 1 is the working formula, shift -1
/// the alternative reading.
fn beta_with_gamma_shift(m: u32, k: u32, r: f64, shift: i64) -> Result<f64> {
    let alpha = (k as i64 - m as i64).abs();
    beta_coefficients(lm(m), k)
        .iter()
        .enumerate()
        .map(|(j, a)| {
            let order = alpha + j as i64 + shift;
            if order <= 0 {
                return Err(Error::Domain(format!("gamma({order}, R^2) is undefined")));
            }
            Ok(a * lower_incomplete_gamma(order as f64, r * r)?)
        })
        .sum()
}

fn evidence_gamma_exponent() -> Evidence {
    let mut measurements = Vec::new();
    let mut supported = true;
    for (m, k, r) in [(1u32, 1u32, 1.0), (2, 3, 1.5), (3, 1, 2.0)] {
        let oracle = beta_eigenvalue_quadrature(lm(m), k, radius(r));
        let plus = beta_with_gamma_shift(m, k, r, 1);
        let minus = beta_with_gamma_shift(m, k, r, -1);
        match (oracle, plus) {
            (Ok(o), Ok(p)) => {
                let minus_text = match &minus {
                    Ok(v) => format!("{v:.10} (gap {:.1e})", (v - o).abs()),
                    Err(e) => format!("undefined ({e})"),
                };
                supported &= (p - o).abs() < 1e-10 && minus.map_or(true, |v| (v - o).abs() > 1e-3);
                measurements.push(format!(
                    "(m={m}, k={k}, R={r}): quadrature {o:.10}; exponent j+1 {p:.10} (gap {:.1e}); exponent j-1 {minus_text}",
                    (p - o).abs()
                ));
            }
            _ => supported = false,
        }
    }
    Evidence {
        topic: "incomplete-gamma exponent",
        resolution: "gamma(|k-m|+j+1, R^2)".to_string(),
        measurements,
        supported,
    }
}

fn evidence_sum_range() -> Evidence {
    let mut measurements = Vec::new();
    let mut supported = true;
    for (m, r) in [(1u32, 1.0), (2, 1.0), (1, 2.0)] {
        match variance_closed_form(lm(m), radius(r)) {
            Ok(cf) => {
                let full = cf.full_range.clone().unwrap_or(f64::NAN);
                let printed = cf.printed_range.clone().unwrap_or(f64::NAN);
                supported &= cf.selected == SumRange::Full && relative(full, cf.reference) < 1e-10;
                measurements.push(format!(
                    "(m={m}, R={r}): quadrature {:.10}; s = 0..2m {full:.10}; s = 0..m {printed:.10}",
                    cf.reference
                ));
            }
            Err(e) => {
                supported = false;
                measurements.push(format!("(m={m}, R={r}): {e}"));
            }
        }
    }
    Evidence {
        topic: "closed-form variance sum range",
        resolution: "s = 0..2m".to_string(),
        measurements,
        supported,
    }
}

fn evidence_slope_sign() -> Evidence {
    let mut measurements = Vec::new();
    let mut supported = true;
    for m in 0..=4u32 {
        match asymptotic_slope_integral(lm(m)) {
            Ok(integral) => {
                let c = asymptotic_constant(lm(m));
                supported &= relative(c, integral) < 1e-9;
                measurements.push(format!(
                    "m={m}: 3F2 with -m gives {c:.12}; slope integral {integral:.12}"
                ));
            }
            Err(e) => {
                supported = false;
                measurements.push(format!("m={m}: {e}"));
            }
        }
    }
    for m in [1u32, 2] {
        let mf = m as f64;
        let spec = PFqSpec::new(&[mf, -0.5, -0.5], &[1.0, -0.5 - mf], 1.0);
        let partial = |n| {
            pfq_partial(
                &spec,
                SeriesBudget {
                    max_terms: n,
                    tolerance: 1e-17,
                },
            )
        };
        match (partial(1_000), partial(10_000)) {
            (Ok(a), Ok(b)) => {
                supported &= !b.converged;
                measurements.push(format!(
                    "m={m}: 3F2 with +m, partial sums after 1e3 / 1e4 terms {:.6} / {:.6} (diverges)",
                    a.value, b.value
                ));
            }
            (Err(e), _) | (_, Err(e)) => measurements.push(format!("m={m}: 3F2 with +m: {e}")),
        }
    }
    Evidence {
        topic: "sign of m in the slope constant",
        resolution: "-m (terminating series)".to_string(),
        measurements,
        supported,
    }
}

fn evidence_lambda_calibration() -> Evidence {
    let c = lambda_calibration();
    let mut supported = (c - PI).abs() < 1e-10;
    let mut measurements = vec![format!(
        "ratio at (m, k, R) = (0, 0, 1): {c:.14} (pi = {PI:.14})"
    )];
    for (m, k, r) in [(1u32, 1u32, 1.0), (2, 3, 1.5), (3, 3, 0.8)] {
        let pair = lambda_hypergeometric(lm(m), k, radius(r))
            .and_then(|h| Ok((h.value, lambda_eigenvalue_quadrature(lm(m), k, radius(r))?)));
        match pair {
            Ok((h, q)) => {
                supported &= relative(h / q, PI) < 1e-8;
                measurements.push(format!("ratio at ({m}, {k}, {r}): {:.14}", h / q));
            }
            Err(e) => {
                supported = false;
                measurements.push(format!("({m}, {k}, {r}): {e}"));
            }
        }
    }
    Evidence {
        topic: "lambda calibration constant",
        resolution: "pi".to_string(),
        measurements,
        supported,
    }
}

fn evidence_linearization() -> Evidence {
    let x = 3.7;
    let l = laguerre(2, 1, x);
    let printed: f64 = feldheim_linearization_printed(lm(2), 1)
        .iter()
        .enumerate()
        .map(|(s, c)| c * laguerre(s, 2, x))
        .sum();
    let corrected = feldheim_linearization_eval(lm(2), 1, x);
    Evidence {
        topic: "linearization coefficient binomial",
        resolution: "C(m+alpha, m-r)".to_string(),
        measurements: vec![format!(
            "(m, alpha, x) = (2, 1, 3.7): L^2 = {:.12}; C(m, m-r) gives {printed:.12}; C(m+alpha, m-r) gives {corrected:.12}",
            l * l
        )],
        supported: (corrected - l * l).abs() < 1e-12 && (printed - l * l).abs() > 0.1,
    }
}

fn evidence_unit_disk_value() -> Evidence {
    let bessel = variance_bessel_m0(radius(1.0)).unwrap_or(f64::NAN);
    let quadrature = variance_quadrature_38(lm(0), radius(1.0), 1e-12).unwrap_or(f64::NAN);
    Evidence {
        topic: "quoted Var(0, 1) = 0.5237790",
        resolution: format!("{BESSEL_ORACLE_UNIT_DISK:.16} (the quoted figure is a rounding slip)"),
        measurements: vec![format!(
            "Bessel form {bessel:.16}; nested quadrature {quadrature:.16}; quoted value off by {:.2e}",
            (QUOTED_UNIT_DISK_VARIANCE - bessel).abs()
        )],
        supported: (bessel - BESSEL_ORACLE_UNIT_DISK).abs() < 1e-14
            && (quadrature - BESSEL_ORACLE_UNIT_DISK).abs() < 1e-11,
    }
}

/// The measured evidence for each resolved ambiguity.
pub fn resolved_ambiguities() -> Vec<Evidence> {
    vec![
        evidence_gamma_exponent(),
        evidence_sum_range(),
        evidence_slope_sign(),
        evidence_lambda_calibration(),
        evidence_linearization(),
        evidence_unit_disk_value(),
    ]
}

/// Criterion 9: every resolution is backed by its measurement.
pub fn criterion_ambiguity_report(evidence: &[Evidence]) -> CriterionOutcome {
    timed(
        9,
        "resolved ambiguities documented with evidence",
        |check| {
            for e in evidence {
                check.require(
                    e.supported,
                    format!("{}: measurement does not support {}", e.topic, e.resolution),
                );
            }
            check.note(format!("{} resolutions, listed below", evidence.len()));
        },
    )
}

/// Runs criterion `id` (1..=9).
pub fn run_criterion(id: u8) -> Option<CriterionOutcome> {
    Some(match id {
        1 => criterion_mean_identity(),
        2 => criterion_route_agreement(),
        3 => criterion_bessel_form(),
        4 => criterion_asymptotic_slope(),
        5 => criterion_daubechies(),
        6 => criterion_identity_suites(),
        7 => criterion_eigenvalue_oracles(),
        8 => criterion_monte_carlo(),
        9 => criterion_ambiguity_report(&resolved_ambiguities()),
        _ => return None,
    })
}

/// The whole suite, criteria in order.
pub fn validate() -> ValidationReport {
    let evidence = resolved_ambiguities();
    let mut criteria: Vec<CriterionOutcome> = (1..=8).filter_map(run_criterion).collect();
    criteria.push(criterion_ambiguity_report(&evidence));
    ValidationReport { criteria, evidence }
}
