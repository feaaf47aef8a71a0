//! The `polyginibre` command line.
//!
//! Every flag can also come from an environment variable prefixed with
//! `POLYGINIBRE_` (`POLYGINIBRE_M`, `POLYGINIBRE_RADIUS`, ...); flags win.
//! Exit status: 0 success, 1 numeric or validation failure, 2 usage error.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::kernels::{DiskRadius, LandauIndex};
use crate::output::{format_number, normalize_json};
use crate::sampler::{estimate_cumulants, sample_counts};
use crate::spectra::{build_eigenvalue_table, TablePolicy};
use crate::statistics::{
    asymptotic_constant, mean_count, variance_quadrature_38, variance_report, Policy,
    DEFAULT_QUADRATURE_TOL,
};
use crate::validation::validate;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "polyginibre",
    version,
    about = "Disk-count statistics of the polyanalytic Ginibre process"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv, env = "POLYGINIBRE_FORMAT")]
    pub format: Format,

    /// Write to this file instead of standard output.
    #[arg(long, global = true, env = "POLYGINIBRE_OUT")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Concentration eigenvalues with closed-form and oracle columns.
    Eigs(EigsArgs),
    /// Expected number of points in the disk.
    Mean(PointArgs),
    /// Number variance along every route.
    Variance(PointArgs),
    /// Monte Carlo disk counts.
    Sample(SampleArgs),
    /// Variance against the radius.
    Curve(CurveArgs),
    /// Run the acceptance suite.
    Validate,
}

#[derive(Debug, Clone, Args)]
pub struct Level {
    /// Landau level.
    #[arg(long, default_value_t = 0, env = "POLYGINIBRE_M")]
    pub m: u32,
}

#[derive(Debug, Clone, Args)]
pub struct PointArgs {
    #[command(flatten)]
    pub level: Level,
    /// Disk radius R.
    #[arg(long, env = "POLYGINIBRE_RADIUS", value_parser = parse_radius)]
    pub radius: DiskRadius,
    /// Tolerance (table mass for `mean`, quadrature for `variance`).
    #[arg(long, env = "POLYGINIBRE_TOL", value_parser = parse_positive)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct EigsArgs {
    #[command(flatten)]
    pub point: PointArgs,
    /// Last eigenvalue index (default: until the missing mass is below --tol).
    #[arg(long, env = "POLYGINIBRE_KMAX")]
    pub kmax: Option<u32>,
}

#[derive(Debug, Clone, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub point: PointArgs,
    #[arg(long, default_value_t = 10_000, env = "POLYGINIBRE_REPLICATES",
          value_parser = clap::value_parser!(u64).range(1..))]
    pub replicates: u64,
    #[arg(long, default_value_t = 0, env = "POLYGINIBRE_SEED")]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct CurveArgs {
    #[command(flatten)]
    pub level: Level,
    #[arg(long, default_value_t = 0.5, env = "POLYGINIBRE_R_MIN", value_parser = parse_positive)]
    pub r_min: f64,
    #[arg(long, default_value_t = 20.0, env = "POLYGINIBRE_R_MAX", value_parser = parse_positive)]
    pub r_max: f64,
    #[arg(long, default_value_t = 40, env = "POLYGINIBRE_R_STEPS",
          value_parser = clap::value_parser!(u32).range(1..))]
    pub r_steps: u32,
    #[arg(long, env = "POLYGINIBRE_TOL", value_parser = parse_positive)]
    pub tol: Option<f64>,
}

fn parse_radius(s: &str) -> std::result::Result<DiskRadius, String> {
    let r: f64 = s.parse().map_err(|e| format!("{e}"))?;
    DiskRadius::new(r).map_err(|e| e.to_string())
}

fn parse_positive(s: &str) -> std::result::Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(format!("expected a positive number, got {s}"))
    }
}

/// Rendered command output and whether it counts as success.
pub struct Rendered {
    pub text: String,
    pub success: bool,
}

fn render(format: Format, json: Value, csv: impl FnOnce() -> String) -> Rendered {
    let text = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&normalize_json(json)).expect("serializable");
            s.push('\n');
            s
        }
        Format::Csv => csv(),
    };
    Rendered {
        text,
        success: true,
    }
}

fn table_policy(tol: Option<f64>, kmax: Option<u32>, verify: bool) -> TablePolicy {
    let mut policy = TablePolicy::default();
    if let Some(t) = tol {
        policy.tolerance = t;
    }
    policy.kmax = kmax;
    policy.verify = verify;
    policy
}

fn eigs(args: &EigsArgs, format: Format) -> Result<Rendered> {
    let PointArgs { level, radius, tol } = &args.point;
    let m = LandauIndex::new(level.m);
    let table = build_eigenvalue_table(m, *radius, &table_policy(*tol, args.kmax, true))?;
    let mut notes = vec![format!("omitted mass {}", format_number(table.tail_bound))];
    if let Some(gap) = table.verification_gap() {
        notes.push(format!("max |closed_form - oracle| {}", format_number(gap)));
    }
    let json = json!({
        "command": "eigs",
        "m": m,
        "R": radius,
        "values": table.values().collect::<Vec<_>>(),
        "entries": table.entries,
        "tail_bound": table.tail_bound,
        "notes": notes,
    });
    Ok(render(format, json, || table.to_csv(true)))
}

fn mean(args: &PointArgs, format: Format) -> Result<Rendered> {
    let m = LandauIndex::new(args.level.m);
    let policy = Policy {
        table: table_policy(args.tol, None, false),
        ..Policy::default()
    };
    let value = mean_count(m, args.radius, &policy)?;
    let r2 = args.radius.squared();
    let residual = (value - r2).abs();
    let json = json!({
        "command": "mean",
        "m": m,
        "R": args.radius,
        "values": {"mean": value, "R2": r2, "residual": residual},
        "notes": [],
    });
    Ok(render(format, json, || {
        format!(
            "m,R,mean,residual\n{},{},{},{}\n",
            m,
            format_number(args.radius.get()),
            format_number(value),
            format_number(residual)
        )
    }))
}

fn variance(args: &PointArgs, format: Format) -> Result<Rendered> {
    let m = LandauIndex::new(args.level.m);
    let policy = Policy {
        quadrature_tol: args.tol.unwrap_or(DEFAULT_QUADRATURE_TOL),
        ..Policy::default()
    };
    let report = variance_report(m, args.radius, &policy)?;
    let mut json = serde_json::to_value(&report).expect("serializable");
    json["command"] = json!("variance");
    Ok(render(format, json, || {
        let mut out = String::from("route,value\n");
        for (route, v) in &report.route_values {
            out.push_str(&format!("{route},{}\n", format_number(*v)));
        }
        if let Some(l) = report.lambda_variance {
            out.push_str(&format!("lambda_m_over_pi,{}\n", format_number(l)));
        }
        for note in &report.notes {
            out.push_str(&format!("# {note}\n"));
        }
        out
    }))
}

fn sample(args: &SampleArgs, format: Format) -> Result<Rendered> {
    let PointArgs { level, radius, tol } = &args.point;
    let m = LandauIndex::new(level.m);
    let replicates = usize::try_from(args.replicates)
        .map_err(|_| Error::Domain("too many replicates".to_string()))?;
    let sample = sample_counts(
        m,
        *radius,
        replicates,
        args.seed,
        &table_policy(*tol, None, false),
    )?;
    let summary = match estimate_cumulants(&sample.counts) {
        Ok(c) => Some(c),
        Err(Error::InsufficientData { .. }) => None,
        Err(e) => return Err(e),
    };
    let notes: Vec<String> = summary
        .is_none()
        .then(|| "a single replicate has no variance estimate".to_string())
        .into_iter()
        .collect();
    let json = json!({
        "command": "sample",
        "m": m,
        "R": radius,
        "values": summary,
        "seed": sample.seed,
        "replicates": sample.counts.len(),
        "truncation": sample.truncation,
        "omitted_mass": sample.omitted_mass,
        "counts": sample.counts,
        "notes": notes,
    });
    Ok(render(format, json, || {
        let mut out = String::new();
        if let Some(c) = summary {
            out.push_str(&format!(
                "# mean {} (se {}), variance {} (se {})\n",
                format_number(c.mean),
                format_number(c.se_mean),
                format_number(c.variance),
                format_number(c.se_variance)
            ));
        }
        out.push_str(&sample.to_csv());
        out
    }))
}

fn curve(args: &CurveArgs, format: Format) -> Result<Rendered> {
    if args.r_max < args.r_min {
        return Err(Error::Domain(format!(
            "--r-max {} is below --r-min {}",
            args.r_max, args.r_min
        )));
    }
    let m = LandauIndex::new(args.level.m);
    let tol = args.tol.unwrap_or(DEFAULT_QUADRATURE_TOL);
    let steps = args.r_steps as usize;
    let radii: Vec<f64> = (0..steps)
        .map(|i| {
            if steps == 1 {
                args.r_min
            } else {
                args.r_min + (args.r_max - args.r_min) * i as f64 / (steps - 1) as f64
            }
        })
        .collect();
    let variances = radii
        .par_iter()
        .map(|&r| variance_quadrature_38(m, DiskRadius::new(r)?, tol))
        .collect::<Result<Vec<f64>>>()?;
    let slope = asymptotic_constant(m);
    let json = json!({
        "command": "curve",
        "m": m,
        "R": radii,
        "values": variances,
        "asymptotic_slope": slope,
        "notes": ["variance ~ asymptotic_slope * R for large R"],
    });
    Ok(render(format, json, || {
        let mut out = String::from("R,variance,variance_over_R,asymptotic_slope\n");
        for (r, v) in radii.iter().zip(&variances) {
            out.push_str(&format!(
                "{},{},{},{}\n",
                format_number(*r),
                format_number(*v),
                format_number(v / r),
                format_number(slope)
            ));
        }
        out
    }))
}

fn run_validate(format: Format) -> Rendered {
    let report = validate();
    let success = report.all_passed();
    let passed = report.criteria.iter().filter(|c| c.passed).count();
    let json = json!({
        "command": "validate",
        "m": null,
        "R": null,
        "values": {"passed": passed, "total": report.criteria.len()},
        "criteria": report.criteria,
        "evidence": report.evidence,
        "notes": [],
    });
    let mut rendered = render(format, json, || format!("{report}\n"));
    rendered.success = success;
    rendered
}

/// Executes a parsed command.
pub fn execute(cli: &Cli) -> Result<Rendered> {
    match &cli.command {
        Command::Eigs(a) => eigs(a, cli.format),
        Command::Mean(a) => mean(a, cli.format),
        Command::Variance(a) => variance(a, cli.format),
        Command::Sample(a) => sample(a, cli.format),
        Command::Curve(a) => curve(a, cli.format),
        Command::Validate => Ok(run_validate(cli.format)),
    }
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Machine-readable error document written to standard error.
pub fn error_json(e: &Error) -> String {
    json!({"error": e.kind(), "message": e.to_string()}).to_string()
}

/// Parses `args`, runs the command and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli).and_then(|r| emit(&cli, &r.text).map(|_| r.success)) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAILURE,
        Err(e) => {
            eprintln!("{}", error_json(&e));
            EXIT_FAILURE
        }
    }
}
