//! Monte Carlo realizations of the disk count and of point configurations.
//!
//! Counts use the Bernoulli representation of the count: one independent
//! draw per eigenvalue `β_k`. Replicate `i` always reads ChaCha8 stream `i`
//! of the given seed, so results do not depend on the number of threads.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernels::{cs_overlap_coefficient, DiskRadius, LandauIndex};
use crate::spectra::{build_eigenvalue_table, EigenvalueTable, TablePolicy};

/// Simulated disk counts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountSample {
    pub counts: Vec<u32>,
    pub seed: u64,
    pub m: LandauIndex,
    #[serde(rename = "R")]
    pub radius: DiskRadius,
    /// Last eigenvalue index drawn; every count is at most `truncation + 1`.
    pub truncation: u32,
    /// Bernoulli mass left out of the draws.
    pub omitted_mass: f64,
}

impl CountSample {
    /// Single-column CSV.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("count\n");
        for c in &self.counts {
            out.push_str(&c.to_string());
            out.push('\n');
        }
        out
    }

    /// Empirical frequencies of `0..=max(count)`.
    pub fn frequencies(&self) -> Vec<f64> {
        empirical_pmf(&self.counts)
    }
}

fn replicate_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Draws `replicates` disk counts for a prebuilt eigenvalue table.
pub fn sample_counts_from_table(
    table: &EigenvalueTable,
    replicates: usize,
    seed: u64,
) -> CountSample {
    let betas: Vec<f64> = table.values().collect();
    let counts = (0..replicates as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = replicate_rng(seed, i);
            betas.iter().filter(|&&b| rng.random::<f64>() < b).count() as u32
        })
        .collect();
    CountSample {
        counts,
        seed,
        m: table.m,
        radius: table.radius,
        truncation: table.last_index(),
        omitted_mass: table.tail_bound,
    }
}

/// Draws `replicates` disk counts.
pub fn sample_counts(
    m: LandauIndex,
    radius: DiskRadius,
    replicates: usize,
    seed: u64,
    policy: &TablePolicy,
) -> Result<CountSample> {
    if replicates == 0 {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    let table = build_eigenvalue_table(m, radius, policy)?;
    Ok(sample_counts_from_table(&table, replicates, seed))
}

/// Sample moments with their standard errors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cumulants {
    pub mean: f64,
    pub variance: f64,
    pub se_mean: f64,
    pub se_variance: f64,
}

/// Unbiased mean and variance; the variance's standard error uses the
/// fourth central moment, `√((m₄ - (n-3)/(n-1) s⁴)/n)`.
pub fn estimate_cumulants(counts: &[u32]) -> Result<Cumulants> {
    let n = counts.len();
    if n < 2 {
        return Err(Error::InsufficientData { needed: 2, got: n });
    }
    let nf = n as f64;
    let mean = counts.iter().map(|&c| c as f64).sum::<f64>() / nf;
    let (mut m2, mut m4) = (0.0, 0.0);
    for &c in counts {
        let d = c as f64 - mean;
        let d2 = d * d;
        m2 += d2;
        m4 += d2 * d2;
    }
    let variance = m2 / (nf - 1.0);
    let m4 = m4 / nf;
    let se_variance = ((m4 - (nf - 3.0) / (nf - 1.0) * variance * variance) / nf)
        .max(0.0)
        .sqrt();
    Ok(Cumulants {
        mean,
        variance,
        se_mean: (variance / nf).sqrt(),
        se_variance,
    })
}

/// Exact law of a sum of independent Bernoulli(`p_k`) variables.
pub fn poisson_binomial_pmf(probabilities: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut pmf = vec![1.0];
    for p in probabilities {
        let mut next = vec![0.0; pmf.len() + 1];
        for (j, &q) in pmf.iter().enumerate() {
            next[j] += q * (1.0 - p);
            next[j + 1] += q * p;
        }
        pmf = next;
    }
    pmf
}

/// Relative frequencies of `0..=max(counts)`.
pub fn empirical_pmf(counts: &[u32]) -> Vec<f64> {
    let top = counts.iter().copied().max().unwrap_or(0) as usize;
    let mut freq = vec![0.0; top + 1];
    for &c in counts {
        freq[c as usize] += 1.0;
    }
    let n = counts.len().max(1) as f64;
    freq.iter_mut().for_each(|f| *f /= n);
    freq
}

/// `½ Σ |p - q|` over the union of supports.
pub fn total_variation_distance(p: &[f64], q: &[f64]) -> f64 {
    let len = p.len().max(q.len());
    let at = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
    0.5 * (0..len).map(|i| (at(p, i) - at(q, i)).abs()).sum::<f64>()
}

/// A realization of the process restricted to the disk.
#[derive(Debug, Clone, PartialEq)]
pub struct PointConfiguration {
    pub points: Vec<Complex64>,
    pub seed: u64,
    /// Eigenfunction indices selected in the first stage.
    pub selected: Vec<u32>,
}

impl PointConfiguration {
    /// CSV of `(re, im)` pairs.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("re,im\n");
        for p in &self.points {
            out.push_str(&format!(
                "{},{}\n",
                crate::output::format_number(p.re),
                crate::output::format_number(p.im)
            ));
        }
        out
    }
}

/// Envelope limits of the spatial sampler.
pub const CONFIGURATION_MAX_LEVEL: u32 = 4;
pub const CONFIGURATION_MAX_RADIUS: f64 = 4.0;

const ENVELOPE_SAFETY: f64 = 1.5;
const ENVELOPE_GRID: usize = 256;
const MAX_REBUILDS: usize = 3;

struct Eigenbasis {
    m: LandauIndex,
    indices: Vec<u32>,
    // 1/√(π β_k)
    scales: Vec<f64>,
}

impl Eigenbasis {
    // restricted eigenfunctions ψ_k(z) = conj(c_k(z)) / √(π β_k)
    fn evaluate(&self, z: Complex64, out: &mut [Complex64]) -> Result<()> {
        for ((slot, &k), &scale) in out.iter_mut().zip(&self.indices).zip(&self.scales) {
            *slot = cs_overlap_coefficient(self.m, k, z)?.conj() * scale;
        }
        Ok(())
    }

    // Σ_k |ψ_k|² depends only on |z|
    fn envelope(&self, radius: f64, grid: usize) -> Result<f64> {
        let mut values = vec![Complex64::new(0.0, 0.0); self.indices.len()];
        let mut top: f64 = 0.0;
        for i in 0..=grid {
            self.evaluate(
                Complex64::new(radius * i as f64 / grid as f64, 0.0),
                &mut values,
            )?;
            top = top.max(values.iter().map(|v| v.norm_sqr()).sum());
        }
        Ok(ENVELOPE_SAFETY * top)
    }
}

enum Attempt {
    Done(Vec<Complex64>),
    EnvelopeTooLow,
}

fn sequential_projection_sample(
    basis: &Eigenbasis,
    radius: f64,
    envelope: f64,
    rng: &mut ChaCha8Rng,
) -> Result<Attempt> {
    let n = basis.indices.len();
    let mut points = Vec::with_capacity(n);
    let mut frame: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    while points.len() < n {
        // uniform proposal in the open disk
        let r = radius * rng.random::<f64>().sqrt();
        let theta = 2.0 * PI * rng.random::<f64>();
        let z = Complex64::from_polar(r, theta);
        basis.evaluate(z, &mut v)?;
        let full: f64 = v.iter().map(|x| x.norm_sqr()).sum();
        if full > envelope {
            return Ok(Attempt::EnvelopeTooLow);
        }
        let mut w = v.clone();
        for e in &frame {
            let overlap: Complex64 = e.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            w.iter_mut().zip(e).for_each(|(wi, ei)| *wi -= overlap * ei);
        }
        let residual: f64 = w.iter().map(|x| x.norm_sqr()).sum();
        if rng.random::<f64>() * envelope < residual {
            let norm = residual.sqrt();
            frame.push(w.into_iter().map(|x| x / norm).collect());
            points.push(z);
        }
    }
    Ok(Attempt::Done(points))
}

/// Samples one configuration of the process restricted to `D_R`.
///
/// Stage one selects eigenfunctions with independent Bernoulli(`β_k`)
/// draws; stage two samples the projection process on the selected
/// restricted eigenfunctions point by point, by rejection from uniform
/// proposals under a grid envelope with a 1.5 safety factor.
pub fn sample_configuration(
    m: LandauIndex,
    radius: DiskRadius,
    seed: u64,
    policy: &TablePolicy,
) -> Result<PointConfiguration> {
    let table = build_eigenvalue_table(m, radius, policy)?;
    configuration_from_table(&table, seed, 0)
}

/// `count` independent configurations; configuration `i` uses stream `i`.
pub fn sample_configurations(
    m: LandauIndex,
    radius: DiskRadius,
    count: usize,
    seed: u64,
    policy: &TablePolicy,
) -> Result<Vec<PointConfiguration>> {
    let table = build_eigenvalue_table(m, radius, policy)?;
    (0..count as u64)
        .into_par_iter()
        .map(|i| configuration_from_table(&table, seed, i))
        .collect()
}

fn configuration_from_table(
    table: &EigenvalueTable,
    seed: u64,
    stream: u64,
) -> Result<PointConfiguration> {
    let (m, radius) = (table.m, table.radius);
    if m.get() > CONFIGURATION_MAX_LEVEL || radius.get() > CONFIGURATION_MAX_RADIUS {
        return Err(Error::Domain(format!(
            "spatial sampling supports m <= {CONFIGURATION_MAX_LEVEL}, R <= {CONFIGURATION_MAX_RADIUS}"
        )));
    }
    let mut rng = replicate_rng(seed, stream);
    let mut indices = Vec::new();
    let mut scales = Vec::new();
    for e in &table.entries {
        if rng.random::<f64>() < e.beta {
            indices.push(e.k);
            scales.push(1.0 / (PI * e.beta).sqrt());
        }
    }
    let basis = Eigenbasis { m, indices, scales };
    if basis.indices.is_empty() {
        return Ok(PointConfiguration {
            points: Vec::new(),
            seed,
            selected: Vec::new(),
        });
    }
    let mut grid = ENVELOPE_GRID;
    for _ in 0..=MAX_REBUILDS {
        let envelope = basis.envelope(radius.get(), grid)?;
        match sequential_projection_sample(&basis, radius.get(), envelope, &mut rng)? {
            Attempt::Done(points) => {
                return Ok(PointConfiguration {
                    points,
                    seed,
                    selected: basis.indices,
                })
            }
            Attempt::EnvelopeTooLow => grid *= 4,
        }
    }
    Err(Error::EnvelopeViolation {
        rebuilds: MAX_REBUILDS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lm(m: u32) -> LandauIndex {
        LandauIndex::new(m)
    }

    fn radius(r: f64) -> DiskRadius {
        DiskRadius::new(r).unwrap()
    }

    #[test]
    fn cumulant_examples() {
        let c = estimate_cumulants(&[3, 3, 3, 3]).unwrap();
        assert_eq!(
            (c.mean, c.variance, c.se_mean, c.se_variance),
            (3.0, 0.0, 0.0, 0.0)
        );
        let c = estimate_cumulants(&[0, 2]).unwrap();
        assert_eq!((c.mean, c.variance), (1.0, 2.0));
        assert!(matches!(
            estimate_cumulants(&[1]),
            Err(Error::InsufficientData { needed: 2, got: 1 })
        ));
    }

    #[test]
    fn poisson_binomial_small_cases() {
        let pmf = poisson_binomial_pmf([0.5, 0.5]);
        assert_eq!(pmf, vec![0.25, 0.5, 0.25]);
        let pmf = poisson_binomial_pmf([0.2, 0.7, 0.1]);
        assert!((pmf.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        let mean: f64 = pmf.iter().enumerate().map(|(k, p)| k as f64 * p).sum();
        assert!((mean - 1.0).abs() < 1e-15);
        assert_eq!(total_variation_distance(&[1.0], &[0.0, 1.0]), 1.0);
    }

    #[test]
    fn counts_are_reproducible_and_bounded() {
        let p = TablePolicy::default();
        let a = sample_counts(lm(1), radius(1.5), 2000, 7, &p).unwrap();
        let b = sample_counts(lm(1), radius(1.5), 2000, 7, &p).unwrap();
        let c = sample_counts(lm(1), radius(1.5), 2000, 8, &p).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.counts, c.counts);
        assert!(a.counts.iter().all(|&n| n <= a.truncation + 1));
        assert_eq!(a.counts.len(), 2000);
        assert!(sample_counts(lm(1), radius(1.5), 0, 7, &p).is_err());
    }

    #[test]
    fn unit_disk_mean() {
        let s = sample_counts(lm(0), radius(1.0), 100_000, 11, &TablePolicy::default()).unwrap();
        let c = estimate_cumulants(&s.counts).unwrap();
        let se = (0.523_777_611_802_608_7f64 / 1e5).sqrt();
        assert!((c.mean - 1.0).abs() < 4.0 * se);
    }

    #[test]
    fn configurations_lie_in_the_disk_and_match_selection() {
        let p = TablePolicy::default();
        let configs = sample_configurations(lm(2), radius(2.0), 50, 3, &p).unwrap();
        for c in &configs {
            assert_eq!(c.points.len(), c.selected.len());
            assert!(c.points.iter().all(|z| z.norm() < 2.0));
        }
        let again = sample_configurations(lm(2), radius(2.0), 50, 3, &p).unwrap();
        assert_eq!(configs, again);
    }

    #[test]
    fn envelope_limits_are_enforced() {
        let p = TablePolicy::default();
        assert!(matches!(
            sample_configuration(lm(5), radius(1.0), 1, &p),
            Err(Error::Domain(_))
        ));
        assert!(sample_configuration(lm(0), radius(4.5), 1, &p).is_err());
    }

    #[test]
    fn tiny_disk_can_be_empty() {
        let configs =
            sample_configurations(lm(0), radius(0.05), 200, 1, &TablePolicy::default()).unwrap();
        assert!(configs
            .iter()
            .any(|c| c.points.is_empty() && c.selected.is_empty()));
    }
}
