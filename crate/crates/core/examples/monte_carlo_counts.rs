//! Simulated disk counts against the exact Poisson-binomial law.

use polyginibre::kernels::{DiskRadius, LandauIndex};
use polyginibre::sampler::{
    empirical_pmf, estimate_cumulants, poisson_binomial_pmf, sample_counts_from_table,
    total_variation_distance,
};
use polyginibre::spectra::{build_eigenvalue_table, TablePolicy};
use polyginibre::statistics::variance_quadrature_38;

fn main() -> polyginibre::Result<()> {
    let (m, r) = (LandauIndex::new(1), DiskRadius::new(2.0)?);
    let table = build_eigenvalue_table(m, r, &TablePolicy::default())?;
    let sample = sample_counts_from_table(&table, 100_000, 42);
    let c = estimate_cumulants(&sample.counts)?;
    println!(
        "mean     {:.5} ± {:.5}  (exact {})",
        c.mean,
        c.se_mean,
        r.squared()
    );
    println!(
        "variance {:.5} ± {:.5}  (exact {:.5})",
        c.variance,
        c.se_variance,
        variance_quadrature_38(m, r, 1e-10)?
    );

    let exact = poisson_binomial_pmf(table.values());
    let empirical = empirical_pmf(&sample.counts);
    println!("\n n   empirical   exact");
    for (n, p) in exact.iter().enumerate().take_while(|(_, p)| **p > 1e-5) {
        println!(
            "{n:>2}   {:.5}     {p:.5}",
            empirical.get(n).copied().unwrap_or(0.0)
        );
    }
    println!(
        "total variation distance {:.4}",
        total_variation_distance(&empirical, &exact)
    );
    Ok(())
}
