use polyginibre::kernels::{DiskRadius, LandauIndex};
use polyginibre::sampler::{
    empirical_pmf, estimate_cumulants, poisson_binomial_pmf, sample_configurations, sample_counts,
    sample_counts_from_table, total_variation_distance,
};
use polyginibre::spectra::{build_eigenvalue_table, TablePolicy};

fn lm(m: u32) -> LandauIndex {
    LandauIndex::new(m)
}

fn radius(r: f64) -> DiskRadius {
    DiskRadius::new(r).unwrap()
}

#[test]
fn counts_do_not_depend_on_thread_count() {
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| {
                sample_counts(lm(2), radius(1.5), 20_000, 5, &TablePolicy::default()).unwrap()
            })
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn count_law_matches_poisson_binomial() {
    let table = build_eigenvalue_table(lm(1), radius(2.0), &TablePolicy::default()).unwrap();
    let sample = sample_counts_from_table(&table, 100_000, 1);
    let exact = poisson_binomial_pmf(table.values());
    let tv = total_variation_distance(&empirical_pmf(&sample.counts), &exact);
    assert!(tv < 0.01, "{tv}");
    let c = estimate_cumulants(&sample.counts).unwrap();
    assert!((c.mean - 4.0).abs() < 4.0 * c.se_mean);
}

#[test]
fn poisson_binomial_mean_and_variance_match_the_table() {
    let table = build_eigenvalue_table(lm(3), radius(1.7), &TablePolicy::default()).unwrap();
    let pmf = poisson_binomial_pmf(table.values());
    let mean: f64 = pmf.iter().enumerate().map(|(k, p)| k as f64 * p).sum();
    let second: f64 = pmf
        .iter()
        .enumerate()
        .map(|(k, p)| (k * k) as f64 * p)
        .sum();
    let var_table: f64 = table.values().map(|b| b * (1.0 - b)).sum();
    assert!((mean - table.sum()).abs() < 1e-12);
    assert!((second - mean * mean - var_table).abs() < 1e-10);
}

#[test]
fn spatial_intensity_is_flat_inside_the_disk() {
    let r = 2.5;
    let configs =
        sample_configurations(lm(1), radius(r), 20_000, 17, &TablePolicy::default()).unwrap();
    let bins = 4;
    let edge = 0.8 * r;
    let mut counts = vec![0usize; bins];
    for p in configs.iter().flat_map(|c| &c.points) {
        let b = (p.norm() / edge * bins as f64) as usize;
        if b < bins {
            counts[b] += 1;
        }
    }
    for (b, &n) in counts.iter().enumerate() {
        let (lo, hi) = (
            edge * b as f64 / bins as f64,
            edge * (b + 1) as f64 / bins as f64,
        );
        let expected = configs.len() as f64 * (hi * hi - lo * lo); // π(hi²-lo²) × 1/π
        let ratio = n as f64 / expected;
        assert!((ratio - 1.0).abs() < 0.05, "bin {b}: {ratio}");
    }
}

#[test]
fn configuration_cardinality_follows_the_count_law() {
    let (m, r) = (lm(0), radius(1.5));
    let table = build_eigenvalue_table(m, r, &TablePolicy::default()).unwrap();
    let configs = sample_configurations(m, r, 10_000, 3, &TablePolicy::default()).unwrap();
    let sizes: Vec<u32> = configs.iter().map(|c| c.points.len() as u32).collect();
    let tv = total_variation_distance(
        &empirical_pmf(&sizes),
        &poisson_binomial_pmf(table.values()),
    );
    assert!(tv < 0.02, "{tv}");
}

#[test]
fn two_point_repulsion_near_the_origin() {
    // pairs closer than 0.2 are much rarer than under independence
    let configs =
        sample_configurations(lm(0), radius(2.0), 3000, 23, &TablePolicy::default()).unwrap();
    let mut close = 0usize;
    let mut pairs = 0usize;
    for c in &configs {
        for (i, a) in c.points.iter().enumerate() {
            for b in &c.points[i + 1..] {
                pairs += 1;
                close += usize::from((a - b).norm() < 0.2);
            }
        }
    }
    // independent uniform points: P(|a-b| < 0.2) ≈ (0.2/2)² = 0.01
    let fraction = close as f64 / pairs as f64;
    assert!(fraction < 0.002, "{fraction}");
}
