//! Point configurations in the disk, plus a radial intensity check.

use polyginibre::kernels::{DiskRadius, LandauIndex};
use polyginibre::sampler::{sample_configuration, sample_configurations};
use polyginibre::spectra::TablePolicy;

fn main() -> polyginibre::Result<()> {
    let (m, r) = (LandauIndex::new(1), DiskRadius::new(3.0)?);
    let policy = TablePolicy::default();

    let one = sample_configuration(m, r, 7, &policy)?;
    println!(
        "{} points (eigenfunctions {:?})",
        one.points.len(),
        one.selected
    );
    print!("{}", one.to_csv());

    // intensity should be 1/π away from the boundary
    let configs = sample_configurations(m, r, 4000, 8, &policy)?;
    let bins = 6;
    let edge = 0.8 * r.get();
    let mut counts = vec![0usize; bins];
    for p in configs.iter().flat_map(|c| &c.points) {
        let b = (p.norm() / edge * bins as f64) as usize;
        if b < bins {
            counts[b] += 1;
        }
    }
    println!("\nradial bin   intensity x pi");
    for (b, n) in counts.iter().enumerate() {
        let (lo, hi) = (
            edge * b as f64 / bins as f64,
            edge * (b + 1) as f64 / bins as f64,
        );
        let area = std::f64::consts::PI * (hi * hi - lo * lo);
        println!(
            "[{lo:.2}, {hi:.2})   {:.4}",
            *n as f64 / configs.len() as f64 / area * std::f64::consts::PI
        );
    }
    Ok(())
}
