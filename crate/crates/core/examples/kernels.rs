//! Correlation kernel, coherent-state overlaps and the disk-overlap weight.

use num_complex::Complex64;
use polyginibre::kernels::{
    cs_overlap_coefficient, g_weight, kernel_point, DiskRadius, LandauIndex,
};

fn main() -> polyginibre::Result<()> {
    let m = LandauIndex::new(2);
    let z = Complex64::new(0.3, -0.4);
    let w = Complex64::new(-0.2, 0.9);
    println!(
        "K_2(z, z) = {:.15} (density 1/pi = {:.15})",
        kernel_point(m, z, z).re,
        1.0 / std::f64::consts::PI
    );
    println!("K_2(z, w) = {:.15}", kernel_point(m, z, w));

    // Σ_k conj(c_k(z)) c_k(w) reproduces π K_m(z, w)
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..80 {
        sum += cs_overlap_coefficient(m, k, z)?.conj() * cs_overlap_coefficient(m, k, w)?;
    }
    println!("sum c_k   = {:.15}", sum / std::f64::consts::PI);

    let radius = DiskRadius::new(1.5)?;
    for r in [0.0, 1.0, 2.0, 3.0, 4.0] {
        println!("G_R({r})  = {:.12}", g_weight(r, radius));
    }
    Ok(())
}
