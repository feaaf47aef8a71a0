//! Var(R)/R approaching the slope constant C_m.

use polyginibre::kernels::{DiskRadius, LandauIndex};
use polyginibre::statistics::{
    asymptotic_constant, asymptotic_slope_integral, variance_quadrature_38,
};

fn main() -> polyginibre::Result<()> {
    for m in 0..=3 {
        let level = LandauIndex::new(m);
        let c = asymptotic_constant(level);
        println!(
            "m = {m}: C_m = {c:.12} (integral form {:.12})",
            asymptotic_slope_integral(level)?
        );
        for r in [5.0, 10.0, 20.0, 40.0] {
            let v = variance_quadrature_38(level, DiskRadius::new(r)?, 1e-10)?;
            println!(
                "    R = {r:>4}: Var/R = {:.10}  (gap {:.2e})",
                v / r,
                (v / r - c) / c
            );
        }
    }
    let ratio = asymptotic_constant(LandauIndex::new(64))
        / (64f64.sqrt() * 8.0 / std::f64::consts::PI.powi(2));
    println!("C_64 / (8 sqrt(64) / pi^2) = {ratio:.6}");
    Ok(())
}
