//! Adaptive Gauss–Kronrod on finite and semi-infinite ranges.

use polyginibre::quadrature::{
    integrate_finite, integrate_semiinfinite, integrate_with_breakpoints,
};

fn main() -> polyginibre::Result<()> {
    let sine = integrate_finite(f64::sin, 0.0, std::f64::consts::PI, 1e-13)?;
    println!(
        "int_0^pi sin            = {:.15} ({} evaluations)",
        sine.value, sine.evaluations
    );

    let kink = integrate_with_breakpoints(|x: f64| (x - 1.0).abs(), 0.0, 3.0, &[1.0], 1e-13)?;
    println!("int_0^3 |x - 1|         = {:.15}", kink.value);

    // ∫₀^∞ e^{-x} x² (L_1^{(1)}(x))² dx = 8
    let moment =
        integrate_semiinfinite(|x: f64| (-x).exp() * x * x * (2.0 - x).powi(2), 1.0, 1e-12)?;
    println!(
        "int e^-x x^2 (L_1^1)^2  = {:.15} (error estimate {:.1e})",
        moment.value, moment.error_estimate
    );
    Ok(())
}
