//! Laguerre polynomials, incomplete gamma, scaled Bessel functions and pFq.

use polyginibre::specfun::{
    bessel_i_scaled, hyp2f2, laguerre, pfq, regularized_gamma_p, BesselOrder, PFqSpec, SeriesBudget,
};

fn main() -> polyginibre::Result<()> {
    println!("L_3^(1)(2.5)          = {:.15}", laguerre(3, 1, 2.5));
    println!(
        "P(4, 2)               = {:.15}",
        regularized_gamma_p(4.0, 2.0)?
    );
    println!(
        "e^-2 I0(2)            = {:.15}",
        bessel_i_scaled(BesselOrder::Zero, 2.0)
    );
    println!(
        "e^-2 I1(2)            = {:.15}",
        bessel_i_scaled(BesselOrder::One, 2.0)
    );

    let series = pfq(
        &PFqSpec::new(&[1.0, 1.5], &[3.0, 2.0], -4.0),
        SeriesBudget::default(),
    )?;
    println!(
        "2F2(1,3/2;3,2;-4)     = {:.15} ({} terms, {:.1} digits cancelled)",
        series.value, series.terms_used, series.cancellation_digits
    );

    // far out the series is useless; hyp2f2 switches to the Euler integral
    let far = hyp2f2([3.0, 1.5], [3.0, 2.0], -100.0, 2.5)?;
    println!(
        "2F2(3,3/2;3,2;-100)   = {:.15e} via {:?}",
        far.value, far.method
    );
    Ok(())
}
