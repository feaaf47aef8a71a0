//! Special functions behind the disk-count formulas, each with the
//! diagnostics needed to decide when a closed form can be trusted.

mod bessel;
mod combinatorics;
mod double_double;
mod gamma;
mod hypergeometric;
mod laguerre;

pub use bessel::{bessel_i, bessel_i_scaled, BesselOrder};
pub use combinatorics::{
    binomial, cancellation_digits, factorial, ln_binomial, ln_factorial, pochhammer,
    reciprocal_factorial, CompensatedSum, MAX_FACTORIAL,
};
pub use double_double::{exponential_series, laguerre_sequence_dd, DoubleDouble};
pub use gamma::{
    gamma, gamma_p_q, ln_gamma, lower_incomplete_gamma, regularized_gamma_p, regularized_gamma_q,
};
pub use hypergeometric::{
    hyp2f2, hyp2f2_euler_kummer, pfq, pfq_partial, EulerKummerResult, HypergeometricMethod,
    HypergeometricValue, PFqSpec, SeriesBudget, SeriesResult, EULER_KUMMER_MAX_ARGUMENT,
};
pub use laguerre::{laguerre, laguerre_sequence, laguerre_signed};
