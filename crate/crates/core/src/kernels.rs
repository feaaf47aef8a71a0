//! Reproducing kernels of the Landau levels and the disk geometry weights.

use std::f64::consts::{FRAC_1_PI, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{laguerre, ln_factorial};

/// Largest modulus accepted by the unnormalized kernel and the
/// coherent-state coefficients.
pub const MAX_MODULUS: f64 = 600.0;

/// Landau level `m >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LandauIndex(u32);

impl LandauIndex {
    pub const fn new(m: u32) -> Self {
        Self(m)
    }

    pub const fn get(self) -> u32 {
        self.0
    }

    pub const fn as_usize(self) -> usize {
        self.0 as usize
    }
}

impl From<u32> for LandauIndex {
    fn from(m: u32) -> Self {
        Self(m)
    }
}

impl std::fmt::Display for LandauIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// Radius `R > 0` of the centered observation disk.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct DiskRadius(f64);

impl DiskRadius {
    pub fn new(r: f64) -> Result<Self> {
        if r > 0.0 && r.is_finite() {
            Ok(Self(r))
        } else {
            Err(Error::Domain(format!(
                "disk radius must be positive and finite, got {r}"
            )))
        }
    }

    pub const fn get(self) -> f64 {
        self.0
    }

    pub fn squared(self) -> f64 {
        self.0 * self.0
    }
}

impl TryFrom<f64> for DiskRadius {
    type Error = Error;

    fn try_from(r: f64) -> Result<Self> {
        Self::new(r)
    }
}

impl std::fmt::Display for DiskRadius {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// `K_m(z, w) = π⁻¹ e^{z w̄ - |z|²/2 - |w|²/2} L_m(|z-w|²)`.
///
/// The real part of the exponent is `-|z-w|²/2`, so the kernel is
/// evaluated in modulus/phase form and never overflows.
pub fn kernel_point(m: LandauIndex, z: Complex64, w: Complex64) -> Complex64 {
    let d2 = (z - w).norm_sqr();
    let phase = (z * w.conj()).im;
    let modulus = FRAC_1_PI * (-0.5 * d2).exp() * laguerre(m.as_usize(), 0, d2);
    Complex64::from_polar(1.0, phase) * modulus
}

/// Unnormalized kernel `K̃_m(z, w) = π⁻¹ e^{z w̄} L_m(|z-w|²)`.
pub fn kernel_tilde(m: LandauIndex, z: Complex64, w: Complex64) -> Result<Complex64> {
    if z.norm() > MAX_MODULUS || w.norm() > MAX_MODULUS {
        return Err(Error::Domain(format!(
            "kernel arguments must satisfy |z|, |w| <= {MAX_MODULUS}"
        )));
    }
    let zw = z * w.conj();
    let value = FRAC_1_PI * zw.exp() * laguerre(m.as_usize(), 0, (z - w).norm_sqr());
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(Error::Overflow(format!(
            "exp({zw}) in the unnormalized kernel"
        )))
    }
}

/// Normalized area of the overlap of two radius-`R` disks whose centers
/// are `r` apart.
pub fn scaled_intersection_area(r: f64, radius: DiskRadius) -> f64 {
    let rr = radius.get();
    if r >= 2.0 * rr {
        return 0.0;
    }
    let theta = (r / (2.0 * rr)).acos();
    let (s, c) = theta.sin_cos();
    (2.0 / PI) * (theta - s * c)
}

/// `G_R(r)`: area of `D_R(z) \ D_R` for `|z| = r`.
pub fn g_weight(r: f64, radius: DiskRadius) -> f64 {
    let rr = radius.get();
    let full = PI * rr * rr;
    if r > 2.0 * rr {
        return full;
    }
    full - 2.0 * rr * rr * (r / (2.0 * rr)).acos()
        + 0.5 * r * (4.0 * rr * rr - r * r).max(0.0).sqrt()
}

/// Coefficient of the `k`-th number state in the unit-norm coherent state
/// `|z, m⟩`.
///
/// With `n = m ∧ k`, `α = |k - m|`:
/// `c_k(z) = ε √(n!/(n+α)!) e^{-|z|²/2} |z|^α e^{i(m-k) arg z} L_n^{(α)}(|z|²)`
/// where `ε = (-1)^{m-k}` for `k < m` and `1` otherwise. With this phase
/// `Σ_k c̄_k(z) c_k(w) = π K_m(z, w)`.
pub fn cs_overlap_coefficient(m: LandauIndex, k: u32, z: Complex64) -> Result<Complex64> {
    let modulus = z.norm();
    if modulus > MAX_MODULUS {
        return Err(Error::Domain(format!(
            "coherent-state argument must satisfy |z| <= {MAX_MODULUS}"
        )));
    }
    let m = m.get();
    let n = m.min(k) as u64;
    let alpha = m.abs_diff(k) as u64;
    let x = modulus * modulus;
    let poly = laguerre(n as usize, alpha as usize, x);
    if poly == 0.0 || (alpha > 0 && modulus == 0.0) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let ln_mag = -0.5 * x
        + 0.5 * (ln_factorial(n) - ln_factorial(n + alpha))
        + alpha as f64 * modulus.ln().max(f64::MIN);
    let ln_mag = if alpha == 0 { -0.5 * x } else { ln_mag };
    let sign = if k < m && (m - k) % 2 == 1 { -1.0 } else { 1.0 };
    let angle = (m as f64 - k as f64) * z.arg();
    Ok(Complex64::from_polar(sign * poly * ln_mag.exp(), angle))
}
