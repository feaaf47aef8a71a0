//! Generalized Laguerre polynomials by upward recurrence in the degree.

use crate::specfun::CompensatedSum;

/// `L_n^{(α)}(x)` for a nonnegative integer `α`.
///
/// ```
/// use polyginibre::specfun::laguerre;
/// assert_eq!(laguerre(1, 0, 2.0), -1.0);
/// assert_eq!(laguerre(2, 1, 1.0), 0.5);
/// ```
pub fn laguerre(n: usize, alpha: usize, x: f64) -> f64 {
    laguerre_signed(n, alpha as i64, x)
}

/// `L_n^{(α)}(x)` for any integer `α`, negative included.
///
/// The three-term recurrence
/// `(i+1) L_{i+1} = (2i + 1 + α - x) L_i - (i + α) L_{i-1}`
/// holds for every `α`, so the same loop covers the `L_m^{(k-m)}` with
/// `k < m` that show up in the index-reflection and Bateman identities.
///
/// For `-n <= α < 0` the polynomial has the factor `x^{-α}`, which the
/// recurrence can only produce by cancellation; there the defining sum
/// `Σ_{i>=-α} (-1)^i C(n+α, n-i) x^i/i!` is used instead so small `x`
/// keeps full relative accuracy.
pub fn laguerre_signed(n: usize, alpha: i64, x: f64) -> f64 {
    let a = alpha as f64;
    if n == 0 {
        return 1.0;
    }
    if alpha < 0 && n as i64 + alpha >= 0 {
        return explicit_negative_order(n, alpha, x);
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + a - x;
    for i in 1..n {
        let i = i as f64;
        let next = ((2.0 * i + 1.0 + a - x) * cur - (i + a) * prev) / (i + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

fn explicit_negative_order(n: usize, alpha: i64, x: f64) -> f64 {
    let j = (-alpha) as usize;
    // x^j / j!
    let mut term = (0..j).fold(1.0, |t, i| t * x / (i + 1) as f64);
    let mut sum = CompensatedSum::new();
    for i in j..=n {
        sum.add(if i % 2 == 0 { term } else { -term });
        term *= (n - i) as f64 / (alpha + i as i64 + 1) as f64 * x / (i + 1) as f64;
    }
    sum.value()
}

/// `[L_0^{(α)}(x), ..., L_n^{(α)}(x)]` in one pass.
pub fn laguerre_sequence(n: usize, alpha: usize, x: f64) -> Vec<f64> {
    let a = alpha as f64;
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    if n == 0 {
        return out;
    }
    out.push(1.0 + a - x);
    for i in 1..n {
        let fi = i as f64;
        let next = ((2.0 * fi + 1.0 + a - x) * out[i] - (fi + a) * out[i - 1]) / (fi + 1.0);
        out.push(next);
    }
    out
}
