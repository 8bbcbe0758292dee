//! Gamma-function helpers evaluated through log-Gamma with sign tracking.

use statrs::function::gamma::ln_gamma;
use std::f64::consts::PI;

/// Returns `(ln|Γ(x)|, sign Γ(x))`. Poles (non-positive integers) give `(∞, NaN)`.
pub fn ln_gamma_signed(x: f64) -> (f64, f64) {
    if x > 0.0 {
        return (ln_gamma(x), 1.0);
    }
    if x == x.floor() {
        return (f64::INFINITY, f64::NAN);
    }
    // reflection: Γ(x) Γ(1 - x) = π / sin(πx)
    let sin = (PI * x).sin();
    let ln_abs = PI.ln() - sin.abs().ln() - ln_gamma(1.0 - x);
    (ln_abs, sin.signum())
}

/// Γ(x) for any non-pole argument.
pub fn gamma(x: f64) -> f64 {
    let (l, sign) = ln_gamma_signed(x);
    sign * l.exp()
}

/// Γ(a) / (Γ(b) Γ(c)) computed without intermediate overflow.
pub fn gamma_ratio(a: f64, b: f64, c: f64) -> f64 {
    let (la, sa) = ln_gamma_signed(a);
    let (lb, sb) = ln_gamma_signed(b);
    let (lc, sc) = ln_gamma_signed(c);
    sa * sb * sc * (la - lb - lc).exp()
}
