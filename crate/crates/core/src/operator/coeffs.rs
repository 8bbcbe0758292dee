use super::normalization::check_order;
use crate::error::{invalid, Result};
use crate::special::ln_gamma_signed;

/// Fractional centered difference weights `c_0..=c_max_lag`.
///
/// `c_k = (-1)^k Γ(2s+1) / (Γ(s-k+1) Γ(s+k+1))`, generated from `c_0` by the
/// ratio `c_{k+1}/c_k = (k-s)/(k+1+s)` so no Gamma of a large argument is
/// ever formed.
pub fn centered_coeffs(s: f64, max_lag: usize) -> Result<Vec<f64>> {
    check_order(s)?;
    if max_lag < 1 {
        return Err(invalid("at least one lag is required"));
    }
    let c0 = (ln_gamma_signed(2.0 * s + 1.0).0 - 2.0 * ln_gamma_signed(s + 1.0).0).exp();
    let mut out = Vec::with_capacity(max_lag + 1);
    out.push(c0);
    let mut c = c0;
    for k in 0..max_lag {
        let k = k as f64;
        c *= (k - s) / (k + 1.0 + s);
        out.push(c);
    }
    Ok(out)
}
