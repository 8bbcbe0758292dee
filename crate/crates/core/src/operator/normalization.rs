use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::quadrature::GaussLegendre;
use crate::special::ln_gamma_signed;

const AGREEMENT: f64 = 1e-6;

/// The constant `C(N, s)` that makes `C·∫(u(x)-u(y))/|x-y|^{N+2s}` carry the
/// symbol `|ξ|^{2s}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    pub dim: usize,
    pub s: f64,
    pub value: f64,
}

pub(crate) fn check_order(s: f64) -> Result<()> {
    if s > 0.0 && s < 1.0 {
        Ok(())
    } else {
        Err(invalid(format!("fractional order must lie in (0,1), got {s}")))
    }
}

fn check_dim(dim: usize) -> Result<()> {
    match dim {
        1 | 2 => Ok(()),
        _ => Err(invalid(format!("dimension must be 1 or 2, got {dim}"))),
    }
}

/// `s·4^s·Γ((N+2s)/2) / (π^{N/2}·Γ(1-s))`.
pub fn closed_form_constant(dim: usize, s: f64) -> Result<f64> {
    check_dim(dim)?;
    check_order(s)?;
    let n = dim as f64;
    let ln = (s * 4f64.powf(s)).ln() + ln_gamma_signed((n + 2.0 * s) / 2.0).0
        - 0.5 * n * PI.ln()
        - ln_gamma_signed(1.0 - s).0;
    Ok(ln.exp())
}

/// Reciprocal of `∫_{R^N} (1 - cos x_1) |x|^{-N-2s} dx` evaluated by quadrature.
pub fn quadrature_constant(dim: usize, s: f64) -> Result<f64> {
    check_dim(dim)?;
    check_order(s)?;
    let radial = half_line_integral(s);
    let integral = match dim {
        1 => 2.0 * radial,
        _ => radial * angular_factor(s),
    };
    Ok(1.0 / integral)
}

/// Both evaluations, failing if they disagree beyond `1e-6` relative.
pub fn normalization_constant(dim: usize, s: f64) -> Result<Normalization> {
    let closed_form = closed_form_constant(dim, s)?;
    let quadrature = quadrature_constant(dim, s)?;
    if ((closed_form - quadrature) / closed_form).abs() > AGREEMENT {
        return Err(Error::NormalizationMismatch {
            closed_form,
            quadrature,
        });
    }
    Ok(Normalization {
        dim,
        s,
        value: closed_form,
    })
}

/// `∫_0^∞ (1 - cos t) t^{-1-2s} dt`.
///
/// Power series on `[0,1]`, Gauss–Legendre panels on `[1, B]`, and an
/// asymptotic expansion of the oscillatory tail beyond `B = 2πM`.
pub(crate) fn half_line_integral(s: f64) -> f64 {
    let a = 1.0 + 2.0 * s;

    // (1 - cos t) = Σ_{k≥1} (-1)^{k+1} t^{2k}/(2k)!
    let mut near = 0.0;
    let mut fact = 1.0;
    for k in 1..40 {
        fact *= ((2 * k - 1) * (2 * k)) as f64;
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        near += sign / (fact * (2.0 * k as f64 - 2.0 * s));
    }

    let periods = 64;
    let big = 2.0 * PI * periods as f64;
    let gl = GaussLegendre::new(20);
    let middle = gl.composite(|t| (1.0 - t.cos()) * t.powf(-a), 1.0, big, 8 * periods);

    // ∫_B^∞ t^{-a} minus ∫_B^∞ cos t·t^{-a}, with sin B = 0 and cos B = 1:
    // C(a) = a·S(a+1), S(a) = B^{-a} - a·C(a+1).
    let power_tail = big.powf(1.0 - a) / (a - 1.0);
    let cos_tail = oscillatory_cos_tail(a, big);
    near + middle + power_tail - cos_tail
}

fn oscillatory_cos_tail(a: f64, big: f64) -> f64 {
    // C(a) = a B^{-a-1} - a(a+1)(a+2) B^{-a-3} + ...
    let mut total = 0.0;
    let mut coeff = a;
    let mut exponent = a + 1.0;
    let mut sign = 1.0;
    for _ in 0..20 {
        let term = sign * coeff * big.powf(-exponent);
        total += term;
        if term.abs() < 1e-30 {
            break;
        }
        coeff *= exponent * (exponent + 1.0);
        exponent += 2.0;
        sign = -sign;
    }
    total
}

/// `∫_0^{2π} |cos φ|^{2s} dφ = 4∫_0^{π/2} sin^{2s} u du`.
fn angular_factor(s: f64) -> f64 {
    let gl = GaussLegendre::new(20);
    4.0 * gl.graded(|u| u.sin().powf(2.0 * s), 0.0, PI / 2.0, 0.25, 40)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_order_values() {
        assert!((closed_form_constant(1, 0.5).unwrap() - 1.0 / PI).abs() < 1e-14);
        assert!((closed_form_constant(2, 0.5).unwrap() - 1.0 / (2.0 * PI)).abs() < 1e-14);
    }

    #[test]
    fn quadrature_agrees_with_closed_form() {
        for dim in [1, 2] {
            for s in [0.1, 0.25, 0.5, 0.75, 0.9] {
                let c = closed_form_constant(dim, s).unwrap();
                let q = quadrature_constant(dim, s).unwrap();
                assert!(((c - q) / c).abs() < 1e-9, "dim={dim} s={s}: {c} vs {q}");
            }
        }
    }

    #[test]
    fn rejects_bad_order() {
        assert!(normalization_constant(1, 1.0).is_err());
        assert!(normalization_constant(3, 0.5).is_err());
    }
}
