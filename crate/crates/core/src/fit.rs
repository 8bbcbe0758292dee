//! Least-squares power laws on log-log data.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Minimum number of points accepted by [`fit_loglog`].
pub const MIN_POINTS: usize = 4;

/// `log m ≈ intercept + slope · log p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    /// Strictly decreasing.
    pub params: Vec<f64>,
    pub measurements: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    /// Root mean square of the log residuals.
    pub fit_residual: f64,
}

impl RateFit {
    pub fn predict(&self, p: f64) -> f64 {
        (self.intercept + self.slope * p.ln()).exp()
    }
}

/// Fits a line through `(log p, log m)`; points are reordered by decreasing
/// parameter.
pub fn fit_loglog(params: &[f64], measurements: &[f64]) -> Result<RateFit> {
    if params.len() != measurements.len() {
        return Err(Error::DegenerateFit(format!(
            "{} parameters for {} measurements",
            params.len(),
            measurements.len()
        )));
    }
    if params.len() < MIN_POINTS {
        return Err(Error::DegenerateFit(format!(
            "need at least {MIN_POINTS} points, got {}",
            params.len()
        )));
    }
    if let Some((p, m)) = params
        .iter()
        .zip(measurements)
        .find(|(p, m)| !(**p > 0.0 && p.is_finite() && **m > 0.0 && m.is_finite()))
    {
        return Err(Error::DegenerateFit(format!(
            "non-positive point ({p}, {m})"
        )));
    }
    let mut pairs: Vec<(f64, f64)> = params.iter().copied().zip(measurements.iter().copied()).collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::DegenerateFit("repeated parameter value".into()));
    }
    let xs: Vec<f64> = pairs.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pairs.iter().map(|p| p.1.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let fit_residual = (xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(RateFit {
        params: pairs.iter().map(|p| p.0).collect(),
        measurements: pairs.iter().map(|p| p.1).collect(),
        slope,
        intercept,
        fit_residual,
    })
}
