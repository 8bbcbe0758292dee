use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::function::GridFunction;
use crate::geometry::{ConeSpec, DomainMask, DomainSpec};

/// Right-hand side of the Dirichlet problems.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Source {
    Constant { value: f64 },
    Gaussian { center: Vec<f64>, width: f64, amplitude: f64 },
}

impl Default for Source {
    fn default() -> Self {
        Source::Constant { value: 1.0 }
    }
}

impl Source {
    pub fn sample(&self, mask: &DomainMask) -> Result<GridFunction> {
        match self {
            Source::Constant { value } => Ok(GridFunction::from_fn(mask, |_| *value)),
            Source::Gaussian { center, width, amplitude } => {
                if center.len() != mask.grid().dim() || !(*width > 0.0) {
                    return Err(invalid("gaussian source does not match the grid"));
                }
                let c = [center[0], center.get(1).copied().unwrap_or(0.0)];
                Ok(GridFunction::from_fn(mask, |p| {
                    let r2 = (p[0] - c[0]).powi(2) + (p[1] - c[1]).powi(2);
                    amplitude * (-0.5 * r2 / (width * width)).exp()
                }))
            }
        }
    }
}

/// `ρ` and `θ` of the cone condition assumed for the perturbed domains.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConeParams {
    pub rho: f64,
    pub theta: f64,
}

impl ConeParams {
    pub fn spec(&self, dim: usize) -> Result<ConeSpec> {
        ConeSpec::uniform(dim, self.rho, self.theta)
    }

    /// `ρ sin θ / 2`, the largest admissible perturbation.
    pub fn admissible(&self) -> f64 {
        0.5 * self.rho * self.theta.sin()
    }
}

impl Default for ConeParams {
    fn default() -> Self {
        Self {
            rho: 0.25,
            theta: std::f64::consts::FRAC_PI_4,
        }
    }
}

fn default_n() -> usize {
    2048
}

fn default_order() -> usize {
    2
}

fn default_count() -> usize {
    3
}

fn default_min_step_cells() -> usize {
    crate::norms::MIN_STEP_CELLS
}

fn default_eps() -> Vec<f64> {
    vec![0.01, 0.02, 0.04, 0.08]
}

fn default_interval() -> DomainSpec {
    DomainSpec::Interval { a: -1.0, b: 1.0 }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranslationConfig {
    #[serde(default = "default_interval")]
    pub domain: DomainSpec,
    pub s: f64,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default)]
    pub source: Source,
    /// Largest translation length; a quarter of the domain radius if absent.
    #[serde(default)]
    pub max_step: Option<f64>,
    #[serde(default = "default_min_step_cells")]
    pub min_step_cells: usize,
    /// Radius of the ramp cut-off centred on the rightmost boundary point;
    /// defaults to the domain radius.
    #[serde(default)]
    pub cutoff_radius: Option<f64>,
    #[serde(default)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainConfig {
    #[serde(default = "default_interval")]
    pub domain: DomainSpec,
    pub s: f64,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default)]
    pub source: Source,
    #[serde(default = "default_eps")]
    pub eps: Vec<f64>,
    #[serde(default)]
    pub cone: ConeParams,
    #[serde(default)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralConfig {
    #[serde(default = "default_interval")]
    pub domain: DomainSpec,
    pub s: f64,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "default_count")]
    pub count: usize,
    #[serde(default = "default_eps")]
    pub eps: Vec<f64>,
    #[serde(default)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenfunctionConfig {
    #[serde(default = "default_interval")]
    pub domain: DomainSpec,
    pub s: f64,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "default_eps")]
    pub eps: Vec<f64>,
    #[serde(default)]
    pub cone: ConeParams,
    #[serde(default)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BesovConfig {
    #[serde(default = "default_interval")]
    pub domain: DomainSpec,
    pub s: f64,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default)]
    pub source: Source,
    #[serde(default = "default_order")]
    pub order: usize,
    #[serde(default)]
    pub tolerance: Option<f64>,
}

/// Any experiment configuration, tagged by experiment name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "experiment", rename_all = "lowercase")]
pub enum ExperimentConfig {
    Translation(TranslationConfig),
    Domain(DomainConfig),
    Spectral(SpectralConfig),
    Eigenfunction(EigenfunctionConfig),
    Besov(BesovConfig),
}

impl ExperimentConfig {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentConfig::Translation(_) => "translation",
            ExperimentConfig::Domain(_) => "domain",
            ExperimentConfig::Spectral(_) => "spectral",
            ExperimentConfig::Eigenfunction(_) => "eigenfunction",
            ExperimentConfig::Besov(_) => "besov",
        }
    }

    /// Parses `json` as the configuration of the named experiment. The
    /// `experiment` tag may be omitted; if present it must match `name`.
    pub fn parse(name: &str, json: &str) -> Result<Self> {
        let mut value: serde_json::Value = serde_json::from_str(json)?;
        let obj = value
            .as_object_mut()
            .ok_or_else(|| invalid("experiment configuration must be a JSON object"))?;
        match obj.get("experiment").and_then(|v| v.as_str()) {
            Some(tag) if tag != name => {
                return Err(invalid(format!("configuration is for '{tag}', not '{name}'")));
            }
            _ => {}
        }
        obj.insert("experiment".into(), serde_json::Value::String(name.into()));
        Ok(serde_json::from_value(value)?)
    }
}

/// Slope tolerance used when a configuration does not set one.
pub fn default_tolerance(dim: usize) -> f64 {
    if dim == 1 {
        0.10
    } else {
        0.15
    }
}

/// Tolerance of the spectral and eigenfunction slopes.
pub const SPECTRAL_TOLERANCE: f64 = 0.15;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_fill_missing_fields() {
        let c = ExperimentConfig::parse("domain", r#"{"s": 0.5}"#).unwrap();
        let ExperimentConfig::Domain(d) = &c else { panic!() };
        assert_eq!(d.n, 2048);
        assert_eq!(d.eps, vec![0.01, 0.02, 0.04, 0.08]);
        assert_eq!(d.source, Source::Constant { value: 1.0 });
        let back: ExperimentConfig = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn mismatched_tag_is_rejected() {
        assert!(ExperimentConfig::parse("besov", r#"{"experiment": "spectral", "s": 0.5}"#).is_err());
        assert!(ExperimentConfig::parse("besov", "[1]").is_err());
    }

    #[test]
    fn admissible_perturbation() {
        let c = ConeParams::default();
        assert!((c.admissible() - 0.125 * std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }
}
