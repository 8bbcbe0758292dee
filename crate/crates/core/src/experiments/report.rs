use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::Duration;

use super::config::ExperimentConfig;
use crate::error::Result;
use crate::fit::{fit_loglog, RateFit};
use crate::geometry::DomainSpec;

/// One fitted series and its one-sided rate test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesFit {
    pub series: String,
    pub fit: RateFit,
    pub exponent: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl SeriesFit {
    /// Fits the series and passes when `slope ≥ exponent − tolerance`.
    pub fn new(series: &str, params: &[f64], measurements: &[f64], exponent: f64, tolerance: f64) -> Result<Self> {
        let fit = fit_loglog(params, measurements)?;
        let pass = fit.slope >= exponent - tolerance;
        Ok(Self {
            series: series.into(),
            fit,
            exponent,
            tolerance,
            pass,
        })
    }
}

/// A boolean side condition with the number it was decided on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(name: &str, value: f64, pass: bool) -> Self {
        Self {
            name: name.into(),
            value,
            pass,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub s: f64,
    pub domains: Vec<DomainSpec>,
    pub n: usize,
    pub fits: Vec<SeriesFit>,
    pub checks: Vec<Check>,
    /// Reported but never asserted.
    pub diagnostics: BTreeMap<String, f64>,
    pub pass: bool,
}

impl ExperimentReport {
    pub fn new(
        experiment: &str,
        s: f64,
        domains: Vec<DomainSpec>,
        n: usize,
        fits: Vec<SeriesFit>,
        checks: Vec<Check>,
        diagnostics: BTreeMap<String, f64>,
    ) -> Self {
        let mut report = Self {
            experiment: experiment.into(),
            s,
            domains,
            n,
            fits,
            checks,
            diagnostics,
            pass: false,
        };
        report.pass = report.derived_pass();
        report
    }

    fn derived_pass(&self) -> bool {
        self.fits
            .iter()
            .all(|f| f.pass && f.pass == (f.fit.slope >= f.exponent - f.tolerance))
            && self.checks.iter().all(|c| c.pass)
    }

    /// Whether the pass flag agrees with the fits and checks it summarizes.
    pub fn is_consistent(&self) -> bool {
        self.pass == self.derived_pass()
    }

    pub fn fit(&self, series: &str) -> Option<&SeriesFit> {
        self.fits.iter().find(|f| f.series == series)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// One raw measurement: `parameter` is what the series is fitted against,
/// `control` the construction parameter that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub series: String,
    pub control: f64,
    pub parameter: f64,
    pub measurement: f64,
}

impl Point {
    pub fn new(series: &str, control: f64, parameter: f64, measurement: f64) -> Self {
        Self {
            series: series.into(),
            control,
            parameter,
            measurement,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub config: ExperimentConfig,
    pub report: ExperimentReport,
    pub points: Vec<Point>,
    pub wall_time: Duration,
}

#[derive(Serialize)]
struct Timing<'a> {
    experiment: &'a str,
    wall_time_seconds: f64,
}

pub const CONFIG_FILE: &str = "config.json";
pub const SUMMARY_FILE: &str = "summary.json";
pub const POINTS_FILE: &str = "points.csv";
pub const TIMING_FILE: &str = "timing.json";

impl RunOutput {
    /// Writes the resolved configuration, the summary, the points and the
    /// timing into `dir`. Everything except the timing is reproducible.
    pub fn write(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join(CONFIG_FILE), serde_json::to_string_pretty(&self.config)?)?;
        fs::write(dir.join(SUMMARY_FILE), serde_json::to_string_pretty(&self.report)?)?;
        let mut csv = csv::Writer::from_path(dir.join(POINTS_FILE))?;
        for p in &self.points {
            csv.serialize(p)?;
        }
        csv.flush()?;
        let timing = Timing {
            experiment: &self.report.experiment,
            wall_time_seconds: self.wall_time.as_secs_f64(),
        };
        fs::write(dir.join(TIMING_FILE), serde_json::to_string_pretty(&timing)?)?;
        Ok(())
    }
}
