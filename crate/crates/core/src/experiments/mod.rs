//! Sweeps that measure convergence rates, with JSON configurations and
//! CSV/JSON outputs.

mod config;
mod report;
mod runs;

pub use crate::fit::{fit_loglog, RateFit};
pub use config::{
    default_tolerance, BesovConfig, ConeParams, DomainConfig, EigenfunctionConfig, ExperimentConfig, Source,
    SpectralConfig, TranslationConfig, SPECTRAL_TOLERANCE,
};
pub use report::{
    Check, ExperimentReport, Point, RunOutput, SeriesFit, CONFIG_FILE, POINTS_FILE, SUMMARY_FILE, TIMING_FILE,
};
pub use runs::{
    run, run_besov_diagnostic, run_domain_perturbation, run_eigenfunction_stability, run_spectral_stability,
    run_translation_rate, MAX_QUOTIENT_SPREAD, THREADS_ENV,
};
