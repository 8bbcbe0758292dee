use rayon::prelude::*;
use std::collections::BTreeMap;
use std::time::Instant;

use super::config::{
    default_tolerance, BesovConfig, ConeParams, DomainConfig, EigenfunctionConfig, ExperimentConfig, SpectralConfig,
    TranslationConfig, SPECTRAL_TOLERANCE,
};
use super::report::{Check, ExperimentReport, Point, RunOutput, SeriesFit};
use crate::error::{invalid, Error, Result};
use crate::function::GridFunction;
use crate::geometry::{
    certify_cone, complementary_hausdorff, cover_boundary, dfront, erode, DomainMask, DomainSpec,
};
use crate::norms::{
    besov_quotients, difference_moduli, gagliardo_seminorm, localized_translate, regularity_ceiling, translate,
    CutoffFn, DyadicRange,
};
use crate::operator::{check_order, FracStiffness};
use crate::solver::{DirichletSolver, DEFAULT_TOL};
use crate::spectral::{align_principal, eigenpairs, eigenspace_excess, EigenBasis, DEFAULT_EIGEN_TOL};

/// Environment variable capping the number of sweep threads.
pub const THREADS_ENV: &str = "FRACLAB_THREADS";

/// Largest accepted `sup / median` of the Besov quotients.
pub const MAX_QUOTIENT_SPREAD: f64 = 2.0;

fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| invalid(format!("thread pool: {e}")))
}

/// Evaluates independent sweep points in parallel, keeping their order.
fn sweep<T, F>(controls: &[f64], f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(f64) -> Result<T> + Sync + Send,
{
    thread_pool()?.install(|| controls.par_iter().map(|&c| f(c)).collect())
}

fn sorted_controls(values: &[f64], what: &str) -> Result<Vec<f64>> {
    if values.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(invalid(format!("{what} must be positive")));
    }
    let mut out = values.to_vec();
    out.sort_by(f64::total_cmp);
    out.dedup();
    Ok(out)
}

fn check_admissible(eps: &[f64], cone: &ConeParams) -> Result<()> {
    let bound = cone.admissible();
    match eps.iter().find(|&&e| e >= bound) {
        Some(e) => Err(invalid(format!("perturbation {e} is not below ρ sin θ / 2 = {bound}"))),
        None => Ok(()),
    }
}

/// Intervals, balls and boxes are Lipschitz by construction; other domains
/// need a cone direction at every centre of the boundary cover.
fn certify_domain(spec: &DomainSpec, mask: &DomainMask, cone: &ConeParams) -> Result<()> {
    if matches!(spec, DomainSpec::Interval { .. } | DomainSpec::Ball { .. } | DomainSpec::Box { .. }) {
        return Ok(());
    }
    let cone_spec = cone.spec(mask.grid().dim())?;
    let cover = cover_boundary(mask, cone.rho)?;
    for c in &cover.centers {
        certify_cone(mask, &cone_spec, *c).ok_or(Error::MissingCone(*c))?;
    }
    Ok(())
}

fn eroded(mask: &DomainMask, eps: f64) -> Result<DomainMask> {
    let out = erode(mask, eps)?;
    if out.is_empty() {
        return Err(Error::EmptySet(format!("erosion by {eps} leaves nothing")));
    }
    Ok(out)
}

/// True when `values` never decreases along increasing controls, allowing a
/// relative slack of `1e-12`.
fn nondecreasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-12))
}

fn solve(solver: &DirichletSolver, mask: &DomainMask, source: &super::config::Source) -> Result<GridFunction> {
    let f = source.sample(mask)?;
    Ok(solver.solve(mask, &f, DEFAULT_TOL)?.0)
}

fn finish(config: ExperimentConfig, report: ExperimentReport, points: Vec<Point>, start: Instant) -> RunOutput {
    RunOutput {
        config,
        report,
        points,
        wall_time: start.elapsed(),
    }
}

/// Translation rates of the Dirichlet solution: `‖u_h − u‖_{L²}` and
/// `‖T_h u − u‖_s²` over dyadic shifts along the first axis.
pub fn run_translation_rate(cfg: &TranslationConfig) -> Result<RunOutput> {
    let start = Instant::now();
    check_order(cfg.s)?;
    let mask = cfg.domain.discretize(cfg.n)?;
    let grid = *mask.grid();
    let solver = DirichletSolver::new(&grid, cfg.s)?;
    let u = solve(&solver, &mask, &cfg.source)?;

    let radius = cfg.domain.radius()?;
    let largest = cfg.max_step.unwrap_or(0.25 * radius);
    let range = DyadicRange::new(grid.spacing(), largest, cfg.min_step_cells as f64 * grid.spacing())?;
    let steps = range.steps(grid.spacing());
    let (_, hi) = cfg.domain.bounding_box()?;
    let edge = [hi[0], cfg.domain.center()?[1]];
    let cutoff = CutoffFn::ramp(grid, edge, cfg.cutoff_radius.unwrap_or(radius))?;

    let rows = sweep(&steps, |h| {
        let shift = [h, 0.0];
        let l2 = translate(&u, shift)?.sub(&u)?.l2_norm();
        let local = localized_translate(&u, shift, &cutoff)?.sub(&u)?;
        let energy = gagliardo_seminorm(&local, cfg.s)?.powi(2);
        Ok((l2, energy))
    })?;
    let l2: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let energy: Vec<f64> = rows.iter().map(|r| r.1).collect();

    let tol = cfg.tolerance.unwrap_or_else(|| default_tolerance(grid.dim()));
    let fits = vec![
        SeriesFit::new("l2", &steps, &l2, cfg.s, tol)?,
        SeriesFit::new("energy", &steps, &energy, cfg.s, tol.max(SPECTRAL_TOLERANCE))?,
    ];
    let points = steps
        .iter()
        .zip(&rows)
        .flat_map(|(&h, &(a, b))| [Point::new("l2", h, h, a), Point::new("energy", h, h, b)])
        .collect();
    let report = ExperimentReport::new(
        "translation",
        cfg.s,
        vec![cfg.domain.clone()],
        cfg.n,
        fits,
        Vec::new(),
        BTreeMap::new(),
    );
    Ok(finish(ExperimentConfig::Translation(cfg.clone()), report, points, start))
}

/// Solution drift `‖u_a − u_b‖_s` when the domain is eroded by each `ε`,
/// against the measured `𝔡(Ω_b, Ω_a)`.
pub fn run_domain_perturbation(cfg: &DomainConfig) -> Result<RunOutput> {
    let start = Instant::now();
    check_order(cfg.s)?;
    let eps = sorted_controls(&cfg.eps, "perturbations")?;
    check_admissible(&eps, &cfg.cone)?;
    let mask_a = cfg.domain.discretize(cfg.n)?;
    certify_domain(&cfg.domain, &mask_a, &cfg.cone)?;
    let grid = *mask_a.grid();
    let solver = DirichletSolver::new(&grid, cfg.s)?;
    let u_a = solve(&solver, &mask_a, &cfg.source)?;

    let rows = sweep(&eps, |e| {
        let mask_b = eroded(&mask_a, e)?;
        let d = dfront(&mask_b, &mask_a)?;
        let u_b = solve(&solver, &mask_b, &cfg.source)?;
        Ok((d, gagliardo_seminorm(&u_a.sub(&u_b)?, cfg.s)?))
    })?;
    let dist: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let drift: Vec<f64> = rows.iter().map(|r| r.1).collect();

    let tol = cfg.tolerance.unwrap_or_else(|| default_tolerance(grid.dim()));
    let fits = vec![SeriesFit::new("solution", &dist, &drift, 0.5 * cfg.s, tol)?];
    let checks = vec![Check::new("monotone_in_eps", drift[0], nondecreasing(&drift))];
    let points = eps
        .iter()
        .zip(&rows)
        .map(|(&e, &(d, m))| Point::new("solution", e, d, m))
        .collect();
    let report = ExperimentReport::new(
        "domain",
        cfg.s,
        vec![cfg.domain.clone()],
        cfg.n,
        fits,
        checks,
        BTreeMap::new(),
    );
    Ok(finish(ExperimentConfig::Domain(cfg.clone()), report, points, start))
}

/// Largest relative violation of `λ_n(inner) ≥ λ_n(outer)`, zero or
/// negative when the ordering holds.
fn monotonicity_defect(inner: &[f64], outer: &[f64]) -> f64 {
    inner
        .iter()
        .zip(outer)
        .map(|(a, b)| (b - a) / b)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Eigenvalue drift `|λ_n^a − λ_n^b|` under erosion against the measured
/// complementary Hausdorff distance, for the first `count` eigenvalues.
pub fn run_spectral_stability(cfg: &SpectralConfig) -> Result<RunOutput> {
    let start = Instant::now();
    check_order(cfg.s)?;
    if cfg.count == 0 {
        return Err(invalid("need at least one eigenvalue"));
    }
    let eps = sorted_controls(&cfg.eps, "perturbations")?;
    let mask_a = cfg.domain.discretize(cfg.n)?;
    let grid = *mask_a.grid();
    let op = FracStiffness::assemble(&grid, cfg.s)?;
    let base = eigenpairs(&op, &mask_a, cfg.count, DEFAULT_EIGEN_TOL)?.lambdas();

    let rows = sweep(&eps, |e| {
        let mask_b = eroded(&mask_a, e)?;
        let d = complementary_hausdorff(&mask_a, &mask_b)?;
        let centre = grid
            .nearest(cfg.domain.center()?)
            .is_some_and(|k| mask_b.contains(k));
        Ok((d, eigenpairs(&op, &mask_b, cfg.count, DEFAULT_EIGEN_TOL)?.lambdas(), centre))
    })?;
    let dist: Vec<f64> = rows.iter().map(|r| r.0).collect();

    let tol = cfg.tolerance.unwrap_or(SPECTRAL_TOLERANCE);
    let mut fits = Vec::with_capacity(cfg.count);
    let mut points = Vec::new();
    for k in 0..cfg.count {
        let name = format!("lambda_{}", k + 1);
        let drift: Vec<f64> = rows.iter().map(|r| (r.1[k] - base[k]).abs()).collect();
        for ((&e, &d), &m) in eps.iter().zip(&dist).zip(&drift) {
            points.push(Point::new(&name, e, d, m));
        }
        fits.push(SeriesFit::new(&name, &dist, &drift, cfg.s, tol)?);
    }
    let defect = rows
        .iter()
        .map(|r| monotonicity_defect(&r.1, &base))
        .fold(f64::NEG_INFINITY, f64::max);
    let checks = vec![
        Check::new("monotone_under_erosion", defect, defect <= 2.0 * DEFAULT_EIGEN_TOL),
        Check::new("common_ball", 1.0, rows.iter().all(|r| r.2)),
    ];
    let mut diagnostics = BTreeMap::new();
    for (k, l) in base.iter().enumerate() {
        diagnostics.insert(format!("lambda_{}_reference", k + 1), *l);
    }
    let report = ExperimentReport::new(
        "spectral",
        cfg.s,
        vec![cfg.domain.clone()],
        cfg.n,
        fits,
        checks,
        diagnostics,
    );
    Ok(finish(ExperimentConfig::Spectral(cfg.clone()), report, points, start))
}

fn first_cluster(basis: &EigenBasis) -> Vec<GridFunction> {
    basis.clusters()[0].iter().map(|&i| basis.pairs[i].u.clone()).collect()
}

/// Energy-normalized principal eigenfunction drift `‖e^a/√λ^a − e^b/√λ^b‖_s`
/// under erosion against `min(𝔡(Ω_a, Ω_b), 𝔡(Ω_b, Ω_a))`, together with the
/// excess between the first eigenspaces.
pub fn run_eigenfunction_stability(cfg: &EigenfunctionConfig) -> Result<RunOutput> {
    let start = Instant::now();
    check_order(cfg.s)?;
    let eps = sorted_controls(&cfg.eps, "perturbations")?;
    check_admissible(&eps, &cfg.cone)?;
    let mask_a = cfg.domain.discretize(cfg.n)?;
    certify_domain(&cfg.domain, &mask_a, &cfg.cone)?;
    let grid = *mask_a.grid();
    let op = FracStiffness::assemble(&grid, cfg.s)?;
    let base = eigenpairs(&op, &mask_a, 2, DEFAULT_EIGEN_TOL)?;
    let space_a = first_cluster(&base);
    let bound = cfg.cone.admissible();

    let rows = sweep(&eps, |e| {
        let mask_b = eroded(&mask_a, e)?;
        let (d_ab, d_ba) = (dfront(&mask_a, &mask_b)?, dfront(&mask_b, &mask_a)?);
        if d_ab.max(d_ba) >= bound {
            return Err(invalid(format!(
                "measured distance {} is not below ρ sin θ / 2 = {bound}",
                d_ab.max(d_ba)
            )));
        }
        let basis = eigenpairs(&op, &mask_b, 2, DEFAULT_EIGEN_TOL)?;
        let (pa, pb) = align_principal(&op, &base.pairs[0], &basis.pairs[0])?;
        let positive = pb.u.values().iter().sum::<f64>() > 0.0;
        let diff = pa.u.combine(1.0 / pa.lambda.sqrt(), &pb.u, -1.0 / pb.lambda.sqrt())?;
        let drift = gagliardo_seminorm(&diff, cfg.s)?;
        let excess = eigenspace_excess(&op, &space_a, &first_cluster(&basis))?;
        Ok((d_ab.min(d_ba), drift, excess, positive))
    })?;
    let dist: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let drift: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let excess: Vec<f64> = rows.iter().map(|r| r.2).collect();

    let tol = cfg.tolerance.unwrap_or(SPECTRAL_TOLERANCE);
    let fits = vec![SeriesFit::new("eigenfunction", &dist, &drift, 0.5 * cfg.s, tol)?];
    let base_positive = base.pairs[0].u.values().iter().sum::<f64>() > 0.0;
    let checks = vec![
        Check::new(
            "sign_normalized",
            1.0,
            base_positive && rows.iter().all(|r| r.3),
        ),
        Check::new("drift_monotone", drift[0], nondecreasing(&drift)),
        Check::new("excess_monotone", excess[0], nondecreasing(&excess)),
    ];
    let mut points = Vec::new();
    for (&e, r) in eps.iter().zip(&rows) {
        points.push(Point::new("eigenfunction", e, r.0, r.1));
        points.push(Point::new("excess", e, r.0, r.2));
    }
    let mut diagnostics = BTreeMap::new();
    diagnostics.insert("lambda_1_reference".into(), base.pairs[0].lambda);
    diagnostics.insert("excess_smallest_eps".into(), excess[0]);
    // gap of the inverse spectrum around the principal eigenvalue, from the
    // discrete eigenvalues; not claimed to bound its continuum counterpart
    let lambda = base.lambdas();
    diagnostics.insert("delta_discrete".into(), 0.5 * (1.0 / lambda[0] - 1.0 / lambda[1]));
    let report = ExperimentReport::new(
        "eigenfunction",
        cfg.s,
        vec![cfg.domain.clone()],
        cfg.n,
        fits,
        checks,
        diagnostics,
    );
    Ok(finish(ExperimentConfig::Eigenfunction(cfg.clone()), report, points, start))
}

/// Difference moduli of the Dirichlet solution over the default dyadic
/// range, the quotients at `r = 3s/2` and the scanned regularity ceiling.
pub fn run_besov_diagnostic(cfg: &BesovConfig) -> Result<RunOutput> {
    let start = Instant::now();
    check_order(cfg.s)?;
    let mask = cfg.domain.discretize(cfg.n)?;
    let grid = *mask.grid();
    let solver = DirichletSolver::new(&grid, cfg.s)?;
    let u = solve(&solver, &mask, &cfg.source)?;

    let range = DyadicRange::for_radius(&grid, cfg.domain.radius()?)?;
    let steps = range.steps(grid.spacing());
    let moduli = difference_moduli(&u, cfg.order, &range)?;
    let target = 1.5 * cfg.s;
    let estimate = besov_quotients(&u, target, cfg.order, &range)?;
    let spread = estimate.spread();

    let tol = cfg.tolerance.unwrap_or_else(|| default_tolerance(grid.dim()));
    let fits = vec![SeriesFit::new("modulus", &steps, &moduli, target, tol)?];
    let checks = vec![Check::new("quotients_stable", spread, spread <= MAX_QUOTIENT_SPREAD)];
    let mut diagnostics = BTreeMap::new();
    diagnostics.insert("target_r".into(), target);
    diagnostics.insert("sup_quotient".into(), estimate.sup_quotient);
    if let Ok(ceiling) = regularity_ceiling(&u, cfg.order, &range) {
        diagnostics.insert("regularity_ceiling".into(), ceiling);
    }
    let mut points: Vec<Point> = steps
        .iter()
        .zip(&moduli)
        .map(|(&h, &m)| Point::new("modulus", h, h, m))
        .collect();
    points.extend(
        estimate
            .dyadic_h
            .iter()
            .zip(&estimate.quotients)
            .map(|(&h, &q)| Point::new("quotient", h, h, q)),
    );
    let report = ExperimentReport::new(
        "besov",
        cfg.s,
        vec![cfg.domain.clone()],
        cfg.n,
        fits,
        checks,
        diagnostics,
    );
    Ok(finish(ExperimentConfig::Besov(cfg.clone()), report, points, start))
}

/// Runs whichever experiment `config` describes.
pub fn run(config: &ExperimentConfig) -> Result<RunOutput> {
    match config {
        ExperimentConfig::Translation(c) => run_translation_rate(c),
        ExperimentConfig::Domain(c) => run_domain_perturbation(c),
        ExperimentConfig::Spectral(c) => run_spectral_stability(c),
        ExperimentConfig::Eigenfunction(c) => run_eigenfunction_stability(c),
        ExperimentConfig::Besov(c) => run_besov_diagnostic(c),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::Source;

    fn interval() -> DomainSpec {
        DomainSpec::Interval { a: -1.0, b: 1.0 }
    }

    #[test]
    fn pass_flag_follows_fits_and_checks() {
        let p = [0.4, 0.2, 0.1, 0.05];
        let m: Vec<f64> = p.iter().map(|x: &f64| x.powf(0.45)).collect();
        let fit = SeriesFit::new("a", &p, &m, 0.5, 0.1).unwrap();
        assert!(fit.pass);
        let tight = SeriesFit::new("a", &p, &m, 0.5, 0.01).unwrap();
        assert!(!tight.pass);
        let ok = ExperimentReport::new("t", 0.5, vec![], 8, vec![fit.clone()], vec![], BTreeMap::new());
        assert!(ok.pass && ok.is_consistent());
        let failing_check = Check::new("c", 0.0, false);
        let bad = ExperimentReport::new("t", 0.5, vec![], 8, vec![fit], vec![failing_check], BTreeMap::new());
        assert!(!bad.pass && bad.is_consistent());
        let mut forged = bad.clone();
        forged.pass = true;
        assert!(!forged.is_consistent());
    }

    #[test]
    fn monotone_helpers() {
        assert!(nondecreasing(&[0.1, 0.2, 0.2, 0.5]));
        assert!(!nondecreasing(&[0.1, 0.3, 0.2]));
        let l = [1.0, 2.0, 3.0];
        assert_eq!(monotonicity_defect(&l, &l), 0.0);
        assert!(monotonicity_defect(&[1.1, 2.0, 3.5], &l) <= 0.0);
        assert!(monotonicity_defect(&[0.9, 2.0, 3.5], &l) > 0.0);
    }

    #[test]
    fn perturbations_must_be_admissible() {
        let cfg = DomainConfig {
            domain: interval(),
            s: 0.5,
            n: 256,
            source: Source::default(),
            eps: vec![0.02, 0.04, 0.08, 0.1],
            cone: ConeParams::default(),
            tolerance: None,
        };
        assert!(matches!(run_domain_perturbation(&cfg), Err(Error::InvalidParameter(_))));
        let mask = interval().discretize(64).unwrap();
        assert!(matches!(eroded(&mask, 1.5), Err(Error::EmptySet(_))));
    }

    #[test]
    fn identical_domains_do_not_drift() {
        let mask = interval().discretize(128).unwrap();
        let solver = DirichletSolver::new(mask.grid(), 0.5).unwrap();
        let u = solve(&solver, &mask, &Source::default()).unwrap();
        assert_eq!(dfront(&mask, &mask).unwrap(), 0.0);
        assert_eq!(complementary_hausdorff(&mask, &mask).unwrap(), 0.0);
        assert_eq!(gagliardo_seminorm(&u.sub(&u).unwrap(), 0.5).unwrap(), 0.0);
    }

    #[test]
    fn coarse_domain_sweep_passes() {
        let cfg = DomainConfig {
            domain: interval(),
            s: 0.5,
            n: 512,
            source: Source::default(),
            eps: vec![0.01, 0.02, 0.04, 0.08],
            cone: ConeParams::default(),
            tolerance: None,
        };
        let out = run_domain_perturbation(&cfg).unwrap();
        assert!(out.report.pass, "{:?}", out.report);
        assert_eq!(out.points.len(), 4);
        // measured distances, not the construction parameters
        assert!(out.points.iter().all(|p| p.parameter != p.control));
    }

    #[test]
    fn coarse_spectral_sweep_passes() {
        let cfg = SpectralConfig {
            domain: interval(),
            s: 0.5,
            n: 256,
            count: 3,
            eps: vec![0.01, 0.02, 0.04, 0.08],
            tolerance: None,
        };
        let out = run_spectral_stability(&cfg).unwrap();
        assert!(out.report.pass, "{:?}", out.report);
        assert_eq!(out.report.fits.len(), 3);
    }

    #[test]
    fn coarse_besov_and_translation_pass() {
        let besov = BesovConfig {
            domain: interval(),
            s: 0.5,
            n: 1024,
            source: Source::default(),
            order: 2,
            tolerance: None,
        };
        let out = run_besov_diagnostic(&besov).unwrap();
        assert!(out.report.pass);
        assert!(out.report.diagnostics.contains_key("regularity_ceiling"));
        let tr = TranslationConfig {
            domain: interval(),
            s: 0.25,
            n: 1024,
            source: Source::default(),
            max_step: None,
            min_step_cells: 8,
            cutoff_radius: None,
            tolerance: None,
        };
        let out = run_translation_rate(&tr).unwrap();
        assert!(out.report.pass);
        assert!(out.report.fit("l2").is_some() && out.report.fit("energy").is_some());
    }
}
