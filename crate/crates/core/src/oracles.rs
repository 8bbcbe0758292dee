//! Closed-form reference solutions used to calibrate the discretization.

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::function::GridFunction;
use crate::geometry::{DomainMask, DomainSpec, Grid};
use crate::operator::{check_order, FracStiffness};
use crate::special::ln_gamma_signed;

/// Relative distance from the boundary below which nodes are left out of
/// interior residuals: the discrete operator applied to `(1-|x|²)^s` is only
/// consistent away from the boundary singularity.
pub const INTERIOR_BAND: f64 = 0.1;

/// Nodes skipped next to `±1` by [`ode_residual`].
pub const ODE_EXCLUDED_CELLS: usize = 4;

/// `κ·max(1 - |x|², 0)^s`, the solution of `(-Δ)^s u = 1` in the unit ball with
/// zero exterior data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GetoorSolution {
    pub dim: usize,
    pub s: f64,
    pub kappa: f64,
}

/// `κ = 4^{-s} Γ(N/2) / (Γ((N+2s)/2) Γ(1+s))`.
pub fn getoor(dim: usize, s: f64) -> Result<GetoorSolution> {
    check_order(s)?;
    if !(1..=2).contains(&dim) {
        return Err(invalid(format!("dimension must be 1 or 2, got {dim}")));
    }
    let n = dim as f64;
    let ln = -2.0 * s * 2f64.ln() + ln_gamma_signed(n / 2.0).0
        - ln_gamma_signed((n + 2.0 * s) / 2.0).0
        - ln_gamma_signed(1.0 + s).0;
    Ok(GetoorSolution {
        dim,
        s,
        kappa: ln.exp(),
    })
}

impl GetoorSolution {
    pub fn eval(&self, p: [f64; 2]) -> f64 {
        let r2 = p[0] * p[0] + if self.dim == 2 { p[1] * p[1] } else { 0.0 };
        if r2 >= 1.0 {
            0.0
        } else {
            self.kappa * (1.0 - r2).powf(self.s)
        }
    }

    /// Samples on every node of a grid; exterior nodes get zero.
    pub fn sample(&self, grid: &Grid) -> GridFunction {
        GridFunction::free_from_fn(*grid, |p| self.eval(p))
    }

    /// Samples on the nodes of a mask.
    pub fn sample_on(&self, mask: &DomainMask) -> GridFunction {
        GridFunction::from_fn(mask, |p| self.eval(p))
    }
}

/// Nodes of `mask` at distance at least `band` from the unit sphere, assuming
/// `mask` discretizes the unit ball.
pub fn interior_band(mask: &DomainMask, band: f64) -> Vec<usize> {
    let grid = mask.grid();
    mask.indices()
        .into_iter()
        .filter(|&k| {
            let p = grid.point(k);
            let r = (p[0] * p[0] + p[1] * p[1]).sqrt();
            r <= 1.0 - band
        })
        .collect()
}

/// Relative L² residual of `A·oracle - 1` over the interior band of the unit
/// ball discretized with `n` cells across its diameter.
pub fn oracle_residual(dim: usize, s: f64, n: usize, band: f64) -> Result<f64> {
    let mask = unit_ball(dim)?.discretize(n)?;
    let op = FracStiffness::assemble(mask.grid(), s)?;
    let oracle = getoor(dim, s)?;
    let au = op.apply_values(oracle.sample(mask.grid()).values());
    let nodes = interior_band(&mask, band);
    if nodes.is_empty() {
        return Err(Error::EmptySet("interior band holds no nodes".into()));
    }
    let err: f64 = nodes.iter().map(|&k| (au[k] - 1.0).powi(2)).sum();
    Ok((err / nodes.len() as f64).sqrt())
}

pub fn unit_ball(dim: usize) -> Result<DomainSpec> {
    match dim {
        1 => Ok(DomainSpec::Interval { a: -1.0, b: 1.0 }),
        2 => Ok(DomainSpec::Ball {
            center: vec![0.0, 0.0],
            radius: 1.0,
        }),
        _ => Err(invalid(format!("dimension must be 1 or 2, got {dim}"))),
    }
}

/// Largest `|(1-x²) D_h u + 2s x u|` over nodes `x` with `|x| ≤ limit`, where
/// `D_h` is the centered difference.
pub fn ode_residual_within(u: &GridFunction, s: f64, limit: f64) -> Result<f64> {
    let grid = u.grid();
    if grid.dim() != 1 {
        return Err(invalid("the radial ODE check is one-dimensional"));
    }
    let h = grid.spacing();
    let v = u.values();
    let worst = (1..grid.len() - 1)
        .filter(|&k| grid.point(k)[0].abs() <= limit)
        .map(|k| {
            let x = grid.point(k)[0];
            let du = (v[k + 1] - v[k - 1]) / (2.0 * h);
            ((1.0 - x * x) * du + 2.0 * s * x * v[k]).abs()
        })
        .fold(0.0, f64::max);
    Ok(worst)
}

/// [`ode_residual_within`] on `(-1,1)` minus the last few cells at each end.
pub fn ode_residual(u: &GridFunction, s: f64) -> Result<f64> {
    let limit = 1.0 - ODE_EXCLUDED_CELLS as f64 * u.grid().spacing();
    ode_residual_within(u, s, limit)
}

/// First eigenvalue of `(-L, L)` predicted from that of `(-1, 1)`.
pub fn scaling_lambda(lambda_ref: f64, length: f64, s: f64) -> Result<f64> {
    if !(length > 0.0) {
        return Err(invalid(format!("length must be positive, got {length}")));
    }
    Ok(lambda_ref / length.powf(2.0 * s))
}

/// Summary printed by the `oracle-check` command.
#[derive(Debug, Clone, Serialize)]
pub struct OracleCheck {
    pub kappa: f64,
    pub residual_l2: f64,
    pub ode_residual: Option<f64>,
}

pub fn oracle_check(dim: usize, s: f64, n: usize) -> Result<OracleCheck> {
    let oracle = getoor(dim, s)?;
    let residual_l2 = oracle_residual(dim, s, n, INTERIOR_BAND)?;
    let ode = if dim == 1 {
        let mask = unit_ball(1)?.discretize(n)?;
        Some(ode_residual(&oracle.sample(mask.grid()), s)?)
    } else {
        None
    };
    Ok(OracleCheck {
        kappa: oracle.kappa,
        residual_l2,
        ode_residual: ode,
    })
}
