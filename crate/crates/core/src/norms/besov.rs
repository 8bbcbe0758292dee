use serde::Serialize;

use super::translation::box_margin;
use crate::error::{invalid, Error, Result};
use crate::fit::fit_loglog;
use crate::function::GridFunction;
use crate::geometry::Grid;

/// Lattice-aligned dyadic steps, in cells, largest first.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DyadicRange {
    pub cells: Vec<usize>,
}

/// Smallest step of the default range, in cells.
pub const MIN_STEP_CELLS: usize = 8;

impl DyadicRange {
    /// Steps `c_min · 2^j` with `c_min = ceil(smallest / spacing)` and the
    /// largest not above `largest`.
    pub fn new(spacing: f64, largest: f64, smallest: f64) -> Result<Self> {
        if !(smallest > 0.0 && largest >= smallest) {
            return Err(invalid(format!("bad dyadic range [{smallest}, {largest}]")));
        }
        let base = ((smallest / spacing) - 1e-9).ceil().max(1.0) as usize;
        let mut cells = Vec::new();
        let mut c = base;
        while c as f64 * spacing <= largest * (1.0 + 1e-12) {
            cells.push(c);
            c *= 2;
        }
        if cells.is_empty() {
            return Err(invalid("dyadic range holds no lattice step"));
        }
        cells.reverse();
        Ok(Self { cells })
    }

    /// From a quarter of `radius` down to eight cells.
    pub fn for_radius(grid: &Grid, radius: f64) -> Result<Self> {
        Self::new(grid.spacing(), 0.25 * radius, MIN_STEP_CELLS as f64 * grid.spacing())
    }

    pub fn steps(&self, spacing: f64) -> Vec<f64> {
        self.cells.iter().map(|&c| c as f64 * spacing).collect()
    }
}

/// Quotients `‖Δ_h^k u‖_{L²} / |h|^r` over a dyadic range of `h`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BesovEstimate {
    pub r: f64,
    pub order: usize,
    /// Strictly decreasing.
    pub dyadic_h: Vec<f64>,
    pub quotients: Vec<f64>,
    pub sup_quotient: f64,
}

impl BesovEstimate {
    /// Sup over the median of the quotients.
    pub fn spread(&self) -> f64 {
        let mut sorted = self.quotients.clone();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len();
        let median = if n % 2 == 1 {
            sorted[n / 2]
        } else {
            0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
        };
        self.sup_quotient / median
    }
}

/// `max_axis ‖Δ_{h e}^k u‖_{L²}` for each step of the range, where
/// `Δ^1 = u_h - u` and `Δ^2 = u_{2h} - 2u_h + u`.
pub fn difference_moduli(u: &GridFunction, order: usize, range: &DyadicRange) -> Result<Vec<f64>> {
    if !(order == 1 || order == 2) {
        return Err(invalid(format!("difference order must be 1 or 2, got {order}")));
    }
    let grid = u.grid();
    let h = grid.spacing();
    let margin = box_margin(u);
    let axes: &[[f64; 2]] = if grid.dim() == 1 {
        &[[1.0, 0.0]]
    } else {
        &[[1.0, 0.0], [0.0, 1.0]]
    };
    range
        .cells
        .iter()
        .map(|&c| {
            let reach = (order * c) as f64 * h;
            if reach >= margin {
                return Err(invalid(format!("step {reach} exceeds the box margin {margin}")));
            }
            let worst = axes
                .iter()
                .map(|e| {
                    let one = u.shifted_values([e[0] * c as f64, e[1] * c as f64]);
                    let diff = if order == 1 {
                        one.iter().zip(u.values()).map(|(a, b)| a - b).collect::<Vec<_>>()
                    } else {
                        let two = u.shifted_values([e[0] * (2 * c) as f64, e[1] * (2 * c) as f64]);
                        two.iter()
                            .zip(&one)
                            .zip(u.values())
                            .map(|((a, b), c)| a - 2.0 * b + c)
                            .collect()
                    };
                    (grid.cell_volume() * diff.iter().map(|d| d * d).sum::<f64>()).sqrt()
                })
                .fold(0.0, f64::max);
            Ok(worst)
        })
        .collect()
}

pub fn besov_quotients(u: &GridFunction, r: f64, order: usize, range: &DyadicRange) -> Result<BesovEstimate> {
    if !(r > 0.0) {
        return Err(invalid(format!("smoothness index must be positive, got {r}")));
    }
    if order == 1 && r >= 1.0 {
        return Err(invalid("first differences only measure r < 1"));
    }
    let moduli = difference_moduli(u, order, range)?;
    Ok(quotients_from(&moduli, r, order, range.steps(u.grid().spacing())))
}

fn quotients_from(moduli: &[f64], r: f64, order: usize, dyadic_h: Vec<f64>) -> BesovEstimate {
    let quotients: Vec<f64> = moduli.iter().zip(&dyadic_h).map(|(m, h)| m / h.powf(r)).collect();
    let sup_quotient = quotients.iter().copied().fold(0.0, f64::max);
    BesovEstimate {
        r,
        order,
        dyadic_h,
        quotients,
        sup_quotient,
    }
}

/// Resolution of the regularity scan.
pub const CEILING_STEP: f64 = 0.01;

/// Smallest `r` on a grid of step [`CEILING_STEP`] at which the quotients
/// start growing as `h` decreases, i.e. the fitted log-log slope of the
/// quotients against `h` turns negative.
pub fn regularity_ceiling(u: &GridFunction, order: usize, range: &DyadicRange) -> Result<f64> {
    let moduli = difference_moduli(u, order, range)?;
    let steps = range.steps(u.grid().spacing());
    let top = (order as f64 / CEILING_STEP).round() as usize;
    for k in 1..=top {
        let r = k as f64 * CEILING_STEP;
        let q = quotients_from(&moduli, r, order, steps.clone());
        let fit = fit_loglog(&q.dyadic_h, &q.quotients)?;
        if fit.slope < 0.0 {
            return Ok(r);
        }
    }
    Err(Error::DegenerateFit(format!(
        "quotients stay bounded up to r = {order}; the range is too coarse to see a ceiling"
    )))
}
