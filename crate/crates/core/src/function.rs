use crate::error::{invalid, Result};
use crate::geometry::{DomainMask, Grid};

/// Real values on a grid.
///
/// When a support mask is attached the values are identically zero off the
/// mask; constructors enforce this rather than assume it. Functions without a
/// mask (operator outputs, cut-offs) may be non-zero anywhere in the box.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<f64>,
    support: Option<DomainMask>,
}

impl GridFunction {
    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.len()],
            support: None,
        }
    }

    /// Unconstrained function on the whole box.
    pub fn free(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(invalid(format!(
                "{} values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self {
            grid,
            values,
            support: None,
        })
    }

    /// Function supported on `mask`; values off the mask are zeroed.
    pub fn supported(mask: &DomainMask, mut values: Vec<f64>) -> Result<Self> {
        let grid = *mask.grid();
        if values.len() != grid.len() {
            return Err(invalid(format!(
                "{} values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        for (v, &inside) in values.iter_mut().zip(mask.as_slice()) {
            if !inside {
                *v = 0.0;
            }
        }
        Ok(Self {
            grid,
            values,
            support: Some(mask.clone()),
        })
    }

    pub fn from_fn(mask: &DomainMask, f: impl Fn([f64; 2]) -> f64) -> Self {
        let grid = *mask.grid();
        let values = (0..grid.len())
            .map(|k| if mask.contains(k) { f(grid.point(k)) } else { 0.0 })
            .collect();
        Self {
            grid,
            values,
            support: Some(mask.clone()),
        }
    }

    pub fn free_from_fn(grid: Grid, f: impl Fn([f64; 2]) -> f64) -> Self {
        let values = (0..grid.len()).map(|k| f(grid.point(k))).collect();
        Self {
            grid,
            values,
            support: None,
        }
    }

    /// Scatters mask-ordered values back onto the grid.
    pub fn from_restricted(mask: &DomainMask, restricted: &[f64]) -> Result<Self> {
        let idx = mask.indices();
        if idx.len() != restricted.len() {
            return Err(invalid("restricted vector length differs from mask size"));
        }
        let mut values = vec![0.0; mask.grid().len()];
        for (&k, &v) in idx.iter().zip(restricted) {
            values[k] = v;
        }
        Self::supported(mask, values)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn support(&self) -> Option<&DomainMask> {
        self.support.as_ref()
    }

    /// Values at the nodes of `mask`, in index order.
    pub fn restrict(&self, mask: &DomainMask) -> Result<Vec<f64>> {
        self.grid.ensure_same(mask.grid())?;
        Ok(mask.indices().into_iter().map(|k| self.values[k]).collect())
    }

    /// Re-attaches a support mask, zeroing values outside it.
    pub fn with_support(self, mask: &DomainMask) -> Result<Self> {
        self.grid.ensure_same(mask.grid())?;
        Self::supported(mask, self.values)
    }

    /// Drops the support constraint.
    pub fn into_free(mut self) -> Self {
        self.support = None;
        self
    }

    /// Nodes carrying a non-zero value.
    pub fn nonzero_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        self.values.iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(k, _)| k)
    }

    /// `true` when every non-zero value lies inside `mask`.
    pub fn vanishes_outside(&self, mask: &DomainMask) -> bool {
        self.grid == *mask.grid() && self.nonzero_nodes().all(|k| mask.contains(k))
    }

    /// Linear (bilinear in 2D) interpolation at continuous lattice
    /// coordinates; nodes beyond the box count as zero.
    pub fn sample_lattice(&self, l: [f64; 2]) -> f64 {
        let [nx, ny] = self.grid.counts();
        let (fi, fj) = (l[0].floor(), l[1].floor());
        let (ti, tj) = (l[0] - fi, l[1] - fj);
        let value = |i: f64, j: f64| -> f64 {
            if i < 0.0 || j < 0.0 || i >= nx as f64 || j >= ny as f64 {
                0.0
            } else {
                self.values[self.grid.index(i as usize, j as usize)]
            }
        };
        let along = |j: f64| {
            let a = value(fi, j);
            if ti == 0.0 {
                a
            } else {
                (1.0 - ti) * a + ti * value(fi + 1.0, j)
            }
        };
        let a = along(fj);
        if tj == 0.0 {
            a
        } else {
            (1.0 - tj) * a + tj * along(fj + 1.0)
        }
    }

    /// `x ↦ u(x + shift)` at every node, `shift` given in lattice units.
    /// Whole-cell shifts are exact index moves.
    pub fn shifted_values(&self, shift: [f64; 2]) -> Vec<f64> {
        let snap = |v: f64| {
            let r = v.round();
            if (v - r).abs() < 1e-9 {
                r
            } else {
                v
            }
        };
        let shift = [snap(shift[0]), snap(shift[1])];
        (0..self.grid.len())
            .map(|k| {
                let (i, j) = self.grid.coords(k);
                self.sample_lattice([i as f64 + shift[0], j as f64 + shift[1]])
            })
            .collect()
    }

    /// `h^N Σ u v`.
    pub fn dot(&self, other: &GridFunction) -> Result<f64> {
        self.grid.ensure_same(&other.grid)?;
        let s: f64 = self.values.iter().zip(&other.values).map(|(a, b)| a * b).sum();
        Ok(self.grid.cell_volume() * s)
    }

    pub fn l2_norm(&self) -> f64 {
        let s: f64 = self.values.iter().map(|v| v * v).sum();
        (self.grid.cell_volume() * s).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn scale(&self, alpha: f64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|v| alpha * v).collect(),
            support: self.support.clone(),
        }
    }

    /// `α·self + β·other`; keeps a support only if both share it.
    pub fn combine(&self, alpha: f64, other: &GridFunction, beta: f64) -> Result<Self> {
        self.grid.ensure_same(&other.grid)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| alpha * a + beta * b)
            .collect();
        let support = match (&self.support, &other.support) {
            (Some(a), Some(b)) if a == b => Some(a.clone()),
            _ => None,
        };
        Ok(Self {
            grid: self.grid,
            values,
            support,
        })
    }

    pub fn sub(&self, other: &GridFunction) -> Result<Self> {
        self.combine(1.0, other, -1.0)
    }

    /// Nodewise product.
    pub fn mul(&self, other: &GridFunction) -> Result<Self> {
        self.grid.ensure_same(&other.grid)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        Ok(Self {
            grid: self.grid,
            values,
            support: None,
        })
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
            support: None,
        }
    }
}
