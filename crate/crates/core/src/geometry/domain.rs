use serde::{Deserialize, Serialize};

use super::grid::Grid;
use super::mask::{DomainMask, MaskRle};
use crate::error::{invalid, Result};

/// Declarative description of a bounded open set, as read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum DomainSpec {
    Interval { a: f64, b: f64 },
    Box { lo: Vec<f64>, hi: Vec<f64> },
    Ball { center: Vec<f64>, radius: f64 },
    Polygon { vertices: Vec<[f64; 2]> },
    Mask(MaskRle),
}

/// Fraction of the domain extent added as exterior margin on every side.
pub const DEFAULT_PADDING: f64 = 0.5;

impl DomainSpec {
    pub fn dim(&self) -> usize {
        match self {
            DomainSpec::Interval { .. } => 1,
            DomainSpec::Box { lo, .. } => lo.len(),
            DomainSpec::Ball { center, .. } => center.len(),
            DomainSpec::Polygon { .. } => 2,
            DomainSpec::Mask(m) => m.grid.dim,
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match self {
            DomainSpec::Interval { a, b } => a < b,
            DomainSpec::Box { lo, hi } => {
                (lo.len() == 1 || lo.len() == 2) && lo.len() == hi.len() && lo.iter().zip(hi).all(|(l, h)| l < h)
            }
            DomainSpec::Ball { center, radius } => (center.len() == 1 || center.len() == 2) && *radius > 0.0,
            DomainSpec::Polygon { vertices } => vertices.len() >= 3,
            DomainSpec::Mask(_) => true,
        };
        if ok {
            Ok(())
        } else {
            Err(invalid(format!("malformed domain specification {self:?}")))
        }
    }

    /// Axis-aligned bounding box (second axis unused in 1D).
    pub fn bounding_box(&self) -> Result<([f64; 2], [f64; 2])> {
        self.validate()?;
        Ok(match self {
            DomainSpec::Interval { a, b } => ([*a, 0.0], [*b, 0.0]),
            DomainSpec::Box { lo, hi } => (pad2(lo), pad2(hi)),
            DomainSpec::Ball { center, radius } => {
                let c = pad2(center);
                let r1 = if center.len() == 2 { *radius } else { 0.0 };
                ([c[0] - radius, c[1] - r1], [c[0] + radius, c[1] + r1])
            }
            DomainSpec::Polygon { vertices } => {
                let mut lo = [f64::INFINITY; 2];
                let mut hi = [f64::NEG_INFINITY; 2];
                for v in vertices {
                    for a in 0..2 {
                        lo[a] = lo[a].min(v[a]);
                        hi[a] = hi[a].max(v[a]);
                    }
                }
                (lo, hi)
            }
            DomainSpec::Mask(m) => {
                let mask = DomainMask::from_rle(m)?;
                let g = mask.grid();
                let mut lo = [f64::INFINITY; 2];
                let mut hi = [f64::NEG_INFINITY; 2];
                for k in mask.indices() {
                    let p = g.point(k);
                    for a in 0..g.dim() {
                        lo[a] = lo[a].min(p[a]);
                        hi[a] = hi[a].max(p[a]);
                    }
                }
                if g.dim() == 1 {
                    lo[1] = 0.0;
                    hi[1] = 0.0;
                }
                (lo, hi)
            }
        })
    }

    /// Largest axis extent of the bounding box.
    pub fn extent(&self) -> Result<f64> {
        let (lo, hi) = self.bounding_box()?;
        Ok((hi[0] - lo[0]).max(hi[1] - lo[1]))
    }

    /// Half the largest extent; the length scale of sweeps.
    pub fn radius(&self) -> Result<f64> {
        Ok(0.5 * self.extent()?)
    }

    pub fn center(&self) -> Result<[f64; 2]> {
        let (lo, hi) = self.bounding_box()?;
        Ok([0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1])])
    }

    /// Strict interior membership with absolute tolerance `tol`.
    pub fn contains(&self, p: [f64; 2], tol: f64) -> bool {
        match self {
            DomainSpec::Interval { a, b } => p[0] > a + tol && p[0] < b - tol,
            DomainSpec::Box { lo, hi } => (0..lo.len()).all(|k| p[k] > lo[k] + tol && p[k] < hi[k] - tol),
            DomainSpec::Ball { center, radius } => {
                let d2: f64 = center.iter().enumerate().map(|(k, c)| (p[k] - c).powi(2)).sum();
                d2.sqrt() < radius - tol
            }
            DomainSpec::Polygon { vertices } => {
                point_in_polygon(vertices, p) && polygon_edge_distance(vertices, p) > tol
            }
            DomainSpec::Mask(m) => DomainMask::from_rle(m)
                .ok()
                .and_then(|mask| mask.grid().nearest(p).map(|k| mask.contains(k)))
                .unwrap_or(false),
        }
    }

    /// Samples the domain on a grid whose spacing puts `n` cells across the
    /// largest extent, padded by [`DEFAULT_PADDING`] of the extent per side.
    pub fn discretize(&self, n: usize) -> Result<DomainMask> {
        self.discretize_padded(n, DEFAULT_PADDING)
    }

    pub fn discretize_padded(&self, n: usize, padding: f64) -> Result<DomainMask> {
        if let DomainSpec::Mask(m) = self {
            return DomainMask::from_rle(m);
        }
        if n < 2 {
            return Err(invalid("need at least two cells across the domain"));
        }
        let (lo, hi) = self.bounding_box()?;
        let dim = self.dim();
        let h = self.extent()? / n as f64;
        let pad = ((padding * n as f64).ceil() as usize).max(2);
        let mut origin = [0.0; 2];
        let mut counts = [1usize; 2];
        for a in 0..dim {
            let cells = ((hi[a] - lo[a]) / h).round() as usize;
            origin[a] = lo[a] - pad as f64 * h;
            counts[a] = cells + 2 * pad + 1;
        }
        let grid = Grid::new(dim, &origin[..dim], h, &counts[..dim])?;
        let tol = 1e-9 * h;
        DomainMask::from_predicate(grid, |p| self.contains(p, tol))
    }

    /// Samples the domain on an existing grid.
    pub fn on_grid(&self, grid: Grid) -> Result<DomainMask> {
        if let DomainSpec::Mask(m) = self {
            let mask = DomainMask::from_rle(m)?;
            grid.ensure_same(mask.grid())?;
            return Ok(mask);
        }
        if grid.dim() != self.dim() {
            return Err(crate::error::Error::GridMismatch);
        }
        let tol = 1e-9 * grid.spacing();
        DomainMask::from_predicate(grid, |p| self.contains(p, tol))
    }
}

fn pad2(v: &[f64]) -> [f64; 2] {
    [v[0], v.get(1).copied().unwrap_or(0.0)]
}

fn point_in_polygon(v: &[[f64; 2]], p: [f64; 2]) -> bool {
    let mut inside = false;
    let mut j = v.len() - 1;
    for i in 0..v.len() {
        let (a, b) = (v[i], v[j]);
        if (a[1] > p[1]) != (b[1] > p[1]) && p[0] < (b[0] - a[0]) * (p[1] - a[1]) / (b[1] - a[1]) + a[0] {
            inside = !inside;
        }
        j = i;
    }
    inside
}

fn polygon_edge_distance(v: &[[f64; 2]], p: [f64; 2]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..v.len() {
        let a = v[i];
        let b = v[(i + 1) % v.len()];
        let ab = [b[0] - a[0], b[1] - a[1]];
        let ap = [p[0] - a[0], p[1] - a[1]];
        let t = ((ap[0] * ab[0] + ap[1] * ab[1]) / (ab[0] * ab[0] + ab[1] * ab[1])).clamp(0.0, 1.0);
        let d = ((ap[0] - t * ab[0]).powi(2) + (ap[1] - t * ab[1]).powi(2)).sqrt();
        best = best.min(d);
    }
    best
}
