use std::path::Path;

use nalgebra::DMatrix;
use rustfft::num_complex::Complex;
use serde::Serialize;

use super::coeffs::centered_coeffs;
use super::normalization::{check_order, normalization_constant};
use crate::error::{invalid, Result};
use crate::fourier::FourierBox;
use crate::function::GridFunction;
use crate::geometry::{DomainMask, Grid};
use crate::quadrature::GaussLegendre;

/// Discrete restricted fractional Laplacian on a grid.
///
/// Entries depend only on the lattice offset between two nodes and are kept
/// for non-negative offsets: `lags[a + b·nx]` is the entry for offset
/// `(±a, ±b)`, already multiplied by `spacing^{-2s}`. In 1D these are the
/// fractional centered difference weights; in 2D the off-diagonal entries
/// are `-C(2,s)` times the kernel integrated over the neighbouring cell and
/// the diagonal is `C(2,s)` times the kernel integrated over the plane minus
/// the node's own cell.
#[derive(Debug, Clone)]
pub struct FracStiffness {
    grid: Grid,
    s: f64,
    lags: Vec<f64>,
    full: Convolver,
}

impl FracStiffness {
    pub fn assemble(grid: &Grid, s: f64) -> Result<Self> {
        check_order(s)?;
        let [nx, ny] = grid.counts();
        if nx < 3 || (grid.dim() == 2 && ny < 3) {
            return Err(invalid("grid needs at least three nodes per axis"));
        }
        let scale = grid.spacing().powf(-2.0 * s);
        let lags: Vec<f64> = match grid.dim() {
            1 => centered_coeffs(s, nx - 1)?.into_iter().map(|c| scale * c).collect(),
            _ => plane_lags(s, nx, ny)?.into_iter().map(|c| scale * c).collect(),
        };
        let full = Convolver::new(&lags, [nx, ny], [nx, ny]);
        Ok(Self {
            grid: *grid,
            s,
            lags,
            full,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn order(&self) -> f64 {
        self.s
    }

    /// `spacing^{-2s}`.
    pub fn scale(&self) -> f64 {
        self.grid.spacing().powf(-2.0 * self.s)
    }

    /// Entry for a lattice offset.
    pub fn lag(&self, di: i64, dj: i64) -> f64 {
        let [nx, ny] = self.grid.counts();
        let (a, b) = (di.unsigned_abs() as usize, dj.unsigned_abs() as usize);
        if a >= nx || b >= ny {
            return 0.0;
        }
        self.lags[a + b * nx]
    }

    pub fn lags(&self) -> &[f64] {
        &self.lags
    }

    pub fn diagonal(&self) -> f64 {
        self.lags[0]
    }

    /// Matrix entry `A[a, b]` between two grid nodes.
    pub fn entry(&self, a: usize, b: usize) -> f64 {
        let (ia, ja) = self.grid.coords(a);
        let (ib, jb) = self.grid.coords(b);
        self.lag(ia as i64 - ib as i64, ja as i64 - jb as i64)
    }

    /// `A·v` on raw nodal values of the whole box.
    pub fn apply_values(&self, values: &[f64]) -> Vec<f64> {
        self.full.apply(values)
    }

    /// `A·u` at every grid node; the output is generally non-zero off the
    /// support of `u`.
    pub fn apply(&self, u: &GridFunction) -> Result<GridFunction> {
        self.grid.ensure_same(u.grid())?;
        GridFunction::free(self.grid, self.apply_values(u.values()))
    }

    /// `spacing^N · uᵀ A v`.
    pub fn form(&self, u: &GridFunction, v: &GridFunction) -> Result<f64> {
        self.grid.ensure_same(u.grid())?;
        self.grid.ensure_same(v.grid())?;
        let av = self.apply_values(v.values());
        let dot: f64 = u.values().iter().zip(&av).map(|(a, b)| a * b).sum();
        Ok(self.grid.cell_volume() * dot)
    }

    /// The operator seen through the nodes of `mask`.
    pub fn restrict(&self, mask: &DomainMask) -> Result<RestrictedStiffness> {
        self.grid.ensure_same(mask.grid())?;
        RestrictedStiffness::new(self, mask)
    }

    /// Dense restricted matrix, rows and columns in mask index order.
    pub fn restricted_matrix(&self, mask: &DomainMask) -> Result<DMatrix<f64>> {
        self.grid.ensure_same(mask.grid())?;
        let idx = mask.indices();
        Ok(DMatrix::from_fn(idx.len(), idx.len(), |r, c| {
            self.entry(idx[r], idx[c])
        }))
    }

    /// Discrete 1D symbol at frequency `xi`: `spacing^{-2s}|2 sin(ξh/2)|^{2s}`.
    pub fn symbol_1d(&self, xi: f64) -> f64 {
        let h = self.grid.spacing();
        self.scale() * (2.0 * (0.5 * xi * h).sin()).abs().powf(2.0 * self.s)
    }

    /// Writes the lag table with one row per non-negative offset.
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        #[derive(Serialize)]
        struct Row {
            dim: usize,
            s: f64,
            spacing: f64,
            n: usize,
            lag_x: usize,
            lag_y: usize,
            value: f64,
        }
        let [nx, ny] = self.grid.counts();
        let mut writer = csv::Writer::from_path(path)?;
        for b in 0..ny {
            for a in 0..nx {
                writer.serialize(Row {
                    dim: self.grid.dim(),
                    s: self.s,
                    spacing: self.grid.spacing(),
                    n: self.grid.len(),
                    lag_x: a,
                    lag_y: b,
                    value: self.lags[a + b * nx],
                })?;
            }
        }
        writer.flush()?;
        Ok(())
    }
}

/// Restricted operator acting on vectors indexed by the nodes of a mask.
///
/// The convolution runs on the bounding block of the mask only, which keeps
/// solves cheap when the box carries a wide exterior margin.
#[derive(Debug, Clone)]
pub struct RestrictedStiffness {
    nodes: Vec<usize>,
    block_origin: [usize; 2],
    block_counts: [usize; 2],
    block_pos: Vec<usize>,
    diagonal: f64,
    conv: Convolver,
}

impl RestrictedStiffness {
    fn new(op: &FracStiffness, mask: &DomainMask) -> Result<Self> {
        let grid = op.grid;
        let nodes = mask.indices();
        if nodes.is_empty() {
            return Err(crate::error::Error::EmptySet("restricted operator on an empty mask".into()));
        }
        let mut lo = [usize::MAX; 2];
        let mut hi = [0usize; 2];
        for &k in &nodes {
            let (i, j) = grid.coords(k);
            lo = [lo[0].min(i), lo[1].min(j)];
            hi = [hi[0].max(i), hi[1].max(j)];
        }
        let block_counts = [hi[0] - lo[0] + 1, hi[1] - lo[1] + 1];
        let block_pos = nodes
            .iter()
            .map(|&k| {
                let (i, j) = grid.coords(k);
                (i - lo[0]) + (j - lo[1]) * block_counts[0]
            })
            .collect();
        let conv = Convolver::new(&op.lags, grid.counts(), block_counts);
        Ok(Self {
            nodes,
            block_origin: lo,
            block_counts,
            block_pos,
            diagonal: op.diagonal(),
            conv,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Grid indices of the unknowns.
    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn diagonal(&self) -> f64 {
        self.diagonal
    }

    pub fn block_origin(&self) -> [usize; 2] {
        self.block_origin
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut block = vec![0.0; self.block_counts[0] * self.block_counts[1]];
        for (&p, &v) in self.block_pos.iter().zip(x) {
            block[p] = v;
        }
        let out = self.conv.apply(&block);
        self.block_pos.iter().map(|&p| out[p]).collect()
    }
}

/// Convolution with a symmetric lag table through a circulant embedding.
#[derive(Debug, Clone)]
struct Convolver {
    counts: [usize; 2],
    fourier: FourierBox,
    spectrum: Vec<f64>,
}

impl Convolver {
    /// `lags` is indexed with row length `lag_counts[0]`; the convolution acts
    /// on blocks of `counts`, which must not exceed `lag_counts`.
    fn new(lags: &[f64], lag_counts: [usize; 2], counts: [usize; 2]) -> Self {
        let dims = [
            (2 * counts[0]).next_power_of_two(),
            if counts[1] > 1 { (2 * counts[1]).next_power_of_two() } else { 1 },
        ];
        let fourier = FourierBox::new(dims);
        let mut data = vec![Complex::new(0.0, 0.0); fourier.len()];
        let wrap = |k: usize, m: usize| [k, (m - k) % m];
        for b in 0..counts[1] {
            for a in 0..counts[0] {
                let value = lags[a + b * lag_counts[0]];
                for x in wrap(a, dims[0]) {
                    for y in wrap(b, dims[1]) {
                        data[x + y * dims[0]].re = value;
                    }
                }
            }
        }
        fourier.forward(&mut data);
        Self {
            counts,
            fourier,
            spectrum: data.into_iter().map(|z| z.re).collect(),
        }
    }

    fn apply(&self, values: &[f64]) -> Vec<f64> {
        let mut data = self.fourier.embed(values, self.counts);
        self.fourier.forward(&mut data);
        for (z, &k) in data.iter_mut().zip(&self.spectrum) {
            *z *= k;
        }
        self.fourier.inverse(&mut data);
        self.fourier.extract(&data, self.counts)
    }
}

/// Unscaled 2D lag table: `C(2,s)` times the cell integrals of
/// `|y|^{-2-2s}` in lattice units.
fn plane_lags(s: f64, nx: usize, ny: usize) -> Result<Vec<f64>> {
    let c = normalization_constant(2, s)?.value;
    let rules = CellRules::new();
    let mut lags = vec![0.0; nx * ny];
    for b in 0..ny {
        for a in 0..nx {
            if a == 0 && b == 0 {
                continue;
            }
            let value = if a < b && b < nx && a < ny {
                lags[b + a * nx]
            } else {
                -c * rules.cell_integral(a as f64, b as f64, s)
            };
            lags[a + b * nx] = value;
        }
    }
    lags[0] = c * self_exterior_integral(s);
    Ok(lags)
}

struct CellRules {
    near: GaussLegendre,
    mid: GaussLegendre,
    far: GaussLegendre,
}

impl CellRules {
    fn new() -> Self {
        Self {
            near: GaussLegendre::new(8),
            mid: GaussLegendre::new(8),
            far: GaussLegendre::new(3),
        }
    }

    /// `∫_{[a-½,a+½]×[b-½,b+½]} |y|^{-2-2s} dy` for a cell not containing 0.
    fn cell_integral(&self, a: f64, b: f64, s: f64) -> f64 {
        let reach = a.max(b);
        let (rule, sub) = if reach <= 2.0 {
            (&self.near, 4)
        } else if reach <= 8.0 {
            (&self.mid, 1)
        } else {
            (&self.far, 1)
        };
        let p = -1.0 - s;
        let width = 1.0 / sub as f64;
        let mut total = 0.0;
        for si in 0..sub {
            let x0 = a - 0.5 + si as f64 * width;
            for sj in 0..sub {
                let y0 = b - 0.5 + sj as f64 * width;
                for (x, wx) in rule.mapped(x0, x0 + width) {
                    for (y, wy) in rule.mapped(y0, y0 + width) {
                        total += wx * wy * (x * x + y * y).powf(p);
                    }
                }
            }
        }
        total
    }
}

/// `∫_{R^2 \ [-½,½]^2} |y|^{-2-2s} dy = (4/s) ∫_0^{π/4} (2 cos φ)^{2s} dφ`.
fn self_exterior_integral(s: f64) -> f64 {
    let gl = GaussLegendre::new(24);
    (4.0 / s) * gl.integrate(|phi| (2.0 * phi.cos()).powf(2.0 * s), 0.0, std::f64::consts::FRAC_PI_4)
}
