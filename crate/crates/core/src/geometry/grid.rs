use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Uniform isotropic lattice over a bounding box, in one or two dimensions.
///
/// Node `(i, j)` sits at `origin + (i, j) * spacing` and is stored at flat
/// index `i + j * counts[0]`. In 1D the second axis is degenerate
/// (`counts[1] == 1`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridHeader", into = "GridHeader")]
pub struct Grid {
    dim: usize,
    origin: [f64; 2],
    spacing: f64,
    counts: [usize; 2],
}

/// Serialized form of a [`Grid`]; vectors have length `dim`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridHeader {
    pub dim: usize,
    pub origin: Vec<f64>,
    pub spacing: f64,
    pub counts: Vec<usize>,
}

impl TryFrom<GridHeader> for Grid {
    type Error = Error;

    fn try_from(h: GridHeader) -> Result<Self> {
        Grid::new(h.dim, &h.origin, h.spacing, &h.counts)
    }
}

impl From<Grid> for GridHeader {
    fn from(g: Grid) -> Self {
        GridHeader {
            dim: g.dim,
            origin: g.origin[..g.dim].to_vec(),
            spacing: g.spacing,
            counts: g.counts[..g.dim].to_vec(),
        }
    }
}

impl Grid {
    pub fn new(dim: usize, origin: &[f64], spacing: f64, counts: &[usize]) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(invalid(format!("grid dimension must be 1 or 2, got {dim}")));
        }
        if origin.len() != dim || counts.len() != dim {
            return Err(invalid("origin and counts must have one entry per axis"));
        }
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(invalid(format!("grid spacing must be positive, got {spacing}")));
        }
        if counts.iter().any(|&c| c < 2) {
            return Err(invalid("every axis needs at least two nodes"));
        }
        if origin.iter().any(|o| !o.is_finite()) {
            return Err(invalid("grid origin must be finite"));
        }
        let mut o = [0.0; 2];
        let mut c = [1; 2];
        o[..dim].copy_from_slice(origin);
        c[..dim].copy_from_slice(counts);
        Ok(Self {
            dim,
            origin: o,
            spacing,
            counts: c,
        })
    }

    pub fn line(origin: f64, spacing: f64, n: usize) -> Result<Self> {
        Self::new(1, &[origin], spacing, &[n])
    }

    pub fn plane(origin: [f64; 2], spacing: f64, counts: [usize; 2]) -> Result<Self> {
        Self::new(2, &origin, spacing, &counts)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn origin(&self) -> [f64; 2] {
        self.origin
    }

    pub fn counts(&self) -> [usize; 2] {
        self.counts
    }

    pub fn len(&self) -> usize {
        self.counts[0] * self.counts[1]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `spacing^dim`, the quadrature weight of one node.
    pub fn cell_volume(&self) -> f64 {
        self.spacing.powi(self.dim as i32)
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i + j * self.counts[0]
    }

    pub fn coords(&self, idx: usize) -> (usize, usize) {
        (idx % self.counts[0], idx / self.counts[0])
    }

    pub fn point(&self, idx: usize) -> [f64; 2] {
        let (i, j) = self.coords(idx);
        let mut p = [
            self.origin[0] + i as f64 * self.spacing,
            self.origin[1] + j as f64 * self.spacing,
        ];
        if self.dim == 1 {
            p[1] = 0.0;
        }
        p
    }

    /// Lower and upper corner of the node box.
    pub fn bounds(&self) -> ([f64; 2], [f64; 2]) {
        let hi = [
            self.origin[0] + (self.counts[0] - 1) as f64 * self.spacing,
            self.origin[1] + (self.counts[1] - 1) as f64 * self.spacing,
        ];
        (self.origin, hi)
    }

    /// Euclidean diameter of the node box.
    pub fn diameter(&self) -> f64 {
        let (lo, hi) = self.bounds();
        ((hi[0] - lo[0]).powi(2) + (hi[1] - lo[1]).powi(2)).sqrt()
    }

    pub fn is_outer_layer(&self, idx: usize) -> bool {
        let (i, j) = self.coords(idx);
        let x_edge = i == 0 || i + 1 == self.counts[0];
        let y_edge = self.dim == 2 && (j == 0 || j + 1 == self.counts[1]);
        x_edge || y_edge
    }

    /// Squared lattice distance (in units of cells) between two nodes.
    pub fn lattice_dist2(&self, a: usize, b: usize) -> u64 {
        let (ai, aj) = self.coords(a);
        let (bi, bj) = self.coords(b);
        let di = ai.abs_diff(bi) as u64;
        let dj = aj.abs_diff(bj) as u64;
        di * di + dj * dj
    }

    /// Physical distance corresponding to a squared lattice distance.
    ///
    /// Every node-set distance in the crate goes through this one expression so
    /// that brute-force and transform-based evaluations agree bitwise.
    pub fn length_of(&self, dist2: u64) -> f64 {
        self.spacing * (dist2 as f64).sqrt()
    }

    pub fn node_distance(&self, a: usize, b: usize) -> f64 {
        self.length_of(self.lattice_dist2(a, b))
    }

    /// Continuous lattice coordinates of a physical point.
    pub fn to_lattice(&self, p: [f64; 2]) -> [f64; 2] {
        [
            (p[0] - self.origin[0]) / self.spacing,
            if self.dim == 2 {
                (p[1] - self.origin[1]) / self.spacing
            } else {
                0.0
            },
        ]
    }

    /// Nearest node to `p`, if `p` lies within half a cell of the box.
    pub fn nearest(&self, p: [f64; 2]) -> Option<usize> {
        let l = self.to_lattice(p);
        let i = l[0].round();
        let j = l[1].round();
        if i < 0.0 || j < 0.0 || i as usize >= self.counts[0] || j as usize >= self.counts[1] {
            return None;
        }
        Some(self.index(i as usize, j as usize))
    }

    /// Index of the node displaced by the integer offset `(di, dj)`, if inside.
    pub fn offset(&self, idx: usize, di: i64, dj: i64) -> Option<usize> {
        let (i, j) = self.coords(idx);
        let ni = i as i64 + di;
        let nj = j as i64 + dj;
        if ni < 0 || nj < 0 || ni >= self.counts[0] as i64 || nj >= self.counts[1] as i64 {
            return None;
        }
        Some(self.index(ni as usize, nj as usize))
    }

    /// Axis-neighbour indices (2 in 1D, 4 in 2D) that lie on the grid.
    pub fn neighbours(&self, idx: usize) -> impl Iterator<Item = usize> + '_ {
        let steps: &[(i64, i64)] = if self.dim == 1 {
            &[(-1, 0), (1, 0)]
        } else {
            &[(-1, 0), (1, 0), (0, -1), (0, 1)]
        };
        steps.iter().filter_map(move |&(di, dj)| self.offset(idx, di, dj))
    }

    /// Same lattice (dimension, spacing, node positions and counts).
    pub fn same_as(&self, other: &Grid) -> bool {
        self == other
    }

    pub fn ensure_same(&self, other: &Grid) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }
}
