use serde::{Deserialize, Serialize};

use super::grid::{Grid, GridHeader};
use crate::error::{invalid, Error, Result};

/// Indicator of an open set on a [`Grid`].
///
/// A mask never contains a node of the outermost grid layer, so every
/// function supported on it is representable with a zero exterior.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainMask {
    grid: Grid,
    inside: Vec<bool>,
}

impl DomainMask {
    pub fn new(grid: Grid, inside: Vec<bool>) -> Result<Self> {
        if inside.len() != grid.len() {
            return Err(invalid(format!(
                "mask has {} entries for a grid of {} nodes",
                inside.len(),
                grid.len()
            )));
        }
        if let Some(idx) = (0..grid.len()).find(|&k| inside[k] && grid.is_outer_layer(k)) {
            return Err(Error::BoundaryContact(format!("node {idx} is on the outer layer")));
        }
        Ok(Self { grid, inside })
    }

    pub fn empty(grid: Grid) -> Self {
        Self {
            grid,
            inside: vec![false; grid.len()],
        }
    }

    /// Mask of the nodes at which `pred` holds.
    pub fn from_predicate(grid: Grid, pred: impl Fn([f64; 2]) -> bool) -> Result<Self> {
        let inside = (0..grid.len()).map(|k| pred(grid.point(k))).collect();
        Self::new(grid, inside)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.inside
    }

    pub fn contains(&self, idx: usize) -> bool {
        self.inside[idx]
    }

    pub fn count(&self) -> usize {
        self.inside.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.inside.iter().any(|&b| b)
    }

    /// Flat indices of the interior nodes, in increasing order.
    pub fn indices(&self) -> Vec<usize> {
        (0..self.inside.len()).filter(|&k| self.inside[k]).collect()
    }

    /// Complement within the bounding box (includes the outer layer).
    pub fn complement(&self) -> Vec<bool> {
        self.inside.iter().map(|&b| !b).collect()
    }

    pub fn is_subset_of(&self, other: &DomainMask) -> bool {
        self.grid == other.grid && self.inside.iter().zip(&other.inside).all(|(&a, &b)| !a || b)
    }

    /// Nodes on either side of the discrete boundary: interior nodes with an
    /// exterior axis-neighbour, and exterior nodes with an interior one.
    pub fn boundary_nodes(&self) -> Vec<bool> {
        (0..self.grid.len())
            .map(|k| {
                let me = self.inside[k];
                self.grid.neighbours(k).any(|n| self.inside[n] != me)
            })
            .collect()
    }

    pub fn to_rle(&self) -> MaskRle {
        let mut rle = Vec::new();
        let mut current = false;
        let mut run = 0usize;
        for &b in &self.inside {
            if b == current {
                run += 1;
            } else {
                rle.push(run);
                current = b;
                run = 1;
            }
        }
        rle.push(run);
        MaskRle {
            grid: self.grid.into(),
            rle,
        }
    }

    pub fn from_rle(file: &MaskRle) -> Result<Self> {
        let grid = Grid::try_from(file.grid.clone())?;
        let mut inside = Vec::with_capacity(grid.len());
        let mut value = false;
        for &run in &file.rle {
            inside.extend(std::iter::repeat_n(value, run));
            value = !value;
        }
        if inside.len() != grid.len() {
            return Err(invalid(format!(
                "run lengths cover {} nodes, grid has {}",
                inside.len(),
                grid.len()
            )));
        }
        Self::new(grid, inside)
    }
}

/// Run-length encoded mask with its grid header. Runs alternate starting
/// with an exterior run (which may be zero).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaskRle {
    pub grid: GridHeader,
    pub rle: Vec<usize>,
}
