use super::distance::squared_distance_transform;
use super::grid::Grid;
use super::mask::DomainMask;
use crate::error::{invalid, Error, Result};

/// Finite family of open balls `B_r(x_i)` with pairwise disjoint half-radius balls.
#[derive(Debug, Clone, PartialEq)]
pub struct BallCover {
    pub grid: Grid,
    /// Node indices of the centres.
    pub center_nodes: Vec<usize>,
    pub centers: Vec<[f64; 2]>,
    pub radius: f64,
    /// `((2R + r)/r)^N` with `R = diam(box) + 1`.
    pub cardinality_bound: f64,
}

impl BallCover {
    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// Every node of `set` lies in some `B_r(x_i)`.
    pub fn covers(&self, set: &[bool]) -> bool {
        (0..self.grid.len()).filter(|&k| set[k]).all(|k| {
            self.center_nodes
                .iter()
                .any(|&c| self.grid.node_distance(k, c) < self.radius)
        })
    }

    /// `|x_i - x_j| ≥ r` for `i ≠ j`, so the balls `B_{r/2}(x_i)` are disjoint.
    pub fn half_balls_disjoint(&self) -> bool {
        let c = &self.center_nodes;
        (0..c.len()).all(|i| (i + 1..c.len()).all(|j| self.grid.node_distance(c[i], c[j]) >= self.radius))
    }
}

/// Greedy covering of a node set: take the first uncovered node in index
/// order as a centre, discard its `r`-ball, repeat.
pub fn cover_nodes(grid: &Grid, set: &[bool], r: f64) -> Result<BallCover> {
    if !(r > 0.0) {
        return Err(invalid(format!("cover radius must be positive, got {r}")));
    }
    if set.len() != grid.len() {
        return Err(Error::GridMismatch);
    }
    let reach = (r / grid.spacing()).ceil() as i64;
    let jr = if grid.dim() == 2 { reach } else { 0 };
    let mut covered = vec![false; grid.len()];
    let mut center_nodes = Vec::new();
    for k in 0..grid.len() {
        if !set[k] || covered[k] {
            continue;
        }
        center_nodes.push(k);
        for dj in -jr..=jr {
            for di in -reach..=reach {
                if let Some(n) = grid.offset(k, di, dj) {
                    if grid.node_distance(k, n) < r {
                        covered[n] = true;
                    }
                }
            }
        }
    }
    let big_r = grid.diameter() + 1.0;
    let cardinality_bound = ((2.0 * big_r + r) / r).powi(grid.dim() as i32);
    let cover = BallCover {
        grid: *grid,
        centers: center_nodes.iter().map(|&c| grid.point(c)).collect(),
        center_nodes,
        radius: r,
        cardinality_bound,
    };
    if cover.len() as f64 > cardinality_bound {
        return Err(Error::Invariant(format!(
            "cover uses {} balls, bound is {cardinality_bound}",
            cover.len()
        )));
    }
    Ok(cover)
}

/// Nodes within distance `< r` of the discrete boundary of `mask`.
pub fn boundary_tube(mask: &DomainMask, r: f64) -> Vec<bool> {
    let grid = mask.grid();
    let dt = squared_distance_transform(grid, &mask.boundary_nodes());
    dt.iter()
        .map(|d| d.is_some_and(|d2| grid.length_of(d2) < r))
        .collect()
}

/// Covers `E = ⋃_{y ∈ ∂Ω} B_r(y)` by balls of radius `r` centred in `E`.
pub fn cover_boundary(mask: &DomainMask, r: f64) -> Result<BallCover> {
    cover_nodes(mask.grid(), &boundary_tube(mask, r), r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_node_needs_one_ball() {
        let g = Grid::plane([0.0, 0.0], 1.0, [8, 8]).unwrap();
        let mut set = vec![false; g.len()];
        set[g.index(3, 4)] = true;
        for r in [0.1, 1.0, 10.0] {
            assert_eq!(cover_nodes(&g, &set, r).unwrap().len(), 1);
        }
    }

    #[test]
    fn two_boundary_points_need_two_balls() {
        let g = Grid::line(-2.0, 1.0 / 32.0, 129).unwrap();
        let mut set = vec![false; g.len()];
        set[g.nearest([-1.0, 0.0]).unwrap()] = true;
        set[g.nearest([1.0, 0.0]).unwrap()] = true;
        let c = cover_nodes(&g, &set, 0.5).unwrap();
        assert_eq!(c.len(), 2);
        assert!(c.covers(&set) && c.half_balls_disjoint());
    }

    #[test]
    fn interval_tube_is_covered() {
        let g = Grid::line(-2.0, 1.0 / 64.0, 257).unwrap();
        let m = DomainMask::from_predicate(g, |p| p[0].abs() < 1.0 - 1e-12).unwrap();
        let c = cover_boundary(&m, 0.25).unwrap();
        let tube = boundary_tube(&m, 0.25);
        assert!(c.covers(&tube) && c.half_balls_disjoint());
        assert_eq!(c.len(), 4);
    }
}
