use super::cover::BallCover;
use super::grid::Grid;
use crate::error::{Error, Result};

/// Lipschitz partition of unity `φ_0, …, φ_k` subordinate to a ball cover.
#[derive(Debug, Clone)]
pub struct CutoffFamily {
    pub grid: Grid,
    /// `functions[0]` is `φ_0`; `functions[i]` belongs to centre `i - 1`.
    pub functions: Vec<Vec<f64>>,
    /// `C(N)/r` with `C(N) = 1 + 5^N`.
    pub lipschitz_bound: f64,
}

/// Distance ramps `ψ_i = clamp(2 - |x - x_i|/r, 0, 1)`, renormalised where
/// their sum exceeds one, with `φ_0` taking the remainder.
pub fn build_cutoffs(cover: &BallCover) -> Result<CutoffFamily> {
    if !cover.half_balls_disjoint() {
        return Err(Error::Invariant("cover centres closer than r".into()));
    }
    let grid = cover.grid;
    let r = cover.radius;
    let k = cover.len();
    let mut functions = vec![vec![0.0; grid.len()]; k + 1];
    for node in 0..grid.len() {
        let mut sum = 0.0;
        for (i, &c) in cover.center_nodes.iter().enumerate() {
            let psi = (2.0 - grid.node_distance(node, c) / r).clamp(0.0, 1.0);
            functions[i + 1][node] = psi;
            sum += psi;
        }
        if sum > 1.0 {
            for f in functions.iter_mut().skip(1) {
                f[node] /= sum;
            }
        } else {
            functions[0][node] = 1.0 - sum;
        }
    }
    let c_n = 1.0 + 5f64.powi(grid.dim() as i32);
    let family = CutoffFamily {
        grid,
        functions,
        lipschitz_bound: c_n / r,
    };
    family.check(cover)?;
    Ok(family)
}

impl CutoffFamily {
    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    /// Largest nodal deviation of `Σ φ_i` from one.
    pub fn partition_residual(&self) -> f64 {
        (0..self.grid.len())
            .map(|n| (self.functions.iter().map(|f| f[n]).sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Largest forward difference quotient over all functions and axes.
    pub fn max_gradient(&self) -> f64 {
        let g = &self.grid;
        let h = g.spacing();
        let mut worst: f64 = 0.0;
        for f in &self.functions {
            for n in 0..g.len() {
                for (di, dj) in [(1, 0), (0, 1)] {
                    if let Some(m) = g.offset(n, di, dj) {
                        worst = worst.max((f[m] - f[n]).abs() / h);
                    }
                }
            }
        }
        worst
    }

    fn check(&self, cover: &BallCover) -> Result<()> {
        let g = &self.grid;
        let r = cover.radius;
        let fail = |what: String| Err(Error::Invariant(format!("cut-off family: {what}")));
        if self.functions.iter().flatten().any(|&v| !(0.0..=1.0).contains(&v)) {
            return fail("value outside [0, 1]".into());
        }
        let residual = self.partition_residual();
        if residual > 1e-12 {
            return fail(format!("partition of unity residual {residual:e}"));
        }
        for n in 0..g.len() {
            let dists: Vec<f64> = cover.center_nodes.iter().map(|&c| g.node_distance(n, c)).collect();
            if dists.iter().any(|&d| d < r) && self.functions[0][n] != 0.0 {
                return fail(format!("φ_0 non-zero inside a ball at node {n}"));
            }
            if dists.iter().all(|&d| d >= 2.0 * r) && self.functions[0][n] != 1.0 {
                return fail(format!("φ_0 not one outside the doubled balls at node {n}"));
            }
            for (i, &d) in dists.iter().enumerate() {
                if d >= 2.0 * r && self.functions[i + 1][n] != 0.0 {
                    return fail(format!("φ_{} leaks outside B_2r at node {n}", i + 1));
                }
            }
        }
        let grad = self.max_gradient();
        if grad > self.lipschitz_bound * (1.0 + 1e-9) {
            return fail(format!("gradient {grad} exceeds {}", self.lipschitz_bound));
        }
        Ok(())
    }
}
