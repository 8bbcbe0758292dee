use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

use super::grid::Grid;
use super::mask::DomainMask;
use crate::error::{invalid, Result};

/// Parameters of the `(ρ, θ)` Lipschitz cone search and the finite set of
/// unit directions tried as cone axes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeSpec {
    pub rho: f64,
    pub theta: f64,
    pub probe_directions: Vec<[f64; 2]>,
}

/// Default number of probe directions in 2D.
pub const DEFAULT_PROBES: usize = 32;

impl ConeSpec {
    pub fn new(rho: f64, theta: f64, probe_directions: Vec<[f64; 2]>) -> Result<Self> {
        if !(rho > 0.0) {
            return Err(invalid(format!("cone radius must be positive, got {rho}")));
        }
        if !(theta > 0.0 && theta < FRAC_PI_2) {
            return Err(invalid(format!("cone aperture must lie in (0, π/2), got {theta}")));
        }
        if probe_directions.is_empty() {
            return Err(invalid("probe set must be non-empty"));
        }
        for d in &probe_directions {
            if ((d[0] * d[0] + d[1] * d[1]).sqrt() - 1.0).abs() > 1e-12 {
                return Err(invalid("probe directions must be unit vectors"));
            }
            let symmetric = probe_directions
                .iter()
                .any(|e| (e[0] + d[0]).abs() < 1e-12 && (e[1] + d[1]).abs() < 1e-12);
            if !symmetric {
                return Err(invalid("probe set must be symmetric under sign"));
            }
        }
        Ok(Self {
            rho,
            theta,
            probe_directions,
        })
    }

    /// Uniformly spread probes: `±1` in 1D, [`DEFAULT_PROBES`] angles in 2D.
    pub fn uniform(dim: usize, rho: f64, theta: f64) -> Result<Self> {
        Self::new(rho, theta, default_probes(dim))
    }
}

pub fn default_probes(dim: usize) -> Vec<[f64; 2]> {
    if dim == 1 {
        vec![[1.0, 0.0], [-1.0, 0.0]]
    } else {
        (0..DEFAULT_PROBES)
            .map(|k| {
                let a = 2.0 * PI * k as f64 / DEFAULT_PROBES as f64;
                [a.cos(), a.sin()]
            })
            .collect()
    }
}

/// `v ∈ C_{ρ,θ}(n)`: `0 < |v| < ρ` and `v·n > |v| cos θ`.
pub fn in_cone(v: [f64; 2], n: [f64; 2], rho: f64, theta: f64) -> bool {
    let len = (v[0] * v[0] + v[1] * v[1]).sqrt();
    len > 0.0 && len < rho && v[0] * n[0] + v[1] * n[1] > len * theta.cos()
}

/// Lattice vectors of the cone `C_{ρ,θ}(n)`, as integer offsets.
fn cone_offsets(grid: &Grid, n: [f64; 2], rho: f64, theta: f64) -> Vec<(i64, i64)> {
    let h = grid.spacing();
    let reach = (rho / h).ceil() as i64;
    let jr = if grid.dim() == 2 { reach } else { 0 };
    let mut out = Vec::new();
    for dj in -jr..=jr {
        for di in -reach..=reach {
            let v = [di as f64 * h, dj as f64 * h];
            if in_cone(v, n, rho, theta) {
                out.push((di, dj));
            }
        }
    }
    out
}

/// Checks both cone conditions for the direction `n` at every grid node of
/// `B_{3ρ}(x0)` and every lattice vector of the cone. Points leaving the
/// bounding box count as exterior.
pub fn direction_passes(mask: &DomainMask, spec: &ConeSpec, x0: [f64; 2], n: [f64; 2]) -> bool {
    let grid = mask.grid();
    let offsets = cone_offsets(grid, n, spec.rho, spec.theta);
    let inside = |idx: Option<usize>| idx.is_some_and(|k| mask.contains(k));
    let h = grid.spacing();
    let reach = (3.0 * spec.rho / h).ceil() as i64 + 1;
    let l = grid.to_lattice(x0);
    let (ci, cj) = (l[0].round() as i64, l[1].round() as i64);
    let jr = if grid.dim() == 2 { reach } else { 0 };
    let [nx, ny] = grid.counts();
    for j in (cj - jr).max(0)..=(cj + jr).min(ny as i64 - 1) {
        for i in (ci - reach).max(0)..=(ci + reach).min(nx as i64 - 1) {
            let y = grid.index(i as usize, j as usize);
            let p = grid.point(y);
            let d = ((p[0] - x0[0]).powi(2) + (p[1] - x0[1]).powi(2)).sqrt();
            if d >= 3.0 * spec.rho {
                continue;
            }
            let y_in = mask.contains(y);
            for &(di, dj) in &offsets {
                if y_in {
                    // i) y ∈ Ω ⇒ y - v ∈ Ω
                    if !inside(grid.offset(y, -di, -dj)) {
                        return false;
                    }
                } else if inside(grid.offset(y, di, dj)) {
                    // ii) y ∉ Ω ⇒ y + v ∉ Ω
                    return false;
                }
            }
        }
    }
    true
}

/// First probe direction satisfying the cone conditions at `x0`, if any.
///
/// This certifies membership of the direction in `𝒩_{ρ,θ}(x0, Ω)` over the
/// probe set only: a `None` does not prove that no direction exists.
pub fn certify_cone(mask: &DomainMask, spec: &ConeSpec, x0: [f64; 2]) -> Option<[f64; 2]> {
    spec.probe_directions
        .iter()
        .copied()
        .find(|&n| direction_passes(mask, spec, x0, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn spec_validation() {
        assert!(ConeSpec::uniform(2, 0.1, 0.0).is_err());
        assert!(ConeSpec::uniform(2, 0.1, FRAC_PI_2).is_err());
        assert!(ConeSpec::new(0.1, 0.5, vec![[1.0, 0.0]]).is_err());
        assert_eq!(ConeSpec::uniform(2, 0.1, 0.5).unwrap().probe_directions.len(), 32);
    }

    #[test]
    fn interval_endpoint_uses_outward_direction() {
        let g = Grid::line(-2.0, 1.0 / 128.0, 513).unwrap();
        let m = DomainMask::from_predicate(g, |p| p[0].abs() < 1.0 - 1e-12).unwrap();
        let spec = ConeSpec::uniform(1, 0.2, FRAC_PI_4).unwrap();
        assert_eq!(certify_cone(&m, &spec, [1.0, 0.0]), Some([1.0, 0.0]));
        assert_eq!(certify_cone(&m, &spec, [-1.0, 0.0]), Some([-1.0, 0.0]));
        assert!(!direction_passes(&m, &spec, [1.0, 0.0], [-1.0, 0.0]));
    }

    #[test]
    fn deep_interior_accepts_every_direction() {
        let g = Grid::line(-2.0, 1.0 / 128.0, 513).unwrap();
        let m = DomainMask::from_predicate(g, |p| p[0].abs() < 1.0 - 1e-12).unwrap();
        let spec = ConeSpec::uniform(1, 0.2, FRAC_PI_4).unwrap();
        for &n in &spec.probe_directions {
            assert!(direction_passes(&m, &spec, [0.0, 0.0], n));
        }
    }
}
