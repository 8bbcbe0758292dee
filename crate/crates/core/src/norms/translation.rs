use crate::error::{invalid, Result};
use crate::function::GridFunction;
use crate::geometry::Grid;

/// A Lipschitz cut-off `0 ≤ φ ≤ 1` on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CutoffFn {
    pub phi: GridFunction,
    pub lipschitz: f64,
}

impl CutoffFn {
    pub fn new(phi: GridFunction, lipschitz: f64) -> Result<Self> {
        if phi.values().iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(invalid("cut-off values must lie in [0, 1]"));
        }
        if !(lipschitz >= 0.0) {
            return Err(invalid("Lipschitz constant must be non-negative"));
        }
        Ok(Self { phi, lipschitz })
    }

    pub fn constant(grid: Grid, value: f64) -> Result<Self> {
        Self::new(GridFunction::free_from_fn(grid, |_| value), 0.0)
    }

    /// Equal to one on `B_{r/2}(center)`, decaying linearly to zero on the
    /// sphere of radius `r`.
    pub fn ramp(grid: Grid, center: [f64; 2], r: f64) -> Result<Self> {
        if !(r > 0.0) {
            return Err(invalid(format!("ramp radius must be positive, got {r}")));
        }
        let phi = GridFunction::free_from_fn(grid, |p| {
            let d = ((p[0] - center[0]).powi(2) + (p[1] - center[1]).powi(2)).sqrt();
            (2.0 - 2.0 * d / r).clamp(0.0, 1.0)
        });
        Self::new(phi, 2.0 / r)
    }

    /// `true` when `φ` vanishes at every node outside the open ball.
    pub fn supported_in_ball(&self, center: [f64; 2], r: f64) -> bool {
        let grid = self.phi.grid();
        self.phi.nonzero_nodes().all(|k| {
            let p = grid.point(k);
            ((p[0] - center[0]).powi(2) + (p[1] - center[1]).powi(2)).sqrt() < r
        })
    }
}

/// Distance from the non-zero nodes of `u` to the edge of its box.
pub fn box_margin(u: &GridFunction) -> f64 {
    let grid = u.grid();
    let [nx, ny] = grid.counts();
    let h = grid.spacing();
    u.nonzero_nodes()
        .map(|k| {
            let (i, j) = grid.coords(k);
            let mut cells = i.min(nx - 1 - i);
            if grid.dim() == 2 {
                cells = cells.min(j.min(ny - 1 - j));
            }
            cells as f64 * h
        })
        .fold(f64::INFINITY, f64::min)
}

/// `u_h(x) = u(x + h)` by linear interpolation; zero where `x + h` leaves the
/// box. Lattice-aligned shifts are exact index moves.
pub fn translate(u: &GridFunction, shift: [f64; 2]) -> Result<GridFunction> {
    let grid = *u.grid();
    let shift = if grid.dim() == 1 { [shift[0], 0.0] } else { shift };
    let len = (shift[0] * shift[0] + shift[1] * shift[1]).sqrt();
    let margin = box_margin(u);
    if len >= margin {
        return Err(invalid(format!(
            "shift of length {len} exceeds the box margin {margin}"
        )));
    }
    let h = grid.spacing();
    GridFunction::free(grid, u.shifted_values([shift[0] / h, shift[1] / h]))
}

/// `T_h u = φ u_h + (1 - φ) u`.
pub fn localized_translate(u: &GridFunction, shift: [f64; 2], cutoff: &CutoffFn) -> Result<GridFunction> {
    u.grid().ensure_same(cutoff.phi.grid())?;
    let uh = translate(u, shift)?;
    let values = u
        .values()
        .iter()
        .zip(uh.values())
        .zip(cutoff.phi.values())
        .map(|((&a, &b), &p)| p * b + (1.0 - p) * a)
        .collect();
    GridFunction::free(*u.grid(), values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::DomainSpec;

    fn bump() -> GridFunction {
        let m = DomainSpec::Interval { a: -1.0, b: 1.0 }.discretize(256).unwrap();
        GridFunction::from_fn(&m, |p| (1.0 - p[0] * p[0]).powi(2))
    }

    #[test]
    fn zero_shift_is_identity() {
        let u = bump();
        assert_eq!(translate(&u, [0.0, 0.0]).unwrap().values(), u.values());
    }

    #[test]
    fn lattice_shift_moves_indices() {
        let u = bump();
        let h = u.grid().spacing();
        let v = translate(&u, [3.0 * h, 0.0]).unwrap();
        let n = u.values().len();
        for k in 0..n - 3 {
            assert_eq!(v.values()[k], u.values()[k + 3]);
        }
    }

    #[test]
    fn margin_is_enforced() {
        let u = bump();
        assert!(translate(&u, [1.5, 0.0]).is_err());
    }

    #[test]
    fn localized_extremes() {
        let u = bump();
        let g = *u.grid();
        let shift = [0.1, 0.0];
        let zero = CutoffFn::constant(g, 0.0).unwrap();
        let one = CutoffFn::constant(g, 1.0).unwrap();
        assert_eq!(localized_translate(&u, shift, &zero).unwrap().values(), u.values());
        assert_eq!(
            localized_translate(&u, shift, &one).unwrap().values(),
            translate(&u, shift).unwrap().values()
        );
    }

    #[test]
    fn localized_difference_is_cut_off_difference() {
        let u = bump();
        let g = *u.grid();
        let phi = CutoffFn::ramp(g, [0.3, 0.0], 0.8).unwrap();
        let shift = [0.037, 0.0];
        let t = localized_translate(&u, shift, &phi).unwrap();
        let uh = translate(&u, shift).unwrap();
        for k in 0..g.len() {
            let lhs = t.values()[k] - u.values()[k];
            let rhs = phi.phi.values()[k] * (uh.values()[k] - u.values()[k]);
            assert!((lhs - rhs).abs() <= 4.0 * f64::EPSILON);
        }
        let lhs = t.sub(&u).unwrap().l2_norm();
        assert!(lhs <= uh.sub(&u).unwrap().l2_norm());
    }

    #[test]
    fn ramp_is_supported_in_its_ball() {
        let g = Grid::plane([-2.0, -2.0], 0.05, [81, 81]).unwrap();
        let c = CutoffFn::ramp(g, [0.0, 0.0], 1.0).unwrap();
        assert!(c.supported_in_ball([0.0, 0.0], 1.0));
        assert_eq!(c.lipschitz, 2.0);
    }
}
