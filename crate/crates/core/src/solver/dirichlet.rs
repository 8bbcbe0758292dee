use crate::error::{Error, Result};
use crate::function::GridFunction;
use crate::geometry::{DomainMask, Grid};
use crate::operator::FracStiffness;

use super::cg::conjugate_gradient;

pub const DEFAULT_TOL: f64 = 1e-10;

/// Diagnostics of a Dirichlet solve.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SolveReport {
    pub iterations: usize,
    pub residual: f64,
    pub energy_norm: f64,
    pub l2_norm: f64,
}

/// Dirichlet solver bound to one assembled operator; reuse it across masks
/// on the same grid.
#[derive(Debug, Clone)]
pub struct DirichletSolver {
    op: FracStiffness,
}

impl DirichletSolver {
    pub fn new(grid: &Grid, s: f64) -> Result<Self> {
        Ok(Self {
            op: FracStiffness::assemble(grid, s)?,
        })
    }

    pub fn from_operator(op: FracStiffness) -> Self {
        Self { op }
    }

    pub fn operator(&self) -> &FracStiffness {
        &self.op
    }

    /// Solves `A_Ω u = f` on the nodes of `mask` with `u = 0` elsewhere.
    pub fn solve(&self, mask: &DomainMask, f: &GridFunction, tol: f64) -> Result<(GridFunction, SolveReport)> {
        mask.grid().ensure_same(f.grid())?;
        if f.values().iter().any(|v| !v.is_finite()) {
            return Err(crate::error::invalid("right-hand side is not finite"));
        }
        let rhs = f.restrict(mask)?;
        self.solve_restricted(mask, &rhs, tol)
    }

    fn solve_restricted(&self, mask: &DomainMask, rhs: &[f64], tol: f64) -> Result<(GridFunction, SolveReport)> {
        if !(tol > 0.0) {
            return Err(crate::error::invalid(format!("tolerance must be positive, got {tol}")));
        }
        if mask.is_empty() {
            return Err(Error::EmptySet("Dirichlet solve on an empty mask".into()));
        }
        let restricted = self.op.restrict(mask)?;
        let diagonal = vec![restricted.diagonal(); restricted.len()];
        let cap = 10 * restricted.len();
        let (x, outcome) = conjugate_gradient(|v| restricted.apply(v), &diagonal, rhs, None, tol, cap)?;
        let ax = restricted.apply(&x);
        let vol = mask.grid().cell_volume();
        let energy = vol * x.iter().zip(&ax).map(|(a, b)| a * b).sum::<f64>();
        let u = GridFunction::from_restricted(mask, &x)?;
        let report = SolveReport {
            iterations: outcome.iterations,
            residual: outcome.residual,
            energy_norm: energy.max(0.0).sqrt(),
            l2_norm: u.l2_norm(),
        };
        Ok((u, report))
    }

    /// Energy projection of `u` onto functions supported on `target`: solves
    /// `A_target v = (A u)|_target`.
    pub fn project(&self, u: &GridFunction, target: &DomainMask, tol: f64) -> Result<GridFunction> {
        target.grid().ensure_same(u.grid())?;
        let nested = match u.support() {
            Some(source) => target.is_subset_of(source),
            None => false,
        };
        if !nested {
            return Err(Error::NotNested(
                "projection target must lie inside the support mask of u".into(),
            ));
        }
        let au = self.op.apply_values(u.values());
        let rhs: Vec<f64> = target.indices().into_iter().map(|k| au[k]).collect();
        Ok(self.solve_restricted(target, &rhs, tol)?.0)
    }
}

/// One-shot Dirichlet solve; assembles the operator on the mask's grid.
pub fn solve_dirichlet(mask: &DomainMask, s: f64, f: &GridFunction, tol: f64) -> Result<(GridFunction, SolveReport)> {
    DirichletSolver::new(mask.grid(), s)?.solve(mask, f, tol)
}

/// One-shot energy projection.
pub fn project(u: &GridFunction, target: &DomainMask, s: f64, tol: f64) -> Result<GridFunction> {
    DirichletSolver::new(target.grid(), s)?.project(u, target, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{erode, DomainSpec};

    fn interval(n: usize) -> DomainMask {
        DomainSpec::Interval { a: -1.0, b: 1.0 }.discretize(n).unwrap()
    }

    #[test]
    fn zero_data_gives_zero() {
        let m = interval(64);
        let f = GridFunction::zeros(*m.grid());
        let (u, rep) = solve_dirichlet(&m, 0.5, &f, 1e-10).unwrap();
        assert_eq!(u.max_abs(), 0.0);
        assert_eq!(rep.iterations, 0);
    }

    #[test]
    fn half_order_interval_matches_closed_form() {
        let m = interval(512);
        let f = GridFunction::from_fn(&m, |_| 1.0);
        let (u, rep) = solve_dirichlet(&m, 0.5, &f, 1e-10).unwrap();
        assert!(rep.residual <= 1e-10);
        let exact = GridFunction::from_fn(&m, |p| (1.0 - p[0] * p[0]).max(0.0).sqrt());
        let err = u.sub(&exact).unwrap().l2_norm() / exact.l2_norm();
        assert!(err < 0.02, "{err}");
    }

    #[test]
    fn eroded_domain_gives_smaller_solution() {
        let m = interval(256);
        let inner = erode(&m, 0.2).unwrap();
        let solver = DirichletSolver::new(m.grid(), 0.5).unwrap();
        let one = GridFunction::free_from_fn(*m.grid(), |_| 1.0);
        let (big, _) = solver.solve(&m, &one, 1e-10).unwrap();
        let (small, _) = solver.solve(&inner, &one, 1e-10).unwrap();
        assert!(small.l2_norm() < big.l2_norm());
    }

    #[test]
    fn projection_onto_same_mask_is_identity() {
        let m = interval(128);
        let solver = DirichletSolver::new(m.grid(), 0.3).unwrap();
        let u = GridFunction::from_fn(&m, |p| (1.0 - p[0] * p[0]).powi(2));
        let pu = solver.project(&u, &m, 1e-12).unwrap();
        assert!(pu.sub(&u).unwrap().max_abs() < 1e-9);
    }

    #[test]
    fn projection_requires_nesting() {
        let m = interval(128);
        let u = GridFunction::from_fn(&erode(&m, 0.3).unwrap(), |_| 1.0);
        assert!(matches!(project(&u, &m, 0.5, 1e-8), Err(Error::NotNested(_))));
    }
}
