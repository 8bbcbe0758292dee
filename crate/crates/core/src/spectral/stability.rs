use nalgebra::{Cholesky, DMatrix, SymmetricEigen};
use serde::Serialize;

use super::eigen::{eigenpairs, EigenPair, DEFAULT_EIGEN_TOL};
use crate::error::{Error, Result};
use crate::function::GridFunction;
use crate::geometry::DomainMask;
use crate::operator::FracStiffness;

/// Eigenvalues of two nested masks and whether `λ_n(inner) ≥ λ_n(outer)`
/// holds for each `n` up to the solver tolerance.
#[derive(Debug, Clone, Serialize)]
pub struct MonotonicityReport {
    pub inner: Vec<f64>,
    pub outer: Vec<f64>,
    pub tolerance: f64,
    pub holds: bool,
}

pub fn monotonicity_check(
    op: &FracStiffness,
    inner: &DomainMask,
    outer: &DomainMask,
    count: usize,
) -> Result<MonotonicityReport> {
    if !inner.is_subset_of(outer) {
        return Err(Error::NotNested("inner mask is not contained in the outer mask".into()));
    }
    let tol = DEFAULT_EIGEN_TOL;
    let a = eigenpairs(op, inner, count, tol)?.lambdas();
    let b = eigenpairs(op, outer, count, tol)?.lambdas();
    let holds = a.iter().zip(&b).all(|(x, y)| *x >= *y - 2.0 * tol * y.max(1.0));
    Ok(MonotonicityReport {
        inner: a,
        outer: b,
        tolerance: tol,
        holds,
    })
}

/// Cholesky factor of the energy Gram matrix of `funcs`.
fn energy_factor(op: &FracStiffness, funcs: &[GridFunction]) -> Result<(DMatrix<f64>, Vec<Vec<f64>>)> {
    if funcs.is_empty() {
        return Err(Error::RankDeficient("empty family".into()));
    }
    let images: Vec<Vec<f64>> = funcs.iter().map(|f| op.apply_values(f.values())).collect();
    let vol = op.grid().cell_volume();
    let k = funcs.len();
    let gram = DMatrix::from_fn(k, k, |i, j| {
        let a: f64 = funcs[i].values().iter().zip(&images[j]).map(|(x, y)| x * y).sum();
        let b: f64 = funcs[j].values().iter().zip(&images[i]).map(|(x, y)| x * y).sum();
        0.5 * vol * (a + b)
    });
    let eig = SymmetricEigen::new(gram.clone());
    let max = eig.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let min = eig.eigenvalues.iter().fold(f64::INFINITY, |m, v| m.min(*v));
    if !(min > 1e-12 * max) {
        return Err(Error::RankDeficient(format!(
            "energy Gram matrix has eigenvalues in [{min:e}, {max:e}]"
        )));
    }
    let chol = Cholesky::new(gram).ok_or_else(|| Error::RankDeficient("Cholesky failed".into()))?;
    Ok((chol.l(), images))
}

/// `sup_{x ∈ M, ‖x‖_s = 1} dist_s(x, N)` in the energy inner product
/// `[u, v] = spacing^N uᵀAv`, from the singular values of the cross Gram
/// matrix between energy-orthonormal bases of both spans.
pub fn eigenspace_excess(op: &FracStiffness, m: &[GridFunction], n: &[GridFunction]) -> Result<f64> {
    for f in m.iter().chain(n) {
        op.grid().ensure_same(f.grid())?;
    }
    let (lm, _) = energy_factor(op, m)?;
    let (ln, images_n) = energy_factor(op, n)?;
    if m.len() > n.len() {
        return Ok(1.0);
    }
    let vol = op.grid().cell_volume();
    let cross = DMatrix::from_fn(m.len(), n.len(), |i, j| {
        vol * m[i].values().iter().zip(&images_n[j]).map(|(x, y)| x * y).sum::<f64>()
    });
    // C = L_M^{-1} G_MN L_N^{-T}
    let left = lm
        .solve_lower_triangular(&cross)
        .ok_or_else(|| Error::RankDeficient("triangular solve failed".into()))?;
    let c = ln
        .solve_lower_triangular(&left.transpose())
        .ok_or_else(|| Error::RankDeficient("triangular solve failed".into()))?
        .transpose();
    let sigma = c.singular_values();
    let smallest = sigma.iter().fold(f64::INFINITY, |a, b| a.min(*b)).min(1.0);
    Ok((1.0 - smallest * smallest).max(0.0).sqrt())
}

/// Flips `b` when its energy inner product with `a` is negative.
pub fn align_principal(op: &FracStiffness, a: &EigenPair, b: &EigenPair) -> Result<(EigenPair, EigenPair)> {
    let mut b = b.clone();
    if op.form(&a.u, &b.u)? < 0.0 {
        b.u = b.u.scale(-1.0);
    }
    Ok((a.clone(), b))
}
