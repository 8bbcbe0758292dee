use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::function::GridFunction;
use crate::geometry::DomainMask;
use crate::operator::{FracStiffness, RestrictedStiffness};
use crate::solver::conjugate_gradient;

/// Masks with at most this many nodes use a dense eigensolve.
pub const DENSE_LIMIT: usize = 600;

/// Default bound on `‖Au - λu‖ / max(λ, 1)` for returned pairs.
pub const DEFAULT_EIGEN_TOL: f64 = 1e-8;

/// Relative gap below which neighbouring eigenvalues form a cluster.
pub const CLUSTER_GAP: f64 = 1e-6;

const SEED: u64 = 0x5eed_f4ac;
const INNER_TOL: f64 = 1e-12;
const MAX_KRYLOV_DIM: usize = 240;

/// An eigenvalue with its eigenfunction, normalised in L².
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub lambda: f64,
    pub u: GridFunction,
    /// `‖Au - λu‖_{L²(mask)}`.
    pub residual: f64,
}

/// Lowest eigenpairs of a restricted operator, in non-decreasing order.
#[derive(Debug, Clone)]
pub struct EigenBasis {
    pub pairs: Vec<EigenPair>,
    /// `max_{i,j} |⟨u_i, u_j⟩ - δ_ij|`.
    pub orthogonality_residual: f64,
}

impl EigenBasis {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn lambdas(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.lambda).collect()
    }

    pub fn functions(&self) -> Vec<GridFunction> {
        self.pairs.iter().map(|p| p.u.clone()).collect()
    }

    /// Index groups of eigenvalues closer than [`CLUSTER_GAP`] relative. The
    /// basis of a multi-member cluster is orthonormal but its rotation is
    /// arbitrary.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = Vec::new();
        for (i, p) in self.pairs.iter().enumerate() {
            match out.last_mut() {
                Some(last) if {
                    let prev = self.pairs[*last.last().unwrap()].lambda;
                    (p.lambda - prev) <= CLUSTER_GAP * p.lambda.abs()
                } =>
                {
                    last.push(i)
                }
                _ => out.push(vec![i]),
            }
        }
        out
    }
}

/// Lowest `count` eigenpairs of the operator restricted to `mask`.
pub fn eigenpairs(op: &FracStiffness, mask: &DomainMask, count: usize, tol: f64) -> Result<EigenBasis> {
    if count == 0 {
        return Err(crate::error::invalid("at least one eigenpair must be requested"));
    }
    if mask.is_empty() {
        return Err(Error::EmptySet("eigenproblem on an empty mask".into()));
    }
    if count >= mask.count() {
        return Err(crate::error::invalid(format!(
            "{count} eigenpairs requested on a mask of {} nodes",
            mask.count()
        )));
    }
    let restricted = op.restrict(mask)?;
    let (values, vectors) = if mask.count() <= DENSE_LIMIT {
        dense(op, mask, count)?
    } else {
        block_krylov(&restricted, count, tol)?
    };
    assemble_basis(&restricted, mask, values, vectors, tol)
}

fn dense(op: &FracStiffness, mask: &DomainMask, count: usize) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let matrix = op.restricted_matrix(mask)?;
    let eig = SymmetricEigen::new(matrix);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order[..count].iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = order[..count]
        .iter()
        .map(|&k| eig.eigenvectors.column(k).iter().copied().collect())
        .collect();
    Ok((values, vectors))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Orthonormalises `v` against `basis` (two Gram–Schmidt passes); `None` if
/// nothing independent is left.
fn orthonormalize(mut v: Vec<f64>, basis: &[Vec<f64>]) -> Option<Vec<f64>> {
    let start = dot(&v, &v).sqrt();
    for _ in 0..2 {
        for b in basis {
            let c = dot(&v, b);
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
    }
    let norm = dot(&v, &v).sqrt();
    if norm <= 1e-10 * start || norm == 0.0 {
        return None;
    }
    v.iter_mut().for_each(|x| *x /= norm);
    Some(v)
}

/// Shift-invert block Krylov iteration with full reorthogonalisation: the
/// subspace is grown by applying `A^{-1}` (inner conjugate gradients) to the
/// newest block, and Ritz pairs are extracted with `A` itself.
fn block_krylov(op: &RestrictedStiffness, count: usize, tol: f64) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = op.len();
    let block = count.clamp(3, 8);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let diagonal = vec![op.diagonal(); n];
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut images: Vec<Vec<f64>> = Vec::new();
    let mut newest: Vec<Vec<f64>> = (0..block)
        .map(|_| (0..n).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    let mut worst = f64::INFINITY;
    loop {
        let mut added = Vec::new();
        for v in newest.drain(..) {
            if let Some(q) = orthonormalize(v, &basis) {
                images.push(op.apply(&q));
                basis.push(q.clone());
                added.push(q);
            }
        }
        let m = basis.len();
        if m >= count {
            let h = DMatrix::from_fn(m, m, |i, j| 0.5 * (dot(&basis[i], &images[j]) + dot(&basis[j], &images[i])));
            let eig = SymmetricEigen::new(h);
            let mut order: Vec<usize> = (0..m).collect();
            order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
            let mut values = Vec::with_capacity(count);
            let mut vectors = Vec::with_capacity(count);
            worst = 0.0f64;
            for &k in &order[..count] {
                let theta = eig.eigenvalues[k];
                let y = eig.eigenvectors.column(k);
                let mut u = vec![0.0; n];
                let mut au = vec![0.0; n];
                for (c, (b, img)) in y.iter().zip(basis.iter().zip(&images)) {
                    u.iter_mut().zip(b).for_each(|(x, v)| *x += c * v);
                    au.iter_mut().zip(img).for_each(|(x, v)| *x += c * v);
                }
                let r = au.iter().zip(&u).map(|(a, v)| (a - theta * v).powi(2)).sum::<f64>().sqrt();
                worst = worst.max(r / theta.abs().max(1.0));
                values.push(theta);
                vectors.push(u);
            }
            if worst <= 0.1 * tol {
                return Ok((values, vectors));
            }
        }
        if added.is_empty() || m >= n.min(MAX_KRYLOV_DIM) {
            return Err(Error::NoConvergence {
                iterations: m,
                residual: worst,
            });
        }
        for v in &added {
            let (x, _) = conjugate_gradient(|w| op.apply(w), &diagonal, v, None, INNER_TOL, 10 * n)?;
            newest.push(x);
        }
    }
}

fn assemble_basis(
    op: &RestrictedStiffness,
    mask: &DomainMask,
    values: Vec<f64>,
    vectors: Vec<Vec<f64>>,
    tol: f64,
) -> Result<EigenBasis> {
    let vol = mask.grid().cell_volume();
    let mut pairs = Vec::with_capacity(values.len());
    for (lambda, mut v) in values.into_iter().zip(vectors) {
        let norm = (vol * dot(&v, &v)).sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
        fix_sign(&mut v);
        let av = op.apply(&v);
        let residual = (vol * av.iter().zip(&v).map(|(a, x)| (a - lambda * x).powi(2)).sum::<f64>()).sqrt();
        if !(lambda > 0.0) || residual > tol * lambda.max(1.0) {
            return Err(Error::NoConvergence {
                iterations: 0,
                residual: residual / lambda.abs().max(1.0),
            });
        }
        pairs.push(EigenPair {
            lambda,
            u: GridFunction::from_restricted(mask, &v)?,
            residual,
        });
    }
    let mut orthogonality_residual = 0.0f64;
    for i in 0..pairs.len() {
        for j in 0..=i {
            let ip = pairs[i].u.dot(&pairs[j].u)?;
            let target = if i == j { 1.0 } else { 0.0 };
            orthogonality_residual = orthogonality_residual.max((ip - target).abs());
        }
    }
    Ok(EigenBasis {
        pairs,
        orthogonality_residual,
    })
}

/// Makes the nodal sum positive, or the first clearly non-zero entry when the
/// sum is negligible.
fn fix_sign(v: &mut [f64]) {
    let sum: f64 = v.iter().sum();
    let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let flip = if sum.abs() > 1e-8 * scale * (v.len() as f64).sqrt() {
        sum < 0.0
    } else {
        v.iter().find(|x| x.abs() > 1e-3 * scale).is_some_and(|x| *x < 0.0)
    };
    if flip {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// `spacing^N uᵀAu / spacing^N uᵀu`.
pub fn rayleigh(op: &FracStiffness, u: &GridFunction) -> Result<f64> {
    let mass = u.dot(u)?;
    if mass == 0.0 {
        return Err(crate::error::invalid("Rayleigh quotient of the zero function"));
    }
    Ok(op.form(u, u)? / mass)
}
