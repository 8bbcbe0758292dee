use crate::error::{Error, Result};

/// Outcome of a conjugate gradient run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CgOutcome {
    pub iterations: usize,
    /// Final relative residual `‖b - Ax‖ / ‖b‖`, recomputed from scratch.
    pub residual: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Jacobi-preconditioned conjugate gradients for an SPD operator.
///
/// Starts from `x0` when given. Fails with the reached residual if
/// `max_iter` iterations do not bring the relative residual below `tol`.
pub fn conjugate_gradient(
    apply: impl Fn(&[f64]) -> Vec<f64>,
    diagonal: &[f64],
    rhs: &[f64],
    x0: Option<&[f64]>,
    tol: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, CgOutcome)> {
    let n = rhs.len();
    let b_norm = dot(rhs, rhs).sqrt();
    if b_norm == 0.0 {
        return Ok((
            vec![0.0; n],
            CgOutcome {
                iterations: 0,
                residual: 0.0,
            },
        ));
    }
    let mut x = x0.map_or_else(|| vec![0.0; n], <[f64]>::to_vec);
    let ax = apply(&x);
    let mut r: Vec<f64> = rhs.iter().zip(&ax).map(|(b, a)| b - a).collect();
    let mut z: Vec<f64> = r.iter().zip(diagonal).map(|(r, d)| r / d).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut iterations = 0;
    while dot(&r, &r).sqrt() > tol * b_norm {
        if iterations == max_iter {
            return Err(Error::NoConvergence {
                iterations,
                residual: dot(&r, &r).sqrt() / b_norm,
            });
        }
        let ap = apply(&p);
        let alpha = rz / dot(&p, &ap);
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        for i in 0..n {
            z[i] = r[i] / diagonal[i];
        }
        let rz_next = dot(&r, &z);
        let beta = rz_next / rz;
        rz = rz_next;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
        iterations += 1;
    }
    let ax = apply(&x);
    let true_residual = rhs
        .iter()
        .zip(&ax)
        .map(|(b, a)| (b - a) * (b - a))
        .sum::<f64>()
        .sqrt()
        / b_norm;
    Ok((
        x,
        CgOutcome {
            iterations,
            residual: true_residual,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_spd_system() {
        // tridiagonal [-1, 2.5, -1]
        let n = 30;
        let apply = |x: &[f64]| -> Vec<f64> {
            (0..n)
                .map(|i| {
                    let left = if i > 0 { x[i - 1] } else { 0.0 };
                    let right = if i + 1 < n { x[i + 1] } else { 0.0 };
                    2.5 * x[i] - left - right
                })
                .collect()
        };
        let rhs: Vec<f64> = (0..n).map(|i| (i as f64).cos()).collect();
        let (x, out) = conjugate_gradient(apply, &vec![2.5; n], &rhs, None, 1e-12, 300).unwrap();
        assert!(out.residual < 1e-11);
        let back = apply(&x);
        for (a, b) in back.iter().zip(&rhs) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn reports_non_convergence() {
        let apply = |x: &[f64]| -> Vec<f64> { x.iter().enumerate().map(|(i, v)| (1 + i) as f64 * v).collect() };
        let rhs = vec![1.0; 50];
        let err = conjugate_gradient(apply, &vec![1.0; 50], &rhs, None, 1e-14, 2).unwrap_err();
        assert!(matches!(err, Error::NoConvergence { iterations: 2, .. }));
    }
}
