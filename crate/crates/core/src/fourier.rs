use std::fmt;
use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

/// Forward and inverse complex FFTs on a rectangular box of `dims[0] × dims[1]`
/// samples stored with the first axis fastest. A 1D box has `dims[1] == 1`.
#[derive(Clone)]
pub struct FourierBox {
    dims: [usize; 2],
    forward: [Arc<dyn Fft<f64>>; 2],
    inverse: [Arc<dyn Fft<f64>>; 2],
}

impl fmt::Debug for FourierBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FourierBox").field("dims", &self.dims).finish()
    }
}

impl FourierBox {
    pub fn new(dims: [usize; 2]) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            dims,
            forward: [planner.plan_fft_forward(dims[0]), planner.plan_fft_forward(dims[1])],
            inverse: [planner.plan_fft_inverse(dims[0]), planner.plan_fft_inverse(dims[1])],
        }
    }

    pub fn dims(&self) -> [usize; 2] {
        self.dims
    }

    pub fn len(&self) -> usize {
        self.dims[0] * self.dims[1]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Signed frequency index of bin `k` on an axis of length `m`.
    pub fn signed(k: usize, m: usize) -> f64 {
        if k <= m / 2 {
            k as f64
        } else {
            k as f64 - m as f64
        }
    }

    /// Unnormalised forward transform in place.
    pub fn forward(&self, data: &mut [Complex<f64>]) {
        self.run(data, &self.forward);
    }

    /// Inverse transform in place, including the `1/len` factor.
    pub fn inverse(&self, data: &mut [Complex<f64>]) {
        self.run(data, &self.inverse);
        let norm = 1.0 / self.len() as f64;
        data.iter_mut().for_each(|z| *z *= norm);
    }

    fn run(&self, data: &mut [Complex<f64>], plans: &[Arc<dyn Fft<f64>>; 2]) {
        let [mx, my] = self.dims;
        assert_eq!(data.len(), mx * my);
        plans[0].process(data);
        if my > 1 {
            let mut column = vec![Complex::new(0.0, 0.0); my];
            for i in 0..mx {
                for (j, z) in column.iter_mut().enumerate() {
                    *z = data[i + j * mx];
                }
                plans[1].process(&mut column);
                for (j, z) in column.iter().enumerate() {
                    data[i + j * mx] = *z;
                }
            }
        }
    }

    /// Embeds a real `[nx, ny]` block at the origin of the box, zero elsewhere.
    pub fn embed(&self, values: &[f64], counts: [usize; 2]) -> Vec<Complex<f64>> {
        let [mx, _] = self.dims;
        let mut data = vec![Complex::new(0.0, 0.0); self.len()];
        for j in 0..counts[1] {
            for i in 0..counts[0] {
                data[i + j * mx].re = values[i + j * counts[0]];
            }
        }
        data
    }

    /// Real part of the leading `[nx, ny]` block.
    pub fn extract(&self, data: &[Complex<f64>], counts: [usize; 2]) -> Vec<f64> {
        let [mx, _] = self.dims;
        let mut out = Vec::with_capacity(counts[0] * counts[1]);
        for j in 0..counts[1] {
            for i in 0..counts[0] {
                out.push(data[i + j * mx].re);
            }
        }
        out
    }
}
