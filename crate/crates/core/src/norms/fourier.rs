use std::f64::consts::PI;

use rustfft::num_complex::Complex;

use crate::error::{invalid, Result};
use crate::fourier::FourierBox;
use crate::function::GridFunction;
use crate::geometry::Grid;

/// The box extended to the right (and upwards) to at least twice its size,
/// with power-of-two counts; the Fourier norms treat it as periodic.
pub fn padded_grid(grid: &Grid) -> Result<Grid> {
    let [nx, ny] = grid.counts();
    let counts = [
        (2 * nx).next_power_of_two(),
        if grid.dim() == 2 { (2 * ny).next_power_of_two() } else { 1 },
    ];
    Grid::new(grid.dim(), &grid.origin()[..grid.dim()], grid.spacing(), &counts[..grid.dim()])
}

/// Zero extension onto [`padded_grid`].
pub fn pad(f: &GridFunction) -> Result<GridFunction> {
    let grid = padded_grid(f.grid())?;
    let [nx, ny] = f.grid().counts();
    let [mx, _] = grid.counts();
    let mut values = vec![0.0; grid.len()];
    for j in 0..ny {
        for i in 0..nx {
            values[i + j * mx] = f.values()[i + j * nx];
        }
    }
    GridFunction::free(grid, values)
}

/// `|ξ|²` at every bin of a periodic grid.
fn frequencies_squared(grid: &Grid) -> Vec<f64> {
    let [mx, my] = grid.counts();
    let h = grid.spacing();
    let kx = 2.0 * PI / (mx as f64 * h);
    let ky = 2.0 * PI / (my as f64 * h);
    let mut out = Vec::with_capacity(mx * my);
    for j in 0..my {
        let y = ky * FourierBox::signed(j, my);
        for i in 0..mx {
            let x = kx * FourierBox::signed(i, mx);
            out.push(x * x + y * y);
        }
    }
    out
}

fn spectrum(f: &GridFunction) -> (FourierBox, Vec<Complex<f64>>) {
    let counts = f.grid().counts();
    let fourier = FourierBox::new(counts);
    let mut data = fourier.embed(f.values(), counts);
    fourier.forward(&mut data);
    (fourier, data)
}

/// `(2π)^{-N} ∫ (1 + |ξ|²)^{-s} |f̂(ξ)|² dξ` on the padded box, square-rooted.
/// At `s = 0` this is the L² norm by Parseval.
pub fn hminus_norm(f: &GridFunction, s: f64) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(invalid(format!("order must be non-negative, got {s}")));
    }
    let padded = pad(f)?;
    let (fourier, data) = spectrum(&padded);
    let xi2 = frequencies_squared(padded.grid());
    let sum: f64 = data
        .iter()
        .zip(&xi2)
        .map(|(z, &k)| (1.0 + k).powf(-s) * z.norm_sqr())
        .sum();
    Ok((f.grid().cell_volume() * sum / fourier.len() as f64).sqrt())
}

fn periodic_multiplier(f: &GridFunction, power: f64) -> Result<GridFunction> {
    let (fourier, mut data) = spectrum(f);
    let xi2 = frequencies_squared(f.grid());
    for (z, &k) in data.iter_mut().zip(&xi2) {
        *z *= (1.0 + k).powf(power);
    }
    fourier.inverse(&mut data);
    GridFunction::free(*f.grid(), fourier.extract(&data, f.grid().counts()))
}

/// Solves `(1 + |ξ|²)^s û = f̂` on the padded box; the result lives on
/// [`padded_grid`].
pub fn bessel_solve(f: &GridFunction, s: f64) -> Result<GridFunction> {
    if !(s >= 0.0) {
        return Err(invalid(format!("order must be non-negative, got {s}")));
    }
    periodic_multiplier(&pad(f)?, -s)
}

/// Applies `(1 + |ξ|²)^s` on the grid of `u`, taken as periodic; undoes
/// [`bessel_solve`].
pub fn bessel_apply(u: &GridFunction, s: f64) -> Result<GridFunction> {
    if !(s >= 0.0) {
        return Err(invalid(format!("order must be non-negative, got {s}")));
    }
    periodic_multiplier(u, s)
}
